#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "sposs/lp.hpp"
#include "sposs/sparsifiers.hpp"
#include "sposs/stochastic.hpp"

namespace sposs {

struct HarnessOptions {
  std::size_t threads = 1;
  std::optional<std::size_t> trials_override;
  /// Directory that relative instance paths are resolved against.
  std::string base_dir = ".";
};

inline constexpr const char* kCsvHeader = "# sposs-csv v1";
inline constexpr const char* kCsvColumns =
    "instance,sparsifier,params,ratio_mean,ratio_stderr,degree_mean,opt_mean,"
    "trials,seed,notes";

/// Builds a sparsifier by name ("crs", "matroid_nss", "intersection_sample",
/// "matching_hybrid", "coverage_lp", "identity", "fixed").
SparseSet build_sparsifier(const SppInstance& inst, const std::string& name,
                           const nlohmann::json& params, std::uint64_t seed);

/// Resolves an experiment's "instance" entry: a path or an inline object.
SppInstance resolve_instance(const nlohmann::json& entry,
                             const std::string& base_dir);

/// `run`: one CSV row per experiment.
std::string run_experiments(const nlohmann::json& config,
                            const HarnessOptions& opts);
/// `balance`: per-element CRS balance plus a min row per experiment.
std::string run_balance(const nlohmann::json& config,
                        const HarnessOptions& opts);
/// `certify`: statistical checks of the exchange constructions.
std::string run_certify(const nlohmann::json& config,
                        const HarnessOptions& opts);
/// `lpcheck`: simplex against vertex enumeration on random small LPs.
std::string run_lpcheck(const nlohmann::json& config,
                        const HarnessOptions& opts);
/// `gen`: instance JSON from a generator descriptor.
std::string run_gen(const nlohmann::json& spec);

/// Best objective over all basic solutions (variables at a bound or free,
/// free count matching the number of tight rows). Small LPs only.
double lp_vertex_enumeration(const DenseLp& lp);

/// Quoted when needed.
std::string csv_field(const std::string& s);
/// Fixed formatting used by every CSV writer.
std::string csv_number(double v);

}  // namespace sposs
