#include "sposs/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "sposs/adversarial.hpp"
#include "sposs/certificates.hpp"
#include "sposs/crs.hpp"
#include "sposs/error.hpp"
#include "sposs/json_io.hpp"

namespace sposs {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultMarginalSamples = 2000;

std::uint64_t json_u64(const json& v, const char* what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) {
    return static_cast<std::uint64_t>(v.get<long long>());
  }
  throw ParseError(std::string("'") + what + "' must be a nonnegative integer");
}

double json_double(const json& params, const char* key) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw ParseError(std::string("missing parameter '") + key + "'");
  }
  if (!it->is_number()) {
    throw ParseError(std::string("parameter '") + key + "' must be a number");
  }
  return it->get<double>();
}

// Per-entry value, falling back to the config-level default.
std::uint64_t entry_u64(const json& entry, const json& config, const char* key) {
  if (entry.contains(key)) return json_u64(entry.at(key), key);
  if (config.contains(key)) return json_u64(config.at(key), key);
  throw ParseError(std::string("'") + key +
                   "' is required (per entry or at top level)");
}

std::size_t entry_trials(const json& entry, const json& config,
                         const HarnessOptions& opts) {
  if (opts.trials_override) return *opts.trials_override;
  return static_cast<std::size_t>(entry_u64(entry, config, "trials"));
}

const json& entries(const json& config, const char* key) {
  if (!config.is_object()) throw ParseError("config must be a JSON object");
  auto it = config.find(key);
  if (it == config.end() || !it->is_array()) {
    throw ParseError(std::string("config needs an array '") + key + "'");
  }
  return *it;
}

json params_of(const json& entry) {
  if (!entry.contains("params")) return json::object();
  const json& p = entry.at("params");
  if (!p.is_object()) throw ParseError("'params' must be an object");
  return p;
}

bool equal_weights(const SppInstance& inst) {
  if (!inst.objective.is_additive()) return false;
  const WeightVector& w = inst.objective.weights();
  for (double x : w) {
    if (x != w.front()) return false;
  }
  return true;
}

Marginals marginals_for(const SppInstance& inst, const json& params,
                        std::uint64_t seed) {
  std::string source = params.value("marginals", std::string("auto"));
  if (source == "auto") {
    if (inst.system.kind() == SetSystem::Kind::kRank1 && equal_weights(inst)) {
      source = "closed_form";
    } else if (inst.size() <= kExactMarginalLimit) {
      source = "exact";
    } else {
      source = "empirical";
    }
  }
  if (source == "closed_form") {
    if (inst.system.kind() != SetSystem::Kind::kRank1 || !equal_weights(inst)) {
      throw KindError("closed-form marginals need a rank1 system with equal weights");
    }
    return rank1_exact_marginals(inst.size(), inst.p);
  }
  if (source == "exact") return exact_marginals(inst);
  if (source == "empirical") {
    std::size_t samples = kDefaultMarginalSamples;
    if (params.contains("samples")) {
      samples = static_cast<std::size_t>(json_u64(params.at("samples"), "samples"));
    }
    std::optional<double> clamp;
    if (params.contains("clamp")) clamp = json_double(params, "clamp");
    return estimate_marginals(inst, samples,
                              derive_stream(seed, stream_tag::kMarginals), clamp);
  }
  throw ParseError("unknown marginals source '" + source + "'");
}

std::vector<double> balance_point(const SppInstance& inst, const json& entry,
                                  std::uint64_t seed) {
  const json x = entry.value("x", json("uniform"));
  if (x.is_array()) {
    std::vector<double> out;
    for (const auto& v : x) {
      if (!v.is_number()) throw ParseError("'x' entries must be numbers");
      out.push_back(v.get<double>());
    }
    if (out.size() != inst.size()) {
      throw ParseError("'x' must have one entry per element");
    }
    return out;
  }
  if (!x.is_string()) throw ParseError("'x' must be an array or a string");
  const std::string kind = x.get<std::string>();
  if (kind == "uniform") {
    const double n = static_cast<double>(inst.size());
    return std::vector<double>(inst.size(),
                               n > 0 ? static_cast<double>(inst.system.rank()) / n
                                     : 0.0);
  }
  if (kind == "lp") return solve_coverage_lp(inst).x;
  if (kind == "marginals") return marginals_for(inst, params_of(entry), seed).q;
  throw ParseError("unknown balance point '" + kind + "'");
}

CrsScheme scheme_for(const SppInstance& inst, const std::string& name) {
  if (name == "ordered_greedy_random") {
    return CrsScheme::ordered_greedy_random(inst.system);
  }
  if (name == "ordered_greedy_weight") {
    if (!inst.objective.is_additive()) {
      throw KindError("ordered_greedy_weight needs an additive objective");
    }
    return CrsScheme::ordered_greedy_weight(inst.system, inst.objective.weights());
  }
  if (name == "rank1_uniform") return CrsScheme::rank1_uniform(inst.system);
  throw ParseError("unknown CRS scheme '" + name + "'");
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

ElementSet id_set(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string("'") + what + "' must be an array");
  std::vector<ElementId> ids;
  for (const auto& x : v) ids.push_back(static_cast<ElementId>(json_u64(x, what)));
  return ElementSet(std::move(ids));
}

ElementSet bernoulli_over(const ElementSet& ground, double p, Rng& rng) {
  std::vector<ElementId> out;
  for (ElementId e : ground) {
    if (rng.bernoulli(p)) out.push_back(e);
  }
  return ElementSet(std::move(out));
}

struct CertRow {
  std::string check;
  std::string subject;
  std::string element;
  double observed;
  double bound;
  double sigma;
  std::string relation;  // "eq" or "ge"
};

bool cert_pass(const CertRow& r) {
  if (r.relation == "eq") return std::fabs(r.observed - r.bound) <= 4.0 * r.sigma;
  return r.observed >= r.bound - 4.0 * r.sigma;
}

void exchange_rows(const std::string& check, const std::string& subject,
                   const std::vector<MatroidOracle>& ms, const ElementSet& s1,
                   const ElementSet& s2, double p, std::size_t trials,
                   std::uint64_t seed, std::vector<CertRow>& rows) {
  const ElementSet ground = ms.front().ground();
  const ElementSet only1 = set_difference(s1, s2);
  const ElementSet only2 = set_difference(s2, s1);
  std::vector<std::size_t> hits1(only1.size(), 0), hits2(only2.size(), 0);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed, derive_stream(stream_tag::kActive, t));
    ElementSet r = bernoulli_over(ground, p, rng);
    ElementSet tset = construct_t(ms.front(), s1, s2, r).t;
    for (std::size_t l = 1; l < ms.size(); ++l) {
      tset = set_intersection(tset, construct_t(ms[l], s1, s2, r).t);
    }
    for (std::size_t i = 0; i < only1.size(); ++i) hits1[i] += tset.contains(only1[i]);
    for (std::size_t i = 0; i < only2.size(); ++i) hits2[i] += tset.contains(only2[i]);
  }
  const double n = static_cast<double>(trials);
  const double k = static_cast<double>(ms.size());
  const double keep = std::pow(1.0 - p, k);
  for (std::size_t i = 0; i < only1.size(); ++i) {
    rows.push_back({check, subject, std::to_string(only1[i]),
                    static_cast<double>(hits1[i]) / n, p,
                    std::sqrt(p * (1.0 - p) / n), "eq"});
  }
  for (std::size_t i = 0; i < only2.size(); ++i) {
    rows.push_back({check, subject, std::to_string(only2[i]),
                    static_cast<double>(hits2[i]) / n, keep,
                    std::sqrt(keep * (1.0 - keep) / n), "ge"});
  }
}

void stitching_rows(const SppInstance& inst, double eps, std::size_t trials,
                    std::uint64_t seed, std::vector<CertRow>& rows) {
  const auto& ms = inst.system.matroids();
  if (ms.empty()) throw KindError("stitching check needs a matroid intersection");
  const std::size_t tau = intersection_round_count(inst.p, eps);
  const double k = static_cast<double>(ms.size());
  // Per round i: per-trial numerators and denominators.
  std::vector<std::vector<double>> hit(tau, std::vector<double>(trials, 0.0));
  std::vector<std::vector<double>> den(tau, std::vector<double>(trials, 0.0));
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed, derive_stream(stream_tag::kQuery, t));
    SparseSet sp = intersection_sample_sparsify(inst, eps, rng);
    Rng active_rng(seed, derive_stream(stream_tag::kActive, t));
    ElementSet r = sample_active(inst, active_rng);
    ElementSet out = construct_i(ms, sp.samples, r);
    ElementSet seen;
    for (std::size_t i = 0; i < tau; ++i) {
      for (ElementId e : set_difference(sp.samples[i], seen)) {
        den[i][t] += 1.0;
        hit[i][t] += out.contains(e) ? 1.0 : 0.0;
      }
      seen = set_union(seen, sp.samples[i]);
    }
  }
  for (std::size_t i = 0; i < tau; ++i) {
    const double h = compensated_sum(hit[i]);
    const double d = compensated_sum(den[i]);
    if (d == 0.0) continue;
    const double rho = h / d;
    std::vector<double> sq(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      double dev = hit[i][t] - rho * den[i][t];
      sq[t] = dev * dev;
    }
    const double bound = inst.p * std::pow(1.0 - inst.p, k * static_cast<double>(i));
    // The cluster-robust estimate collapses to 0 when no hit is seen; floor
    // it with the binomial sigma at the bound.
    const double sigma = std::max(std::sqrt(compensated_sum(sq)) / d,
                                  std::sqrt(bound * (1.0 - bound) / d));
    rows.push_back({"stitching", inst.name, "round" + std::to_string(i + 1),
                    rho, bound, sigma, "ge"});
  }
}

std::vector<MatroidOracle> matroid_list(const json& entry) {
  std::vector<MatroidOracle> ms;
  if (entry.contains("matroids")) {
    for (const auto& m : entry.at("matroids")) ms.push_back(matroid_from_json(m));
  } else {
    ms.push_back(matroid_from_json(entry.at("matroid")));
  }
  if (ms.empty()) throw ParseError("exchange check needs at least one matroid");
  return ms;
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

SppInstance resolve_instance(const json& entry, const std::string& base_dir) {
  if (entry.is_string()) {
    std::filesystem::path path(entry.get<std::string>());
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    return instance_from_json(load_json_file(path.string()));
  }
  if (entry.is_object()) return instance_from_json(entry);
  throw ParseError("'instance' must be a path or an object");
}

SparseSet build_sparsifier(const SppInstance& inst, const std::string& name,
                           const json& params, std::uint64_t seed) {
  Rng rng(seed, stream_tag::kQuery);
  if (name == "crs") {
    return crs_sparsify(inst, marginals_for(inst, params, seed), rng);
  }
  if (name == "matroid_nss") {
    return matroid_nss_sparsify(inst, json_double(params, "eps"));
  }
  if (name == "intersection_sample") {
    return intersection_sample_sparsify(inst, json_double(params, "eps"), rng);
  }
  if (name == "matching_hybrid") {
    std::optional<std::size_t> t_override;
    if (params.contains("T")) {
      t_override = static_cast<std::size_t>(json_u64(params.at("T"), "T"));
    }
    return matching_hybrid_sparsify(inst, json_double(params, "eps"),
                                    marginals_for(inst, params, seed), rng,
                                    t_override);
  }
  if (name == "coverage_lp") return coverage_lp_sparsify(inst, rng);
  if (name == "identity") return identity_sparsify(inst);
  if (name == "fixed") {
    if (!params.contains("q")) throw ParseError("fixed sparsifier needs 'q'");
    SparseSet out;
    out.algorithm = "fixed";
    out.q = id_set(params.at("q"), "q");
    if (!out.q.is_subset_of(inst.ground())) {
      throw DomainError("fixed query set leaves the ground set");
    }
    out.producer = QueryProducer::fixed(out.q);
    return out;
  }
  throw ParseError("unknown sparsifier '" + name + "'");
}

std::string run_experiments(const json& config, const HarnessOptions& opts) {
  const json& exps = entries(config, "experiments");
  std::ostringstream os;
  os << kCsvHeader << "\n" << kCsvColumns << "\n";
  for (const auto& exp : exps) {
    if (!exp.is_object()) throw ParseError("each experiment must be an object");
    if (!exp.contains("sparsifier") || !exp.at("sparsifier").is_string()) {
      throw ParseError("experiment needs a 'sparsifier' name");
    }
    if (!exp.contains("instance")) throw ParseError("experiment needs an 'instance'");
    const std::uint64_t seed = entry_u64(exp, config, "seed");
    const std::size_t trials = entry_trials(exp, config, opts);
    const std::string name = exp.at("sparsifier").get<std::string>();
    json params = params_of(exp);
    SppInstance inst = resolve_instance(exp.at("instance"), opts.base_dir);

    std::string row_prefix = csv_field(exp.value("label", inst.name)) + "," +
                             csv_field(name) + ",";
    try {
      SparseSet sp = build_sparsifier(inst, name, params, seed);
      for (auto it = sp.params.begin(); it != sp.params.end(); ++it) {
        params[it.key()] = it.value();
      }
      EvalReport rep = evaluate_sparsifier(inst, sp.producer, trials, seed,
                                           opts.threads);
      os << row_prefix << csv_field(params.dump()) << ","
         << csv_number(rep.ratio_mean) << "," << csv_number(rep.ratio_stderr)
         << "," << csv_number(rep.degree_mean) << ","
         << csv_number(rep.opt_mean) << "," << trials << "," << seed << ","
         << csv_field(join(sp.notes, "; ")) << "\n";
    } catch (const SizeLimitError&) {
      os << row_prefix << csv_field(params.dump()) << ",,,,," << trials << ","
         << seed << ",skipped:size\n";
    }
  }
  return os.str();
}

std::string run_balance(const json& config, const HarnessOptions& opts) {
  const json& exps = entries(config, "experiments");
  std::ostringstream os;
  os << "# sposs-balance v1\n"
     << "instance,scheme,element,x,active,balance,stderr\n";
  for (const auto& exp : exps) {
    if (!exp.is_object()) throw ParseError("each experiment must be an object");
    const std::uint64_t seed = entry_u64(exp, config, "seed");
    const std::size_t trials = entry_trials(exp, config, opts);
    SppInstance inst = resolve_instance(exp.at("instance"), opts.base_dir);
    const std::string scheme_name =
        exp.value("scheme", std::string("ordered_greedy_random"));
    CrsScheme crs = scheme_for(inst, scheme_name);
    std::vector<double> x = balance_point(inst, exp, seed);
    BalanceReport rep = empirical_balance(crs, x, trials, seed);
    const std::string prefix = csv_field(exp.value("label", inst.name)) + "," +
                               scheme_name + ",";
    for (ElementId e : inst.ground()) {
      os << prefix << e << "," << csv_number(x[e]) << ","
         << rep.active_count[e] << ",";
      if (rep.balance[e]) {
        os << csv_number(*rep.balance[e]) << "," << csv_number(rep.std_error[e]);
      } else {
        os << "undefined,";
      }
      os << "\n";
    }
    os << prefix << "min,,,";
    if (rep.argmin) {
      os << csv_number(rep.min_balance) << "," << csv_number(rep.std_error[*rep.argmin]);
    } else {
      os << "undefined,";
    }
    os << "\n";
  }
  return os.str();
}

std::string run_certify(const json& config, const HarnessOptions& opts) {
  const json& checks = entries(config, "checks");
  std::vector<CertRow> rows;
  for (const auto& c : checks) {
    if (!c.is_object()) throw ParseError("each check must be an object");
    if (!c.contains("check") || !c.at("check").is_string()) {
      throw ParseError("check entry needs a 'check' name");
    }
    const std::string kind = c.at("check").get<std::string>();
    const std::uint64_t seed = entry_u64(c, config, "seed");
    const std::size_t trials = entry_trials(c, config, opts);
    if (kind == "exchange") {
      auto ms = matroid_list(c);
      const std::string subject = c.value("label", std::string(
          ms.size() == 1 ? ms.front().family_name() : "intersection"));
      exchange_rows(ms.size() == 1 ? "exchange" : "exchange_intersection",
                    subject, ms, id_set(c.at("s1"), "s1"),
                    id_set(c.at("s2"), "s2"), json_double(c, "p"), trials,
                    seed, rows);
    } else if (kind == "stitching") {
      SppInstance inst = resolve_instance(c.at("instance"), opts.base_dir);
      stitching_rows(inst, json_double(c, "eps"), trials, seed, rows);
    } else {
      throw ParseError("unknown check '" + kind + "'");
    }
  }
  std::ostringstream os;
  os << "# sposs-certify v1\n"
     << "check,subject,element,observed,bound,sigma,relation,pass\n";
  for (const auto& r : rows) {
    os << r.check << "," << csv_field(r.subject) << "," << r.element << ","
       << csv_number(r.observed) << "," << csv_number(r.bound) << ","
       << csv_number(r.sigma) << "," << r.relation << ","
       << (cert_pass(r) ? "true" : "false") << "\n";
  }
  return os.str();
}

double lp_vertex_enumeration(const DenseLp& lp) {
  const std::size_t n = lp.variables();
  const std::size_t m = lp.rows.size();
  if (n > 12 || m > 12) throw SizeLimitError("vertex enumeration is for tiny LPs");
  double best = -std::numeric_limits<double>::infinity();
  // status: 0 lower, 1 upper, 2 free
  std::vector<int> status(n, 0);
  std::vector<double> x(n);
  auto evaluate_status = [&]() {
    std::vector<std::size_t> free_vars;
    for (std::size_t j = 0; j < n; ++j) {
      if (status[j] == 2) free_vars.push_back(j);
    }
    const std::size_t f = free_vars.size();
    if (f > m) return;
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = status[j] == 1 ? lp.upper[j] : 0.0;
    }
    // Choose f tight rows.
    std::vector<std::size_t> pick(f);
    auto try_rows = [&]() {
      std::vector<std::vector<double>> a(f, std::vector<double>(f + 1));
      for (std::size_t r = 0; r < f; ++r) {
        double rhs = lp.rhs[pick[r]];
        for (std::size_t j = 0; j < n; ++j) {
          if (status[j] != 2) rhs -= lp.rows[pick[r]][j] * x[j];
        }
        for (std::size_t c = 0; c < f; ++c) a[r][c] = lp.rows[pick[r]][free_vars[c]];
        a[r][f] = rhs;
      }
      for (std::size_t c = 0; c < f; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < f; ++r) {
          if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        }
        if (std::fabs(a[piv][c]) < 1e-12) return;
        std::swap(a[piv], a[c]);
        for (std::size_t r = 0; r < f; ++r) {
          if (r == c) continue;
          const double factor = a[r][c] / a[c][c];
          for (std::size_t k = c; k <= f; ++k) a[r][k] -= factor * a[c][k];
        }
      }
      std::vector<double> y = x;
      for (std::size_t c = 0; c < f; ++c) y[free_vars[c]] = a[c][f] / a[c][c];
      if (lp_max_residual(lp, y) > 1e-9) return;
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += lp.objective[j] * y[j];
      best = std::max(best, v);
    };
    auto choose = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
      if (depth == f) {
        try_rows();
        return;
      }
      for (std::size_t r = start; r < m; ++r) {
        pick[depth] = r;
        self(self, r + 1, depth + 1);
      }
    };
    choose(choose, 0, 0);
  };
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == n) {
      evaluate_status();
      return;
    }
    for (int s = 0; s < 3; ++s) {
      if (s == 1 && std::isinf(lp.upper[j])) continue;
      status[j] = s;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  return best;
}

std::string run_lpcheck(const json& config, const HarnessOptions& opts) {
  if (!config.is_object()) throw ParseError("config must be a JSON object");
  if (!config.contains("seed")) throw ParseError("'seed' is required");
  const std::uint64_t seed = json_u64(config.at("seed"), "seed");
  const std::size_t count = opts.trials_override
                                ? *opts.trials_override
                                : static_cast<std::size_t>(json_u64(
                                      config.value("count", json(200)), "count"));
  const std::size_t max_vars = static_cast<std::size_t>(
      json_u64(config.value("max_vars", json(8)), "max_vars"));
  const std::size_t max_rows = static_cast<std::size_t>(
      json_u64(config.value("max_rows", json(4)), "max_rows"));
  if (max_vars == 0 || max_vars > 10 || max_rows == 0 || max_rows > 8) {
    throw InvalidArgumentError("lpcheck needs 1..10 variables and 1..8 rows");
  }
  std::ostringstream os;
  os << "# sposs-lpcheck v1\n"
     << "index,variables,rows,simplex,enumeration,abs_diff,max_residual,pass\n";
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed, i);
    auto coef = [&](double lo, double hi) {
      // Two-decimal grid so degenerate vertices show up.
      const double steps = std::round((hi - lo) * 100.0);
      return lo + static_cast<double>(rng.below(static_cast<std::uint64_t>(steps) + 1)) / 100.0;
    };
    DenseLp lp;
    const std::size_t n = 1 + rng.below(max_vars);
    const std::size_t m = 1 + rng.below(max_rows);
    for (std::size_t j = 0; j < n; ++j) {
      lp.objective.push_back(coef(-1.0, 1.0));
      lp.upper.push_back(coef(0.1, 2.0));
    }
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<double> row(n);
      for (auto& v : row) v = coef(-1.0, 1.0);
      lp.rows.push_back(std::move(row));
      lp.rhs.push_back(coef(0.0, 2.0));
    }
    LpSolution sol = solve(lp);
    const double brute = lp_vertex_enumeration(lp);
    const double diff = std::fabs(sol.value - brute);
    const bool pass = diff <= kLpTolerance && sol.max_residual <= kLpTolerance;
    os << i << "," << n << "," << m << "," << csv_number(sol.value) << ","
       << csv_number(brute) << "," << csv_number(diff) << ","
       << csv_number(sol.max_residual) << "," << (pass ? "true" : "false")
       << "\n";
  }
  return os.str();
}

std::string run_gen(const json& spec) {
  return instance_to_json(instance_from_json(spec)).dump(2) + "\n";
}

}  // namespace sposs
