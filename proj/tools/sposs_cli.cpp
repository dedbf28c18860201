#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sposs/sposs.h"

namespace {

int exit_code(sposs_status st) {
  switch (st) {
    case SPOSS_OK: return 0;
    case SPOSS_ERR_PARSE:
    case SPOSS_ERR_IO:
    case SPOSS_ERR_INVALID_ARGUMENT: return 2;
    default: return 1;
  }
}

std::size_t default_threads() {
  const char* env = std::getenv("SPOSS_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v == 0) {
    std::cerr << "warning: ignoring SPOSS_THREADS='" << env << "'\n";
    return 1;
  }
  return v;
}

int emit(const char* text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::fputs(text, stdout);
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return 2;
  }
  out << text;
  return out ? 0 : 2;
}

std::size_t count_data_rows(const char* csv) {
  std::size_t lines = 0;
  for (const char* c = csv; *c; ++c) lines += *c == '\n';
  return lines >= 2 ? lines - 2 : 0;
}

int report_failure(sposs_status st) {
  std::cerr << "error (" << sposs_status_name(st) << "): " << sposs_last_error()
            << "\n";
  return exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic packing sparsification experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sposs_version());

  std::string config;
  std::string out_path;
  std::size_t threads = default_threads();
  std::size_t trials_override = 0;

  const char* commands[][2] = {
      {"run", "Evaluate sparsifiers and write one CSV row per experiment"},
      {"balance", "Measure CRS balance per element"},
      {"certify", "Statistical checks of the exchange constructions"},
      {"lpcheck", "Compare the simplex solver with vertex enumeration"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out_path, "Output CSV path (default stdout)");
    sub->add_option("--threads", threads, "Worker threads (env SPOSS_THREADS)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--trials-override", trials_override,
                    "Replace every trial count")
        ->check(CLI::PositiveNumber);
  }

  CLI::App* gen = app.add_subcommand("gen", "Write an adversarial instance as JSON");
  std::string generator;
  std::optional<std::size_t> n, r, m, k;
  std::optional<double> p;
  std::string mode = "example31";
  std::uint64_t seed = 0;
  gen->add_option("generator", generator, "rank1, blocks or equal_partition")
      ->required()
      ->check(CLI::IsMember({"rank1", "blocks", "equal_partition"}));
  gen->add_option("--n", n, "Ground size (rank1, equal_partition)");
  gen->add_option("--r", r, "Rank (equal_partition)");
  gen->add_option("--m", m, "Block count (blocks)");
  gen->add_option("--k", k, "Block size (blocks)");
  gen->add_option("--p", p, "Activation probability (equal_partition)");
  gen->add_option("--mode", mode, "example31 or prop45 (rank1)");
  gen->add_option("--seed", seed, "Seed stored in the instance");
  gen->add_option("--out", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  char* text = nullptr;
  sposs_status st;
  if (gen->parsed()) {
    std::string spec = "{\"generator\":\"" + generator + "\",\"seed\":" +
                       std::to_string(seed) + ",\"mode\":\"" + mode + "\"";
    auto add = [&](const char* key, const auto& v) {
      if (v) spec += std::string(",\"") + key + "\":" + std::to_string(*v);
    };
    add("n", n);
    add("r", r);
    add("m", m);
    add("k", k);
    if (p) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", *p);
      spec += std::string(",\"p\":") + buf;
    }
    spec += "}";
    st = sposs_gen(spec.c_str(), &text);
    if (st != SPOSS_OK) return report_failure(st);
    int rc = emit(text, out_path);
    sposs_string_free(text);
    return rc;
  }

  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();
  sposs_run_options opts{threads, trials_override};
  st = sposs_run_config(command.c_str(), config.c_str(), &opts, &text);
  if (st != SPOSS_OK) return report_failure(st);
  int rc = emit(text, out_path);
  if (rc == 0) {
    std::cerr << command << ": " << count_data_rows(text) << " rows"
              << (out_path.empty() ? "" : " written to " + out_path) << "\n";
  }
  sposs_string_free(text);
  return rc;
}
