#include "sposs/sposs.h"

#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include "sposs/error.hpp"
#include "sposs/harness.hpp"
#include "sposs/json_io.hpp"

struct sposs_matroid {
  sposs::MatroidOracle m;
};

struct sposs_instance {
  sposs::SppInstance inst;
};

struct sposs_sparse_set {
  sposs::SparseSet set;
};

namespace {

thread_local std::string g_last_error;

sposs_status to_status(sposs::ErrorCode code) {
  using sposs::ErrorCode;
  switch (code) {
    case ErrorCode::kDomain: return SPOSS_ERR_DOMAIN;
    case ErrorCode::kPrecondition: return SPOSS_ERR_PRECONDITION;
    case ErrorCode::kSizeLimit: return SPOSS_ERR_SIZE_LIMIT;
    case ErrorCode::kKind: return SPOSS_ERR_KIND;
    case ErrorCode::kNoCircuit: return SPOSS_ERR_NO_CIRCUIT;
    case ErrorCode::kInvariant: return SPOSS_ERR_INTERNAL;
    case ErrorCode::kParse: return SPOSS_ERR_PARSE;
    case ErrorCode::kInvalidArgument: return SPOSS_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return SPOSS_ERR_IO;
  }
  return SPOSS_ERR_INTERNAL;
}

template <typename F>
sposs_status guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return SPOSS_OK;
  } catch (const sposs::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown exception";
  }
  return SPOSS_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw sposs::InvalidArgumentError(what);
}

sposs::ElementSet to_set(const uint32_t* ids, size_t n) {
  require(ids != nullptr || n == 0, "null id array");
  return sposs::ElementSet(std::vector<sposs::ElementId>(ids, ids + n));
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sposs_status write_ids(const sposs::ElementSet& s, uint32_t* buf, size_t cap,
                       size_t* len) {
  *len = s.size();
  if (s.size() > cap) {
    g_last_error = "buffer too small";
    return SPOSS_ERR_BUFFER;
  }
  if (!s.empty()) std::memcpy(buf, s.ids().data(), s.size() * sizeof(uint32_t));
  return SPOSS_OK;
}

}  // namespace

extern "C" {

const char* sposs_version(void) { return "0.1.0"; }

const char* sposs_last_error(void) { return g_last_error.c_str(); }

const char* sposs_status_name(sposs_status status) {
  switch (status) {
    case SPOSS_OK: return "ok";
    case SPOSS_ERR_PARSE: return "parse";
    case SPOSS_ERR_DOMAIN: return "domain";
    case SPOSS_ERR_PRECONDITION: return "precondition";
    case SPOSS_ERR_SIZE_LIMIT: return "size_limit";
    case SPOSS_ERR_KIND: return "kind";
    case SPOSS_ERR_NO_CIRCUIT: return "no_circuit";
    case SPOSS_ERR_INTERNAL: return "internal";
    case SPOSS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SPOSS_ERR_IO: return "io";
    case SPOSS_ERR_BUFFER: return "buffer";
  }
  return "unknown";
}

void sposs_string_free(char* s) { delete[] s; }

sposs_status sposs_matroid_from_json(const char* json, sposs_matroid** out) {
  return guard([&] {
    require(json && out, "null argument");
    *out = nullptr;
    *out = new sposs_matroid{sposs::matroid_from_json(sposs::parse_json_text(json))};
  });
}

void sposs_matroid_free(sposs_matroid* m) { delete m; }

sposs_status sposs_matroid_ground_size(const sposs_matroid* m, size_t* out) {
  return guard([&] {
    require(m && out, "null argument");
    *out = m->m.ground().size();
  });
}

sposs_status sposs_matroid_is_independent(const sposs_matroid* m,
                                          const uint32_t* ids, size_t n,
                                          int* out) {
  return guard([&] {
    require(m && out, "null argument");
    *out = m->m.is_independent(to_set(ids, n)) ? 1 : 0;
  });
}

sposs_status sposs_matroid_rank(const sposs_matroid* m, const uint32_t* ids,
                                size_t n, size_t* out) {
  return guard([&] {
    require(m && out, "null argument");
    *out = m->m.rank(to_set(ids, n));
  });
}

sposs_status sposs_matroid_contract(const sposs_matroid* m, const uint32_t* ids,
                                    size_t n, sposs_matroid** out) {
  return guard([&] {
    require(m && out, "null argument");
    *out = nullptr;
    *out = new sposs_matroid{m->m.contracted(to_set(ids, n))};
  });
}

sposs_status sposs_instance_from_json(const char* json, sposs_instance** out) {
  return guard([&] {
    require(json && out, "null argument");
    *out = nullptr;
    *out = new sposs_instance{sposs::instance_from_json(sposs::parse_json_text(json))};
  });
}

void sposs_instance_free(sposs_instance* inst) { delete inst; }

sposs_status sposs_instance_to_json(const sposs_instance* inst, char** out) {
  return guard([&] {
    require(inst && out, "null argument");
    *out = nullptr;
    *out = dup_string(sposs::instance_to_json(inst->inst).dump());
  });
}

size_t sposs_instance_size(const sposs_instance* inst) {
  return inst ? inst->inst.size() : 0;
}

double sposs_instance_p(const sposs_instance* inst) {
  return inst ? inst->inst.p : 0.0;
}

sposs_status sposs_instance_rank(const sposs_instance* inst, size_t* out) {
  return guard([&] {
    require(inst && out, "null argument");
    *out = inst->inst.system.rank();
  });
}

sposs_status sposs_instance_sample_active(const sposs_instance* inst,
                                          uint64_t seed, uint64_t stream,
                                          uint32_t* buf, size_t cap,
                                          size_t* len) {
  sposs_status st = SPOSS_OK;
  sposs_status g = guard([&] {
    require(inst && len && (buf || cap == 0), "null argument");
    sposs::Rng rng(seed, stream);
    st = write_ids(sposs::sample_active(inst->inst, rng), buf, cap, len);
  });
  return g != SPOSS_OK ? g : st;
}

sposs_status sposs_instance_stochastic_opt(const sposs_instance* inst,
                                           const uint32_t* active, size_t n,
                                           uint32_t* buf, size_t cap,
                                           size_t* len, double* value) {
  sposs_status st = SPOSS_OK;
  sposs_status g = guard([&] {
    require(inst && len && (buf || cap == 0), "null argument");
    sposs::FeasibleSet best = sposs::stochastic_opt(inst->inst, to_set(active, n));
    if (value) *value = best.weight;
    st = write_ids(best.elements, buf, cap, len);
  });
  return g != SPOSS_OK ? g : st;
}

sposs_status sposs_sparsify(const sposs_instance* inst, const char* name,
                            const char* params_json, uint64_t seed,
                            sposs_sparse_set** out) {
  return guard([&] {
    require(inst && name && out, "null argument");
    *out = nullptr;
    nlohmann::json params = params_json ? sposs::parse_json_text(params_json)
                                        : nlohmann::json::object();
    *out = new sposs_sparse_set{
        sposs::build_sparsifier(inst->inst, name, params, seed)};
  });
}

void sposs_sparse_set_free(sposs_sparse_set* s) { delete s; }

sposs_status sposs_sparse_set_query(const sposs_sparse_set* s, uint32_t* buf,
                                    size_t cap, size_t* len) {
  sposs_status st = SPOSS_OK;
  sposs_status g = guard([&] {
    require(s && len && (buf || cap == 0), "null argument");
    st = write_ids(s->set.q, buf, cap, len);
  });
  return g != SPOSS_OK ? g : st;
}

sposs_status sposs_evaluate(const sposs_instance* inst,
                            const sposs_sparse_set* s, size_t trials,
                            uint64_t seed, size_t threads,
                            sposs_eval_report* out) {
  return guard([&] {
    require(inst && s && out, "null argument");
    sposs::EvalReport r = sposs::evaluate_sparsifier(
        inst->inst, s->set.producer, trials, seed, threads ? threads : 1);
    *out = sposs_eval_report{r.ratio_mean,   r.ratio_stderr, r.degree_mean,
                             r.degree_stderr, r.opt_mean,     r.query_opt_mean,
                             r.trials,        r.wall_time};
  });
}

sposs_status sposs_run_config_text(const char* command, const char* config_json,
                                   const char* base_dir,
                                   const sposs_run_options* options,
                                   char** out) {
  return guard([&] {
    require(command && config_json && out, "null argument");
    *out = nullptr;
    sposs::HarnessOptions opts;
    if (options) {
      opts.threads = options->threads ? options->threads : 1;
      if (options->trials_override) opts.trials_override = options->trials_override;
    }
    if (base_dir) opts.base_dir = base_dir;
    const nlohmann::json config = sposs::parse_json_text(config_json);
    const std::string cmd = command;
    std::string csv;
    if (cmd == "run") {
      csv = sposs::run_experiments(config, opts);
    } else if (cmd == "balance") {
      csv = sposs::run_balance(config, opts);
    } else if (cmd == "certify") {
      csv = sposs::run_certify(config, opts);
    } else if (cmd == "lpcheck") {
      csv = sposs::run_lpcheck(config, opts);
    } else {
      throw sposs::InvalidArgumentError("unknown command '" + cmd + "'");
    }
    *out = dup_string(csv);
  });
}

sposs_status sposs_run_config(const char* command, const char* config_path,
                              const sposs_run_options* options, char** out) {
  std::string text;
  std::string base;
  sposs_status st = guard([&] {
    require(config_path && out, "null argument");
    *out = nullptr;
    text = sposs::load_json_file(config_path).dump();
    base = std::filesystem::path(config_path).parent_path().string();
    if (base.empty()) base = ".";
  });
  if (st != SPOSS_OK) return st;
  return sposs_run_config_text(command, text.c_str(), base.c_str(), options, out);
}

sposs_status sposs_gen(const char* spec_json, char** out) {
  return guard([&] {
    require(spec_json && out, "null argument");
    *out = nullptr;
    *out = dup_string(sposs::run_gen(sposs::parse_json_text(spec_json)));
  });
}

}  // extern "C"
