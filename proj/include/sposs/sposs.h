#ifndef SPOSS_SPOSS_H
#define SPOSS_SPOSS_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPOSS_BUILDING_LIBRARY)
#define SPOSS_API __attribute__((visibility("default")))
#else
#define SPOSS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sposs_status {
  SPOSS_OK = 0,
  SPOSS_ERR_PARSE = 1,
  SPOSS_ERR_DOMAIN = 2,
  SPOSS_ERR_PRECONDITION = 3,
  SPOSS_ERR_SIZE_LIMIT = 4,
  SPOSS_ERR_KIND = 5,
  SPOSS_ERR_NO_CIRCUIT = 6,
  SPOSS_ERR_INTERNAL = 7,
  SPOSS_ERR_INVALID_ARGUMENT = 8,
  SPOSS_ERR_IO = 9,
  /* Output buffer too small; the required length is still reported. */
  SPOSS_ERR_BUFFER = 10
} sposs_status;

typedef struct sposs_matroid sposs_matroid;
typedef struct sposs_instance sposs_instance;
typedef struct sposs_sparse_set sposs_sparse_set;

typedef struct sposs_eval_report {
  double ratio_mean;
  double ratio_stderr;
  double degree_mean;
  double degree_stderr;
  double opt_mean;
  double query_opt_mean;
  size_t trials;
  double wall_time;
} sposs_eval_report;

typedef struct sposs_run_options {
  size_t threads;         /* 0 is treated as 1 */
  size_t trials_override; /* 0 = use the config's trial counts */
} sposs_run_options;

SPOSS_API const char* sposs_version(void);
/* Message for the last failing call on this thread; empty if none. */
SPOSS_API const char* sposs_last_error(void);
SPOSS_API const char* sposs_status_name(sposs_status status);
/* Releases strings returned through char** out-parameters. */
SPOSS_API void sposs_string_free(char* s);

/* Matroids. Element ids are uint32_t. */
SPOSS_API sposs_status sposs_matroid_from_json(const char* json,
                                               sposs_matroid** out);
SPOSS_API void sposs_matroid_free(sposs_matroid* m);
SPOSS_API sposs_status sposs_matroid_ground_size(const sposs_matroid* m,
                                                 size_t* out);
SPOSS_API sposs_status sposs_matroid_is_independent(const sposs_matroid* m,
                                                    const uint32_t* ids,
                                                    size_t n, int* out);
SPOSS_API sposs_status sposs_matroid_rank(const sposs_matroid* m,
                                          const uint32_t* ids, size_t n,
                                          size_t* out);
SPOSS_API sposs_status sposs_matroid_contract(const sposs_matroid* m,
                                              const uint32_t* ids, size_t n,
                                              sposs_matroid** out);

/* Instances: explicit JSON or a generator descriptor. */
SPOSS_API sposs_status sposs_instance_from_json(const char* json,
                                                sposs_instance** out);
SPOSS_API void sposs_instance_free(sposs_instance* inst);
SPOSS_API sposs_status sposs_instance_to_json(const sposs_instance* inst,
                                              char** out);
SPOSS_API size_t sposs_instance_size(const sposs_instance* inst);
SPOSS_API double sposs_instance_p(const sposs_instance* inst);
SPOSS_API sposs_status sposs_instance_rank(const sposs_instance* inst,
                                           size_t* out);
/* Writes up to cap ids into buf and the full count into *len. */
SPOSS_API sposs_status sposs_instance_sample_active(const sposs_instance* inst,
                                                    uint64_t seed,
                                                    uint64_t stream,
                                                    uint32_t* buf, size_t cap,
                                                    size_t* len);
SPOSS_API sposs_status sposs_instance_stochastic_opt(
    const sposs_instance* inst, const uint32_t* active, size_t n,
    uint32_t* buf, size_t cap, size_t* len, double* value);

/* Sparsifiers by name: crs, matroid_nss, intersection_sample,
 * matching_hybrid, coverage_lp, identity, fixed. params_json may be NULL. */
SPOSS_API sposs_status sposs_sparsify(const sposs_instance* inst,
                                      const char* name,
                                      const char* params_json, uint64_t seed,
                                      sposs_sparse_set** out);
SPOSS_API void sposs_sparse_set_free(sposs_sparse_set* s);
SPOSS_API sposs_status sposs_sparse_set_query(const sposs_sparse_set* s,
                                              uint32_t* buf, size_t cap,
                                              size_t* len);
SPOSS_API sposs_status sposs_evaluate(const sposs_instance* inst,
                                      const sposs_sparse_set* s,
                                      size_t trials, uint64_t seed,
                                      size_t threads, sposs_eval_report* out);

/* Harness entry points. command is run, balance, certify or lpcheck. The
 * CSV text is returned in *out and must be released with sposs_string_free. */
SPOSS_API sposs_status sposs_run_config(const char* command,
                                        const char* config_path,
                                        const sposs_run_options* options,
                                        char** out);
SPOSS_API sposs_status sposs_run_config_text(const char* command,
                                             const char* config_json,
                                             const char* base_dir,
                                             const sposs_run_options* options,
                                             char** out);
/* Instance JSON from a generator descriptor. */
SPOSS_API sposs_status sposs_gen(const char* spec_json, char** out);

#ifdef __cplusplus
}
#endif

#endif
