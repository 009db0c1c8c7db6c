/* C interface to the robust-local-algorithm library. All functions return an
 * RLA_* status code unless noted; on failure rla_last_error() describes the
 * problem (thread-local, valid until the thread's next library call). Strings
 * returned through char** are heap-allocated; release them with
 * rla_string_free. Words are strings of digit characters over the alphabet.
 * JSON payloads follow the library's format: 1 schemas. */

#ifndef RLA_H
#define RLA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    RLA_OK = 0,
    RLA_ERR_RUN = 1,
    RLA_ERR_PARSE = 2,
    RLA_ERR_BUDGET = 3,
    RLA_ERR_DERAND = 4,
    RLA_ERR_STRUCTURAL = 5,
    RLA_ERR_PRECONDITION = 6,
    RLA_ERR_INVARIANT = 7
};

typedef struct rla_algorithm rla_algorithm;
typedef struct rla_sampler rla_sampler;

const char* rla_version(void);
const char* rla_last_error(void);
void rla_string_free(char* s);

/* Zoo access. rla_zoo_list yields a JSON array of {name, n, q, relaxed, ...}. */
int rla_zoo_list(char** json_out);
int rla_zoo_get(const char* name, rla_algorithm** out);

/* Algorithms. */
int rla_algorithm_from_json(const char* json, rla_algorithm** out);
int rla_algorithm_to_json(const rla_algorithm* alg, char** json_out);
int rla_algorithm_info(const rla_algorithm* alg, char** json_out);
int rla_algorithm_run(const rla_algorithm* alg, uint32_t z, const char* word, uint64_t seed,
                      int* out);
/* Label per the problem spec: 0, 1, or 2 for outside-domain. */
int rla_algorithm_label(const rla_algorithm* alg, uint32_t z, const char* word, int* label);
int rla_normalize(const rla_algorithm* alg, rla_algorithm** out);
/* Error amplification + support reduction; report carries the achieved
 * parameters. */
int rla_prepare(const rla_algorithm* alg, uint64_t seed, rla_algorithm** out,
                char** report_json);
void rla_algorithm_free(rla_algorithm* alg);

/* Samplers. options_json may be NULL or an object with any of
 * override_p, override_gamma (numbers) and enum_budget (integer). */
int rla_preprocess(const rla_algorithm* alg, uint32_t z, int relaxed, const char* options_json,
                   rla_sampler** out);
int rla_sampler_to_json(const rla_sampler* s, char** json_out);
int rla_sampler_from_json(const char* json, rla_sampler** out);
int rla_sampler_info(const rla_sampler* s, char** json_out);
/* One execution; result JSON holds output, aborted, triggering_j, votes,
 * q_size, work, samplings, seed. */
int rla_sampler_run(const rla_sampler* s, const char* word, uint64_t seed, char** result_json);
/* Several samplers over one shared sampling step; results as a JSON array. */
int rla_run_shared(const rla_sampler* const* samplers, size_t count, const char* word,
                   uint64_t seed, char** results_json);
/* One sampling step, one relaxed decode per sampler (message index order). */
int rla_global_decode(const rla_sampler* const* samplers, size_t count, const char* word,
                      uint64_t seed, char** result_json);
void rla_sampler_free(rla_sampler* s);

/* Daisy partition of a set collection ({"format":1,"n":..,"q":..,"sets":[..]});
 * output carries the partition plus invariant-check results. */
int rla_partition_json(const char* sets_json, char** json_out);

/* Full verification suites for a shipped zoo instance. Returns RLA_OK with
 * "pass": false in the report when a suite fails. */
int rla_verify_instance(const char* name, char** report_json);

/* Wilson score interval for a binomial proportion. */
int rla_wilson(uint64_t successes, uint64_t trials, double z, double* lo, double* hi);

#ifdef __cplusplus
}
#endif

#endif /* RLA_H */
