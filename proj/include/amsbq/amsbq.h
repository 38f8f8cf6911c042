/* C interface to the amsbq shared library: active multi-source Bayesian
 * quadrature experiment runner. Handles are opaque; every fallible call
 * returns an amsbq_status and leaves a human-readable detail string in
 * amsbq_last_error() (thread-local). */

#ifndef AMSBQ_H
#define AMSBQ_H

#include <stddef.h>

#if defined(_WIN32)
#define AMSBQ_API __declspec(dllexport)
#else
#define AMSBQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum amsbq_status {
  AMSBQ_OK = 0,
  AMSBQ_ERR_INVALID_ARGUMENT = 1, /* bad configuration or usage */
  AMSBQ_ERR_IO = 2,               /* file could not be read or written */
  AMSBQ_ERR_MODEL = 3,            /* numerical model failure at runtime */
  AMSBQ_ERR_INTERNAL = 4
} amsbq_status;

typedef struct amsbq_config amsbq_config;
typedef struct amsbq_result amsbq_result;
typedef struct amsbq_summary amsbq_summary;

AMSBQ_API const char* amsbq_version(void);
AMSBQ_API const char* amsbq_status_name(amsbq_status status);
AMSBQ_API const char* amsbq_last_error(void);

/* Configuration: flat key=value entries ('#' comments in files), e.g.
 * benchmark, method, acquisition, budget, seed, seeds, out, threshold. */
AMSBQ_API amsbq_status amsbq_config_new(amsbq_config** out);
AMSBQ_API amsbq_status amsbq_config_load(const char* path, amsbq_config** out);
AMSBQ_API amsbq_status amsbq_config_set(amsbq_config* config, const char* key,
                                        const char* value);
AMSBQ_API void amsbq_config_free(amsbq_config* config);

/* Executes one run; writes the CSV artifact when the config names an output
 * path. The result handle keeps the rendered CSV and summary scalars. */
AMSBQ_API amsbq_status amsbq_run(const amsbq_config* config, amsbq_result** out);
AMSBQ_API void amsbq_result_free(amsbq_result* result);
AMSBQ_API size_t amsbq_result_num_rows(const amsbq_result* result);
AMSBQ_API double amsbq_result_final_estimate(const amsbq_result* result);
AMSBQ_API double amsbq_result_final_rel_err(const amsbq_result* result);
AMSBQ_API double amsbq_result_ground_truth(const amsbq_result* result);
/* Borrowed pointer, valid until the result is freed. */
AMSBQ_API const char* amsbq_result_csv(const amsbq_result* result);
AMSBQ_API amsbq_status amsbq_result_write_csv(const amsbq_result* result, const char* path);

/* Runs every configuration (all targeting one benchmark; per-seed when a
 * seed list is configured) and summarizes cost-to-tolerance and final
 * error, median over seeds. */
AMSBQ_API amsbq_status amsbq_compare(const amsbq_config* const* configs, size_t count,
                                     amsbq_summary** out);
AMSBQ_API void amsbq_summary_free(amsbq_summary* summary);
AMSBQ_API const char* amsbq_summary_table(const amsbq_summary* summary);
AMSBQ_API const char* amsbq_summary_csv(const amsbq_summary* summary);

AMSBQ_API int amsbq_benchmark_exists(const char* id);
/* Newline-separated benchmark ids; static storage. */
AMSBQ_API const char* amsbq_benchmark_list(void);

#ifdef __cplusplus
}
#endif

#endif /* AMSBQ_H */
