#ifndef KBP_KBP_H
#define KBP_KBP_H

/* C interface to the knowledge base population toolkit.
 *
 * Every function returns a kbp_status. On failure a message describing the
 * error is available from kbp_last_error() on the calling thread until the
 * next call into the library on that thread. Strings returned through char**
 * out-parameters are owned by the caller and released with kbp_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(KBP_BUILDING_LIBRARY)
#define KBP_API __attribute__((visibility("default")))
#else
#define KBP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kbp_status {
  KBP_OK = 0,
  KBP_ERR_INVALID_ARGUMENT = 1,
  KBP_ERR_CONFIG = 2,
  KBP_ERR_PARSE = 3,
  KBP_ERR_MISSING_CACHE = 4,
  KBP_ERR_BACKEND = 5,
  KBP_ERR_IO = 6,
  KBP_ERR_INTERNAL = 7
} kbp_status;

typedef struct kbp_session kbp_session;

typedef void (*kbp_progress_fn)(size_t done, size_t total, void* user);

typedef struct kbp_run_options {
  const char* system;              /* satori, lm-baseline, qa-baseline, re-baseline */
  const char* const* relations;    /* filter; NULL or empty for all */
  size_t relation_count;
  int refresh;
  int explain;
  int pooled;
  int jobs;                        /* 0: available processors */
  int has_seed;
  uint64_t seed;
  double fraction;                 /* <= 0: from config */
  int repetitions;                 /* <= 0: from config */
  const char* thresholds_path;     /* predict: threshold overlay */
  const char* predictions_path;    /* evaluate: predictions file */
  const char* kind;                /* traingen: mlm, entailment, qa, re, all */
  kbp_progress_fn progress;
  void* progress_user;
} kbp_run_options;

KBP_API const char* kbp_version(void);
KBP_API const char* kbp_last_error(void);
KBP_API const char* kbp_status_name(kbp_status status);
/* Process exit code for a status: 0 success, 2 configuration or argument
 * error, 1 anything else. */
KBP_API int kbp_exit_code(kbp_status status);

KBP_API void kbp_run_options_init(kbp_run_options* options);

KBP_API kbp_status kbp_session_open(const char* config_path, kbp_session** out);
KBP_API void kbp_session_close(kbp_session* session);

/* Each command writes its files into the configured output directory and
 * returns a JSON summary through *summary_json (may be NULL). */
KBP_API kbp_status kbp_fetch_premises(kbp_session* session, const kbp_run_options* options, char** summary_json);
KBP_API kbp_status kbp_predict(kbp_session* session, const kbp_run_options* options, char** summary_json);
KBP_API kbp_status kbp_calibrate(kbp_session* session, const kbp_run_options* options, char** summary_json);
KBP_API kbp_status kbp_evaluate(kbp_session* session, const kbp_run_options* options, char** summary_json);
KBP_API kbp_status kbp_traingen(kbp_session* session, const kbp_run_options* options, char** summary_json);
KBP_API kbp_status kbp_regime(kbp_session* session, const kbp_run_options* options, char** summary_json);

/* Two-class entailment probability from raw logits (neutral is ignored). */
KBP_API kbp_status kbp_entail_probability(double entail, double contradiction, double neutral, double* out);

/* Renders a relation template; object may be NULL. */
KBP_API kbp_status kbp_render_template(const char* tmpl, const char* subject, const char* object, char** out);

KBP_API void kbp_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* KBP_KBP_H */
