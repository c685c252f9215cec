/* C API for the Tucker-variety optimization toolkit.
 *
 * Experiments are configured with a JSON document (the same schema the CLI
 * uses), run behind an opaque handle, and report results as JSON.  All
 * functions return 0 on success and a negative code on failure; the last
 * error message is thread-local and owned by the library.
 */

#ifndef TTV_H_
#define TTV_H_

#ifdef __cplusplus
extern "C" {
#endif

#define TTV_OK 0
#define TTV_ERR_INVALID_ARGUMENT (-1)
#define TTV_ERR_RUNTIME (-2)

/* Library version string. */
const char* ttv_version(void);

/* Last error message for the calling thread; never NULL. */
const char* ttv_last_error(void);

/* Opaque experiment handle. */
typedef struct ttv_experiment ttv_experiment;

/* Create an experiment from a JSON configuration; NULL on error. */
ttv_experiment* ttv_experiment_create(const char* config_json);

/* Run the experiment (may take a while).  Idempotent per handle. */
int ttv_experiment_run(ttv_experiment* e);

/* JSON summary of a completed run; owned by the handle.  NULL before run. */
const char* ttv_experiment_summary(const ttv_experiment* e);

/* Stop reason string of a completed run; owned by the handle. */
const char* ttv_experiment_stop_reason(const ttv_experiment* e);

void ttv_experiment_destroy(ttv_experiment* e);

/* Summarize a trace file into newly allocated text (free with ttv_free). */
int ttv_trace_report(const char* trace_path, char** text_out);

void ttv_free(char* p);

#ifdef __cplusplus
}
#endif

#endif /* TTV_H_ */
