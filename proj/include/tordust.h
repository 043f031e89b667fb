#ifndef TORDUST_H
#define TORDUST_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/*
 * C surface of the torus dust simulator.  Handles are opaque; every function
 * returns a td_status and leaves a message for td_last_error() on failure.
 *
 * td_run / td_run_resume return the run's exit status directly: TD_OK for a
 * clean run, one of the TD_BREAK_* codes when a monitor guard stopped it
 * early (artifacts are still written and *out is valid in both cases).
 */
typedef enum td_status {
  TD_OK = 0,
  TD_ERROR = 1,           /* i/o, format, or internal failure */
  TD_INVALID = 2,         /* bad config, bad argument, checkpoint mismatch */
  TD_BREAK_G00 = 10,      /* reciprocal lapse hit its floor */
  TD_BREAK_METRIC = 11,   /* spatial metric lost positivity */
  TD_BREAK_CNORM = 12     /* pointwise norm proxy crossed the ceiling */
} td_status;

const char* td_version(void);

/* message from the most recent failing call on this thread; never NULL */
const char* td_last_error(void);

/* frees strings returned through char** out-parameters */
void td_string_free(char* s);

/* ---------- configuration ---------- */

typedef struct td_config td_config;

td_status td_config_default(td_config** out);
td_status td_config_parse(const char* json_text, td_config** out);
td_status td_config_load(const char* path, td_config** out);
void td_config_free(td_config* cfg);

/* canonical JSON with every default materialized */
td_status td_config_serialize(const td_config* cfg, char** json_out);

/* identity of the physics; independent of the output section */
td_status td_config_hash(const td_config* cfg, uint64_t* out);

/* ---------- batch runs ---------- */

typedef struct td_run_result td_run_result;

td_status td_run(const td_config* cfg, td_run_result** out);
td_status td_run_resume(const td_config* cfg, const char* checkpoint_path,
                        td_run_result** out);
void td_run_result_free(td_run_result* r);

int td_run_exit_code(const td_run_result* r);
const char* td_run_breakdown(const td_run_result* r);
const char* td_run_directory(const td_run_result* r);
const char* td_run_csv_path(const td_run_result* r);
const char* td_run_manifest_path(const td_run_result* r);
double td_run_final_time(const td_run_result* r);
double td_run_wall_seconds(const td_run_result* r);
int td_run_samples(const td_run_result* r);

/* ---------- verification ---------- */

/* suite: background, identities, convergence, oracle, decay, stability, all.
   *pass gets 1/0; *report_json gets the full machine-readable report. */
td_status td_verify(const char* suite, int* pass, char** report_json);

/* one criterion by id (1..9); same report shape with a single entry */
td_status td_verify_criterion(int id, int* pass, char** report_json);

/* ---------- plot extraction ---------- */

/* quantities: comma-separated diagnostics column names or "all-energies";
   *csv_out gets long-form "t,value,series" rows, with a "<name>_log"
   companion for every strictly positive series */
td_status td_plotdata(const char* diagnostics_csv, const char* quantities,
                      char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* TORDUST_H */
