/* C API of the hermion library: opaque handles + status codes. Every entry
 * point is thread-safe for distinct handles; error text is per-thread and
 * valid until the next failing call on the same thread. */
#ifndef HERMION_H
#define HERMION_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct hermion_config hermion_config;
typedef struct hermion_field hermion_field;

typedef enum hermion_status {
  HERMION_OK = 0,
  HERMION_ERR_CHECK = 1,    /* a verification criterion failed */
  HERMION_ERR_USAGE = 2,    /* bad arguments or configuration */
  HERMION_ERR_IO = 3,       /* file system failure */
  HERMION_ERR_INTERNAL = 4
} hermion_status;

const char* hermion_version(void);
/* Message for the most recent failure on this thread ("" if none). */
const char* hermion_last_error(void);

/* --- configuration ------------------------------------------------------ */
hermion_status hermion_config_load(const char* path, hermion_config** out);
hermion_status hermion_config_parse(const char* text, hermion_config** out);
void hermion_config_free(hermion_config* cfg);
/* Canonical serialized form; caller must free() the returned buffer. */
hermion_status hermion_config_serialize(const hermion_config* cfg, char** out);

/* --- fields -------------------------------------------------------------- */
hermion_status hermion_make_datum(const hermion_config* cfg, hermion_field** out);
hermion_status hermion_field_load(const char* path, hermion_field** out);
void hermion_field_free(hermion_field* f);
int hermion_field_dim(const hermion_field* f);
int hermion_field_cutoff(const hermion_field* f);
double hermion_field_l2(const hermion_field* f);
/* Interleaved re/im pairs; n must equal cutoff^dim. */
hermion_status hermion_field_coeffs(const hermion_field* f, double* re_im, size_t n);

hermion_status hermion_evolve_linear(const hermion_field* f, double t, int sign,
                                     hermion_field** out);
hermion_status hermion_modulation_norm(const hermion_config* cfg, const hermion_field* f,
                                       double p, double q, double* out);

/* --- orchestration (the CLI subcommands) --------------------------------- */
/* Writes trace.jsonl, trace.csv and snapshot files under the config's
 * output directory (or outdir_override when non-NULL). */
hermion_status hermion_run_evolve(const hermion_config* cfg, const char* outdir_override);
/* Computes the configured datum's modulation norm; optional table dumps. */
hermion_status hermion_run_norm(const hermion_config* cfg, double p, double q,
                                const char* table_csv_path, const char* table_bin_path,
                                double* out);
/* Runs the invariant suite; report lands at report_path (or the default
 * location). Returns HERMION_ERR_CHECK when a hard criterion fails. */
hermion_status hermion_run_verify(const hermion_config* cfg, const char* only_check,
                                  const char* report_path);
hermion_status hermion_run_report(const char* trace_dir);

#ifdef __cplusplus
}
#endif

#endif /* HERMION_H */
