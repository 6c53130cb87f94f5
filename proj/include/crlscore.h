/*
 * crlscore - evaluation toolkit for causal representation learning outputs.
 *
 * C API over the C++ core: opaque handles, status codes, and UTF-8 strings.
 * Every function returns CRL_OK on success; on failure crl_last_error()
 * carries a one-line message for the calling thread. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * crl_string_free(); handles are released with their matching *_free().
 *
 * Operations that degrade gracefully (constant columns, empty masks, ...)
 * accumulate warnings; crl_take_warnings() returns them as a JSON array for
 * the last completed call, or NULL when there were none.
 */
#ifndef CRLSCORE_H
#define CRLSCORE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crl_status {
    CRL_OK = 0,
    CRL_ERR_PARSE = 1,      /* malformed input file or config */
    CRL_ERR_VALIDATION = 2, /* input violates a domain contract */
    CRL_ERR_IO = 3,         /* missing or unwritable file */
    CRL_ERR_ARGUMENT = 4,   /* bad argument (null, range, mismatch) */
    CRL_ERR_INTERNAL = 5
} crl_status;

typedef struct crl_graph crl_graph;
typedef struct crl_table crl_table;
typedef struct crl_mask crl_mask;
typedef struct crl_scm crl_scm;
typedef struct crl_scorecard crl_scorecard;
typedef struct crl_report crl_report;

/* library ----------------------------------------------------------------- */
const char* crl_version(void);
const char* crl_last_error(void);
void crl_string_free(char* s);
char* crl_take_warnings(void);

/* causal graphs ------------------------------------------------------------ */
crl_status crl_graph_load(const char* path, crl_graph** out);
crl_status crl_graph_parse(const char* json_text, crl_graph** out);
crl_status crl_graph_save(const crl_graph* g, const char* path);
void crl_graph_free(crl_graph* g);

crl_status crl_graph_topo_order(const crl_graph* g, char** json_out);
crl_status crl_graph_census(const crl_graph* g, char** json_out);
crl_status crl_graph_dsep(const crl_graph* g, const char* x, const char* y,
                          const char* given_csv, int* separated_out);
crl_status crl_graph_implied(const crl_graph* g, int max_conditioning, char** json_out);
crl_status crl_graph_compare(const crl_graph* truth, const crl_graph* predicted,
                             const char* scores_csv_path, char** json_out);

/* tables and masks ---------------------------------------------------------- */
crl_status crl_table_load(const char* path, crl_table** out);
crl_status crl_table_save(const crl_table* t, const char* path);
crl_status crl_table_to_csv(const crl_table* t, char** csv_out);
crl_status crl_table_shape(const crl_table* t, int64_t* rows_out, int64_t* cols_out);
crl_status crl_table_column_name(const crl_table* t, int64_t index, char** name_out);
void crl_table_free(crl_table* t);

crl_status crl_mask_load(const char* path, crl_mask** out);
crl_status crl_mask_save(const crl_mask* m, const char* path);
void crl_mask_free(crl_mask* m);

/* independence tests --------------------------------------------------------
 * bins > 0 first applies equal-frequency binning to numeric columns. */
crl_status crl_indep_chi2(const crl_table* data, const char* x, const char* y,
                          const char* given_csv, double alpha, int bins, char** json_out);
crl_status crl_indep_audit(const crl_graph* g, const crl_table* data, int max_conditioning,
                           double alpha, int bins, char** json_out);
crl_status crl_indep_filter(const crl_table* data, const char* x, const char* y, uint64_t seed,
                            crl_table** filtered_out, char** summary_json);

/* representation metrics ---------------------------------------------------- */
crl_status crl_metrics_association(const crl_table* factors, const crl_table* latents,
                                   const char* metric, crl_table** matrix_out);
crl_status crl_metrics_assign(const crl_table* matrix, int include_sweep, char** json_out);
/* metrics_csv selects a subset of "mic,tic,irs,jemmig,dci"; NULL means all. */
crl_status crl_metrics_disentangle(const crl_table* factors, const crl_table* latents, int bins,
                                   uint64_t seed, const char* metrics_csv, char** json_out);

/* generation metrics --------------------------------------------------------- */
crl_status crl_metrics_reconstruction(const crl_table* original, const crl_table* reconstructed,
                                      const char* mode, double* out);
crl_status crl_metrics_composition_l1(const crl_table* original, const crl_table* output,
                                      double* out);
crl_status crl_metrics_fid(const crl_table* a, const crl_table* b, double* out);
crl_status crl_metrics_kid(const crl_table* a, const crl_table* b, double* out);
crl_status crl_metrics_inception_score(const crl_table* probs, double* out);
crl_status crl_metrics_iou(const crl_mask* a, const crl_mask* b, double* out);
crl_status crl_metrics_effectiveness(const crl_table* target, const char* target_column,
                                     const crl_table* predicted, const char* predicted_column,
                                     const char* kind, double* out);
/* cases CSV: header generated,oracle,variable,value; mask paths are resolved
 * relative to the CSV's directory. */
crl_status crl_metrics_counterfactual(const char* cases_csv_path, char** json_out);

/* scorecards and run aggregation ---------------------------------------------
 * h_override <= 0 keeps the card's h. */
crl_status crl_scorecard_build(const char* config_path, const char* values_csv_path,
                               int degenerate_to_half, double h_override, crl_scorecard** out);
crl_status crl_scorecard_json(const crl_scorecard* card, char** json_out);
crl_status crl_scorecard_svg(const crl_scorecard* card, const char* kind, char** svg_out);
void crl_scorecard_free(crl_scorecard* card);

crl_status crl_runs_aggregate(const char* runs_csv_path, const char* mode, int k,
                              const char* std_mode, char** json_out);

/* structural causal models ---------------------------------------------------- */
crl_status crl_scm_load(const char* path, crl_scm** out);
crl_status crl_scm_save(const crl_scm* scm, const char* path);
crl_status crl_scm_to_json(const crl_scm* scm, char** json_out);
void crl_scm_free(crl_scm* scm);

crl_status crl_scm_sample(const crl_scm* scm, int64_t n, uint64_t seed, crl_table** out);
/* assignments look like "name=value,name=value" */
crl_status crl_scm_intervene(const crl_scm* scm, const char* assignments, crl_scm** out);
crl_status crl_scm_counterfactual(const crl_scm* scm, const crl_table* observation, int64_t row,
                                  const char* assignments, crl_table** row_out);

crl_status crl_pendulum_render(double pendulum_angle, double light_angle, crl_mask** mask_out,
                               char** scene_json);
/* Writes factual_NNN.pbm / oracle_NNN.pbm plus a cases.csv index into out_dir;
 * intervene_variable NULL means the identity intervention. */
crl_status crl_pendulum_pairs(int64_t n, uint64_t seed, const char* intervene_variable,
                              double intervene_value, const char* out_dir, char** summary_json);

/* reports ---------------------------------------------------------------------- */
crl_status crl_report_new(crl_report** out);
crl_status crl_report_set_command(crl_report* r, const char* command);
crl_status crl_report_add_input(crl_report* r, const char* path);
crl_status crl_report_add_section(crl_report* r, const char* name, const char* json_payload);
crl_status crl_report_add_warning(crl_report* r, const char* message);
/* format: "text" or "json"; numbers agree across both at 6 significant digits */
crl_status crl_report_emit(const crl_report* r, const char* format, char** out);
void crl_report_free(crl_report* r);

#ifdef __cplusplus
}
#endif

#endif /* CRLSCORE_H */
