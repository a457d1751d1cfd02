#ifndef WALLDIST_H
#define WALLDIST_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define WD_API __attribute__((visibility("default")))
#else
#define WD_API
#endif

typedef enum wd_status {
  WD_OK = 0,
  WD_ERR_INVALID_ARGUMENT = 1,
  WD_ERR_DIMENSION_TOO_SMALL = 2,
  WD_ERR_DEGENERATE_MAPPING = 3,
  WD_ERR_SINGULAR_METRIC = 4,
  WD_ERR_LINE_TOO_SHORT = 5,
  WD_ERR_ZERO_PIVOT = 6,
  WD_ERR_NEGATIVE_RADICAND = 7,
  WD_ERR_DIVERGENCE = 8,
  WD_ERR_UNKNOWN_CASE = 9,
  WD_ERR_CFL_VIOLATION = 10,
  WD_ERR_INVALID_POLYGON = 11,
  WD_ERR_INVALID_EXPONENT = 12,
  WD_ERR_BODY_OUTSIDE_DOMAIN = 13,
  WD_ERR_TOO_FEW_ITERATIONS = 14,
  WD_ERR_DIMENSION_MISMATCH = 15,
  WD_ERR_CONFIG_PARSE = 16,
  WD_ERR_CASE_MISMATCH = 17,
  WD_ERR_IO = 18,
  WD_ERR_NULL_HANDLE = 19,
  WD_ERR_INTERNAL = 20
} wd_status;

/* Outcome of a run; also the CLI exit code. */
typedef enum wd_run_status {
  WD_RUN_CONVERGED = 0,
  WD_RUN_FAILED = 1,
  WD_RUN_CONFIG_ERROR = 2,
  WD_RUN_NOT_CONVERGED = 3,
  WD_RUN_IO_ERROR = 4
} wd_run_status;

typedef struct wd_config wd_config;
typedef struct wd_result wd_result;
typedef struct wd_grid wd_grid;

typedef struct wd_summary {
  char case_name[32];
  char formulation[32];
  char scheme[8];
  char grid[32];
  int iters;
  int converged;
  double l2;
  double max_pct_err;
  double sec_per_100;
} wd_summary;

WD_API const char* wd_status_string(wd_status s);
/* Message of the last failing call on this thread ("" when none). */
WD_API const char* wd_last_error(void);
WD_API const char* wd_version(void);

/* Run configurations (sectioned key = value text). */
WD_API wd_status wd_config_load(const char* path, wd_config** out);
WD_API wd_status wd_config_parse(const char* text, wd_config** out);
WD_API void wd_config_free(wd_config* cfg);
WD_API const char* wd_config_case(const wd_config* cfg);
/* Comma-separated subset of field,history,histogram,isolines,vtk to switch on. */
WD_API wd_status wd_config_enable_outputs(wd_config* cfg, const char* list);

/* Runs one configuration. out_dir may be NULL (configured directory). A
   relative directory is placed under $WALLDIST_OUTPUT_ROOT when set. Solver
   trouble is reported through wd_result_status; the call itself returns WD_OK. */
WD_API wd_status wd_run(const wd_config* cfg, const char* out_dir, wd_result** out);
WD_API wd_run_status wd_result_status(const wd_result* r);
WD_API const char* wd_result_message(const wd_result* r);
WD_API wd_status wd_result_summary(const wd_result* r, wd_summary* out);
WD_API size_t wd_result_file_count(const wd_result* r);
WD_API const char* wd_result_file(const wd_result* r, size_t i);
/* Output directory the run wrote to. */
WD_API const char* wd_result_dir(const wd_result* r);
WD_API void wd_result_free(wd_result* r);

/* Runs n >= 2 configurations sharing a case into out_dir/run_<k> and writes
   out_dir/compare.csv. The text table is copied to table (NUL-terminated,
   truncated to table_len) when table is not NULL. worst receives the largest
   run status. */
WD_API wd_status wd_compare(const wd_config* const* cfgs, size_t n, const char* out_dir, char* table,
                            size_t table_len, wd_run_status* worst);

/* Direct solver access. faces: IMin, IMax, JMin, JMax, KMin, KMax with 1 for
   wall and 0 for zero-gradient far field. */
WD_API wd_status wd_grid_cartesian(int ni, int nj, double lx, double ly, wd_grid** out);
WD_API wd_status wd_grid_from_case(const wd_config* cfg, wd_grid** out);
WD_API size_t wd_grid_size(const wd_grid* g);
WD_API wd_status wd_grid_coords(const wd_grid* g, double* x, double* y, size_t n);
WD_API void wd_grid_free(wd_grid* g);

/* Solves to steady state; phi receives ni*nj values (i fastest). formulation
   and scheme take the config names ("hj", "E4", ...). */
WD_API wd_status wd_solve(const wd_grid* g, const int faces[6], const char* formulation, const char* scheme,
                          double cfl, double* phi, size_t n, int* iters, int* converged);

#ifdef __cplusplus
}
#endif

#endif
