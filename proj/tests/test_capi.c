/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

#include "walldist/walldist.h"

static int failures = 0;

#define EXPECT(cond)                                                       \
  do {                                                                     \
    if (!(cond)) {                                                         \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                          \
    }                                                                      \
  } while (0)

static const char* channel =
    "[case]\nname = channel\n[grid]\nni = 41\nnj = 41\n"
    "[solver]\nformulation = eikonal\nscheme = UW\n";

static void test_run(const char* dir) {
  wd_config* cfg = NULL;
  wd_result* res = NULL;
  wd_summary sum;
  size_t k;
  int saw_field = 0;

  EXPECT(wd_config_parse(channel, &cfg) == WD_OK);
  EXPECT(strcmp(wd_config_case(cfg), "channel") == 0);
  EXPECT(wd_config_enable_outputs(cfg, "vtk,histogram") == WD_OK);
  EXPECT(wd_config_enable_outputs(cfg, "movie") == WD_ERR_INVALID_ARGUMENT);
  EXPECT(wd_run(cfg, dir, &res) == WD_OK);
  EXPECT(wd_result_status(res) == WD_RUN_CONVERGED);
  EXPECT(wd_result_summary(res, &sum) == WD_OK);
  EXPECT(strcmp(sum.scheme, "uw") == 0);
  EXPECT(strcmp(sum.grid, "41x41") == 0);
  EXPECT(sum.converged == 1);
  EXPECT(sum.l2 < 1e-3);
  EXPECT(wd_result_file_count(res) == 5);
  for (k = 0; k < wd_result_file_count(res); ++k)
    if (strstr(wd_result_file(res, k), "field.csv")) saw_field = 1;
  EXPECT(saw_field);
  EXPECT(wd_result_file(res, 99) == NULL);
  EXPECT(strcmp(wd_result_dir(res), dir) == 0);
  wd_result_free(res);
  wd_config_free(cfg);
}

static void test_errors(void) {
  wd_config* cfg = NULL;
  wd_config* other = NULL;
  const wd_config* pair[2];
  char table[4096];
  wd_run_status worst;

  EXPECT(wd_config_parse("[case]\nname = channel\n[solver]\nscheme = E9\n", &cfg) == WD_ERR_CONFIG_PARSE);
  EXPECT(strstr(wd_last_error(), "scheme") != NULL);
  EXPECT(strstr(wd_last_error(), ":4") != NULL);
  EXPECT(wd_config_load("/nonexistent/walldist.ini", &cfg) == WD_ERR_IO);
  EXPECT(wd_config_parse(NULL, &cfg) == WD_ERR_NULL_HANDLE);
  EXPECT(wd_run(NULL, NULL, NULL) == WD_ERR_NULL_HANDLE);
  EXPECT(strcmp(wd_status_string(WD_ERR_CASE_MISMATCH), "case mismatch") == 0);
  EXPECT(strcmp(wd_status_string(WD_OK), "ok") == 0);

  EXPECT(wd_config_parse(channel, &cfg) == WD_OK);
  EXPECT(wd_config_parse("[case]\nname = box2d\n", &other) == WD_OK);
  pair[0] = cfg;
  pair[1] = other;
  EXPECT(wd_compare(pair, 2, "/tmp/walldist_capi_cmp", table, sizeof table, &worst) == WD_ERR_CASE_MISMATCH);
  EXPECT(wd_compare(pair, 1, "/tmp/walldist_capi_cmp", table, sizeof table, &worst) == WD_ERR_INVALID_ARGUMENT);
  wd_config_free(other);
  wd_config_free(cfg);
}

static void test_solve(void) {
  wd_grid* g = NULL;
  const int faces[6] = {0, 0, 1, 1, 0, 0};
  double *phi, *x, *y;
  int iters = 0, converged = 0;
  size_t n, p;
  double worst = 0.0;

  EXPECT(wd_grid_cartesian(3, 3, 1.0, 1.0, &g) == WD_ERR_DIMENSION_TOO_SMALL);
  EXPECT(wd_grid_cartesian(21, 21, 1.0, 1.0, &g) == WD_OK);
  n = wd_grid_size(g);
  EXPECT(n == 441);
  phi = malloc(n * sizeof *phi);
  x = malloc(n * sizeof *x);
  y = malloc(n * sizeof *y);
  EXPECT(wd_grid_coords(g, x, y, n) == WD_OK);
  EXPECT(wd_solve(g, faces, "eikonal", "UW", 0.5, phi, n, &iters, &converged) == WD_OK);
  EXPECT(converged == 1);
  EXPECT(iters > 0);
  for (p = 0; p < n; ++p) {
    const double ex = y[p] < 1.0 - y[p] ? y[p] : 1.0 - y[p];
    if (fabs(phi[p] - ex) > worst) worst = fabs(phi[p] - ex);
  }
  EXPECT(worst < 1e-3);
  EXPECT(wd_solve(g, faces, "eikonal", "UW", 0.5, phi, n - 1, NULL, NULL) == WD_ERR_DIMENSION_MISMATCH);
  EXPECT(wd_solve(g, faces, "wave", "UW", 0.5, phi, n, NULL, NULL) == WD_ERR_INVALID_ARGUMENT);
  free(phi);
  free(x);
  free(y);
  wd_grid_free(g);
}

int main(void) {
  char dir[128];
  snprintf(dir, sizeof dir, "/tmp/walldist_capi_%d", (int)getpid());
  test_run(dir);
  test_errors();
  test_solve();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
