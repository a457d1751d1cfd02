#include "walldist/walldist.h"

#include <cstring>
#include <sstream>
#include <string>

#include "walldist/runner.hpp"

using namespace walldist;

struct wd_config {
  RunConfig cfg;
};

struct wd_result {
  RunResult res;
  std::string dir;
  std::vector<std::string> files;
};

struct wd_grid {
  CurvilinearGrid grid;
};

namespace {

thread_local std::string g_error;

wd_status code_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return WD_ERR_INVALID_ARGUMENT;
    case ErrorKind::DimensionTooSmall: return WD_ERR_DIMENSION_TOO_SMALL;
    case ErrorKind::DegenerateMapping: return WD_ERR_DEGENERATE_MAPPING;
    case ErrorKind::SingularMetric: return WD_ERR_SINGULAR_METRIC;
    case ErrorKind::LineTooShort: return WD_ERR_LINE_TOO_SHORT;
    case ErrorKind::ZeroPivot: return WD_ERR_ZERO_PIVOT;
    case ErrorKind::NegativeRadicand: return WD_ERR_NEGATIVE_RADICAND;
    case ErrorKind::Divergence: return WD_ERR_DIVERGENCE;
    case ErrorKind::UnknownCase: return WD_ERR_UNKNOWN_CASE;
    case ErrorKind::CflViolation: return WD_ERR_CFL_VIOLATION;
    case ErrorKind::InvalidPolygon: return WD_ERR_INVALID_POLYGON;
    case ErrorKind::InvalidExponent: return WD_ERR_INVALID_EXPONENT;
    case ErrorKind::BodyOutsideDomain: return WD_ERR_BODY_OUTSIDE_DOMAIN;
    case ErrorKind::TooFewIterations: return WD_ERR_TOO_FEW_ITERATIONS;
    case ErrorKind::DimensionMismatch: return WD_ERR_DIMENSION_MISMATCH;
    case ErrorKind::ConfigParse: return WD_ERR_CONFIG_PARSE;
    case ErrorKind::CaseMismatch: return WD_ERR_CASE_MISMATCH;
    case ErrorKind::Io: return WD_ERR_IO;
  }
  return WD_ERR_INTERNAL;
}

template <class F>
wd_status guarded(F&& f) {
  g_error.clear();
  try {
    f();
    return WD_OK;
  } catch (const Error& e) {
    g_error = e.what();
    return code_of(e.kind());
  } catch (const std::exception& e) {
    g_error = e.what();
    return WD_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown failure";
    return WD_ERR_INTERNAL;
  }
}

wd_status null_handle(const char* what) {
  g_error = std::string("null ") + what;
  return WD_ERR_NULL_HANDLE;
}

void copy(char* dst, std::size_t n, const std::string& s) {
  if (!dst || n == 0) return;
  const std::size_t m = std::min(n - 1, s.size());
  std::memcpy(dst, s.data(), m);
  dst[m] = '\0';
}

}  // namespace

extern "C" {

const char* wd_status_string(wd_status s) {
  switch (s) {
    case WD_OK: return "ok";
    case WD_ERR_NULL_HANDLE: return "null handle";
    case WD_ERR_INTERNAL: return "internal error";
    default: break;
  }
  if (s > WD_OK && s < WD_ERR_NULL_HANDLE) return to_string(static_cast<ErrorKind>(s - 1));
  return "unknown status";
}

const char* wd_last_error(void) { return g_error.c_str(); }

const char* wd_version(void) { return "1.0.0"; }

wd_status wd_config_load(const char* path, wd_config** out) {
  if (!path || !out) return null_handle("argument");
  return guarded([&] { *out = new wd_config{load_config(path)}; });
}

wd_status wd_config_parse(const char* text, wd_config** out) {
  if (!text || !out) return null_handle("argument");
  return guarded([&] {
    std::istringstream is(text);
    *out = new wd_config{parse_config(is)};
  });
}

void wd_config_free(wd_config* cfg) { delete cfg; }

const char* wd_config_case(const wd_config* cfg) { return cfg ? to_string(cfg->cfg.geometry.id) : ""; }

wd_status wd_config_enable_outputs(wd_config* cfg, const char* list) {
  if (!cfg || !list) return null_handle("argument");
  return guarded([&] {
    std::stringstream ss(list);
    std::string item;
    EmitFlags e = cfg->cfg.emit;
    while (std::getline(ss, item, ',')) {
      if (item == "field") e.field = true;
      else if (item == "history") e.history = true;
      else if (item == "histogram") e.histogram = true;
      else if (item == "isolines") e.isolines = true;
      else if (item == "vtk") e.vtk = true;
      else if (!item.empty()) throw Error(ErrorKind::InvalidArgument, "unknown output '" + item + "'");
    }
    cfg->cfg.emit = e;
  });
}

wd_status wd_run(const wd_config* cfg, const char* out_dir, wd_result** out) {
  if (!cfg || !out) return null_handle("argument");
  return guarded([&] {
    std::optional<std::filesystem::path> o;
    if (out_dir) o = out_dir;
    const auto dir = resolve_output_dir(cfg->cfg, o);
    auto* r = new wd_result{run(cfg->cfg, dir), dir.string(), {}};
    for (const auto& f : r->res.files) r->files.push_back(f.string());
    *out = r;
  });
}

wd_run_status wd_result_status(const wd_result* r) {
  return r ? static_cast<wd_run_status>(r->res.status) : WD_RUN_FAILED;
}

const char* wd_result_message(const wd_result* r) { return r ? r->res.message.c_str() : ""; }

wd_status wd_result_summary(const wd_result* r, wd_summary* out) {
  if (!r || !out) return null_handle("argument");
  const auto& s = r->res.summary;
  copy(out->case_name, sizeof out->case_name, s.case_name);
  copy(out->formulation, sizeof out->formulation, s.formulation);
  copy(out->scheme, sizeof out->scheme, s.scheme);
  copy(out->grid, sizeof out->grid, s.grid);
  out->iters = s.iters;
  out->converged = s.converged ? 1 : 0;
  out->l2 = s.l2;
  out->max_pct_err = s.max_pct_err;
  out->sec_per_100 = s.sec_per_100;
  return WD_OK;
}

size_t wd_result_file_count(const wd_result* r) { return r ? r->files.size() : 0; }

const char* wd_result_file(const wd_result* r, size_t i) {
  return r && i < r->files.size() ? r->files[i].c_str() : nullptr;
}

const char* wd_result_dir(const wd_result* r) { return r ? r->dir.c_str() : ""; }

void wd_result_free(wd_result* r) { delete r; }

wd_status wd_compare(const wd_config* const* cfgs, size_t n, const char* out_dir, char* table, size_t table_len,
                     wd_run_status* worst) {
  if (!cfgs || !out_dir) return null_handle("argument");
  for (size_t k = 0; k < n; ++k)
    if (!cfgs[k]) return null_handle("config");
  return guarded([&] {
    std::vector<RunConfig> v;
    for (size_t k = 0; k < n; ++k) v.push_back(cfgs[k]->cfg);
    std::ostringstream os;
    const auto dir = resolve_output_dir(v.empty() ? RunConfig{} : v[0], std::filesystem::path(out_dir));
    const auto res = compare(v, dir, &os);
    int w = 0;
    for (const auto& r : res) w = std::max(w, static_cast<int>(r.status));
    if (worst) *worst = static_cast<wd_run_status>(w);
    copy(table, table_len, os.str());
  });
}

wd_status wd_grid_cartesian(int ni, int nj, double lx, double ly, wd_grid** out) {
  if (!out) return null_handle("argument");
  return guarded([&] { *out = new wd_grid{build_cartesian(ni, nj, lx, ly)}; });
}

wd_status wd_grid_from_case(const wd_config* cfg, wd_grid** out) {
  if (!cfg || !out) return null_handle("argument");
  return guarded([&] { *out = new wd_grid{build_case_grid(cfg->cfg.geometry, cfg->cfg.dims)}; });
}

size_t wd_grid_size(const wd_grid* g) { return g ? g->grid.dims.size() : 0; }

wd_status wd_grid_coords(const wd_grid* g, double* x, double* y, size_t n) {
  if (!g || !x || !y) return null_handle("argument");
  if (n != g->grid.dims.size()) {
    g_error = "buffer size does not match the grid";
    return WD_ERR_DIMENSION_MISMATCH;
  }
  std::copy(g->grid.x().values().begin(), g->grid.x().values().end(), x);
  std::copy(g->grid.y().values().begin(), g->grid.y().values().end(), y);
  return WD_OK;
}

void wd_grid_free(wd_grid* g) { delete g; }

wd_status wd_solve(const wd_grid* g, const int faces[6], const char* formulation, const char* scheme, double cfl,
                   double* phi, size_t n, int* iters, int* converged) {
  if (!g || !faces || !formulation || !scheme || !phi) return null_handle("argument");
  return guarded([&] {
    if (n != g->grid.dims.size()) throw Error(ErrorKind::DimensionMismatch, "phi buffer does not match the grid");
    std::array<FaceKind, 6> f{};
    for (int k = 0; k < 6; ++k) f[k] = faces[k] ? FaceKind::Wall : FaceKind::FarField;
    SolveConfig c;
    c.formulation.kind = parse_formulation(formulation);
    c.scheme = parse_scheme(scheme);
    c.cfl = cfl;
    const auto rep = solve_steady(g->grid, make_boundary(f), c);
    std::copy(rep.phi.values().begin(), rep.phi.values().end(), phi);
    if (iters) *iters = rep.iters;
    if (converged) *converged = rep.converged ? 1 : 0;
  });
}

}  // extern "C"
