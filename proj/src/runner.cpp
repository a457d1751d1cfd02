#include "walldist/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace walldist {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d))
    throw Error(ErrorKind::InvalidArgument, "expected a number, got '" + v + "'");
  return d;
}

int to_int(const std::string& v) {
  const double d = to_double(v);
  if (d != std::floor(d) || std::fabs(d) > 1e9)
    throw Error(ErrorKind::InvalidArgument, "expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

bool to_bool(const std::string& v) {
  const auto s = lower(v);
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw Error(ErrorKind::InvalidArgument, "expected a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty list");
  return out;
}

PressureParams& pressure(RunConfig& c) {
  if (!c.pressure) c.pressure.emplace();
  return *c.pressure;
}

struct Entry {
  std::string section, key, value;
  int line;
};

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"case",
       {
           {"name", [](RunConfig&, const std::string&) {}},  // handled first
           {"label", [](RunConfig& c, const std::string& v) { c.label = v; }},
           {"extent_x", [](RunConfig& c, const std::string& v) { c.geometry.extent[0] = to_double(v); }},
           {"extent_y", [](RunConfig& c, const std::string& v) { c.geometry.extent[1] = to_double(v); }},
           {"extent_z", [](RunConfig& c, const std::string& v) { c.geometry.extent[2] = to_double(v); }},
           {"lref", [](RunConfig& c, const std::string& v) { c.geometry.lref = to_double(v); }},
           {"oracle_samples", [](RunConfig& c, const std::string& v) { c.geometry.samples_per_curve = to_int(v); }},
       }},
      {"grid",
       {
           {"ni", [](RunConfig& c, const std::string& v) { c.dims.ni = to_int(v); }},
           {"nj", [](RunConfig& c, const std::string& v) { c.dims.nj = to_int(v); }},
           {"nk", [](RunConfig& c, const std::string& v) { c.dims.nk = to_int(v); }},
       }},
      {"solver",
       {
           {"formulation", [](RunConfig& c, const std::string& v) { c.solve.formulation.kind = parse_formulation(v); }},
           {"scheme", [](RunConfig& c, const std::string& v) { c.solve.scheme = parse_scheme(v); }},
           {"cfl", [](RunConfig& c, const std::string& v) { c.solve.cfl = to_double(v); }},
           {"epsilon", [](RunConfig& c, const std::string& v) { c.solve.formulation.epsilon = to_double(v); }},
           {"lad_c", [](RunConfig& c, const std::string& v) { c.solve.formulation.lad_C = to_double(v); }},
           {"alpha_f", [](RunConfig& c, const std::string& v) { c.solve.filter.alpha_f = to_double(v); }},
           {"filter_order", [](RunConfig& c, const std::string& v) { c.solve.filter.order_n = to_int(v); }},
           {"filter",
            [](RunConfig& c, const std::string& v) {
              if (lower(v) == "auto") c.solve.filter_enabled.reset();
              else c.solve.filter_enabled = to_bool(v);
            }},
           {"tol", [](RunConfig& c, const std::string& v) { c.solve.tol = to_double(v); }},
           {"max_iters", [](RunConfig& c, const std::string& v) { c.solve.max_iters = to_int(v); }},
           {"front_pairing",
            [](RunConfig& c, const std::string& v) { c.solve.formulation.front_pairing = parse_front_pairing(v); }},
           {"freeze_gamma", [](RunConfig& c, const std::string& v) { c.solve.freeze_gamma = to_bool(v); }},
       }},
      {"motion",
       {
           {"steps", [](RunConfig& c, const std::string& v) { c.steps = to_int(v); }},
           {"dt", [](RunConfig& c, const std::string& v) { c.geometry.motion.dt = to_double(v); }},
           {"tau", [](RunConfig& c, const std::string& v) { c.geometry.motion.tau = to_double(v); }},
           {"piston_x0", [](RunConfig& c, const std::string& v) { c.geometry.motion.piston_x0 = to_double(v); }},
           {"piston_amplitude",
            [](RunConfig& c, const std::string& v) { c.geometry.motion.piston_amplitude = to_double(v); }},
           {"piston_period", [](RunConfig& c, const std::string& v) { c.geometry.motion.piston_period = to_double(v); }},
           {"cube_side", [](RunConfig& c, const std::string& v) { c.geometry.motion.cube_side = to_double(v); }},
           {"cube_cx", [](RunConfig& c, const std::string& v) { c.geometry.motion.cube_cx = to_double(v); }},
           {"cube_y0", [](RunConfig& c, const std::string& v) { c.geometry.motion.cube_y0 = to_double(v); }},
           {"floor_y", [](RunConfig& c, const std::string& v) { c.geometry.motion.floor_y = to_double(v); }},
           {"gravity", [](RunConfig& c, const std::string& v) { c.geometry.motion.gravity = to_double(v); }},
           {"energy_retention",
            [](RunConfig& c, const std::string& v) { c.geometry.motion.energy_retention = to_double(v); }},
           {"anchor_band", [](RunConfig& c, const std::string& v) { c.geometry.motion.anchor_band = to_bool(v); }},
       }},
      {"bump",
       {
           {"x_min", [](RunConfig& c, const std::string& v) { c.geometry.bump.x_min = to_double(v); }},
           {"x_max", [](RunConfig& c, const std::string& v) { c.geometry.bump.x_max = to_double(v); }},
           {"y_top", [](RunConfig& c, const std::string& v) { c.geometry.bump.y_top = to_double(v); }},
           {"chord", [](RunConfig& c, const std::string& v) { c.geometry.bump.chord = to_double(v); }},
           {"height", [](RunConfig& c, const std::string& v) { c.geometry.bump.height = to_double(v); }},
           {"x_center", [](RunConfig& c, const std::string& v) { c.geometry.bump.x_center = to_double(v); }},
       }},
      {"grain",
       {
           {"center_x", [](RunConfig& c, const std::string& v) { c.grain.center[0] = to_double(v); }},
           {"center_y", [](RunConfig& c, const std::string& v) { c.grain.center[1] = to_double(v); }},
           {"legs", [](RunConfig& c, const std::string& v) { c.grain.legs = to_int(v); }},
           {"r_tip", [](RunConfig& c, const std::string& v) { c.grain.r_tip = to_double(v); }},
           {"r_port", [](RunConfig& c, const std::string& v) { c.grain.r_port = to_double(v); }},
           {"leg_width", [](RunConfig& c, const std::string& v) { c.grain.leg_width = to_double(v); }},
           {"r_case", [](RunConfig& c, const std::string& v) { c.grain.r_case = to_double(v); }},
           {"arc_points", [](RunConfig& c, const std::string& v) { c.grain.arc_points = to_int(v); }},
           {"f", [](RunConfig& c, const std::string& v) { c.burnback.F = to_double(v); }},
           {"dt", [](RunConfig& c, const std::string& v) { c.burnback.dt = to_double(v); }},
           {"steps", [](RunConfig& c, const std::string& v) { c.burnback.n_steps = to_int(v); }},
           {"levels", [](RunConfig& c, const std::string& v) { c.burnback.levels = to_list(v); }},
           {"level_unit", [](RunConfig& c, const std::string& v) { c.burnback.lref = to_double(v); }},
           {"mode", [](RunConfig& c, const std::string& v) { c.burnback.mode = parse_levelset_mode(v); }},
           {"pressure",
            [](RunConfig& c, const std::string& v) {
              if (to_bool(v)) c.pressure = c.pressure.value_or(PressureParams{});
              else c.pressure.reset();
            }},
           {"burn_a", [](RunConfig& c, const std::string& v) { pressure(c).a = to_double(v); }},
           {"burn_n", [](RunConfig& c, const std::string& v) { pressure(c).n = to_double(v); }},
           {"c_star", [](RunConfig& c, const std::string& v) { pressure(c).c_star = to_double(v); }},
           {"rho_p", [](RunConfig& c, const std::string& v) { pressure(c).rho_p = to_double(v); }},
           {"rho_0", [](RunConfig& c, const std::string& v) { pressure(c).rho_0 = to_double(v); }},
           {"a_star", [](RunConfig& c, const std::string& v) { pressure(c).a_star = to_double(v); }},
       }},
      {"output",
       {
           {"dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
           {"field", [](RunConfig& c, const std::string& v) { c.emit.field = to_bool(v); }},
           {"history", [](RunConfig& c, const std::string& v) { c.emit.history = to_bool(v); }},
           {"histogram", [](RunConfig& c, const std::string& v) { c.emit.histogram = to_bool(v); }},
           {"isolines", [](RunConfig& c, const std::string& v) { c.emit.isolines = to_bool(v); }},
           {"vtk", [](RunConfig& c, const std::string& v) { c.emit.vtk = to_bool(v); }},
           {"histogram_bin", [](RunConfig& c, const std::string& v) { c.histogram_bin = to_double(v); }},
           {"field_every", [](RunConfig& c, const std::string& v) { c.field_every = to_int(v); }},
       }},
  };
  return s;
}

bool unsteady(CaseId id) { return id == CaseId::Piston || id == CaseId::BouncingCube; }

// Concave wall corners: the central schemes need a smaller pseudo-time step.
bool cornered(CaseId id) {
  return id == CaseId::Box2D || id == CaseId::Box3D || unsteady(id) || id == CaseId::Burnback;
}

Dims default_dims(CaseId id) {
  switch (id) {
    case CaseId::Box3D: return {51, 51, 51};
    case CaseId::Bump: return {201, 101, 1};
    case CaseId::Piston: return {101, 51, 1};
    case CaseId::Burnback: return {201, 201, 1};
    default: return {101, 101, 1};
  }
}

std::string lowered(const char* s) { return lower(s); }

}  // namespace

RunConfig parse_config(std::istream& is, const std::string& source) {
  auto fail = [&](int line, const std::string& key, const std::string& msg) -> void {
    throw Error(ErrorKind::ConfigParse,
                source + ":" + std::to_string(line) + ": " + (key.empty() ? "" : "key '" + key + "': ") + msg);
  };

  std::vector<Entry> entries;
  std::string section, raw;
  int line = 0;
  std::set<std::string> seen;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    const auto c = s.find_first_of("#;");
    if (c != std::string::npos) s.resize(c);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "", "malformed section header");
      section = lower(trim(s.substr(1, s.size() - 2)));
      if (!schema().count(section)) fail(line, "", "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "", "expected key = value");
    const std::string key = lower(trim(s.substr(0, eq)));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) fail(line, key, "key outside any section");
    if (!schema().at(section).count(key)) fail(line, key, "unknown key in [" + section + "]");
    if (!seen.insert(section + "." + key).second) fail(line, key, "duplicate key");
    entries.push_back({section, key, value, line});
  }

  const auto name = std::find_if(entries.begin(), entries.end(),
                                 [](const Entry& e) { return e.section == "case" && e.key == "name"; });
  if (name == entries.end()) fail(line, "name", "[case] name is required");

  RunConfig cfg;
  CaseId id{};
  try {
    id = parse_case(name->value);
  } catch (const Error& e) {
    fail(name->line, "name", e.what());
  }
  cfg.geometry = default_geometry(id);
  if (id == CaseId::Burnback) cfg.geometry.extent = {2.0, 2.0, 1.0};
  cfg.dims = default_dims(id);
  if (unsteady(id) || id == CaseId::Burnback) {
    cfg.solve.formulation.kind = Formulation::Eikonal;
    cfg.solve.scheme = Scheme::UW;
  } else {
    cfg.solve.formulation.kind = Formulation::HJ;
    cfg.solve.scheme = Scheme::E4;
  }
  if (id == CaseId::Burnback) {
    cfg.emit.isolines = true;
    cfg.emit.history = false;
  }

  for (const auto& e : entries) {
    if (e.section == "motion" && !unsteady(id)) fail(e.line, e.key, "[motion] applies to piston and bouncing_cube");
    if (e.section == "bump" && id != CaseId::Bump) fail(e.line, e.key, "[bump] applies to the bump case");
    if (e.section == "grain" && id != CaseId::Burnback) fail(e.line, e.key, "[grain] applies to burnback");
    try {
      schema().at(e.section).at(e.key)(cfg, e.value);
    } catch (const Error& err) {
      fail(e.line, e.key, err.what());
    }
  }

  // Defaults that depend on the chosen formulation and scheme.
  const Formulation f = cfg.solve.formulation.kind;
  const Scheme sc = cfg.solve.scheme;
  if (!seen.count("solver.epsilon")) cfg.solve.formulation.epsilon = unsteady(id) ? 0.15 : 0.2;
  if (!seen.count("solver.alpha_f") && f == Formulation::HJ_Curvature) cfg.solve.filter.alpha_f = 0.495;
  if (!seen.count("solver.cfl")) {
    double cfl = 0.5;
    if (cornered(id) && sc != Scheme::UW) cfl = (sc == Scheme::C4 || sc == Scheme::C6) ? 0.2 : 0.3;
    if (f == Formulation::HJ_LAD) cfl = std::min(cfl, 0.1);
    cfg.solve.cfl = cfl;
  }
  if (cfg.label.empty()) cfg.label = lower(to_string(f)) + "_" + lower(to_string(sc));
  if (id != CaseId::Box3D && !seen.count("grid.nk")) cfg.dims.nk = 1;

  try {
    cfg.solve.validate();
    if (id == CaseId::Box3D ? cfg.dims.nk < 5 : cfg.dims.nk != 1)
      throw Error(ErrorKind::InvalidArgument, id == CaseId::Box3D ? "box3d needs nk >= 5" : "nk must be 1 for 2-D cases");
    if (cfg.dims.ni < 5 || cfg.dims.nj < 5) throw Error(ErrorKind::InvalidArgument, "ni and nj must be at least 5");
    if (unsteady(id)) {
      cfg.geometry.motion.validate();
      if (cfg.steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be positive");
    }
    if (id == CaseId::Bump) cfg.geometry.bump.validate();
    if (id == CaseId::Burnback) {
      cfg.grain.validate();
      if (!(cfg.burnback.F >= 0.0) || !(cfg.burnback.dt > 0.0) || cfg.burnback.n_steps < 0)
        throw Error(ErrorKind::InvalidArgument, "burnback needs F >= 0, dt > 0, steps >= 0");
    }
    if (cfg.pressure) {
      const auto& q = *cfg.pressure;
      chamber_pressure(1.0, q.a, q.n, q.c_star, q.rho_p, q.rho_0, q.a_star);
    }
    if (cfg.histogram_bin && !(*cfg.histogram_bin > 0.0))
      throw Error(ErrorKind::InvalidArgument, "histogram_bin must be positive");
    if (!(cfg.geometry.lref > 0.0)) throw Error(ErrorKind::InvalidArgument, "lref must be positive");
  } catch (const Error& e) {
    fail(line, "", std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config " + path.string());
  return parse_config(in, path.string());
}

fs::path resolve_output_dir(const RunConfig& cfg, const std::optional<fs::path>& out) {
  fs::path dir = out ? *out : cfg.output_dir;
  if (dir.is_relative()) {
    if (const char* root = std::getenv("WALLDIST_OUTPUT_ROOT"); root && *root) dir = fs::path(root) / dir;
  }
  return dir;
}

namespace {

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir_.string() + ": " + ec.message());
  }

  template <class F>
  void write(const std::string& name, F&& body) {
    const fs::path p = dir_ / name;
    std::ofstream os(p);
    if (!os) throw Error(ErrorKind::Io, "cannot open " + p.string());
    body(os);
    os.close();
    if (!os) throw Error(ErrorKind::Io, "write failed for " + p.string());
    files.push_back(p);
  }

  std::vector<fs::path> files;

 private:
  fs::path dir_;
};

std::string grid_string(const Dims& d) {
  std::string s = std::to_string(d.ni) + "x" + std::to_string(d.nj);
  if (d.is3d()) s += "x" + std::to_string(d.nk);
  return s;
}

std::string frame_name(const char* stem, int n, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d.%s", stem, n, ext);
  return buf;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double bin_width(const RunConfig& cfg) {
  if (cfg.histogram_bin) return *cfg.histogram_bin;
  return cfg.solve.formulation.kind == Formulation::Eikonal ? 0.05 : 0.5;
}

RunSummary base_summary(const RunConfig& cfg) {
  RunSummary s;
  s.case_name = to_string(cfg.geometry.id);
  s.formulation = lowered(to_string(cfg.solve.formulation.kind));
  s.scheme = lowered(to_string(cfg.solve.scheme));
  s.grid = grid_string(cfg.dims);
  return s;
}

void run_steady(const RunConfig& cfg, Writer& w, RunResult& res) {
  const auto grid = build_case_grid(cfg.geometry, cfg.dims);
  const auto bc = case_boundary(cfg.geometry, grid);
  const auto exact = exact_field(cfg.geometry, grid);
  SolveOptions opts;
  opts.exact = &exact;
  SolveReport rep;
  try {
    rep = solve_steady(grid, bc, cfg.solve, opts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Divergence) throw;
    res.status = RunStatus::NotConverged;
    res.message = e.what();
    w.write("summary.json", [&](std::ostream& os) { write_summary(os, res.summary); });
    return;
  }
  const auto pct = percentage_errors(rep.phi, exact, &bc);
  auto& s = res.summary;
  s.iters = rep.iters;
  s.converged = rep.converged;
  s.l2 = l2_norm(rep.phi, exact, grid);
  s.max_pct_err = max_abs(pct);
  s.sec_per_100 = rep.wall_time_per_100_iters;
  if (!rep.converged) {
    res.status = RunStatus::NotConverged;
    res.message = "not converged after " + std::to_string(rep.iters) + " iterations";
  }

  if (cfg.emit.field) w.write("field.csv", [&](std::ostream& os) { write_field_csv(os, grid, rep.phi, &exact); });
  if (cfg.emit.history) w.write("history.csv", [&](std::ostream& os) { write_history_csv(os, rep); });
  if (cfg.emit.histogram && !pct.empty())
    w.write("histogram.csv", [&](std::ostream& os) { write_histogram_csv(os, error_histogram(pct, bin_width(cfg))); });
  if (cfg.emit.vtk) w.write("field.vtk", [&](std::ostream& os) { write_vtk(os, grid, rep.phi, &exact); });
  w.write("summary.json", [&](std::ostream& os) { write_summary(os, s); });
}

void run_unsteady(const RunConfig& cfg, Writer& w, RunResult& res) {
  const auto grid = build_case_grid(cfg.geometry, cfg.dims);
  MotionSpec motion = cfg.geometry.motion;
  std::vector<FrameRow> rows;
  SolveReport all;  // concatenated histories
  double worst_l2 = 0.0, worst_pct = 0.0, loop = 0.0;
  int iters = 0;
  bool converged = true;
  int n = 0;
  auto on_frame = [&](const UnsteadyFrame& f) {
    const auto exact = exact_field(cfg.geometry, grid, f.time);
    const auto bc = case_boundary(cfg.geometry, grid, f.time);
    const auto pct = percentage_errors(f.report.phi, exact, &bc);
    FrameRow r{f.time, f.report.iters, f.report.converged, l2_norm(f.report.phi, exact, grid), max_abs(pct)};
    rows.push_back(r);
    worst_l2 = std::max(worst_l2, r.l2);
    worst_pct = std::max(worst_pct, r.max_pct_err);
    iters += f.report.iters;
    loop += f.report.loop_seconds;
    converged = converged && f.report.converged;
    const auto& h = f.report;
    all.residual_history.insert(all.residual_history.end(), h.residual_history.begin(), h.residual_history.end());
    all.l2_history.insert(all.l2_history.end(), h.l2_history.begin(), h.l2_history.end());
    all.iter_seconds.insert(all.iter_seconds.end(), h.iter_seconds.begin(), h.iter_seconds.end());
    if (cfg.emit.field)
      w.write(frame_name("field", n, "csv"), [&](std::ostream& os) { write_field_csv(os, grid, f.report.phi, &exact); });
    if (cfg.emit.vtk)
      w.write(frame_name("field", n, "vtk"), [&](std::ostream& os) { write_vtk(os, grid, f.report.phi, &exact); });
    ++n;
  };
  try {
    solve_unsteady(grid, motion, cfg.solve, cfg.steps, on_frame);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Divergence) throw;
    res.status = RunStatus::NotConverged;
    res.message = e.what();
    converged = false;
  }
  auto& s = res.summary;
  s.iters = iters;
  s.converged = converged;
  s.l2 = worst_l2;
  s.max_pct_err = worst_pct;
  s.sec_per_100 = iters > 0 ? loop / iters * 100.0 : 0.0;
  if (!converged && res.message.empty()) {
    res.status = RunStatus::NotConverged;
    res.message = "a physical step did not converge";
  }
  w.write("frames.csv", [&](std::ostream& os) { write_frames_csv(os, rows); });
  if (cfg.emit.history) w.write("history.csv", [&](std::ostream& os) { write_history_csv(os, all); });
  w.write("summary.json", [&](std::ostream& os) { write_summary(os, s); });
}

void run_burnback(const RunConfig& cfg, Writer& w, RunResult& res) {
  const auto grid = build_case_grid(cfg.geometry, cfg.dims);
  const auto grain = cfg.grain.shape();
  BurnbackConfig bc = cfg.burnback;
  bc.init = cfg.solve;
  std::vector<PerimeterRow> rows;
  const int last = bc.n_steps;
  int n = 0;
  auto on_frame = [&](const BurnbackFrame& f, const ScalarField& phis) {
    std::vector<LevelPolylines> sets;
    for (std::size_t l = 0; l < bc.levels.size(); ++l) {
      PerimeterRow r{f.time, bc.levels[l], f.perimeters[l], std::nullopt};
      if (cfg.pressure && bc.levels[l] == 0.0) {
        const auto& p = *cfg.pressure;
        r.pc = chamber_pressure(f.perimeters[l], p.a, p.n, p.c_star, p.rho_p, p.rho_0, p.a_star);
      }
      rows.push_back(r);
      sets.push_back({bc.levels[l], f.isolines[l]});
    }
    if (cfg.emit.isolines)
      w.write(frame_name("isolines", n, "csv"), [&](std::ostream& os) { write_polylines_csv(os, sets); });
    const bool dump = n == 0 || n == last || (cfg.field_every > 0 && n % cfg.field_every == 0);
    if (cfg.emit.field && dump)
      w.write(frame_name("field", n, "csv"), [&](std::ostream& os) { write_field_csv(os, grid, phis); });
    if (cfg.emit.vtk && dump)
      w.write(frame_name("field", n, "vtk"), [&](std::ostream& os) { write_vtk(os, grid, phis); });
    ++n;
  };
  burnback_run(grid, grain, bc, on_frame);
  auto& s = res.summary;
  s.iters = n > 0 ? n - 1 : 0;
  s.converged = true;
  w.write("perimeters.csv", [&](std::ostream& os) { write_perimeter_csv(os, rows); });
  w.write("summary.json", [&](std::ostream& os) { write_summary(os, s); });
}

}  // namespace

RunResult run(const RunConfig& cfg, const fs::path& dir) {
  RunResult res;
  res.summary = base_summary(cfg);
  Writer w(dir);
  try {
    switch (cfg.geometry.id) {
      case CaseId::Piston:
      case CaseId::BouncingCube: run_unsteady(cfg, w, res); break;
      case CaseId::Burnback: run_burnback(cfg, w, res); break;
      default: run_steady(cfg, w, res); break;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    res.status = RunStatus::Other;
    res.message = std::string(to_string(e.kind())) + ": " + e.what();
  }
  res.files = std::move(w.files);
  return res;
}

std::vector<RunResult> compare(const std::vector<RunConfig>& cfgs, const fs::path& dir, std::ostream* table) {
  if (cfgs.size() < 2) throw Error(ErrorKind::InvalidArgument, "compare needs at least two configs");
  for (const auto& c : cfgs)
    if (c.geometry.id != cfgs[0].geometry.id)
      throw Error(ErrorKind::CaseMismatch, std::string("cannot compare ") + to_string(cfgs[0].geometry.id) +
                                               " with " + to_string(c.geometry.id));
  std::vector<RunResult> out;
  std::vector<CompareRow> rows;
  for (std::size_t k = 0; k < cfgs.size(); ++k) {
    out.push_back(run(cfgs[k], dir / ("run_" + std::to_string(k))));
    rows.push_back(CompareRow{cfgs[k].label, out.back().summary});
  }
  finish_ratios(rows);
  Writer w(dir);
  w.write("compare.csv", [&](std::ostream& os) { write_compare_csv(os, rows); });
  if (table) write_compare_table(*table, rows);
  return out;
}

}  // namespace walldist
