#include "walldist/levelset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace walldist {

void DendriteParams::validate() const {
  if (legs < 1) throw Error(ErrorKind::InvalidPolygon, "dendrite needs at least one leg");
  if (!(leg_width > 0.0) || !(r_tip > 0.0) || !(r_port > r_tip) || !(r_case > r_port)) {
    throw Error(ErrorKind::InvalidPolygon, "dendrite radii must satisfy 0 < r_tip < r_port < r_case");
  }
  const double h = 0.5 * leg_width;
  if (h >= r_port * std::sin(std::numbers::pi / legs)) {
    throw Error(ErrorKind::InvalidPolygon, "dendrite legs overlap at the port radius");
  }
  if (h >= r_tip * std::sin(std::numbers::pi / legs)) {
    throw Error(ErrorKind::InvalidPolygon, "dendrite legs overlap at their tips");
  }
  if (arc_points < 2) throw Error(ErrorKind::InvalidPolygon, "arc_points must be at least 2");
}

GrainShape DendriteParams::shape() const {
  validate();
  const double h = 0.5 * leg_width;
  const double root = std::sqrt(r_port * r_port - h * h);
  const double half = std::asin(h / r_port);
  Polygon port;
  auto at = [&](double th, double along, double across) {
    const double c = std::cos(th), s = std::sin(th);
    port.vertices.push_back({center[0] + along * c - across * s, center[1] + along * s + across * c});
  };
  for (int k = 0; k < legs; ++k) {
    const double th = 2.0 * std::numbers::pi * k / legs;
    // finger: in along the trailing edge, across the tip, out along the leading edge
    at(th, root, -h);
    at(th, r_tip, -h);
    at(th, r_tip, h);
    at(th, root, h);
    const double a0 = th + half, a1 = th + 2.0 * std::numbers::pi / legs - half;
    for (int m = 1; m < arc_points; ++m) {
      const double a = a0 + (a1 - a0) * m / arc_points;
      port.vertices.push_back({center[0] + r_port * std::cos(a), center[1] + r_port * std::sin(a)});
    }
  }
  port.validate();
  return GrainShape{port, center, r_case};
}

namespace {

constexpr std::array<FaceKind, 6> kOpen{FaceKind::FarField, FaceKind::FarField, FaceKind::FarField,
                                        FaceKind::FarField, FaceKind::FarField, FaceKind::FarField};

}  // namespace

ScalarField init_signed_distance(const CurvilinearGrid& grid, const GrainShape& grain, const SolveConfig& cfg) {
  if (grid.dims.is3d()) throw Error(ErrorKind::InvalidArgument, "level sets are 2-D only");
  if (const auto* p = std::get_if<Polygon>(&grain.port)) p->validate();
  const std::size_t n = grid.dims.size();
  std::vector<double> sd(n);
  for (std::size_t p = 0; p < n; ++p) sd[p] = signed_distance(grain.port, grid.x()[p], grid.y()[p]);
  std::vector<double> neg(n);
  for (std::size_t p = 0; p < n; ++p) neg[p] = -sd[p];

  // propellant side: the cavity is solid
  const auto prop = solve_steady(grid, make_boundary(grid, kOpen, sd), cfg);
  // gas side: the propellant is solid
  const auto gas = solve_steady(grid, make_boundary(grid, kOpen, neg), cfg);

  ScalarField out(grid.dims);
  for (std::size_t p = 0; p < n; ++p) out[p] = sd[p] < 0.0 ? -gas.phi[p] : prop.phi[p];
  return out;
}

LevelSetMode parse_levelset_mode(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "standard") return LevelSetMode::Standard;
  if (s == "as_written" || s == "as-written") return LevelSetMode::AsWritten;
  throw Error(ErrorKind::InvalidArgument, "unknown level-set mode '" + std::string(name) + "'");
}

const char* to_string(LevelSetMode m) noexcept {
  return m == LevelSetMode::Standard ? "standard" : "as_written";
}

namespace {

class LevelSetRhs {
 public:
  explicit LevelSetRhs(const CurvilinearGrid& g) : grid_(g), ev_(g, Scheme::UW, FormulationConfig{}) {
    vel_ = gradient_and_velocity(ScalarField(g.dims), g, Scheme::UW);
  }

  void grad_mag(const ScalarField& phi, ScalarField& out) {
    ev_.velocity_of(phi, Scheme::UW, vel_);
    const int nd = grid_.ndim();
    for (std::size_t p = 0; p < phi.size(); ++p) {
      double m = 0.0;
      for (int a = 0; a < nd; ++a) m += vel_.u[a][p] * vel_.u[a][p];
      out[p] = std::sqrt(m);
    }
  }

 private:
  const CurvilinearGrid& grid_;
  Evaluator ev_;
  VelocityFields vel_;
};

}  // namespace

ScalarField levelset_gradient_magnitude(const ScalarField& phis, const CurvilinearGrid& grid) {
  LevelSetRhs r(grid);
  ScalarField out(phis.dims());
  r.grad_mag(phis, out);
  return out;
}

namespace {

void check_step(const ScalarField& phis, const CurvilinearGrid& grid, double F, double dt) {
  if (phis.dims() != grid.dims) throw Error(ErrorKind::DimensionMismatch, "level-set field does not match grid");
  double hmin = grid.min_spacing[0];
  for (std::size_t p = 0; p < phis.size(); ++p) hmin = std::min(hmin, grid.min_spacing[p]);
  if (!(dt > 0.0) || !(std::fabs(F) * dt < hmin)) {
    throw Error(ErrorKind::CflViolation, "level-set step needs 0 < F dt < " + std::to_string(hmin));
  }
}

void step_with(LevelSetRhs& rhs, ScalarField& phis, double F, double dt, LevelSetMode mode) {
  const double src = mode == LevelSetMode::AsWritten ? 1.0 : 0.0;
  const auto bc = make_boundary(kOpen);
  const std::size_t n = phis.size();
  ScalarField k(phis.dims()), stage = phis, acc(phis.dims());
  static constexpr double a[3] = {0.5, 0.5, 1.0};
  static constexpr double w[4] = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
  for (int s = 0; s < 4; ++s) {
    rhs.grad_mag(stage, k);
    for (std::size_t p = 0; p < n; ++p) {
      const double r = src - F * k[p];
      acc[p] += w[s] * r;
      if (s < 3) stage[p] = phis[p] + a[s] * dt * r;
    }
    if (s < 3) apply_boundary_conditions(stage, bc);
  }
  for (std::size_t p = 0; p < n; ++p) phis[p] += dt * acc[p];
  apply_boundary_conditions(phis, bc);
}

}  // namespace

void levelset_step(ScalarField& phis, const CurvilinearGrid& grid, double F, double dt, LevelSetMode mode) {
  check_step(phis, grid, F, dt);
  LevelSetRhs rhs(grid);
  step_with(rhs, phis, F, dt, mode);
}

// ---------------------------------------------------------------------------

std::vector<Polyline> extract_isolines(const ScalarField& f, const CurvilinearGrid& grid, double level) {
  const Dims& d = grid.dims;
  if (d.is3d()) throw Error(ErrorKind::InvalidArgument, "isolines need a 2-D field");
  if (f.dims() != d) throw Error(ErrorKind::DimensionMismatch, "field does not match grid");
  const int ni = d.ni, nj = d.nj;

  // edge keys: 2 * node for the edge to (i+1, j), 2 * node + 1 for the edge to (i, j+1)
  std::map<long, std::array<double, 2>> point;
  auto crossing = [&](int i0, int j0, int i1, int j1) -> long {
    const std::size_t p = d.index(i0, j0), q = d.index(i1, j1);
    const long key = 2L * static_cast<long>(p) + (j1 != j0 ? 1 : 0);
    if (!point.count(key)) {
      const double t = (level - f[p]) / (f[q] - f[p]);
      point[key] = {grid.x()[p] + t * (grid.x()[q] - grid.x()[p]), grid.y()[p] + t * (grid.y()[q] - grid.y()[p])};
    }
    return key;
  };

  std::vector<std::array<long, 2>> segs;
  for (int j = 0; j + 1 < nj; ++j)
    for (int i = 0; i + 1 < ni; ++i) {
      const double v[4] = {f.at(i, j), f.at(i + 1, j), f.at(i + 1, j + 1), f.at(i, j + 1)};
      const bool b[4] = {v[0] < level, v[1] < level, v[2] < level, v[3] < level};
      std::array<long, 4> e{-1, -1, -1, -1};
      if (b[0] != b[1]) e[0] = crossing(i, j, i + 1, j);
      if (b[1] != b[2]) e[1] = crossing(i + 1, j, i + 1, j + 1);
      if (b[3] != b[2]) e[2] = crossing(i, j + 1, i + 1, j + 1);
      if (b[0] != b[3]) e[3] = crossing(i, j, i, j + 1);
      const int cnt = (e[0] >= 0) + (e[1] >= 0) + (e[2] >= 0) + (e[3] >= 0);
      if (cnt == 2) {
        std::array<long, 2> s{-1, -1};
        int m = 0;
        for (long k : e)
          if (k >= 0) s[m++] = k;
        segs.push_back(s);
      } else if (cnt == 4) {
        const bool centre_below = 0.25 * (v[0] + v[1] + v[2] + v[3]) < level;
        // join the corners that share the centre's side
        if (centre_below == b[0]) {
          segs.push_back({e[0], e[1]});
          segs.push_back({e[2], e[3]});
        } else {
          segs.push_back({e[3], e[0]});
          segs.push_back({e[1], e[2]});
        }
      }
    }

  std::map<long, std::vector<int>> at;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    at[segs[s][0]].push_back(s);
    at[segs[s][1]].push_back(s);
  }
  std::vector<char> used(segs.size(), 0);
  std::vector<Polyline> out;
  auto trace = [&](int s0, long start) {
    Polyline pl;
    long cur = start;
    int s = s0;
    pl.points.push_back(point[cur]);
    while (s >= 0 && !used[s]) {
      used[s] = 1;
      cur = segs[s][0] == cur ? segs[s][1] : segs[s][0];
      if (cur == start) {
        pl.closed = true;
        break;
      }
      pl.points.push_back(point[cur]);
      int next = -1;
      for (int t : at[cur])
        if (!used[t]) next = t;
      s = next;
    }
    out.push_back(std::move(pl));
  };
  // open lines start at a boundary crossing (one segment)
  for (const auto& [key, list] : at)
    if (list.size() == 1 && !used[list[0]]) trace(list[0], key);
  for (int s = 0; s < static_cast<int>(segs.size()); ++s)
    if (!used[s]) trace(s, segs[s][0]);

  for (auto& pl : out) {
    if (!pl.closed) continue;
    double area = 0.0;
    const auto& q = pl.points;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const auto& a = q[k];
      const auto& b = q[(k + 1) % q.size()];
      area += a[0] * b[1] - b[0] * a[1];
    }
    if (area < 0.0) std::reverse(pl.points.begin(), pl.points.end());
  }
  return out;
}

double perimeter(const std::vector<Polyline>& lines) {
  double s = 0.0;
  for (const auto& pl : lines) {
    const auto& q = pl.points;
    for (std::size_t k = 0; k + 1 < q.size(); ++k) s += std::hypot(q[k + 1][0] - q[k][0], q[k + 1][1] - q[k][1]);
    if (pl.closed && q.size() > 1) s += std::hypot(q.front()[0] - q.back()[0], q.front()[1] - q.back()[1]);
  }
  return s;
}

namespace {

double length_inside(const std::array<double, 2>& a, const std::array<double, 2>& b, std::array<double, 2> c,
                     double r) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double fx = a[0] - c[0], fy = a[1] - c[1];
  const double A = dx * dx + dy * dy;
  const double len = std::sqrt(A);
  if (A == 0.0) return 0.0;
  const double B = 2.0 * (fx * dx + fy * dy);
  const double C = fx * fx + fy * fy - r * r;
  const double disc = B * B - 4.0 * A * C;
  if (disc <= 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double s0 = std::max(0.0, (-B - sq) / (2.0 * A));
  const double s1 = std::min(1.0, (-B + sq) / (2.0 * A));
  return s1 > s0 ? (s1 - s0) * len : 0.0;
}

}  // namespace

double perimeter_within(const std::vector<Polyline>& lines, std::array<double, 2> center, double radius) {
  double s = 0.0;
  for (const auto& pl : lines) {
    const auto& q = pl.points;
    for (std::size_t k = 0; k + 1 < q.size(); ++k) s += length_inside(q[k], q[k + 1], center, radius);
    if (pl.closed && q.size() > 1) s += length_inside(q.back(), q.front(), center, radius);
  }
  return s;
}

double chamber_pressure(double Sb, double a, double n, double c_star, double rho_p, double rho_0, double a_star) {
  if (!(n >= 0.0 && n < 1.0)) throw Error(ErrorKind::InvalidExponent, "pressure exponent n must lie in [0, 1)");
  if (!(a_star > 0.0)) throw Error(ErrorKind::InvalidArgument, "throat area must be positive");
  if (!(rho_p > rho_0)) throw Error(ErrorKind::InvalidArgument, "propellant density must exceed gas density");
  return std::pow(a * c_star * (rho_p - rho_0) * Sb / a_star, 1.0 / (1.0 - n));
}

// ---------------------------------------------------------------------------

std::vector<BurnbackFrame> burnback_run(const CurvilinearGrid& grid, const GrainShape& grain,
                                        const BurnbackConfig& cfg,
                                        const std::function<void(const BurnbackFrame&, const ScalarField&)>& on_frame) {
  if (cfg.n_steps < 0) throw Error(ErrorKind::InvalidArgument, "n_steps must be non-negative");
  if (!(cfg.lref > 0.0)) throw Error(ErrorKind::InvalidArgument, "burnback lref must be positive");
  ScalarField phis = init_signed_distance(grid, grain, cfg.init);
  check_step(phis, grid, cfg.F, cfg.dt);
  LevelSetRhs rhs(grid);
  double hmax = 0.0;
  for (std::size_t p = 0; p < phis.size(); ++p) hmax = std::max(hmax, grid.min_spacing[p]);

  std::vector<BurnbackFrame> frames;
  ScalarField gm(grid.dims);
  for (int s = 0; s <= cfg.n_steps; ++s) {
    if (s > 0) step_with(rhs, phis, cfg.F, cfg.dt, cfg.mode);
    BurnbackFrame fr;
    fr.time = s * cfg.dt;
    for (double lv : cfg.levels) {
      auto lines = extract_isolines(phis, grid, lv * cfg.lref);
      fr.perimeters.push_back(grain.case_radius > 0.0 ? perimeter_within(lines, grain.center, grain.case_radius)
                                                      : perimeter(lines));
      fr.isolines.push_back(std::move(lines));
    }
    rhs.grad_mag(phis, gm);
    for (std::size_t p = 0; p < phis.size(); ++p)
      if (std::fabs(phis[p]) < 2.0 * hmax) fr.grad_drift = std::max(fr.grad_drift, std::fabs(gm[p] - 1.0));
    if (on_frame) on_frame(fr, phis);
    frames.push_back(std::move(fr));
  }
  return frames;
}

}  // namespace walldist
