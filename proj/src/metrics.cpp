#include "walldist/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace walldist {

CaseId parse_case(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "flat_plate") return CaseId::FlatPlate;
  if (s == "channel") return CaseId::Channel;
  if (s == "box2d") return CaseId::Box2D;
  if (s == "box3d") return CaseId::Box3D;
  if (s == "bump") return CaseId::Bump;
  if (s == "complex") return CaseId::Complex;
  if (s == "piston") return CaseId::Piston;
  if (s == "bouncing_cube") return CaseId::BouncingCube;
  if (s == "burnback") return CaseId::Burnback;
  throw Error(ErrorKind::UnknownCase, "unknown case '" + std::string(name) + "'");
}

const char* to_string(CaseId c) noexcept {
  switch (c) {
    case CaseId::FlatPlate: return "flat_plate";
    case CaseId::Channel: return "channel";
    case CaseId::Box2D: return "box2d";
    case CaseId::Box3D: return "box3d";
    case CaseId::Bump: return "bump";
    case CaseId::Complex: return "complex";
    case CaseId::Piston: return "piston";
    case CaseId::BouncingCube: return "bouncing_cube";
    case CaseId::Burnback: return "burnback";
  }
  return "?";
}

namespace {

constexpr FaceKind W = FaceKind::Wall;
constexpr FaceKind F = FaceKind::FarField;

Polygon regular_polygon(double cx, double cy, double r, int n, double rot) {
  Polygon p;
  for (int k = 0; k < n; ++k) {
    const double a = rot + 2.0 * std::numbers::pi * k / n;
    p.vertices.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  return p;
}

}  // namespace

CaseGeometry default_geometry(CaseId id) {
  CaseGeometry c;
  c.id = id;
  switch (id) {
    case CaseId::Complex:
      c.extent = {2.0, 2.0, 1.0};
      c.bodies = {Circle{0.6, 0.6, 0.25}, regular_polygon(1.4, 0.6, 0.3, 4, std::numbers::pi / 4.0),
                  regular_polygon(1.0, 1.4, 0.35, 3, std::numbers::pi / 2.0)};
      break;
    case CaseId::Bump:
      c.lref = c.bump.chord;
      break;
    case CaseId::Piston:
      c.extent = {2.0, 1.0, 1.0};
      c.motion.kind = MotionSpec::Kind::PistonSinusoid;
      break;
    case CaseId::BouncingCube:
      c.extent = {2.0, 2.0, 1.0};
      c.motion.kind = MotionSpec::Kind::BouncingCube;
      c.motion.cube_side = 0.3;
      c.motion.cube_cx = 1.0;
      c.motion.cube_y0 = 0.8;
      c.motion.dt = 0.05;
      c.motion.faces = {F, F, W, W, F, F};
      break;
    default:
      break;
  }
  return c;
}

std::array<FaceKind, 6> case_faces(const CaseGeometry& c) {
  switch (c.id) {
    case CaseId::FlatPlate: return {F, F, W, F, F, F};
    case CaseId::Channel: return {F, F, W, W, F, F};
    case CaseId::Box2D:
    case CaseId::Box3D: return {W, W, W, W, W, W};
    case CaseId::Bump: return {F, F, W, F, F, F};
    case CaseId::Complex: return {F, F, F, F, F, F};
    case CaseId::Piston:
    case CaseId::BouncingCube: return c.motion.faces;
    case CaseId::Burnback: return {F, F, F, F, F, F};
  }
  return {F, F, F, F, F, F};
}

CurvilinearGrid build_case_grid(const CaseGeometry& c, Dims dims) {
  CurvilinearGrid g;
  if (c.id == CaseId::Bump) {
    g = build_bump_grid(dims.ni, dims.nj, c.bump);
  } else if (c.id == CaseId::Box3D) {
    if (dims.nk < 5) throw Error(ErrorKind::DimensionTooSmall, "box3d needs nk >= 5");
    g = build_cartesian(dims, c.extent);
  } else {
    g = build_cartesian(Dims{dims.ni, dims.nj, 1}, {c.extent[0], c.extent[1], 0.0});
  }
  g.lref = c.lref;
  return g;
}

BoundarySpec case_boundary(const CaseGeometry& c, const CurvilinearGrid& grid, double t) {
  const auto faces = case_faces(c);
  if (c.id == CaseId::Complex) return make_boundary(grid, faces, c.bodies);
  if (c.id == CaseId::Piston || c.id == CaseId::BouncingCube) {
    return make_boundary(grid, faces, bodies_at(c.motion, grid, t), c.motion.anchor_band);
  }
  return make_boundary(faces);
}

// ---------------------------------------------------------------------------

void SampledWalls::add_segment(std::array<double, 2> a, std::array<double, 2> b, int n) {
  n = std::max(n, 2);
  for (int k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) / (n - 1);
    xs_.push_back(a[0] + s * (b[0] - a[0]));
    ys_.push_back(a[1] + s * (b[1] - a[1]));
  }
  sorted_ = false;
}

void SampledWalls::add_arc(std::array<double, 2> c, double r, double a0, double a1, int n) {
  n = std::max(n, 2);
  for (int k = 0; k < n; ++k) {
    const double a = a0 + (a1 - a0) * k / (n - 1);
    xs_.push_back(c[0] + r * std::cos(a));
    ys_.push_back(c[1] + r * std::sin(a));
  }
  sorted_ = false;
}

void SampledWalls::add_body(const Body& b, int n) {
  if (const auto* c = std::get_if<Circle>(&b)) {
    add_arc({c->cx, c->cy}, c->r, 0.0, 2.0 * std::numbers::pi, n);
    return;
  }
  const auto& v = std::get<Polygon>(b).vertices;
  for (std::size_t i = 0; i < v.size(); ++i) add_segment(v[i], v[(i + 1) % v.size()], n);
}

void SampledWalls::sort_if_needed() const {
  if (sorted_) return;
  std::vector<std::size_t> idx(xs_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return xs_[a] < xs_[b] || (xs_[a] == xs_[b] && ys_[a] < ys_[b]);
  });
  std::vector<double> x(idx.size()), y(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    x[k] = xs_[idx[k]];
    y[k] = ys_[idx[k]];
  }
  xs_ = std::move(x);
  ys_ = std::move(y);
  sorted_ = true;
}

double SampledWalls::distance(double x, double y) const {
  if (xs_.empty()) return std::numeric_limits<double>::infinity();
  sort_if_needed();
  const std::size_t n = xs_.size();
  const std::size_t mid = std::lower_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
  double best = std::numeric_limits<double>::infinity();
  // scan outwards in x until the x gap alone exceeds the best distance
  for (std::size_t k = mid; k < n; ++k) {
    const double dx = xs_[k] - x;
    if (dx * dx >= best) break;
    best = std::min(best, dx * dx + (ys_[k] - y) * (ys_[k] - y));
  }
  for (std::size_t k = mid; k-- > 0;) {
    const double dx = x - xs_[k];
    if (dx * dx >= best) break;
    best = std::min(best, dx * dx + (ys_[k] - y) * (ys_[k] - y));
  }
  return std::sqrt(best);
}

SampledWalls sample_walls(const CaseGeometry& c, double t) {
  SampledWalls w;
  const int n = c.samples_per_curve;
  const double lx = c.extent[0], ly = c.extent[1];
  const auto faces = case_faces(c);
  auto add_faces = [&](double xhi) {
    if (faces[IMin] == FaceKind::Wall) w.add_segment({0.0, 0.0}, {0.0, ly}, n);
    if (faces[IMax] == FaceKind::Wall) w.add_segment({xhi, 0.0}, {xhi, ly}, n);
    if (faces[JMin] == FaceKind::Wall) w.add_segment({0.0, 0.0}, {xhi, 0.0}, n);
    if (faces[JMax] == FaceKind::Wall) w.add_segment({0.0, ly}, {xhi, ly}, n);
  };
  switch (c.id) {
    case CaseId::FlatPlate:
    case CaseId::Channel:
    case CaseId::Box2D:
      add_faces(lx);
      break;
    case CaseId::Bump: {
      const auto& b = c.bump;
      const double hc = 0.5 * b.chord;
      w.add_segment({b.x_min, 0.0}, {b.x_center - hc, 0.0}, n);
      w.add_segment({b.x_center + hc, 0.0}, {b.x_max, 0.0}, n);
      if (b.height > 0.0) {
        const double r = b.radius();
        const double cy = b.height - r;
        const double a0 = std::atan2(-cy, hc);
        w.add_arc({b.x_center, cy}, r, a0, std::numbers::pi - a0, n);
      }
      break;
    }
    case CaseId::Complex:
      add_faces(lx);
      for (const auto& b : c.bodies) w.add_body(b, n);
      break;
    case CaseId::Piston: {
      // walls of the fluid region only; the piston face closes it
      const double xp = piston_position(c.motion, t);
      add_faces(xp);
      w.add_segment({xp, 0.0}, {xp, ly}, n);
      break;
    }
    case CaseId::BouncingCube: {
      add_faces(lx);
      const auto s = cube_state(c.motion, t);
      const double h = 0.5 * c.motion.cube_side;
      const double cx = c.motion.cube_cx;
      w.add_body(Polygon{{{cx - h, s.bottom}, {cx + h, s.bottom}, {cx + h, s.bottom + c.motion.cube_side},
                          {cx - h, s.bottom + c.motion.cube_side}}},
                 n);
      break;
    }
    case CaseId::Box3D:
    case CaseId::Burnback:
      throw Error(ErrorKind::UnknownCase, std::string("no wall sampling for case ") + to_string(c.id));
  }
  return w;
}

namespace {

double closed_form(const CaseGeometry& c, std::array<double, 3> p) {
  const auto [lx, ly, lz] = c.extent;
  switch (c.id) {
    case CaseId::FlatPlate: return p[1];
    case CaseId::Channel: return std::min(p[1], ly - p[1]);
    case CaseId::Box2D: return std::min({p[0], lx - p[0], p[1], ly - p[1]});
    case CaseId::Box3D: return std::min({p[0], lx - p[0], p[1], ly - p[1], p[2], lz - p[2]});
    default: return -1.0;
  }
}

bool inside_body(const CaseGeometry& c, double x, double y, double t) {
  if (c.id == CaseId::Complex) {
    for (const auto& b : c.bodies)
      if (signed_distance(b, x, y) <= 0.0) return true;
    return false;
  }
  if (c.id == CaseId::Piston) return x >= piston_position(c.motion, t);
  if (c.id == CaseId::BouncingCube) {
    const auto s = cube_state(c.motion, t);
    const double h = 0.5 * c.motion.cube_side;
    return std::fabs(x - c.motion.cube_cx) <= h && y >= s.bottom && y <= s.bottom + c.motion.cube_side;
  }
  return false;
}

}  // namespace

double exact_distance(const CaseGeometry& c, std::array<double, 3> point, double t) {
  if (c.id == CaseId::Burnback) throw Error(ErrorKind::UnknownCase, "burnback has no exact wall distance");
  const double cf = closed_form(c, point);
  if (cf >= 0.0 || c.id == CaseId::FlatPlate) return cf;
  if (inside_body(c, point[0], point[1], t)) return 0.0;
  return sample_walls(c, t).distance(point[0], point[1]);
}

ScalarField exact_field(const CaseGeometry& c, const CurvilinearGrid& grid, double t) {
  if (c.id == CaseId::Burnback) throw Error(ErrorKind::UnknownCase, "burnback has no exact wall distance");
  ScalarField out(grid.dims);
  const bool closed = c.id == CaseId::FlatPlate || c.id == CaseId::Channel || c.id == CaseId::Box2D ||
                      c.id == CaseId::Box3D;
  if (closed) {
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = closed_form(c, {grid.x()[p], grid.y()[p], grid.z()[p]});
    return out;
  }
  const auto walls = sample_walls(c, t);
  for (std::size_t p = 0; p < out.size(); ++p) {
    const double x = grid.x()[p], y = grid.y()[p];
    out[p] = inside_body(c, x, y, t) ? 0.0 : walls.distance(x, y);
  }
  return out;
}

// ---------------------------------------------------------------------------

double l2_norm(const ScalarField& phi, const ScalarField& exact, const CurvilinearGrid& grid) {
  if (phi.dims() != exact.dims() || phi.dims() != grid.dims) {
    throw Error(ErrorKind::DimensionMismatch, "l2_norm: field and grid dims differ");
  }
  double s = 0.0;
  for (std::size_t p = 0; p < phi.size(); ++p) {
    const double e = phi[p] - exact[p];
    s += e * e / grid.jacobian[p];
  }
  return std::sqrt(s);
}

long ErrorHistogram::total() const noexcept { return std::accumulate(counts.begin(), counts.end(), 0L); }

std::vector<double> percentage_errors(const ScalarField& phi, const ScalarField& exact, const BoundarySpec* bc) {
  if (phi.dims() != exact.dims()) throw Error(ErrorKind::DimensionMismatch, "percentage_errors: dims differ");
  std::vector<std::uint8_t> fixed;
  if (bc) fixed = fixed_nodes(*bc, phi.dims());
  std::vector<double> out;
  out.reserve(phi.size());
  for (std::size_t p = 0; p < phi.size(); ++p) {
    if (!(exact[p] > 0.0) || (!fixed.empty() && fixed[p])) continue;
    out.push_back((exact[p] - phi[p]) / exact[p] * 100.0);
  }
  return out;
}

ErrorHistogram error_histogram(const std::vector<double>& pct, double w) {
  if (!(w > 0.0)) throw Error(ErrorKind::InvalidArgument, "bin width must be positive");
  ErrorHistogram h;
  if (pct.empty()) return h;
  const auto [mn, mx] = std::minmax_element(pct.begin(), pct.end());
  const long k0 = static_cast<long>(std::floor(*mn / w));
  const long k1 = static_cast<long>(std::floor(*mx / w));
  h.counts.assign(k1 - k0 + 1, 0);
  for (long k = k0; k <= k1 + 1; ++k) h.bin_edges.push_back(k * w);
  for (double e : pct) {
    const long k = std::clamp(static_cast<long>(std::floor(e / w)), k0, k1);
    ++h.counts[k - k0];
  }
  return h;
}

ErrorHistogram error_histogram(const ScalarField& phi, const ScalarField& exact, const BoundarySpec* bc, double w) {
  return error_histogram(percentage_errors(phi, exact, bc), w);
}

ScalarField gradient_magnitude(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s) {
  const auto v = gradient_and_velocity(phi, grid, s);
  ScalarField out(phi.dims());
  for (std::size_t p = 0; p < out.size(); ++p) {
    double m = 0.0;
    for (int a = 0; a < grid.ndim(); ++a) m += v.u[a][p] * v.u[a][p];
    out[p] = std::sqrt(m);
  }
  return out;
}

double timing_probe(const SolveReport& r) {
  if (r.iters < 100) {
    throw Error(ErrorKind::TooFewIterations, "timing needs at least 100 iterations, got " + std::to_string(r.iters));
  }
  return r.loop_seconds / r.iters * 100.0;
}

}  // namespace walldist
