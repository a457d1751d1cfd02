#include "walldist/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace walldist {

namespace {

double seg_distance(double px, double py, const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - a[0]) * dx + (py - a[1]) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (a[0] + t * dx), py - (a[1] + t * dy));
}

double orient(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool segments_cross(const std::array<double, 2>& a, const std::array<double, 2>& b,
                    const std::array<double, 2>& c, const std::array<double, 2>& d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  auto on = [](const std::array<double, 2>& p, const std::array<double, 2>& q, const std::array<double, 2>& r, double o) {
    return o == 0.0 && std::min(p[0], q[0]) <= r[0] && r[0] <= std::max(p[0], q[0]) &&
           std::min(p[1], q[1]) <= r[1] && r[1] <= std::max(p[1], q[1]);
  };
  return on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4);
}

}  // namespace

void Polygon::validate() const {
  const std::size_t n = vertices.size();
  if (n < 3) throw Error(ErrorKind::InvalidPolygon, "polygon needs at least 3 vertices");
  double area = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[(i + 1) % n];
    if (!std::isfinite(a[0]) || !std::isfinite(a[1])) {
      throw Error(ErrorKind::InvalidPolygon, "polygon vertex is not finite");
    }
    area += a[0] * b[1] - b[0] * a[1];
  }
  if (std::fabs(area) < 1e-14) throw Error(ErrorKind::InvalidPolygon, "polygon has zero area");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip edges sharing a vertex
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n])) {
        throw Error(ErrorKind::InvalidPolygon, "polygon edges " + std::to_string(i) + " and " +
                                                   std::to_string(j) + " intersect");
      }
    }
  }
}

double signed_distance(const Body& body, double x, double y) {
  if (const auto* c = std::get_if<Circle>(&body)) return std::hypot(x - c->cx, y - c->cy) - c->r;
  const auto& v = std::get<Polygon>(body).vertices;
  const std::size_t n = v.size();
  double d = std::numeric_limits<double>::infinity();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    d = std::min(d, seg_distance(x, y, v[j], v[i]));
    if ((v[i][1] > y) != (v[j][1] > y)) {
      const double xc = v[j][0] + (y - v[j][1]) * (v[i][0] - v[j][0]) / (v[i][1] - v[j][1]);
      if (x < xc) inside = !inside;
    }
  }
  return inside ? -d : d;
}

// ---------------------------------------------------------------------------

BoundarySpec make_boundary(const std::array<FaceKind, 6>& faces) {
  BoundarySpec b;
  b.faces = faces;
  return b;
}

BoundarySpec make_boundary(const CurvilinearGrid& grid, const std::array<FaceKind, 6>& faces,
                           const std::vector<Body>& bodies, bool anchor_band) {
  BoundarySpec b = make_boundary(faces);
  if (bodies.empty()) return b;
  for (const auto& body : bodies)
    if (const auto* p = std::get_if<Polygon>(&body)) p->validate();

  const std::size_t n = grid.dims.size();
  std::vector<double> sd(n, std::numeric_limits<double>::infinity());
  for (std::size_t p = 0; p < n; ++p)
    for (const auto& body : bodies) sd[p] = std::min(sd[p], signed_distance(body, grid.x()[p], grid.y()[p]));
  return make_boundary(grid, faces, sd, anchor_band);
}

BoundarySpec make_boundary(const CurvilinearGrid& grid, const std::array<FaceKind, 6>& faces,
                           const std::vector<double>& sd, bool anchor_band) {
  BoundarySpec b = make_boundary(faces);
  const Dims& d = grid.dims;
  const std::size_t n = d.size();
  if (sd.size() != n) throw Error(ErrorKind::DimensionMismatch, "signed distance size does not match grid");
  b.solid.assign(n, 0);
  b.pinned.assign(n, 0);
  b.pin_value.assign(n, 0.0);
  std::size_t fluid = 0;
  for (std::size_t p = 0; p < n; ++p) {
    b.solid[p] = sd[p] <= 0.0;
    fluid += !b.solid[p];
  }
  if (fluid == 0) throw Error(ErrorKind::BodyOutsideDomain, "bodies cover the whole domain");
  if (!anchor_band) return b;

  // Distance to wall faces, only meaningful for axis-aligned (exact-metric) grids.
  const bool cartesian = !grid.metric_scheme.has_value();
  std::array<double, 6> face_pos{};
  if (cartesian) {
    face_pos = {grid.x()[d.index(0, 0, 0)], grid.x()[d.index(d.ni - 1, 0, 0)],
                grid.y()[d.index(0, 0, 0)], grid.y()[d.index(0, d.nj - 1, 0)],
                grid.z()[d.index(0, 0, 0)], grid.z()[d.index(0, 0, d.nk - 1)]};
  }
  const int nfaces = d.is3d() ? 6 : 4;
  for (int k = 0; k < d.nk; ++k)
    for (int j = 0; j < d.nj; ++j)
      for (int i = 0; i < d.ni; ++i) {
        const std::size_t p = d.index(i, j, k);
        if (b.solid[p]) continue;
        const bool touches = (i > 0 && b.solid[p - 1]) || (i + 1 < d.ni && b.solid[p + 1]) ||
                             (j > 0 && b.solid[p - d.ni]) || (j + 1 < d.nj && b.solid[p + d.ni]) ||
                             (k > 0 && b.solid[p - d.stride(2)]) || (k + 1 < d.nk && b.solid[p + d.stride(2)]);
        if (!touches) continue;
        double v = sd[p];
        if (cartesian) {
          const double c[3] = {grid.x()[p], grid.y()[p], grid.z()[p]};
          for (int f = 0; f < nfaces; ++f)
            if (faces[f] == FaceKind::Wall) v = std::min(v, std::fabs(c[f / 2] - face_pos[f]));
        }
        b.pinned[p] = 1;
        b.pin_value[p] = v;
      }
  return b;
}

bool has_anchor(const BoundarySpec& spec, const Dims& dims) {
  const int nfaces = dims.is3d() ? 6 : 4;
  for (int f = 0; f < nfaces; ++f)
    if (spec.faces[f] == FaceKind::Wall) return true;
  for (std::uint8_t s : spec.solid)
    if (s) return true;
  for (std::uint8_t s : spec.pinned)
    if (s) return true;
  return false;
}

namespace {

void apply_masks(ScalarField& phi, const BoundarySpec& spec) {
  if (spec.solid.empty()) return;
  const std::size_t n = phi.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (spec.solid[p]) phi[p] = 0.0;
    else if (spec.pinned[p]) phi[p] = spec.pin_value[p];
  }
}

template <class Fn>
void for_face(const Dims& d, int face, Fn&& fn) {
  const int dir = face / 2;
  const bool hi = face % 2 == 1;
  const int a = dir == 0 ? 1 : 0;
  const int b = dir == 2 ? 1 : 2;
  const int na = d.count(a), nb = d.count(b);
  const int fixed = hi ? d.count(dir) - 1 : 0;
  const int inner = hi ? fixed - 1 : 1;
  for (int ib = 0; ib < nb; ++ib)
    for (int ia = 0; ia < na; ++ia) {
      int idx[3], jdx[3];
      idx[dir] = fixed;
      jdx[dir] = inner;
      idx[a] = jdx[a] = ia;
      idx[b] = jdx[b] = ib;
      fn(d.index(idx[0], idx[1], idx[2]), d.index(jdx[0], jdx[1], jdx[2]));
    }
}

}  // namespace

void apply_boundary_conditions(ScalarField& phi, const BoundarySpec& spec) {
  const Dims& d = phi.dims();
  if (!spec.solid.empty() && spec.solid.size() != phi.size()) {
    throw Error(ErrorKind::DimensionMismatch, "boundary masks do not match field");
  }
  const int nfaces = d.is3d() ? 6 : 4;
  apply_masks(phi, spec);
  for (int f = 0; f < nfaces; ++f) {
    if (spec.faces[f] != FaceKind::FarField) continue;
    for_face(d, f, [&](std::size_t p, std::size_t q) { phi[p] = phi[q]; });
  }
  for (int f = 0; f < nfaces; ++f) {
    if (spec.faces[f] != FaceKind::Wall) continue;
    for_face(d, f, [&](std::size_t p, std::size_t) { phi[p] = 0.0; });
  }
  apply_masks(phi, spec);
}

std::vector<std::uint8_t> fixed_nodes(const BoundarySpec& spec, const Dims& d) {
  std::vector<std::uint8_t> out(d.size(), 0);
  const int nfaces = d.is3d() ? 6 : 4;
  for (int f = 0; f < nfaces; ++f) {
    if (spec.faces[f] != FaceKind::Wall) continue;
    for_face(d, f, [&](std::size_t p, std::size_t) { out[p] = 1; });
  }
  for (std::size_t p = 0; p < spec.solid.size(); ++p)
    if (spec.solid[p] || spec.pinned[p]) out[p] = 1;
  return out;
}

}  // namespace walldist
