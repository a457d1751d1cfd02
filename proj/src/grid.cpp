#include "walldist/grid.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace walldist {

namespace {

void check_dims(const Dims& d) {
  if (d.ni < 5 || d.nj < 5 || (d.nk != 1 && d.nk < 5)) {
    throw Error(ErrorKind::DimensionTooSmall,
                "grid needs at least 5 nodes per direction, got " + std::to_string(d.ni) + "x" +
                    std::to_string(d.nj) + "x" + std::to_string(d.nk));
  }
}

void allocate(CurvilinearGrid& g, const Dims& d) {
  g.dims = d;
  for (auto& c : g.coord) c = ScalarField(d);
  for (auto& row : g.metric)
    for (auto& m : row) m = ScalarField(d);
  for (auto& v : g.g) v = ScalarField(d);
  g.jacobian = ScalarField(d);
  g.min_spacing = ScalarField(d);
}

void finish_spacing(CurvilinearGrid& grid) {
  const int nd = grid.ndim();
  const std::size_t n = grid.dims.size();
  for (int l = 0; l < 3; ++l) {
    auto& gl = grid.g[l];
    gl.fill(0.0);
    if (l >= nd) continue;
    for (int m = 0; m < nd; ++m) {
      const double* a = grid.metric[l][m].data();
      for (std::size_t p = 0; p < n; ++p) gl[p] += a[p] * a[p];
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    double gmax = 0.0;
    for (int l = 0; l < nd; ++l) gmax = std::max(gmax, grid.g[l][p]);
    grid.min_spacing[p] = 1.0 / std::sqrt(gmax);
  }
}

}  // namespace

CurvilinearGrid build_cartesian(Dims dims, std::array<double, 3> extent, std::array<double, 3> origin) {
  check_dims(dims);
  const int nd = dims.active_dirs();
  for (int a = 0; a < nd; ++a) {
    if (!(extent[a] > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid extents must be positive");
  }
  CurvilinearGrid g;
  allocate(g, dims);
  std::array<double, 3> h{};
  for (int a = 0; a < 3; ++a) h[a] = a < nd ? extent[a] / (dims.count(a) - 1) : 0.0;
  for (int k = 0; k < dims.nk; ++k)
    for (int j = 0; j < dims.nj; ++j)
      for (int i = 0; i < dims.ni; ++i) {
        const std::size_t p = dims.index(i, j, k);
        g.coord[0][p] = origin[0] + i * h[0];
        g.coord[1][p] = origin[1] + j * h[1];
        g.coord[2][p] = nd == 3 ? origin[2] + k * h[2] : 0.0;
      }
  double jac = 1.0;
  for (int a = 0; a < nd; ++a) {
    g.metric[a][a].fill(1.0 / h[a]);
    jac /= h[a];
  }
  g.jacobian.fill(jac);
  finish_spacing(g);
  return g;
}

CurvilinearGrid build_cartesian(int ni, int nj, double lx, double ly) {
  return build_cartesian(Dims{ni, nj, 1}, {lx, ly, 0.0});
}

CurvilinearGrid build_cartesian(int ni, int nj, int nk, double lx, double ly, double lz) {
  if (nk < 5) throw Error(ErrorKind::DimensionTooSmall, "3-D grid needs nk >= 5");
  return build_cartesian(Dims{ni, nj, nk}, {lx, ly, lz});
}

// ---------------------------------------------------------------------------

double BumpParams::radius() const { return (0.25 * chord * chord + height * height) / (2.0 * height); }

double BumpParams::wall_y(double x) const {
  if (height == 0.0) return 0.0;
  const double dx = x - x_center;
  if (std::fabs(dx) >= 0.5 * chord) return 0.0;
  const double r = radius();
  return (height - r) + std::sqrt(r * r - dx * dx);
}

void BumpParams::validate() const {
  if (!(x_max > x_min) || !(y_top > 0.0) || !(chord > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "bump domain must have positive extents");
  }
  if (height < 0.0 || height > 0.5 * chord) {
    throw Error(ErrorKind::InvalidArgument, "bump height must lie in [0, chord/2] for a single-valued wall");
  }
  if (x_center - 0.5 * chord < x_min || x_center + 0.5 * chord > x_max || height >= y_top) {
    throw Error(ErrorKind::InvalidArgument, "bump does not fit inside the domain");
  }
}

CurvilinearGrid build_bump_grid(int ni, int nj, const BumpParams& p) {
  p.validate();
  if (p.height == 0.0) {
    auto g = build_cartesian(Dims{ni, nj, 1}, {p.x_max - p.x_min, p.y_top, 0.0}, {p.x_min, 0.0, 0.0});
    g.lref = p.chord;
    return g;
  }
  const Dims d{ni, nj, 1};
  check_dims(d);
  CurvilinearGrid g;
  allocate(g, d);
  const double dx = (p.x_max - p.x_min) / (ni - 1);
  for (int j = 0; j < nj; ++j) {
    const double eta = static_cast<double>(j) / (nj - 1);
    for (int i = 0; i < ni; ++i) {
      const double x = p.x_min + i * dx;
      const double yw = p.wall_y(x);
      const std::size_t q = d.index(i, j);
      g.coord[0][q] = x;
      g.coord[1][q] = j == nj - 1 ? p.y_top : yw + (p.y_top - yw) * eta;
    }
  }
  g.lref = p.chord;
  compute_metrics(g, Scheme::E2);
  for (std::size_t q = 0; q < d.size(); ++q) {
    if (!(g.jacobian[q] > 0.0)) {
      throw Error(ErrorKind::DegenerateMapping, "non-positive Jacobian in bump grid");
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

void compute_metrics(CurvilinearGrid& grid, Scheme s) {
  const Scheme cs = central_scheme_for(s);
  const Dims& d = grid.dims;
  const int nd = grid.ndim();
  const std::size_t n = d.size();

  // dx[a][l] = d x_a / d xi_l
  std::array<std::array<ScalarField, 3>, 3> dx;
  for (int a = 0; a < nd; ++a)
    for (int l = 0; l < nd; ++l) derivative(grid.coord[a], l, cs, dx[a][l]);

  for (auto& row : grid.metric)
    for (auto& m : row)
      if (m.dims() != d) m = ScalarField(d);
  if (grid.jacobian.dims() != d) grid.jacobian = ScalarField(d);
  for (auto& v : grid.g)
    if (v.dims() != d) v = ScalarField(d);
  if (grid.min_spacing.dims() != d) grid.min_spacing = ScalarField(d);

  for (std::size_t p = 0; p < n; ++p) {
    if (nd == 2) {
      const double xa = dx[0][0][p], xb = dx[0][1][p];
      const double ya = dx[1][0][p], yb = dx[1][1][p];
      const double det = xa * yb - xb * ya;
      if (!(std::fabs(det) >= 1e-14)) {
        throw Error(ErrorKind::SingularMetric, "singular metric at node " + std::to_string(p));
      }
      grid.metric[0][0][p] = yb / det;
      grid.metric[0][1][p] = -xb / det;
      grid.metric[1][0][p] = -ya / det;
      grid.metric[1][1][p] = xa / det;
      grid.jacobian[p] = 1.0 / det;
    } else {
      // A[a][l] = dx_a/dxi_l; metric = A^-1, metric[l][a] = cof(A)[a][l] / det
      double A[3][3];
      for (int a = 0; a < 3; ++a)
        for (int l = 0; l < 3; ++l) A[a][l] = dx[a][l][p];
      const double c00 = A[1][1] * A[2][2] - A[1][2] * A[2][1];
      const double c01 = A[1][2] * A[2][0] - A[1][0] * A[2][2];
      const double c02 = A[1][0] * A[2][1] - A[1][1] * A[2][0];
      const double det = A[0][0] * c00 + A[0][1] * c01 + A[0][2] * c02;
      if (!(std::fabs(det) >= 1e-14)) {
        throw Error(ErrorKind::SingularMetric, "singular metric at node " + std::to_string(p));
      }
      const double c10 = A[0][2] * A[2][1] - A[0][1] * A[2][2];
      const double c11 = A[0][0] * A[2][2] - A[0][2] * A[2][0];
      const double c12 = A[0][1] * A[2][0] - A[0][0] * A[2][1];
      const double c20 = A[0][1] * A[1][2] - A[0][2] * A[1][1];
      const double c21 = A[0][2] * A[1][0] - A[0][0] * A[1][2];
      const double c22 = A[0][0] * A[1][1] - A[0][1] * A[1][0];
      const double cof[3][3] = {{c00, c01, c02}, {c10, c11, c12}, {c20, c21, c22}};
      for (int l = 0; l < 3; ++l)
        for (int a = 0; a < 3; ++a) grid.metric[l][a][p] = cof[a][l] / det;
      grid.jacobian[p] = 1.0 / det;
    }
  }
  finish_spacing(grid);
  grid.metric_scheme = cs;
}

void ensure_metrics(CurvilinearGrid& grid, Scheme s) {
  if (!grid.metric_scheme) return;
  const Scheme cs = central_scheme_for(s);
  if (*grid.metric_scheme != cs) compute_metrics(grid, cs);
}

void write_grid_csv(const CurvilinearGrid& grid, std::ostream& os) {
  const Dims& d = grid.dims;
  const bool three = d.is3d();
  os << (three ? "i,j,k,x,y,z,J\n" : "i,j,x,y,J\n");
  os.precision(std::numeric_limits<double>::max_digits10);
  for (int k = 0; k < d.nk; ++k)
    for (int j = 0; j < d.nj; ++j)
      for (int i = 0; i < d.ni; ++i) {
        const std::size_t p = d.index(i, j, k);
        os << i << ',' << j << ',';
        if (three) os << k << ',';
        os << grid.coord[0][p] << ',' << grid.coord[1][p] << ',';
        if (three) os << grid.coord[2][p] << ',';
        os << grid.jacobian[p] << '\n';
      }
}

}  // namespace walldist
