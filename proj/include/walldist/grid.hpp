#pragma once

#include <array>
#include <iosfwd>
#include <optional>

#include "walldist/field.hpp"
#include "walldist/operators.hpp"

namespace walldist {

/// Structured (i, j[, k]) grid with node coordinates and the metric terms of
/// the mapping to unit-spaced computational coordinates (xi, eta, zeta).
struct CurvilinearGrid {
  Dims dims;
  std::array<ScalarField, 3> coord;  // x, y, z (z is zero in 2-D)

  /// metric[l][m] = d xi_l / d x_m. Entries with l or m >= active_dirs() stay
  /// zero for 2-D grids.
  std::array<std::array<ScalarField, 3>, 3> metric;
  ScalarField jacobian;

  /// g[l] = sum_m metric[l][m]^2, the squared inverse spacing along l.
  std::array<ScalarField, 3> g;
  /// min_l g[l]^(-1/2): smallest physical spacing at each node.
  ScalarField min_spacing;

  double lref = 1.0;
  /// Scheme the metrics were computed with; empty for exact (Cartesian) metrics.
  std::optional<Scheme> metric_scheme;

  int ndim() const noexcept { return dims.active_dirs(); }
  const ScalarField& x() const noexcept { return coord[0]; }
  const ScalarField& y() const noexcept { return coord[1]; }
  const ScalarField& z() const noexcept { return coord[2]; }
};

/// Uniform axis-aligned grid spanning [x0, x0 + Lx] x [y0, y0 + Ly] (and z)
/// with exact metrics. Throws DimensionTooSmall if a count is below 5 (nk = 1
/// selects a 2-D grid).
CurvilinearGrid build_cartesian(Dims dims, std::array<double, 3> extent,
                                std::array<double, 3> origin = {0.0, 0.0, 0.0});
CurvilinearGrid build_cartesian(int ni, int nj, double lx, double ly);
CurvilinearGrid build_cartesian(int ni, int nj, int nk, double lx, double ly, double lz);

/// Flat plate with a circular-arc bump on the lower wall.
struct BumpParams {
  double x_min = -1.5;
  double x_max = 1.5;
  double y_top = 1.5;
  double chord = 1.0;
  double height = 0.25;
  double x_center = 0.0;

  /// Radius of the arc through the chord ends with the given height.
  double radius() const;
  /// Height of the lower wall at x.
  double wall_y(double x) const;
  void validate() const;
};

/// Body-fitted grid by transfinite interpolation between the lower wall and a
/// flat top. Lower-wall nodes are uniform in x. Throws DegenerateMapping if
/// any Jacobian is not positive.
CurvilinearGrid build_bump_grid(int ni, int nj, const BumpParams& p);

/// Fills metric terms, g, min_spacing and the Jacobian from the coordinates
/// using `s` for the coordinate derivatives (UW maps to E2). Throws
/// SingularMetric if |det| < 1e-14 anywhere.
void compute_metrics(CurvilinearGrid& grid, Scheme s);

/// Recomputes metrics with the central scheme paired with `s`, unless the grid
/// carries exact metrics or already uses that scheme.
void ensure_metrics(CurvilinearGrid& grid, Scheme s);

/// CSV dump: i,j[,k],x,y[,z],J with a header row.
void write_grid_csv(const CurvilinearGrid& grid, std::ostream& os);

}  // namespace walldist
