#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "walldist/solver.hpp"

namespace walldist {

enum class CaseId { FlatPlate, Channel, Box2D, Box3D, Bump, Complex, Piston, BouncingCube, Burnback };

CaseId parse_case(std::string_view name);
const char* to_string(CaseId c) noexcept;

/// Geometry of one canonical case. `extent` is the domain size (Lx, Ly, Lz)
/// with the origin at zero; the bump case uses `bump` instead.
struct CaseGeometry {
  CaseId id = CaseId::Channel;
  std::array<double, 3> extent{1.0, 1.0, 1.0};
  BumpParams bump;
  /// Embedded bodies of the complex case.
  std::vector<Body> bodies;
  MotionSpec motion;
  /// Oracle sampling density along each wall curve.
  int samples_per_curve = 10000;
  double lref = 1.0;
};

/// Default layout of each case (see README for the numbers).
CaseGeometry default_geometry(CaseId id);

std::array<FaceKind, 6> case_faces(const CaseGeometry& c);
CurvilinearGrid build_case_grid(const CaseGeometry& c, Dims dims);
/// Wall faces plus the bodies present at time t.
BoundarySpec case_boundary(const CaseGeometry& c, const CurvilinearGrid& grid, double t = 0.0);

/// Brute-force distance oracle: nearest of a dense point sampling of the wall
/// curves.
class SampledWalls {
 public:
  void add_segment(std::array<double, 2> a, std::array<double, 2> b, int n);
  /// Arc of radius r about c from angle a0 to a1 (radians, counter-clockwise).
  void add_arc(std::array<double, 2> c, double r, double a0, double a1, int n);
  /// Every edge of a polygon gets n samples; a circle gets n in total.
  void add_body(const Body& b, int n);

  double distance(double x, double y) const;
  std::size_t size() const noexcept { return xs_.size(); }

 private:
  void sort_if_needed() const;
  mutable std::vector<double> xs_, ys_;
  mutable bool sorted_ = true;
};

/// Wall sampling of a case at time t (2-D cases only).
SampledWalls sample_walls(const CaseGeometry& c, double t = 0.0);

/// Exact wall distance at a point: closed forms for the flat plate, channel
/// and boxes, the sampled-wall oracle otherwise. Points inside a body give 0.
/// Throws UnknownCase for the burnback case.
double exact_distance(const CaseGeometry& c, std::array<double, 3> point, double t = 0.0);
ScalarField exact_field(const CaseGeometry& c, const CurvilinearGrid& grid, double t = 0.0);

/// (sum w |phi - exact|^2)^(1/2) with w = 1/J, the cell area (dx dy on a
/// Cartesian grid).
double l2_norm(const ScalarField& phi, const ScalarField& exact, const CurvilinearGrid& grid);

struct ErrorHistogram {
  std::vector<double> bin_edges;  // size counts.size() + 1, percent
  std::vector<long> counts;
  long total() const noexcept;
};

/// Percentage error (exact - phi) / exact * 100 at every node with exact > 0
/// that is not fixed by `bc` (pass nullptr to count all such nodes).
std::vector<double> percentage_errors(const ScalarField& phi, const ScalarField& exact,
                                      const BoundarySpec* bc = nullptr);

/// Bins of width `bin_width_pct` aligned to multiples of the width, covering
/// the observed range.
ErrorHistogram error_histogram(const std::vector<double>& pct_errors, double bin_width_pct);
ErrorHistogram error_histogram(const ScalarField& phi, const ScalarField& exact, const BoundarySpec* bc,
                               double bin_width_pct);

ScalarField gradient_magnitude(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s);

/// Loop seconds per 100 iterations. Throws TooFewIterations below 100.
double timing_probe(const SolveReport& report);

}  // namespace walldist
