#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "walldist/grid.hpp"

namespace walldist {

enum class FaceKind { Wall, FarField };

/// Faces of the computational block in (imin, imax, jmin, jmax, kmin, kmax)
/// order.
enum Face { IMin = 0, IMax, JMin, JMax, KMin, KMax };

struct Circle {
  double cx = 0.0;
  double cy = 0.0;
  double r = 1.0;
};

/// Closed polygon, vertices in either orientation, last vertex not repeated.
struct Polygon {
  std::vector<std::array<double, 2>> vertices;

  /// At least 3 vertices, non-zero area and no self-intersections. Throws
  /// InvalidPolygon.
  void validate() const;
};

using Body = std::variant<Circle, Polygon>;

/// Signed distance to the body outline: negative inside, positive outside.
double signed_distance(const Body& body, double x, double y);

/// Wall faces plus solid bodies. Solid nodes hold phi = 0; pinned nodes hold
/// a fixed value (the exact distance of fluid nodes next to a body outline).
struct BoundarySpec {
  std::array<FaceKind, 6> faces{FaceKind::FarField, FaceKind::FarField, FaceKind::FarField,
                                FaceKind::FarField, FaceKind::FarField, FaceKind::FarField};
  std::vector<std::uint8_t> solid;
  std::vector<std::uint8_t> pinned;
  std::vector<double> pin_value;

  bool has_masks() const noexcept { return !solid.empty(); }
};

/// Face kinds only, empty masks.
BoundarySpec make_boundary(const std::array<FaceKind, 6>& faces);

/// Faces plus the solid mask of `bodies` (nodes with signed distance <= 0).
/// With `anchor_band`, fluid nodes sharing a grid edge with a solid node are
/// pinned to their distance from the nearest body outline (or from a wall
/// face when that is closer). Throws BodyOutsideDomain if no node is fluid.
BoundarySpec make_boundary(const CurvilinearGrid& grid, const std::array<FaceKind, 6>& faces,
                           const std::vector<Body>& bodies, bool anchor_band = true);

/// Same, with the solid set given as a per-node signed distance to the body
/// outline (solid where sd <= 0).
BoundarySpec make_boundary(const CurvilinearGrid& grid, const std::array<FaceKind, 6>& faces,
                           const std::vector<double>& sd, bool anchor_band = true);

/// True if some node is held at a fixed value (wall face, solid or pinned).
bool has_anchor(const BoundarySpec& spec, const Dims& dims);

/// Neumann copies on far-field faces, then zero on wall faces, then solid and
/// pinned nodes.
void apply_boundary_conditions(ScalarField& phi, const BoundarySpec& spec);

/// 1 on nodes whose value is set by the boundary conditions rather than by
/// the PDE (wall-face, solid and pinned nodes).
std::vector<std::uint8_t> fixed_nodes(const BoundarySpec& spec, const Dims& dims);

}  // namespace walldist
