#pragma once

#include <array>
#include <functional>
#include <vector>

#include "walldist/solver.hpp"

namespace walldist {

/// Grain cross-section. `port` outlines the gas cavity; the propellant fills
/// the rest of the domain up to the casing circle (no casing when
/// case_radius <= 0).
struct GrainShape {
  Body port = Circle{1.0, 1.0, 0.3};
  std::array<double, 2> center{1.0, 1.0};
  double case_radius = 0.0;
};

/// Dendrite grain: a circular port of radius r_port with `legs` propellant
/// fingers of width leg_width reaching inwards to r_tip.
struct DendriteParams {
  std::array<double, 2> center{1.0, 1.0};
  int legs = 8;
  double r_tip = 0.22;
  double r_port = 0.45;
  double leg_width = 0.14;
  double r_case = 0.74;
  /// Polygon vertices per arc between two fingers.
  int arc_points = 24;

  void validate() const;
  GrainShape shape() const;
};

/// Signed wall distance to the port outline: negative in the gas cavity,
/// positive in the propellant. Each side is solved with `cfg` (the outline is
/// the wall, domain faces are zero-gradient) and then signed.
ScalarField init_signed_distance(const CurvilinearGrid& grid, const GrainShape& grain, const SolveConfig& cfg);

enum class LevelSetMode {
  /// d phi_s / dt + F |grad phi_s| = 0: the zero level moves at speed F
  /// towards positive phi_s.
  Standard,
  /// d phi_s / dt + F |grad phi_s| = 1.
  AsWritten,
};

LevelSetMode parse_levelset_mode(std::string_view name);
const char* to_string(LevelSetMode m) noexcept;

/// |grad phi_s| from upwind front derivatives through the metric terms.
ScalarField levelset_gradient_magnitude(const ScalarField& phis, const CurvilinearGrid& grid);

/// One classical RK4 step with zero-gradient conditions on every face.
/// Throws CflViolation unless F dt < the smallest grid spacing.
void levelset_step(ScalarField& phis, const CurvilinearGrid& grid, double F, double dt,
                   LevelSetMode mode = LevelSetMode::Standard);

struct Polyline {
  std::vector<std::array<double, 2>> points;
  /// Closed polylines do not repeat the first point.
  bool closed = false;
};

/// Marching squares on the physical node coordinates (2-D fields). Crossings
/// are placed by linear interpolation along cell edges; saddle cells follow
/// the cell-centre average. Closed polylines run counter-clockwise.
std::vector<Polyline> extract_isolines(const ScalarField& phis, const CurvilinearGrid& grid, double level);

double perimeter(const std::vector<Polyline>& lines);
/// Length of the polylines inside the circle (centre, radius).
double perimeter_within(const std::vector<Polyline>& lines, std::array<double, 2> center, double radius);

/// (a C* (rho_p - rho_0) Sb / A*)^(1 / (1 - n)). Throws InvalidExponent for
/// n outside [0, 1) and InvalidArgument for A* <= 0 or rho_p <= rho_0.
double chamber_pressure(double Sb, double a, double n, double c_star, double rho_p, double rho_0, double a_star);

struct BurnbackConfig {
  SolveConfig init;
  double F = 0.3;
  double dt = 0.01;
  int n_steps = 130;
  /// Levels in units of lref (0 is the grain surface).
  std::vector<double> levels{-0.2, 0.0, 1.0, 2.0};
  double lref = 0.1;
  LevelSetMode mode = LevelSetMode::Standard;
};

struct BurnbackFrame {
  double time = 0.0;
  /// Perimeter of each tracked level (clipped to the casing when there is one).
  std::vector<double> perimeters;
  std::vector<std::vector<Polyline>> isolines;
  /// max | |grad phi_s| - 1 | over nodes within two cells of the zero level.
  double grad_drift = 0.0;
};

/// Initializes phi_s, then records frames at t = 0, dt, ..., n_steps dt.
/// `on_frame` also receives the field.
std::vector<BurnbackFrame> burnback_run(
    const CurvilinearGrid& grid, const GrainShape& grain, const BurnbackConfig& cfg,
    const std::function<void(const BurnbackFrame&, const ScalarField&)>& on_frame = {});

}  // namespace walldist
