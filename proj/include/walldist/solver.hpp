#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "walldist/boundary.hpp"
#include "walldist/formulations.hpp"

namespace walldist {

struct SolveConfig {
  FormulationConfig formulation;
  Scheme scheme = Scheme::E4;
  FilterConfig filter;
  /// Unset: filter after every step for central schemes, never for UW.
  std::optional<bool> filter_enabled;
  double cfl = 0.5;
  double tol = 1e-5;
  int max_iters = 200000;
  /// Reference length of the convergence test; <= 0 takes the grid's.
  double lref = 0.0;
  /// Keep Gamma fixed across the RK stages of a step (default: recompute).
  bool freeze_gamma = false;

  bool filtering() const noexcept { return filter_enabled.value_or(scheme != Scheme::UW); }
  void validate() const;
};

struct SolveReport {
  ScalarField phi;
  /// Poisson only: the auxiliary field phi'.
  ScalarField phi_prime;
  int iters = 0;
  /// Maximum change per iteration (see solve_steady).
  std::vector<double> residual_history;
  /// L2 error against the supplied exact field, one entry per iteration.
  std::vector<double> l2_history;
  /// Wall time of each iteration, seconds.
  std::vector<double> iter_seconds;
  double loop_seconds = 0.0;
  double wall_time_per_100_iters = 0.0;
  bool converged = false;
};

struct SolveOptions {
  /// Starting field (warm start); zero when absent.
  const ScalarField* initial = nullptr;
  /// Exact field for the L2 history; none when absent.
  const ScalarField* exact = nullptr;
};

/// Local pseudo-time step from the state of the evaluator's last rhs() call:
/// cfl / (sum_l |U_hat_l| + 2 D sum_l g_l + 1e-30), capped at cfl times the
/// smallest local spacing, with D the diffusivity. Poisson uses
/// cfl / (2 sum_l g_l).
void local_timestep(const Evaluator& ev, double cfl, ScalarField& dt);

/// Convenience form: evaluates the right-hand side of `phi` first.
ScalarField local_timestep(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s,
                           const FormulationConfig& cfg, double cfl);

/// Scratch storage for rk4_step.
struct RkWork {
  ScalarField k, acc, stage;
  std::vector<std::uint8_t> frozen;
};

/// One classical RK4 step of d phi / d t* = rhs(phi) with per-node dt. The
/// boundary conditions are imposed after every stage; the filter (if enabled)
/// runs once after the step, followed by the boundary conditions again. When
/// `dt` is empty it is computed from the first stage. Throws Divergence if
/// phi leaves [-1e6, 1e6] Lref or stops being finite.
void rk4_step(ScalarField& phi, Evaluator& ev, const BoundarySpec& bc, const SolveConfig& cfg,
              ScalarField& dt, RkWork& work, bool compute_dt = true);

/// Pseudo-time iteration to steady state. The convergence measure is
/// max |phi - phi_old| / Lref over nodes not fixed by the boundary
/// conditions. Poisson iterates phi' and scales each node's change by
/// cfl * h_min / dt (its step is diffusive, ~h^2), then post-processes.
/// Non-convergence is reported through `converged`, not thrown.
SolveReport solve_steady(const CurvilinearGrid& grid, const BoundarySpec& bc, const SolveConfig& cfg,
                         const SolveOptions& opts = {});

// ---------------------------------------------------------------------------
// Moving bodies

struct MotionSpec {
  enum class Kind { None, PistonSinusoid, BouncingCube };
  Kind kind = Kind::None;

  // Piston: solid for x >= x0 + A sin(2 pi t / T).
  double piston_x0 = 1.4;
  double piston_amplitude = 0.3;
  double piston_period = 1.0;

  // Bouncing cube: square of side `cube_side` centred at x = cube_cx, bottom
  // starting at cube_y0 at rest, falling onto the floor y = floor_y.
  double cube_side = 0.3;
  double cube_cx = 1.0;
  double cube_y0 = 0.6;
  double floor_y = 0.0;
  double gravity = 4.0;
  /// Fraction of kinetic energy kept at each floor contact.
  double energy_retention = 0.8;
  /// Rebound speeds below this count as rest.
  double rest_speed = 1e-3;

  /// Physical time step (units of tau).
  double dt = 0.025;
  double tau = 1.0;

  std::array<FaceKind, 6> faces{FaceKind::Wall, FaceKind::FarField, FaceKind::Wall,
                                FaceKind::Wall, FaceKind::FarField, FaceKind::FarField};
  bool anchor_band = true;

  void validate() const;
};

double piston_position(const MotionSpec& m, double t);

/// Bottom height and vertical velocity of the cube at time t.
struct CubeState {
  double bottom;
  double velocity;
  bool at_rest;
};
CubeState cube_state(const MotionSpec& m, double t);

/// Bodies at time t. Throws BodyOutsideDomain if a body leaves the grid's
/// bounding box.
std::vector<Body> bodies_at(const MotionSpec& m, const CurvilinearGrid& grid, double t);

struct UnsteadyFrame {
  double time = 0.0;
  SolveReport report;
};

/// Runs n_steps physical steps (t = n dt / tau, n = 0..n_steps-1), rebuilding
/// the masks from the body position and warm-starting from the previous phi.
/// `on_frame` (optional) sees each frame as it completes.
std::vector<UnsteadyFrame> solve_unsteady(const CurvilinearGrid& grid, const MotionSpec& motion,
                                          const SolveConfig& cfg, int n_steps,
                                          const std::function<void(const UnsteadyFrame&)>& on_frame = {});

}  // namespace walldist
