#pragma once

#include <array>
#include <string_view>

#include "walldist/grid.hpp"

namespace walldist {

enum class Formulation { Eikonal, HJ, HJ_LAD, HJ_Curvature, Poisson };

Formulation parse_formulation(std::string_view name);
const char* to_string(Formulation f) noexcept;

struct FormulationConfig {
  Formulation kind = Formulation::Eikonal;
  double epsilon = 0.2;
  double lad_C = 0.1;
  /// Curvature regularizer, scaled by 1/Lref when used.
  double eps0 = 1e-12;
  /// Selector pairing of the upwind front derivative (UW only).
  FrontPairing front_pairing = FrontPairing::Conventional;

  /// epsilon in [0, 1] (0 only as the Eikonal reduction), lad_C >= 0, eps0 > 0.
  void validate() const;
};

/// phi derivatives along each computational direction, the Cartesian gradient
/// U = grad phi and the contravariant velocities U_hat_l = xi_l . U.
struct VelocityFields {
  std::array<ScalarField, 3> dphi;
  std::array<ScalarField, 3> u;
  std::array<ScalarField, 3> uhat;
};

/// Upwind scheme: dphi from the front-direction derivative. Otherwise the
/// central derivative of `s`.
void gradient_and_velocity(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s,
                           VelocityFields& out);
VelocityFields gradient_and_velocity(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s);

/// 1 - sum_l U_hat_l dphi/dxi_l (upwinded product for UW).
ScalarField eikonal_residual(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s);

ScalarField gamma_standard(const ScalarField& phi, double epsilon);

/// MIN(eps phi, C |sum_l g_l^2 d4phi/dxi_l^4 dx_l^3|) with dx_l = g_l^(-1/2).
ScalarField gamma_lad(const ScalarField& phi, const CurvilinearGrid& grid, double epsilon, double lad_C);

/// 1 + Gamma lap(phi) - U . grad phi, with Gamma from cfg.kind (zero for
/// Eikonal, eps phi for HJ, the LAD limiter for HJ_LAD).
ScalarField hj_residual(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s,
                        const FormulationConfig& cfg);

/// 1 + (eps phi + nu)(lap(phi) - MAX(0, |grad phi| kappa)) - U . grad phi with
/// nu = 0.001 (1 - |grad phi|)^2 and kappa = div(grad phi / (|grad phi| + eps0)).
ScalarField hj_curvature_residual(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s,
                                  const FormulationConfig& cfg);

/// -1 - lap(phi').
ScalarField poisson_residual(const ScalarField& phi_prime, const CurvilinearGrid& grid, Scheme s);

/// phi = -|grad phi'| + sqrt(|grad phi'|^2 + 2 phi'). Throws NegativeRadicand.
ScalarField poisson_postprocess(const ScalarField& phi_prime, const CurvilinearGrid& grid, Scheme s);

/// Evaluates the pseudo-time right-hand side d phi / d t* for one formulation
/// with reusable scratch storage. For Poisson the unknown is phi' and the
/// right-hand side is 1 + lap(phi').
class Evaluator {
 public:
  Evaluator(const CurvilinearGrid& grid, Scheme s, FormulationConfig cfg);

  void rhs(const ScalarField& phi, ScalarField& out);

  const CurvilinearGrid& grid() const noexcept { return *grid_; }
  Scheme scheme() const noexcept { return scheme_; }
  const FormulationConfig& config() const noexcept { return cfg_; }

  /// State left behind by the last rhs() call.
  const VelocityFields& velocity() const noexcept { return vel_; }
  const ScalarField& gamma() const noexcept { return gamma_; }
  /// Coefficient of the diffusive term (Gamma, Gamma + nu, or 1 for Poisson).
  const ScalarField& diffusivity() const noexcept { return diff_; }

  /// When set, rhs() keeps the Gamma of the previous call instead of
  /// recomputing it from the stage value of phi.
  void set_gamma_frozen(bool frozen) noexcept { gamma_frozen_ = frozen; }

  /// Exposed for the free functions above.
  void velocity_of(const ScalarField& phi, Scheme s, VelocityFields& v);
  void laplacian_of(const std::array<ScalarField, 3>& u, ScalarField& out);
  void gamma_of(const ScalarField& phi, ScalarField& out);
  void advection_of(const ScalarField& phi, const VelocityFields& v, ScalarField& out);
  void curvature_term(const VelocityFields& central, ScalarField& grad_mag, ScalarField& kappa);

 private:
  const CurvilinearGrid* grid_;
  Scheme scheme_;
  Scheme central_;
  FormulationConfig cfg_;
  int nd_;
  std::array<ScalarField, 3> sqrt_g_;
  VelocityFields vel_;
  VelocityFields cvel_;  // central velocity for diffusive terms under UW
  ScalarField gamma_, diff_, lap_, adv_, tmp_, gmag_, kappa_;
  bool gamma_frozen_ = false;
  std::array<ScalarField, 3> nvec_;
};

}  // namespace walldist
