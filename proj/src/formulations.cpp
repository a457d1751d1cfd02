#include "walldist/formulations.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace walldist {

Formulation parse_formulation(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "eikonal" || s == "ek") return Formulation::Eikonal;
  if (s == "hj") return Formulation::HJ;
  if (s == "hj_lad" || s == "lad") return Formulation::HJ_LAD;
  if (s == "hj_curvature" || s == "curvature" || s == "nakanishi") return Formulation::HJ_Curvature;
  if (s == "poisson") return Formulation::Poisson;
  throw Error(ErrorKind::InvalidArgument, "unknown formulation '" + std::string(name) + "'");
}

const char* to_string(Formulation f) noexcept {
  switch (f) {
    case Formulation::Eikonal: return "Eikonal";
    case Formulation::HJ: return "HJ";
    case Formulation::HJ_LAD: return "HJ_LAD";
    case Formulation::HJ_Curvature: return "HJ_Curvature";
    case Formulation::Poisson: return "Poisson";
  }
  return "?";
}

void FormulationConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "epsilon must lie in [0, 1]");
  }
  if (!(lad_C >= 0.0) || !std::isfinite(lad_C)) {
    throw Error(ErrorKind::InvalidArgument, "lad_C must be non-negative");
  }
  if (!(eps0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps0 must be positive");
}

// ---------------------------------------------------------------------------

namespace {

void size_like(ScalarField& f, const Dims& d) {
  if (f.dims() != d || f.size() != d.size()) f = ScalarField(d);
}

void velocity_2d(const double* __restrict a00, const double* __restrict a01, const double* __restrict a10,
                 const double* __restrict a11, const double* __restrict p0, const double* __restrict p1,
                 double* __restrict ux, double* __restrict uy, double* __restrict uh, double* __restrict vh,
                 std::size_t n) {
  for (std::size_t p = 0; p < n; ++p) {
    const double x = a00[p] * p0[p] + a10[p] * p1[p];
    const double y = a01[p] * p0[p] + a11[p] * p1[p];
    ux[p] = x;
    uy[p] = y;
    uh[p] = a00[p] * x + a01[p] * y;
    vh[p] = a10[p] * x + a11[p] * y;
  }
}

void size_velocity(VelocityFields& v, const Dims& d) {
  for (int a = 0; a < 3; ++a) {
    size_like(v.dphi[a], d);
    size_like(v.u[a], d);
    size_like(v.uhat[a], d);
  }
}

}  // namespace

Evaluator::Evaluator(const CurvilinearGrid& grid, Scheme s, FormulationConfig cfg)
    : grid_(&grid), scheme_(s), central_(central_scheme_for(s)), cfg_(cfg), nd_(grid.ndim()) {
  cfg_.validate();
  const Dims& d = grid.dims;
  for (int l = 0; l < nd_; ++l) {
    if (d.count(l) < min_line_length(s)) {
      throw Error(ErrorKind::LineTooShort, std::string("grid too small for scheme ") + to_string(s));
    }
  }
  for (int l = 0; l < 3; ++l) {
    sqrt_g_[l] = ScalarField(d);
    if (l < nd_)
      for (std::size_t p = 0; p < d.size(); ++p) sqrt_g_[l][p] = std::sqrt(grid.g[l][p]);
    size_like(nvec_[l], d);
  }
  size_velocity(vel_, d);
  size_velocity(cvel_, d);
  for (ScalarField* f : {&gamma_, &diff_, &lap_, &adv_, &tmp_, &gmag_, &kappa_}) size_like(*f, d);
  if (cfg_.kind == Formulation::Poisson) diff_.fill(1.0);
}

void Evaluator::velocity_of(const ScalarField& phi, Scheme s, VelocityFields& v) {
  const std::size_t n = phi.size();
  for (int l = 0; l < nd_; ++l) derivative(phi, l, s, v.dphi[l], cfg_.front_pairing);
  const auto& M = grid_->metric;
  if (nd_ == 2) {
    velocity_2d(M[0][0].data(), M[0][1].data(), M[1][0].data(), M[1][1].data(), v.dphi[0].data(),
                v.dphi[1].data(), v.u[0].data(), v.u[1].data(), v.uhat[0].data(), v.uhat[1].data(), n);
    return;
  }
  for (std::size_t p = 0; p < n; ++p) {
    double u[3];
    for (int m = 0; m < 3; ++m) {
      u[m] = M[0][m][p] * v.dphi[0][p] + M[1][m][p] * v.dphi[1][p] + M[2][m][p] * v.dphi[2][p];
      v.u[m][p] = u[m];
    }
    for (int l = 0; l < 3; ++l) v.uhat[l][p] = M[l][0][p] * u[0] + M[l][1][p] * u[1] + M[l][2][p] * u[2];
  }
}

void Evaluator::laplacian_of(const std::array<ScalarField, 3>& u, ScalarField& out) {
  const std::size_t n = out.size();
  bool first = true;
  for (int m = 0; m < nd_; ++m) {
    for (int l = 0; l < nd_; ++l) {
      derivative(u[m], l, central_, tmp_);
      const double* __restrict a = grid_->metric[l][m].data();
      const double* __restrict t = tmp_.data();
      double* __restrict o = out.data();
      if (first) {
        for (std::size_t p = 0; p < n; ++p) o[p] = a[p] * t[p];
      } else {
        for (std::size_t p = 0; p < n; ++p) o[p] += a[p] * t[p];
      }
      first = false;
    }
  }
}

void Evaluator::gamma_of(const ScalarField& phi, ScalarField& out) {
  const std::size_t n = phi.size();
  const double eps = cfg_.epsilon;
  switch (cfg_.kind) {
    case Formulation::HJ:
    case Formulation::HJ_Curvature:
      for (std::size_t p = 0; p < n; ++p) out[p] = eps * phi[p];
      return;
    case Formulation::HJ_LAD: {
      out.fill(0.0);
      for (int l = 0; l < nd_; ++l) {
        fourth_derivative(phi, l, tmp_);
        const double* s = sqrt_g_[l].data();
        for (std::size_t p = 0; p < n; ++p) out[p] += s[p] * tmp_[p];
      }
      const double c = cfg_.lad_C;
      for (std::size_t p = 0; p < n; ++p) out[p] = std::min(eps * phi[p], c * std::fabs(out[p]));
      return;
    }
    case Formulation::Eikonal:
    case Formulation::Poisson:
      out.fill(0.0);
      return;
  }
}

void Evaluator::advection_of(const ScalarField& phi, const VelocityFields& v, ScalarField& out) {
  const std::size_t n = phi.size();
  if (scheme_ == Scheme::UW) {
    out.fill(0.0);
    for (int l = 0; l < nd_; ++l) {
      upwind_flux(v.uhat[l], phi, l, tmp_);
      for (std::size_t p = 0; p < n; ++p) out[p] += tmp_[p];
    }
    return;
  }
  if (nd_ == 2) {
    const double* __restrict u0 = v.uhat[0].data();
    const double* __restrict u1 = v.uhat[1].data();
    const double* __restrict d0 = v.dphi[0].data();
    const double* __restrict d1 = v.dphi[1].data();
    double* __restrict o = out.data();
    for (std::size_t p = 0; p < n; ++p) o[p] = u0[p] * d0[p] + u1[p] * d1[p];
    return;
  }
  for (std::size_t p = 0; p < n; ++p) {
    out[p] = v.uhat[0][p] * v.dphi[0][p] + v.uhat[1][p] * v.dphi[1][p] + v.uhat[2][p] * v.dphi[2][p];
  }
}

void Evaluator::curvature_term(const VelocityFields& c, ScalarField& grad_mag, ScalarField& kappa) {
  const std::size_t n = grad_mag.size();
  const double e0 = cfg_.eps0 / grid_->lref;
  for (std::size_t p = 0; p < n; ++p) {
    double s = 0.0;
    for (int m = 0; m < nd_; ++m) s += c.u[m][p] * c.u[m][p];
    grad_mag[p] = std::sqrt(s);
  }
  for (int m = 0; m < nd_; ++m)
    for (std::size_t p = 0; p < n; ++p) nvec_[m][p] = c.u[m][p] / (grad_mag[p] + e0);
  laplacian_of(nvec_, kappa);
}

void Evaluator::rhs(const ScalarField& phi, ScalarField& out) {
  const Dims& d = grid_->dims;
  if (phi.dims() != d) throw Error(ErrorKind::DimensionMismatch, "field does not match grid");
  size_like(out, d);
  const std::size_t n = d.size();

  if (cfg_.kind == Formulation::Poisson) {
    velocity_of(phi, central_, cvel_);
    laplacian_of(cvel_.u, out);
    double* __restrict o = out.data();
    for (std::size_t p = 0; p < n; ++p) o[p] += 1.0;
    return;
  }

  velocity_of(phi, scheme_, vel_);
  if (cfg_.kind == Formulation::Eikonal) {
    // gamma_ and diff_ stay zero from construction
    advection_of(phi, vel_, out);
    double* __restrict o = out.data();
    for (std::size_t p = 0; p < n; ++p) o[p] = 1.0 - o[p];
    return;
  }
  advection_of(phi, vel_, adv_);

  const VelocityFields* cv = &vel_;
  if (scheme_ == Scheme::UW) {
    velocity_of(phi, central_, cvel_);
    cv = &cvel_;
  }
  laplacian_of(cv->u, lap_);
  if (!gamma_frozen_) gamma_of(phi, gamma_);

  if (cfg_.kind == Formulation::HJ_Curvature) {
    curvature_term(*cv, gmag_, kappa_);
    for (std::size_t p = 0; p < n; ++p) {
      const double dev = 1.0 - gmag_[p];
      const double nu = 0.001 * dev * dev;
      diff_[p] = gamma_[p] + nu;
      out[p] = 1.0 + diff_[p] * (lap_[p] - std::max(0.0, gmag_[p] * kappa_[p])) - adv_[p];
    }
    return;
  }
  // The LAD limiter can switch on between RK stages, so its step size is
  // sized for the upper bound eps phi.
  const double* __restrict gm = gamma_.data();
  const double* __restrict lp = lap_.data();
  const double* __restrict ad = adv_.data();
  const double* __restrict ph = phi.data();
  double* __restrict df = diff_.data();
  double* __restrict o = out.data();
  if (cfg_.kind == Formulation::HJ_LAD) {
    const double eps = cfg_.epsilon;
    for (std::size_t p = 0; p < n; ++p) {
      df[p] = eps * ph[p];
      o[p] = 1.0 + gm[p] * lp[p] - ad[p];
    }
  } else {
    for (std::size_t p = 0; p < n; ++p) {
      df[p] = gm[p];
      o[p] = 1.0 + gm[p] * lp[p] - ad[p];
    }
  }
}

// ---------------------------------------------------------------------------

void gradient_and_velocity(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s, VelocityFields& out) {
  Evaluator ev(grid, s, FormulationConfig{});
  size_velocity(out, grid.dims);
  ev.velocity_of(phi, s, out);
}

VelocityFields gradient_and_velocity(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s) {
  VelocityFields v;
  gradient_and_velocity(phi, grid, s, v);
  return v;
}

ScalarField eikonal_residual(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s) {
  Evaluator ev(grid, s, FormulationConfig{Formulation::Eikonal});
  ScalarField out;
  ev.rhs(phi, out);
  return out;
}

ScalarField gamma_standard(const ScalarField& phi, double epsilon) {
  ScalarField out(phi.dims());
  for (std::size_t p = 0; p < phi.size(); ++p) out[p] = epsilon * phi[p];
  return out;
}

ScalarField gamma_lad(const ScalarField& phi, const CurvilinearGrid& grid, double epsilon, double lad_C) {
  FormulationConfig cfg{Formulation::HJ_LAD, epsilon, lad_C};
  Evaluator ev(grid, Scheme::E2, cfg);
  ScalarField out(phi.dims());
  ev.gamma_of(phi, out);
  return out;
}

ScalarField hj_residual(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s, const FormulationConfig& cfg) {
  FormulationConfig c = cfg;
  if (c.kind == Formulation::Eikonal) c.epsilon = 0.0;
  if (c.kind != Formulation::HJ_LAD) c.kind = Formulation::HJ;
  Evaluator ev(grid, s, c);
  ScalarField out;
  ev.rhs(phi, out);
  return out;
}

ScalarField hj_curvature_residual(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s,
                                  const FormulationConfig& cfg) {
  FormulationConfig c = cfg;
  c.kind = Formulation::HJ_Curvature;
  Evaluator ev(grid, s, c);
  ScalarField out;
  ev.rhs(phi, out);
  return out;
}

ScalarField poisson_residual(const ScalarField& phi_prime, const CurvilinearGrid& grid, Scheme s) {
  Evaluator ev(grid, s, FormulationConfig{Formulation::Poisson});
  ScalarField out;
  ev.rhs(phi_prime, out);
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = -out[p];
  return out;
}

ScalarField poisson_postprocess(const ScalarField& phi_prime, const CurvilinearGrid& grid, Scheme s) {
  const auto v = gradient_and_velocity(phi_prime, grid, central_scheme_for(s));
  const int nd = grid.ndim();
  ScalarField out(phi_prime.dims());
  for (std::size_t p = 0; p < out.size(); ++p) {
    double g2 = 0.0;
    for (int m = 0; m < nd; ++m) g2 += v.u[m][p] * v.u[m][p];
    const double pp = std::max(phi_prime[p], 0.0);
    const double rad = g2 + 2.0 * phi_prime[p];
    if (rad < -1e-12) {
      throw Error(ErrorKind::NegativeRadicand, "negative radicand in Poisson post-processing at node " +
                                                   std::to_string(p));
    }
    out[p] = std::max(0.0, -std::sqrt(g2) + std::sqrt(g2 + 2.0 * pp));
  }
  return out;
}

}  // namespace walldist
