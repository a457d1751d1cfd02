#include "walldist/solver.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

namespace walldist {

void SolveConfig::validate() const {
  formulation.validate();
  if (formulation.kind != Formulation::Poisson || filtering()) filter.validate();
  if (!(cfl > 0.0)) throw Error(ErrorKind::InvalidArgument, "cfl must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be at least 1");
}

void local_timestep(const Evaluator& ev, double cfl, ScalarField& dt) {
  const CurvilinearGrid& g = ev.grid();
  const Dims& d = g.dims;
  if (dt.dims() != d) dt = ScalarField(d);
  const int nd = g.ndim();
  const std::size_t n = d.size();
  if (ev.config().kind == Formulation::Poisson) {
    for (std::size_t p = 0; p < n; ++p) {
      double gs = 0.0;
      for (int l = 0; l < nd; ++l) gs += g.g[l][p];
      dt[p] = cfl / (2.0 * gs);
    }
    return;
  }
  const auto& uh = ev.velocity().uhat;
  const auto& D = ev.diffusivity();
  if (nd == 2) {
    const double* __restrict u0 = uh[0].data();
    const double* __restrict u1 = uh[1].data();
    const double* __restrict g0 = g.g[0].data();
    const double* __restrict g1 = g.g[1].data();
    const double* __restrict df = D.data();
    const double* __restrict hm = g.min_spacing.data();
    double* __restrict t = dt.data();
    for (std::size_t p = 0; p < n; ++p) {
      const double v = cfl / (std::fabs(u0[p]) + std::fabs(u1[p]) + 2.0 * std::fabs(df[p]) * (g0[p] + g1[p]) + 1e-30);
      t[p] = std::min(v, cfl * hm[p]);
    }
    return;
  }
  for (std::size_t p = 0; p < n; ++p) {
    double adv = 0.0, gs = 0.0;
    for (int l = 0; l < nd; ++l) {
      adv += std::fabs(uh[l][p]);
      gs += g.g[l][p];
    }
    const double v = cfl / (adv + 2.0 * std::fabs(D[p]) * gs + 1e-30);
    dt[p] = std::min(v, cfl * g.min_spacing[p]);
  }
}

ScalarField local_timestep(const ScalarField& phi, const CurvilinearGrid& grid, Scheme s,
                           const FormulationConfig& cfg, double cfl) {
  Evaluator ev(grid, s, cfg);
  ScalarField r, dt;
  ev.rhs(phi, r);
  local_timestep(ev, cfl, dt);
  return dt;
}

namespace {

void check_finite(const ScalarField& phi, double lref) {
  const double lim = 1e6 * lref;
  const double* v = phi.data();
  double worst = 0.0;
  bool finite = true;
  for (std::size_t p = 0; p < phi.size(); ++p) {
    worst = std::max(worst, std::fabs(v[p]));
    finite &= std::isfinite(v[p]);
  }
  if (!finite || !(worst <= lim)) throw Error(ErrorKind::Divergence, "solution diverged");
}

double reference_length(const SolveConfig& cfg, const CurvilinearGrid& grid) {
  return cfg.lref > 0.0 ? cfg.lref : grid.lref;
}

}  // namespace

void rk4_step(ScalarField& phi, Evaluator& ev, const BoundarySpec& bc, const SolveConfig& cfg,
              ScalarField& dt, RkWork& w, bool compute_dt) {
  const Dims& d = phi.dims();
  const std::size_t n = d.size();
  if (w.acc.dims() != d) {
    w.k = ScalarField(d);
    w.acc = ScalarField(d);
    w.stage = ScalarField(d);
  }
  static constexpr double stage_frac[3] = {0.5, 0.5, 1.0};
  static constexpr double weight[4] = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};

  ev.set_gamma_frozen(false);
  ev.rhs(phi, w.k);
  if (compute_dt || dt.dims() != d) local_timestep(ev, cfg.cfl, dt);
  ev.set_gamma_frozen(cfg.freeze_gamma);

  for (int s = 0; s < 4; ++s) {
    if (s > 0) ev.rhs(w.stage, w.k);
    const double* __restrict k = w.k.data();
    const double* __restrict t = dt.data();
    const double* __restrict p0 = phi.data();
    double* __restrict acc = w.acc.data();
    double* st = w.stage.data();
    const double ws = weight[s];
    if (s == 0) {
      const double f = stage_frac[0];
      for (std::size_t p = 0; p < n; ++p) {
        acc[p] = ws * k[p];
        st[p] = p0[p] + f * t[p] * k[p];
      }
    } else if (s < 3) {
      const double f = stage_frac[s];
      for (std::size_t p = 0; p < n; ++p) {
        acc[p] += ws * k[p];
        st[p] = p0[p] + f * t[p] * k[p];
      }
    } else {
      for (std::size_t p = 0; p < n; ++p) acc[p] += ws * k[p];
    }
    if (s < 3) apply_boundary_conditions(w.stage, bc);
  }
  ev.set_gamma_frozen(false);
  {
    const double* t = dt.data();
    const double* acc = w.acc.data();
    double* p0 = phi.data();
    for (std::size_t p = 0; p < n; ++p) p0[p] += t[p] * acc[p];
  }
  apply_boundary_conditions(phi, bc);
  if (cfg.filtering()) {
    if (w.frozen.size() != n) w.frozen = fixed_nodes(bc, d);
    for (int l = 0; l < d.active_dirs(); ++l) apply_filter(phi, l, cfg.filter, w.frozen);
    apply_boundary_conditions(phi, bc);
  }
  check_finite(phi, reference_length(cfg, ev.grid()));
}

namespace {

// Poisson solves phi' with the body band left free: its pinned values are
// distances, not values of phi'.
BoundarySpec poisson_boundary(const BoundarySpec& bc) {
  BoundarySpec b = bc;
  std::fill(b.pinned.begin(), b.pinned.end(), 0);
  return b;
}

double l2_error(const ScalarField& a, const ScalarField& b, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    const double e = a[p] - b[p];
    s += e * e * w[p];
  }
  return std::sqrt(s);
}

}  // namespace

SolveReport solve_steady(const CurvilinearGrid& grid, const BoundarySpec& bc_in, const SolveConfig& cfg,
                         const SolveOptions& opts) {
  cfg.validate();
  const Dims& d = grid.dims;
  if (!has_anchor(bc_in, d)) {
    throw Error(ErrorKind::InvalidArgument, "boundary spec has no wall, solid or pinned node");
  }
  const bool poisson = cfg.formulation.kind == Formulation::Poisson;
  const BoundarySpec bc = poisson ? poisson_boundary(bc_in) : bc_in;
  const double lref = reference_length(cfg, grid);

  Evaluator ev(grid, cfg.scheme, cfg.formulation);
  SolveReport rep;
  ScalarField phi(d);
  if (opts.initial && !poisson) {
    if (opts.initial->dims() != d) throw Error(ErrorKind::DimensionMismatch, "initial field does not match grid");
    phi = *opts.initial;
  }
  apply_boundary_conditions(phi, bc);

  const auto fixed = fixed_nodes(bc, d);
  const std::size_t n = d.size();
  ScalarField dt(d), old(d);
  RkWork work;
  work.frozen = fixed;

  std::vector<double> inv_j(n);
  for (std::size_t p = 0; p < n; ++p) inv_j[p] = 1.0 / grid.jacobian[p];

  // Timings cover the solver work only; the L2 diagnostic is excluded.
  using clock = std::chrono::steady_clock;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const auto tstart = clock::now();
    old.values() = phi.values();
    rk4_step(phi, ev, bc, cfg, dt, work);
    double change = 0.0;
    if (poisson) {
      for (std::size_t p = 0; p < n; ++p) {
        if (fixed[p]) continue;
        const double scale = cfg.cfl * grid.min_spacing[p] / dt[p];
        change = std::max(change, std::fabs(phi[p] - old[p]) * scale);
      }
    } else {
      for (std::size_t p = 0; p < n; ++p)
        if (!fixed[p]) change = std::max(change, std::fabs(phi[p] - old[p]));
    }
    change /= lref;
    rep.iter_seconds.push_back(std::chrono::duration<double>(clock::now() - tstart).count());
    rep.loop_seconds += rep.iter_seconds.back();
    rep.residual_history.push_back(change);
    if (opts.exact && !poisson) rep.l2_history.push_back(l2_error(phi, *opts.exact, inv_j));
    rep.iters = it + 1;
    if (change <= cfg.tol) {
      rep.converged = true;
      break;
    }
  }
  rep.wall_time_per_100_iters = rep.iters > 0 ? rep.loop_seconds / rep.iters * 100.0 : 0.0;

  if (poisson) {
    rep.phi_prime = phi;
    rep.phi = poisson_postprocess(phi, grid, cfg.scheme);
    apply_boundary_conditions(rep.phi, bc_in);
    if (opts.exact) rep.l2_history.push_back(l2_error(rep.phi, *opts.exact, inv_j));
  } else {
    rep.phi = std::move(phi);
  }
  return rep;
}

// ---------------------------------------------------------------------------

void MotionSpec::validate() const {
  if (!(dt > 0.0) || !(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "motion dt and tau must be positive");
  if (kind == Kind::PistonSinusoid && !(piston_period > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "piston period must be positive");
  }
  if (kind == Kind::BouncingCube) {
    if (!(cube_side > 0.0) || !(gravity > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "cube side and gravity must be positive");
    }
    if (!(energy_retention >= 0.0 && energy_retention < 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "energy retention must lie in [0, 1)");
    }
    if (cube_y0 < floor_y) throw Error(ErrorKind::BodyOutsideDomain, "cube starts below the floor");
  }
}

double piston_position(const MotionSpec& m, double t) {
  return m.piston_x0 + m.piston_amplitude * std::sin(2.0 * std::numbers::pi * t / m.piston_period);
}

CubeState cube_state(const MotionSpec& m, double t) {
  const double g = m.gravity;
  const double h0 = m.cube_y0 - m.floor_y;
  const double t_fall = std::sqrt(2.0 * h0 / g);
  if (t <= t_fall) return {m.cube_y0 - 0.5 * g * t * t, -g * t, false};
  const double r = std::sqrt(m.energy_retention);
  double v = g * t_fall * r;  // rebound speed after the first contact
  double tc = t_fall;
  while (v > m.rest_speed) {
    const double flight = 2.0 * v / g;
    if (t <= tc + flight) {
      const double s = t - tc;
      return {m.floor_y + v * s - 0.5 * g * s * s, v - g * s, false};
    }
    tc += flight;
    v *= r;
  }
  return {m.floor_y, 0.0, true};
}

namespace {

Polygon rectangle(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

}  // namespace

std::vector<Body> bodies_at(const MotionSpec& m, const CurvilinearGrid& grid, double t) {
  const auto [xmin, xmax] = std::minmax_element(grid.x().values().begin(), grid.x().values().end());
  const auto [ymin, ymax] = std::minmax_element(grid.y().values().begin(), grid.y().values().end());
  const double span = std::max(*xmax - *xmin, *ymax - *ymin);
  switch (m.kind) {
    case MotionSpec::Kind::None:
      return {};
    case MotionSpec::Kind::PistonSinusoid: {
      const double xp = piston_position(m, t);
      if (!(xp > *xmin && xp < *xmax)) {
        throw Error(ErrorKind::BodyOutsideDomain, "piston face leaves the domain at t = " + std::to_string(t));
      }
      return {rectangle(xp, *ymin - span, *xmax + span, *ymax + span)};
    }
    case MotionSpec::Kind::BouncingCube: {
      const double yb = cube_state(m, t).bottom;
      const double h = 0.5 * m.cube_side;
      if (m.cube_cx - h < *xmin || m.cube_cx + h > *xmax || yb < *ymin - 1e-12 || yb + m.cube_side > *ymax) {
        throw Error(ErrorKind::BodyOutsideDomain, "cube leaves the domain at t = " + std::to_string(t));
      }
      // A cube resting on the floor is extended below it so the contact is solid.
      const double lo = yb - m.floor_y < 1e-12 ? m.floor_y - span : yb;
      return {rectangle(m.cube_cx - h, lo, m.cube_cx + h, yb + m.cube_side)};
    }
  }
  return {};
}

std::vector<UnsteadyFrame> solve_unsteady(const CurvilinearGrid& grid, const MotionSpec& motion,
                                          const SolveConfig& cfg, int n_steps,
                                          const std::function<void(const UnsteadyFrame&)>& on_frame) {
  motion.validate();
  if (n_steps < 1) throw Error(ErrorKind::InvalidArgument, "n_steps must be at least 1");
  std::vector<UnsteadyFrame> frames;
  frames.reserve(n_steps);
  ScalarField prev;
  for (int s = 0; s < n_steps; ++s) {
    const double t = s * motion.dt / motion.tau;
    const auto bodies = bodies_at(motion, grid, t);
    const auto bc = make_boundary(grid, motion.faces, bodies, motion.anchor_band);
    SolveOptions opts;
    if (s > 0) opts.initial = &prev;
    UnsteadyFrame f;
    f.time = t;
    f.report = solve_steady(grid, bc, cfg, opts);
    prev = f.report.phi;
    if (on_frame) on_frame(f);
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace walldist
