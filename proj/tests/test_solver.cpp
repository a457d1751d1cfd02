#include <cmath>

#include "doctest.h"
#include "walldist/solver.hpp"

using namespace walldist;

namespace {

constexpr std::array<FaceKind, 6> kChannelFaces{FaceKind::FarField, FaceKind::FarField, FaceKind::Wall,
                                                FaceKind::Wall,     FaceKind::FarField, FaceKind::FarField};
constexpr std::array<FaceKind, 6> kBoxFaces{FaceKind::Wall, FaceKind::Wall, FaceKind::Wall,
                                            FaceKind::Wall, FaceKind::Wall, FaceKind::Wall};

}  // namespace

TEST_CASE("boundary conditions") {
  auto g = build_cartesian(11, 9, 1.0, 1.0);
  ScalarField phi(g.dims, 0.0);
  for (std::size_t p = 0; p < phi.size(); ++p) phi[p] = 1.0 + p;

  auto box = phi;
  apply_boundary_conditions(box, make_boundary(kBoxFaces));
  for (int i = 0; i < 11; ++i) CHECK((box.at(i, 0) == 0.0 && box.at(i, 8) == 0.0));
  for (int j = 0; j < 9; ++j) CHECK((box.at(0, j) == 0.0 && box.at(10, j) == 0.0));

  auto top = phi;
  auto faces = kChannelFaces;
  faces[JMax] = FaceKind::FarField;
  apply_boundary_conditions(top, make_boundary(faces));
  for (int i = 0; i < 11; ++i) CHECK(top.at(i, 8) == top.at(i, 7));

  auto circ = ScalarField(g.dims, 1.0);
  const auto bc = make_boundary(g, kChannelFaces, {Circle{0.5, 0.5, 0.2}}, false);
  apply_boundary_conditions(circ, bc);
  for (std::size_t p = 0; p < circ.size(); ++p) {
    const double r = std::hypot(g.x()[p] - 0.5, g.y()[p] - 0.5);
    if (r < 0.2 - 1e-12) CHECK(circ[p] == 0.0);
  }
}

TEST_CASE("polygon validation and signed distance") {
  Polygon sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  CHECK_NOTHROW(sq.validate());
  CHECK(signed_distance(sq, 0.5, 0.5) == doctest::Approx(-0.5));
  CHECK(signed_distance(sq, 2.0, 0.5) == doctest::Approx(1.0));
  Polygon bow{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
  CHECK_THROWS_AS(bow.validate(), Error);
  CHECK(signed_distance(Circle{0, 0, 1}, 3, 4) == doctest::Approx(4.0));
}

TEST_CASE("local time step") {
  auto g = build_cartesian(41, 41, 1.0, 1.0);
  FormulationConfig ek;
  const double h = 1.0 / 40;
  const auto dt0 = local_timestep(ScalarField(g.dims), g, Scheme::E4, ek, 0.5);
  CHECK(dt0.at(20, 20) == doctest::Approx(0.5 * h));
  ScalarField y(g.dims);
  for (std::size_t p = 0; p < y.size(); ++p) y[p] = g.y()[p];
  const auto dt1 = local_timestep(y, g, Scheme::E4, ek, 0.5);
  CHECK(dt1.at(20, 20) == doctest::Approx(0.5 * h));

  auto f = build_cartesian(81, 81, 1.0, 1.0);
  ScalarField yf(f.dims);
  for (std::size_t p = 0; p < yf.size(); ++p) yf[p] = f.y()[p];
  const auto dt2 = local_timestep(yf, f, Scheme::E4, ek, 0.5);
  CHECK(dt2.at(40, 40) == doctest::Approx(0.5 * dt1.at(20, 20)));
}

TEST_CASE("one upwind step off both walls") {
  auto g = build_cartesian(5, 5, 1.0, 1.0);
  const auto bc = make_boundary(kChannelFaces);
  SolveConfig cfg;
  cfg.scheme = Scheme::UW;
  Evaluator ev(g, cfg.scheme, cfg.formulation);
  ScalarField phi(g.dims), dt;
  RkWork w;
  w.frozen = fixed_nodes(bc, g.dims);
  apply_boundary_conditions(phi, bc);
  rk4_step(phi, ev, bc, cfg, dt, w);
  // zero start: interior nodes move by at most the capped step, symmetric about the centre
  for (int j = 1; j < 4; ++j) CHECK((phi.at(2, j) > 0.1 && phi.at(2, j) <= 0.125 + 1e-15));
  CHECK(phi.at(2, 1) == phi.at(2, 3));
  CHECK(phi.at(2, 1) < phi.at(2, 2));
  CHECK(phi.at(2, 0) == 0.0);
  CHECK(phi.at(2, 4) == 0.0);
}

TEST_CASE("steady channel solves") {
  auto g = build_cartesian(41, 41, 1.0, 1.0);
  const auto bc = make_boundary(kChannelFaces);
  SolveConfig cfg;
  cfg.scheme = Scheme::UW;
  const auto rep = solve_steady(g, bc, cfg);
  REQUIRE(rep.converged);
  CHECK(rep.residual_history.back() <= cfg.tol);
  double mn = 1e9;
  for (std::size_t p = 0; p < rep.phi.size(); ++p) {
    mn = std::min(mn, rep.phi[p]);
    CHECK(std::isfinite(rep.phi[p]));
  }
  CHECK(mn >= -1e-10);
  for (int j = 0; j < 41; ++j) {
    const double y = j / 40.0;
    CHECK(std::fabs(rep.phi.at(20, j) - std::min(y, 1.0 - y)) < 0.01);
  }

  // deterministic
  const auto again = solve_steady(g, bc, cfg);
  CHECK(again.phi.values() == rep.phi.values());

  // warm start from the converged field
  SolveOptions warm;
  warm.initial = &rep.phi;
  const auto w = solve_steady(g, bc, cfg, warm);
  CHECK(w.iters <= 2);

  SolveConfig pc;
  pc.formulation.kind = Formulation::Poisson;
  pc.scheme = Scheme::E4;
  const auto pr = solve_steady(g, bc, pc);
  REQUIRE(pr.converged);
  for (int j = 0; j < 41; ++j) {
    const double y = j / 40.0;
    CHECK(std::fabs(pr.phi.at(20, j) - std::min(y, 1.0 - y)) < 0.01);
  }
}

TEST_CASE("solver rejects bad input") {
  auto g = build_cartesian(11, 11, 1.0, 1.0);
  SolveConfig cfg;
  CHECK_THROWS_AS(solve_steady(g, make_boundary(std::array<FaceKind, 6>{}), cfg), Error);
  cfg.cfl = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.cfl = 0.5;
  cfg.max_iters = 3;
  const auto r = solve_steady(g, make_boundary(kChannelFaces), cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iters == 3);
}

TEST_CASE("body kinematics") {
  MotionSpec m;
  m.kind = MotionSpec::Kind::PistonSinusoid;
  CHECK(piston_position(m, 0.25) == doctest::Approx(1.7));
  MotionSpec c;
  c.kind = MotionSpec::Kind::BouncingCube;
  const double tf = std::sqrt(2.0 * 0.6 / 4.0);
  const auto s = cube_state(c, tf + 1e-9);
  CHECK(s.bottom == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  CHECK(s.velocity == doctest::Approx(std::sqrt(0.8) * 4.0 * tf).epsilon(1e-6));
  CHECK(cube_state(c, 100.0).at_rest);

  auto g = build_cartesian(21, 11, 2.0, 1.0);
  m.piston_amplitude = 1.0;
  CHECK_THROWS_AS(bodies_at(m, g, 0.25), Error);
}
