#include <sstream>

#include "doctest.h"
#include "walldist/io.hpp"

using namespace walldist;

TEST_CASE("field CSV round trip") {
  auto g = build_cartesian(7, 5, 1.0, 0.4);
  ScalarField phi(g.dims), ex(g.dims);
  for (std::size_t p = 0; p < phi.size(); ++p) {
    phi[p] = 0.1 * p + 1.0 / 3.0;
    ex[p] = 0.1 * p;
  }
  std::stringstream ss;
  write_field_csv(ss, g, phi, &ex);
  const auto t = read_field_csv(ss);
  CHECK(t.dims == g.dims);
  CHECK(t.phi.values() == phi.values());
  REQUIRE(t.exact);
  CHECK(t.exact->values() == ex.values());
  CHECK(t.coord[0].values() == g.x().values());
  CHECK(t.coord[1].values() == g.y().values());

  auto g3 = build_cartesian(5, 5, 6, 1.0, 1.0, 1.0);
  ScalarField p3(g3.dims, 0.25);
  std::stringstream s3;
  write_field_csv(s3, g3, p3);
  const auto t3 = read_field_csv(s3);
  CHECK(t3.dims == g3.dims);
  CHECK_FALSE(t3.exact);
  CHECK(t3.coord[2].values() == g3.z().values());

  std::stringstream bad("i,j,x,y,phi\n0,0,0.0,0.0\n");
  CHECK_THROWS_AS(read_field_csv(bad), Error);
}

TEST_CASE("grid CSV round trip") {
  auto g = build_cartesian(6, 5, 1.0, 2.0);
  std::stringstream ss;
  write_grid_csv(g, ss);
  const auto r = read_grid_csv(ss);
  CHECK(r.dims == g.dims);
  CHECK(r.jacobian.values() == g.jacobian.values());
  CHECK(r.y().values() == g.y().values());
}

TEST_CASE("history, histogram, summary round trip") {
  SolveReport rep;
  rep.residual_history = {1.0, 0.5, 1e-7};
  rep.l2_history = {0.3, 0.2, 0.1};
  rep.iter_seconds = {0.25, 0.25, 0.5};
  std::stringstream ss;
  write_history_csv(ss, rep);
  const auto h = read_history_csv(ss);
  CHECK(h.iter == std::vector<int>{1, 2, 3});
  CHECK(h.max_residual == rep.residual_history);
  CHECK(h.l2 == rep.l2_history);
  CHECK(h.wall_seconds.back() == 1.0);

  const auto hist = error_histogram(std::vector<double>{-0.7, -0.2, 0.1, 0.1, 1.3}, 0.5);
  std::stringstream hs;
  write_histogram_csv(hs, hist);
  const auto back = read_histogram_csv(hs);
  CHECK(back.bin_edges == hist.bin_edges);
  CHECK(back.counts == hist.counts);

  RunSummary s{"channel", "eikonal", "uw", "101x101", 812, true, 7.5e-7, 0.3, 0.0123};
  std::stringstream js;
  write_summary(js, s);
  CHECK(read_summary(js) == s);
  std::stringstream broken("{\"case\": 1}");
  CHECK_THROWS_AS(read_summary(broken), Error);
}

TEST_CASE("polyline and perimeter CSV round trip") {
  std::vector<LevelPolylines> sets{
      {0.0, {Polyline{{{0, 0}, {1, 0}, {1, 1}}, true}, Polyline{{{2, 2}, {3, 2.5}}, false}}},
      {0.1, {Polyline{{{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.1}, {0.2, 0.0}}, true}}},
  };
  std::stringstream ss;
  write_polylines_csv(ss, sets);
  const auto r = read_polylines_csv(ss);
  REQUIRE(r.size() == 2);
  CHECK(r[0].level == 0.0);
  REQUIRE(r[0].lines.size() == 2);
  CHECK(r[0].lines[0].closed);
  CHECK(r[0].lines[0].points == sets[0].lines[0].points);
  CHECK_FALSE(r[0].lines[1].closed);
  CHECK(r[1].lines[0].points == sets[1].lines[0].points);

  std::vector<PerimeterRow> rows{{0.0, 0.0, 6.3, 1.5}, {0.01, 1.0, 3.2, std::nullopt}};
  std::stringstream ps;
  write_perimeter_csv(ps, rows);
  const auto pr = read_perimeter_csv(ps);
  REQUIRE(pr.size() == 2);
  CHECK(pr[0].pc == 1.5);
  CHECK_FALSE(pr[1].pc);
  CHECK(pr[1].perimeter == 3.2);
}

TEST_CASE("vtk header") {
  auto g = build_cartesian(5, 6, 1.0, 1.0);
  ScalarField phi(g.dims, 1.0);
  std::stringstream ss;
  write_vtk(ss, g, phi, &phi);
  const auto s = ss.str();
  CHECK(s.find("DIMENSIONS 5 6 1") != std::string::npos);
  CHECK(s.find("POINTS 30 double") != std::string::npos);
  CHECK(s.find("SCALARS error double 1") != std::string::npos);
}
