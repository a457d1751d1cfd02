#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "walldist/operators.hpp"

using namespace walldist;

namespace {

std::vector<double> ramp(int n, double (*f)(double)) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = f(i);
  return v;
}

// Max error of the derivative of sin(6 pi x) on [0, 1], taken over the
// central half of the line so the closures' decaying footprint stays out.
double sine_error(Scheme s, int cells) {
  const double k = 6.0 * std::numbers::pi;
  const double h = 1.0 / cells;
  std::vector<double> f(cells + 1);
  for (int i = 0; i <= cells; ++i) f[i] = std::sin(k * i * h);
  const auto d = central_derivative(f, s);
  double err = 0.0;
  for (int i = cells / 4; i <= 3 * cells / 4; ++i) {
    err = std::max(err, std::fabs(d[i] / h - k * std::cos(k * i * h)));
  }
  return err;
}

}  // namespace

TEST_CASE("scheme names round-trip") {
  for (Scheme s : {Scheme::UW, Scheme::E2, Scheme::E4, Scheme::C4, Scheme::C6}) {
    CHECK(parse_scheme(to_string(s)) == s);
  }
  CHECK(parse_scheme("c6") == Scheme::C6);
  CHECK_THROWS_AS(parse_scheme("E8"), Error);
}

TEST_CASE("central derivatives annihilate constants and are exact on linears") {
  for (Scheme s : {Scheme::E2, Scheme::E4, Scheme::C4, Scheme::C6}) {
    CAPTURE(std::string(to_string(s)));
    const auto c = central_derivative(std::vector<double>(9, 3.5), s);
    for (double v : c) CHECK(std::fabs(v) < 1e-13);
    const auto d = central_derivative(ramp(9, [](double i) { return i; }), s);
    for (double v : d) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("central derivatives are exact on x = xi^2 for second-order and up") {
  for (Scheme s : {Scheme::E2, Scheme::E4, Scheme::C4, Scheme::C6}) {
    CAPTURE(std::string(to_string(s)));
    const auto d = central_derivative(ramp(12, [](double i) { return i * i; }), s);
    for (int i = 0; i < 12; ++i) CHECK(d[i] == doctest::Approx(2.0 * i).epsilon(1e-12));
  }
}

TEST_CASE("line length limits") {
  CHECK_THROWS_AS(central_derivative(std::vector<double>(6, 0.0), Scheme::C4), Error);
  CHECK_THROWS_AS(central_derivative(std::vector<double>(4, 0.0), Scheme::E4), Error);
  CHECK_THROWS_AS(fourth_derivative(std::vector<double>(4, 0.0)), Error);
  CHECK_NOTHROW(central_derivative(std::vector<double>(7, 0.0), Scheme::C6));
}

TEST_CASE("measured order of accuracy on a periodic sine") {
  for (Scheme s : {Scheme::E2, Scheme::E4, Scheme::C4, Scheme::C6}) {
    CAPTURE(std::string(to_string(s)));
    for (int c = 40; c < 640; c *= 2) {
      const double slope = std::log2(sine_error(s, c) / sine_error(s, 2 * c));
      CHECK(std::fabs(slope - scheme_order(s)) <= 0.3);
    }
  }
}

TEST_CASE("compact derivative satisfies its tridiagonal relation") {
  std::vector<double> f(25);
  for (int i = 0; i < 25; ++i) f[i] = std::exp(0.1 * i) * std::sin(0.4 * i);
  const auto d = central_derivative(f, Scheme::C6);
  for (int i = 2; i < 23; ++i) {
    const double lhs = d[i - 1] / 3.0 + d[i] + d[i + 1] / 3.0;
    const double rhs = 7.0 / 9.0 * (f[i + 1] - f[i - 1]) + (f[i + 2] - f[i - 2]) / 36.0;
    CHECK(std::fabs(lhs - rhs) < 1e-12);
  }
  CHECK(std::fabs(d[0] + 2.0 * d[1] - (-5.0 * f[0] + 4.0 * f[1] + f[2]) / 2.0) < 1e-12);
}

TEST_CASE("upwind front derivative selectors") {
  // B = F = 1
  CHECK(upwind_front_derivative(std::vector<double>{0, 1, 2})[1] == 1.0);
  // B = -1, F = 1: local minimum
  CHECK(upwind_front_derivative(std::vector<double>{1, 0, 1})[1] == 0.0);
  // B = 2, F = 0.5
  CHECK(upwind_front_derivative(std::vector<double>{0, 2, 2.5})[1] == 0.5);
  // F + B < 0 and F < 0 picks B
  CHECK(upwind_front_derivative(std::vector<double>{3, 2.5, 0.5})[1] == -0.5);
  // B = F = 0: SIGN(1, 0) = +1 keeps n_{i-1}
  CHECK(upwind_front_derivative(std::vector<double>{1, 1, 1})[1] == 0.0);
  const auto e = upwind_front_derivative(std::vector<double>{0, 1, 3});
  CHECK(e[0] == 1.0);
  CHECK(e[2] == 2.0);
}

TEST_CASE("upwind flux") {
  const std::vector<double> phi{0, 1, 2, 3};
  for (double v : upwind_flux(std::vector<double>(4, 1.0), phi)) CHECK(v == 1.0);
  // U = -1 picks the forward difference (1), so the product is -1
  for (double v : upwind_flux(std::vector<double>(4, -1.0), phi)) CHECK(v == -1.0);
  for (double v : upwind_flux(std::vector<double>(4, 0.0), phi)) CHECK(v == 0.0);
  const auto q = upwind_flux(std::vector<double>{2, 2, -3, 2}, std::vector<double>{0, 1, 5, 6});
  CHECK(q[1] == 2.0);
  CHECK(q[2] == -3.0);
}

TEST_CASE("fourth derivative stencil") {
  const auto c = fourth_derivative(ramp(9, [](double i) { return i * i * i; }));
  for (double v : c) CHECK(std::fabs(v) < 1e-9);
  const auto q = fourth_derivative(ramp(9, [](double i) { return i * i * i * i; }));
  for (double v : q) CHECK(v == doctest::Approx(24.0));
  const auto ny = fourth_derivative(ramp(9, [](double i) { return std::fmod(i, 2.0) == 0 ? 1.0 : -1.0; }));
  for (int i = 2; i < 7; ++i) CHECK(ny[i] == (i % 2 == 0 ? 16.0 : -16.0));
  CHECK(ny[0] == ny[2]);
  CHECK(ny[8] == ny[6]);
}

TEST_CASE("tridiagonal solves") {
  const std::vector<double> one(5, 1.0), zero(5, 0.0), rhs{1, 2, 3, 4, 5};
  CHECK(solve_tridiagonal(zero, one, zero, rhs) == rhs);
  CHECK(solve_tridiagonal(std::vector<double>{0}, std::vector<double>{4},
                          std::vector<double>{0}, std::vector<double>{2})[0] == 0.5);

  const int n = 40;
  std::vector<double> x(n), lo(n, 1.0), di(n, 4.0), up(n, 1.0), b(n);
  for (int i = 0; i < n; ++i) x[i] = std::cos(0.3 * i) + 0.01 * i;
  for (int i = 0; i < n; ++i) {
    b[i] = 4.0 * x[i] + (i > 0 ? x[i - 1] : 0.0) + (i + 1 < n ? x[i + 1] : 0.0);
  }
  const auto s = solve_tridiagonal(lo, di, up, b);
  for (int i = 0; i < n; ++i) CHECK(std::fabs(s[i] - x[i]) < 1e-12);

  TridiagonalFactor lu(lo, di, up);
  std::vector<double> batch(2 * n);
  for (int i = 0; i < n; ++i) batch[2 * i] = batch[2 * i + 1] = b[i];
  lu.solve_batch(batch.data(), 2);
  for (int i = 0; i < n; ++i) CHECK(std::fabs(batch[2 * i + 1] - x[i]) < 1e-12);

  CHECK_THROWS_AS(solve_tridiagonal(zero, zero, zero, rhs), Error);
}

TEST_CASE("filter coefficients") {
  for (int N = 1; N <= 5; ++N) {
    const auto a = filter_coefficients(N, 0.49);
    double dc = a[0], ny = a[0];
    for (int k = 1; k <= N; ++k) {
      dc += a[k];
      ny += a[k] * (k % 2 ? -1.0 : 1.0);
    }
    CHECK(dc == doctest::Approx(1.0 + 2 * 0.49));  // LHS sums to 1 + 2 alpha
    CHECK(std::fabs(ny) < 1e-14);                 // zero response at pi
  }
}

TEST_CASE("filter identities") {
  FilterConfig cfg;
  const auto c = filter_line(std::vector<double>(30, 2.25), cfg);
  for (double v : c) CHECK(std::fabs(v - 2.25) < 1e-12);

  const int n = 401;
  std::vector<double> nyq(n), smooth(n);
  for (int i = 0; i < n; ++i) {
    nyq[i] = i % 2 ? -1.0 : 1.0;
    smooth[i] = std::sin(0.05 * i) + 0.3 * std::cos(1.7 * i);
  }
  const auto out = filter_line(nyq, cfg);
  // end values leak in with ratio |r| ~ 0.817 per node at alpha 0.49
  const double alpha = cfg.alpha_f;
  const double r = std::fabs((-1.0 + std::sqrt(1.0 - 4.0 * alpha * alpha)) / (2.0 * alpha));
  const int band = static_cast<int>(std::ceil(std::log(1e-10) / std::log(r))) + 2;
  for (int i = band; i < n - band; ++i) CHECK(std::fabs(out[i]) < 1e-10);

  FilterConfig id{0.5, 5};
  const auto same = filter_line(smooth, id);
  for (int i = 1; i < n - 1; ++i) CHECK(std::fabs(same[i] - smooth[i]) < 1e-12);

  CHECK_THROWS_AS((FilterConfig{0.3, 5}.validate()), Error);
}

TEST_CASE("filter leaves frozen nodes alone") {
  ScalarField f(Dims{21, 9, 1});
  for (std::size_t m = 0; m < f.size(); ++m) f[m] = m % 2 ? -1.0 : 1.0;
  std::vector<std::uint8_t> frozen(f.size(), 0);
  frozen[f.dims().index(10, 4)] = 1;
  const double pinned = f.at(10, 4);
  const double end = f.at(0, 3);
  apply_filter(f, 0, FilterConfig{}, frozen);
  CHECK(f.at(10, 4) == pinned);
  CHECK(f.at(0, 3) == end);
  CHECK(std::fabs(f.at(5, 2)) < 0.5);
}

TEST_CASE("field sweeps match line kernels in every direction") {
  Dims d{9, 10, 11};
  ScalarField f(d), out;
  for (int k = 0; k < d.nk; ++k)
    for (int j = 0; j < d.nj; ++j)
      for (int i = 0; i < d.ni; ++i) f.at(i, j, k) = std::sin(0.3 * i + 0.7 * j * j - 0.2 * k * i);
  for (Scheme s : {Scheme::E2, Scheme::E4, Scheme::C4, Scheme::C6, Scheme::UW}) {
    for (int dir = 0; dir < 3; ++dir) {
      derivative(f, dir, s, out);
      for_each_line(d, dir, [&](std::size_t first, std::size_t stride, int n) {
        std::vector<double> line(n);
        for (int p = 0; p < n; ++p) line[p] = f[first + p * stride];
        const auto ref = s == Scheme::UW ? upwind_front_derivative(line) : central_derivative(line, s);
        for (int p = 0; p < n; ++p) CHECK(out[first + p * stride] == doctest::Approx(ref[p]).epsilon(1e-13));
      });
    }
  }
  ScalarField flat(Dims{9, 9, 1}, 1.0);
  derivative(flat, 2, Scheme::E4, out);
  for (double v : out.values()) CHECK(v == 0.0);
}
