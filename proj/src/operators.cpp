#include "walldist/operators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

namespace walldist {

namespace {

// Flat-index view of the lines along one direction: node p of line (o, q)
// lives at (o * n + p) * inner + q.
struct Layout {
  std::size_t outer;
  std::size_t n;
  std::size_t inner;
};

Layout layout_for(const Dims& d, int dir) {
  const auto ni = static_cast<std::size_t>(d.ni);
  const auto nj = static_cast<std::size_t>(d.nj);
  const auto nk = static_cast<std::size_t>(d.nk);
  if (dir == 0) return {nj * nk, ni, 1};
  if (dir == 1) return {nk, nj, ni};
  return {1, nk, ni * nj};
}

void require_length(std::size_t n, Scheme s) {
  if (n < static_cast<std::size_t>(min_line_length(s))) {
    throw Error(ErrorKind::LineTooShort, std::string("line of ") + std::to_string(n) +
                                             " nodes is too short for scheme " + to_string(s));
  }
}

// Explicit stencil row: out[p] = sum_k w[k] * f[p + first + k].
struct Row {
  int first = 0;
  int count = 0;
  double w[6] = {};
};

Row make_row(int first, std::initializer_list<double> w, double scale = 1.0) {
  Row r;
  r.first = first;
  for (double v : w) r.w[r.count++] = v * scale;
  return r;
}

// Mirror of a left-boundary row for the right boundary (first derivative is
// odd under reflection, hence the sign flip).
Row mirror(const Row& r) {
  Row m;
  m.count = r.count;
  m.first = -(r.first + r.count - 1);
  for (int k = 0; k < r.count; ++k) m.w[k] = -r.w[r.count - 1 - k];
  return m;
}

// Right-hand side rows and (for compact schemes) the left-hand side of a
// central first-derivative operator on a line of n nodes.
struct CentralOperator {
  Scheme scheme;
  std::size_t n;
  std::vector<Row> left;   // rows 0..left.size()-1
  std::vector<Row> right;  // rows n-1, n-2, ...
  Row interior;
  bool compact = false;
  TridiagonalFactor lhs;

  CentralOperator(Scheme s, std::size_t len) : scheme(s), n(len) {
    require_length(n, s);
    switch (s) {
      case Scheme::UW:
      case Scheme::E2:
        interior = make_row(-1, {-0.5, 0.0, 0.5});
        left = {make_row(0, {-3.0, 4.0, -1.0}, 0.5)};
        break;
      case Scheme::E4:
        interior = make_row(-2, {1.0, -8.0, 0.0, 8.0, -1.0}, 1.0 / 12.0);
        left = {make_row(0, {-11.0, 18.0, -9.0, 2.0}, 1.0 / 6.0),
                make_row(-1, {-2.0, -3.0, 6.0, -1.0}, 1.0 / 6.0)};
        break;
      case Scheme::C4:
        compact = true;
        interior = make_row(-1, {-0.75, 0.0, 0.75});
        left = {make_row(0, {-5.0, 4.0, 1.0}, 0.5)};
        break;
      case Scheme::C6:
        compact = true;
        interior = make_row(-2, {-1.0 / 36.0, -7.0 / 9.0, 0.0, 7.0 / 9.0, 1.0 / 36.0});
        left = {make_row(0, {-5.0, 4.0, 1.0}, 0.5), make_row(-1, {-0.75, 0.0, 0.75})};
        break;
    }
    for (const auto& r : left) right.push_back(mirror(r));

    if (compact) {
      const double a_in = s == Scheme::C4 ? 0.25 : 1.0 / 3.0;
      std::vector<double> lo(n, a_in), di(n, 1.0), up(n, a_in);
      // closure rows: f'_0 + 3 f'_1 = ...
      lo[0] = 0.0;
      up[0] = 2.0;
      lo[n - 1] = 2.0;
      up[n - 1] = 0.0;
      if (s == Scheme::C6) {
        lo[1] = up[1] = 0.25;
        lo[n - 2] = up[n - 2] = 0.25;
      }
      lhs = TridiagonalFactor(lo, di, up);
    }
  }

  // Writes the explicit right-hand side for every line of the layout.
  void rhs(const double* f, double* out, const Layout& L) const {
    const std::size_t s = L.inner;
    const std::size_t nb = left.size();
    for (std::size_t o = 0; o < L.outer; ++o) {
      const std::size_t base = o * L.n * s;
      auto edge = [&](std::size_t p, const Row& r) {
        for (std::size_t q = 0; q < s; ++q) {
          const std::size_t m = base + p * s + q;
          double acc = 0.0;
          for (int k = 0; k < r.count; ++k) {
            acc += r.w[k] * f[m + static_cast<std::ptrdiff_t>(r.first + k) * static_cast<std::ptrdiff_t>(s)];
          }
          out[m] = acc;
        }
      };
      for (std::size_t b = 0; b < nb; ++b) {
        edge(b, left[b]);
        edge(L.n - 1 - b, right[b]);
      }
      const std::size_t m0 = base + nb * s;
      const std::size_t m1 = base + (L.n - nb) * s;
      const auto ss = static_cast<std::ptrdiff_t>(s);
      if (interior.count == 3) {
        const double w = interior.w[2];
        for (std::size_t m = m0; m < m1; ++m) out[m] = w * (f[m + s] - f[m - s]);
      } else {
        const double w1 = interior.w[3];
        const double w2 = interior.w[4];
        for (std::size_t m = m0; m < m1; ++m) {
          out[m] = w1 * (f[m + s] - f[m - s]) + w2 * (f[m + 2 * ss] - f[m - 2 * ss]);
        }
      }
    }
  }

  void apply(const double* f, double* out, const Layout& L) const {
    rhs(f, out, L);
    if (!compact) return;
    for (std::size_t o = 0; o < L.outer; ++o) {
      double* base = out + o * L.n * L.inner;
      if (L.inner == 1) {
        lhs.solve(base, 1);
      } else {
        lhs.solve_batch(base, L.inner);
      }
    }
  }
};

void zero_if_flat(const ScalarField& f, int dir, ScalarField& out) {
  if (out.dims() != f.dims()) out = ScalarField(f.dims());
  if (f.dims().count(dir) == 1) out.fill(0.0);
}

}  // namespace

// ---------------------------------------------------------------------------

Scheme parse_scheme(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (s == "UW") return Scheme::UW;
  if (s == "E2") return Scheme::E2;
  if (s == "E4") return Scheme::E4;
  if (s == "C4") return Scheme::C4;
  if (s == "C6") return Scheme::C6;
  throw Error(ErrorKind::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

const char* to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::UW: return "UW";
    case Scheme::E2: return "E2";
    case Scheme::E4: return "E4";
    case Scheme::C4: return "C4";
    case Scheme::C6: return "C6";
  }
  return "?";
}

int scheme_order(Scheme s) noexcept {
  switch (s) {
    case Scheme::UW: return 1;
    case Scheme::E2: return 2;
    case Scheme::E4:
    case Scheme::C4: return 4;
    case Scheme::C6: return 6;
  }
  return 0;
}

FrontPairing parse_front_pairing(std::string_view name) {
  if (name == "as_written") return FrontPairing::AsWritten;
  if (name == "conventional") return FrontPairing::Conventional;
  throw Error(ErrorKind::InvalidArgument, "unknown front pairing '" + std::string(name) + "'");
}

const char* to_string(FrontPairing p) noexcept {
  return p == FrontPairing::AsWritten ? "as_written" : "conventional";
}

Scheme central_scheme_for(Scheme s) noexcept { return s == Scheme::UW ? Scheme::E2 : s; }

int min_line_length(Scheme s) noexcept {
  switch (s) {
    case Scheme::UW:
    case Scheme::E2: return 3;
    case Scheme::E4: return 5;
    case Scheme::C4:
    case Scheme::C6: return 7;
  }
  return 7;
}

// ---------------------------------------------------------------------------

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "tridiagonal bands and rhs differ in length");
  }
  std::vector<double> c(n), x(n);
  if (n == 0) return x;
  double piv = diag[0];
  if (piv == 0.0) throw Error(ErrorKind::ZeroPivot, "zero pivot in row 0");
  c[0] = upper[0] / piv;
  x[0] = rhs[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - lower[i] * c[i - 1];
    if (piv == 0.0) throw Error(ErrorKind::ZeroPivot, "zero pivot in row " + std::to_string(i));
    c[i] = upper[i] / piv;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

TridiagonalFactor::TridiagonalFactor(std::span<const double> lower, std::span<const double> diag,
                                     std::span<const double> upper) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "tridiagonal bands differ in length");
  }
  lower_.assign(lower.begin(), lower.end());
  upper_mod_.resize(n);
  inv_pivot_.resize(n);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double piv = diag[i] - (i > 0 ? lower[i] * prev : 0.0);
    if (piv == 0.0) throw Error(ErrorKind::ZeroPivot, "zero pivot in row " + std::to_string(i));
    inv_pivot_[i] = 1.0 / piv;
    upper_mod_[i] = upper[i] / piv;
    prev = upper_mod_[i];
  }
}

void TridiagonalFactor::solve(double* x, std::size_t stride) const noexcept {
  const std::size_t n = inv_pivot_.size();
  if (n == 0) return;
  x[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) {
    x[i * stride] = (x[i * stride] - lower_[i] * x[(i - 1) * stride]) * inv_pivot_[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i * stride] -= upper_mod_[i] * x[(i + 1) * stride];
}

void TridiagonalFactor::solve_batch(double* x, std::size_t batch) const noexcept {
  const std::size_t n = inv_pivot_.size();
  if (n == 0) return;
  for (std::size_t q = 0; q < batch; ++q) x[q] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double a = lower_[i];
    const double ip = inv_pivot_[i];
    double* xi = x + i * batch;
    const double* xm = xi - batch;
    for (std::size_t q = 0; q < batch; ++q) xi[q] = (xi[q] - a * xm[q]) * ip;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    const double c = upper_mod_[i];
    double* xi = x + i * batch;
    const double* xp = xi + batch;
    for (std::size_t q = 0; q < batch; ++q) xi[q] -= c * xp[q];
  }
}

// ---------------------------------------------------------------------------

std::vector<double> central_derivative(std::span<const double> line, Scheme s) {
  CentralOperator op(s, line.size());
  std::vector<double> out(line.size());
  op.apply(line.data(), out.data(), Layout{1, line.size(), 1});
  return out;
}

namespace {

template <FrontPairing P>
inline double front_select(double b, double f) noexcept {
  // SIGN(1, x) = +1 for x >= 0
  const bool sum_nonneg = (f + b) >= 0.0;
  const double n_prev = (sum_nonneg && b >= 0.0) ? 1.0 : 0.0;
  const double n_next = (!sum_nonneg && f < 0.0) ? 1.0 : 0.0;
  if constexpr (P == FrontPairing::AsWritten) return n_prev * f + n_next * b;
  return n_prev * b + n_next * f;
}

inline double flux_select(double u, double b, double f) noexcept {
  return 0.5 * (u + std::fabs(u)) * b + 0.5 * (u - std::fabs(u)) * f;
}

template <FrontPairing P>
void front_lines_t(const double* f, double* out, const Layout& L) {
  const std::size_t s = L.inner;
  for (std::size_t o = 0; o < L.outer; ++o) {
    const std::size_t base = o * L.n * s;
    for (std::size_t q = 0; q < s; ++q) {
      const std::size_t a = base + q;
      const std::size_t z = base + (L.n - 1) * s + q;
      out[a] = f[a + s] - f[a];
      out[z] = f[z] - f[z - s];
    }
    const std::size_t m1 = base + (L.n - 1) * s;
    for (std::size_t m = base + s; m < m1; ++m) {
      out[m] = front_select<P>(f[m] - f[m - s], f[m + s] - f[m]);
    }
  }
}

void front_lines(const double* f, double* out, const Layout& L, FrontPairing p) {
  if (p == FrontPairing::AsWritten) front_lines_t<FrontPairing::AsWritten>(f, out, L);
  else front_lines_t<FrontPairing::Conventional>(f, out, L);
}

void flux_lines(const double* u, const double* f, double* out, const Layout& L) {
  const std::size_t s = L.inner;
  for (std::size_t o = 0; o < L.outer; ++o) {
    const std::size_t base = o * L.n * s;
    for (std::size_t q = 0; q < s; ++q) {
      const std::size_t a = base + q;
      const std::size_t z = base + (L.n - 1) * s + q;
      out[a] = u[a] * (f[a + s] - f[a]);
      out[z] = u[z] * (f[z] - f[z - s]);
    }
    const std::size_t m1 = base + (L.n - 1) * s;
    for (std::size_t m = base + s; m < m1; ++m) {
      out[m] = flux_select(u[m], f[m] - f[m - s], f[m + s] - f[m]);
    }
  }
}

void fourth_lines(const double* f, double* out, const Layout& L) {
  const std::size_t s = L.inner;
  const auto ss = static_cast<std::ptrdiff_t>(s);
  for (std::size_t o = 0; o < L.outer; ++o) {
    const std::size_t base = o * L.n * s;
    const std::size_t m0 = base + 2 * s;
    const std::size_t m1 = base + (L.n - 2) * s;
    for (std::size_t m = m0; m < m1; ++m) {
      out[m] = f[m - 2 * ss] - 4.0 * f[m - s] + 6.0 * f[m] - 4.0 * f[m + s] + f[m + 2 * ss];
    }
    for (std::size_t q = 0; q < s; ++q) {
      const double lo = out[base + 2 * s + q];
      const double hi = out[base + (L.n - 3) * s + q];
      out[base + q] = out[base + s + q] = lo;
      out[base + (L.n - 1) * s + q] = out[base + (L.n - 2) * s + q] = hi;
    }
  }
}

}  // namespace

std::vector<double> upwind_front_derivative(std::span<const double> line, FrontPairing pairing) {
  if (line.size() < 3) throw Error(ErrorKind::LineTooShort, "upwind derivative needs 3 nodes");
  std::vector<double> out(line.size());
  front_lines(line.data(), out.data(), Layout{1, line.size(), 1}, pairing);
  return out;
}

std::vector<double> upwind_flux(std::span<const double> u_hat, std::span<const double> phi) {
  if (u_hat.size() != phi.size()) {
    throw Error(ErrorKind::DimensionMismatch, "upwind flux lines differ in length");
  }
  if (phi.size() < 3) throw Error(ErrorKind::LineTooShort, "upwind flux needs 3 nodes");
  std::vector<double> out(phi.size());
  flux_lines(u_hat.data(), phi.data(), out.data(), Layout{1, phi.size(), 1});
  return out;
}

std::vector<double> fourth_derivative(std::span<const double> line) {
  if (line.size() < 5) throw Error(ErrorKind::LineTooShort, "fourth derivative needs 5 nodes");
  std::vector<double> out(line.size());
  fourth_lines(line.data(), out.data(), Layout{1, line.size(), 1});
  return out;
}

// ---------------------------------------------------------------------------

void derivative(const ScalarField& f, int dir, Scheme s, ScalarField& out, FrontPairing pairing) {
  zero_if_flat(f, dir, out);
  const Dims& d = f.dims();
  if (d.count(dir) == 1) return;
  const Layout L = layout_for(d, dir);
  if (s == Scheme::UW) {
    front_lines(f.data(), out.data(), L, pairing);
    return;
  }
  CentralOperator op(s, L.n);
  op.apply(f.data(), out.data(), L);
}

void front_derivative(const ScalarField& f, int dir, ScalarField& out, FrontPairing pairing) {
  zero_if_flat(f, dir, out);
  const Dims& d = f.dims();
  if (d.count(dir) == 1) return;
  const Layout L = layout_for(d, dir);
  require_length(L.n, Scheme::UW);
  front_lines(f.data(), out.data(), L, pairing);
}

void upwind_flux(const ScalarField& u_hat, const ScalarField& phi, int dir, ScalarField& out) {
  if (u_hat.dims() != phi.dims()) {
    throw Error(ErrorKind::DimensionMismatch, "upwind flux fields differ in dims");
  }
  zero_if_flat(phi, dir, out);
  const Dims& d = phi.dims();
  if (d.count(dir) == 1) return;
  const Layout L = layout_for(d, dir);
  require_length(L.n, Scheme::UW);
  flux_lines(u_hat.data(), phi.data(), out.data(), L);
}

void fourth_derivative(const ScalarField& f, int dir, ScalarField& out) {
  zero_if_flat(f, dir, out);
  const Dims& d = f.dims();
  if (d.count(dir) == 1) return;
  const Layout L = layout_for(d, dir);
  if (L.n < 5) throw Error(ErrorKind::LineTooShort, "fourth derivative needs 5 nodes");
  fourth_lines(f.data(), out.data(), L);
}

// ---------------------------------------------------------------------------

void FilterConfig::validate() const {
  if (!(alpha_f >= 0.40 && alpha_f <= 0.5)) {
    throw Error(ErrorKind::InvalidArgument,
                "filter alpha_f must lie in [0.40, 0.5], got " + std::to_string(alpha_f));
  }
  if (order_n < 1 || order_n > 5) {
    throw Error(ErrorKind::InvalidArgument, "filter order_n must lie in [1, 5]");
  }
}

std::array<double, 6> filter_coefficients(int order_n, double a) {
  std::array<double, 6> c{};
  switch (order_n) {
    case 1:
      c = {0.5 + a, 0.5 + a};
      break;
    case 2:
      c = {5.0 / 8.0 + 3.0 * a / 4.0, 0.5 + a, -1.0 / 8.0 + a / 4.0};
      break;
    case 3:
      c = {11.0 / 16.0 + 5.0 * a / 8.0, 15.0 / 32.0 + 17.0 * a / 16.0, -3.0 / 16.0 + 3.0 * a / 8.0,
           1.0 / 32.0 - a / 16.0};
      break;
    case 4:
      c = {93.0 / 128.0 + 70.0 * a / 128.0, 7.0 / 16.0 + 18.0 * a / 16.0,
           -7.0 / 32.0 + 14.0 * a / 32.0, 1.0 / 16.0 - a / 8.0, -1.0 / 128.0 + a / 64.0};
      break;
    case 5:
      c = {(193.0 + 126.0 * a) / 256.0, (105.0 + 302.0 * a) / 256.0, 15.0 * (-1.0 + 2.0 * a) / 64.0,
           45.0 * (1.0 - 2.0 * a) / 512.0, 5.0 * (-1.0 + 2.0 * a) / 256.0, (1.0 - 2.0 * a) / 512.0};
      break;
    default:
      throw Error(ErrorKind::InvalidArgument, "filter order_n must lie in [1, 5]");
  }
  return c;
}

namespace {

// Filter operator for a segment of n nodes whose end nodes stay fixed.
class SegmentFilter {
 public:
  SegmentFilter(std::size_t n, const FilterConfig& cfg) : n_(n), full_(cfg.order_n) {
    for (int N = 1; N <= cfg.order_n; ++N) coeff_[N] = filter_coefficients(N, cfg.alpha_f);
    for (int k = 0; k <= full_; ++k) half_[k] = (k == 0 ? 1.0 : 0.5) * coeff_[full_][k];
    std::vector<double> lo(n, cfg.alpha_f), di(n, 1.0), up(n, cfg.alpha_f);
    lo[0] = up[0] = 0.0;
    lo[n - 1] = up[n - 1] = 0.0;
    lhs_ = TridiagonalFactor(lo, di, up);
  }

  std::size_t size() const noexcept { return n_; }
  const TridiagonalFactor& lhs() const noexcept { return lhs_; }

  int order_at(std::size_t i) const noexcept {
    return static_cast<int>(std::min<std::size_t>({i, n_ - 1 - i, static_cast<std::size_t>(full_)}));
  }

  // Right-hand side for `batch` interleaved lines: node i of line q at
  // in[i * batch + q].
  void rhs(const double* in, double* out, std::size_t batch) const noexcept {
    const std::size_t B = batch;
    for (std::size_t q = 0; q < B; ++q) {
      out[q] = in[q];
      out[(n_ - 1) * B + q] = in[(n_ - 1) * B + q];
    }
    auto edge = [&](std::size_t i) {
      const int N = order_at(i);
      const auto& a = coeff_[N];
      for (std::size_t q = 0; q < B; ++q) {
        const std::size_t m = i * B + q;
        double acc = a[0] * in[m];
        for (int k = 1; k <= N; ++k) acc += 0.5 * a[k] * (in[m + k * B] + in[m - k * B]);
        out[m] = acc;
      }
    };
    const std::size_t w = static_cast<std::size_t>(full_);
    const std::size_t lo = std::min(w, n_ - 1), hi = n_ - 1 > w ? n_ - 1 - w : 0;
    for (std::size_t i = 1; i < std::min(lo, n_ - 1); ++i) edge(i);
    if (full_ == 5 && lo < hi) {
      const double c0 = half_[0], c1 = half_[1], c2 = half_[2], c3 = half_[3], c4 = half_[4], c5 = half_[5];
      for (std::size_t m = lo * B; m < hi * B; ++m) {
        out[m] = c0 * in[m] + c1 * (in[m + B] + in[m - B]) + c2 * (in[m + 2 * B] + in[m - 2 * B]) +
                 c3 * (in[m + 3 * B] + in[m - 3 * B]) + c4 * (in[m + 4 * B] + in[m - 4 * B]) +
                 c5 * (in[m + 5 * B] + in[m - 5 * B]);
      }
    } else {
      for (std::size_t i = lo; i < hi; ++i) edge(i);
    }
    for (std::size_t i = std::max(hi, std::max<std::size_t>(lo, 1)); i + 1 < n_; ++i) edge(i);
  }

  void apply(const double* in, double* out) const {
    rhs(in, out, 1);
    lhs_.solve(out, 1);
  }

 private:
  std::size_t n_;
  int full_;
  std::array<std::array<double, 6>, 6> coeff_{};
  std::array<double, 6> half_{};
  TridiagonalFactor lhs_;
};

const SegmentFilter& cached_filter(std::size_t n, const FilterConfig& cfg) {
  thread_local std::map<std::tuple<std::size_t, double, int>, SegmentFilter> cache;
  const auto key = std::make_tuple(n, cfg.alpha_f, cfg.order_n);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, SegmentFilter(n, cfg)).first;
  return it->second;
}

}  // namespace

std::vector<double> filter_line(std::span<const double> line, const FilterConfig& cfg) {
  cfg.validate();
  std::vector<double> out(line.begin(), line.end());
  if (line.size() < 3) return out;
  SegmentFilter(line.size(), cfg).apply(line.data(), out.data());
  return out;
}

void apply_filter(ScalarField& f, int dir, const FilterConfig& cfg,
                  std::span<const std::uint8_t> frozen) {
  cfg.validate();
  const Dims& d = f.dims();
  if (d.count(dir) < 3) return;
  if (!frozen.empty() && frozen.size() != f.size()) {
    throw Error(ErrorKind::DimensionMismatch, "frozen mask does not match field");
  }
  double* v = f.data();
  const Layout L = layout_for(d, dir);

  // Strided directions: a block of `inner` lines without interior frozen
  // nodes is filtered in one interleaved pass.
  std::vector<std::uint8_t> done(L.outer, 0);
  if (L.inner > 1) {
    const SegmentFilter& sf = cached_filter(L.n, cfg);
    std::vector<double> buf(L.n * L.inner);
    for (std::size_t o = 0; o < L.outer; ++o) {
      double* blk = v + o * L.n * L.inner;
      bool clean = true;
      if (!frozen.empty()) {
        const std::uint8_t* fz = frozen.data() + o * L.n * L.inner;
        for (std::size_t m = L.inner; m < (L.n - 1) * L.inner && clean; ++m) clean = !fz[m];
      }
      if (!clean) continue;
      sf.rhs(blk, buf.data(), L.inner);
      sf.lhs().solve_batch(buf.data(), L.inner);
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(L.inner),
                buf.end() - static_cast<std::ptrdiff_t>(L.inner), blk + L.inner);
      done[o] = 1;
    }
  }

  // Contiguous lines: clean ones are transposed in groups and filtered the
  // same way.
  if (L.inner == 1) {
    constexpr std::size_t G = 16;
    const SegmentFilter& sf = cached_filter(L.n, cfg);
    std::vector<double> tin(L.n * G), tout(L.n * G);
    std::size_t lines[G];
    std::size_t o = 0;
    while (o < L.outer) {
      std::size_t g = 0;
      for (; o < L.outer && g < G; ++o) {
        bool clean = true;
        if (!frozen.empty()) {
          const std::uint8_t* fz = frozen.data() + o * L.n;
          for (std::size_t i = 1; i + 1 < L.n && clean; ++i) clean = !fz[i];
        }
        if (clean) lines[g++] = o;
      }
      if (g == 0) break;
      for (std::size_t q = 0; q < g; ++q) {
        const double* src = v + lines[q] * L.n;
        for (std::size_t i = 0; i < L.n; ++i) tin[i * g + q] = src[i];
      }
      sf.rhs(tin.data(), tout.data(), g);
      sf.lhs().solve_batch(tout.data(), g);
      for (std::size_t q = 0; q < g; ++q) {
        double* dst = v + lines[q] * L.n;
        for (std::size_t i = 1; i + 1 < L.n; ++i) dst[i] = tout[i * g + q];
        done[lines[q]] = 1;
      }
    }
  }

  const std::size_t n_max = L.n;
  std::vector<double> in(n_max), out(n_max);
  std::vector<std::uint8_t> fz(n_max, 0);
  for (std::size_t o = 0; o < L.outer; ++o) {
    if (done[o]) continue;
    for (std::size_t q = 0; q < L.inner; ++q) {
      const std::size_t first = o * L.n * L.inner + q;
      const std::size_t stride = L.inner;
      const int n = static_cast<int>(L.n);
      for (int p = 0; p < n; ++p) {
        const std::size_t m = first + p * stride;
        in[p] = v[m];
        fz[p] = frozen.empty() ? 0 : frozen[m];
      }
      // Segments run between frozen nodes (inclusive) or the line ends.
      int a = 0;
      while (a < n - 1) {
        int b = a + 1;
        while (b < n - 1 && !fz[b]) ++b;
        const int len = b - a + 1;
        if (len >= 3) {
          cached_filter(static_cast<std::size_t>(len), cfg).apply(in.data() + a, out.data() + a);
          for (int p = a + 1; p < b; ++p) v[first + p * stride] = out[p];
        }
        a = b;
      }
    }
  }
}

}  // namespace walldist
