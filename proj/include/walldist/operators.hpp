#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "walldist/field.hpp"

namespace walldist {

/// Spatial discretization of the advective and auxiliary derivatives.
///   UW  first-order upwind with front-direction selection
///   E2  explicit 2nd-order central      E4  explicit 4th-order central
///   C4  compact 4th-order (Pade)        C6  compact 6th-order (Pade)
enum class Scheme { UW, E2, E4, C4, C6 };

Scheme parse_scheme(std::string_view name);
const char* to_string(Scheme s) noexcept;

/// Nominal interior order of accuracy (UW reports 1).
int scheme_order(Scheme s) noexcept;

/// Central scheme used for metrics and auxiliary (Laplacian) derivatives:
/// UW falls back to E2, every other scheme maps onto itself.
Scheme central_scheme_for(Scheme s) noexcept;

/// Minimum number of nodes a line needs for `s` (stencil + closures).
int min_line_length(Scheme s) noexcept;

// ---------------------------------------------------------------------------
// Tridiagonal systems

/// Solves lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i] by forward
/// elimination and back substitution. lower[0] and upper[n-1] are ignored.
/// Throws ErrorKind::ZeroPivot if a pivot vanishes.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// LU factors of a fixed tridiagonal matrix, reused across many right-hand
/// sides (every grid line of a compact derivative or filter sweep).
class TridiagonalFactor {
 public:
  TridiagonalFactor() = default;
  TridiagonalFactor(std::span<const double> lower, std::span<const double> diag,
                    std::span<const double> upper);

  std::size_t size() const noexcept { return inv_pivot_.size(); }

  /// In-place solve on a strided vector.
  void solve(double* x, std::size_t stride = 1) const noexcept;

  /// In-place solve of `batch` interleaved systems: entry p of system q sits
  /// at x[p * batch + q]. The inner loop over q is contiguous.
  void solve_batch(double* x, std::size_t batch) const noexcept;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_mod_;
  std::vector<double> inv_pivot_;
};

// ---------------------------------------------------------------------------
// Line kernels (unit computational spacing)

/// First derivative of one grid line with a central scheme, including the
/// boundary closures. Throws ErrorKind::LineTooShort.
std::vector<double> central_derivative(std::span<const double> line, Scheme s);

/// Pairing of the front selectors with the one-sided differences.
///   AsWritten     n_{i-1} F + n_{i+1} B
///   Conventional  n_{i-1} B + n_{i+1} F (difference taken towards the front)
enum class FrontPairing { AsWritten, Conventional };

FrontPairing parse_front_pairing(std::string_view name);
const char* to_string(FrontPairing p) noexcept;

/// Front-direction derivative with the selectors
///   n_{i-1} = 0.25 (1 + SIGN(1, F+B)) (1 + SIGN(1, B))
///   n_{i+1} = 0.25 (1 - SIGN(1, F+B)) (1 - SIGN(1, F))
/// where B, F are the backward/forward differences and SIGN(1, 0) = +1.
/// End points use the only one-sided difference available.
std::vector<double> upwind_front_derivative(std::span<const double> line,
                                            FrontPairing pairing = FrontPairing::AsWritten);

/// 0.5 (U + |U|) B + 0.5 (U - |U|) F, i.e. the upwinded product U * dphi.
std::vector<double> upwind_flux(std::span<const double> u_hat, std::span<const double> phi);

/// Centred [1, -4, 6, -4, 1] stencil; the two end nodes on each side copy the
/// nearest interior value.
std::vector<double> fourth_derivative(std::span<const double> line);

// ---------------------------------------------------------------------------
// Field-level sweeps along computational direction `dir` (0 = xi, 1 = eta,
// 2 = zeta). For a 2-D field, dir 2 yields zeros.

/// UW selects the front derivative with `pairing`.
void derivative(const ScalarField& f, int dir, Scheme s, ScalarField& out,
                FrontPairing pairing = FrontPairing::AsWritten);
void front_derivative(const ScalarField& f, int dir, ScalarField& out,
                      FrontPairing pairing = FrontPairing::AsWritten);
void upwind_flux(const ScalarField& u_hat, const ScalarField& phi, int dir, ScalarField& out);
void fourth_derivative(const ScalarField& f, int dir, ScalarField& out);

// ---------------------------------------------------------------------------
// Implicit Pade filter

struct FilterConfig {
  double alpha_f = 0.49;
  /// Half-width N of the interior stencil; the interior order is 2N.
  int order_n = 5;

  /// 0.40 <= alpha_f <= 0.5 and 1 <= order_n <= 5. alpha_f = 0.5 is the
  /// degenerate identity filter.
  void validate() const;
};

/// Coefficients a_0..a_N of the centred filter of order 2N (unused entries 0).
std::array<double, 6> filter_coefficients(int order_n, double alpha_f);

/// Filters one line; the two end nodes are left untouched and the order drops
/// towards the ends (2nd order next to each end).
std::vector<double> filter_line(std::span<const double> line, const FilterConfig& cfg);

/// Filters every line along `dir`. Nodes flagged in `frozen` (may be empty)
/// keep their values and split a line into independently filtered segments.
void apply_filter(ScalarField& f, int dir, const FilterConfig& cfg,
                  std::span<const std::uint8_t> frozen = {});

}  // namespace walldist
