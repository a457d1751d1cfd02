#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "walldist/error.hpp"

namespace walldist {

/// Node counts of a structured (i, j, k) block. A 2-D block has nk == 1.
struct Dims {
  int ni = 1;
  int nj = 1;
  int nk = 1;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(ni) * nj * nk;
  }
  std::size_t index(int i, int j, int k = 0) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(ni) * (static_cast<std::size_t>(j) +
                                           static_cast<std::size_t>(nj) * k);
  }
  bool is3d() const noexcept { return nk > 1; }
  int count(int dir) const noexcept { return dir == 0 ? ni : dir == 1 ? nj : nk; }
  std::size_t stride(int dir) const noexcept {
    return dir == 0 ? 1
           : dir == 1 ? static_cast<std::size_t>(ni)
                      : static_cast<std::size_t>(ni) * nj;
  }
  /// Number of computational directions that carry more than one node.
  int active_dirs() const noexcept { return is3d() ? 3 : 2; }

  friend bool operator==(const Dims&, const Dims&) = default;
};

/// One value per grid node, i-fastest ordering.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Dims dims, double fill = 0.0)
      : dims_(dims), values_(dims.size(), fill) {}
  ScalarField(Dims dims, std::vector<double> values) : dims_(dims), values_(std::move(values)) {
    if (values_.size() != dims_.size()) {
      throw Error(ErrorKind::DimensionMismatch, "field value count does not match dims");
    }
  }

  const Dims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator[](std::size_t n) noexcept { return values_[n]; }
  double operator[](std::size_t n) const noexcept { return values_[n]; }
  double& at(int i, int j, int k = 0) noexcept { return values_[dims_.index(i, j, k)]; }
  double at(int i, int j, int k = 0) const noexcept { return values_[dims_.index(i, j, k)]; }

  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }
  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  void fill(double v) { std::fill(values_.begin(), values_.end(), v); }
  bool all_finite() const noexcept;

 private:
  Dims dims_{};
  std::vector<double> values_;
};

/// Iterates every grid line along `dir`, passing (first node index, stride,
/// node count).
template <class Fn>
void for_each_line(const Dims& d, int dir, Fn&& fn) {
  const int n = d.count(dir);
  const std::size_t s = d.stride(dir);
  if (dir == 0) {
    for (int k = 0; k < d.nk; ++k)
      for (int j = 0; j < d.nj; ++j) fn(d.index(0, j, k), s, n);
  } else if (dir == 1) {
    for (int k = 0; k < d.nk; ++k)
      for (int i = 0; i < d.ni; ++i) fn(d.index(i, 0, k), s, n);
  } else {
    for (int j = 0; j < d.nj; ++j)
      for (int i = 0; i < d.ni; ++i) fn(d.index(i, j, 0), s, n);
  }
}

}  // namespace walldist
