#include "fsex/basis.hpp"

#include <cmath>
#include <numbers>

namespace fsex {

BasisSet::BasisSet(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw ConfigError("basis dimensions must be positive");
  }
}

std::pair<int, int> BasisSet::frequency(int k) const {
  return {k / height_, k % height_};
}

int BasisSet::index_of(int k1, int k2) const { return k1 * height_ + k2; }

int BasisSet::conjugate_index(int k) const {
  const auto [k1, k2] = frequency(k);
  return index_of((width_ - k1) % width_, (height_ - k2) % height_);
}

bool BasisSet::is_self_conjugate(int k) const {
  return conjugate_index(k) == k;
}

std::complex<double> unit_phase(long long q, long long period) {
  // q -> period - q mirrors to the conjugate; evaluating only the lower
  // half makes that symmetry exact in floating point.
  if (2 * q > period) {
    return std::conj(unit_phase(period - q, period));
  }
  if (q == 0) return {1.0, 0.0};
  if (4 * q == period) return {0.0, 1.0};
  if (2 * q == period) return {-1.0, 0.0};
  const double angle =
      2.0 * std::numbers::pi * (static_cast<double>(q) / period);
  return {std::cos(angle), std::sin(angle)};
}

std::complex<double> BasisSet::value(int k, int m, int n) const {
  const auto [k1, k2] = frequency(k);
  const long long qm = (static_cast<long long>(k1) * m) % width_;
  const long long qn = (static_cast<long long>(k2) * n) % height_;
  return unit_phase(qm, width_) * unit_phase(qn, height_);
}

ComplexGrid BasisSet::evaluate(int k) const {
  const auto [k1, k2] = frequency(k);
  std::vector<std::complex<double>> row(width_), col(height_);
  for (int m = 0; m < width_; ++m) {
    row[m] = unit_phase((static_cast<long long>(k1) * m) % width_, width_);
  }
  for (int n = 0; n < height_; ++n) {
    col[n] = unit_phase((static_cast<long long>(k2) * n) % height_, height_);
  }
  ComplexGrid grid(width_, height_);
  for (int m = 0; m < width_; ++m) {
    for (int n = 0; n < height_; ++n) {
      grid(m, n) = row[m] * col[n];
    }
  }
  return grid;
}

std::complex<double> weighted_inner_product(const ComplexGrid& x,
                                            const ComplexGrid& y,
                                            const SampleGrid& w) {
  if (x.width() != y.width() || x.height() != y.height() ||
      x.width() != w.width() || x.height() != w.height()) {
    throw DimensionMismatchError("inner product operands differ in dims");
  }
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x.at_index(i) * std::conj(y.at_index(i)) * w.at_index(i);
  }
  return acc;
}

double weighted_basis_norm(const BasisSet& basis, int k, const SampleGrid& w) {
  if (basis.width() != w.width() || basis.height() != w.height()) {
    throw DimensionMismatchError("basis and weighting dims differ");
  }
  const ComplexGrid phi = basis.evaluate(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    acc += w.at_index(i) * std::norm(phi.at_index(i));
  }
  if (!(acc > 0.0)) {
    throw NoSupportError("weighting sums to zero over the basis support");
  }
  return acc;
}

}  // namespace fsex
