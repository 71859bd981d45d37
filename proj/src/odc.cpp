#include "fsex/odc.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "fft.hpp"
#include "fsex/errors.hpp"

namespace fsex {

ComplexMatrix build_k_matrix_dense(const SampleGrid& w, const BasisSet& basis,
                                   int dense_limit) {
  if (w.width() != basis.width() || w.height() != basis.height()) {
    throw DimensionMismatchError(
        "weighting grid dimensions do not match the basis area");
  }
  const int size = basis.size();
  if (size > dense_limit) {
    throw DenseLimitError("area of " + std::to_string(size) +
                          " exceeds the dense matrix limit of " +
                          std::to_string(dense_limit));
  }
  ComplexMatrix k_matrix(size, size);
  for (int k = 0; k < size; ++k) {
    const ComplexGrid phi_k = basis.evaluate(k);
    for (int l = 0; l < size; ++l) {
      const ComplexGrid phi_l = basis.evaluate(l);
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t x = 0; x < w.size(); ++x) {
        acc += w.at_index(x) * phi_l.at_index(x) * std::conj(phi_k.at_index(x));
      }
      k_matrix(k, l) = acc;
    }
  }
  return k_matrix;
}

OdcOperator::OdcOperator(int width, int height,
                         std::vector<std::complex<double>> spectrum,
                         double weight_sum)
    : width_(width),
      height_(height),
      spectrum_(std::move(spectrum)),
      weight_sum_(weight_sum) {
  if (width_ < 1 || height_ < 1) {
    throw ConfigError("operator dimensions must be positive");
  }
  if (spectrum_.size() != static_cast<std::size_t>(width_) * height_) {
    throw DimensionMismatchError("spectrum length does not match the area");
  }
  if (!(weight_sum_ > 0.0)) {
    throw NoSupportError("weighting sums to zero");
  }
  const double snap =
      64.0 * std::numeric_limits<double>::epsilon() * weight_sum_;
  for (auto& v : spectrum_) {
    if (std::abs(v) <= snap) v = {0.0, 0.0};
  }
}

std::complex<double> OdcOperator::entry(int k, int l) const {
  if (k == l) return {1.0, 0.0};
  const int k1 = k / height_;
  const int k2 = k % height_;
  const int l1 = l / height_;
  const int l2 = l % height_;
  int d1 = k1 - l1;
  if (d1 < 0) d1 += width_;
  int d2 = k2 - l2;
  if (d2 < 0) d2 += height_;
  return spectrum_[static_cast<std::size_t>(d1) * height_ + d2] / weight_sum_;
}

OdcOperator build_khat_spectral(const SampleGrid& w) {
  double sum = 0.0;
  for (double v : w.values()) sum += v;
  if (!(sum > 0.0)) {
    throw NoSupportError("weighting sums to zero");
  }
  ComplexGrid wc(w.width(), w.height());
  for (std::size_t x = 0; x < w.size(); ++x) {
    wc.at_index(x) = {w.at_index(x), 0.0};
  }
  ComplexGrid spectrum = fft::forward(wc);
  return OdcOperator(w.width(), w.height(), std::move(spectrum.values()), sum);
}

Compensation compensate(std::span<const std::complex<double>> p, int k,
                        const OdcOperator& op, double floor) {
  if (p.size() != static_cast<std::size_t>(op.size())) {
    throw DimensionMismatchError("projection vector length does not match "
                                 "the operator area");
  }
  if (k < 0 || k >= op.size()) {
    throw ConfigError("selected index out of range");
  }
  const std::complex<double> pk = p[k];
  const double pk_mag = std::abs(pk);
  if (!(pk_mag > 0.0) || pk_mag < floor) {
    throw ConfigError("compensation requires an eligible pivot coefficient");
  }
  // The l = k term contributes exactly 1; the cross terms are summed
  // unnormalized and divided by p_k once.
  std::complex<double> cross{0.0, 0.0};
  const int size = op.size();
  for (int l = 0; l < size; ++l) {
    if (l == k) continue;
    const std::complex<double> pl = p[l];
    const double mag = std::abs(pl);
    if (!(mag > 0.0) || mag < floor) continue;
    cross += pl * op.entry(k, l);
  }
  const std::complex<double> denominator = 1.0 + cross / pk;
  if (std::abs(denominator) < 1e-12) {
    return {pk, true};
  }
  return {pk / denominator, false};
}

}  // namespace fsex
