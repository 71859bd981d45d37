#ifndef FSEX_ODC_HPP
#define FSEX_ODC_HPP

#include <complex>
#include <span>
#include <vector>

#include "fsex/basis.hpp"
#include "fsex/grid.hpp"

namespace fsex {

// Dense |L| x |L| complex matrix, row-major; entry (k, l) is row k, column l.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        values_(static_cast<std::size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::complex<double> operator()(int r, int c) const {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }
  std::complex<double>& operator()(int r, int c) {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::complex<double>> values_;
};

// Basis overlap matrix under the weighting w:
//   (K)_{k,l} = sum over L of w * phi_l * conj(phi_k).
// Literal summation; reference and oracle use only. Refuses |L| beyond
// dense_limit (the matrix is |L|^2 entries).
ComplexMatrix build_k_matrix_dense(const SampleGrid& w, const BasisSet& basis,
                                   int dense_limit = 4096);

// Row-normalized overlap operator K^ = diag(diag(K))^-1 * K, stored as the
// spectrum of w: because the basis functions are shift-orthogonal
// exponentials, (K)_{k,l} depends only on (k - l) and one FFT of w supplies
// every entry. Immutable after construction and shareable across concurrent
// engine runs on the same mask/weighting.
class OdcOperator {
 public:
  // Diagonal entries are 1 by construction. Entries whose magnitude is
  // within roundoff of zero (<= 64 * eps * sum|w|) are snapped to exact 0 so
  // the w == 1 identity limit holds exactly.
  OdcOperator(int width, int height, std::vector<std::complex<double>> spectrum,
              double weight_sum);

  int width() const { return width_; }
  int height() const { return height_; }
  int size() const { return width_ * height_; }
  double weight_sum() const { return weight_sum_; }

  std::complex<double> entry(int k, int l) const;

  // Spectrum value W[(k1-l1)%M*N + (k2-l2)%N] backing entry(k, l) * sum(w).
  std::complex<double> spectrum_at(int diff_index) const {
    return spectrum_[diff_index];
  }

 private:
  int width_;
  int height_;
  std::vector<std::complex<double>> spectrum_;  // forward DFT of w
  double weight_sum_;
};

// Builds the operator from one FFT of w. Throws NoSupportError when
// sum(w) = 0.
OdcOperator build_khat_spectral(const SampleGrid& w);

// Result of compensating one projection coefficient. fell_back is set when
// the denominator was degenerate (|D| < 1e-12) and the raw projection was
// used instead; callers surface that in their run report.
struct Compensation {
  std::complex<double> coefficient;
  bool fell_back = false;
};

// Orthogonality deficiency compensation of the selected coefficient:
//   c^_k = p_k / sum over l of (p_l / p_k) * (K^)_{k,l}
// restricted to l with |p_l| >= floor (and |p_l| > 0; ratios to zero are
// undefined). The l = k term contributes exactly 1.
Compensation compensate(std::span<const std::complex<double>> p, int k,
                        const OdcOperator& op, double floor);

}  // namespace fsex

#endif
