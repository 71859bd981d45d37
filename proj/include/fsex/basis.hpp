#ifndef FSEX_BASIS_HPP
#define FSEX_BASIS_HPP

#include <complex>
#include <utility>

#include "fsex/grid.hpp"

namespace fsex {

// 2-D DFT basis over an M x N area:
//   phi_k[m,n] = exp(+j*2*pi*(k1*m/M + k2*n/N)),  k = k1*N + k2
// with k1 in [0,M), k2 in [0,N). All |L| = M*N functions are mutually
// orthogonal over L and have unit modulus everywhere.
//
// Evaluation reduces the phase to an exact integer fraction of a turn, so
// conjugate symmetry phi_conj(k) = conj(phi_k) holds bit-exactly, values at
// quarter turns are exactly +-1/+-j, and self-conjugate functions evaluate
// to exactly real grids.
class BasisSet {
 public:
  BasisSet(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  int size() const { return width_ * height_; }

  std::pair<int, int> frequency(int k) const;    // (k1, k2)
  int index_of(int k1, int k2) const;
  int conjugate_index(int k) const;              // ((M-k1)%M)*N + (N-k2)%N
  bool is_self_conjugate(int k) const;

  std::complex<double> value(int k, int m, int n) const;
  ComplexGrid evaluate(int k) const;

 private:
  int width_;
  int height_;
};

// Unit phasor exp(+j*2*pi*q/period) for integer 0 <= q < period, exact at
// quarter turns and exactly conjugate-symmetric in q -> period - q.
std::complex<double> unit_phase(long long q, long long period);

// Weighted scalar product sum(x * conj(y) * w). Dimensions must match.
std::complex<double> weighted_inner_product(const ComplexGrid& x,
                                            const ComplexGrid& y,
                                            const SampleGrid& w);

// Weighted norm sum(w * |phi_k|^2) of the k-th basis function, evaluated by
// summation so the contract holds for any basis, not just unit-modulus ones.
// Throws NoSupportError when the sum vanishes (w has no support).
double weighted_basis_norm(const BasisSet& basis, int k, const SampleGrid& w);

}  // namespace fsex

#endif
