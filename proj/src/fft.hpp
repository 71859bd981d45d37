#ifndef FSEX_SRC_FFT_HPP
#define FSEX_SRC_FFT_HPP

#include "fsex/grid.hpp"

namespace fsex::fft {

// Unnormalized 2-D transforms matching the basis convention: forward uses
// kernel exp(-j*2*pi*(k1*m/M + k2*n/N)) so forward(x)[k] = <x, phi_k>_1;
// backward uses the + kernel so backward(spectrum) synthesizes
// sum(spectrum[k] * phi_k) without any 1/(M*N) scaling.
ComplexGrid forward(const ComplexGrid& in);
ComplexGrid backward(const ComplexGrid& in);

}  // namespace fsex::fft

#endif
