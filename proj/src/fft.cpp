#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace fsex::fft {
namespace {

// FFTW plan creation and destruction are not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

ComplexGrid transform(const ComplexGrid& in, int sign) {
  ComplexGrid out(in.width(), in.height());
  // Grids are m-major with n fastest, so FFTW's row-major (n0, n1) maps to
  // (width, height) and the output index k1 * height + k2 matches the basis
  // index convention directly.
  auto* src = reinterpret_cast<fftw_complex*>(
      const_cast<std::complex<double>*>(in.values().data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.values().data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(in.width(), in.height(), src, dst, sign,
                            FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

ComplexGrid forward(const ComplexGrid& in) {
  return transform(in, FFTW_FORWARD);
}

ComplexGrid backward(const ComplexGrid& in) {
  return transform(in, FFTW_BACKWARD);
}

}  // namespace fsex::fft
