#include "fsex/grid.hpp"

#include <algorithm>
#include <cmath>

namespace fsex {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw ConfigError("grid dimensions must be positive");
  }
}

}  // namespace

SampleGrid::SampleGrid(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

bool SampleGrid::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

ComplexGrid::ComplexGrid(int width, int height, std::complex<double> fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

RegionMask::RegionMask(int width, int height, Region fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  flags_.assign(static_cast<std::size_t>(width) * height, fill);
}

int RegionMask::support_count() const {
  return static_cast<int>(
      std::count(flags_.begin(), flags_.end(), Region::kSupport));
}

int RegionMask::missing_count() const {
  return static_cast<int>(size()) - support_count();
}

SampleGrid make_masking_grid(const RegionMask& mask) {
  if (mask.support_count() == 0) {
    throw NoSupportError("mask has no support positions");
  }
  SampleGrid b(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    b.at_index(i) = mask.at_index(i) == Region::kSupport ? 1.0 : 0.0;
  }
  return b;
}

SampleGrid make_isotropic_rho(int width, int height, const WeightConfig& cfg) {
  if (!(cfg.rho_hat > 0.0) || !(cfg.rho_hat < 1.0)) {
    throw ConfigError("rho_hat must lie strictly inside (0, 1)");
  }
  SampleGrid rho(width, height);
  const double cm = (width - 1) / 2.0;
  const double cn = (height - 1) / 2.0;
  for (int m = 0; m < width; ++m) {
    for (int n = 0; n < height; ++n) {
      const double dm = m - cm;
      const double dn = n - cn;
      rho(m, n) = std::pow(cfg.rho_hat, std::sqrt(dm * dm + dn * dn));
    }
  }
  return rho;
}

SampleGrid make_weighting_grid(const SampleGrid& rho, const RegionMask& mask) {
  if (rho.width() != mask.width() || rho.height() != mask.height()) {
    throw DimensionMismatchError("rho and mask dimensions differ");
  }
  if (mask.support_count() == 0) {
    throw NoSupportError("mask has no support positions");
  }
  SampleGrid w(rho.width(), rho.height());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w.at_index(i) =
        mask.at_index(i) == Region::kSupport ? rho.at_index(i) : 0.0;
  }
  return w;
}

}  // namespace fsex
