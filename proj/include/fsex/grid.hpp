#ifndef FSEX_GRID_HPP
#define FSEX_GRID_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "fsex/errors.hpp"

namespace fsex {

// 2-D real-valued sample grid over the area L. Position (m, n) with
// m in [0, width) horizontal and n in [0, height) vertical; storage is
// m-major so the linear index is m * height + n.
class SampleGrid {
 public:
  SampleGrid() = default;
  SampleGrid(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double operator()(int m, int n) const { return values_[idx(m, n)]; }
  double& operator()(int m, int n) { return values_[idx(m, n)]; }
  double at_index(std::size_t i) const { return values_[i]; }
  double& at_index(std::size_t i) { return values_[i]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool same_dims(const SampleGrid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool all_finite() const;

  friend bool operator==(const SampleGrid&, const SampleGrid&) = default;

 private:
  std::size_t idx(int m, int n) const {
    return static_cast<std::size_t>(m) * height_ + n;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

// Complex companion of SampleGrid with the same layout.
class ComplexGrid {
 public:
  ComplexGrid() = default;
  ComplexGrid(int width, int height,
              std::complex<double> fill = {0.0, 0.0});

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  std::complex<double> operator()(int m, int n) const {
    return values_[idx(m, n)];
  }
  std::complex<double>& operator()(int m, int n) { return values_[idx(m, n)]; }
  std::complex<double> at_index(std::size_t i) const { return values_[i]; }
  std::complex<double>& at_index(std::size_t i) { return values_[i]; }

  const std::vector<std::complex<double>>& values() const { return values_; }
  std::vector<std::complex<double>>& values() { return values_; }

  bool same_dims(const ComplexGrid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  std::size_t idx(int m, int n) const {
    return static_cast<std::size_t>(m) * height_ + n;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::complex<double>> values_;
};

// Per-position flag: known sample (support area A) or unknown (missing
// area B). Every position carries exactly one flag; A and B partition L.
enum class Region : std::uint8_t { kSupport = 0, kMissing = 1 };

class RegionMask {
 public:
  RegionMask() = default;
  RegionMask(int width, int height, Region fill = Region::kSupport);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return flags_.size(); }

  Region at(int m, int n) const { return flags_[idx(m, n)]; }
  Region at_index(std::size_t i) const { return flags_[i]; }
  void set(int m, int n, Region r) { flags_[idx(m, n)] = r; }

  bool is_support(int m, int n) const {
    return at(m, n) == Region::kSupport;
  }
  int support_count() const;
  int missing_count() const;

  friend bool operator==(const RegionMask&, const RegionMask&) = default;

 private:
  std::size_t idx(int m, int n) const {
    return static_cast<std::size_t>(m) * height_ + n;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Region> flags_;
};

// Parameters of the isotropic weighting model: rho_hat is the correlation
// coefficient, strictly inside (0, 1).
struct WeightConfig {
  double rho_hat = 0.8;
};

// Masking grid b: 1 on A, 0 on B. Requires at least one support position.
SampleGrid make_masking_grid(const RegionMask& mask);

// Isotropic weighting rho[m,n] = rho_hat ^ sqrt((m-(M-1)/2)^2 + (n-(N-1)/2)^2),
// radially symmetric about the area center. Rejects rho_hat outside (0, 1).
SampleGrid make_isotropic_rho(int width, int height, const WeightConfig& cfg);

// Weighting grid w = rho * b: rho on A, exactly 0 on B. Dimensions must
// match; requires at least one support position.
SampleGrid make_weighting_grid(const SampleGrid& rho, const RegionMask& mask);

}  // namespace fsex

#endif
