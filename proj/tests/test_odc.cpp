#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "fsex/odc.hpp"
#include "oracle.hpp"

using namespace fsex;
using cplx = std::complex<double>;

namespace {

RegionMask center_loss(int width, int height, int lw, int lh) {
  RegionMask mask(width, height);
  const int x0 = (width - lw) / 2, y0 = (height - lh) / 2;
  for (int m = x0; m < x0 + lw; ++m)
    for (int n = y0; n < y0 + lh; ++n) mask.set(m, n, Region::kMissing);
  return mask;
}

}  // namespace

TEST_CASE("dense overlap matrix is the literal weighted sum") {
  SUBCASE("unit weights give the area on the diagonal and zero elsewhere") {
    BasisSet basis(4, 4);
    ComplexMatrix k_matrix = build_k_matrix_dense(SampleGrid(4, 4, 1.0), basis);
    for (int k = 0; k < 16; ++k)
      for (int l = 0; l < 16; ++l) {
        if (k == l) {
          CHECK(k_matrix(k, l).real() == doctest::Approx(16.0).epsilon(1e-13));
          CHECK(std::abs(k_matrix(k, l).imag()) < 1e-12);
        } else {
          CHECK(std::abs(k_matrix(k, l)) < 1e-12 * 16);
        }
      }
  }
  SUBCASE("zero weights give the zero matrix") {
    BasisSet basis(3, 3);
    ComplexMatrix k_matrix = build_k_matrix_dense(SampleGrid(3, 3, 0.0), basis);
    for (int k = 0; k < 9; ++k)
      for (int l = 0; l < 9; ++l) CHECK(std::abs(k_matrix(k, l)) == 0.0);
    CHECK_THROWS_AS(build_khat_spectral(SampleGrid(3, 3, 0.0)), NoSupportError);
  }
  SUBCASE("4x4 with 2x2 loss matches per-entry brute force") {
    RegionMask mask = center_loss(4, 4, 2, 2);
    SampleGrid w = make_weighting_grid(make_isotropic_rho(4, 4, {0.8}), mask);
    BasisSet basis(4, 4);
    ComplexMatrix k_matrix = build_k_matrix_dense(w, basis);
    for (int k = 0; k < 16; ++k)
      for (int l = 0; l < 16; ++l) {
        cplx expected{0.0, 0.0};
        for (int m = 0; m < 4; ++m)
          for (int n = 0; n < 4; ++n)
            expected += w(m, n) * oracle::basis_value(4, 4, l, m, n) *
                        std::conj(oracle::basis_value(4, 4, k, m, n));
        CHECK(std::abs(k_matrix(k, l) - expected) < 1e-12);
      }
  }
  SUBCASE("hermitian structure") {
    RegionMask mask = center_loss(5, 4, 2, 2);
    SampleGrid w = make_weighting_grid(make_isotropic_rho(5, 4, {0.7}), mask);
    BasisSet basis(5, 4);
    ComplexMatrix k_matrix = build_k_matrix_dense(w, basis);
    for (int k = 0; k < 20; ++k)
      for (int l = 0; l < 20; ++l)
        CHECK(std::abs(k_matrix(k, l) - std::conj(k_matrix(l, k))) < 1e-12);
  }
  SUBCASE("areas beyond the dense limit are refused") {
    BasisSet basis(8, 8);
    CHECK_THROWS_AS(build_k_matrix_dense(SampleGrid(8, 8, 1.0), basis, 63),
                    DenseLimitError);
  }
}

TEST_CASE("spectral operator reproduces the normalized dense matrix") {
  SUBCASE("unit weights give the exact identity") {
    OdcOperator op = build_khat_spectral(SampleGrid(6, 6, 1.0));
    for (int k = 0; k < 36; ++k)
      for (int l = 0; l < 36; ++l) {
        if (k == l)
          CHECK(op.entry(k, l) == cplx{1.0, 0.0});
        else
          CHECK(op.entry(k, l) == cplx{0.0, 0.0});
      }
  }
  SUBCASE("diagonal is exactly one under any weighting") {
    RegionMask mask = center_loss(8, 8, 4, 4);
    SampleGrid w = make_weighting_grid(make_isotropic_rho(8, 8, {0.8}), mask);
    OdcOperator op = build_khat_spectral(w);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick(0, 63);
    for (int trial = 0; trial < 100; ++trial) {
      const int k = pick(rng);
      CHECK(op.entry(k, k) == cplx{1.0, 0.0});
    }
  }
  SUBCASE("8x8 with 4x4 loss agrees with the dense path entrywise") {
    RegionMask mask = center_loss(8, 8, 4, 4);
    SampleGrid w = make_weighting_grid(make_isotropic_rho(8, 8, {0.8}), mask);
    BasisSet basis(8, 8);
    ComplexMatrix k_matrix = build_k_matrix_dense(w, basis);
    OdcOperator op = build_khat_spectral(w);
    for (int k = 0; k < 64; ++k)
      for (int l = 0; l < 64; ++l) {
        const cplx dense = k_matrix(k, l) / k_matrix(k, k);
        CHECK(std::abs(op.entry(k, l) - dense) < 1e-9);
      }
  }
  SUBCASE("entries depend only on the frequency difference") {
    RegionMask mask = center_loss(6, 5, 3, 2);
    SampleGrid w = make_weighting_grid(make_isotropic_rho(6, 5, {0.8}), mask);
    OdcOperator op = build_khat_spectral(w);
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pick(0, 29);
    auto shifted = [&](int k, int l, int s1, int s2) {
      const int k1 = (k / 5 + s1) % 6, k2 = (k % 5 + s2) % 5;
      const int l1 = (l / 5 + s1) % 6, l2 = (l % 5 + s2) % 5;
      return std::pair{k1 * 5 + k2, l1 * 5 + l2};
    };
    int compared = 0;
    for (int trial = 0; trial < 200 && compared < 100; ++trial) {
      const int k = pick(rng), l = pick(rng);
      if (k == l) continue;
      const auto [ks, ls] = shifted(k, l, 1 + trial % 5, 1 + trial % 4);
      if (ks == ls) continue;
      CHECK(op.entry(k, l) == op.entry(ks, ls));
      ++compared;
    }
    CHECK(compared == 100);
  }
  SUBCASE("construction validates its inputs") {
    std::vector<cplx> spectrum(12);
    CHECK_THROWS_AS(OdcOperator(3, 3, spectrum, 1.0), DimensionMismatchError);
    CHECK_THROWS_AS(OdcOperator(3, 4, std::vector<cplx>(12), 0.0),
                    NoSupportError);
    CHECK_THROWS_AS(OdcOperator(0, 4, std::vector<cplx>(0), 1.0), ConfigError);
  }
}

TEST_CASE("compensation rescales the pivot by the overlap-weighted sum") {
  SUBCASE("identity operator returns the projection unchanged") {
    OdcOperator op = build_khat_spectral(SampleGrid(4, 4, 1.0));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::vector<cplx> p(16);
    for (auto& v : p) v = {val(rng), val(rng)};
    for (int k = 0; k < 16; ++k) {
      const Compensation comp = compensate(p, k, op, 0.0);
      CHECK(comp.coefficient == p[k]);
      CHECK_FALSE(comp.fell_back);
    }
  }
  SUBCASE("single nonzero projection keeps its value") {
    RegionMask mask = center_loss(4, 4, 2, 2);
    SampleGrid w = make_weighting_grid(make_isotropic_rho(4, 4, {0.8}), mask);
    OdcOperator op = build_khat_spectral(w);
    std::vector<cplx> p(16);
    p[5] = {0.7, -0.3};
    const Compensation comp = compensate(p, 5, op, 0.0);
    CHECK(comp.coefficient == p[5]);
    CHECK_FALSE(comp.fell_back);
  }
  SUBCASE("4x4 with 2x2 loss matches the brute-force estimate") {
    RegionMask mask = center_loss(4, 4, 2, 2);
    SampleGrid w = make_weighting_grid(make_isotropic_rho(4, 4, {0.8}), mask);
    OdcOperator op = build_khat_spectral(w);
    const auto table = oracle::basis_table(4, 4);
    const auto khat = oracle::khat_matrix(w, table);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> val(-128.0, 128.0);
    for (int trial = 0; trial < 20; ++trial) {
      ComplexGrid r(4, 4);
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
          if (mask.is_support(m, n)) r(m, n) = {val(rng), 0.0};
      const auto p = oracle::project(r, w, table);
      double max_mag = 0.0;
      for (const auto& v : p) max_mag = std::max(max_mag, std::abs(v));
      const double floor = 1e-12 * max_mag;
      for (int k = 0; k < 16; ++k) {
        if (!(std::abs(p[k]) >= floor) || !(std::abs(p[k]) > 0.0)) continue;
        const Compensation comp = compensate(p, k, op, floor);
        const cplx expected = oracle::compensate(p, k, khat, floor);
        CHECK(std::abs(comp.coefficient - expected) <=
              1e-10 * std::max(1.0, std::abs(expected)));
      }
    }
  }
  SUBCASE("halving the floor barely moves the estimate") {
    RegionMask mask = center_loss(8, 8, 4, 4);
    SampleGrid w = make_weighting_grid(make_isotropic_rho(8, 8, {0.8}), mask);
    OdcOperator op = build_khat_spectral(w);
    const auto table = oracle::basis_table(8, 8);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> val(0.0, 255.0);
    ComplexGrid r(8, 8);
    for (int m = 0; m < 8; ++m)
      for (int n = 0; n < 8; ++n)
        if (mask.is_support(m, n)) r(m, n) = {val(rng), 0.0};
    const auto p = oracle::project(r, w, table);
    double max_mag = 0.0;
    for (const auto& v : p) max_mag = std::max(max_mag, std::abs(v));
    const double floor = 1e-12 * max_mag * 64;
    int u = 0;
    for (int k = 1; k < 64; ++k)
      if (std::abs(p[k]) > std::abs(p[u])) u = k;
    const cplx full = compensate(p, u, op, floor).coefficient;
    const cplx halved = compensate(p, u, op, floor / 2.0).coefficient;
    CHECK(std::abs(full - halved) <= 1e-6 * std::abs(full));
  }
  SUBCASE("degenerate denominator falls back to the raw projection") {
    RegionMask mask = center_loss(4, 4, 2, 2);
    SampleGrid w = make_weighting_grid(make_isotropic_rho(4, 4, {0.8}), mask);
    OdcOperator op = build_khat_spectral(w);
    // Choose p so the one cross term cancels the pivot's unit contribution.
    int k = 0, l = 1;
    const cplx overlap = op.entry(k, l);
    REQUIRE(std::abs(overlap) > 0.0);
    std::vector<cplx> p(16);
    p[k] = {1.0, 0.0};
    p[l] = -p[k] / overlap;
    const Compensation comp = compensate(p, k, op, 0.0);
    CHECK(comp.fell_back);
    CHECK(comp.coefficient == p[k]);
  }
  SUBCASE("an ineligible pivot is rejected") {
    OdcOperator op = build_khat_spectral(SampleGrid(4, 4, 1.0));
    std::vector<cplx> p(16);
    CHECK_THROWS_AS(compensate(p, 0, op, 0.0), ConfigError);
    p[0] = {1e-3, 0.0};
    CHECK_THROWS_AS(compensate(p, 0, op, 1.0), ConfigError);
    CHECK_THROWS_AS(compensate(std::vector<cplx>(9), 0, op, 0.0),
                    DimensionMismatchError);
    p[0] = {1.0, 0.0};
    CHECK_THROWS_AS(compensate(p, 16, op, 0.0), ConfigError);
  }
}
