#include <cmath>
#include <limits>

#include "doctest.h"
#include "fsex/grid.hpp"

using namespace fsex;

TEST_CASE("sample grid stores by position and reports finiteness") {
  SampleGrid g(3, 2, 1.5);
  CHECK(g.width() == 3);
  CHECK(g.height() == 2);
  CHECK(g.size() == 6);
  CHECK(g(2, 1) == 1.5);
  g(2, 1) = -4.0;
  CHECK(g(2, 1) == -4.0);
  CHECK(g.all_finite());
  g(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(g.all_finite());
  CHECK_THROWS_AS(SampleGrid(0, 4), ConfigError);
}

TEST_CASE("region mask partitions positions and counts both areas") {
  RegionMask mask(4, 4);
  CHECK(mask.support_count() == 16);
  CHECK(mask.missing_count() == 0);
  mask.set(1, 2, Region::kMissing);
  CHECK_FALSE(mask.is_support(1, 2));
  CHECK(mask.support_count() == 15);
  CHECK(mask.missing_count() == 1);
}

TEST_CASE("masking grid is 1 on support and 0 on missing") {
  SUBCASE("all support gives all ones") {
    RegionMask mask(3, 3);
    SampleGrid b = make_masking_grid(mask);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.at_index(i) == 1.0);
  }
  SUBCASE("single support position gives a single one") {
    RegionMask mask(3, 3, Region::kMissing);
    mask.set(0, 0, Region::kSupport);
    SampleGrid b = make_masking_grid(mask);
    CHECK(b(0, 0) == 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) sum += b.at_index(i);
    CHECK(sum == 1.0);
  }
  SUBCASE("4x4 with 2x2 missing center has exactly 12 ones") {
    RegionMask mask(4, 4);
    for (int m = 1; m <= 2; ++m)
      for (int n = 1; n <= 2; ++n) mask.set(m, n, Region::kMissing);
    SampleGrid b = make_masking_grid(mask);
    double sum = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK((b.at_index(i) == 0.0 || b.at_index(i) == 1.0));
      sum += b.at_index(i);
    }
    CHECK(sum == 12.0);
  }
  SUBCASE("no support is rejected") {
    RegionMask mask(2, 2, Region::kMissing);
    CHECK_THROWS_AS(make_masking_grid(mask), NoSupportError);
  }
}

TEST_CASE("isotropic weighting follows the radial model") {
  SUBCASE("center of odd dims is exactly 1") {
    SampleGrid rho = make_isotropic_rho(5, 7, {0.8});
    CHECK(rho(2, 3) == 1.0);
  }
  SUBCASE("distance one from the center gives rho_hat") {
    SampleGrid rho = make_isotropic_rho(5, 5, {0.8});
    CHECK(rho(3, 2) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(rho(2, 1) == doctest::Approx(0.8).epsilon(1e-14));
  }
  SUBCASE("64x64 corner value matches the closed form") {
    SampleGrid rho = make_isotropic_rho(64, 64, {0.8});
    CHECK(rho(0, 0) == doctest::Approx(4.818137349170364e-05).epsilon(1e-12));
  }
  SUBCASE("reflection symmetry about the center") {
    SampleGrid rho = make_isotropic_rho(6, 9, {0.7});
    for (int m = 0; m < 6; ++m)
      for (int n = 0; n < 9; ++n) {
        CHECK(rho(m, n) == rho(5 - m, n));
        CHECK(rho(m, n) == rho(m, 8 - n));
      }
  }
  SUBCASE("values never increase with center distance") {
    const int w = 8, h = 5;
    SampleGrid rho = make_isotropic_rho(w, h, {0.8});
    const double cm = (w - 1) / 2.0, cn = (h - 1) / 2.0;
    for (int m = 0; m < w; ++m)
      for (int n = 0; n < h; ++n)
        for (int mm = 0; mm < w; ++mm)
          for (int nn = 0; nn < h; ++nn) {
            const double da = std::hypot(m - cm, n - cn);
            const double db = std::hypot(mm - cm, nn - cn);
            if (db > da) CHECK(rho(mm, nn) <= rho(m, n));
          }
  }
  SUBCASE("rho_hat outside (0,1) is rejected") {
    CHECK_THROWS_AS(make_isotropic_rho(4, 4, {0.0}), ConfigError);
    CHECK_THROWS_AS(make_isotropic_rho(4, 4, {1.0}), ConfigError);
    CHECK_THROWS_AS(make_isotropic_rho(4, 4, {-0.2}), ConfigError);
    CHECK_THROWS_AS(make_isotropic_rho(4, 4, {1.7}), ConfigError);
  }
}

TEST_CASE("weighting grid is rho on support and exactly 0 on missing") {
  SUBCASE("rho of ones reduces to the masking grid") {
    RegionMask mask(4, 4);
    mask.set(1, 1, Region::kMissing);
    mask.set(2, 2, Region::kMissing);
    SampleGrid ones(4, 4, 1.0);
    CHECK(make_weighting_grid(ones, mask) == make_masking_grid(mask));
  }
  SUBCASE("single support sample keeps only its rho value") {
    RegionMask mask(3, 4, Region::kMissing);
    mask.set(2, 1, Region::kSupport);
    SampleGrid rho = make_isotropic_rho(3, 4, {0.6});
    SampleGrid w = make_weighting_grid(rho, mask);
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 4; ++n) {
        if (m == 2 && n == 1)
          CHECK(w(m, n) == rho(m, n));
        else
          CHECK(w(m, n) == 0.0);
      }
  }
  SUBCASE("w equals rho times the masking grid everywhere") {
    RegionMask mask(7, 6);
    for (int m = 2; m < 5; ++m)
      for (int n = 1; n < 4; ++n) mask.set(m, n, Region::kMissing);
    SampleGrid rho = make_isotropic_rho(7, 6, {0.8});
    SampleGrid w = make_weighting_grid(rho, mask);
    SampleGrid b = make_masking_grid(mask);
    for (std::size_t i = 0; i < w.size(); ++i)
      CHECK(w.at_index(i) == rho.at_index(i) * b.at_index(i));
  }
  SUBCASE("64x64 with 32x32 center loss sums like a direct loop") {
    RegionMask mask(64, 64);
    for (int m = 16; m < 48; ++m)
      for (int n = 16; n < 48; ++n) mask.set(m, n, Region::kMissing);
    SampleGrid w = make_weighting_grid(make_isotropic_rho(64, 64, {0.8}), mask);
    double expected = 0.0;
    for (int m = 0; m < 64; ++m)
      for (int n = 0; n < 64; ++n) {
        if (m >= 16 && m < 48 && n >= 16 && n < 48) continue;
        expected += std::pow(0.8, std::sqrt((m - 31.5) * (m - 31.5) +
                                            (n - 31.5) * (n - 31.5)));
      }
    double actual = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) actual += w.at_index(i);
    CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch and empty support are rejected") {
    RegionMask mask(4, 4);
    CHECK_THROWS_AS(make_weighting_grid(SampleGrid(4, 5, 1.0), mask),
                    DimensionMismatchError);
    RegionMask lost(4, 4, Region::kMissing);
    CHECK_THROWS_AS(make_weighting_grid(SampleGrid(4, 4, 1.0), lost),
                    NoSupportError);
  }
}
