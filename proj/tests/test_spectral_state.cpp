#include "doctest.h"

#include <cmath>

#include "nfmkdv/errors.hpp"
#include "nfmkdv/spectral_state.hpp"

using namespace nfmkdv;

namespace {
SpectralState pair_state() {
  SpectralState v(4);
  v[1] = v[-1] = 0.5;
  return v;
}
}  // namespace

TEST_CASE("weight") {
  CHECK(weight(0) == 1.0);
  CHECK(weight(-3) == weight(3));
  CHECK(weight(3) == 4.0);
}

TEST_CASE("sobolev norm and mass examples") {
  const SpectralState v = pair_state();
  CHECK(sobolev_norm(v, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sobolev_norm(v, 0.0) == doctest::Approx(0.70710678118654752).epsilon(1e-15));
  CHECK(sobolev_norm(SpectralState(5), 0.7) == 0.0);
  CHECK(l2_mass(v) == doctest::Approx(0.5));
  CHECK(l2_mass(SpectralState(3)) == 0.0);
}

TEST_CASE("norm is monotone in s and the s = 0 norm squares to the mass") {
  for (int i = 0; i < 50; ++i) {
    const SpectralState v = random_state(12, 0.7, 1.3, member_seed(17, i));
    double prev = 0.0;
    for (double s = -1.0; s <= 2.0; s += 0.25) {
      const double h = sobolev_norm(v, s);
      CHECK(h >= prev);
      prev = h;
    }
    CHECK(std::pow(sobolev_norm(v, 0.0), 2) == doctest::Approx(l2_mass(v)).epsilon(1e-14));
  }
}

TEST_CASE("projection") {
  const SpectralState v = random_state(8, 1.0, 1.0, 4);
  CHECK(project(v, 8) == v);
  CHECK(project(v, 20) == v);
  SpectralState two(3);
  two[2] = two[-2] = 1.0;
  CHECK(max_abs(project(two, 1)) == 0.0);
  for (int i = 0; i < 50; ++i) {
    const SpectralState r = random_state(10, 0.5, 1.0, member_seed(1, i));
    const int n = i % 11;
    const SpectralState p = project(r, n);
    CHECK(project(p, n) == p);
    CHECK(sobolev_norm(p, 0.5) <= sobolev_norm(r, 0.5));
    CHECK(p.hermitian_defect() == 0.0);
  }
}

TEST_CASE("random states") {
  CHECK(random_state(6, 0.5, 1.0, 99) == random_state(6, 0.5, 1.0, 99));
  CHECK_FALSE(random_state(6, 0.5, 1.0, 99) == random_state(6, 0.5, 1.0, 98));
  CHECK(max_abs(random_state(6, 0.5, 0.0, 3)) == 0.0);
  const SpectralState v = random_state(6, 0.5, 1.0, 3);
  CHECK(v.is_hermitian());
  CHECK(v[0].imag() == 0.0);
  CHECK(v.is_finite());

  // E ||v||_{H^s}^2 = amplitude^2 * sum_k <k>^{-1} for this law.
  const int K = 10;
  const double s = 0.5;
  double expected = 0.0;
  for (int k = -K; k <= K; ++k) expected += 1.0 / weight(k);
  for (double amp : {0.5, 2.0}) {
    double mean = 0.0;
    const int samples = 1000;
    for (int i = 0; i < samples; ++i) mean += std::pow(sobolev_norm(random_state(K, s, amp, member_seed(5, i)), s), 2);
    mean /= samples;
    CHECK(mean / (amp * amp * expected) == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("gauge maps and shifts") {
  const SpectralState u = random_state(9, 1.0, 1.0, 21);
  CHECK(gauge_to_interaction(u, 0.0) == u);
  const SpectralState v = gauge_to_interaction(u, 0.37);
  CHECK(v.time() == 0.37);
  for (double s : {0.0, 0.5, 1.0}) CHECK(sobolev_norm(v, s) == doctest::Approx(sobolev_norm(u, s)).epsilon(1e-14));
  CHECK(std::abs(l2_mass(v) - l2_mass(u)) < 1e-14);
  CHECK(relative_residual(interaction_to_gauge(v, 0.37), u) < 1e-14);
  CHECK(v.hermitian_defect() < 1e-15);

  CHECK(spatial_shift(u, 0.0) == u);
  CHECK(relative_residual(spatial_shift(u, 2 * M_PI), u) < 1e-14);
  CHECK(relative_residual(spatial_shift(spatial_shift(u, 1.3), -1.3), u) < 1e-14);
  CHECK(std::abs(l2_mass(spatial_shift(u, 0.9)) - l2_mass(u)) < 1e-14);
  CHECK(spatial_shift(u, 0.9).hermitian_defect() < 1e-15);
}

TEST_CASE("arithmetic and helpers") {
  SpectralState a = pair_state();
  const SpectralState b = random_state(4, 1.0, 1.0, 1);
  CHECK(max_abs_difference((a + b) - b, a) < 1e-16);
  CHECK_THROWS_AS(a += SpectralState(3), ValidationError);
  CHECK_THROWS_AS(SpectralState(-1), ValidationError);
  CHECK(relative_residual(SpectralState(2), SpectralState(2)) == 0.0);
  SpectralState c(2);
  c[1] = Complex(1, 2);
  c.enforce_hermitian();
  CHECK(c[-1] == Complex(1, -2));
  CHECK(resize(b, 6)[4] == b[4]);
  CHECK(resize(b, 6)[5] == Complex{});
  CHECK(resize(b, 2).cutoff() == 2);
  SpectralState bad(1);
  bad[1] = NAN;
  CHECK_FALSE(bad.is_finite());
}
