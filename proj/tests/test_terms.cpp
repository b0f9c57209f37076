#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "nfmkdv/errors.hpp"
#include "nfmkdv/resonance.hpp"
#include "nfmkdv/terms.hpp"

using namespace nfmkdv;

namespace {

const std::vector<std::string> kAllTerms = {"R",    "N",    "N_low", "N_high", "N1",  "N1_high",
                                            "N1_dot", "N2", "N2_high", "N21",  "N22", "N221",
                                            "N222", "N3",   "N4",    "N5",     "N6",  "N7",
                                            "rhs"};

TermConfig config(int K, int n, double t, int sigma = 1) {
  TermConfig c;
  c.K = K;
  c.n = n;
  c.t = t;
  c.sigma = sigma;
  return c;
}

SpectralState two_mode(int K) {
  SpectralState v(K);
  v[1] = v[-1] = 1.0;
  v[2] = v[-2] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("every operator matches the nested-loop oracle") {
  for (int sigma : {1, -1}) {
    for (int n : {0, 2}) {
      const TermConfig cfg = config(6, n, 0.375, sigma);
      const SpectralState v = random_state(6, 1.0, 1.0, 11 + n);
      const SpectralState w = random_state(6, 0.5, 1.0, 23 + n);
      const oracle::Params p{6, n, sigma, 0.375};
      for (const auto& name : kAllTerms) {
        CAPTURE(name);
        CAPTURE(n);
        CAPTURE(sigma);
        const SpectralState got = evaluate_term(name, v, &w, cfg);
        const SpectralState want = oracle::term(name, v, w, p);
        CHECK(relative_residual(got, want) < 1e-13);
      }
    }
  }
}

TEST_CASE("oracle region predicate agrees with the exact integer flags") {
  long checked = 0;
  for (Freq k1 = -6; k1 <= 6; ++k1)
    for (Freq k2 = -6; k2 <= 6; ++k2)
      for (Freq k3 = -6; k3 <= 6; ++k3) {
        const ModeTriple o{k1, k2, k3};
        if (o.phase() == 0) continue;
        for (Freq j1 = -6; j1 <= 6; ++j1)
          for (Freq j2 = -6; j2 <= 6; ++j2) {
            const ModeTriple in{j1, j2, k1 - j1 - j2};
            if (in.phase() == 0) continue;
            const bool exact = region_flags({o, in}).any();
            REQUIRE(exact == oracle::good_region(k1, k2, k3, in.k1, in.k2, in.k3));
            ++checked;
          }
      }
  CHECK(checked > 0);
}

TEST_CASE("hand-computed values on the two-mode state") {
  const SpectralState v = two_mode(5);
  const TermConfig cfg = config(5, 0, 0.0);
  // three orderings of (1, 2, 2), Phi = 108
  CHECK(std::abs(N_term(v, cfg)[5] - Complex(0.0, 5.0)) < 1e-13);
  CHECK(std::abs(N1_term(v, cfg)[5] - Complex(5.0 / 108.0, 0.0)) < 1e-14);
}

TEST_CASE("R term formula") {
  SpectralState v(3);
  v[2] = v[-2] = 1.0;
  const SpectralState r = R_term(v, config(3, 0, 0.0));
  CHECK(std::abs(r[2] - Complex(0, -2)) < 1e-15);
  CHECK(std::abs(r[-2] - Complex(0, 2)) < 1e-15);
  CHECK(r[0] == Complex{});
  const SpectralState rm = R_term(v, config(3, 0, 0.0, -1));
  CHECK(std::abs(rm[2] - Complex(0, 2)) < 1e-15);
}

TEST_CASE("data on the first mode pair is annihilated by N when K <= 2") {
  SpectralState v(2);
  v[1] = Complex(0.3, 0.4);
  v[-1] = std::conj(v[1]);
  CHECK(max_abs(N_term(v, config(2, 0, 0.7))) == 0.0);
}

TEST_CASE("zero inputs give zero outputs") {
  const SpectralState z(6);
  const SpectralState w = random_state(6, 1.0, 1.0, 5);
  const TermConfig cfg = config(6, 1, 0.2);
  for (const auto& name : kAllTerms) {
    CAPTURE(name);
    CHECK(max_abs(evaluate_term(name, z, &w, cfg)) == 0.0);
  }
  const SpectralState v = random_state(6, 1.0, 1.0, 6);
  CHECK(max_abs(N2_term(v, z, cfg)) == 0.0);
  CHECK(relative_residual(N1_dot(v, z, cfg), N_term(v, cfg)) < 1e-14);
}

TEST_CASE("outputs preserve Hermitian symmetry") {
  const SpectralState v = random_state(7, 1.0, 1.0, 9);
  const SpectralState w = random_state(7, 1.0, 1.0, 10);
  const TermConfig cfg = config(7, 2, 0.31);
  for (const auto& name : kAllTerms) {
    CAPTURE(name);
    CHECK(evaluate_term(name, v, &w, cfg).hermitian_defect() < 1e-13);
  }
}

TEST_CASE("identities at random data") {
  const double t = 0.41;
  SUBCASE("differentiation by parts holds for arbitrary w") {
    const TermConfig cfg = config(16, 0, t);
    for (int i = 0; i < 10; ++i) {
      const SpectralState v = random_state(16, 1.0, 1.0, member_seed(3, i));
      const SpectralState w = random_state(16, 0.0, 5.0, member_seed(4, i));
      const SpectralState sum = N1_dot(v, w, cfg) + N2_term(v, w, cfg);
      CHECK(relative_residual(N_term(v, cfg), sum) < 1e-12);
    }
  }
  SUBCASE("low/high split") {
    const TermConfig cfg = config(16, 5, t);
    const SpectralState v = random_state(16, 0.5, 1.0, 71);
    CHECK(relative_residual(N_term(v, cfg), N_low(v, cfg) + N_high(v, cfg)) < 1e-13);
    CHECK(max_abs(N_high(v, config(16, 16, t))) == 0.0);
    CHECK(max_abs(N_low(v, config(16, 0, t))) == 0.0);
  }
  SUBCASE("substitution of the equation into N2") {
    const TermConfig cfg = config(12, 3, t);
    const SpectralState v = random_state(12, 1.0, 1.0, 72);
    const SpectralState lhs = N2_term(v, rhs(v, cfg), cfg, Restriction::HighOnly);
    CHECK(relative_residual(lhs, N21_term(v, cfg) + N22_term(v, cfg)) < 1e-11);
  }
  SUBCASE("quintic region partition and second step") {
    const TermConfig cfg = config(12, 2, t);
    const SpectralState v = random_state(12, 1.0, 1.0, 73);
    CHECK(relative_residual(N22_term(v, cfg), N221_term(v, cfg) + N222_term(v, cfg)) < 1e-13);
    const SpectralState w = random_state(12, 1.0, 1.0, 74);
    CHECK(relative_residual(N222_term(v, cfg), N3_term(v, w, cfg) + N4_term(v, w, cfg)) < 1e-11);
  }
}

TEST_CASE("N1_dot is the time derivative of N1 along a path") {
  // v(t) = a + b t + c t^2 + d t^3, so dv/dt is known exactly.
  const int K = 8;
  const SpectralState a = random_state(K, 1.0, 1.0, 1), b = random_state(K, 1.0, 1.0, 2),
                      c = random_state(K, 1.0, 1.0, 3), d = random_state(K, 1.0, 1.0, 4);
  auto path = [&](double t) {
    SpectralState v = a;
    v.add_scaled(t, b).add_scaled(t * t, c).add_scaled(t * t * t, d);
    return v;
  };
  const double t0 = 0.3;
  SpectralState w = b;
  w.add_scaled(2 * t0, c).add_scaled(3 * t0 * t0, d);
  const SpectralState exact = N1_dot(path(t0), w, config(K, 0, t0));
  auto error = [&](double h) {
    SpectralState fd = N1_term(path(t0 + h), config(K, 0, t0 + h));
    fd -= N1_term(path(t0 - h), config(K, 0, t0 - h));
    fd *= 1.0 / (2 * h);
    return max_abs_difference(fd, exact);
  };
  const double e1 = error(1e-3), e2 = error(5e-4);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("restricted operators are sums over nested index sets") {
  const TermConfig cfg = config(10, 3, 0.2);
  const SpectralState v = random_state(10, 1.0, 1.0, 8);
  const SpectralState all = N1_term(v, cfg, Restriction::HighOnly);
  // contributions with kstar > 3 = contributions with kstar > 5 plus the shell 3 < kstar <= 5
  TermConfig c5 = cfg;
  c5.n = 5;
  TermConfig c3 = cfg;
  const SpectralState high5 = N1_term(v, c5, Restriction::HighOnly);
  const SpectralState low5 = N1_term(v, c5, Restriction::LowOnly);
  const SpectralState low3 = N1_term(v, c3, Restriction::LowOnly);
  CHECK(relative_residual(all, high5 + (low5 - low3)) < 1e-13);
}

TEST_CASE("remaining region count") {
  CHECK(count_remaining_region(2, 0) == 0);
  CHECK(count_remaining_region(4, 4) == 0);
  CHECK(count_remaining_region(4, 0) > 0);
  // the remaining-region terms vanish identically where the region is empty
  const SpectralState v = random_state(2, 0.0, 1.0, 12);
  CHECK(max_abs(N222_term(v, config(2, 0, 0.3))) == 0.0);
  CHECK(relative_residual(N22_term(v, config(2, 0, 0.3)), N221_term(v, config(2, 0, 0.3))) == 0.0);
}

TEST_CASE("validation") {
  const SpectralState v(4);
  CHECK_THROWS_AS(N_term(v, config(5, 0, 0.0)), ValidationError);
  CHECK_THROWS_AS(R_term(v, config(4, 0, 0.0, 2)), ValidationError);
  CHECK_THROWS_AS(N22_term(SpectralState(25), config(25, 0, 0.0)), ValidationError);
  CHECK_THROWS_AS(evaluate_term("bogus", v, nullptr, config(4, 0, 0.0)), ValidationError);
  CHECK(term_needs_w("N6"));
  CHECK_FALSE(term_needs_w("N7"));
}
