#pragma once

// Multilinear operators of the interaction-representation mKdV system
//
//   d/dt v_k = N(v)_k + R(v)_k,
//   N(v)_k = sigma (i/3) sum_{k1+k2+k3=k, Phi != 0} k e^{it Phi} v_k1 v_k2 v_k3,
//   R(v)_k = -i sigma k |v_k|^2 v_k,
//
// and of the two normal-form reductions built on it. Every sum runs over
// ordered tuples with all frequencies inside the cutoff K, exactly as
// written; no symmetrization factors are taken out.
//
//   name    degree  meaning
//   R       3       resonant diagonal term
//   N       3       non-resonant term; N_low: all |ki| <= n, N_high: kstar > n
//   N1      3       N with multiplier divided by i Phi (boundary term)
//   N1_dot  3       time derivative of N1 along a path with dv/dt = w
//   N2      3       N - N1_dot; linear in w
//   N21     5       N2 restricted to kstar > n with w = R(v)
//   N22     5       N2 restricted to kstar > n with w = N(v)
//   N221    5       part of N22 where one of the region conditions holds
//   N222    5       remaining part of N22 (all primed conditions hold)
//   N3, N4  5       split of N222 through the inner N1_dot / N2
//   N5..N7  5       integration by parts of N3 in time
//
// The sign sigma enters every cubic operator once. Quintic operators carry
// sigma^2 = 1 and do not depend on it.
//
// Operators that take w treat it as the time derivative of v, so identities
// can be checked with arbitrary w as well as with w = rhs(v).

#include <string_view>

#include "nfmkdv/spectral_state.hpp"

namespace nfmkdv {

struct TermConfig {
  int K = 8;
  int n = 0;      // frequency splitting parameter
  int sigma = 1;  // +1 focusing, -1 defocusing
  double t = 0.0;

  void validate() const;
};

// Largest cutoff accepted by the quintilinear operators.
inline constexpr int kMaxQuinticCutoff = 24;

enum class Restriction {
  None,
  LowOnly,   // all |ki| <= n
  HighOnly,  // kstar = max|ki| > n
};

SpectralState R_term(const SpectralState& v, const TermConfig& cfg);
SpectralState N_term(const SpectralState& v, const TermConfig& cfg,
                     Restriction r = Restriction::None);
SpectralState N_low(const SpectralState& v, const TermConfig& cfg);
SpectralState N_high(const SpectralState& v, const TermConfig& cfg);
SpectralState N1_term(const SpectralState& v, const TermConfig& cfg,
                      Restriction r = Restriction::None);
SpectralState N1_dot(const SpectralState& v, const SpectralState& w, const TermConfig& cfg,
                     Restriction r = Restriction::None);
SpectralState N2_term(const SpectralState& v, const SpectralState& w, const TermConfig& cfg,
                      Restriction r = Restriction::None);

// kstar > n is always imposed on the outer triple below.
SpectralState N21_term(const SpectralState& v, const TermConfig& cfg);
SpectralState N22_term(const SpectralState& v, const TermConfig& cfg);
SpectralState N221_term(const SpectralState& v, const TermConfig& cfg);
SpectralState N222_term(const SpectralState& v, const TermConfig& cfg);
SpectralState N3_term(const SpectralState& v, const SpectralState& w, const TermConfig& cfg);
SpectralState N4_term(const SpectralState& v, const SpectralState& w, const TermConfig& cfg);
SpectralState N5_term(const SpectralState& v, const TermConfig& cfg);
SpectralState N6_term(const SpectralState& v, const SpectralState& w, const TermConfig& cfg);
SpectralState N7_term(const SpectralState& v, const TermConfig& cfg);

// N(v) + R(v): the right-hand side of the interaction-representation ODE.
SpectralState rhs(const SpectralState& v, const TermConfig& cfg);

// Number of ordered quintuples (outer kstar > n) where all primed region
// conditions hold, i.e. the support of N222 ... N7.
long long count_remaining_region(int K, int n);

// Named dispatch used by the CLI. w is ignored by operators that do not
// take it. Names: R N N_low N_high N1 N1_high N1_dot N2 N2_high N21 N22 N221
// N222 N3 N4 N5 N6 N7 rhs.
SpectralState evaluate_term(std::string_view name, const SpectralState& v,
                            const SpectralState* w, const TermConfig& cfg);
bool term_needs_w(std::string_view name);

}  // namespace nfmkdv
