#pragma once

// Integer arithmetic on frequency tuples k1 + k2 + k3 = k.
//
// All implicit constants in the dichotomy and in the endpoint region
// conditions are 1: ">~" is read as >=, "<<" as <, "<~" as <=, ">>" as >.

#include <array>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace nfmkdv {

using Freq = std::int64_t;

inline Freq abs_freq(Freq k) { return k < 0 ? -k : k; }

// k^3 - k1^3 - k2^3 - k3^3 with k = k1 + k2 + k3, computed as the factored
// form 3(k1+k2)(k2+k3)(k3+k1). No overflow for |ki| <= 2^15.
constexpr Freq phi(Freq k1, Freq k2, Freq k3) {
  return 3 * (k1 + k2) * (k2 + k3) * (k3 + k1);
}

enum class PhaseClass { Resonant, Phi1, Phi2 };

std::string_view to_string(PhaseClass c);

struct ModeTriple {
  Freq k1 = 0;
  Freq k2 = 0;
  Freq k3 = 0;

  constexpr Freq k() const { return k1 + k2 + k3; }
  constexpr Freq a() const { return k1 + k2; }
  constexpr Freq b() const { return k2 + k3; }
  constexpr Freq c() const { return k3 + k1; }
  constexpr Freq phase() const { return phi(k1, k2, k3); }
  Freq kstar() const;
  Freq klow() const;
  // min(|a|, |b|, |c|)
  Freq lambda() const;
  // min(|ab|, |bc|, |ca|)
  Freq Lambda() const;
  PhaseClass classify() const;

  friend constexpr bool operator==(const ModeTriple&, const ModeTriple&) = default;
};

// RESONANT iff phi == 0; PHI1 iff |phi| >= kstar^2; PHI2 otherwise.
PhaseClass classify(const ModeTriple& t);

// Outer triple (k1, k2, k3) with the inner triple (j1, j2, j3) expanding k1.
struct ModeQuintuple {
  ModeTriple outer;
  ModeTriple inner;  // inner.k() == outer.k1

  // Phi(k1; j1, j2, j3)
  Freq inner_phase() const { return inner.phase(); }
};

// Letters of the endpoint region conditions, in order (a) ... (e).
enum class RegionLetter : int { A = 0, B, C, D, E };

struct RegionFlags {
  // holds[x]: condition (x) is satisfied. Primed condition (x') is !holds[x].
  std::array<bool, 5> holds{};
  // guarded[x]: the class guard of (x) is active. When false, (x) is
  // vacuously false and (x') vacuously true.
  std::array<bool, 5> guarded{};

  bool operator[](RegionLetter x) const { return holds[static_cast<int>(x)]; }
  bool primed(RegionLetter x) const { return !holds[static_cast<int>(x)]; }
  bool any() const;         // at least one of (a)...(e): the "good" part
  bool all_primed() const;  // (a')...(e') all hold: the remaining part
  int vacuous_count() const;
};

// Throws ValidationError when the outer or the inner triple is resonant or
// when inner.k() != outer.k1.
RegionFlags region_flags(const ModeQuintuple& q);

// Same predicate without validation, for the inner loops of the multilinear
// sums. Caller guarantees both triples are non-resonant and carries the
// precomputed phase classes.
RegionFlags region_flags_unchecked(const ModeQuintuple& q, PhaseClass outer_class,
                                   PhaseClass inner_class);

// Cheap necessary condition for region_flags(q).all_primed() that inspects
// only the outer triple, given that every inner frequency satisfies
// |j| <= inner_bound. Never rejects a triple that has an admissible
// inner completion.
bool outer_may_be_all_primed(const ModeTriple& t, PhaseClass outer_class, Freq inner_bound);

// Exact integer thresholds for the fractional powers in the region
// conditions. For m >= 2, m^{1/100} and m^{101/100} are irrational below
// 2^100, so strict and non-strict comparisons coincide with these ceilings.
Freq ceil_root100(Freq m);   // smallest integer x with x >= m^{1/100}
Freq floor_root100(Freq m);  // largest integer x with x <= m^{1/100}
Freq ceil_pow101(Freq m);    // smallest integer x with x >= m^{101/100}

// Filter on triples produced by enumerate_triples. Conditions combine with
// logical AND.
struct TripleFilter {
  bool nonresonant = false;
  bool phi1_only = false;
  bool phi2_only = false;
  Freq kstar_above = -1;  // keep kstar > value when value >= 0
  Freq all_at_most = -1;  // keep max|ki| <= value when value >= 0
  std::function<bool(const ModeTriple&)> custom;

  bool accepts(const ModeTriple& t) const;

  static TripleFilter none() { return {}; }
  static TripleFilter non_resonant() {
    TripleFilter f;
    f.nonresonant = true;
    return f;
  }
};

// Calls fn for every (k1, k2, k3) with k1 + k2 + k3 = k, |ki| <= cutoff and
// filter.accepts(). Order: k1 ascending, then k2 ascending.
void for_each_triple(Freq k, Freq cutoff, const TripleFilter& filter,
                     const std::function<void(const ModeTriple&)>& fn);
std::vector<ModeTriple> enumerate_triples(Freq k, Freq cutoff, const TripleFilter& filter = {});

struct ResonanceSummary {
  long long total = 0;
  long long resonant = 0;
  long long phi1 = 0;
  long long phi2 = 0;
};

// Every triple with |ki| <= cutoff, in k1, k2, k3 ascending order.
ResonanceSummary scan_triples(Freq cutoff, const std::function<void(const ModeTriple&, PhaseClass)>& fn);

}  // namespace nfmkdv
