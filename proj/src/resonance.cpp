#include "nfmkdv/resonance.hpp"

#include <algorithm>
#include <cmath>

#include "nfmkdv/errors.hpp"

namespace nfmkdv {

std::string_view to_string(PhaseClass c) {
  switch (c) {
    case PhaseClass::Resonant:
      return "RESONANT";
    case PhaseClass::Phi1:
      return "PHI1";
    case PhaseClass::Phi2:
      return "PHI2";
  }
  return "?";
}

Freq ModeTriple::kstar() const { return std::max({abs_freq(k1), abs_freq(k2), abs_freq(k3)}); }

Freq ModeTriple::klow() const { return std::min({abs_freq(k1), abs_freq(k2), abs_freq(k3)}); }

Freq ModeTriple::lambda() const { return std::min({abs_freq(a()), abs_freq(b()), abs_freq(c())}); }

Freq ModeTriple::Lambda() const {
  const Freq x = abs_freq(a()), y = abs_freq(b()), z = abs_freq(c());
  return std::min({x * y, y * z, z * x});
}

PhaseClass ModeTriple::classify() const { return nfmkdv::classify(*this); }

PhaseClass classify(const ModeTriple& t) {
  const Freq p = abs_freq(t.phase());
  if (p == 0) return PhaseClass::Resonant;
  const Freq ks = t.kstar();
  return p >= ks * ks ? PhaseClass::Phi1 : PhaseClass::Phi2;
}

Freq ceil_root100(Freq m) {
  m = abs_freq(m);
  if (m <= 1) return m;
  return 2;  // 1 < m^{1/100} < 2 for 2 <= m < 2^100
}

Freq floor_root100(Freq m) {
  m = abs_freq(m);
  return m == 0 ? 0 : 1;
}

Freq ceil_pow101(Freq m) {
  m = abs_freq(m);
  if (m <= 1) return m;
  const long double value = std::pow(static_cast<long double>(m), 1.01L);
  return static_cast<Freq>(std::ceil(value));
}

bool RegionFlags::any() const {
  return std::any_of(holds.begin(), holds.end(), [](bool h) { return h; });
}

bool RegionFlags::all_primed() const { return !any(); }

int RegionFlags::vacuous_count() const {
  return static_cast<int>(std::count(guarded.begin(), guarded.end(), false));
}

RegionFlags region_flags_unchecked(const ModeQuintuple& q, PhaseClass outer_class,
                                   PhaseClass inner_class) {
  const ModeTriple& o = q.outer;
  const ModeTriple& j = q.inner;
  const Freq k_abs = abs_freq(o.k());
  const Freq k1_abs = abs_freq(o.k1);
  const Freq low_outer = std::min(k_abs, k1_abs);
  const Freq k23 = std::max(abs_freq(o.k2), abs_freq(o.k3));
  const Freq j2 = abs_freq(j.k2), j3 = abs_freq(j.k3);

  const bool outer_phi1 = outer_class == PhaseClass::Phi1;
  const bool outer_phi2 = outer_class == PhaseClass::Phi2;
  const bool inner_phi2 = inner_class == PhaseClass::Phi2;

  RegionFlags f;
  f.guarded = {outer_phi1, outer_phi1, true, outer_phi1 && inner_phi2, outer_phi2};
  // (a) max(|k2|,|k3|) >= min(|k|,|k1|)^{1/100}
  f.holds[0] = f.guarded[0] && k23 >= ceil_root100(low_outer);
  // (b) max(|k2|,|k3|) >= min(|j2|,|j3|)^{1/100}
  f.holds[1] = f.guarded[1] && k23 >= ceil_root100(std::min(j2, j3));
  // (c) |j1| >= min(|k|,|k1|)^{1+1/100}
  f.holds[2] = abs_freq(j.k1) >= ceil_pow101(low_outer);
  // (d) Lambda_j <= max(|k2|,|k3|)^{1/100}
  f.holds[3] = f.guarded[3] && j.Lambda() <= floor_root100(k23);
  // (e) Lambda_k >= max(|j2|,|j3|)^{1/100}
  f.holds[4] = f.guarded[4] && o.Lambda() >= ceil_root100(std::max(j2, j3));
  return f;
}

RegionFlags region_flags(const ModeQuintuple& q) {
  if (q.inner.k() != q.outer.k1) {
    throw ValidationError("inner triple must sum to the outer k1");
  }
  const PhaseClass outer_class = classify(q.outer);
  const PhaseClass inner_class = classify(q.inner);
  if (outer_class == PhaseClass::Resonant || inner_class == PhaseClass::Resonant) {
    throw ValidationError("region flags are defined for non-resonant triples only");
  }
  return region_flags_unchecked(q, outer_class, inner_class);
}

bool outer_may_be_all_primed(const ModeTriple& t, PhaseClass outer_class, Freq inner_bound) {
  const Freq low_outer = std::min(abs_freq(t.k()), abs_freq(t.k1));
  // (c') needs |j1| < ceil_pow101(min(|k|,|k1|)).
  if (ceil_pow101(low_outer) == 0) return false;
  const Freq best_inner = ceil_root100(inner_bound);
  if (outer_class == PhaseClass::Phi1) {
    const Freq k23 = std::max(abs_freq(t.k2), abs_freq(t.k3));
    return k23 < ceil_root100(low_outer) && k23 < best_inner;
  }
  if (outer_class == PhaseClass::Phi2) return t.Lambda() < best_inner;
  return false;
}

bool TripleFilter::accepts(const ModeTriple& t) const {
  const PhaseClass c = (nonresonant || phi1_only || phi2_only) ? classify(t) : PhaseClass::Resonant;
  if (nonresonant && c == PhaseClass::Resonant) return false;
  if (phi1_only && c != PhaseClass::Phi1) return false;
  if (phi2_only && c != PhaseClass::Phi2) return false;
  if (kstar_above >= 0 && t.kstar() <= kstar_above) return false;
  if (all_at_most >= 0 && t.kstar() > all_at_most) return false;
  if (custom && !custom(t)) return false;
  return true;
}

void for_each_triple(Freq k, Freq cutoff, const TripleFilter& filter,
                     const std::function<void(const ModeTriple&)>& fn) {
  if (abs_freq(k) > 3 * cutoff) return;
  for (Freq k1 = -cutoff; k1 <= cutoff; ++k1) {
    const Freq lo = std::max(-cutoff, k - k1 - cutoff);
    const Freq hi = std::min(cutoff, k - k1 + cutoff);
    for (Freq k2 = lo; k2 <= hi; ++k2) {
      const ModeTriple t{k1, k2, k - k1 - k2};
      if (filter.accepts(t)) fn(t);
    }
  }
}

std::vector<ModeTriple> enumerate_triples(Freq k, Freq cutoff, const TripleFilter& filter) {
  std::vector<ModeTriple> out;
  for_each_triple(k, cutoff, filter, [&](const ModeTriple& t) { out.push_back(t); });
  return out;
}

ResonanceSummary scan_triples(Freq cutoff,
                              const std::function<void(const ModeTriple&, PhaseClass)>& fn) {
  ResonanceSummary summary;
  for (Freq k1 = -cutoff; k1 <= cutoff; ++k1) {
    for (Freq k2 = -cutoff; k2 <= cutoff; ++k2) {
      for (Freq k3 = -cutoff; k3 <= cutoff; ++k3) {
        const ModeTriple t{k1, k2, k3};
        const PhaseClass c = classify(t);
        ++summary.total;
        switch (c) {
          case PhaseClass::Resonant:
            ++summary.resonant;
            break;
          case PhaseClass::Phi1:
            ++summary.phi1;
            break;
          case PhaseClass::Phi2:
            ++summary.phi2;
            break;
        }
        if (fn) fn(t, c);
      }
    }
  }
  return summary;
}

}  // namespace nfmkdv
