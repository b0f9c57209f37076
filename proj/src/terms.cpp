#include "nfmkdv/terms.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "nfmkdv/errors.hpp"
#include "nfmkdv/parallel.hpp"
#include "nfmkdv/resonance.hpp"

namespace nfmkdv {

void TermConfig::validate() const {
  if (K < 0) throw ValidationError("K must be nonnegative");
  if (n < 0) throw ValidationError("n must be nonnegative");
  if (sigma != 1 && sigma != -1) throw ValidationError("sigma must be +1 or -1");
}

namespace {

constexpr Complex kI{0.0, 1.0};

// a_m e^{-i t m^3}: with these inputs the phase of every term is e^{itk^3}
// times the product of the input phases, which equals e^{it Phi}.
class Twisted {
 public:
  Twisted(const SpectralState& v, double t) : cutoff_(v.cutoff()), data_(v.coefficients().size()) {
    for (int m = -cutoff_; m <= cutoff_; ++m) {
      const double m3 = static_cast<double>(m) * m * m;
      data_[static_cast<std::size_t>(m + cutoff_)] = unit_phase(-m3 * t) * v[m];
    }
  }
  const Complex& operator[](Freq m) const { return data_[static_cast<std::size_t>(m + cutoff_)]; }

 private:
  int cutoff_;
  std::vector<Complex> data_;
};

Complex output_phase(int k, double t) {
  const double k3 = static_cast<double>(k) * k * k;
  return unit_phase(k3 * t);
}

void require_shape(const SpectralState& v, const TermConfig& cfg, const char* what) {
  if (v.cutoff() != cfg.K) {
    throw ValidationError(std::string(what) + " has cutoff " + std::to_string(v.cutoff()) +
                          ", expected " + std::to_string(cfg.K));
  }
}

bool admits(Restriction r, Freq n, Freq k1, Freq k2, Freq k3) {
  if (r == Restriction::None) return true;
  const Freq ks = std::max({abs_freq(k1), abs_freq(k2), abs_freq(k3)});
  return r == Restriction::LowOnly ? ks <= n : ks > n;
}

// out_k = e^{itk^3} sum over non-resonant (k1, k2, k3 = k - k1 - k2) of
// body(k, k1, k2, k3, Phi).
template <class Body>
SpectralState trilinear(int K, double t, Body&& body) {
  SpectralState out(K, t);
  parallel_for(-K, K + 1, [&](int k) {
    Complex acc{};
    for (Freq k1 = -K; k1 <= K; ++k1) {
      const Freq lo = std::max<Freq>(-K, k - k1 - K);
      const Freq hi = std::min<Freq>(K, k - k1 + K);
      for (Freq k2 = lo; k2 <= hi; ++k2) {
        const Freq k3 = k - k1 - k2;
        const Freq p = phi(k1, k2, k3);
        if (p == 0) continue;
        acc += body(static_cast<Freq>(k), k1, k2, k3, p);
      }
    }
    out[k] = output_phase(k, t) * acc;
  });
  return out;
}

enum class Region { All, Good, Remaining };

struct Outer {
  Freq k, k1, k2, k3, phase;
};
struct Inner {
  Freq j1, j2, j3, phase;
};

// out_k = e^{itk^3} sum over non-resonant outer triples with kstar > n and
// non-resonant inner triples j1 + j2 + j3 = k1 (all inside the cutoff),
// restricted to the requested part of the region partition.
template <class Body>
SpectralState quintilinear(int K, int n, double t, Region region, Body&& body) {
  if (K > kMaxQuinticCutoff) {
    throw ValidationError("quintilinear operators are capped at K <= " +
                          std::to_string(kMaxQuinticCutoff));
  }
  SpectralState out(K, t);
  parallel_for(-K, K + 1, [&](int k) {
    Complex acc{};
    for (Freq k1 = -K; k1 <= K; ++k1) {
      const Freq lo = std::max<Freq>(-K, k - k1 - K);
      const Freq hi = std::min<Freq>(K, k - k1 + K);
      for (Freq k2 = lo; k2 <= hi; ++k2) {
        const ModeTriple o{k1, k2, k - k1 - k2};
        const Freq pk = o.phase();
        if (pk == 0 || o.kstar() <= n) continue;
        const PhaseClass outer_class = classify(o);
        if (region == Region::Remaining && !outer_may_be_all_primed(o, outer_class, K)) continue;
        const Outer outer{k, k1, k2, o.k3, pk};
        for (Freq j1 = -K; j1 <= K; ++j1) {
          const Freq jlo = std::max<Freq>(-K, k1 - j1 - K);
          const Freq jhi = std::min<Freq>(K, k1 - j1 + K);
          for (Freq j2 = jlo; j2 <= jhi; ++j2) {
            const ModeTriple in{j1, j2, k1 - j1 - j2};
            const Freq pj = in.phase();
            if (pj == 0) continue;
            if (region != Region::All) {
              const bool good =
                  region_flags_unchecked({o, in}, outer_class, classify(in)).any();
              if (good != (region == Region::Good)) continue;
            }
            acc += body(outer, Inner{j1, j2, in.k3, pj});
          }
        }
      }
    }
    out[k] = output_phase(k, t) * acc;
  });
  return out;
}

double as_double(Freq x) { return static_cast<double>(x); }

}  // namespace

SpectralState R_term(const SpectralState& v, const TermConfig& cfg) {
  cfg.validate();
  require_shape(v, cfg, "v");
  SpectralState out(cfg.K, cfg.t);
  for (int k = -cfg.K; k <= cfg.K; ++k) {
    out[k] = -kI * static_cast<double>(cfg.sigma * k) * std::norm(v[k]) * v[k];
  }
  return out;
}

SpectralState N_term(const SpectralState& v, const TermConfig& cfg, Restriction r) {
  cfg.validate();
  require_shape(v, cfg, "v");
  const Twisted tv(v, cfg.t);
  const Complex pre = static_cast<double>(cfg.sigma) * kI / 3.0;
  return trilinear(cfg.K, cfg.t, [&](Freq k, Freq k1, Freq k2, Freq k3, Freq) -> Complex {
    if (!admits(r, cfg.n, k1, k2, k3)) return {};
    return pre * as_double(k) * tv[k1] * tv[k2] * tv[k3];
  });
}

SpectralState N_low(const SpectralState& v, const TermConfig& cfg) {
  return N_term(v, cfg, Restriction::LowOnly);
}

SpectralState N_high(const SpectralState& v, const TermConfig& cfg) {
  return N_term(v, cfg, Restriction::HighOnly);
}

SpectralState N1_term(const SpectralState& v, const TermConfig& cfg, Restriction r) {
  cfg.validate();
  require_shape(v, cfg, "v");
  const Twisted tv(v, cfg.t);
  // (i/3) k / (i Phi) = k / (3 Phi)
  const double pre = cfg.sigma / 3.0;
  return trilinear(cfg.K, cfg.t, [&](Freq k, Freq k1, Freq k2, Freq k3, Freq p) -> Complex {
    if (!admits(r, cfg.n, k1, k2, k3)) return {};
    return pre * as_double(k) / as_double(p) * tv[k1] * tv[k2] * tv[k3];
  });
}

SpectralState N1_dot(const SpectralState& v, const SpectralState& w, const TermConfig& cfg,
                     Restriction r) {
  cfg.validate();
  require_shape(v, cfg, "v");
  require_shape(w, cfg, "w");
  const Twisted tv(v, cfg.t);
  const Twisted tw(w, cfg.t);
  const Complex pre = static_cast<double>(cfg.sigma) * kI / 3.0;
  return trilinear(cfg.K, cfg.t, [&](Freq k, Freq k1, Freq k2, Freq k3, Freq p) -> Complex {
    if (!admits(r, cfg.n, k1, k2, k3)) return {};
    const Complex product = tv[k1] * tv[k2] * tv[k3];
    const Complex leibniz =
        tw[k1] * tv[k2] * tv[k3] + tv[k1] * tw[k2] * tv[k3] + tv[k1] * tv[k2] * tw[k3];
    return pre * as_double(k) * (product + leibniz / (kI * as_double(p)));
  });
}

SpectralState N2_term(const SpectralState& v, const SpectralState& w, const TermConfig& cfg,
                      Restriction r) {
  cfg.validate();
  require_shape(v, cfg, "v");
  require_shape(w, cfg, "w");
  const Twisted tv(v, cfg.t);
  const Twisted tw(w, cfg.t);
  // -(i/3) k / (i Phi) = -k / (3 Phi)
  const double pre = -cfg.sigma / 3.0;
  return trilinear(cfg.K, cfg.t, [&](Freq k, Freq k1, Freq k2, Freq k3, Freq p) -> Complex {
    if (!admits(r, cfg.n, k1, k2, k3)) return {};
    const Complex leibniz =
        tw[k1] * tv[k2] * tv[k3] + tv[k1] * tw[k2] * tv[k3] + tv[k1] * tv[k2] * tw[k3];
    return pre * as_double(k) / as_double(p) * leibniz;
  });
}

SpectralState N21_term(const SpectralState& v, const TermConfig& cfg) {
  cfg.validate();
  require_shape(v, cfg, "v");
  const Twisted tv(v, cfg.t);
  // -k k1 / (i Phi) = i k k1 / Phi
  return trilinear(cfg.K, cfg.t, [&](Freq k, Freq k1, Freq k2, Freq k3, Freq p) -> Complex {
    if (!admits(Restriction::HighOnly, cfg.n, k1, k2, k3)) return {};
    return kI * (as_double(k) * as_double(k1) / as_double(p)) * std::norm(v[static_cast<int>(k1)]) *
           tv[k1] * tv[k2] * tv[k3];
  });
}

namespace {

// (1/3) k k1 / (i Phi_k) = -(i/3) k k1 / Phi_k
SpectralState n22_family(const SpectralState& v, const TermConfig& cfg, Region region) {
  cfg.validate();
  require_shape(v, cfg, "v");
  const Twisted tv(v, cfg.t);
  const Complex pre = -kI / 3.0;
  return quintilinear(cfg.K, cfg.n, cfg.t, region, [&](const Outer& o, const Inner& j) -> Complex {
    return pre * (as_double(o.k) * as_double(o.k1) / as_double(o.phase)) * tv[j.j1] * tv[j.j2] *
           tv[j.j3] * tv[o.k2] * tv[o.k3];
  });
}

}  // namespace

SpectralState N22_term(const SpectralState& v, const TermConfig& cfg) {
  return n22_family(v, cfg, Region::All);
}

SpectralState N221_term(const SpectralState& v, const TermConfig& cfg) {
  return n22_family(v, cfg, Region::Good);
}

SpectralState N222_term(const SpectralState& v, const TermConfig& cfg) {
  return n22_family(v, cfg, Region::Remaining);
}

SpectralState N3_term(const SpectralState& v, const SpectralState& w, const TermConfig& cfg) {
  cfg.validate();
  require_shape(v, cfg, "v");
  require_shape(w, cfg, "w");
  const Twisted tv(v, cfg.t);
  const Twisted tw(w, cfg.t);
  // (1/3) k k1 / (i Phi_k) [P_j + L_j(w) / (i Phi_j)] v_k2 v_k3
  const Complex pre = -kI / 3.0;
  return quintilinear(cfg.K, cfg.n, cfg.t, Region::Remaining,
                      [&](const Outer& o, const Inner& j) -> Complex {
                        const Complex pj = tv[j.j1] * tv[j.j2] * tv[j.j3];
                        const Complex lj = tw[j.j1] * tv[j.j2] * tv[j.j3] +
                                           tv[j.j1] * tw[j.j2] * tv[j.j3] +
                                           tv[j.j1] * tv[j.j2] * tw[j.j3];
                        return pre * (as_double(o.k) * as_double(o.k1) / as_double(o.phase)) *
                               (pj - kI * lj / as_double(j.phase)) * tv[o.k2] * tv[o.k3];
                      });
}

SpectralState N4_term(const SpectralState& v, const SpectralState& w, const TermConfig& cfg) {
  cfg.validate();
  require_shape(v, cfg, "v");
  require_shape(w, cfg, "w");
  const Twisted tv(v, cfg.t);
  const Twisted tw(w, cfg.t);
  // -i k e/(i Phi_k) (N2)_{k1} v_k2 v_k3 = (1/3) k k1 / (Phi_k Phi_j) L_j(w) v_k2 v_k3
  return quintilinear(cfg.K, cfg.n, cfg.t, Region::Remaining,
                      [&](const Outer& o, const Inner& j) -> Complex {
                        const Complex lj = tw[j.j1] * tv[j.j2] * tv[j.j3] +
                                           tv[j.j1] * tw[j.j2] * tv[j.j3] +
                                           tv[j.j1] * tv[j.j2] * tw[j.j3];
                        return (as_double(o.k) * as_double(o.k1) /
                                (3.0 * as_double(o.phase) * as_double(j.phase))) *
                               lj * tv[o.k2] * tv[o.k3];
                      });
}

SpectralState N5_term(const SpectralState& v, const TermConfig& cfg) {
  cfg.validate();
  require_shape(v, cfg, "v");
  const Twisted tv(v, cfg.t);
  // -(1/3) k k1 / (i Phi_j) = (i/3) k k1 / Phi_j
  const Complex pre = kI / 3.0;
  return quintilinear(cfg.K, cfg.n, cfg.t, Region::Remaining,
                      [&](const Outer& o, const Inner& j) -> Complex {
                        return pre * (as_double(o.k) * as_double(o.k1) / as_double(j.phase)) *
                               tv[j.j1] * tv[j.j2] * tv[j.j3] * tv[o.k2] * tv[o.k3];
                      });
}

SpectralState N6_term(const SpectralState& v, const SpectralState& w, const TermConfig& cfg) {
  cfg.validate();
  require_shape(v, cfg, "v");
  require_shape(w, cfg, "w");
  const Twisted tv(v, cfg.t);
  const Twisted tw(w, cfg.t);
  return quintilinear(cfg.K, cfg.n, cfg.t, Region::Remaining,
                      [&](const Outer& o, const Inner& j) -> Complex {
                        return (as_double(o.k) * as_double(o.k1) /
                                (3.0 * as_double(o.phase) * as_double(j.phase))) *
                               tv[j.j1] * tv[j.j2] * tv[j.j3] *
                               (tw[o.k2] * tv[o.k3] + tv[o.k2] * tw[o.k3]);
                      });
}

SpectralState N7_term(const SpectralState& v, const TermConfig& cfg) {
  cfg.validate();
  require_shape(v, cfg, "v");
  const Twisted tv(v, cfg.t);
  return quintilinear(cfg.K, cfg.n, cfg.t, Region::Remaining,
                      [&](const Outer& o, const Inner& j) -> Complex {
                        return -(as_double(o.k) * as_double(o.k1) /
                                 (3.0 * as_double(o.phase) * as_double(j.phase))) *
                               tv[j.j1] * tv[j.j2] * tv[j.j3] * tv[o.k2] * tv[o.k3];
                      });
}

SpectralState rhs(const SpectralState& v, const TermConfig& cfg) {
  SpectralState out = N_term(v, cfg);
  out += R_term(v, cfg);
  return out;
}

long long count_remaining_region(int K, int n) {
  long long count = 0;
  for (Freq k = -K; k <= K; ++k) {
    for (Freq k1 = -K; k1 <= K; ++k1) {
      for (Freq k2 = std::max<Freq>(-K, k - k1 - K); k2 <= std::min<Freq>(K, k - k1 + K); ++k2) {
        const ModeTriple o{k1, k2, k - k1 - k2};
        if (o.phase() == 0 || o.kstar() <= n) continue;
        const PhaseClass oc = classify(o);
        if (!outer_may_be_all_primed(o, oc, K)) continue;
        for (Freq j1 = -K; j1 <= K; ++j1) {
          for (Freq j2 = std::max<Freq>(-K, k1 - j1 - K); j2 <= std::min<Freq>(K, k1 - j1 + K);
               ++j2) {
            const ModeTriple in{j1, j2, k1 - j1 - j2};
            if (in.phase() == 0) continue;
            if (region_flags_unchecked({o, in}, oc, classify(in)).all_primed()) ++count;
          }
        }
      }
    }
  }
  return count;
}

bool term_needs_w(std::string_view name) {
  return name == "N1_dot" || name == "N2" || name == "N2_high" || name == "N3" || name == "N4" ||
         name == "N6";
}

SpectralState evaluate_term(std::string_view name, const SpectralState& v, const SpectralState* w,
                            const TermConfig& cfg) {
  SpectralState w_default;
  if (term_needs_w(name) && w == nullptr) {
    w_default = rhs(v, cfg);
    w = &w_default;
  }
  if (name == "R") return R_term(v, cfg);
  if (name == "N") return N_term(v, cfg);
  if (name == "N_low") return N_low(v, cfg);
  if (name == "N_high") return N_high(v, cfg);
  if (name == "N1") return N1_term(v, cfg);
  if (name == "N1_high") return N1_term(v, cfg, Restriction::HighOnly);
  if (name == "N1_dot") return N1_dot(v, *w, cfg);
  if (name == "N2") return N2_term(v, *w, cfg);
  if (name == "N2_high") return N2_term(v, *w, cfg, Restriction::HighOnly);
  if (name == "N21") return N21_term(v, cfg);
  if (name == "N22") return N22_term(v, cfg);
  if (name == "N221") return N221_term(v, cfg);
  if (name == "N222") return N222_term(v, cfg);
  if (name == "N3") return N3_term(v, *w, cfg);
  if (name == "N4") return N4_term(v, *w, cfg);
  if (name == "N5") return N5_term(v, cfg);
  if (name == "N6") return N6_term(v, *w, cfg);
  if (name == "N7") return N7_term(v, cfg);
  if (name == "rhs") return rhs(v, cfg);
  throw ValidationError("unknown term '" + std::string(name) + "'");
}

}  // namespace nfmkdv
