#include "nfmkdv/estimate_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include "nfmkdv/errors.hpp"
#include "nfmkdv/io.hpp"
#include "nfmkdv/parallel.hpp"
#include "nfmkdv/resonance.hpp"
#include "nfmkdv/terms.hpp"

namespace nfmkdv {

namespace {

struct LemmaInfo {
  LemmaId id;
  const char* name;
  int degree;
  bool lipschitz;
};

constexpr std::array<LemmaInfo, 15> kLemmas = {{
    {LemmaId::R1, "R1", 3, false},      {LemmaId::R2, "R2", 3, true},
    {LemmaId::N11, "N11", 3, false},    {LemmaId::N12, "N12", 3, true},
    {LemmaId::N21, "N21", 5, false},    {LemmaId::N22lip, "N22lip", 5, true},
    {LemmaId::N31, "N31", 3, false},    {LemmaId::N32, "N32", 3, true},
    {LemmaId::H21, "H21", 3, false},    {LemmaId::H11, "H11", 5, false},
    {LemmaId::O111, "O111", 5, false},  {LemmaId::O221, "O221", 7, false},
    {LemmaId::O31, "O31", 5, false},    {LemmaId::O41, "O41", 7, false},
    {LemmaId::O51, "O51", 5, false},
}};

const LemmaInfo& info(LemmaId id) {
  for (const auto& l : kLemmas) {
    if (l.id == id) return l;
  }
  throw ValidationError("unknown lemma id");
}

bool uses_quintic_operator(LemmaId id) {
  return id == LemmaId::O111 || id == LemmaId::O221 || id == LemmaId::O31 || id == LemmaId::O41 ||
         id == LemmaId::O51;
}

}  // namespace

std::string to_string(LemmaId id) { return info(id).name; }

LemmaId parse_lemma_id(const std::string& name) {
  for (const auto& l : kLemmas) {
    if (name == l.name) return l.id;
  }
  throw ValidationError("unknown lemma id '" + name + "'");
}

int lemma_degree(LemmaId id) { return info(id).degree; }
bool lemma_is_lipschitz(LemmaId id) { return info(id).lipschitz; }

void LemmaCheckSpec::validate() const {
  const std::string name = to_string(id);
  auto fail = [&](const std::string& why) { throw ValidationError(name + ": " + why); };
  if (K < 1) fail("K must be at least 1");
  if (ensemble < 1) fail("ensemble size must be at least 1");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) fail("amplitude must be positive");
  if (!std::isfinite(s) || s < 0.0) fail("s must be a nonnegative number");
  if (n < 0 || n > K) fail("n must satisfy 0 <= n <= K");
  if (uses_quintic_operator(id) && K > kMaxQuinticCutoff) {
    fail("quintic operators need K <= " + std::to_string(kMaxQuinticCutoff));
  }
  switch (id) {
    case LemmaId::R1:
      break;
    case LemmaId::R2:
      if (s < 0.5) fail("requires s >= 1/2");
      break;
    case LemmaId::N11:
    case LemmaId::N12:
      if (s < 0.5) fail("requires s >= 1/2");
      if (n < 1) fail("requires n >= 1");
      break;
    case LemmaId::N21:
    case LemmaId::N22lip:
      if (s <= 0.5) fail("requires s > 1/2");
      break;
    case LemmaId::N31:
    case LemmaId::N32:
      if (s <= 0.0) fail("requires s > 0");
      if (n < 1) fail("requires n >= 1");
      break;
    case LemmaId::H21:
      if (!(epsilon > 0.0)) fail("requires epsilon > 0");
      break;
    case LemmaId::H11:
      if (s >= 0.5) fail("requires s < 1/2");
      break;
    case LemmaId::O111:
      break;
    case LemmaId::O221:
    case LemmaId::O31:
    case LemmaId::O41:
    case LemmaId::O51:
      if (std::abs(s - 0.5) > 1e-12) fail("is an H^{1/2} estimate; set s = 0.5");
      break;
  }
}

namespace {

struct RatioParts {
  double lhs = 0.0;
  double rhs = 0.0;
};

RatioParts evaluate(const LemmaCheckSpec& spec, const SpectralState& v, const SpectralState& w) {
  const double s = spec.s;
  const TermConfig cfg{spec.K, spec.n, 1, 0.0};
  auto hs = [&](const SpectralState& x) { return sobolev_norm(x, s); };
  auto half = [](const SpectralState& x) { return sobolev_norm(x, 0.5); };
  auto lipschitz = [&](const SpectralState& a, const SpectralState& b, int power) {
    return RatioParts{hs(a - b), std::pow(hs(v) + hs(w), power) * hs(v - w)};
  };
  switch (spec.id) {
    case LemmaId::R1:
      return {hs(R_term(v, cfg)), std::pow(half(v), 2) * hs(v)};
    case LemmaId::R2:
      return lipschitz(R_term(v, cfg), R_term(w, cfg), 2);
    case LemmaId::N11:
      return {hs(N_low(v, cfg)), std::pow(hs(v), 3)};
    case LemmaId::N12:
      return lipschitz(N_low(v, cfg), N_low(w, cfg), 2);
    case LemmaId::N21:
      return {hs(N2_term(v, rhs(v, cfg), cfg, Restriction::HighOnly)), std::pow(hs(v), 5)};
    case LemmaId::N22lip:
      return lipschitz(N2_term(v, rhs(v, cfg), cfg, Restriction::HighOnly),
                       N2_term(w, rhs(w, cfg), cfg, Restriction::HighOnly), 4);
    case LemmaId::N31:
      return {hs(N1_term(v, cfg, Restriction::HighOnly)), std::pow(hs(v), 3)};
    case LemmaId::N32:
      return lipschitz(N1_term(v, cfg, Restriction::HighOnly), N1_term(w, cfg, Restriction::HighOnly), 2);
    case LemmaId::H21:
      return {sobolev_norm(rhs(v, cfg), -0.5 - spec.epsilon), std::pow(half(v), 3)};
    case LemmaId::H11:
      return {hs(N2_term(v, rhs(v, cfg), cfg)), std::pow(half(v), 5)};
    case LemmaId::O111:
      return {hs(N221_term(v, cfg)), std::pow(hs(v), 5)};
    case LemmaId::O221:
      return {half(N4_term(v, rhs(v, cfg), cfg)), std::pow(half(v), 7)};
    case LemmaId::O31:
      return {half(N5_term(v, cfg)), std::pow(half(v), 5)};
    case LemmaId::O41:
      return {half(N6_term(v, rhs(v, cfg), cfg)), std::pow(half(v), 7)};
    case LemmaId::O51:
      return {half(N7_term(v, cfg)), std::pow(half(v), 5)};
  }
  return {};
}

double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Json spec_json(const LemmaCheckSpec& spec) {
  return Json{{"lemma", to_string(spec.id)}, {"s", spec.s},           {"K", spec.K},
              {"n", spec.n},                 {"ensemble", spec.ensemble}, {"amplitude", spec.amplitude},
              {"seed", spec.seed},           {"epsilon", spec.epsilon}};
}

}  // namespace

SpectralState adversarial_state(int K, double s, double amplitude) {
  SpectralState v(K);
  const int mid = std::max(3, static_cast<int>(std::lround(std::sqrt(static_cast<double>(K)))));
  const std::set<int> modes = {1, 2, mid, mid + 1, K - 1, K};
  for (int m : modes) {
    if (m < 1 || m > K) continue;
    v[m] = v[-m] = amplitude * std::pow(weight(m), -s - 0.5);
  }
  return v;
}

EstimateReport lemma_ratio(const LemmaCheckSpec& spec) {
  spec.validate();
  EstimateReport report;
  report.lemma = to_string(spec.id);
  report.s = spec.s;
  report.K = spec.K;
  report.n = spec.n;
  report.seed = spec.seed;
  report.config_hash = config_hash(spec_json(spec));

  const bool lip = lemma_is_lipschitz(spec.id);
  std::vector<RatioParts> parts(static_cast<std::size_t>(spec.ensemble));
  parallel_for(0, spec.ensemble, [&](int i) {
    const SpectralState v = random_state(spec.K, spec.s, spec.amplitude, member_seed(spec.seed, i));
    const SpectralState w =
        lip ? random_state(spec.K, spec.s, spec.amplitude, member_seed(spec.seed + 1, i)) : SpectralState(spec.K);
    parts[static_cast<std::size_t>(i)] = evaluate(spec, v, w);
  });
  auto ratio_of = [&](const RatioParts& p) {
    if (!std::isfinite(p.lhs) || !std::isfinite(p.rhs)) throw NumericalError(report.lemma + ": non-finite norm");
    if (p.rhs == 0.0) {
      ++report.zero_guarded;
      return 0.0;
    }
    return p.lhs / p.rhs;
  };
  for (const auto& p : parts) report.ratios.push_back(ratio_of(p));

  if (spec.id == LemmaId::N21 || spec.id == LemmaId::N22lip) {
    const SpectralState a = adversarial_state(spec.K, spec.s, spec.amplitude);
    SpectralState b = a;
    b *= Complex(0.5, 0.0);  // Lipschitz partner along the same pattern
    const RatioParts p = evaluate(spec, a, b);
    report.has_adversarial = true;
    report.adversarial_ratio = p.rhs == 0.0 ? 0.0 : p.lhs / p.rhs;
  }

  std::vector<double> sorted = report.ratios;
  std::sort(sorted.begin(), sorted.end());
  report.max = sorted.back();
  report.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  report.q50 = quantile(sorted, 0.5);
  report.q90 = quantile(sorted, 0.9);
  report.q99 = quantile(sorted, 0.99);
  return report;
}

std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit needs at least two points");
  const auto m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw NumericalError("degenerate fit: nonpositive value");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw NumericalError("degenerate fit: repeated abscissae");
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  return {slope, std::exp(intercept)};
}

EstimateReport n_sweep(const LemmaCheckSpec& base, const std::vector<int>& n_list) {
  if (n_list.size() < 3) throw ValidationError("an n sweep needs at least three n values");
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw ValidationError("n values must be strictly ascending");
  }
  EstimateReport report;
  std::vector<double> xs, ys;
  for (int n : n_list) {
    LemmaCheckSpec spec = base;
    spec.n = n;
    const EstimateReport r = lemma_ratio(spec);
    report.sweep.emplace_back(n, r.max);
    report.zero_guarded += r.zero_guarded;
    xs.push_back(n);
    ys.push_back(r.max);
  }
  if (std::all_of(ys.begin(), ys.end(), [](double y) { return y == 0.0; })) {
    throw NumericalError("degenerate fit: every sup ratio vanishes");
  }
  const auto [slope, C] = loglog_fit(xs, ys);
  report.lemma = to_string(base.id);
  report.s = base.s;
  report.K = base.K;
  report.n = n_list.back();
  report.seed = base.seed;
  Json j = spec_json(base);
  j["n_list"] = n_list;
  report.config_hash = config_hash(j);
  report.ratios = ys;
  report.max = *std::max_element(ys.begin(), ys.end());
  report.mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  report.has_fit = true;
  report.slope = slope;
  report.fitted_C = C;
  return report;
}

EstimateReport n_decay_study(const LemmaCheckSpec& base, const std::vector<int>& n_list) {
  if (base.id != LemmaId::N31 && base.id != LemmaId::O51) {
    throw ValidationError("n decay studies apply to N31 and O51 only");
  }
  if (!n_list.empty() && 2 * n_list.back() > base.K) throw ValidationError("max(n) must not exceed K/2");
  return n_sweep(base, n_list);
}

// ---------------------------------------------------------------------------
// Multiplier suprema

std::string to_string(MultiplierRegion r) {
  switch (r) {
    case MultiplierRegion::All:
      return "all";
    case MultiplierRegion::Good:
      return "good";
    case MultiplierRegion::Remaining:
      return "remaining";
    case MultiplierRegion::Phi1:
      return "phi1";
    case MultiplierRegion::Phi2:
      return "phi2";
    case MultiplierRegion::EndpointBad:
      return "endpoint-bad";
  }
  return "?";
}

MultiplierRegion parse_multiplier_region(const std::string& name) {
  for (auto r : {MultiplierRegion::All, MultiplierRegion::Good, MultiplierRegion::Remaining, MultiplierRegion::Phi1,
                 MultiplierRegion::Phi2, MultiplierRegion::EndpointBad}) {
    if (to_string(r) == name) return r;
  }
  throw ValidationError("unknown multiplier region '" + name + "'");
}

namespace {
bool quintic_index(int i) { return i == 2 || i == 5 || i == 6; }
constexpr int kMaxMultiplierCutoff = 64;
}  // namespace

MultiplierRegion MultiplierSpec::effective_region() const {
  if (region_set) return region;
  return (index == 5 || index == 6) ? MultiplierRegion::Remaining : MultiplierRegion::All;
}

void MultiplierSpec::validate() const {
  if (index < 1 || index > 6) throw ValidationError("multiplier index must be in 1..6");
  if (K < 1) throw ValidationError("K must be at least 1");
  if (n < 0) throw ValidationError("n must be nonnegative");
  if (!std::isfinite(s) || s < 0.0 || s > 2.0) throw ValidationError("s must lie in [0, 2]");
  if (!(epsilon > 0.0) || epsilon > 0.5) throw ValidationError("epsilon must lie in (0, 1/2]");
  const MultiplierRegion r = effective_region();
  const bool quintic_region =
      r == MultiplierRegion::Good || r == MultiplierRegion::Remaining || r == MultiplierRegion::EndpointBad;
  if (quintic_region && !quintic_index(index)) {
    throw ValidationError("region '" + to_string(r) + "' applies to quintic multipliers (2, 5, 6) only");
  }
  if (K > kMaxMultiplierCutoff) throw ValidationError("multiplier sums accept K <= 64");
  if ((r == MultiplierRegion::Good || r == MultiplierRegion::Remaining) && K > kMaxQuinticCutoff) {
    throw ValidationError("region-partitioned quintic sums need K <= " + std::to_string(kMaxQuinticCutoff));
  }
}

double multiplier_value(int index, double s, double eps, long k1, long k2, long k3, long j1, long j2, long j3) {
  const double k = std::abs(static_cast<double>(k1 + k2 + k3));
  const double a1 = std::abs(static_cast<double>(k1)), a2 = std::abs(static_cast<double>(k2)),
               a3 = std::abs(static_cast<double>(k3));
  const double b1 = std::abs(static_cast<double>(j1)), b2 = std::abs(static_cast<double>(j2)),
               b3 = std::abs(static_cast<double>(j3));
  const double phk = std::abs(static_cast<double>(phi(k1, k2, k3)));
  const double phj = std::abs(static_cast<double>(phi(j1, j2, j3)));
  if (phk == 0.0) return 0.0;
  switch (index) {
    case 1:
      if (a1 == 0 || a2 == 0 || a3 == 0) return 0.0;
      return std::pow(k, 1 + s) * a1 / (phk * std::pow(a1, 3 * s) * std::pow(a2 * a3, s));
    case 2:
      if (b1 == 0 || b2 == 0 || b3 == 0 || a2 == 0 || a3 == 0 || phj == 0) return 0.0;
      return std::pow(k, 1 + s) * a1 / (phk * std::pow(b1 * b2 * b3 * a2 * a3, s));
    case 3:
      if (a1 == 0 || a2 == 0 || a3 == 0) return 0.0;
      return std::pow(k, 1 + s) / (phk * std::pow(a1 * a2 * a3, s));
    case 4:
      if (a2 == 0 || a3 == 0) return 0.0;
      return std::pow(k, 1.5) * std::sqrt(a1) / (phk * std::sqrt(a2 * a3));
    case 5:
      if (b1 == 0 || b2 == 0 || b3 == 0 || a2 == 0 || a3 == 0 || phj == 0) return 0.0;
      return std::pow(k, 1 + s) * a1 / (phj * std::pow(b1 * b2 * b3 * a2 * a3, s));
    case 6:
      if (b1 == 0 || b2 == 0 || b3 == 0 || a3 == 0 || phj == 0) return 0.0;
      return std::pow(k, 1.5) * a1 * std::pow(a2, 0.5 + eps) / (phk * phj * std::sqrt(b1 * b2 * b3 * a3));
  }
  throw ValidationError("multiplier index must be in 1..6");
}

namespace {

// |m|^p for 0 <= |m| <= size, p fixed.
class PowerTable {
 public:
  PowerTable(long size, double p) : values_(static_cast<std::size_t>(size + 1)) {
    for (long m = 0; m <= size; ++m) values_[static_cast<std::size_t>(m)] = std::pow(static_cast<double>(m), p);
  }
  double operator()(long m) const { return values_[static_cast<std::size_t>(m < 0 ? -m : m)]; }

 private:
  std::vector<double> values_;
};

bool outer_region_ok(MultiplierRegion r, const ModeTriple& t, PhaseClass c) {
  switch (r) {
    case MultiplierRegion::Phi1:
      return c == PhaseClass::Phi1;
    case MultiplierRegion::Phi2:
      return c == PhaseClass::Phi2;
    case MultiplierRegion::EndpointBad:
      return c == PhaseClass::Phi1 && abs_freq(t.b()) == t.lambda();
    default:
      return true;
  }
}

// M^2 split as outer(k1,k2,k3) * inner(k1; j1,j2,j3). A zero weight in a
// denominator is reported through the bool.
struct QuinticWeights {
  int index;
  double s, eps;
  PowerTable p2s, p1, p_one_plus_2e, p2, p2_plus_2s, p3;

  QuinticWeights(int i, double s_, double e, long size)
      : index(i), s(s_), eps(e), p2s(size, 2 * s_), p1(size, 1.0), p_one_plus_2e(size, 1 + 2 * e),
        p2(size, 2.0), p2_plus_2s(size, 2 + 2 * s_), p3(size, 3.0) {}

  // returns false when a denominator weight vanishes
  bool outer(const ModeTriple& t, double& value) const {
    const double phk = static_cast<double>(t.phase());
    const long k = t.k();
    switch (index) {
      case 2:
        if (t.k2 == 0 || t.k3 == 0) return false;
        value = p2_plus_2s(k) * p2(t.k1) / (phk * phk * p2s(t.k2) * p2s(t.k3));
        return true;
      case 5:
        if (t.k2 == 0 || t.k3 == 0) return false;
        value = p2_plus_2s(k) * p2(t.k1) / (p2s(t.k2) * p2s(t.k3));
        return true;
      default:
        if (t.k3 == 0) return false;
        value = p3(k) * p2(t.k1) * p_one_plus_2e(t.k2) / (phk * phk * p1(t.k3));
        return true;
    }
  }
  bool inner(const ModeTriple& j, double& value) const {
    if (j.k1 == 0 || j.k2 == 0 || j.k3 == 0) return false;
    const double phj = static_cast<double>(j.phase());
    switch (index) {
      case 2:
        value = 1.0 / (p2s(j.k1) * p2s(j.k2) * p2s(j.k3));
        return true;
      case 5:
        value = 1.0 / (phj * phj * p2s(j.k1) * p2s(j.k2) * p2s(j.k3));
        return true;
      default:
        value = 1.0 / (phj * phj * p1(j.k1) * p1(j.k2) * p1(j.k3));
        return true;
    }
  }
};

struct InnerSum {
  double sum = 0.0;
  long long admissible = 0;
  long long zero_weight = 0;
};

void add_profile(MultiplierResult& out, const std::vector<double>& profile, int K) {
  out.sup = 0.0;
  for (int k = -3 * K; k <= 3 * K; ++k) {
    const double value = profile[static_cast<std::size_t>(k + 3 * K)];
    out.profile.emplace_back(k, value);
    const double root = std::sqrt(value);
    if (root > out.sup) {
      out.sup = root;
      out.argmax_k = k;
    }
  }
}

MultiplierResult cubic_sup(const MultiplierSpec& spec) {
  const long K = spec.K;
  const MultiplierRegion region = spec.effective_region();
  const PowerTable ps(3 * K, spec.s), half(3 * K, 0.5), one_plus_s(3 * K, 1 + spec.s), three_s(3 * K, 3 * spec.s),
      three_halves(3 * K, 1.5);
  std::vector<double> profile(static_cast<std::size_t>(6 * K + 1), 0.0);
  std::vector<long long> tuples(profile.size(), 0), dropped(profile.size(), 0);
  parallel_for(static_cast<int>(-3 * K), static_cast<int>(3 * K + 1), [&](int k) {
    const auto slot = static_cast<std::size_t>(k + 3 * K);
    double acc = 0.0;
    for (long k1 = -K; k1 <= K; ++k1) {
      for (long k2 = std::max(-K, k - k1 - K); k2 <= std::min(K, k - k1 + K); ++k2) {
        const ModeTriple t{k1, k2, k - k1 - k2};
        const Freq p = t.phase();
        if (p == 0 || t.kstar() <= spec.n) continue;
        if (!outer_region_ok(region, t, classify(t))) continue;
        ++tuples[slot];
        const double phk = std::abs(static_cast<double>(p));
        double m = 0.0;
        switch (spec.index) {
          case 1:
            if (t.k1 == 0 || t.k2 == 0 || t.k3 == 0) {
              ++dropped[slot];
              continue;
            }
            m = one_plus_s(k) * static_cast<double>(abs_freq(k1)) / (phk * three_s(k1) * ps(t.k2) * ps(t.k3));
            break;
          case 3:
            if (t.k1 == 0 || t.k2 == 0 || t.k3 == 0) {
              ++dropped[slot];
              continue;
            }
            m = one_plus_s(k) / (phk * ps(t.k1) * ps(t.k2) * ps(t.k3));
            break;
          default:
            if (t.k2 == 0 || t.k3 == 0) {
              ++dropped[slot];
              continue;
            }
            m = three_halves(k) * half(k1) / (phk * half(t.k2) * half(t.k3));
            break;
        }
        acc += m * m;
      }
    }
    profile[slot] = acc;
  });
  MultiplierResult out;
  out.tuples = std::accumulate(tuples.begin(), tuples.end(), 0LL);
  out.dropped_zero_frequency = std::accumulate(dropped.begin(), dropped.end(), 0LL);
  add_profile(out, profile, spec.K);
  return out;
}

MultiplierResult quintic_sup(const MultiplierSpec& spec) {
  const long K = spec.K;
  const MultiplierRegion region = spec.effective_region();
  const QuinticWeights weights(spec.index, spec.s, spec.epsilon, 3 * K);
  const bool partitioned = region == MultiplierRegion::Good || region == MultiplierRegion::Remaining;
  const bool banded = region == MultiplierRegion::EndpointBad;

  // Inner sums over j1 + j2 + j3 = k1 that do not depend on k2, k3 (or only
  // through max(|k2|,|k3|) for the endpoint-bad band).
  const long bands = banded ? K + 1 : 1;
  std::vector<InnerSum> memo;
  if (!partitioned) {
    memo.resize(static_cast<std::size_t>((2 * K + 1) * bands));
    parallel_for(0, static_cast<int>((2 * K + 1) * bands), [&](int idx) {
      const long k1 = idx / bands - K;
      const long band = idx % bands;
      InnerSum acc;
      for (long j1 = -K; j1 <= K; ++j1) {
        for (long j2 = std::max(-K, k1 - j1 - K); j2 <= std::min(K, k1 - j1 + K); ++j2) {
          const ModeTriple j{j1, j2, k1 - j1 - j2};
          if (j.phase() == 0) continue;
          if (banded) {
            const Freq hi = std::max(abs_freq(j.k2), abs_freq(j.k3));
            const Freq lo = std::min(abs_freq(j.k2), abs_freq(j.k3));
            if (!(abs_freq(k1) > hi && lo > band)) continue;
          }
          ++acc.admissible;
          double w = 0.0;
          if (weights.inner(j, w)) {
            acc.sum += w;
          } else {
            ++acc.zero_weight;
          }
        }
      }
      memo[static_cast<std::size_t>(idx)] = acc;
    });
  }

  std::vector<double> profile(static_cast<std::size_t>(6 * K + 1), 0.0);
  std::vector<long long> tuples(profile.size(), 0), dropped(profile.size(), 0), vacuous(profile.size(), 0);
  parallel_for(static_cast<int>(-3 * K), static_cast<int>(3 * K + 1), [&](int k) {
    const auto slot = static_cast<std::size_t>(k + 3 * K);
    double acc = 0.0;
    for (long k1 = -K; k1 <= K; ++k1) {
      for (long k2 = std::max(-K, k - k1 - K); k2 <= std::min(K, k - k1 + K); ++k2) {
        const ModeTriple t{k1, k2, k - k1 - k2};
        if (t.phase() == 0 || t.kstar() <= spec.n) continue;
        const PhaseClass oc = classify(t);
        if (!outer_region_ok(region, t, oc)) continue;
        double ow = 0.0;
        const bool outer_ok = weights.outer(t, ow);
        if (!partitioned) {
          const long band = banded ? std::max(abs_freq(t.k2), abs_freq(t.k3)) : 0;
          const InnerSum& in = memo[static_cast<std::size_t>((k1 + K) * bands + band)];
          tuples[slot] += in.admissible;
          if (outer_ok) {
            dropped[slot] += in.zero_weight;
            acc += ow * in.sum;
          } else {
            dropped[slot] += in.admissible;
          }
          continue;
        }
        if (region == MultiplierRegion::Remaining && !outer_may_be_all_primed(t, oc, K)) continue;
        for (long j1 = -K; j1 <= K; ++j1) {
          for (long j2 = std::max(-K, k1 - j1 - K); j2 <= std::min(K, k1 - j1 + K); ++j2) {
            const ModeTriple j{j1, j2, k1 - j1 - j2};
            if (j.phase() == 0) continue;
            const RegionFlags flags = region_flags_unchecked({t, j}, oc, classify(j));
            if (flags.any() != (region == MultiplierRegion::Good)) continue;
            ++tuples[slot];
            if (flags.vacuous_count() > 0) ++vacuous[slot];
            double iw = 0.0;
            if (outer_ok && weights.inner(j, iw)) {
              acc += ow * iw;
            } else {
              ++dropped[slot];
            }
          }
        }
      }
    }
    profile[slot] = acc;
  });
  MultiplierResult out;
  out.tuples = std::accumulate(tuples.begin(), tuples.end(), 0LL);
  out.dropped_zero_frequency = std::accumulate(dropped.begin(), dropped.end(), 0LL);
  out.vacuously_decided = std::accumulate(vacuous.begin(), vacuous.end(), 0LL);
  add_profile(out, profile, spec.K);
  return out;
}

}  // namespace

MultiplierResult multiplier_sup(const MultiplierSpec& spec) {
  spec.validate();
  return quintic_index(spec.index) ? quintic_sup(spec) : cubic_sup(spec);
}

ObstructionReport endpoint_obstruction_study(const std::vector<int>& K_list, std::pair<double, double> s_pair) {
  if (K_list.empty()) throw ValidationError("K list must not be empty");
  if (!std::is_sorted(K_list.begin(), K_list.end())) throw ValidationError("K list must be ascending");
  ObstructionReport report;
  report.s_pair = s_pair;
  for (int K : K_list) {
    MultiplierSpec spec;
    spec.index = 2;
    spec.K = K;
    spec.region_set = true;
    spec.region = MultiplierRegion::EndpointBad;
    spec.s = s_pair.first;
    ObstructionRow row;
    row.K = K;
    row.m_low = multiplier_sup(spec).sup;
    spec.s = s_pair.second;
    row.m_high = multiplier_sup(spec).sup;
    report.rows.push_back(row);
  }
  const ObstructionRow& first = report.rows.front();
  const ObstructionRow& last = report.rows.back();
  if (first.m_low == 0.0 || first.m_high == 0.0) {
    report.vacuous = true;
    report.holds = true;
    return report;
  }
  report.growth_low = last.m_low / first.m_low;
  report.growth_high = last.m_high / first.m_high;
  report.holds = report.growth_low >= report.growth_high;
  return report;
}

double h2_dual_check(const SpectralState& v, double epsilon, int sigma) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  const double denom = std::pow(sobolev_norm(v, 0.5), 3);
  if (denom == 0.0) return 0.0;
  const TermConfig cfg{v.cutoff(), 0, sigma, v.time()};
  return sobolev_norm(rhs(v, cfg), -0.5 - epsilon) / denom;
}

}  // namespace nfmkdv
