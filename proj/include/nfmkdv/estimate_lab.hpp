#pragma once

// Numerical checks of the multilinear estimates.
//
// A lemma check samples states, evaluates LHS / RHS of the estimate with the
// implicit constant dropped and reports statistics. Nothing here proves a
// bound; the outputs are sup ratios and fitted exponents for fixed seeds.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nfmkdv/spectral_state.hpp"

namespace nfmkdv {

enum class LemmaId { R1, R2, N11, N12, N21, N22lip, N31, N32, H21, H11, O111, O221, O31, O41, O51 };

std::string to_string(LemmaId id);
LemmaId parse_lemma_id(const std::string& name);
// Polynomial degree of the estimated operator (homogeneity of both sides).
int lemma_degree(LemmaId id);
bool lemma_is_lipschitz(LemmaId id);

struct LemmaCheckSpec {
  LemmaId id = LemmaId::R1;
  double s = 0.5;
  int K = 32;
  int n = 0;
  int ensemble = 100;
  double amplitude = 1.0;
  std::uint64_t seed = 7;
  double epsilon = 0.01;  // H21 works in H^{-1/2-epsilon}

  // Throws ValidationError on lemma/parameter combinations outside the
  // lemma's hypotheses (e.g. N31 with n = 0, H11 with s >= 1/2).
  void validate() const;
};

struct EstimateReport {
  std::string lemma;
  double s = 0.0;
  int K = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::string config_hash;

  std::vector<double> ratios;  // one per ensemble member
  double max = 0.0;
  double mean = 0.0;
  double q50 = 0.0, q90 = 0.0, q99 = 0.0;
  int zero_guarded = 0;  // samples with vanishing RHS, ratio set to 0
  // Deterministic worst-case frequency pattern (N21 / N22lip only).
  bool has_adversarial = false;
  double adversarial_ratio = 0.0;

  // n sweeps: (n, sup ratio) pairs and the least-squares fit
  // log ratio = log C + slope log n.
  std::vector<std::pair<int, double>> sweep;
  bool has_fit = false;
  double slope = 0.0;
  double fitted_C = 0.0;
};

// Sample i is random_state(K, s, amplitude, member_seed(seed, i)); Lipschitz
// checks pair it with an independent sample drawn from member_seed(seed + 1, i).
EstimateReport lemma_ratio(const LemmaCheckSpec& spec);

// One lemma_ratio run per n in n_list (ascending, >= 3 values) plus the
// log-log fit over the sup ratios. Throws NumericalError when some sup ratio
// vanishes (degenerate fit).
EstimateReport n_sweep(const LemmaCheckSpec& base, const std::vector<int>& n_list);

// n_sweep restricted to the decay lemmas N31 and O51, with max(n_list) <= K/2.
EstimateReport n_decay_study(const LemmaCheckSpec& base, const std::vector<int>& n_list);

// Least-squares line through (log x, log y). Needs >= 2 points, all positive.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// Worst-case frequency pattern for the quintic term: modes near K
// (outer k1 / inner j1), near sqrt(K) (j2, j3) and at 1, 2 (k2, k3).
SpectralState adversarial_state(int K, double s, double amplitude);

enum class MultiplierRegion {
  All,          // every admissible tuple
  Good,         // quintic: at least one of (a)-(e)
  Remaining,    // quintic: all of (a')-(e')
  Phi1,         // outer triple in PHI1
  Phi2,         // outer triple in PHI2
  EndpointBad,  // quintic: outer PHI1, lambda = |k2+k3|,
                // |k1| > max(|j2|,|j3|) and min(|j2|,|j3|) > max(|k2|,|k3|)
};

std::string to_string(MultiplierRegion r);
MultiplierRegion parse_multiplier_region(const std::string& name);

struct MultiplierSpec {
  int index = 1;  // 1 ... 6
  double s = 0.5;
  int K = 16;
  int n = 0;  // outer kstar > n
  double epsilon = 0.01;
  // Default per index: All for 1-4, Remaining for 5 and 6.
  bool region_set = false;
  MultiplierRegion region = MultiplierRegion::All;

  MultiplierRegion effective_region() const;
  void validate() const;
};

struct MultiplierResult {
  double sup = 0.0;  // max_k (sum of M^2 over tuples with output k)^{1/2}
  int argmax_k = 0;
  std::vector<std::pair<int, double>> profile;  // (k, inner sum of M^2), |k| <= 3K
  long long tuples = 0;
  long long dropped_zero_frequency = 0;
  // good / remaining regions: tuples where some region condition was
  // decided by an inactive class guard
  long long vacuously_decided = 0;
};

// Exact finite sum; quintic indices (2, 5, 6) accept K <= 32.
MultiplierResult multiplier_sup(const MultiplierSpec& spec);

// Single-tuple value of M_index; zero when a weight in the denominator
// vanishes or the tuple is resonant. Inner frequencies are ignored for the
// cubic indices.
double multiplier_value(int index, double s, double epsilon, long k1, long k2, long k3, long j1 = 0,
                        long j2 = 0, long j3 = 0);

struct ObstructionRow {
  int K = 0;
  double m_low = 0.0;   // M_2 on the endpoint-bad region at s_pair.first
  double m_high = 0.0;  // ... at s_pair.second
};

struct ObstructionReport {
  std::pair<double, double> s_pair{0.5, 0.6};
  std::vector<ObstructionRow> rows;
  double growth_low = 1.0;   // m(K_max) / m(K_min) at s_pair.first
  double growth_high = 1.0;  // ... at s_pair.second
  bool vacuous = false;      // region empty at K_min
  bool holds = true;         // growth_low >= growth_high (true when vacuous)
};

ObstructionReport endpoint_obstruction_study(const std::vector<int>& K_list,
                                             std::pair<double, double> s_pair = {0.5, 0.6});

// ||N(v) + R(v)||_{H^{-1/2-epsilon}} / ||v||_{H^{1/2}}^3 at t = v.time(); zero
// for the zero state.
double h2_dual_check(const SpectralState& v, double epsilon, int sigma = 1);

}  // namespace nfmkdv
