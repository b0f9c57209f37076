#pragma once

// Time evolution of the truncated system.
//
// Three equations are in play:
//   (MKDV1)  u_t = u_xxx + sigma u^2 u_x
//   (MKDV2)  u_t = u_xxx + sigma (u^2 - M) u_x,   M = sum_k |u_k|^2 (conserved)
//   interaction form of (MKDV2): v_k = e^{ik^3 t} u_k, d/dt v = N(v) + R(v).
// A solution of (MKDV2) becomes one of (MKDV1) after the shift
// u(x, t) -> u(x + sigma M t, t).

#include <string>
#include <vector>

#include "nfmkdv/spectral_state.hpp"
#include "nfmkdv/terms.hpp"

namespace nfmkdv {

struct SolverConfig {
  int K = 16;
  double s = 0.5;        // regularity index of the C_t H^s norms
  int sigma = 1;
  double dt = 1e-4;      // RK4 step upper bound
  double T = 0.1;        // horizon
  int n = 0;             // splitting parameter of the Picard maps
  int grid_m = 11;       // stored samples, odd, >= 5
  int picard_max = 20;
  double tol = 1e-12;    // Picard increment tolerance in C_t H^s
  double C_cal = 1.0;    // constants of the parameter rule
  double alpha_cal = 0.5;

  void validate() const;
  TermConfig terms(double t) const { return TermConfig{K, n, sigma, t}; }
};

// States sampled at increasing times; every state carries its time tag.
struct Trajectory {
  std::vector<SpectralState> states;

  std::size_t size() const { return states.size(); }
  const SpectralState& front() const { return states.front(); }
  const SpectralState& back() const { return states.back(); }
  std::vector<double> times() const;
  // Grid spacing; throws ValidationError when the samples are not uniform.
  double spacing() const;
  // max over samples of ||v(t_i)||_{H^s}
  double sup_norm(double s) const;
};

// max_i ||a(t_i) - b(t_i)||_{H^s}; the grids must match.
double sup_distance(const Trajectory& a, const Trajectory& b, double s);

// Cumulative composite Simpson integral on a uniform grid with an odd number
// of nodes: out[i] approximates the integral from t_0 to t_i. Odd nodes take
// the one-interval third-order rule h/12 (5 f_{i-1} + 8 f_i - f_{i+1}).
std::vector<SpectralState> cumulative_simpson(const std::vector<SpectralState>& f, double h);

// Classical RK4 for d/dt v = rhs(v) on [v0.time(), v0.time() + T]. The
// step is the largest h <= dt that divides the sample spacing evenly.
Trajectory integrate_direct(const SpectralState& v0, const SolverConfig& cfg);

// Nonlinear part sigma (u^2 - M) u_x of (MKDV2), or sigma u^2 u_x of (MKDV1)
// when renormalized is false, evaluated by products on an alias-free grid of
// 2(2K+1) points.
SpectralState pseudospectral_nonlinearity(const SpectralState& u, int sigma, bool renormalized);

// Full right-hand side u_t of (MKDV2) in the u variables, including the
// dispersive part -ik^3 u_k.
SpectralState rhs_pseudospectral(const SpectralState& u, const SolverConfig& cfg);

// (MKDV1) by (MKDV2) plus the mass-dependent shift. u0 carries the initial
// time; output states are in the u variables.
Trajectory solve_mkdv1(const SpectralState& u0, const SolverConfig& cfg);

// (MKDV1) integrated directly: RK4 in the interaction variables with the
// un-renormalized nonlinearity from pseudospectral_nonlinearity. Output in
// the u variables.
Trajectory integrate_mkdv1_direct(const SpectralState& u0, const SolverConfig& cfg);

// Fixed-point maps. Both take the current iterate on the sample grid of
// cfg and return v0 + map(v, v0) on the same grid. Cubic boundary and
// integrand terms carry the restriction kstar > n (resp. all |ki| <= n for
// the low part). Time derivatives inside the maps are w = rhs(v).
//   F: v0 + N1h(v)(t) - N1h(v0) + int [R + N_low + N2h(v, w)]
//   G: v0 + N1h(v)(t) - N1h(v0) + N7(v)(t) - N7(v0)
//         + int [R + N_low + N21 + N221 + N4(v, w) + N5 + N6(v, w)]
enum class PicardMap { F, G };
std::string to_string(PicardMap m);
PicardMap parse_picard_map(const std::string& name);

Trajectory picard_F(const Trajectory& v, const SpectralState& v0, const SolverConfig& cfg);
Trajectory picard_G(const Trajectory& v, const SpectralState& v0, const SolverConfig& cfg);
Trajectory picard_apply(PicardMap which, const Trajectory& v, const SpectralState& v0,
                        const SolverConfig& cfg);

// Constant-in-time extension of v0 over the sample grid of cfg.
Trajectory constant_trajectory(const SpectralState& v0, const SolverConfig& cfg);

struct ConvergenceReport {
  PicardMap which = PicardMap::F;
  int iterations = 0;
  bool converged = false;
  // increments[m] = sup_t ||v^{m+1} - v^m||_{H^s}
  std::vector<double> increments;
  // Largest ratio of successive increments, ignoring increments at the
  // roundoff floor. Zero when fewer than two increments are above it.
  double contraction_factor = 0.0;
};

struct PicardResult {
  Trajectory trajectory;
  ConvergenceReport report;
};

PicardResult picard_solve(const SpectralState& v0, const SolverConfig& cfg, PicardMap which);

struct ParameterChoice {
  int n = 0;
  double T = 0.0;
  bool feasible = false;  // analytic rule satisfied at the cutoff
  bool measured = false;  // chosen by the contraction search
  double slack_n = 0.0;   // 1/4 - C n^{-alpha} (3R)^2
  double slack_T = 0.0;   // 1/4 - C n ln n T ((2R)^2 + (2R)^4)
  double contraction = 0.0;
  std::string note;
};

// Analytic rule: smallest power of two n <= K with C n^{-alpha} (3R)^2 < 1/4,
// then the largest T = cfg.T 2^{-j} with C n ln n T((2R)^2 + (2R)^4) < 1/4.
ParameterChoice select_parameters(double R, const SolverConfig& cfg);

// select_parameters with R = ||v0||_{H^s} + 1; when the rule is infeasible
// at cfg.K, keeps cfg.n and halves T until picard_solve(F) converges with
// measured contraction factor <= 1/2.
ParameterChoice choose_parameters(const SpectralState& v0, const SolverConfig& cfg);

struct ChainResult {
  Trajectory trajectory;
  std::vector<ParameterChoice> choices;
  std::vector<ConvergenceReport> reports;
  double max_junction_jump = 0.0;
};

// Consecutive picard_solve runs, parameters re-chosen from the state at the
// start of each interval, until total_T is covered. Throws NumericalError
// when an interval fails to converge.
ChainResult chain_intervals(const SpectralState& v0, const SolverConfig& cfg, double total_T,
                            PicardMap which = PicardMap::F);

}  // namespace nfmkdv
