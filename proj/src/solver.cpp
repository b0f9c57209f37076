#include "nfmkdv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "nfmkdv/errors.hpp"
#include "nfmkdv/parallel.hpp"

namespace nfmkdv {

void SolverConfig::validate() const {
  if (K < 1) throw ValidationError("K must be at least 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be positive");
  if (n < 0 || n > K) throw ValidationError("n must satisfy 0 <= n <= K");
  if (grid_m < 5 || grid_m % 2 == 0) throw ValidationError("grid_m must be odd and >= 5");
  if (sigma != 1 && sigma != -1) throw ValidationError("sigma must be +1 or -1");
  if (picard_max < 1) throw ValidationError("picard_max must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("tol must be positive");
  if (!(C_cal > 0.0) || !(alpha_cal > 0.0)) throw ValidationError("C_cal and alpha_cal must be positive");
  if (!std::isfinite(s)) throw ValidationError("s must be finite");
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(states.size());
  for (const auto& v : states) t.push_back(v.time());
  return t;
}

double Trajectory::spacing() const {
  if (states.size() < 2) throw ValidationError("trajectory needs at least two samples");
  const double h = (states.back().time() - states.front().time()) / static_cast<double>(states.size() - 1);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double expected = states.front().time() + h * static_cast<double>(i);
    if (std::abs(states[i].time() - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw ValidationError("trajectory samples are not uniformly spaced");
    }
  }
  return h;
}

double Trajectory::sup_norm(double s) const {
  double m = 0.0;
  for (const auto& v : states) m = std::max(m, sobolev_norm(v, s));
  return m;
}

double sup_distance(const Trajectory& a, const Trajectory& b, double s) {
  if (a.size() != b.size()) throw ValidationError("trajectory grids differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, sobolev_norm(a.states[i] - b.states[i], s));
  return m;
}

std::vector<SpectralState> cumulative_simpson(const std::vector<SpectralState>& f, double h) {
  if (f.empty() || f.size() % 2 == 0) throw ValidationError("Simpson quadrature needs an odd number of nodes");
  std::vector<SpectralState> out(f.size(), SpectralState(f.front().cutoff()));
  for (std::size_t i = 1; i < f.size(); ++i) {
    out[i] = out[i % 2 == 0 ? i - 2 : i - 1];
    if (i % 2 == 0) {
      out[i].add_scaled(h / 3.0, f[i - 2]).add_scaled(4.0 * h / 3.0, f[i - 1]).add_scaled(h / 3.0, f[i]);
    } else {
      out[i].add_scaled(5.0 * h / 12.0, f[i - 1]).add_scaled(8.0 * h / 12.0, f[i]).add_scaled(-h / 12.0, f[i + 1]);
    }
  }
  return out;
}

namespace {

using Field = std::function<SpectralState(const SpectralState&, double)>;

double sample_time(const SolverConfig& cfg, double t0, int i) {
  return t0 + cfg.T * static_cast<double>(i) / static_cast<double>(cfg.grid_m - 1);
}

Trajectory rk4(const SpectralState& v0, const SolverConfig& cfg, const Field& f) {
  cfg.validate();
  if (v0.cutoff() != cfg.K) throw ValidationError("initial state cutoff does not match config K");
  const double t0 = v0.time();
  const double interval = cfg.T / static_cast<double>(cfg.grid_m - 1);
  const long steps = std::max(1L, static_cast<long>(std::ceil(interval / cfg.dt - 1e-9)));
  const double h = interval / static_cast<double>(steps);

  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(cfg.grid_m));
  SpectralState v = v0;
  traj.states.push_back(v);
  for (int i = 1; i < cfg.grid_m; ++i) {
    const double start = sample_time(cfg, t0, i - 1);
    for (long j = 0; j < steps; ++j) {
      const double t = start + h * static_cast<double>(j);
      const SpectralState a = f(v, t);
      SpectralState y = v;
      y.add_scaled(h / 2, a);
      const SpectralState b = f(y, t + h / 2);
      y = v;
      y.add_scaled(h / 2, b);
      const SpectralState c = f(y, t + h / 2);
      y = v;
      y.add_scaled(h, c);
      const SpectralState d = f(y, t + h);
      v.add_scaled(h / 6, a).add_scaled(h / 3, b).add_scaled(h / 3, c).add_scaled(h / 6, d);
      if (!v.is_finite()) {
        std::ostringstream msg;
        msg << "RK4 produced a non-finite state near t = " << t + h;
        throw NumericalError(msg.str());
      }
    }
    v.set_time(sample_time(cfg, t0, i));
    traj.states.push_back(v);
  }
  return traj;
}

}  // namespace

Trajectory integrate_direct(const SpectralState& v0, const SolverConfig& cfg) {
  return rk4(v0, cfg, [&](const SpectralState& v, double t) { return rhs(v, cfg.terms(t)); });
}

Trajectory solve_mkdv1(const SpectralState& u0, const SolverConfig& cfg) {
  const double t0 = u0.time();
  const double mass = l2_mass(u0);
  Trajectory traj = integrate_direct(gauge_to_interaction(u0, t0), cfg);
  for (auto& state : traj.states) {
    const double t = state.time();
    state = spatial_shift(interaction_to_gauge(state, t), -cfg.sigma * mass * (t - t0));
    state.set_time(t);
  }
  return traj;
}

Trajectory integrate_mkdv1_direct(const SpectralState& u0, const SolverConfig& cfg) {
  const double t0 = u0.time();
  Trajectory traj = rk4(gauge_to_interaction(u0, t0), cfg, [&](const SpectralState& v, double t) {
    return gauge_to_interaction(pseudospectral_nonlinearity(interaction_to_gauge(v, t), cfg.sigma, false), t);
  });
  for (auto& state : traj.states) state = interaction_to_gauge(state, state.time());
  return traj;
}

std::string to_string(PicardMap m) { return m == PicardMap::F ? "F" : "G"; }

PicardMap parse_picard_map(const std::string& name) {
  if (name == "F") return PicardMap::F;
  if (name == "G") return PicardMap::G;
  throw ValidationError("unknown Picard map '" + name + "' (expected F or G)");
}

Trajectory constant_trajectory(const SpectralState& v0, const SolverConfig& cfg) {
  cfg.validate();
  Trajectory traj;
  for (int i = 0; i < cfg.grid_m; ++i) {
    SpectralState v = v0;
    v.set_time(sample_time(cfg, v0.time(), i));
    traj.states.push_back(std::move(v));
  }
  return traj;
}

namespace {

// Shared skeleton of F and G: v0 + boundary(v(t)) - boundary(v0) + int integrand.
Trajectory fixed_point_map(
    const Trajectory& v, const SpectralState& v0, const SolverConfig& cfg,
    const std::function<SpectralState(const SpectralState&, const TermConfig&)>& boundary,
    const std::function<SpectralState(const SpectralState&, const TermConfig&)>& integrand) {
  cfg.validate();
  if (v.size() < 3 || v.size() % 2 == 0) throw ValidationError("Picard grid needs an odd number >= 3 of samples");
  if (v0.cutoff() != cfg.K) throw ValidationError("initial state cutoff does not match config K");
  const double h = v.spacing();
  const double t0 = v.front().time();
  const std::size_t m = v.size();
  std::vector<SpectralState> f(m), b(m);
  parallel_for(0, static_cast<int>(m), [&](int i) {
    const TermConfig tc = cfg.terms(v.states[static_cast<std::size_t>(i)].time());
    f[static_cast<std::size_t>(i)] = integrand(v.states[static_cast<std::size_t>(i)], tc);
    b[static_cast<std::size_t>(i)] = boundary(v.states[static_cast<std::size_t>(i)], tc);
  });
  const SpectralState b0 = boundary(v0, cfg.terms(t0));
  const std::vector<SpectralState> integral = cumulative_simpson(f, h);
  Trajectory out;
  out.states.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    SpectralState s = v0;
    s += b[i];
    s -= b0;
    s += integral[i];
    s.set_time(v.states[i].time());
    out.states.push_back(std::move(s));
  }
  return out;
}

}  // namespace

Trajectory picard_F(const Trajectory& v, const SpectralState& v0, const SolverConfig& cfg) {
  return fixed_point_map(
      v, v0, cfg,
      [](const SpectralState& x, const TermConfig& tc) { return N1_term(x, tc, Restriction::HighOnly); },
      [](const SpectralState& x, const TermConfig& tc) {
        SpectralState out = R_term(x, tc);
        out += N_low(x, tc);
        out += N2_term(x, rhs(x, tc), tc, Restriction::HighOnly);
        return out;
      });
}

Trajectory picard_G(const Trajectory& v, const SpectralState& v0, const SolverConfig& cfg) {
  return fixed_point_map(
      v, v0, cfg,
      [](const SpectralState& x, const TermConfig& tc) {
        SpectralState out = N1_term(x, tc, Restriction::HighOnly);
        out += N7_term(x, tc);
        return out;
      },
      [](const SpectralState& x, const TermConfig& tc) {
        const SpectralState w = rhs(x, tc);
        SpectralState out = R_term(x, tc);
        out += N_low(x, tc);
        out += N21_term(x, tc);
        out += N221_term(x, tc);
        out += N4_term(x, w, tc);
        out += N5_term(x, tc);
        out += N6_term(x, w, tc);
        return out;
      });
}

Trajectory picard_apply(PicardMap which, const Trajectory& v, const SpectralState& v0, const SolverConfig& cfg) {
  return which == PicardMap::F ? picard_F(v, v0, cfg) : picard_G(v, v0, cfg);
}

PicardResult picard_solve(const SpectralState& v0, const SolverConfig& cfg, PicardMap which) {
  cfg.validate();
  PicardResult result;
  result.report.which = which;
  Trajectory current = constant_trajectory(v0, cfg);
  // increments at this level are indistinguishable from rounding
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1e-300, current.sup_norm(cfg.s));
  for (int m = 1; m <= cfg.picard_max; ++m) {
    Trajectory next = picard_apply(which, current, v0, cfg);
    for (const auto& s : next.states) {
      if (!s.is_finite()) throw NumericalError("Picard iterate is not finite");
    }
    const double inc = sup_distance(next, current, cfg.s);
    result.report.increments.push_back(inc);
    current = std::move(next);
    result.report.iterations = m;
    if (inc < cfg.tol) {
      result.report.converged = true;
      break;
    }
  }
  const auto& inc = result.report.increments;
  for (std::size_t i = 1; i < inc.size(); ++i) {
    if (inc[i - 1] > floor && inc[i] > floor) {
      result.report.contraction_factor = std::max(result.report.contraction_factor, inc[i] / inc[i - 1]);
    }
  }
  result.trajectory = std::move(current);
  return result;
}

ParameterChoice select_parameters(double R, const SolverConfig& cfg) {
  if (!(R >= 0.0) || !std::isfinite(R)) throw ValidationError("R must be a nonnegative number");
  ParameterChoice choice;
  const double C = cfg.C_cal;
  for (int n = 1; n <= std::max(1, cfg.K); n *= 2) {
    choice.n = n;
    choice.slack_n = 0.25 - C * std::pow(static_cast<double>(n), -cfg.alpha_cal) * std::pow(3.0 * R, 2);
    if (choice.slack_n > 0.0) break;
  }
  if (choice.slack_n <= 0.0) {
    choice.feasible = false;
    choice.note = "no power of two n <= K satisfies C n^-alpha (3R)^2 < 1/4";
    return choice;
  }
  const double nn = static_cast<double>(choice.n);
  const double growth = C * nn * std::log(nn) * (std::pow(2.0 * R, 2) + std::pow(2.0 * R, 4));
  for (int j = 0; j <= 60; ++j) {
    const double T = std::ldexp(cfg.T, -j);
    const double slack = 0.25 - growth * T;
    if (slack > 0.0) {
      choice.T = T;
      choice.slack_T = slack;
      choice.feasible = true;
      choice.note = "analytic rule";
      return choice;
    }
  }
  choice.note = "no dyadic T >= T_max 2^-60 satisfies the time rule";
  return choice;
}

ParameterChoice choose_parameters(const SpectralState& v0, const SolverConfig& cfg) {
  cfg.validate();
  ParameterChoice choice = select_parameters(sobolev_norm(v0, cfg.s) + 1.0, cfg);
  if (choice.feasible) return choice;
  const std::string rule_note = choice.note;
  for (int j = 0; j <= 12; ++j) {
    SolverConfig trial = cfg;
    trial.T = std::ldexp(cfg.T, -j);
    const PicardResult r = picard_solve(v0, trial, PicardMap::F);
    if (r.report.converged && r.report.contraction_factor <= 0.5) {
      choice.n = cfg.n;
      choice.T = trial.T;
      choice.measured = true;
      choice.contraction = r.report.contraction_factor;
      choice.note = rule_note + "; measured-contraction search";
      return choice;
    }
  }
  throw NumericalError("no interval T >= T_max 2^-12 gives a contracting Picard iteration");
}

ChainResult chain_intervals(const SpectralState& v0, const SolverConfig& cfg, double total_T, PicardMap which) {
  cfg.validate();
  if (!(total_T > 0.0)) throw ValidationError("total_T must be positive");
  ChainResult out;
  const double t_end = v0.time() + total_T;
  SpectralState current = v0;
  for (int interval = 0; interval < 100000; ++interval) {
    const double remaining = t_end - current.time();
    if (remaining <= 1e-12 * total_T) break;
    SolverConfig icfg = cfg;
    icfg.T = std::min(cfg.T, remaining);
    const ParameterChoice choice = choose_parameters(current, icfg);
    icfg.n = std::min(choice.n, cfg.K);
    icfg.T = choice.T;
    // snap the final interval onto t_end
    if (t_end - (current.time() + icfg.T) <= 1e-12 * total_T) icfg.T = remaining;
    PicardResult r = picard_solve(current, icfg, which);
    if (!r.report.converged) {
      std::ostringstream msg;
      msg << "Picard iteration did not converge on interval " << interval << "; increments:";
      for (double x : r.report.increments) msg << ' ' << x;
      throw NumericalError(msg.str());
    }
    if (out.trajectory.states.empty()) {
      out.trajectory.states = r.trajectory.states;
    } else {
      out.max_junction_jump = std::max(out.max_junction_jump,
                                       max_abs_difference(out.trajectory.back(), r.trajectory.front()));
      out.trajectory.states.insert(out.trajectory.states.end(), r.trajectory.states.begin() + 1,
                                   r.trajectory.states.end());
    }
    out.choices.push_back(choice);
    out.reports.push_back(r.report);
    current = r.trajectory.back();
  }
  return out;
}

}  // namespace nfmkdv
