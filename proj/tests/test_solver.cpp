#include "doctest.h"

#include <cmath>
#include <sstream>

#include "nfmkdv/errors.hpp"
#include "nfmkdv/io.hpp"
#include "nfmkdv/solver.hpp"

using namespace nfmkdv;

namespace {

SolverConfig small_config(int K, double T, int grid_m, double dt = 1e-4) {
  SolverConfig cfg;
  cfg.K = K;
  cfg.T = T;
  cfg.grid_m = grid_m;
  cfg.dt = dt;
  return cfg;
}

}  // namespace

TEST_CASE("zero data stays zero") {
  const SolverConfig cfg = small_config(8, 0.05, 5);
  const Trajectory traj = integrate_direct(SpectralState(8), cfg);
  CHECK(traj.size() == 5);
  for (const auto& v : traj.states) CHECK(max_abs(v) == 0.0);
  CHECK(traj.back().time() == doctest::Approx(0.05));
}

TEST_CASE("single-mode data rotates with the resonant phase") {
  // At K = 2 only the resonant part acts on +-1 data.
  for (int sigma : {1, -1}) {
    SolverConfig cfg = small_config(2, 0.5, 11);
    cfg.sigma = sigma;
    SpectralState v0(2);
    v0[1] = Complex(0.6, 0.3);
    v0[-1] = std::conj(v0[1]);
    const Trajectory traj = integrate_direct(v0, cfg);
    const double a2 = std::norm(v0[1]);
    for (const auto& v : traj.states) {
      const Complex expect = v0[1] * unit_phase(-sigma * a2 * v.time());
      CHECK(std::abs(v[1] - expect) < 1e-12);
      CHECK(std::abs(v[-1] - std::conj(expect)) < 1e-12);
      CHECK(std::abs(v[2]) < 1e-15);
    }
  }
}

TEST_CASE("RK4 error shrinks at fourth order") {
  const SpectralState v0 = random_state(4, 1.0, 1.0, 3);
  auto endpoint = [&](double dt) { return integrate_direct(v0, small_config(4, 0.1, 5, dt)).back(); };
  const SpectralState ref = endpoint(1e-5);
  const double e1 = max_abs_difference(endpoint(4e-4), ref);
  const double e2 = max_abs_difference(endpoint(2e-4), ref);
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.7);
  CHECK(order < 4.3);
}

TEST_CASE("mean mode is frozen and mass is conserved") {
  const SpectralState v0 = random_state(12, 1.5, 1.0, 11);
  const Trajectory traj = integrate_direct(v0, small_config(12, 0.05, 11));
  for (const auto& v : traj.states) {
    CHECK(std::abs(v[0] - v0[0]) < 1e-14);
    CHECK(std::abs(l2_mass(v) - l2_mass(v0)) < 1e-10 * l2_mass(v0));
    CHECK(v.is_hermitian());
  }
}

TEST_CASE("grid products reproduce the spectral right-hand side") {
  const SolverConfig cfg = small_config(10, 0.1, 5);
  for (double t : {0.0, 0.31}) {
    SpectralState v = random_state(10, 0.5, 1.0, 5);
    v.set_time(t);
    const SpectralState u = interaction_to_gauge(v, t);
    SpectralState du = rhs_pseudospectral(u, cfg);
    for (int k = -10; k <= 10; ++k) du[k] += Complex(0.0, static_cast<double>(k) * k * k) * u[k];
    CHECK(relative_residual(gauge_to_interaction(du, t), rhs(v, cfg.terms(t))) < 1e-12);
  }
}

TEST_CASE("grid nonlinearity: constants and cubic scaling") {
  SpectralState c(6);
  c[0] = 0.7;
  CHECK(max_abs(pseudospectral_nonlinearity(c, 1, false)) < 1e-15);
  CHECK(max_abs(pseudospectral_nonlinearity(c, 1, true)) < 1e-15);

  const SpectralState u = random_state(6, 0.5, 1.0, 9);
  const double base = max_abs(pseudospectral_nonlinearity(u, 1, false));
  const double scaled = max_abs(pseudospectral_nonlinearity(2.0 * u, 1, false));
  CHECK(std::log2(scaled / base) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(pseudospectral_nonlinearity(u, 0, false), ValidationError);
}

TEST_CASE("renormalized flow plus shift equals the direct cubic flow") {
  const SpectralState u0 = random_state(8, 1.0, 1.0, 21);
  const SolverConfig cfg = small_config(8, 0.05, 11);
  const Trajectory a = solve_mkdv1(u0, cfg);
  const Trajectory b = integrate_mkdv1_direct(u0, cfg);
  CHECK(sup_distance(a, b, 0.5) < 1e-9);
}

TEST_CASE("Simpson integrates cubics exactly") {
  const int m = 9;
  const double h = 0.125;
  std::vector<SpectralState> f;
  for (int i = 0; i < m; ++i) {
    const double t = i * h;
    SpectralState s(1);
    s[0] = 1.0 + t - 3.0 * t * t + 2.0 * t * t * t;
    f.push_back(s);
  }
  const auto F = cumulative_simpson(f, h);
  for (int i = 0; i < m; i += 2) {
    const double t = i * h;
    CHECK(F[i][0].real() == doctest::Approx(t + t * t / 2 - t * t * t + t * t * t * t / 2).epsilon(1e-14));
  }
  f.pop_back();
  CHECK_THROWS_AS(cumulative_simpson(f, h), ValidationError);
}

TEST_CASE("Picard iteration on zero and near-zero data") {
  SolverConfig cfg = small_config(6, 0.05, 5);
  cfg.n = 2;
  for (PicardMap map : {PicardMap::F, PicardMap::G}) {
    const PicardResult r = picard_solve(SpectralState(6), cfg, map);
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 1);
    for (const auto& v : r.trajectory.states) CHECK(max_abs(v) == 0.0);
  }
  CHECK(parse_picard_map("G") == PicardMap::G);
  CHECK_THROWS_AS(parse_picard_map("H"), ValidationError);
}

TEST_CASE("a fine RK4 trajectory is a near fixed point of both maps") {
  SolverConfig cfg = small_config(8, 0.05, 41, 1e-5);
  cfg.n = 3;
  cfg.s = 2.0;
  const SpectralState v0 = random_state(8, 2.0, 0.3, 4);
  const Trajectory traj = integrate_direct(v0, cfg);
  const double scale = traj.sup_norm(cfg.s);
  CHECK(sup_distance(picard_F(traj, v0, cfg), traj, cfg.s) < 1e-6 * scale);
  CHECK(sup_distance(picard_G(traj, v0, cfg), traj, cfg.s) < 1e-6 * scale);
}

TEST_CASE("G coincides with F when the remaining region is empty") {
  for (auto [K, n] : {std::pair{2, 0}, std::pair{4, 4}}) {
    SolverConfig cfg = small_config(K, 0.1, 9);
    cfg.n = n;
    const SpectralState v0 = random_state(K, 1.0, 1.0, 8);
    const Trajectory traj = integrate_direct(v0, cfg);
    CHECK(sup_distance(picard_F(traj, v0, cfg), picard_G(traj, v0, cfg), 0.5) < 1e-12);
  }
}

TEST_CASE("analytic parameter rule") {
  SolverConfig cfg;
  cfg.K = 16;
  cfg.T = 0.1;
  const ParameterChoice zero = select_parameters(0.0, cfg);
  CHECK(zero.feasible);
  CHECK(zero.n == 1);
  CHECK(zero.T == 0.1);

  CHECK_FALSE(select_parameters(1.0, cfg).feasible);

  cfg.K = 1 << 20;
  int last_n = 0;
  double last_T = 1.0;
  for (double R : {0.05, 0.1, 0.2, 0.4}) {
    const ParameterChoice c = select_parameters(R, cfg);
    REQUIRE(c.feasible);
    CHECK(c.slack_n > 0.0);
    CHECK(c.slack_T > 0.0);
    CHECK(c.n >= last_n);
    CHECK(c.T <= last_T);
    last_n = c.n;
    last_T = c.T;
  }
  CHECK_THROWS_AS(select_parameters(-1.0, cfg), ValidationError);
}

TEST_CASE("chained intervals") {
  SolverConfig cfg = small_config(8, 0.05, 9, 1e-5);
  cfg.n = 2;
  cfg.s = 1.0;
  const SpectralState v0 = random_state(8, 2.0, 0.1, 6);

  const ChainResult one = chain_intervals(v0, cfg, 0.05);
  const PicardResult direct = picard_solve(v0, cfg, PicardMap::F);
  REQUIRE(one.choices.size() == 1);
  CHECK(sup_distance(one.trajectory, direct.trajectory, cfg.s) == 0.0);

  const ChainResult two = chain_intervals(v0, cfg, 0.1);
  CHECK(two.choices.size() == 2);
  CHECK(two.trajectory.size() == 17);
  CHECK(two.trajectory.back().time() == doctest::Approx(0.1));
  CHECK(two.max_junction_jump == 0.0);
  for (const auto& v : two.trajectory.states) {
    CHECK(std::abs(l2_mass(v) - l2_mass(v0)) < 1e-7 * l2_mass(v0));
  }
  CHECK_THROWS_AS(chain_intervals(v0, cfg, 0.0), ValidationError);
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  cfg.grid_m = 6;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = SolverConfig{};
  cfg.n = cfg.K + 1;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = SolverConfig{};
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  CHECK_THROWS_AS(integrate_direct(SpectralState(3), SolverConfig{}), ValidationError);
}

TEST_CASE("JSON round trips are exact") {
  const SpectralState v = random_state(7, 0.5, 1.0, 13);
  const SpectralState back = state_from_json(Json::parse(state_to_json(v).dump()));
  CHECK(back == v);

  const Trajectory traj = integrate_direct(v, small_config(7, 0.02, 5));
  const Trajectory tback = trajectory_from_json(Json::parse(trajectory_to_json(traj).dump()));
  CHECK(sup_distance(traj, tback, 0.0) == 0.0);

  SolverConfig cfg;
  cfg.K = 9;
  cfg.dt = 1.0 / 3.0;
  const SolverConfig cback = config_from_json(Json::parse(config_to_json(cfg).dump()));
  CHECK(cback.K == 9);
  CHECK(cback.dt == cfg.dt);
  CHECK(config_hash(config_to_json(cback)) == config_hash(config_to_json(cfg)));

  Json bad = config_to_json(cfg);
  bad["bogus"] = 1;
  CHECK_THROWS_AS(config_from_json(bad), ValidationError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/cfg.json"), ValidationError);
}

TEST_CASE("config hash and CSV output") {
  SolverConfig a, b;
  b.K = 17;
  const std::string ha = config_hash(config_to_json(a));
  CHECK(ha.size() == 16);
  CHECK(ha != config_hash(config_to_json(b)));
  CHECK(ha == config_hash(config_to_json(SolverConfig{})));

  SpectralState v(1);
  v[1] = Complex(0.1, 0.2);
  v[-1] = std::conj(v[1]);
  std::ostringstream out;
  write_state_csv(out, v, ha);
  const std::string csv = out.str();
  CHECK(csv.rfind("# config_hash=" + ha, 0) == 0);
  CHECK(csv.find("1,0.10000000000000001,0.20000000000000001") != std::string::npos);
}
