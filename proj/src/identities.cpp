#include "nfmkdv/identities.hpp"

#include <algorithm>
#include <cmath>

#include "nfmkdv/errors.hpp"
#include "nfmkdv/solver.hpp"
#include "nfmkdv/terms.hpp"

namespace nfmkdv {

std::string to_string(IdentityId id) { return "I" + std::to_string(static_cast<int>(id) + 1); }

IdentityId parse_identity_id(const std::string& name) {
  for (int i = 0; i < 5; ++i) {
    const auto id = static_cast<IdentityId>(i);
    if (name == to_string(id)) return id;
  }
  throw ValidationError("unknown identity '" + name + "' (expected I1..I5)");
}

double identity_threshold(IdentityId id) {
  switch (id) {
    case IdentityId::I1:
      return 1e-12;
    case IdentityId::I2:
    case IdentityId::I4:
      return 1e-11;
    case IdentityId::I3:
      return 1e-13;
    case IdentityId::I5:
      return 1e-6;
  }
  return 0.0;
}

namespace {

// Smooth data for the trajectory check: fast phases stay resolved by RK4.
SpectralState trajectory_data(int K, std::uint64_t seed) { return random_state(K, 2.0, 0.5, seed); }

double integration_by_parts_residual(const IdentityOptions& opt) {
  SolverConfig cfg;
  cfg.K = opt.K;
  cfg.n = opt.n;
  cfg.dt = opt.dt;
  cfg.T = opt.horizon;
  long steps = std::lround(opt.horizon / opt.dt);
  if (steps % 2 == 1) ++steps;
  cfg.grid_m = static_cast<int>(steps + 1);
  const Trajectory traj = integrate_direct(trajectory_data(opt.K, opt.seed), cfg);
  const double h = traj.spacing();

  std::vector<SpectralState> left(traj.size()), right(traj.size()), boundary(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const SpectralState& v = traj.states[i];
    const TermConfig tc = cfg.terms(v.time());
    const SpectralState w = rhs(v, tc);
    left[i] = N3_term(v, w, tc);
    right[i] = N5_term(v, tc) + N6_term(v, w, tc);
    boundary[i] = N7_term(v, tc);
  }
  const auto int_left = cumulative_simpson(left, h);
  const auto int_right = cumulative_simpson(right, h);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    SpectralState r = int_right[i];
    r += boundary[i];
    r -= boundary[0];
    diff = std::max(diff, max_abs_difference(int_left[i], r));
    scale = std::max({scale, max_abs(int_left[i]), max_abs(r)});
  }
  return scale == 0.0 ? 0.0 : diff / scale;
}

}  // namespace

IdentityCheck run_identity(IdentityId id, const IdentityOptions& opt) {
  if (opt.trials < 1) throw ValidationError("trials must be at least 1");
  IdentityCheck out;
  out.id = id;
  out.K = opt.K;
  out.n = opt.n;
  out.threshold = identity_threshold(id);
  const TermConfig cfg{opt.K, opt.n, 1, opt.t};
  cfg.validate();
  if (opt.n > opt.K) throw ValidationError("n must not exceed K");

  if (id == IdentityId::I5) {
    out.residual = integration_by_parts_residual(opt);
    return out;
  }
  for (int trial = 0; trial < opt.trials; ++trial) {
    const SpectralState v = random_state(opt.K, 1.0, 1.0, member_seed(opt.seed, 2 * trial));
    const SpectralState w = random_state(opt.K, 0.0, 3.0, member_seed(opt.seed, 2 * trial + 1));
    double r = 0.0;
    switch (id) {
      case IdentityId::I1:
        r = relative_residual(N_term(v, cfg), N1_dot(v, w, cfg) + N2_term(v, w, cfg));
        break;
      case IdentityId::I2:
        r = relative_residual(N2_term(v, rhs(v, cfg), cfg, Restriction::HighOnly),
                              N21_term(v, cfg) + N22_term(v, cfg));
        break;
      case IdentityId::I3:
        r = std::max(relative_residual(N_term(v, cfg), N_low(v, cfg) + N_high(v, cfg)),
                     relative_residual(N22_term(v, cfg), N221_term(v, cfg) + N222_term(v, cfg)));
        break;
      case IdentityId::I4:
        {
        const SpectralState dv = rhs(v, cfg);
        r = relative_residual(N222_term(v, cfg), N3_term(v, dv, cfg) + N4_term(v, dv, cfg));
      }
        break;
      case IdentityId::I5:
        break;
    }
    out.residual = std::max(out.residual, r);
  }
  return out;
}

}  // namespace nfmkdv
