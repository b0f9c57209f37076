#pragma once

// Algebraic and integral identities linking the multilinear operators.
//
//   I1  N = N1_dot(v, w) + N2(v, w) for arbitrary w
//   I2  N2(v, rhs v) restricted to kstar > n = N21 + N22
//   I3  N = N_low + N_high and N22 = N221 + N222
//   I4  N222 = N3(v, rhs v) + N4(v, rhs v)
//   I5  int N3 = int (N5 + N6) + N7(t) - N7(0) along an RK4 trajectory

#include <cstdint>
#include <string>

namespace nfmkdv {

enum class IdentityId { I1, I2, I3, I4, I5 };

std::string to_string(IdentityId id);
IdentityId parse_identity_id(const std::string& name);

struct IdentityCheck {
  IdentityId id = IdentityId::I1;
  int K = 0;
  int n = 0;
  double residual = 0.0;   // worst relative residual over the trials
  double threshold = 0.0;  // pass threshold for this identity
  bool passed() const { return residual < threshold; }
};

struct IdentityOptions {
  int K = 12;
  int n = 2;
  std::uint64_t seed = 1;
  int trials = 1;     // random (v, w) pairs for I1 - I4
  double t = 0.375;   // evaluation time for I1 - I4
  // I5 trajectory
  double dt = 1e-4;
  double horizon = 0.05;
};

double identity_threshold(IdentityId id);

IdentityCheck run_identity(IdentityId id, const IdentityOptions& opt);

}  // namespace nfmkdv
