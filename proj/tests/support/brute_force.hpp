#pragma once

// Naive reference sums for the multilinear operators. Written from the
// displayed formulas with full phases e^{itPhi}, plain triple loops over the
// cube and floating-point region thresholds, sharing no code with the
// library kernels beyond the SpectralState container.

#include <string>

#include "nfmkdv/spectral_state.hpp"

namespace oracle {

struct Params {
  int K = 6;
  int n = 0;
  int sigma = 1;
  double t = 0.0;
};

// Same names as nfmkdv::evaluate_term. w may be empty when unused.
nfmkdv::SpectralState term(const std::string& name, const nfmkdv::SpectralState& v,
                           const nfmkdv::SpectralState& w, const Params& p);

// Region predicate of the quintic terms: true when at least one of the
// conditions (a)-(e) holds.
bool good_region(long k1, long k2, long k3, long j1, long j2, long j3);

}  // namespace oracle
