#include "brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>

namespace oracle {

using nfmkdv::Complex;
using nfmkdv::SpectralState;

namespace {

const Complex I(0.0, 1.0);

long cube(long x) { return x * x * x; }

// k^3 - k1^3 - k2^3 - k3^3, unfactored.
long resonance(long k1, long k2, long k3) {
  return cube(k1 + k2 + k3) - cube(k1) - cube(k2) - cube(k3);
}

Complex e(double t, long phase) { return std::exp(I * (t * static_cast<double>(phase))); }

long amax(long a, long b, long c) { return std::max({std::labs(a), std::labs(b), std::labs(c)}); }

bool phi1(long k1, long k2, long k3) {
  const long s = amax(k1, k2, k3);
  return std::labs(resonance(k1, k2, k3)) >= s * s;
}

long big_lambda(long k1, long k2, long k3) {
  const long a = std::labs(k1 + k2), b = std::labs(k2 + k3), c = std::labs(k3 + k1);
  return std::min({a * b, b * c, c * a});
}

double root100(long m) { return std::pow(static_cast<double>(std::labs(m)), 0.01); }

}  // namespace

bool good_region(long k1, long k2, long k3, long j1, long j2, long j3) {
  const long k = k1 + k2 + k3;
  const bool outer1 = phi1(k1, k2, k3);
  const bool inner1 = phi1(j1, j2, j3);
  const double lo = static_cast<double>(std::min(std::labs(k), std::labs(k1)));
  const double m23 = static_cast<double>(std::max(std::labs(k2), std::labs(k3)));
  const bool a = outer1 && m23 >= std::pow(lo, 0.01);
  const bool b = outer1 && m23 >= root100(std::min(std::labs(j2), std::labs(j3)));
  const bool c = static_cast<double>(std::labs(j1)) >= std::pow(lo, 1.01);
  const bool d = outer1 && !inner1 &&
                 static_cast<double>(big_lambda(j1, j2, j3)) <= std::pow(m23, 0.01);
  const bool ee = !outer1 && static_cast<double>(big_lambda(k1, k2, k3)) >=
                                 root100(std::max(std::labs(j2), std::labs(j3)));
  return a || b || c || d || ee;
}

SpectralState term(const std::string& name, const SpectralState& v, const SpectralState& w,
                   const Params& p) {
  const long K = p.K;
  const double t = p.t;
  const double sg = p.sigma;
  SpectralState out(p.K, t);

  auto in = [&](long m) { return std::labs(m) <= K; };
  auto V = [&](long m) { return v[static_cast<int>(m)]; };
  auto W = [&](long m) { return w[static_cast<int>(m)]; };
  auto low = [&](long a, long b, long c) { return amax(a, b, c) <= p.n; };

  if (name == "R") {
    for (long k = -K; k <= K; ++k) out[static_cast<int>(k)] = -I * sg * double(k) * std::norm(V(k)) * V(k);
    return out;
  }

  const bool cubic = name == "N" || name == "N_low" || name == "N_high" || name == "N1" ||
                     name == "N1_high" || name == "N1_dot" || name == "N2" ||
                     name == "N2_high" || name == "N21" || name == "rhs";
  if (cubic) {
    for (long k1 = -K; k1 <= K; ++k1)
      for (long k2 = -K; k2 <= K; ++k2)
        for (long k3 = -K; k3 <= K; ++k3) {
          const long k = k1 + k2 + k3;
          if (!in(k)) continue;
          const long ph = resonance(k1, k2, k3);
          if (ph == 0) continue;
          const Complex prod = V(k1) * V(k2) * V(k3);
          const Complex dprod = W(k1) * V(k2) * V(k3) + V(k1) * W(k2) * V(k3) + V(k1) * V(k2) * W(k3);
          const Complex base = (I / 3.0) * sg * double(k) * e(t, ph);
          const Complex iphi = I * double(ph);
          Complex c = 0.0;
          if (name == "N" || name == "rhs") c = base * prod;
          else if (name == "N_low") c = low(k1, k2, k3) ? base * prod : 0.0;
          else if (name == "N_high") c = low(k1, k2, k3) ? 0.0 : base * prod;
          else if (name == "N1") c = base / iphi * prod;
          else if (name == "N1_high") c = low(k1, k2, k3) ? 0.0 : base / iphi * prod;
          else if (name == "N1_dot") c = base * prod + base / iphi * dprod;
          else if (name == "N2") c = -base / iphi * dprod;
          else if (name == "N2_high") c = low(k1, k2, k3) ? 0.0 : -base / iphi * dprod;
          else if (name == "N21")
            c = low(k1, k2, k3) ? 0.0
                                : -double(k) * double(k1) * e(t, ph) / iphi * std::norm(V(k1)) * prod;
          out[static_cast<int>(k)] += c;
        }
    if (name == "rhs") {
      for (long k = -K; k <= K; ++k) out[static_cast<int>(k)] += -I * sg * double(k) * std::norm(V(k)) * V(k);
    }
    return out;
  }

  enum class Part { All, Good, Rest };
  Part part;
  if (name == "N22") part = Part::All;
  else if (name == "N221") part = Part::Good;
  else if (name == "N222" || name == "N3" || name == "N4" || name == "N5" || name == "N6" || name == "N7")
    part = Part::Rest;
  else
    throw std::invalid_argument("oracle: unknown term " + name);

  for (long k1 = -K; k1 <= K; ++k1)
    for (long k2 = -K; k2 <= K; ++k2)
      for (long k3 = -K; k3 <= K; ++k3) {
        const long k = k1 + k2 + k3;
        if (!in(k) || low(k1, k2, k3)) continue;
        const long phk = resonance(k1, k2, k3);
        if (phk == 0) continue;
        const Complex outer = double(k) * e(t, phk) / (I * double(phk));
        for (long j1 = -K; j1 <= K; ++j1)
          for (long j2 = -K; j2 <= K; ++j2)
            for (long j3 = -K; j3 <= K; ++j3) {
              if (j1 + j2 + j3 != k1) continue;
              const long phj = resonance(j1, j2, j3);
              if (phj == 0) continue;
              if (part != Part::All) {
                const bool good = good_region(k1, k2, k3, j1, j2, j3);
                if (good != (part == Part::Good)) continue;
              }
              const Complex ej = e(t, phj);
              const Complex pj = V(j1) * V(j2) * V(j3);
              const Complex lj = W(j1) * V(j2) * V(j3) + V(j1) * W(j2) * V(j3) + V(j1) * V(j2) * W(j3);
              const Complex pk = V(k2) * V(k3);
              const double kk1 = double(k) * double(k1);
              const double fk = double(phk), fj = double(phj);
              Complex c;
              if (name == "N22" || name == "N221" || name == "N222") {
                c = (1.0 / 3.0) * double(k1) * ej * pj * outer * pk;
              } else if (name == "N3") {
                // inner time derivative of N1 at frequency k1
                const Complex dn1 = (I / 3.0) * double(k1) * ej * (pj + lj / (I * fj));
                c = -I * outer * dn1 * pk;
              } else if (name == "N4") {
                const Complex n2 = -(I / 3.0) * double(k1) * ej / (I * fj) * lj;
                c = -I * outer * n2 * pk;
              } else if (name == "N5") {
                c = -(1.0 / 3.0) * kk1 * e(t, phk + phj) / (I * fj) * pj * pk;
              } else if (name == "N6") {
                c = (1.0 / 3.0) * kk1 * e(t, phk + phj) / (fk * fj) * pj * (W(k2) * V(k3) + V(k2) * W(k3));
              } else {
                c = -(1.0 / 3.0) * kk1 * e(t, phk + phj) / (fk * fj) * pj * pk;
              }
              out[static_cast<int>(k)] += c;
            }
      }
  return out;
}

}  // namespace oracle
