#include "nfmkdv/spectral_state.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nfmkdv/errors.hpp"

namespace nfmkdv {

SpectralState::SpectralState(int cutoff, double time)
    : cutoff_(cutoff), time_(time) {
  if (cutoff < 0) throw ValidationError("cutoff must be nonnegative");
  coeff_.assign(static_cast<std::size_t>(2 * cutoff + 1), Complex{});
}

bool SpectralState::is_finite() const {
  return std::all_of(coeff_.begin(), coeff_.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

double SpectralState::hermitian_defect() const {
  double defect = std::abs((*this)[0].imag());
  for (int k = 1; k <= cutoff_; ++k) {
    defect = std::max(defect, std::abs((*this)[-k] - std::conj((*this)[k])));
  }
  return defect / std::max(1.0, max_abs(*this));
}

void SpectralState::enforce_hermitian() {
  (*this)[0] = Complex((*this)[0].real(), 0.0);
  for (int k = 1; k <= cutoff_; ++k) (*this)[-k] = std::conj((*this)[k]);
}

namespace {
void require_same_cutoff(const SpectralState& a, const SpectralState& b) {
  if (a.cutoff() != b.cutoff()) {
    throw ValidationError("cutoff mismatch: " + std::to_string(a.cutoff()) + " vs " +
                          std::to_string(b.cutoff()));
  }
}
}  // namespace

SpectralState& SpectralState::operator+=(const SpectralState& other) {
  require_same_cutoff(*this, other);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += other.coeff_[i];
  return *this;
}

SpectralState& SpectralState::operator-=(const SpectralState& other) {
  require_same_cutoff(*this, other);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= other.coeff_[i];
  return *this;
}

SpectralState& SpectralState::operator*=(Complex scale) {
  for (auto& c : coeff_) c *= scale;
  return *this;
}

SpectralState& SpectralState::add_scaled(Complex scale, const SpectralState& other) {
  require_same_cutoff(*this, other);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += scale * other.coeff_[i];
  return *this;
}

SpectralState operator+(SpectralState a, const SpectralState& b) { return a += b; }
SpectralState operator-(SpectralState a, const SpectralState& b) { return a -= b; }
SpectralState operator*(Complex scale, SpectralState a) { return a *= scale; }

double sobolev_norm(const SpectralState& v, double s) {
  double sum = 0.0;
  for (int k = -v.cutoff(); k <= v.cutoff(); ++k) {
    sum += std::pow(weight(k), 2.0 * s) * std::norm(v[k]);
  }
  return std::sqrt(sum);
}

double l2_mass(const SpectralState& v) {
  double sum = 0.0;
  for (const auto& c : v.coefficients()) sum += std::norm(c);
  return sum;
}

double max_abs(const SpectralState& a) {
  double m = 0.0;
  for (const auto& c : a.coefficients()) m = std::max(m, std::abs(c));
  return m;
}

double max_abs_difference(const SpectralState& a, const SpectralState& b) {
  require_same_cutoff(a, b);
  double m = 0.0;
  for (int k = -a.cutoff(); k <= a.cutoff(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double relative_residual(const SpectralState& a, const SpectralState& b) {
  const double scale = std::max(max_abs(a), max_abs(b));
  if (scale == 0.0) return 0.0;
  return max_abs_difference(a, b) / scale;
}

SpectralState project(const SpectralState& v, int n) {
  SpectralState out = v;
  for (int k = -v.cutoff(); k <= v.cutoff(); ++k) {
    if (std::abs(k) > n) out[k] = Complex{};
  }
  return out;
}

SpectralState resize(const SpectralState& v, int cutoff) {
  SpectralState out(cutoff, v.time());
  const int common = std::min(cutoff, v.cutoff());
  for (int k = -common; k <= common; ++k) out[k] = v[k];
  return out;
}

std::uint64_t member_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SpectralState random_state(int cutoff, double s, double amplitude, std::uint64_t seed) {
  SpectralState v(cutoff);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  v[0] = Complex(amplitude * std::pow(weight(0), -s - 0.5) * gauss(gen), 0.0);
  const double half = std::sqrt(0.5);
  for (int k = 1; k <= cutoff; ++k) {
    const double re = gauss(gen);
    const double im = gauss(gen);
    v[k] = amplitude * std::pow(weight(k), -s - 0.5) * half * Complex(re, im);
    v[-k] = std::conj(v[k]);
  }
  return v;
}

SpectralState gauge_to_interaction(const SpectralState& u, double t) {
  SpectralState v(u.cutoff(), t);
  for (int k = -u.cutoff(); k <= u.cutoff(); ++k) {
    const double k3 = static_cast<double>(k) * k * k;
    v[k] = unit_phase(k3 * t) * u[k];
  }
  return v;
}

SpectralState interaction_to_gauge(const SpectralState& v, double t) {
  SpectralState u(v.cutoff(), t);
  for (int k = -v.cutoff(); k <= v.cutoff(); ++k) {
    const double k3 = static_cast<double>(k) * k * k;
    u[k] = unit_phase(-k3 * t) * v[k];
  }
  return u;
}

SpectralState spatial_shift(const SpectralState& u, double x0) {
  SpectralState out(u.cutoff(), u.time());
  for (int k = -u.cutoff(); k <= u.cutoff(); ++k) out[k] = unit_phase(-k * x0) * u[k];
  return out;
}

}  // namespace nfmkdv
