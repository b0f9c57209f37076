#pragma once

// Truncated Fourier representation of real-valued functions on the torus.
//
// Convention: u(x) = sum_k u_k e^{ikx}, |k| <= K. Every norm is a plain
// sequence-space sum, so (1/2pi) * integral of u^2 equals sum_k |u_k|^2.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nfmkdv {

using Complex = std::complex<double>;

// <k> = 1 + |k|.
inline double weight(long long k) { return 1.0 + static_cast<double>(k < 0 ? -k : k); }

class SpectralState {
 public:
  SpectralState() = default;
  // Zero state with coefficients for every |k| <= cutoff.
  explicit SpectralState(int cutoff, double time = 0.0);

  int cutoff() const { return cutoff_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  // Valid for -cutoff() <= k <= cutoff().
  Complex& operator[](int k) { return coeff_[static_cast<std::size_t>(k + cutoff_)]; }
  const Complex& operator[](int k) const { return coeff_[static_cast<std::size_t>(k + cutoff_)]; }

  // Coefficients ordered k = -K ... K.
  std::span<Complex> coefficients() { return coeff_; }
  std::span<const Complex> coefficients() const { return coeff_; }

  bool is_finite() const;
  // max_k |v_{-k} - conj(v_k)|, scaled by max(1, max_k |v_k|).
  double hermitian_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return hermitian_defect() <= tol; }
  // Overwrites negative frequencies with conjugates of the positive ones and
  // drops the imaginary part of the mean.
  void enforce_hermitian();

  SpectralState& operator+=(const SpectralState& other);
  SpectralState& operator-=(const SpectralState& other);
  SpectralState& operator*=(Complex scale);
  // this += scale * other
  SpectralState& add_scaled(Complex scale, const SpectralState& other);

  friend bool operator==(const SpectralState&, const SpectralState&) = default;

 private:
  int cutoff_ = 0;
  double time_ = 0.0;
  std::vector<Complex> coeff_ = std::vector<Complex>(1);
};

SpectralState operator+(SpectralState a, const SpectralState& b);
SpectralState operator-(SpectralState a, const SpectralState& b);
SpectralState operator*(Complex scale, SpectralState a);

// (sum_k <k>^{2s} |v_k|^2)^{1/2}
double sobolev_norm(const SpectralState& v, double s);
// sum_k |v_k|^2
double l2_mass(const SpectralState& v);
// max_k |a_k - b_k|
double max_abs_difference(const SpectralState& a, const SpectralState& b);
double max_abs(const SpectralState& a);
// max|a-b| / max(max|a|, max|b|); zero when both vanish.
double relative_residual(const SpectralState& a, const SpectralState& b);

// Dirichlet projection onto |k| <= n. The cutoff is unchanged.
SpectralState project(const SpectralState& v, int n);

// Re-embeds v at a different cutoff (zero-padding or truncation).
SpectralState resize(const SpectralState& v, int cutoff);

// v_k = amplitude * <k>^{-s-1/2} * g_k, g_k i.i.d. standard complex
// Gaussians (E|g|^2 = 1) for k > 0, v_0 real, v_{-k} = conj(v_k).
SpectralState random_state(int cutoff, double s, double amplitude, std::uint64_t seed);

// Seed for ensemble member `index` derived from a master seed (splitmix64).
std::uint64_t member_seed(std::uint64_t master, std::uint64_t index);

// v_k = e^{ik^3 t} u_k. The result carries time tag t.
SpectralState gauge_to_interaction(const SpectralState& u, double t);
// u_k = e^{-ik^3 t} v_k.
SpectralState interaction_to_gauge(const SpectralState& v, double t);

// u_k -> e^{-ik x0} u_k, i.e. u(x) -> u(x - x0).
SpectralState spatial_shift(const SpectralState& u, double x0);

// e^{i * m * t} computed with the libm argument reduction.
inline Complex unit_phase(double angle) { return std::polar(1.0, angle); }

}  // namespace nfmkdv
