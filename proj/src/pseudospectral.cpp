#include <fftw3.h>

#include <mutex>

#include "nfmkdv/errors.hpp"
#include "nfmkdv/solver.hpp"

namespace nfmkdv {
namespace {

// The FFTW planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class AliasFreeGrid {
 public:
  explicit AliasFreeGrid(int cutoff) : cutoff_(cutoff), size_(2 * (2 * cutoff + 1)) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    u_ = fftw_alloc_complex(static_cast<std::size_t>(size_));
    ux_ = fftw_alloc_complex(static_cast<std::size_t>(size_));
    backward_ = fftw_plan_dft_1d(size_, u_, u_, FFTW_BACKWARD, FFTW_ESTIMATE);
    forward_ = fftw_plan_dft_1d(size_, u_, u_, FFTW_FORWARD, FFTW_ESTIMATE);
    if (!u_ || !ux_ || !backward_ || !forward_) throw NumericalError("FFTW setup failed");
  }
  AliasFreeGrid(const AliasFreeGrid&) = delete;
  AliasFreeGrid& operator=(const AliasFreeGrid&) = delete;
  ~AliasFreeGrid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(backward_);
    fftw_destroy_plan(forward_);
    fftw_free(u_);
    fftw_free(ux_);
  }

  // sigma (u^2 - shift) u_x, projected back onto |k| <= K.
  SpectralState cubic(const SpectralState& u, int sigma, double shift) {
    clear(u_);
    clear(ux_);
    for (int k = -cutoff_; k <= cutoff_; ++k) {
      const std::size_t idx = slot(k);
      const Complex c = u[k];
      const Complex d = Complex(0.0, k) * c;
      u_[idx][0] = c.real();
      u_[idx][1] = c.imag();
      ux_[idx][0] = d.real();
      ux_[idx][1] = d.imag();
    }
    fftw_execute_dft(backward_, u_, u_);
    fftw_execute_dft(backward_, ux_, ux_);
    for (int j = 0; j < size_; ++j) {
      const double x = u_[j][0];
      u_[j][0] = (x * x - shift) * ux_[j][0];
      u_[j][1] = 0.0;
    }
    fftw_execute_dft(forward_, u_, u_);
    SpectralState out(cutoff_, u.time());
    const double scale = static_cast<double>(sigma) / size_;
    for (int k = -cutoff_; k <= cutoff_; ++k) {
      const std::size_t idx = slot(k);
      out[k] = scale * Complex(u_[idx][0], u_[idx][1]);
    }
    out.enforce_hermitian();
    return out;
  }

 private:
  std::size_t slot(int k) const { return static_cast<std::size_t>(k < 0 ? k + size_ : k); }
  void clear(fftw_complex* a) const {
    for (int j = 0; j < size_; ++j) a[j][0] = a[j][1] = 0.0;
  }

  int cutoff_;
  int size_;
  fftw_complex* u_ = nullptr;
  fftw_complex* ux_ = nullptr;
  fftw_plan backward_ = nullptr;
  fftw_plan forward_ = nullptr;
};

}  // namespace

SpectralState pseudospectral_nonlinearity(const SpectralState& u, int sigma, bool renormalized) {
  if (sigma != 1 && sigma != -1) throw ValidationError("sigma must be +1 or -1");
  AliasFreeGrid grid(u.cutoff());
  return grid.cubic(u, sigma, renormalized ? l2_mass(u) : 0.0);
}

SpectralState rhs_pseudospectral(const SpectralState& u, const SolverConfig& cfg) {
  if (u.cutoff() != cfg.K) throw ValidationError("state cutoff does not match config K");
  SpectralState out = pseudospectral_nonlinearity(u, cfg.sigma, true);
  for (int k = -cfg.K; k <= cfg.K; ++k) {
    const double k3 = static_cast<double>(k) * k * k;
    out[k] += Complex(0.0, -k3) * u[k];
  }
  return out;
}

}  // namespace nfmkdv
