#include "pcurl/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace pcurl {

struct SpectralWorkspace::Plans {
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  std::size_t nr = 0, nc = 0;
};

SpectralWorkspace::SpectralWorkspace(const GridSpec& g)
    : spec_(g), nh_(static_cast<std::size_t>(g.n[0] / 2 + 1)), plans_(std::make_unique<Plans>()) {
  g.validate();
  for (int a = 0; a < 3; ++a) {
    const int n = g.n[a];
    const int len = a == 0 ? static_cast<int>(nh_) : n;
    k_[a].resize(len);
    for (int j = 0; j < len; ++j) {
      int m = (a == 0) ? j : (j <= n / 2 ? j : j - n);
      if (n % 2 == 0 && std::abs(m) == n / 2) m = 0;
      k_[a][j] = 2.0 * std::numbers::pi * m / g.L[a];
    }
  }
  kd2_.resize(spectral_size());
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (std::size_t i = 0; i < nh_; ++i) {
        const std::size_t idx = i + nh_ * (j + static_cast<std::size_t>(g.n[1]) * k);
        kd2_[idx] = k_[0][i] * k_[0][i] + k_[1][j] * k_[1][j] + k_[2][k] * k_[2][k];
      }

  Plans& p = *plans_;
  p.nr = real_size();
  p.nc = spectral_size();
  p.rbuf = fftw_alloc_real(p.nr);
  p.cbuf = fftw_alloc_complex(p.nc);
  if (!p.rbuf || !p.cbuf) throw std::bad_alloc();
  // Memory is x-fastest, so FFTW sees dims (n3, n2, n1).
  p.fwd = fftw_plan_dft_r2c_3d(g.n[2], g.n[1], g.n[0], p.rbuf, p.cbuf, FFTW_ESTIMATE);
  p.inv = fftw_plan_dft_c2r_3d(g.n[2], g.n[1], g.n[0], p.cbuf, p.rbuf, FFTW_ESTIMATE);
  if (!p.fwd || !p.inv) throw std::runtime_error("SpectralWorkspace: FFTW planning failed");
}

SpectralWorkspace::~SpectralWorkspace() {
  if (!plans_) return;
  if (plans_->fwd) fftw_destroy_plan(plans_->fwd);
  if (plans_->inv) fftw_destroy_plan(plans_->inv);
  fftw_free(plans_->rbuf);
  fftw_free(plans_->cbuf);
}

double SpectralWorkspace::kd(int axis, std::size_t idx) const {
  const std::size_t i = idx % nh_;
  const std::size_t rest = idx / nh_;
  const std::size_t j = rest % spec_.n[1];
  const std::size_t k = rest / spec_.n[1];
  return axis == 0 ? k_[0][i] : axis == 1 ? k_[1][j] : k_[2][k];
}

void SpectralWorkspace::forward(const double* in, cplx* out) const {
  Plans& p = *plans_;
  std::memcpy(p.rbuf, in, p.nr * sizeof(double));
  fftw_execute(p.fwd);
  std::memcpy(static_cast<void*>(out), p.cbuf, p.nc * sizeof(fftw_complex));
}

void SpectralWorkspace::inverse(const cplx* in, double* out) const {
  Plans& p = *plans_;
  std::memcpy(p.cbuf, in, p.nc * sizeof(fftw_complex));
  fftw_execute(p.inv);
  const double s = 1.0 / static_cast<double>(p.nr);
  for (std::size_t i = 0; i < p.nr; ++i) out[i] = p.rbuf[i] * s;
}

}  // namespace pcurl
