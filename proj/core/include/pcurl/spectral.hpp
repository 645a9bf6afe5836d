#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "pcurl/grid.hpp"

namespace pcurl {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Real-to-complex FFT plans and wavenumber tables for one grid.
// Half-spectrum layout: kx index 0..n1/2 fastest, then ky, then kz.
// Derivative symbols k' equal k except at the Nyquist index, where they are 0.
// Holds mutable buffers: one workspace per thread.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const GridSpec& g);
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const GridSpec& spec() const { return spec_; }
  std::size_t real_size() const { return spec_.size(); }
  std::size_t spectral_size() const { return nh_ * spec_.n[1] * spec_.n[2]; }

  void forward(const double* in, cplx* out) const;
  // Normalized inverse: inverse(forward(f)) == f.
  void inverse(const cplx* in, double* out) const;

  // Derivative symbol along axis a for half-spectrum entry idx.
  double kd(int axis, std::size_t idx) const;
  // Derivative symbols per axis (axis 0 has the half length nh()).
  const std::vector<double>& k_axis(int axis) const { return k_[axis]; }
  std::size_t nh() const { return nh_; }
  // |k'|^2 for entry idx.
  double kd2(std::size_t idx) const { return kd2_[idx]; }

 private:
  GridSpec spec_;
  std::size_t nh_;
  std::vector<double> k_[3];
  std::vector<double> kd2_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace pcurl
