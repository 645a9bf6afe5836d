#include "pcurl/discretization.hpp"

#include "multigrid.hpp"

#include <cmath>
#include <numbers>

namespace pcurl {

double integral_pow(const CellQuadrature& quad, const Vec& u, double q, double eps2) {
  Vec s;
  quad.pair(u, u, s);
  const Vec& W = quad.weights();
  double acc = 0.0;
  if (eps2 == 0.0 && q == 2.0) {
    for (std::size_t c = 0; c < s.size(); ++c) acc += W[c] * s[c];
  } else {
    const double e = 0.5 * q;
    for (std::size_t c = 0; c < s.size(); ++c) acc += W[c] * std::pow(s[c] + eps2, e);
  }
  return acc;
}

double mass_inner(const Discretization& d, const Vec& a, const Vec& b) {
  const Vec& m = d.mass();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += m[i] * a[i] * b[i];
  return s;
}

namespace {

class NodeQuadrature final : public CellQuadrature {
 public:
  NodeQuadrature(std::size_t n, double w) : n_(n), w_(n, w) {}
  std::size_t cells() const override { return n_; }
  const Vec& weights() const override { return w_; }
  void pair(const Vec& u, const Vec& v, Vec& s) const override {
    s.resize(n_);
    const double *u0 = u.data(), *u1 = u0 + n_, *u2 = u1 + n_;
    const double *v0 = v.data(), *v1 = v0 + n_, *v2 = v1 + n_;
    for (std::size_t i = 0; i < n_; ++i) s[i] = u0[i] * v0[i] + u1[i] * v1[i] + u2[i] * v2[i];
  }
  void pullback(const Vec& coef, const Vec& u, Vec& out) const override {
    out.resize(3 * n_);
    for (int a = 0; a < 3; ++a)
      for (std::size_t i = 0; i < n_; ++i) out[a * n_ + i] = coef[i] * u[a * n_ + i];
  }

 private:
  std::size_t n_;
  Vec w_;
};

}  // namespace

PeriodicDisc::PeriodicDisc(const GridSpec& g)
    : spec_(g),
      ws_(std::make_unique<SpectralWorkspace>(g)),
      quad_(std::make_unique<NodeQuadrature>(g.size(), g.cell_volume())),
      mass_(3 * g.size(), g.cell_volume()) {
  for (auto& b : buf_) b.resize(ws_->spectral_size());
}

PeriodicDisc::~PeriodicDisc() = default;

void PeriodicDisc::curl(const Vec& u, Vec& out) const {
  const std::size_t N = spec_.size();
  out.resize(3 * N);
  for (int a = 0; a < 3; ++a) ws_->forward(u.data() + a * N, buf_[a].data());
  const auto& kx = ws_->k_axis(0);
  const auto& ky = ws_->k_axis(1);
  const auto& kz = ws_->k_axis(2);
  const cplx I(0.0, 1.0);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < kz.size(); ++k)
    for (std::size_t j = 0; j < ky.size(); ++j)
      for (std::size_t i = 0; i < ws_->nh(); ++i, ++idx) {
        const cplx U0 = buf_[0][idx], U1 = buf_[1][idx], U2 = buf_[2][idx];
        buf_[0][idx] = I * (ky[j] * U2 - kz[k] * U1);
        buf_[1][idx] = I * (kz[k] * U0 - kx[i] * U2);
        buf_[2][idx] = I * (kx[i] * U1 - ky[j] * U0);
      }
  for (int a = 0; a < 3; ++a) ws_->inverse(buf_[a].data(), out.data() + a * N);
}

void PeriodicDisc::spectral_op(Vec& f, SpecOp op) const {
  const std::size_t N = spec_.size();
  for (int a = 0; a < 3; ++a) ws_->forward(f.data() + a * N, buf_[a].data());
  const auto& kx = ws_->k_axis(0);
  const auto& ky = ws_->k_axis(1);
  const auto& kz = ws_->k_axis(2);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < kz.size(); ++k)
    for (std::size_t j = 0; j < ky.size(); ++j)
      for (std::size_t i = 0; i < ws_->nh(); ++i, ++idx) {
        const double K[3] = {kx[i], ky[j], kz[k]};
        const double k2 = K[0] * K[0] + K[1] * K[1] + K[2] * K[2];
        cplx* U[3] = {&buf_[0][idx], &buf_[1][idx], &buf_[2][idx]};
        if (k2 == 0.0) {
          // Mean and Nyquist-only modes: neither gradients nor in V_h.
          for (auto* u : U) *u = 0.0;
          continue;
        }
        const cplx kdotu = K[0] * *U[0] + K[1] * *U[1] + K[2] * *U[2];
        switch (op) {
          case SpecOp::projW:
            for (int a = 0; a < 3; ++a) *U[a] = K[a] * kdotu / k2;
            break;
          case SpecOp::projV:
            for (int a = 0; a < 3; ++a) *U[a] -= K[a] * kdotu / k2;
            break;
          case SpecOp::gradDiv:
            for (int a = 0; a < 3; ++a) *U[a] = K[a] * kdotu;
            break;
          case SpecOp::hodgeInv:
            for (int a = 0; a < 3; ++a) *U[a] = (*U[a] - K[a] * kdotu / k2) / k2;
            break;
        }
      }
  for (int a = 0; a < 3; ++a) ws_->inverse(buf_[a].data(), f.data() + a * N);
}

void PeriodicDisc::project_W(Vec& f) const { spectral_op(f, SpecOp::projW); }
void PeriodicDisc::project_V(Vec& f) const { spectral_op(f, SpecOp::projV); }
void PeriodicDisc::grad_div(Vec& f) const { spectral_op(f, SpecOp::gradDiv); }
void PeriodicDisc::precondition(Vec& g) const { spectral_op(g, SpecOp::hodgeInv); }

bool PeriodicDisc::newton_project_W(const Vec& u, double q, Vec& f) const {
  const std::size_t N = spec_.size();
  // H = |u|^{q-2} (I + (q-2) uhat uhat^T) + floor I per node.
  Vec mag(N);
  double hmax = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double s2 = u[i] * u[i] + u[N + i] * u[N + i] + u[2 * N + i] * u[2 * N + i];
    mag[i] = s2 > 0.0 ? std::pow(s2, 0.5 * q - 1.0) : 0.0;
    hmax = std::max(hmax, (q - 1.0) * mag[i]);
  }
  const double floor = 1e-4 * hmax;
  const auto& kx = ws_->k_axis(0);
  const auto& ky = ws_->k_axis(1);
  const auto& kz = ws_->k_axis(2);
  const cplx I(0.0, 1.0);
  auto grad = [&](const Vec& phi, Vec& out) {
    out.resize(3 * N);
    ws_->forward(phi.data(), buf_[0].data());
    for (int a = 0; a < 3; ++a) {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < kz.size(); ++k)
        for (std::size_t j = 0; j < ky.size(); ++j)
          for (std::size_t i = 0; i < ws_->nh(); ++i, ++idx) {
            const double kk = a == 0 ? kx[i] : a == 1 ? ky[j] : kz[k];
            buf_[1][idx] = I * kk * buf_[0][idx];
          }
      ws_->inverse(buf_[1].data(), out.data() + a * N);
    }
  };
  // -div, the transpose of grad.
  auto mdiv = [&](const Vec& F, Vec& out) {
    out.resize(N);
    for (int a = 0; a < 3; ++a) ws_->forward(F.data() + a * N, buf_[a].data());
    std::size_t idx = 0;
    for (std::size_t k = 0; k < kz.size(); ++k)
      for (std::size_t j = 0; j < ky.size(); ++j)
        for (std::size_t i = 0; i < ws_->nh(); ++i, ++idx)
          buf_[0][idx] = -I * (kx[i] * buf_[0][idx] + ky[j] * buf_[1][idx] + kz[k] * buf_[2][idx]);
    ws_->inverse(buf_[0].data(), out.data());
  };
  std::array<Vec, 3> hc;
  for (int a = 0; a < 3; ++a) hc[a].resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double s2 = u[i] * u[i] + u[N + i] * u[N + i] + u[2 * N + i] * u[2 * N + i];
    for (int a = 0; a < 3; ++a) {
      const double ua = u[a * N + i];
      hc[a][i] = mag[i] * (1.0 + (s2 > 0.0 ? (q - 2.0) * ua * ua / s2 : 0.0)) + floor;
    }
  }
  const detail::PeriodicMultigrid mg(spec_, hc);
  // T = (Delta_fd / Delta_spectral)^{1/2} per mode makes T M T exact for constant coefficients;
  // without it the modes the spectral derivative zeroes at the Nyquist index stall the iteration.
  const std::size_t M = ws_->spectral_size();
  Vec tsym(M, 0.0);
  {
    std::array<Vec, 3> fd;
    for (int a = 0; a < 3; ++a) {
      const int n = spec_.n[a];
      const std::size_t len = a == 0 ? ws_->nh() : static_cast<std::size_t>(n);
      fd[a].resize(len);
      for (std::size_t m = 0; m < len; ++m) {
        const double s = 2.0 * std::sin(std::numbers::pi * static_cast<double>(m) / n) / spec_.h(a);
        fd[a][m] = s * s;
      }
    }
    std::size_t idx = 0;
    for (std::size_t k = 0; k < kz.size(); ++k)
      for (std::size_t j = 0; j < ky.size(); ++j)
        for (std::size_t i = 0; i < ws_->nh(); ++i, ++idx) {
          const double ks = ws_->kd2(idx);
          if (ks > 0.0) tsym[idx] = std::sqrt((fd[0][i] + fd[1][j] + fd[2][k]) / ks);
        }
  }
  auto filter = [&](Vec& v) {
    ws_->forward(v.data(), buf_[0].data());
    for (std::size_t i = 0; i < M; ++i) buf_[0][i] *= tsym[i];
    ws_->inverse(buf_[0].data(), v.data());
  };
  auto precond = [&](const Vec& r, Vec& z) {
    Vec t = r;
    filter(t);
    mg.vcycle(t, z);
    filter(z);
  };
  auto apply_K = [&](const Vec& phi, Vec& out) {
    Vec g;
    grad(phi, g);
    for (std::size_t i = 0; i < N; ++i) {
      const double s2 = u[i] * u[i] + u[N + i] * u[N + i] + u[2 * N + i] * u[2 * N + i];
      const double ug = u[i] * g[i] + u[N + i] * g[N + i] + u[2 * N + i] * g[2 * N + i];
      const double c = s2 > 0.0 ? (q - 2.0) * mag[i] * ug / s2 : 0.0;
      for (int a = 0; a < 3; ++a) g[a * N + i] = (mag[i] + floor) * g[a * N + i] + c * u[a * N + i];
    }
    mdiv(g, out);
  };

  Vec b, r, z, dk, Kd, phi(N, 0.0);
  mdiv(f, b);
  r = b;
  precond(r, z);
  dk = z;
  double rz = 0.0, bnorm = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    rz += r[i] * z[i];
    bnorm += b[i] * b[i];
  }
  bnorm = std::sqrt(bnorm);
  for (int it = 0; it < 20 && rz > 0.0; ++it) {
    apply_K(dk, Kd);
    double qKq = 0.0;
    for (std::size_t i = 0; i < N; ++i) qKq += dk[i] * Kd[i];
    if (!(qKq > 0.0)) break;
    const double alpha = rz / qKq;
    double rr = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      phi[i] += alpha * dk[i];
      r[i] -= alpha * Kd[i];
      rr += r[i] * r[i];
    }
    if (std::sqrt(rr) <= 1e-2 * bnorm) break;
    precond(r, z);
    double rz_new = 0.0;
    for (std::size_t i = 0; i < N; ++i) rz_new += r[i] * z[i];
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < N; ++i) dk[i] = z[i] + beta * dk[i];
  }
  grad(phi, f);
  return true;
}

void PeriodicDisc::gradient_tensor(const Vec& u, Vec& out) const {
  const std::size_t N = spec_.size();
  out.resize(9 * N);
  const cplx I(0.0, 1.0);
  for (int a = 0; a < 3; ++a) {
    ws_->forward(u.data() + a * N, buf_[0].data());
    for (int b = 0; b < 3; ++b) {
      const auto& kb = ws_->k_axis(b);
      std::size_t idx = 0;
      for (int k = 0; k < spec_.n[2]; ++k)
        for (int j = 0; j < spec_.n[1]; ++j)
          for (std::size_t i = 0; i < ws_->nh(); ++i, ++idx) {
            const double kk = b == 0 ? kb[i] : b == 1 ? kb[j] : kb[k];
            buf_[1][idx] = I * kk * buf_[0][idx];
          }
      ws_->inverse(buf_[1].data(), out.data() + (3 * a + b) * N);
    }
  }
}

void PeriodicDisc::gradient_tensor_transpose(const Vec& t, Vec& out) const {
  // The spectral derivative is antisymmetric: D^T = -D.
  const std::size_t N = spec_.size();
  out.assign(3 * N, 0.0);
  const cplx I(0.0, 1.0);
  for (int a = 0; a < 3; ++a) {
    std::fill(buf_[2].begin(), buf_[2].end(), cplx(0.0));
    for (int b = 0; b < 3; ++b) {
      ws_->forward(t.data() + (3 * a + b) * N, buf_[0].data());
      const auto& kb = ws_->k_axis(b);
      std::size_t idx = 0;
      for (int k = 0; k < spec_.n[2]; ++k)
        for (int j = 0; j < spec_.n[1]; ++j)
          for (std::size_t i = 0; i < ws_->nh(); ++i, ++idx) {
            const double kk = b == 0 ? kb[i] : b == 1 ? kb[j] : kb[k];
            buf_[2][idx] -= I * kk * buf_[0][idx];
          }
    }
    ws_->inverse(buf_[2].data(), out.data() + a * N);
  }
}

}  // namespace pcurl
