#include "pcurl/diffops.hpp"

#include <cmath>
#include <optional>

namespace pcurl {

namespace {

template <class F>
void for_each_mode(const SpectralWorkspace& ws, F&& f) {
  const auto& kx = ws.k_axis(0);
  const auto& ky = ws.k_axis(1);
  const auto& kz = ws.k_axis(2);
  const std::size_t nh = ws.nh();
  std::size_t idx = 0;
  for (std::size_t k = 0; k < kz.size(); ++k)
    for (std::size_t j = 0; j < ky.size(); ++j)
      for (std::size_t i = 0; i < nh; ++i, ++idx) f(idx, kx[i], ky[j], kz[k]);
}

// Workspace from the caller or a local one.
class WsHolder {
 public:
  WsHolder(const GridSpec& g, SpectralWorkspace* ws) {
    if (ws) {
      if (!(ws->spec() == g)) throw std::invalid_argument("workspace grid mismatch");
      ptr_ = ws;
    } else {
      own_.emplace(g);
      ptr_ = &*own_;
    }
  }
  SpectralWorkspace& operator*() { return *ptr_; }
  SpectralWorkspace* operator->() { return ptr_; }

 private:
  std::optional<SpectralWorkspace> own_;
  SpectralWorkspace* ptr_ = nullptr;
};

// First derivative along axis a by centered differences, periodic wrap.
void fd_deriv(const GridSpec& g, const Vec& f, int a, int order, Vec& out) {
  out.assign(f.size(), 0.0);
  const double h = g.h(a);
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        int id[3] = {i, j, k};
        auto at = [&](int off) {
          int q[3] = {id[0], id[1], id[2]};
          q[a] = ((q[a] + off) % g.n[a] + g.n[a]) % g.n[a];
          return f[g.index(q[0], q[1], q[2])];
        };
        double d;
        if (order == 2)
          d = (at(1) - at(-1)) / (2.0 * h);
        else
          d = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
        out[g.index(i, j, k)] = d;
      }
}

int fd_order(DiffMode m) { return m == DiffMode::fd2 ? 2 : 4; }

}  // namespace

int stencil_margin(DiffMode mode) {
  switch (mode) {
    case DiffMode::fd2: return 1;
    case DiffMode::fd4: return 2;
    default: return 0;
  }
}

bool is_interior(const GridSpec& g, int i, int j, int k, int margin) {
  return i >= margin && j >= margin && k >= margin && i < g.n[0] - margin &&
         j < g.n[1] - margin && k < g.n[2] - margin;
}

double max_interior_diff(const VectorField3& a, const VectorField3& b, int margin) {
  const GridSpec& g = a.spec;
  double m = 0.0;
  for (int k = margin; k < g.n[2] - margin; ++k)
    for (int j = margin; j < g.n[1] - margin; ++j)
      for (int i = margin; i < g.n[0] - margin; ++i) {
        const std::size_t idx = g.index(i, j, k);
        double s = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double d = a.c[c][idx] - b.c[c][idx];
          s += d * d;
        }
        m = std::max(m, std::sqrt(s));
      }
  return m;
}

VectorField3 curl(const VectorField3& u, DiffMode mode, SpectralWorkspace* ws) {
  const GridSpec& g = u.spec;
  VectorField3 out(g);
  if (mode != DiffMode::spectral) {
    const int ord = fd_order(mode);
    Vec d;
    // out_x = d_y u_z - d_z u_y, cyclic.
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      fd_deriv(g, u.c[c], b, ord, d);
      for (std::size_t i = 0; i < d.size(); ++i) out.c[a][i] += d[i];
      fd_deriv(g, u.c[b], c, ord, d);
      for (std::size_t i = 0; i < d.size(); ++i) out.c[a][i] -= d[i];
    }
    return out;
  }
  WsHolder w(g, ws);
  const std::size_t ns = w->spectral_size();
  CVec U[3], C[3];
  for (int a = 0; a < 3; ++a) {
    U[a].resize(ns);
    C[a].resize(ns);
    w->forward(u.c[a].data(), U[a].data());
  }
  const cplx I(0.0, 1.0);
  for_each_mode(*w, [&](std::size_t idx, double kx, double ky, double kz) {
    C[0][idx] = I * (ky * U[2][idx] - kz * U[1][idx]);
    C[1][idx] = I * (kz * U[0][idx] - kx * U[2][idx]);
    C[2][idx] = I * (kx * U[1][idx] - ky * U[0][idx]);
  });
  for (int a = 0; a < 3; ++a) w->inverse(C[a].data(), out.c[a].data());
  return out;
}

ScalarField div(const VectorField3& u, DiffMode mode, SpectralWorkspace* ws) {
  const GridSpec& g = u.spec;
  ScalarField out(g);
  if (mode != DiffMode::spectral) {
    Vec d;
    for (int a = 0; a < 3; ++a) {
      fd_deriv(g, u.c[a], a, fd_order(mode), d);
      for (std::size_t i = 0; i < d.size(); ++i) out.data[i] += d[i];
    }
    return out;
  }
  WsHolder w(g, ws);
  const std::size_t ns = w->spectral_size();
  CVec U(ns), D(ns, 0.0);
  const cplx I(0.0, 1.0);
  for (int a = 0; a < 3; ++a) {
    w->forward(u.c[a].data(), U.data());
    for_each_mode(*w, [&](std::size_t idx, double kx, double ky, double kz) {
      const double ka = a == 0 ? kx : a == 1 ? ky : kz;
      D[idx] += I * ka * U[idx];
    });
  }
  w->inverse(D.data(), out.data.data());
  return out;
}

VectorField3 grad(const ScalarField& phi, DiffMode mode, SpectralWorkspace* ws) {
  const GridSpec& g = phi.spec;
  VectorField3 out(g);
  if (mode != DiffMode::spectral) {
    for (int a = 0; a < 3; ++a) fd_deriv(g, phi.data, a, fd_order(mode), out.c[a]);
    return out;
  }
  WsHolder w(g, ws);
  const std::size_t ns = w->spectral_size();
  CVec P(ns), G(ns);
  w->forward(phi.data.data(), P.data());
  const cplx I(0.0, 1.0);
  for (int a = 0; a < 3; ++a) {
    for_each_mode(*w, [&](std::size_t idx, double kx, double ky, double kz) {
      const double ka = a == 0 ? kx : a == 1 ? ky : kz;
      G[idx] = I * ka * P[idx];
    });
    w->inverse(G.data(), out.c[a].data());
  }
  return out;
}

ScalarField laplacian(const ScalarField& phi, SpectralWorkspace* ws) {
  WsHolder w(phi.spec, ws);
  CVec P(w->spectral_size());
  w->forward(phi.data.data(), P.data());
  for (std::size_t i = 0; i < P.size(); ++i) P[i] *= -w->kd2(i);
  ScalarField out(phi.spec);
  w->inverse(P.data(), out.data.data());
  return out;
}

PoissonResult poisson_solve(const ScalarField& rho, SpectralWorkspace* ws) {
  require_finite(rho, "poisson_solve");
  WsHolder w(rho.spec, ws);
  PoissonResult res;
  double mean = 0.0;
  for (double x : rho.data) mean += x;
  res.removed_mean = mean / static_cast<double>(rho.data.size());
  CVec P(w->spectral_size());
  w->forward(rho.data.data(), P.data());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double k2 = w->kd2(i);
    P[i] = k2 > 0.0 ? -P[i] / k2 : cplx(0.0);
  }
  res.phi = ScalarField(rho.spec);
  w->inverse(P.data(), res.phi.data.data());
  return res;
}

HelmholtzSplit helmholtz_split(const VectorField3& u, SpectralWorkspace* ws) {
  require_finite(u, "helmholtz_split");
  WsHolder w(u.spec, ws);
  const ScalarField d = div(u, DiffMode::spectral, &*w);
  const PoissonResult ps = poisson_solve(d, &*w);
  HelmholtzSplit s;
  s.w = grad(ps.phi, DiffMode::spectral, &*w);
  s.v = u - s.w;
  return s;
}

}  // namespace pcurl
