#include "pcurl/grid.hpp"

#include <cmath>
#include <sstream>

namespace pcurl {

GridSpec GridSpec::cube(int n, double L) {
  GridSpec g;
  g.n = {n, n, n};
  g.L = {L, L, L};
  g.validate();
  return g;
}

void GridSpec::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (n[i] < 4) throw std::invalid_argument("GridSpec: n_i must be >= 4");
    if (!(L[i] > 0.0) || !std::isfinite(L[i]))
      throw std::invalid_argument("GridSpec: L_i must be positive");
  }
}

Vec VectorField3::flat() const {
  const std::size_t N = size();
  Vec f(3 * N);
  for (int a = 0; a < 3; ++a)
    std::copy(c[a].begin(), c[a].end(), f.begin() + a * N);
  return f;
}

VectorField3 VectorField3::from_flat(const GridSpec& s, const Vec& f) {
  const std::size_t N = s.size();
  if (f.size() != 3 * N) throw std::invalid_argument("from_flat: size mismatch");
  VectorField3 u(s);
  for (int a = 0; a < 3; ++a)
    std::copy(f.begin() + a * N, f.begin() + (a + 1) * N, u.c[a].begin());
  return u;
}

VectorField3& VectorField3::operator+=(const VectorField3& o) {
  for (int a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < size(); ++i) c[a][i] += o.c[a][i];
  return *this;
}

VectorField3& VectorField3::operator-=(const VectorField3& o) {
  for (int a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < size(); ++i) c[a][i] -= o.c[a][i];
  return *this;
}

VectorField3& VectorField3::operator*=(double t) {
  for (auto& comp : c)
    for (auto& x : comp) x *= t;
  return *this;
}

VectorField3 operator+(VectorField3 a, const VectorField3& b) { return a += b; }
VectorField3 operator-(VectorField3 a, const VectorField3& b) { return a -= b; }
VectorField3 operator*(double t, VectorField3 a) { return a *= t; }

Exponents::Exponents(double p) : p_(p) {
  if (!(p > 1.0 && p < 3.0)) {
    std::ostringstream os;
    os << "Exponents: p must lie in (1,3), got " << p;
    throw std::invalid_argument(os.str());
  }
}

void require_finite(const VectorField3& f, const char* what) {
  for (int a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < f.size(); ++i)
      if (!std::isfinite(f.c[a][i])) {
        std::ostringstream os;
        os << what << ": non-finite sample in component " << a << " at node " << i;
        throw std::domain_error(os.str());
      }
}

void require_finite(const ScalarField& f, const char* what) {
  for (std::size_t i = 0; i < f.data.size(); ++i)
    if (!std::isfinite(f.data[i])) {
      std::ostringstream os;
      os << what << ": non-finite sample at node " << i;
      throw std::domain_error(os.str());
    }
}

double lp_integral(const VectorField3& f, double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("lp_norm: need finite q >= 1");
  require_finite(f, "lp_norm");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m2 = f.c[0][i] * f.c[0][i] + f.c[1][i] * f.c[1][i] + f.c[2][i] * f.c[2][i];
    s += std::pow(m2, 0.5 * q);
  }
  return s * f.spec.cell_volume();
}

double lp_norm(const VectorField3& f, double q) {
  return std::pow(lp_integral(f, q), 1.0 / q);
}

double lp_norm(const ScalarField& f, double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("lp_norm: need finite q >= 1");
  require_finite(f, "lp_norm");
  double s = 0.0;
  for (double x : f.data) s += std::pow(std::abs(x), q);
  return std::pow(s * f.spec.cell_volume(), 1.0 / q);
}

double inner(const VectorField3& a, const VectorField3& b) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < a.size(); ++i) s += a.c[k][i] * b.c[k][i];
  return s * a.spec.cell_volume();
}

namespace {

int wrap(int j, int n) {
  j %= n;
  return j < 0 ? j + n : j;
}

// Whole-node offsets if y is node aligned (to 1e-12 of a spacing).
bool node_offsets(const GridSpec& g, const Vec3& y, std::array<int, 3>& off) {
  for (int a = 0; a < 3; ++a) {
    const double t = y[a] / g.h(a);
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-12 * std::max(1.0, std::abs(t))) return false;
    off[a] = static_cast<int>(r);
  }
  return true;
}

VectorField3 shifted(const VectorField3& u, const GridSpec& target,
                     const std::array<int, 3>& off, double amp) {
  const GridSpec& g = u.spec;
  VectorField3 out(target);
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const std::size_t src =
            g.index(wrap(i + off[0], g.n[0]), wrap(j + off[1], g.n[1]), wrap(k + off[2], g.n[2]));
        const std::size_t dst = g.index(i, j, k);
        for (int a = 0; a < 3; ++a) out.c[a][dst] = amp * u.c[a][src];
      }
  return out;
}

}  // namespace

double sample_trilinear(const VectorField3& u, int comp, const Vec3& x) {
  const GridSpec& g = u.spec;
  int i0[3];
  double t[3];
  for (int a = 0; a < 3; ++a) {
    const double s = x[a] / g.h(a) + g.n[a] / 2;
    const double f = std::floor(s);
    i0[a] = static_cast<int>(f);
    t[a] = s - f;
  }
  double acc = 0.0;
  for (int dz = 0; dz < 2; ++dz)
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) {
        const double wgt = (dx ? t[0] : 1 - t[0]) * (dy ? t[1] : 1 - t[1]) * (dz ? t[2] : 1 - t[2]);
        if (wgt == 0.0) continue;
        const std::size_t idx = g.index(wrap(i0[0] + dx, g.n[0]), wrap(i0[1] + dy, g.n[1]),
                                        wrap(i0[2] + dz, g.n[2]));
        acc += wgt * u.c[comp][idx];
      }
  return acc;
}

DilationResult dilate_translate(const VectorField3& u, double s, const Vec3& y,
                                const Exponents& e, DilationMode mode) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("dilate_translate: s must be > 0");
  const double amp = std::pow(s, 3.0 / e.p_star());
  const GridSpec& g = u.spec;
  DilationResult res;

  if (mode == DilationMode::rescale_grid) {
    GridSpec t = g;
    for (int a = 0; a < 3; ++a) t.L[a] = g.L[a] / s;
    // Node x'_j = x_j / s, so u(s x'_j + y) = u(x_j + y).
    std::array<int, 3> off{};
    if (node_offsets(g, y, off)) {
      res.field = shifted(u, t, off, amp);
      res.exact = true;
      return res;
    }
    VectorField3 out(t);
    for (int k = 0; k < g.n[2]; ++k)
      for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
          const Vec3 x = g.node(i, j, k);
          const Vec3 q{x[0] + y[0], x[1] + y[1], x[2] + y[2]};
          const std::size_t idx = g.index(i, j, k);
          for (int a = 0; a < 3; ++a) out.c[a][idx] = amp * sample_trilinear(u, a, q);
        }
    res.field = std::move(out);
    res.exact = false;
    return res;
  }

  std::array<int, 3> off{};
  if (s == 1.0 && node_offsets(g, y, off)) {
    res.field = shifted(u, g, off, amp);
    res.exact = true;
    return res;
  }
  VectorField3 out(g);
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const Vec3 x = g.node(i, j, k);
        const Vec3 q{s * x[0] + y[0], s * x[1] + y[1], s * x[2] + y[2]};
        const std::size_t idx = g.index(i, j, k);
        for (int a = 0; a < 3; ++a) out.c[a][idx] = amp * sample_trilinear(u, a, q);
      }
  res.field = std::move(out);
  res.exact = false;
  return res;
}

ScalarField abs_field(const VectorField3& v) {
  require_finite(v, "abs_field");
  ScalarField m(v.spec);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3 a = v.at(i);
    m.data[i] = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  }
  return m;
}

GradAbsReport grad_abs_check(const VectorField3& v) {
  const ScalarField m = abs_field(v);
  const GridSpec& g = v.spec;
  GradAbsReport rep;
  rep.max_defect = -INFINITY;
  std::size_t stride[3] = {1, static_cast<std::size_t>(g.n[0]),
                           static_cast<std::size_t>(g.n[0]) * g.n[1]};
  for (int k = 1; k < g.n[2] - 1; ++k)
    for (int j = 1; j < g.n[1] - 1; ++j)
      for (int i = 1; i < g.n[0] - 1; ++i) {
        const std::size_t idx = g.index(i, j, k);
        double gm2 = 0.0, gv2 = 0.0;
        for (int a = 0; a < 3; ++a) {
          const double inv = 1.0 / (2.0 * g.h(a));
          const double dm = (m.data[idx + stride[a]] - m.data[idx - stride[a]]) * inv;
          gm2 += dm * dm;
          for (int c = 0; c < 3; ++c) {
            const double dv = (v.c[c][idx + stride[a]] - v.c[c][idx - stride[a]]) * inv;
            gv2 += dv * dv;
          }
        }
        const double d = std::sqrt(gm2) - std::sqrt(gv2);
        rep.max_defect = std::max(rep.max_defect, d);
        rep.max_abs_gap = std::max(rep.max_abs_gap, std::abs(d));
        rep.max_grad = std::max(rep.max_grad, std::sqrt(gv2));
      }
  return rep;
}

}  // namespace pcurl
