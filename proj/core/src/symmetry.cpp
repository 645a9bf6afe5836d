#include "pcurl/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pcurl/field_io.hpp"
#include "pcurl/oracles.hpp"

namespace pcurl {

OComponents o_components(const VectorField3& u) {
  require_finite(u, "o_components");
  const GridSpec& g = u.spec;
  OComponents oc{VectorField3(g), VectorField3(g), VectorField3(g)};
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const std::size_t idx = g.index(i, j, k);
        const Vec3 x = g.node(i, j, k);
        const Vec3 v = u.at(idx);
        const double r = std::hypot(x[0], x[1]);
        if (r == 0.0) {
          oc.zeta.set(idx, v);
          continue;
        }
        const double c = x[0] / r, s = x[1] / r;
        const double ur = v[0] * c + v[1] * s;
        const double ut = -v[0] * s + v[1] * c;
        oc.rho.set(idx, {ur * c, ur * s, 0.0});
        oc.tau.set(idx, {-ut * s, ut * c, 0.0});
        oc.zeta.set(idx, {0.0, 0.0, v[2]});
      }
  return oc;
}

VectorField3 apply_T(const VectorField3& u) {
  OComponents oc = o_components(u);
  return oc.tau - oc.rho - oc.zeta;
}

VectorField3 apply_S(const VectorField3& u) { return -1.0 * apply_T(u); }

VectorField3 project_T(const VectorField3& u) { return o_components(u).tau; }

VectorField3 project_S(const VectorField3& u) {
  OComponents oc = o_components(u);
  return oc.rho + oc.zeta;
}

VectorField3 rotate_quarter(const VectorField3& u, int quarter_turns) {
  const GridSpec& g = u.spec;
  if (g.n[0] != g.n[1] || g.L[0] != g.L[1])
    throw std::invalid_argument("rotate_quarter: needs n1 == n2 and L1 == L2");
  const int q = ((quarter_turns % 4) + 4) % 4;
  const int n = g.n[0];
  VectorField3 out(g);
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        // Preimage R^-q (x, y), indices taken modulo n (coordinate (i - n/2) h).
        int si = i, sj = j;
        for (int t = 0; t < q; ++t) {
          const int ni = sj, nj = (n - si) % n;  // R^-1 (x, y) = (y, -x)
          si = ni;
          sj = nj;
        }
        Vec3 v = u.at(g.index(si, sj, k));
        for (int t = 0; t < q; ++t) v = {-v[1], v[0], v[2]};
        out.set(g.index(i, j, k), v);
      }
  return out;
}

VectorField3 project_O_c4(const VectorField3& u) {
  VectorField3 acc = u;
  for (int q = 1; q < 4; ++q) acc += rotate_quarter(u, q);
  acc *= 0.25;
  return acc;
}

VectorField3 project_O(const VectorField3& u, int n_theta) {
  if (n_theta < 1) throw std::invalid_argument("project_O: n_theta >= 1");
  const GridSpec& g = u.spec;
  VectorField3 out(g);
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const Vec3 x = g.node(i, j, k);
        Vec3 acc{0.0, 0.0, 0.0};
        for (int t = 0; t < n_theta; ++t) {
          const double th = 2.0 * std::numbers::pi * t / n_theta;
          const double c = std::cos(th), s = std::sin(th);
          const Vec3 y{c * x[0] + s * x[1], -s * x[0] + c * x[1], x[2]};
          const double v0 = sample_trilinear(u, 0, y), v1 = sample_trilinear(u, 1, y);
          acc[0] += c * v0 - s * v1;
          acc[1] += s * v0 + c * v1;
          acc[2] += sample_trilinear(u, 2, y);
        }
        for (double& a : acc) a /= n_theta;
        out.set(g.index(i, j, k), acc);
      }
  return out;
}

double class_defect(const VectorField3& u, MeridianClass cls) {
  VectorField3 pu = project_O_c4(u);
  if (cls == MeridianClass::T) pu = project_T(pu);
  if (cls == MeridianClass::S) pu = project_S(pu);
  const double nu = lp_norm(u, 2.0);
  if (nu == 0.0) return 0.0;
  return lp_norm(u - pu, 2.0) / nu;
}

MeridianGridSpec compatible_meridian(const GridSpec& g) {
  g.validate();
  if (g.n[0] != g.n[1] || g.L[0] != g.L[1] || g.n[0] % 4 != 0 || g.n[2] % 2 != 0)
    throw std::invalid_argument("compatible_meridian: need n1 == n2 divisible by 4, n3 even, L1 == L2");
  MeridianGridSpec m;
  m.nr = g.n[0] / 4;
  m.nz = g.n[2] / 2;
  m.R = 0.5 * g.L[0];
  m.Z = 0.5 * g.L[2];
  m.stretch_r = m.stretch_z = 0.0;
  return m;
}

namespace {

double sample_box(const VectorField3& u, int comp, const Vec3& x) {
  for (int a = 0; a < 3; ++a)
    if (std::abs(x[a]) > 0.5 * u.spec.L[a]) return 0.0;
  return sample_trilinear(u, comp, x);
}

// Index i and weight t with xs[i] <= x <= xs[i+1]; x is clamped to the range.
void locate(const Vec& xs, double x, int& i, double& t) {
  const int n = static_cast<int>(xs.size());
  if (x <= xs.front()) {
    i = 0;
    t = 0.0;
    return;
  }
  if (x >= xs.back()) {
    i = n - 2;
    t = 1.0;
    return;
  }
  i = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  t = (x - xs[i]) / (xs[i + 1] - xs[i]);
}

// Bilinear interpolation of samples val(i, j) at (rs[i], zs[j]); below rs[0] > 0
// an odd ghost -val(0, j) at -rs[0] is used when odd is set.
template <class F>
double bilinear(const Vec& rs, const Vec& zs, F&& val, double r, double z, bool odd) {
  int j;
  double tz;
  locate(zs, z, j, tz);
  auto at_r = [&](int jj) {
    if (r < rs[0]) {
      const double v0 = val(0, jj);
      if (!odd) return v0;
      const double t = (r + rs[0]) / (2.0 * rs[0]);
      return (2.0 * t - 1.0) * v0;
    }
    int i;
    double tr;
    locate(rs, r, i, tr);
    return (1.0 - tr) * val(i, jj) + tr * val(i + 1, jj);
  };
  return (1.0 - tz) * at_r(j) + tz * at_r(j + 1);
}

}  // namespace

MeridianField reduce(const VectorField3& u, MeridianClass cls, const MeridianGridSpec& mg, double tol,
                     int n_rays) {
  require_finite(u, "reduce");
  if (n_rays < 1) throw std::invalid_argument("reduce: n_rays >= 1");
  const double defect = class_defect(u, cls);
  if (!(defect <= tol)) {
    std::ostringstream os;
    os << "reduce: field is not in class " << to_string(cls) << " (projector defect " << defect << ")";
    throw std::domain_error(os.str());
  }
  auto cyl = [&](double r, double z) {
    Vec3 acc{0.0, 0.0, 0.0};
    for (int k = 0; k < n_rays; ++k) {
      const double th = 2.0 * std::numbers::pi * k / n_rays;
      const double c = std::cos(th), s = std::sin(th);
      const Vec3 x{r * c, r * s, z};
      const double ux = sample_box(u, 0, x), uy = sample_box(u, 1, x);
      acc[0] += ux * c + uy * s;
      acc[1] += -ux * s + uy * c;
      acc[2] += sample_box(u, 2, x);
    }
    for (double& a : acc) a /= n_rays;
    return acc;
  };
  return sample_meridian(mg, cls, cyl);
}

VectorField3 lift(const MeridianField& m, const GridSpec& g) {
  g.validate();
  const MeridianGrid mg(m.grid);
  if (m.dofs.size() != mg.dofs()) throw std::invalid_argument("lift: dof count does not match the grid");
  const int nr = mg.nr(), nz = mg.nz();
  Vec rh(nr), zh(nz);
  for (int i = 0; i < nr; ++i) rh[i] = mg.rh(i);
  for (int j = 0; j < nz; ++j) zh[j] = mg.zh(j);
  const Vec& rn = mg.r_nodes();
  const Vec& zn = mg.z_nodes();
  const Vec& d = m.dofs;
  auto va = [&](int i, int j) { return d[mg.ia(i, j)]; };
  auto vb = [&](int i, int j) { return d[mg.ib(i, j)]; };
  auto vc = [&](int i, int j) { return d[mg.ic(i, j)]; };

  VectorField3 out(g);
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const Vec3 x = g.node(i, j, k);
        const double r = std::hypot(x[0], x[1]), z = x[2];
        // Open cylinder: the -L/2 faces have no mirror node on the periodic grid.
        if (r >= m.grid.R || std::abs(z) >= m.grid.Z) continue;
        const double a = bilinear(rh, zn, va, r, z, true);
        const double b = bilinear(rn, zn, vb, r, z, true);
        const double c = bilinear(rn, zh, vc, r, z, false);
        double cs = 1.0, sn = 0.0;
        if (r > 0.0) {
          cs = x[0] / r;
          sn = x[1] / r;
        }
        out.set(g.index(i, j, k), {a * cs - b * sn, a * sn + b * cs, c});
      }
  return out;
}

EnergyEval meridian_energy(const MeridianField& m, const Exponents& e, const WvOptions& wv) {
  MeridianDisc d(m.grid, m.cls);
  if (m.dofs.size() != d.dofs()) throw std::invalid_argument("meridian_energy: dof count mismatch");
  EnergyEval ev = energy_J(d, m.dofs, e);
  try {
    ev.quotient = quotient_Q(d, m.dofs, e, wv).Q;
  } catch (const std::domain_error&) {
  }
  return ev;
}

MeridianMinimum meridian_minimize(const MeridianField& init, const Exponents& e, const MinimizeOptions& opts,
                                  const IterationCallback& cb) {
  MeridianDisc d(init.grid, init.cls);
  if (init.dofs.size() != d.dofs()) throw std::invalid_argument("meridian_minimize: dof count mismatch");
  DiscreteMinimum dm = minimize_quotient(d, init.dofs, e, opts, cb);
  MeridianMinimum mm;
  mm.field = {init.grid, init.cls, std::move(dm.u)};
  mm.report = std::move(dm.report);
  return mm;
}

void save_meridian(const std::string& path, const MeridianField& m, double p) {
  const MeridianGrid g(m.grid);
  if (m.dofs.size() != g.dofs()) throw std::invalid_argument("save_meridian: dof count mismatch");
  const int nr = g.nr(), nz = g.nz();
  const std::size_t slots = static_cast<std::size_t>(nr + 1) * (nz + 1);
  auto slot = [&](int i, int j) { return i + static_cast<std::size_t>(nr + 1) * j; };
  Vec a(slots, 0.0), b(slots, 0.0), c(slots, 0.0);
  for (int j = 0; j <= nz; ++j)
    for (int i = 0; i <= nr; ++i) {
      if (i < nr) a[slot(i, j)] = m.dofs[g.ia(i, j)];
      b[slot(i, j)] = m.dofs[g.ib(i, j)];
      if (j < nz) c[slot(i, j)] = m.dofs[g.ic(i, j)];
    }
  FieldFile f;
  f.dims = {static_cast<std::uint32_t>(nr + 1), static_cast<std::uint32_t>(nz + 1), 1};
  f.L = {m.grid.R, 2.0 * m.grid.Z, 0.0};
  f.p = p;
  f.meridian = true;
  f.meridian_class = static_cast<std::uint8_t>(m.cls);
  f.r_max = m.grid.R;
  f.z_half = m.grid.Z;
  f.stretch_r = m.grid.stretch_r;
  f.stretch_z = m.grid.stretch_z;
  switch (m.cls) {
    case MeridianClass::T: f.components = {b}; break;
    case MeridianClass::S: f.components = {a, c}; break;
    case MeridianClass::O: f.components = {a, b, c}; break;
  }
  write_field_file(path, f);
}

MeridianField load_meridian(const std::string& path, double* p) {
  FieldFile f = read_field_file(path);
  if (!f.meridian) throw std::runtime_error("load_meridian: " + path + " is not a meridian field");
  MeridianField m;
  if (f.meridian_class < 1 || f.meridian_class > 3) throw std::runtime_error("load_meridian: bad class code");
  m.cls = static_cast<MeridianClass>(f.meridian_class);
  m.grid.nr = static_cast<int>(f.dims[0]) - 1;
  m.grid.nz = static_cast<int>(f.dims[1]) - 1;
  m.grid.R = f.r_max;
  m.grid.Z = f.z_half;
  m.grid.stretch_r = f.stretch_r;
  m.grid.stretch_z = f.stretch_z;
  m.grid.validate();
  const std::size_t want = m.cls == MeridianClass::O ? 3 : m.cls == MeridianClass::S ? 2 : 1;
  if (f.components.size() != want) throw std::runtime_error("load_meridian: component count does not match class");
  const MeridianGrid g(m.grid);
  const int nr = g.nr(), nz = g.nz();
  auto slot = [&](int i, int j) { return i + static_cast<std::size_t>(nr + 1) * j; };
  const Vec zero(f.components[0].size(), 0.0);
  const Vec& a = m.cls == MeridianClass::T ? zero : f.components[0];
  const Vec& b = m.cls == MeridianClass::T ? f.components[0] : m.cls == MeridianClass::O ? f.components[1] : zero;
  const Vec& c = m.cls == MeridianClass::T ? zero : f.components.back();
  m.dofs.assign(g.dofs(), 0.0);
  for (int j = 0; j <= nz; ++j)
    for (int i = 0; i <= nr; ++i) {
      if (i < nr) m.dofs[g.ia(i, j)] = a[slot(i, j)];
      m.dofs[g.ib(i, j)] = b[slot(i, j)];
      if (j < nz) m.dofs[g.ic(i, j)] = c[slot(i, j)];
    }
  if (p) *p = f.p;
  return m;
}

Vec3 loss_yau_cylindrical(double r, double z, double wz) {
  LossYauParams prm;
  prm.w = {0.0, 0.0, wz};
  // In the half-plane theta = 0, (x, y, z) components are (u_r, u_theta, u_z).
  return loss_yau({r, 0.0, z}, prm);
}

MeridianField loss_yau_meridian(const MeridianGridSpec& g, MeridianClass cls) {
  return sample_meridian(g, cls, [](double r, double z) { return loss_yau_cylindrical(r, z); });
}

MeridianField random_meridian(const MeridianGridSpec& g, MeridianClass cls, std::uint64_t seed, int lobes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  struct Lobe {
    double z, s;
    Vec3 amp;
  };
  std::vector<Lobe> ls(lobes);
  for (auto& l : ls) {
    l.z = uni(rng);
    l.s = 1.0 + 0.5 * uni(rng);
    for (double& a : l.amp) a = uni(rng);
  }
  return sample_meridian(g, cls, [&](double r, double z) {
    Vec3 u{0.0, 0.0, 0.0};
    for (const auto& l : ls) {
      const double f = std::exp(-(r * r + (z - l.z) * (z - l.z)) / (l.s * l.s));
      u[0] += l.amp[0] * r * f;
      u[1] += l.amp[1] * r * f;
      u[2] += l.amp[2] * f;
    }
    return u;
  });
}

}  // namespace pcurl
