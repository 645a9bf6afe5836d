#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "multigrid.hpp"
#include "pcurl/constraint.hpp"
#include "pcurl/diffops.hpp"
#include "pcurl/discretization.hpp"
#include "pcurl/energy.hpp"
#include "pcurl/minimizer.hpp"
#include "pcurl/oracles.hpp"

using namespace pcurl;

namespace {

constexpr double kTol = 1e-10;

VectorField3 random_field(const GridSpec& g, unsigned seed) {
  VectorField3 u(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (auto& c : u.c)
    for (double& x : c) x = nd(rng);
  return u;
}

double rel_gap(const VectorField3& a, const VectorField3& b, double q) {
  return lp_norm(a - b, q) / lp_norm(b, q);
}

WvOptions tight() { return WvOptions{kTol, 1000, true}; }

}  // namespace

TEST(WofV, LinearCaseMatchesHelmholtz) {
  const VectorField3 u = random_field(GridSpec::cube(12, 4.0), 5);
  const FieldWvResult r = w_of_v(u, Exponents(1.2), tight());
  ASSERT_TRUE(r.report.converged);
  const HelmholtzSplit hs = helmholtz_split(u);
  EXPECT_LT(rel_gap(r.w, -1.0 * hs.w, 2.0), 1e-8);
}

TEST(WofV, ResultIsOptimal) {
  const Exponents e(1.5);
  const VectorField3 v = random_divfree_bump(GridSpec::cube(16, 6.0), 2);
  const FieldWvResult r = w_of_v(v, e, tight());
  ASSERT_TRUE(r.report.converged);
  EXPECT_LT(m_residual(v + r.w, e), 10 * kTol);
  // Any gradient perturbation increases |v + w|_{p*}.
  const VectorField3 g = helmholtz_split(random_field(v.spec, 9)).w;
  const double base = lp_integral(v + r.w, e.p_star());
  for (double t : {1e-3, -1e-3, 1e-2})
    EXPECT_GT(lp_integral(v + r.w + t * g, e.p_star()), base);
}

TEST(WofV, Homogeneous) {
  const Exponents e(1.5);
  const VectorField3 v = random_divfree_bump(GridSpec::cube(16, 6.0), 3);
  const VectorField3 w1 = w_of_v(v, e, tight()).w;
  for (double t : {0.25, 3.0}) {
    const VectorField3 wt = w_of_v(t * v, e, tight()).w;
    EXPECT_LT(rel_gap(wt, t * w1, e.p_star()), 10 * kTol) << "t=" << t;
  }
}

TEST(WofV, EquivariantUnderDilationTranslation) {
  const double s = 2.0;
  const Vec3 y{0.75, -0.375, 0.0};
  for (double p : {1.5, 2.0}) {
    const Exponents e(p);
    const VectorField3 v = random_divfree_bump(GridSpec::cube(16, 6.0), 4);
    const VectorField3 w = w_of_v(v, e, tight()).w;
    const VectorField3 Tv = dilate_translate(v, s, y, e).field;
    const VectorField3 Tw = dilate_translate(w, s, y, e).field;
    const VectorField3 wT = w_of_v(Tv, e, tight()).w;
    // T w(v) solves the transformed problem to the same residual.
    EXPECT_LT(m_residual(Tv + Tw, e), 10 * kTol) << "p=" << p;
    // The residual controls w only up to the conditioning of the problem. At p = 2 (p* = 6) the
    // measured ratio gap / tol stays near 2e3 for tol from 1e-8 to 1e-12.
    EXPECT_LT(rel_gap(wT, Tw, e.p_star()), (p == 2.0 ? 1e4 : 10.0) * kTol) << "p=" << p;
  }
}

TEST(Nehari, ScaledFieldSatisfiesIdentity) {
  for (double p : {1.5, 2.0}) {
    const Exponents e(p);
    const VectorField3 v = random_divfree_bump(GridSpec::cube(16, 6.0), 6);
    const FieldNehariResult r = nehari_scale(v, e, tight());
    const double A = lp_integral(curl(r.scaled), p);
    const double B = lp_integral(r.scaled, e.p_star());
    EXPECT_LT(std::abs(A - B) / B, 1e-12) << "p=" << p;
    EXPECT_LT(r.report.nehari_defect, 1e-12);
  }
}

TEST(Nehari, DefectDefinition) {
  EXPECT_DOUBLE_EQ(nehari_defect(2.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(nehari_defect(3.0, 3.0), 0.0);
}

TEST(Monotone, GapIsNonNegative) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 200; ++t) {
    const Vec3 a{nd(rng), nd(rng), nd(rng)}, b{nd(rng), nd(rng), nd(rng)};
    for (double q : {2.0, 3.0, 6.0}) EXPECT_GE(monotone_gap(a, b, q), -1e-12);
  }
}

TEST(Multigrid, VcycleContractsVariableCoefficientProblem) {
  const GridSpec g = GridSpec::cube(32, 8.0);
  const std::size_t N = g.size();
  std::array<Vec, 3> coef;
  for (auto& c : coef) c.resize(N);
  for (int k = 0; k < 32; ++k)
    for (int j = 0; j < 32; ++j)
      for (int i = 0; i < 32; ++i) {
        const Vec3 x = g.node(i, j, k);
        const double v = 1e-2 + std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
        for (int a = 0; a < 3; ++a) coef[a][g.index(i, j, k)] = v * (a == 0 ? 3.0 : 1.0);
      }
  const detail::PeriodicMultigrid mg(g, coef);
  EXPECT_GE(mg.levels(), 3);

  auto apply = [&](const Vec& x, Vec& y) {
    y.assign(N, 0.0);
    for (int k = 0; k < 32; ++k)
      for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i) {
          const std::size_t id = g.index(i, j, k);
          const std::size_t nb[3] = {g.index((i + 1) % 32, j, k), g.index(i, (j + 1) % 32, k),
                                     g.index(i, j, (k + 1) % 32)};
          for (int a = 0; a < 3; ++a) {
            const double c = 0.5 * (coef[a][id] + coef[a][nb[a]]) / (g.h(a) * g.h(a));
            const double f = c * (x[id] - x[nb[a]]);
            y[id] += f;
            y[nb[a]] -= f;
          }
        }
  };
  Vec b(N);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  double mean = 0.0;
  for (double& x : b) mean += (x = nd(rng));
  for (double& x : b) x -= mean / static_cast<double>(N);

  Vec x(N, 0.0), r = b, e, Ax;
  double r0 = 0.0;
  for (double v : b) r0 += v * v;
  double rn = r0;
  for (int it = 0; it < 6; ++it) {
    mg.vcycle(r, e);
    for (std::size_t i = 0; i < N; ++i) x[i] += e[i];
    apply(x, Ax);
    rn = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      r[i] = b[i] - Ax[i];
      rn += r[i] * r[i];
    }
  }
  EXPECT_LT(std::sqrt(rn / r0), 1e-3);
}

TEST(Multigrid, VcycleIsSymmetric) {
  const GridSpec g = GridSpec::cube(16, 4.0);
  const std::size_t N = g.size();
  std::array<Vec, 3> coef;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ud(0.5, 2.0);
  for (auto& c : coef) {
    c.resize(N);
    for (double& x : c) x = ud(rng);
  }
  const detail::PeriodicMultigrid mg(g, coef);
  Vec a(N), b(N), Ma, Mb;
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < N; ++i) {
    a[i] = nd(rng);
    b[i] = nd(rng);
  }
  mg.vcycle(a, Ma);
  mg.vcycle(b, Mb);
  double ab = 0.0, ba = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    ab += b[i] * Ma[i];
    ba += a[i] * Mb[i];
    scale += std::abs(b[i] * Ma[i]);
  }
  EXPECT_LT(std::abs(ab - ba), 1e-10 * scale);
}
