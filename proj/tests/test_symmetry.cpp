#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "pcurl/constraint.hpp"
#include "pcurl/oracles.hpp"
#include "pcurl/symmetry.hpp"

using namespace pcurl;

namespace {

double max_abs(const VectorField3& u) {
  double m = 0.0;
  for (const auto& c : u.c)
    for (double x : c) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const Vec& u) {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::abs(x));
  return m;
}

VectorField3 random_field(const GridSpec& g, unsigned seed) {
  VectorField3 u(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (auto& c : u.c)
    for (double& x : c) x = nd(rng);
  return u;
}

MeridianGridSpec small_meridian() {
  MeridianGridSpec m;
  m.nr = 24;
  m.nz = 48;
  m.R = 12.0;
  m.Z = 12.0;
  return m;
}

}  // namespace

TEST(Symmetry, TIsAnInvolution) {
  const VectorField3 u = random_field(GridSpec::cube(8, 4.0), 1);
  EXPECT_LT(max_abs(apply_T(apply_T(u)) - u), 1e-14);
  EXPECT_LT(max_abs(apply_S(u) + apply_T(u)), 1e-15);
}

TEST(Symmetry, ClassProjectorsSplitIdentity) {
  const VectorField3 u = random_field(GridSpec::cube(8, 4.0), 2);
  const VectorField3 pt = project_T(u), ps = project_S(u);
  EXPECT_LT(max_abs(pt + ps - u), 1e-14);
  EXPECT_LT(max_abs(project_T(pt) - pt), 1e-14);
  EXPECT_LT(max_abs(project_S(pt)), 1e-14);
}

TEST(Symmetry, QuarterTurns) {
  const VectorField3 u = random_field(GridSpec::cube(8, 4.0), 3);
  EXPECT_EQ(max_abs(rotate_quarter(u, 4) - u), 0.0);
  const VectorField3 pc = project_O_c4(u);
  EXPECT_LT(max_abs(project_O_c4(pc) - pc), 1e-14);
  EXPECT_LT(max_abs(rotate_quarter(pc, 1) - pc), 1e-14);
}

TEST(Symmetry, LossYauIsOEquivariant) {
  VectorField3 u = sample_loss_yau(GridSpec::cube(16, 8.0), LossYauParams{});
  // Nodes on the x = -L/2 and y = -L/2 faces are their own periodic images under a half turn,
  // where the non-periodic sample cannot be symmetric. Quarter turns map the rest onto itself.
  for (int k = 0; k < 16; ++k)
    for (int j = 0; j < 16; ++j)
      for (int i = 0; i < 16; ++i)
        if (i == 0 || j == 0)
          for (auto& c : u.c) c[u.spec.index(i, j, k)] = 0.0;
  EXPECT_LT(class_defect(u, MeridianClass::O), 1e-13);
  EXPECT_GT(class_defect(u, MeridianClass::T), 0.1);
  EXPECT_GT(class_defect(random_field(u.spec, 4), MeridianClass::O), 0.1);
}

TEST(Symmetry, ReduceInvertsLiftOnCompatibleGrid) {
  const GridSpec g = GridSpec::cube(16, 8.0);
  const MeridianGridSpec mg = compatible_meridian(g);
  for (MeridianClass cls : {MeridianClass::O, MeridianClass::T, MeridianClass::S}) {
    const MeridianField m = random_meridian(mg, cls, 5);
    const MeridianField back = reduce(lift(m, g), cls, mg);
    ASSERT_EQ(back.dofs.size(), m.dofs.size());
    Vec diff(m.dofs.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = back.dofs[i] - m.dofs[i];
    EXPECT_LT(max_abs(diff), 1e-13 * max_abs(m.dofs)) << to_string(cls);
  }
}

TEST(Symmetry, ReduceRejectsForeignClass) {
  const VectorField3 u = random_field(GridSpec::cube(16, 8.0), 6);
  EXPECT_THROW(reduce(u, MeridianClass::O, compatible_meridian(u.spec)), std::domain_error);
}

TEST(Meridian, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "pcurl_meridian_rt.pcrl";
  for (MeridianClass cls : {MeridianClass::O, MeridianClass::T, MeridianClass::S}) {
    const MeridianField m = random_meridian(small_meridian(), cls, 7);
    save_meridian(path.string(), m, 1.5);
    double p = 0.0;
    const MeridianField back = load_meridian(path.string(), &p);
    EXPECT_EQ(p, 1.5);
    EXPECT_EQ(back.cls, cls);
    EXPECT_EQ(back.dofs, m.dofs);
  }
  std::filesystem::remove(path);
}

TEST(Meridian, CurlOfGradientVanishes) {
  const MeridianDisc d(small_meridian(), MeridianClass::O);
  Vec phi(d.potential_size());
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  for (double& x : phi) x = nd(rng);
  Vec g, c;
  d.gradient(phi, g);
  d.curl(g, c);
  EXPECT_LT(max_abs(c), 1e-12 * max_abs(g));
}

TEST(Meridian, LossYauQuotientNearClosedForm) {
  MeridianGridSpec mg;
  mg.nr = 64;
  mg.nz = 128;
  mg.R = 50.0;
  mg.Z = 50.0;
  mg.stretch_r = 4.0;
  mg.stretch_z = 4.0;
  const EnergyEval ev = meridian_energy(loss_yau_meridian(mg, MeridianClass::O), Exponents(1.5));
  EXPECT_NEAR(ev.quotient / (4.0 * std::numbers::pi), 1.0, 0.02);
}

TEST(Meridian, MinimizationLowersQuotient) {
  const Exponents e(1.5);
  MinimizeOptions o;
  o.max_outer = 6;
  o.wv.tol = 1e-8;
  const MeridianField init = random_meridian(small_meridian(), MeridianClass::O, 9);
  const MeridianMinimum mm = meridian_minimize(init, e, o);
  const auto& h = mm.report.J_history;
  ASSERT_GE(h.size(), 2u);
  EXPECT_LT(h.back(), h.front());
  for (const auto& r : mm.report.records) EXPECT_LT(r.nehari_defect, 1e-12);
}
