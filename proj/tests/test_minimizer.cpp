#include <gtest/gtest.h>

#include <cmath>

#include "pcurl/constraint.hpp"
#include "pcurl/diffops.hpp"
#include "pcurl/energy.hpp"
#include "pcurl/minimizer.hpp"

using namespace pcurl;

namespace {

MinimizeOptions quick(int outer) {
  MinimizeOptions o;
  o.max_outer = outer;
  o.wv.tol = 1e-8;
  return o;
}

}  // namespace

TEST(Minimizer, OptionsValidate) {
  MinimizeOptions o;
  EXPECT_NO_THROW(o.validate());
  o.max_outer = -1;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = MinimizeOptions{};
  o.wv.tol = -1.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}

TEST(Minimizer, SymmetryNames) {
  for (Symmetry s : {Symmetry::full, Symmetry::O, Symmetry::T, Symmetry::S})
    EXPECT_EQ(parse_symmetry(to_string(s)), s);
  EXPECT_THROW(parse_symmetry("Z"), std::invalid_argument);
}

TEST(Minimizer, RandomBumpIsDivergenceFree) {
  const VectorField3 u = random_divfree_bump(GridSpec::cube(16, 6.0), 9);
  double dv = 0.0, m = 0.0;
  for (double x : div(u).data) dv = std::max(dv, std::abs(x));
  for (const auto& c : u.c)
    for (double x : c) m = std::max(m, std::abs(x));
  EXPECT_LT(dv, 1e-12 * m);
  const VectorField3 again = random_divfree_bump(GridSpec::cube(16, 6.0), 9);
  EXPECT_EQ(again.c[2], u.c[2]);
}

TEST(Minimizer, EnergyDecreasesOnNehariSet) {
  const Exponents e(2.0);
  const GroundState gs = minimize_ground_state(random_divfree_bump(GridSpec::cube(12, 5.0), 1), e, quick(12));
  const auto& h = gs.report.J_history;
  ASSERT_GE(h.size(), 2u);
  for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1] * (1.0 + 1e-12)) << "i=" << i;
  for (const auto& r : gs.report.records) EXPECT_LT(r.nehari_defect, 1e-12);
  EXPECT_NEAR(gs.report.S_estimate, std::pow(3.0 * gs.report.J_final, 2.0 / 3.0), 1e-12 * gs.report.S_estimate);
  EXPECT_EQ(gs.report.stop_reason, "max_outer");
  EXPECT_LT(nehari_scale(gs.u, e).t - 1.0, 1e-8);
}

TEST(Minimizer, DeterministicForFixedSeed) {
  const Exponents e(1.5);
  const VectorField3 init = random_divfree_bump(GridSpec::cube(10, 5.0), 4);
  const GroundState a = minimize_ground_state(init, e, quick(4));
  const GroundState b = minimize_ground_state(init, e, quick(4));
  EXPECT_EQ(a.report.J_history, b.report.J_history);
}

TEST(Minimizer, KernelFieldRejected) {
  const VectorField3 zero(GridSpec::cube(8, 4.0));
  EXPECT_THROW(minimize_ground_state(zero, Exponents(2.0), quick(2)), std::domain_error);
}

TEST(Minimizer, HpIsOneAtTwo) {
  MinimizeOptions o = quick(20);
  const HpEstimate h = estimate_Hp(GridSpec::cube(12, 6.0), Exponents(2.0), o);
  EXPECT_NEAR(h.H, 1.0, 1e-6);
}

TEST(Minimizer, HpWithinUpperBound) {
  MinimizeOptions o = quick(20);
  for (double p : {1.5, 2.5}) {
    const HpEstimate h = estimate_Hp(GridSpec::cube(12, 6.0), Exponents(p), o);
    EXPECT_GT(h.H, 0.0);
    EXPECT_LE(h.H, std::pow(2.0, p / 2.0)) << "p=" << p;
  }
}
