#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pcurl/minimizer.hpp"
#include "pcurl/oracles.hpp"
#include "pcurl/plap.hpp"

using namespace pcurl;

TEST(Plap, GridValidates) {
  RadialGrid g;
  EXPECT_NO_THROW(g.validate());
  g.r_min = 2e3;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(Plap, BubbleEnergyMatchesQuadrature) {
  RadialGrid g;
  g.n = 4000;
  for (double p : {1.5, 2.0}) {
    const BubbleParams b{1.0, 1.0, p, 3};
    Vec u;
    for (double r : g.radii()) u.push_back(bubble(r, b));
    const RadialEnergy en = plap_energy(g, u, p);
    EXPECT_NEAR(en.quotient / bubble_S_p(p, 3), 1.0, 2e-3) << "p=" << p;
  }
}

TEST(Plap, EnergyGradientMatchesDifferences) {
  RadialGrid g;
  g.n = 200;
  const double p = 1.7;
  const Vec u = plap_gaussian(g);
  Vec dg, dp;
  plap_energy_gradient(g, u, p, dg, dp);
  for (std::size_t i : {std::size_t{5}, std::size_t{60}, std::size_t{120}}) {
    // |g|^p is only C^{1,p-1} at g = 0, so the step must stay below the neighbouring differences.
    const double h = 1e-3 * std::min(std::abs(u[i + 1] - u[i]), std::abs(u[i] - u[i - 1]));
    Vec a = u, b = u;
    a[i] += h;
    b[i] -= h;
    const RadialEnergy ea = plap_energy(g, a, p), eb = plap_energy(g, b, p);
    EXPECT_NEAR(dg[i], (ea.grad - eb.grad) / (2.0 * h), 1e-5 * (1.0 + std::abs(dg[i])));
    EXPECT_NEAR(dp[i], (ea.pstar - eb.pstar) / (2.0 * h), 1e-5 * (1.0 + std::abs(dp[i])));
  }
}

TEST(Plap, NehariScaling) {
  RadialGrid g;
  g.n = 300;
  const PlapNehari n = plap_nehari_scale(g, plap_gaussian(g), 2.0);
  EXPECT_GT(n.t, 0.0);
  EXPECT_LT(n.defect, 1e-12);
}

TEST(Plap, MinimizerRecoversSobolevConstant) {
  const SpEstimate s = estimate_Sp(2.0, 3);
  EXPECT_LT(s.rel_gap, 1e-2);
  EXPECT_LT(s.plap_report.shape_distance, 5e-2);
  const auto& h = s.plap_report.J_history;
  for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1] * (1.0 + 1e-12));
}
