#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>

#include "pcurl/field_io.hpp"
#include "pcurl/grid.hpp"
#include "pcurl/minimizer.hpp"

using namespace pcurl;

namespace {

VectorField3 random_field(const GridSpec& g, unsigned seed) {
  VectorField3 u(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (auto& c : u.c)
    for (double& x : c) x = nd(rng);
  return u;
}

}  // namespace

TEST(Grid, IndexAndCoordinates) {
  const GridSpec g = GridSpec::cube(8, 4.0);
  EXPECT_EQ(g.size(), 512u);
  EXPECT_DOUBLE_EQ(g.h(1), 0.5);
  EXPECT_EQ(g.index(1, 2, 3), 1u + 8u * (2u + 8u * 3u));
  EXPECT_DOUBLE_EQ(g.coord(0, 4), 0.0);
  EXPECT_DOUBLE_EQ(g.coord(2, 0), -2.0);
}

TEST(Grid, ValidateRejectsBadShapes) {
  GridSpec g = GridSpec::cube(8, 4.0);
  g.n[1] = 0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = GridSpec::cube(8, 4.0);
  g.L[2] = -1.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(Exponents, CriticalExponent) {
  EXPECT_DOUBLE_EQ(Exponents(1.5).p_star(), 3.0);
  EXPECT_DOUBLE_EQ(Exponents(2.0).p_star(), 6.0);
  EXPECT_NEAR(Exponents(1.2).p_star(), 2.0, 1e-15);
  EXPECT_THROW(Exponents(1.0), std::invalid_argument);
  EXPECT_THROW(Exponents(3.0), std::invalid_argument);
}

TEST(Norms, ConstantField) {
  const GridSpec g = GridSpec::cube(6, 3.0);
  VectorField3 u(g);
  for (double& x : u.c[2]) x = 2.0;
  const double vol = 27.0;
  EXPECT_NEAR(lp_norm(u, 3.0), 2.0 * std::cbrt(vol), 1e-12);
  EXPECT_NEAR(lp_integral(u, 4.0), 16.0 * vol, 1e-10);
  EXPECT_NEAR(inner(u, u), 4.0 * vol, 1e-10);
}

TEST(Norms, RejectNonFinite) {
  VectorField3 u(GridSpec::cube(4, 1.0));
  u.c[1][3] = NAN;
  EXPECT_THROW(require_finite(u, "u"), std::domain_error);
}

TEST(Dilation, RescaledGridPreservesPstarNorm) {
  const Exponents e(1.5);
  const VectorField3 u = random_field(GridSpec::cube(8, 4.0), 3);
  for (double s : {0.5, 2.0, 3.0}) {
    const DilationResult d = dilate_translate(u, s, {0.5, 0.0, -1.0}, e);
    EXPECT_TRUE(d.exact);
    EXPECT_NEAR(lp_norm(d.field, e.p_star()) / lp_norm(u, e.p_star()), 1.0, 1e-13) << "s=" << s;
  }
}

TEST(Dilation, InterpolationModeIsFlagged) {
  const Exponents e(2.0);
  const VectorField3 u = random_field(GridSpec::cube(8, 4.0), 4);
  const DilationResult d = dilate_translate(u, 1.3, {0.1, 0.0, 0.0}, e, DilationMode::interpolate);
  EXPECT_FALSE(d.exact);
}

TEST(GradAbs, EqualityForFixedDirection) {
  const GridSpec g = GridSpec::cube(16, 4.0);
  VectorField3 v(g);
  for (int k = 0; k < 16; ++k)
    for (int j = 0; j < 16; ++j)
      for (int i = 0; i < 16; ++i) {
        const Vec3 x = g.node(i, j, k);
        v.c[1][g.index(i, j, k)] = 2.0 + std::sin(x[0]) * std::cos(0.5 * x[2]);
      }
  EXPECT_LT(grad_abs_check(v).max_abs_gap, 1e-12);
}

TEST(GradAbs, DefectNonPositiveOnRotatingField) {
  const GridSpec g = GridSpec::cube(32, 6.0);
  VectorField3 v(g);
  for (int k = 0; k < 32; ++k)
    for (int j = 0; j < 32; ++j)
      for (int i = 0; i < 32; ++i) {
        const Vec3 x = g.node(i, j, k);
        const double a = x[0] + 0.3 * x[2];
        const std::size_t id = g.index(i, j, k);
        v.c[0][id] = std::cos(a);
        v.c[1][id] = std::sin(a);
      }
  const GradAbsReport r = grad_abs_check(v);
  // |v| = 1: grad|v| vanishes while grad v does not.
  EXPECT_LE(r.max_defect, 1e-12 * r.max_grad);
  EXPECT_GT(r.max_grad, 0.5);
}

TEST(FieldIo, RoundTripIsBitExact) {
  const VectorField3 u = random_divfree_bump(GridSpec::cube(12, 3.0), 7);
  const auto path = std::filesystem::temp_directory_path() / "pcurl_field_core_rt.pcrl";
  save_field(path.string(), u, 1.5);
  double p = 0.0;
  const VectorField3 back = load_vector_field(path.string(), &p);
  std::filesystem::remove(path);
  EXPECT_EQ(p, 1.5);
  ASSERT_TRUE(back.spec == u.spec);
  for (int a = 0; a < 3; ++a)
    EXPECT_EQ(std::memcmp(back.c[a].data(), u.c[a].data(), u.c[a].size() * sizeof(double)), 0);
}

TEST(FieldIo, RejectsTruncatedFile) {
  const VectorField3 u = random_divfree_bump(GridSpec::cube(8, 3.0), 1);
  const auto path = std::filesystem::temp_directory_path() / "pcurl_field_core_trunc.pcrl";
  save_field(path.string(), u, 2.0);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 16);
  EXPECT_THROW(load_vector_field(path.string()), std::runtime_error);
  std::filesystem::remove(path);
}
