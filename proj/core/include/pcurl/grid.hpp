#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcurl {

using Vec = std::vector<double>;
using Vec3 = std::array<double, 3>;

// Uniform, origin-centered box. Node j on axis i sits at (j - n_i/2) h_i.
struct GridSpec {
  std::array<int, 3> n{16, 16, 16};
  std::array<double, 3> L{1.0, 1.0, 1.0};
  bool periodic = true;

  static GridSpec cube(int n, double L);

  double h(int axis) const { return L[axis] / n[axis]; }
  double cell_volume() const { return h(0) * h(1) * h(2); }
  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * n[1] * n[2];
  }
  double coord(int axis, int j) const { return (j - n[axis] / 2) * h(axis); }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n[0]) * (j + static_cast<std::size_t>(n[1]) * k);
  }
  Vec3 node(int i, int j, int k) const {
    return {coord(0, i), coord(1, j), coord(2, k)};
  }
  // Throws std::invalid_argument on n_i < 4 or L_i <= 0.
  void validate() const;
  bool operator==(const GridSpec& o) const {
    return n == o.n && L == o.L && periodic == o.periodic;
  }
};

struct ScalarField {
  GridSpec spec;
  Vec data;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& s, double value = 0.0)
      : spec(s), data(s.size(), value) {}
};

struct VectorField3 {
  GridSpec spec;
  std::array<Vec, 3> c;

  VectorField3() = default;
  explicit VectorField3(const GridSpec& s) : spec(s) {
    for (auto& comp : c) comp.assign(s.size(), 0.0);
  }

  std::size_t size() const { return spec.size(); }
  Vec3 at(std::size_t idx) const { return {c[0][idx], c[1][idx], c[2][idx]}; }
  void set(std::size_t idx, const Vec3& v) {
    c[0][idx] = v[0];
    c[1][idx] = v[1];
    c[2][idx] = v[2];
  }

  // Components concatenated, x-fastest within each component.
  Vec flat() const;
  static VectorField3 from_flat(const GridSpec& s, const Vec& f);

  VectorField3& operator+=(const VectorField3& o);
  VectorField3& operator-=(const VectorField3& o);
  VectorField3& operator*=(double t);
};

VectorField3 operator+(VectorField3 a, const VectorField3& b);
VectorField3 operator-(VectorField3 a, const VectorField3& b);
VectorField3 operator*(double t, VectorField3 a);

class Exponents {
 public:
  // p in (1, 3); p* is always recomputed from p.
  explicit Exponents(double p);
  double p() const { return p_; }
  double p_star() const { return 3.0 * p_ / (3.0 - p_); }
  // Conjugate of p*: p*/(p*-1).
  double p_star_dual() const { return p_star() / (p_star() - 1.0); }

 private:
  double p_;
};

// (sum_nodes |f|^q h1 h2 h3)^(1/q). Throws on non-finite samples.
double lp_norm(const VectorField3& f, double q);
double lp_norm(const ScalarField& f, double q);
// sum_nodes |f|^q h1 h2 h3, without the root.
double lp_integral(const VectorField3& f, double q);

// L2 inner product with the Riemann weight.
double inner(const VectorField3& a, const VectorField3& b);

void require_finite(const VectorField3& f, const char* what);
void require_finite(const ScalarField& f, const char* what);

enum class DilationMode {
  // Exact: resample onto the grid with L/s, shift by whole nodes.
  rescale_grid,
  // Same grid, trilinear periodic interpolation at s x + y.
  interpolate,
};

struct DilationResult {
  VectorField3 field;
  bool exact = true;
};

// T_{s,y}u(x) = s^{3/p*} u(s x + y).
DilationResult dilate_translate(const VectorField3& u, double s, const Vec3& y,
                                const Exponents& e,
                                DilationMode mode = DilationMode::rescale_grid);

ScalarField abs_field(const VectorField3& v);

struct GradAbsReport {
  double max_defect = 0.0;    // max over interior nodes of |grad|v|| - |grad v|
  double max_abs_gap = 0.0;   // max of the absolute difference
  double max_grad = 0.0;      // max |grad v| (scale for the defect)
};

// Central second-order differences on interior nodes.
GradAbsReport grad_abs_check(const VectorField3& v);

// Periodic trilinear sample of component c at physical point x.
double sample_trilinear(const VectorField3& u, int comp, const Vec3& x);

}  // namespace pcurl
