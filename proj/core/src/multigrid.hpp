#pragma once

#include <array>
#include <vector>

#include "pcurl/grid.hpp"

namespace pcurl::detail {

// Geometric multigrid for the periodic 7-point operator
// (A x)_i = sum_a [c_a(i) (x_i - x_{i+a}) + c_a(i-a) (x_i - x_{i-a})] / h_a^2,
// c_a(i) the coefficient on the face between node i and i + e_a.
// One symmetric V-cycle is a fixed SPD-preserving linear map, usable as a CG preconditioner.
class PeriodicMultigrid {
 public:
  // node_coef[a] holds a positive per-node coefficient for axis a; faces take the mean.
  PeriodicMultigrid(const GridSpec& g, const std::array<Vec, 3>& node_coef);

  // x = V-cycle(b), zero initial guess.
  void vcycle(const Vec& b, Vec& x) const;
  int levels() const { return static_cast<int>(lv_.size()); }

 private:
  struct Level {
    std::array<int, 3> n{};
    std::array<double, 3> ih2{};  // 1 / h_a^2
    std::array<Vec, 3> c;
    Vec diag;
    std::size_t size() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }
  };
  void apply(const Level& L, const Vec& x, Vec& y) const;
  void smooth(const Level& L, const Vec& b, Vec& x, bool forward) const;
  void cycle(std::size_t l, const Vec& b, Vec& x) const;

  std::vector<Level> lv_;
};

}  // namespace pcurl::detail
