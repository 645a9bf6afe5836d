#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pcurl/constraint.hpp"
#include "pcurl/discretization.hpp"
#include "pcurl/grid.hpp"
#include "pcurl/meridian.hpp"
#include "pcurl/plap.hpp"

namespace pcurl {

enum class Symmetry { full, O, T, S };

const char* to_string(Symmetry s);
Symmetry parse_symmetry(const std::string& s);

struct MinimizeOptions {
  int max_outer = 300;
  double grad_tol = 1e-6;
  // Regularization levels relative to the RMS curl magnitude, one descent stage each.
  std::vector<double> eps_schedule{1e-2, 1e-3, 1e-4, 0.0};
  Symmetry symmetry = Symmetry::full;
  std::uint64_t seed = 1;
  int renormalize_every = 1;
  int stagnation_window = 20;
  double stagnation_tol = 1e-8;
  WvOptions wv{1e-9, 400, true};
  // Meridian grid used for symmetric classes.
  MeridianGridSpec meridian{64, 128, 50.0, 50.0, 4.0, 4.0};

  // Throws std::invalid_argument on an invalid combination.
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double J = 0.0;
  double Q = 0.0;
  double nehari_defect = 0.0;
  double grad_norm = 0.0;
  double wall_ms = 0.0;
  double eps = 0.0;
};

struct MinimizeReport {
  std::vector<double> J_history;  // one entry per accepted, Nehari-rescaled iterate
  std::vector<IterationRecord> records;
  double J_final = 0.0;
  double Q_final = 0.0;
  double S_estimate = 0.0;  // (3 J_final)^{p/3}
  ConstraintReport constraint;
  int iterations = 0;
  double wall_time = 0.0;  // seconds
  bool converged = false;
  std::string stop_reason;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

struct DiscreteMinimum {
  Vec u;  // v + w(v), on the Nehari set
  Vec v;  // V_h representative
  MinimizeReport report;
};

// Descent of the quotient over V_h of any discretization, with a Nehari
// rescale of the iterate every renormalize_every accepted steps.
DiscreteMinimum minimize_quotient(const Discretization& d, const Vec& v0, const Exponents& e,
                                  const MinimizeOptions& opts, const IterationCallback& cb = {});

struct GroundState {
  VectorField3 u;
  MinimizeReport report;
};

// Full symmetry runs on the periodic box; O/T/S are reduced to the meridian
// grid of opts.meridian, minimized there and lifted back onto init's grid.
// Throws std::domain_error("kernel field") if init has (numerically) no curl.
GroundState minimize_ground_state(const VectorField3& init, const Exponents& e,
                                  const MinimizeOptions& opts, const IterationCallback& cb = {});

// curl of a sum of random Gaussian vector potentials: divergence free, in V_h.
VectorField3 random_divfree_bump(const GridSpec& g, std::uint64_t seed, int lobes = 4,
                                 double width = 0.0);

struct HpEstimate {
  double H = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

// min over V_h of |curl v|_p^p / |grad v|_p^p on the periodic box g.
HpEstimate estimate_Hp(const GridSpec& g, const Exponents& e, const MinimizeOptions& opts);

struct SpEstimate {
  double plap = 0.0;
  double bubble = 0.0;
  double rel_gap = 0.0;
  PlapReport plap_report;
};

SpEstimate estimate_Sp(double p, int N, const RadialGrid& g = {}, const PlapOptions& opts = {});

}  // namespace pcurl
