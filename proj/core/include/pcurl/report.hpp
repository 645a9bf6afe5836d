#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "pcurl/config.hpp"
#include "pcurl/minimizer.hpp"

namespace pcurl {

// One row per certified check.
struct CheckRow {
  std::string name;
  double expected = 0.0;
  double got = 0.0;
  double rel_err = 0.0;
  bool pass = false;
};

// Config items as "# key=value" lines.
void write_config_header(std::ostream& os, const Config& c);

// iter,J,Q,nehari_defect,grad_norm,wall_ms
void write_minimize_csv(std::ostream& os, const Config& c, const MinimizeReport& r);
// name,expected,got,rel_err,pass
void write_verify_csv(std::ostream& os, const Config& c, const std::vector<CheckRow>& rows);

// Round-trip exact text form of a double.
std::string format_double(double x);

}  // namespace pcurl
