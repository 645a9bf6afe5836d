#include "pcurl/report.hpp"

#include <cstdio>

namespace pcurl {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_config_header(std::ostream& os, const Config& c) {
  for (const auto& [k, v] : c.items()) os << "# " << k << '=' << v << '\n';
}

void write_minimize_csv(std::ostream& os, const Config& c, const MinimizeReport& r) {
  write_config_header(os, c);
  os << "# stop_reason=" << r.stop_reason << '\n';
  os << "iter,J,Q,nehari_defect,grad_norm,wall_ms\n";
  for (const auto& it : r.records)
    os << it.iter << ',' << format_double(it.J) << ',' << format_double(it.Q) << ','
       << format_double(it.nehari_defect) << ',' << format_double(it.grad_norm) << ','
       << format_double(it.wall_ms) << '\n';
}

void write_verify_csv(std::ostream& os, const Config& c, const std::vector<CheckRow>& rows) {
  write_config_header(os, c);
  os << "name,expected,got,rel_err,pass\n";
  for (const auto& r : rows)
    os << r.name << ',' << format_double(r.expected) << ',' << format_double(r.got) << ','
       << format_double(r.rel_err) << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
}

}  // namespace pcurl
