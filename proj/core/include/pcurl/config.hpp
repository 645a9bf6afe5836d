#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pcurl/constraint.hpp"
#include "pcurl/grid.hpp"
#include "pcurl/minimizer.hpp"

namespace pcurl {

// Plain key=value settings. '#' starts a comment; blank lines are ignored.
class Config {
 public:
  // Every recognized key with its default value.
  static Config defaults();

  // Overlays a key=value file; unknown keys are rejected.
  void load_file(const std::string& path);
  // Overlays PCURL_<KEY> environment variables (key upper-cased, '.' -> '_').
  void load_env();
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;

  const std::map<std::string, std::string>& items() const { return kv_; }

  static std::string env_name(const std::string& key);

 private:
  std::map<std::string, std::string> kv_;
};

struct RunConfig {
  double p = 1.5;
  GridSpec grid;
  Symmetry symmetry = Symmetry::full;
  std::string init = "auto";  // auto | loss_yau | random | <path to a field file>
  std::uint64_t seed = 1;
  MinimizeOptions minimize;
  std::vector<double> p_list;
  std::string input;  // decompose input file
  int hp_n = 24;
  double hp_L = 6.0;
};

// Parses and checks every module precondition; throws std::invalid_argument.
RunConfig parse_run_config(const Config& c);

}  // namespace pcurl
