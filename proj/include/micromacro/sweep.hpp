#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "micromacro/error.hpp"

namespace micromacro {

// Malformed or inconsistent run configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// "a,b,c" lists and "start:stop:count" inclusive linspaces, freely mixed: "0,0.5:1:3".
std::vector<double> parse_grid(const std::string& text);

// Flat key=value settings. Keys may repeat; every occurrence appends to the grid.
struct RunConfig {
  std::string experiment;
  std::map<std::string, std::vector<std::string>> settings;
  std::string out;  // empty: standard output
  std::string format = "csv";

  static RunConfig parse(std::istream& in, const std::string& origin = "<config>");
  static RunConfig from_file(const std::string& path);

  // Keys present in `overrides` replace this config's values.
  void merge(const RunConfig& overrides);

  bool has(const std::string& key) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<std::string> texts(const std::string& key,
                                 const std::vector<std::string>& fallback) const;
  double real(const std::string& key, double fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;

  // FNV-1a 64 over the experiment name and the sorted settings; the output
  // path and format are excluded.
  std::uint64_t hash() const;
};

using Cell = std::variant<double, long long, std::string>;

struct SweepTable {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"visibility",     "witness-sigma", "witness-ofilter",
                                              "witness-stokes", "concurrence",   "pcrit",
                                              "ofilter-dist",   "density"};
  return names;
}

// Validates the whole configuration, then evaluates every grid point in order.
SweepTable run_experiment(const RunConfig& config);

std::string format_double(double x);
void write_csv(std::ostream& os, const SweepTable& table);
void write_records(std::ostream& os, const SweepTable& table);
void write_table(std::ostream& os, const SweepTable& table, const std::string& format);

}  // namespace micromacro
