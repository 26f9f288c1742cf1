#pragma once

// Experiment plumbing: key=value configuration, result tables, fits, checks
// and the report written as report.json plus tables/*.csv.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tnls/fit.hpp"

namespace tnls::harness {

// Flat UTF-8 "key = value" lines; '#' starts a comment; lists are comma separated.
// Every lookup records the value it resolved (defaults included), so echo()
// reproduces the run exactly.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  // "key=value"; replaces any earlier value.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key) const;
  double num(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer(const std::string& key, long long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> nums(const std::string& key) const;
  std::vector<double> nums(const std::string& key, const std::vector<double>& fallback) const;
  std::uint64_t seed() const;

  // Keys present in the input but never read.
  std::vector<std::string> unused() const;
  // Throws ValidationError naming the unused keys; runners call it once all
  // parameters are read, before any computation.
  void require_all_used() const;
  nlohmann::ordered_json echo() const;
  std::string origin() const { return origin_; }

 private:
  std::string raw(const std::string& key) const;
  void record(const std::string& key, const std::string& value) const;

  std::string origin_;
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> resolved_;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table() = default;
  Table(std::string n, std::vector<std::string> c) : name(std::move(n)), columns(std::move(c)) {}
  void add(std::vector<Cell> row);
  std::string csv() const;
  nlohmann::ordered_json to_json() const;
  double number(std::size_t row, const std::string& column) const;
};

// %.17g, with inf and nan spelled out; the CSV and the JSON agree on every digit.
std::string format_number(double x);

enum class Status { pass, fail, inconclusive, info };
std::string to_string(Status s);

struct Check {
  std::string name;
  Status status = Status::info;
  double value = 0.0;
  std::string requirement;
  std::string source;  // table the value is computed from
};

struct FitRecord {
  std::string name;
  std::string table;
  std::string x;
  std::string y;
  LinearFit fit;
  bool loglog = true;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::ordered_json config;
  std::vector<Table> tables;
  std::vector<FitRecord> fits;
  std::vector<Check> checks;
  std::vector<std::string> flags;
  nlohmann::ordered_json resolution = nlohmann::ordered_json::object();
  double wall_seconds = 0.0;

  Table& table(const std::string& name);
  const Table& table(const std::string& name) const;
  void check(const std::string& name, bool ok, double value, const std::string& requirement,
             const std::string& source);
  // Fit of log y against log x (or y against x); the status follows the fit verdict.
  const FitRecord& add_fit(const std::string& name, const std::string& table, const std::string& x,
                           const std::string& y, const std::vector<double>& xs, const std::vector<double>& ys,
                           bool loglog = true);
  // All checks pass or are informational; inconclusive counts as not passed.
  bool passed() const;
  // Deterministic: no wall-clock data (that goes to timing.json).
  nlohmann::ordered_json to_json() const;
  // report.json, timing.json and tables/<name>.csv under dir.
  void write(const std::string& dir) const;
};

// Where experiments that emit fields write them (fields/ under out_dir); empty
// means no field output.
struct RunContext {
  std::string out_dir;
};

using Runner = std::function<ExperimentReport(const Config&, const RunContext&)>;
const std::map<std::string, Runner>& experiments();
// Throws ValidationError for an unknown experiment name.
ExperimentReport run(const std::string& experiment, const Config& config, const RunContext& ctx = {});

ExperimentReport run_solve(const Config& c, const RunContext& ctx);
ExperimentReport run_extinction(const Config& c, const RunContext& ctx);
ExperimentReport run_euclidean_comparison(const Config& c, const RunContext& ctx);
ExperimentReport run_conservation(const Config& c, const RunContext& ctx);
ExperimentReport run_strichartz(const Config& c, const RunContext& ctx);
ExperimentReport run_trilinear(const Config& c, const RunContext& ctx);
ExperimentReport run_orthogonality(const Config& c, const RunContext& ctx);
ExperimentReport run_hflf(const Config& c, const RunContext& ctx);
ExperimentReport run_field_io(const Config& c, const RunContext& ctx);

}  // namespace tnls::harness
