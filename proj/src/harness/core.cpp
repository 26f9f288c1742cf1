#include "tnls/harness.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tnls/types.hpp"

namespace tnls::harness {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char ch : k)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '-')) return false;
  return true;
}

double parse_double(const std::string& key, const std::string& v) {
  std::string t = trim(v);
  if (t == "inf" || t == "infinity") return infinity;
  if (t == "-inf") return -infinity;
  errno = 0;
  char* end = nullptr;
  double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || std::isnan(x))
    throw ValidationError("config key '" + key + "': '" + v + "' is not a number");
  return x;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + p.string());
  os << text;
  if (!os) throw ValidationError("write failed: " + p.string());
}

nlohmann::ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (!valid_key(k)) throw ValidationError(origin + ":" + std::to_string(lineno) + ": invalid key '" + k + "'");
    if (c.values_.count(k)) throw ValidationError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + k + "'");
    c.values_[k] = v;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str(), path);
}

void Config::apply_override(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("override '" + assignment + "' is not key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ValidationError("invalid config key '" + key + "'");
  values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("missing config key '" + key + "' in " + origin_);
  record(key, it->second);
  return it->second;
}

void Config::record(const std::string& key, const std::string& value) const { resolved_[key] = value; }

std::string Config::str(const std::string& key) const { return raw(key); }

std::string Config::str(const std::string& key, const std::string& fallback) const {
  if (!has(key)) {
    record(key, fallback);
    return fallback;
  }
  return raw(key);
}

double Config::num(const std::string& key) const { return parse_double(key, raw(key)); }

double Config::num(const std::string& key, double fallback) const {
  if (!has(key)) {
    record(key, format_number(fallback));
    return fallback;
  }
  return num(key);
}

long long Config::integer(const std::string& key) const {
  std::string v = trim(raw(key));
  errno = 0;
  char* end = nullptr;
  long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    throw ValidationError("config key '" + key + "': '" + v + "' is not an integer");
  return x;
}

long long Config::integer(const std::string& key, long long fallback) const {
  if (!has(key)) {
    record(key, std::to_string(fallback));
    return fallback;
  }
  return integer(key);
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) {
    record(key, fallback ? "true" : "false");
    return fallback;
  }
  std::string v = trim(raw(key));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> Config::nums(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(raw(key))) out.push_back(parse_double(key, item));
  return out;
}

std::vector<double> Config::nums(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) {
    std::string v;
    for (std::size_t i = 0; i < fallback.size(); ++i) v += (i ? "," : "") + format_number(fallback[i]);
    record(key, v);
    return fallback;
  }
  return nums(key);
}

std::uint64_t Config::seed() const {
  std::string v = trim(raw("seed"));
  errno = 0;
  char* end = nullptr;
  unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || end != v.c_str() + v.size() || errno == ERANGE)
    throw ValidationError("config key 'seed': '" + v + "' is not an unsigned 64-bit integer");
  return x;
}

std::vector<std::string> Config::unused() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!resolved_.count(k)) out.push_back(k);
  return out;
}

void Config::require_all_used() const {
  auto u = unused();
  if (u.empty()) return;
  std::string msg = "unknown config key(s) in " + origin_ + ":";
  for (const auto& k : u) msg += " " + k;
  throw ValidationError(msg);
}

nlohmann::ordered_json Config::echo() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : resolved_) j[k] = v;
  return j;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::logic_error("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string Table::csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ",";
      if (auto* d = std::get_if<double>(&r[i])) out += format_number(*d);
      else if (auto* n = std::get_if<long long>(&r[i])) out += std::to_string(*n);
      else out += std::get<std::string>(r[i]);
    }
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json Table::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["columns"] = columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& c : r) {
      if (auto* d = std::get_if<double>(&c)) row.push_back(json_number(*d));
      else if (auto* n = std::get_if<long long>(&c)) row.push_back(*n);
      else row.push_back(std::get<std::string>(c));
    }
    j["rows"].push_back(row);
  }
  return j;
}

double Table::number(std::size_t row, const std::string& column) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == column) {
      const auto& c = rows.at(row)[i];
      if (auto* d = std::get_if<double>(&c)) return *d;
      if (auto* n = std::get_if<long long>(&c)) return static_cast<double>(*n);
      throw std::logic_error("table " + name + ": column " + column + " is not numeric");
    }
  throw std::logic_error("table " + name + ": no column " + column);
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
    case Status::info: return "info";
  }
  return "info";
}

Table& ExperimentReport::table(const std::string& name) {
  for (auto& t : tables)
    if (t.name == name) return t;
  throw std::logic_error("no table " + name);
}

const Table& ExperimentReport::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw std::logic_error("no table " + name);
}

void ExperimentReport::check(const std::string& name, bool ok, double value, const std::string& requirement,
                             const std::string& source) {
  checks.push_back({name, ok ? Status::pass : Status::fail, value, requirement, source});
}

const FitRecord& ExperimentReport::add_fit(const std::string& name, const std::string& table,
                                           const std::string& x, const std::string& y,
                                           const std::vector<double>& xs, const std::vector<double>& ys,
                                           bool loglog) {
  fits.push_back({name, table, x, y, loglog ? fit_loglog(xs, ys) : fit_line(xs, ys), loglog});
  return fits.back();
}

bool ExperimentReport::passed() const {
  for (const auto& c : checks)
    if (c.status == Status::fail || c.status == Status::inconclusive) return false;
  return true;
}

nlohmann::ordered_json ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "tnls-report/1";
  j["experiment"] = experiment;
  j["config"] = config;
  j["status"] = passed() ? "pass" : "fail";
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"status", to_string(c.status)},
                           {"value", json_number(c.value)},
                           {"requirement", c.requirement},
                           {"source", c.source}});
  j["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : fits) {
    auto res = nlohmann::ordered_json::array();
    for (double r : f.fit.residuals) res.push_back(json_number(r));
    j["fits"].push_back({{"name", f.name},
                         {"table", f.table},
                         {"x", f.x},
                         {"y", f.y},
                         {"slope", json_number(f.fit.slope)},
                         {"intercept", json_number(f.fit.intercept)},
                         {"slope_stderr", json_number(f.fit.slope_stderr)},
                         {"ci95", {json_number(f.fit.ci_low), json_number(f.fit.ci_high)}},
                         {"r2", json_number(f.fit.r2)},
                         {"n", f.fit.n},
                         {"residuals", res},
                         {"verdict", f.fit.verdict}});
  }
  // Plot manifest: axes only, rendering is left to the consumer.
  j["plots"] = nlohmann::ordered_json::array();
  for (const auto& f : fits)
    j["plots"].push_back({{"name", f.name},
                          {"csv", "tables/" + f.table + ".csv"},
                          {"x", f.x},
                          {"y", f.y},
                          {"scale", f.loglog ? "loglog" : "linear"},
                          {"fit", f.name}});
  j["flags"] = flags;
  j["resolution"] = resolution;
  j["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : tables) j["tables"].push_back(t.to_json());
  return j;
}

void ExperimentReport::write(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root / "tables", ec);
  if (ec) throw ValidationError("cannot create output directory " + (root / "tables").string() + ": " + ec.message());
  write_file(root / "report.json", to_json().dump(2) + "\n");
  nlohmann::ordered_json timing{{"experiment", experiment}, {"wall_seconds", wall_seconds}};
  write_file(root / "timing.json", timing.dump(2) + "\n");
  for (const auto& t : tables) write_file(root / "tables" / (t.name + ".csv"), t.csv());
}

const std::map<std::string, Runner>& experiments() {
  static const std::map<std::string, Runner> m{
      {"solve", run_solve},
      {"extinction", run_extinction},
      {"euclid-compare", run_euclidean_comparison},
      {"conservation", run_conservation},
      {"strichartz", run_strichartz},
      {"trilinear", run_trilinear},
      {"orthogonality", run_orthogonality},
      {"hflf", run_hflf},
      {"field-io", run_field_io},
  };
  return m;
}

ExperimentReport run(const std::string& experiment, const Config& config, const RunContext& ctx) {
  auto it = experiments().find(experiment);
  if (it == experiments().end()) throw ValidationError("unknown experiment '" + experiment + "'");
  return it->second(config, ctx);
}

}  // namespace tnls::harness
