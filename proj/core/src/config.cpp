#include "horolab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "horolab/error.hpp"
#include "horolab/report.hpp"

namespace horolab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d))
    fail(ErrorKind::InvalidArgument, "config: key '" + key + "' expects a number, got '" + v + "'");
  return d;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    fail(ErrorKind::InvalidArgument, "config: key '" + key + "' expects an unsigned integer, got '" + v + "'");
  return out;
}

int parse_count(const std::string& key, const std::string& v) {
  const std::uint64_t c = parse_u64(key, v);
  if (c < 1 || c > 100000000) fail(ErrorKind::InvalidArgument, "config: '" + key + "' must be a count >= 1");
  return static_cast<int>(c);
}

std::map<std::string, double*> policy_fields(NumericPolicy& p) {
  return {{"construction", &p.construction},     {"reconstruction", &p.reconstruction},
          {"cartan_trace", &p.cartan_trace},     {"regularity", &p.regularity},
          {"transversality", &p.transversality}, {"pivot_margin", &p.pivot_margin},
          {"condition_warning", &p.condition_warning}, {"membership", &p.membership},
          {"crossing", &p.crossing},             {"flat_descent", &p.flat_descent}};
}

std::map<std::string, std::string> parse_lines(const std::string& text, const std::string& what) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::InvalidArgument, what + ": line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(ErrorKind::InvalidArgument, what + ": empty key on line " + std::to_string(lineno));
    if (kv.count(key)) fail(ErrorKind::InvalidArgument, what + ": duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tau_text(const Vector& tau) {
  std::string s;
  for (int i = 0; i < tau.size(); ++i) s += (i ? ", " : "") + format_double(tau(i));
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::map<std::string, double> Calibration::as_map() const {
  return {{"c_compare", c_compare},     {"c_enlarge", c_enlarge},   {"rho_star", rho_star},
          {"c_push", c_push},           {"lip_cap", lip_cap},       {"two_point_cap", two_point_cap},
          {"anchor_cap", anchor_cap},   {"c_fill_cap", c_fill_cap}, {"path_cap", path_cap}};
}

std::vector<std::string> Calibration::apply(const std::map<std::string, double>& values) {
  std::map<std::string, double*> f{{"c_compare", &c_compare},   {"c_enlarge", &c_enlarge},
                                   {"rho_star", &rho_star},     {"c_push", &c_push},
                                   {"lip_cap", &lip_cap},       {"two_point_cap", &two_point_cap},
                                   {"anchor_cap", &anchor_cap}, {"c_fill_cap", &c_fill_cap},
                                   {"path_cap", &path_cap}};
  std::vector<std::string> used;
  for (const auto& [k, v] : values) {
    auto it = f.find(k);
    if (it == f.end()) continue;
    *it->second = v;
    used.push_back(k);
  }
  return used;
}

int RunConfig::samples_for(const std::string& key, int fallback) const {
  auto it = samples.find(key);
  return it == samples.end() ? fallback : it->second;
}

BusemannConfig RunConfig::busemann() const {
  if (n < 2) fail(ErrorKind::InvalidArgument, "config: n must be >= 2");
  if (tau.size() == 0) return BusemannConfig::make(chamber_barycenter(n).values(), policy);
  if (tau.size() != n)
    fail(ErrorKind::InvalidArgument, "config: tau has " + std::to_string(tau.size()) + " entries, n = " + std::to_string(n));
  return BusemannConfig::make(tau, policy);
}

HorosphereContext RunConfig::context() const { return compute_margins(busemann()); }

std::string RunConfig::to_text() const {
  std::map<std::string, std::string> kv;
  kv["n"] = std::to_string(n);
  if (tau.size()) kv["tau"] = tau_text(tau);
  kv["seed"] = std::to_string(seed);
  kv["out_dir"] = out_dir;
  if (!lockfile.empty()) kv["lockfile"] = lockfile;
  for (const auto& [k, v] : samples) kv[k + ".samples"] = std::to_string(v);
  NumericPolicy p = policy;
  for (const auto& [k, v] : policy_fields(p)) kv["policy." + k] = format_double(*v);
  for (const auto& [k, v] : calibration.as_map()) kv["calibration." + k] = format_double(v);
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  for (const auto& [key, value] : parse_lines(text, "config")) {
    if (key == "n") {
      cfg.n = parse_count(key, value);
      if (cfg.n < 2) fail(ErrorKind::InvalidArgument, "config: n must be >= 2");
    } else if (key == "tau") {
      std::vector<double> entries;
      std::string item;
      std::istringstream in(value);
      while (std::getline(in, item, ',')) entries.push_back(parse_double(key, trim(item)));
      cfg.tau = Eigen::Map<Vector>(entries.data(), static_cast<int>(entries.size()));
    } else if (key == "seed") {
      cfg.seed = parse_u64(key, value);
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "lockfile") {
      cfg.lockfile = value;
    } else if (key.size() > 8 && key.compare(key.size() - 8, 8, ".samples") == 0) {
      cfg.samples[key.substr(0, key.size() - 8)] = parse_count(key, value);
    } else if (key.rfind("policy.", 0) == 0) {
      auto fields = policy_fields(cfg.policy);
      auto it = fields.find(key.substr(7));
      if (it == fields.end()) fail(ErrorKind::InvalidArgument, "config: unknown policy key '" + key + "'");
      const double v = parse_double(key, value);
      if (!(v > 0)) fail(ErrorKind::InvalidArgument, "config: '" + key + "' must be positive");
      *it->second = v;
    } else if (key.rfind("calibration.", 0) == 0) {
      Calibration probe;
      const double v = parse_double(key, value);
      if (probe.apply({{key.substr(12), v}}).empty())
        fail(ErrorKind::InvalidArgument, "config: unknown calibration key '" + key + "'");
      if (!(v > 0)) fail(ErrorKind::InvalidArgument, "config: '" + key + "' must be positive");
      cfg.calibration.apply({{key.substr(12), v}});
    } else {
      fail(ErrorKind::InvalidArgument, "config: unknown key '" + key + "'");
    }
  }
  cfg.busemann();  // tau must be regular and decreasing
  return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

void apply_env_overrides(RunConfig& cfg) {
  if (const char* s = std::getenv("HOROLAB_SEED"); s && *s) cfg.seed = parse_u64("HOROLAB_SEED", s);
  if (const char* o = std::getenv("HOROLAB_OUT"); o && *o) cfg.out_dir = o;
}

void write_lockfile(const std::string& path, const RunConfig& cfg, const std::map<std::string, double>& constants) {
  std::string out = "# calibration lockfile\n";
  out += "n = " + std::to_string(cfg.n) + "\n";
  out += "tau = " + tau_text(cfg.busemann().tau.values()) + "\n";
  out += "seed = " + std::to_string(cfg.seed) + "\n";
  for (const auto& [k, v] : constants) out += k + " = " + format_double(v) + "\n";
  write_file_atomic(path, out);
}

std::map<std::string, double> read_lockfile(const std::string& path, const RunConfig& cfg) {
  const auto kv = parse_lines(read_file(path), "lockfile");
  auto it = kv.find("n");
  if (it == kv.end() || it->second != std::to_string(cfg.n))
    fail(ErrorKind::CalibrationFailure, "lockfile '" + path + "' was calibrated for a different n");
  it = kv.find("tau");
  if (it == kv.end() || it->second != tau_text(cfg.busemann().tau.values()))
    fail(ErrorKind::CalibrationFailure, "lockfile '" + path + "' was calibrated for a different tau");
  std::map<std::string, double> out;
  for (const auto& [k, v] : kv)
    if (k != "n" && k != "tau" && k != "seed") out[k] = parse_double(k, v);
  return out;
}

}  // namespace horolab
