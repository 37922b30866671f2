#include "horolab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "horolab/config.hpp"
#include "horolab/error.hpp"

namespace horolab {

CheckRecord& SuiteReport::add(std::string id, double measured, double bound, bool pass, std::string dig) {
  checks.push_back(CheckRecord{std::move(id), measured, bound, pass, std::move(dig)});
  return checks.back();
}

CheckRecord& SuiteReport::add_le(std::string id, double measured, double bound, std::string dig) {
  return add(std::move(id), measured, bound, measured <= bound, std::move(dig));
}

CheckRecord& SuiteReport::add_ge(std::string id, double measured, double bound, std::string dig) {
  return add(std::move(id), measured, bound, measured >= bound, std::move(dig));
}

void SuiteReport::fit(std::string name, double value, double lo, double hi) {
  constants.push_back(FittedConstant{std::move(name), value, lo, hi});
}

bool SuiteReport::all_pass() const { return failures() == 0; }

int SuiteReport::failures() const {
  int f = 0;
  for (const CheckRecord& c : checks) f += c.pass ? 0 : 1;
  return f;
}

const CheckRecord* SuiteReport::find(const std::string& id) const {
  for (const CheckRecord& c : checks)
    if (c.check_id == id) return &c;
  return nullptr;
}

std::string csv_header() { return "suite,check_id,n,seed,measured,bound,pass\n"; }

std::string to_csv(const SuiteReport& r, bool header) {
  std::string out = header ? csv_header() : std::string();
  for (const CheckRecord& c : r.checks) {
    out += r.suite + "," + c.check_id + "," + std::to_string(r.n) + "," + std::to_string(r.seed) + "," +
           format_double(c.measured) + "," + format_double(c.bound) + "," + (c.pass ? "true" : "false") + "\n";
  }
  return out;
}

std::string to_json(const SuiteReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "horolab.report/1";
  j["suite"] = r.suite;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["pass"] = r.all_pass();
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const CheckRecord& c : r.checks)
    checks.push_back({{"check_id", c.check_id}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass},
                      {"digest", c.digest}});
  auto& consts = j["constants"] = nlohmann::ordered_json::array();
  for (const FittedConstant& f : r.constants)
    consts.push_back({{"name", f.name}, {"value", f.value}, {"lo", f.lo}, {"hi", f.hi}});
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      fail(ErrorKind::InvalidArgument, "write failed for '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target);
}

std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  if (k < 2 || y.size() != k) fail(ErrorKind::InvalidArgument, "fit_line needs at least two paired values");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) fail(ErrorKind::InvalidArgument, "fit_line needs distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    sse += e * e;
  }
  const double se = k > 2 ? std::sqrt(sse / (k - 2) / sxx) : 0.0;
  f.slope_lo = f.slope - 1.96 * se;
  f.slope_hi = f.slope + 1.96 * se;
  return f;
}

}  // namespace horolab
