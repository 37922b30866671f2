#pragma once

// Suite reports. CSV columns are fixed: suite,check_id,n,seed,measured,bound,pass.

#include <cstdint>
#include <string>
#include <vector>

namespace horolab {

struct CheckRecord {
  std::string check_id;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string digest;  // short hash of the inputs
};

struct FittedConstant {
  std::string name;
  double value = 0.0;
  double lo = 0.0;  // confidence interval
  double hi = 0.0;
};

struct SuiteReport {
  std::string suite;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  std::vector<FittedConstant> constants;
  double wall_time = 0.0;  // seconds; kept out of the files so they stay byte-identical

  /// Adds a check; `pass` decided by the caller.
  CheckRecord& add(std::string id, double measured, double bound, bool pass, std::string digest = {});
  /// measured <= bound.
  CheckRecord& add_le(std::string id, double measured, double bound, std::string digest = {});
  /// measured >= bound.
  CheckRecord& add_ge(std::string id, double measured, double bound, std::string digest = {});
  void fit(std::string name, double value, double lo, double hi);
  bool all_pass() const;
  int failures() const;
  const CheckRecord* find(const std::string& id) const;
};

std::string csv_header();
std::string to_csv(const SuiteReport& r, bool header = true);
/// Structured form; per-check records plus fitted constants.
std::string to_json(const SuiteReport& r);

/// Writes to `path + ".tmp"` and renames over `path`; no partial file on failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// FNV-1a, hex encoded, over the given text.
std::string digest(const std::string& text);

/// Least-squares line y = a + b x with a normal-approximation 95% interval for b.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_lo = 0.0;
  double slope_hi = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace horolab
