#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace horolab {

/// Seeded generator with platform-independent uniform and normal draws.
///
/// The standard distributions are implementation-defined, so byte-identical
/// reports across toolchains need our own transforms on top of mt19937_64.
/// Parallel users must derive disjoint streams with `split`.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  int index(int count);                      // [0, count)
  Eigen::VectorXd normal_vector(int n);
  Eigen::VectorXd unit_vector(int n);
  Eigen::MatrixXd normal_matrix(int rows, int cols);

  /// Independent stream keyed by `stream`; does not advance this generator.
  Rng split(std::uint64_t stream) const;

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace horolab
