#pragma once

// Exploded simplex E(Delta): each cell is (face delta) x (chain simplex
// <b_{d0}, ..., b_{dj}> of the barycentric subdivision) with delta a face of d0.
// A point of the cell sits at (1 - collar) * y + collar * p for y in the
// chain simplex and p in delta; p1 returns p and p2 returns y.

#include <vector>

#include <Eigen/Dense>

namespace horolab {

struct ExplodedCell {
  int face;                // index into faces()
  std::vector<int> chain;  // strictly increasing faces, chain[0] contains face
  int dim;
};

struct ExplodedPoint {
  int cell;
  Eigen::VectorXd p;        // p1(q), barycentric in Delta
  Eigen::VectorXd y;        // p2(q), barycentric in Delta
  std::vector<int> chain;   // chain faces carrying y
  Eigen::VectorXd weights;  // y = sum weights_i * barycenter(chain_i)
};

class ExplodedComplex {
 public:
  explicit ExplodedComplex(int d, double collar = 0.5);

  int dim() const noexcept { return d_; }
  double collar() const noexcept { return collar_; }
  const std::vector<std::vector<int>>& faces() const noexcept { return faces_; }
  const std::vector<ExplodedCell>& cells() const noexcept { return cells_; }
  std::vector<int> top_cells() const;
  int face_index(const std::vector<int>& verts) const;
  Eigen::VectorXd barycenter(int face) const;

  /// Position of a cell point from face weights (per vertex of the face) and chain weights.
  Eigen::VectorXd embed(int cell, const Eigen::VectorXd& face_weights, const Eigen::VectorXd& chain_weights) const;
  /// Throws InvalidArgument if q is not in Delta.
  ExplodedPoint locate(const Eigen::VectorXd& q) const;
  Eigen::VectorXd p1(const Eigen::VectorXd& q) const { return locate(q).p; }
  Eigen::VectorXd p2(const Eigen::VectorXd& q) const { return locate(q).y; }

 private:
  int d_;
  double collar_;
  std::vector<std::vector<int>> faces_;
  std::vector<ExplodedCell> cells_;
};

ExplodedComplex build_exploded(int d);

/// Sampled Lipschitz constants of p1 and p2 on nearby pairs of interior points.
struct ProjectionLipschitz {
  double p1;
  double p2;
};
ProjectionLipschitz measure_projection_lipschitz(const ExplodedComplex& cx, int pairs, std::uint64_t seed);

}  // namespace horolab
