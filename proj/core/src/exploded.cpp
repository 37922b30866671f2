#include "horolab/exploded.hpp"

#include <algorithm>

#include "horolab/error.hpp"
#include "horolab/random.hpp"

namespace horolab {

namespace {

bool contains(const std::vector<int>& big, const std::vector<int>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

ExplodedComplex::ExplodedComplex(int d, double collar) : d_(d), collar_(collar) {
  if (d < 0 || d > 3) fail(ErrorKind::InvalidArgument, "exploded simplex dimension must be in 0..3");
  const int nv = d + 1;
  for (int mask = 1; mask < (1 << nv); ++mask) {
    std::vector<int> f;
    for (int i = 0; i < nv; ++i)
      if (mask & (1 << i)) f.push_back(i);
    faces_.push_back(f);
  }
  std::stable_sort(faces_.begin(), faces_.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  const int nf = static_cast<int>(faces_.size());
  // chains grown one strict superset at a time
  std::vector<std::vector<int>> chains;
  std::vector<std::vector<int>> frontier;
  for (int f = 0; f < nf; ++f) frontier.push_back({f});
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (auto& ch : frontier) {
      chains.push_back(ch);
      for (int g = 0; g < nf; ++g)
        if (faces_[g].size() > faces_[ch.back()].size() && contains(faces_[g], faces_[ch.back()])) {
          auto ext = ch;
          ext.push_back(g);
          next.push_back(ext);
        }
    }
    frontier = std::move(next);
  }
  for (int f = 0; f < nf; ++f)
    for (const auto& ch : chains)
      if (contains(faces_[ch.front()], faces_[f]))
        cells_.push_back(ExplodedCell{f, ch, static_cast<int>(faces_[f].size()) - 1 + static_cast<int>(ch.size()) - 1});
}

std::vector<int> ExplodedComplex::top_cells() const {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c)
    if (cells_[c].dim == d_) out.push_back(c);
  return out;
}

int ExplodedComplex::face_index(const std::vector<int>& verts) const {
  auto it = std::find(faces_.begin(), faces_.end(), verts);
  if (it == faces_.end()) fail(ErrorKind::InvalidArgument, "not a face of the simplex");
  return static_cast<int>(it - faces_.begin());
}

Eigen::VectorXd ExplodedComplex::barycenter(int face) const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d_ + 1);
  for (int v : faces_[face]) b(v) = 1.0 / static_cast<double>(faces_[face].size());
  return b;
}

Eigen::VectorXd ExplodedComplex::embed(int cell, const Eigen::VectorXd& face_weights,
                                       const Eigen::VectorXd& chain_weights) const {
  const ExplodedCell& c = cells_[cell];
  Eigen::VectorXd pos = Eigen::VectorXd::Zero(d_ + 1);
  for (std::size_t i = 0; i < c.chain.size(); ++i) pos += (1.0 - collar_) * chain_weights(i) * barycenter(c.chain[i]);
  const auto& f = faces_[c.face];
  for (std::size_t k = 0; k < f.size(); ++k) pos(f[k]) += collar_ * face_weights(k);
  return pos;
}

ExplodedPoint ExplodedComplex::locate(const Eigen::VectorXd& q) const {
  if (q.size() != d_ + 1 || (q.array() < -1e-12).any() || std::abs(q.sum() - 1.0) > 1e-9)
    fail(ErrorKind::InvalidArgument, "point is not in the simplex");
  for (int cid : top_cells()) {
    const ExplodedCell& c = cells_[cid];
    const auto& f = faces_[c.face];
    const int nm = static_cast<int>(c.chain.size());
    const int nn = static_cast<int>(f.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d_ + 3, nm + nn);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d_ + 3);
    for (int i = 0; i < nm; ++i) a.block(0, i, d_ + 1, 1) = (1.0 - collar_) * barycenter(c.chain[i]);
    for (int k = 0; k < nn; ++k) a(f[k], nm + k) = collar_;
    rhs.head(d_ + 1) = q;
    a.block(d_ + 1, 0, 1, nm).setOnes();
    a.block(d_ + 2, nm, 1, nn).setOnes();
    rhs(d_ + 1) = 1.0;
    rhs(d_ + 2) = 1.0;
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);
    if ((a * sol - rhs).norm() > 1e-10 || (sol.array() < -1e-10).any()) continue;
    Eigen::VectorXd mu = sol.head(nm).cwiseMax(0.0);
    Eigen::VectorXd nu = sol.tail(nn).cwiseMax(0.0);
    mu /= mu.sum();
    nu /= nu.sum();
    ExplodedPoint out{cid, Eigen::VectorXd::Zero(d_ + 1), Eigen::VectorXd::Zero(d_ + 1), c.chain, mu};
    for (int k = 0; k < nn; ++k) out.p(f[k]) = nu(k);
    for (int i = 0; i < nm; ++i) out.y += mu(i) * barycenter(c.chain[i]);
    return out;
  }
  fail(ErrorKind::NumericalFailure, "point not found in any exploded cell");
}

ExplodedComplex build_exploded(int d) { return ExplodedComplex(d); }

ProjectionLipschitz measure_projection_lipschitz(const ExplodedComplex& cx, int pairs, std::uint64_t seed) {
  Rng rng(seed);
  ProjectionLipschitz lip{0.0, 0.0};
  const int n = cx.dim() + 1;
  if (cx.dim() == 0) return {1.0, 1.0};
  for (int s = 0; s < pairs; ++s) {
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a(i) = -std::log(1.0 - rng.uniform());
    a /= a.sum();
    Eigen::VectorXd dir = rng.normal_vector(n);
    dir = dir.array() - dir.mean();
    dir *= 1e-4 / dir.norm();
    Eigen::VectorXd b = a + dir;
    if ((b.array() < 0).any()) continue;
    const double dq = (a - b).norm();
    const ExplodedPoint pa = cx.locate(a);
    const ExplodedPoint pb = cx.locate(b);
    lip.p1 = std::max(lip.p1, (pa.p - pb.p).norm() / dq);
    lip.p2 = std::max(lip.p2, (pa.y - pb.y).norm() / dq);
  }
  return lip;
}

}  // namespace horolab
