#include "barriers/exterior.hpp"

#include "barriers/error.hpp"

#include <algorithm>
#include <cmath>

namespace barriers {

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

std::vector<std::vector<int>> multi_indices(int n, int p) {
  std::vector<std::vector<int>> out;
  if (p < 0 || p > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int i = p - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - p + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < p; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::size_t multi_index_position(int n, const std::vector<int>& index) {
  // Count the subsets that precede `index` lexicographically.
  const int p = static_cast<int>(index.size());
  std::size_t pos = 0;
  int prev = -1;
  for (int i = 0; i < p; ++i) {
    for (int v = prev + 1; v < index[static_cast<std::size_t>(i)]; ++v) pos += binomial(n - v - 1, p - i - 1);
    prev = index[static_cast<std::size_t>(i)];
  }
  return pos;
}

PVector::PVector(int n, int p) : PVector(n, p, Vec::Zero(static_cast<Eigen::Index>(binomial(n, p)))) {}

PVector::PVector(int n, int p, Vec coords) : n_(n), p_(p), coords_(std::move(coords)) {
  require(n >= 1 && p >= 0 && p <= n, ErrorCode::InvalidInput, "p-vector grade out of range");
  require(static_cast<std::size_t>(coords_.size()) == binomial(n, p), ErrorCode::InvalidInput,
          "p-vector coordinate count must equal C(n,p)");
  require(coords_.allFinite(), ErrorCode::InvalidInput, "p-vector coordinates must be finite");
}

double PVector::at(const std::vector<int>& index) const {
  return coords_[static_cast<Eigen::Index>(multi_index_position(n_, index))];
}

static void check_same_space(const PVector& a, const PVector& b) {
  require(a.n() == b.n() && a.p() == b.p(), ErrorCode::InvalidInput, "p-vector grade/dimension mismatch");
}

PVector PVector::operator+(const PVector& o) const {
  check_same_space(*this, o);
  return PVector(n_, p_, coords_ + o.coords_);
}
PVector PVector::operator-(const PVector& o) const {
  check_same_space(*this, o);
  return PVector(n_, p_, coords_ - o.coords_);
}
PVector PVector::operator-() const { return PVector(n_, p_, -coords_); }
PVector PVector::operator*(double s) const { return PVector(n_, p_, coords_ * s); }

Frame::Frame(Mat columns) : m_(std::move(columns)) {
  require(m_.cols() >= 1 && m_.cols() <= m_.rows(), ErrorCode::InvalidInput, "frame needs 1 <= p <= n");
  const Mat gram = m_.transpose() * m_;
  const double dev = (gram - Mat::Identity(m_.cols(), m_.cols())).cwiseAbs().maxCoeff();
  require(dev < kFrameTol, ErrorCode::InvalidInput, "frame is not orthonormal");
}

PVector wedge(const Mat& vectors) {
  const int n = static_cast<int>(vectors.rows());
  const int p = static_cast<int>(vectors.cols());
  require(p >= 1 && p <= n, ErrorCode::InvalidInput, "wedge needs 1 <= p <= n vectors");
  const auto indices = multi_indices(n, p);
  Vec c(static_cast<Eigen::Index>(indices.size()));
  Mat minor(p, p);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    for (int r = 0; r < p; ++r) minor.row(r) = vectors.row(indices[k][static_cast<std::size_t>(r)]);
    c[static_cast<Eigen::Index>(k)] = minor.determinant();
  }
  return PVector(n, p, std::move(c));
}

PVector wedge(const PVector& a, const PVector& b) {
  require(a.n() == b.n(), ErrorCode::InvalidInput, "wedge of p-vectors in different dimensions");
  const int n = a.n();
  const int p = a.p() + b.p();
  require(p <= n, ErrorCode::InvalidInput, "wedge grade exceeds dimension");
  PVector out(n, p);
  Vec c = Vec::Zero(static_cast<Eigen::Index>(binomial(n, p)));
  const auto ia = multi_indices(n, a.p());
  const auto ib = multi_indices(n, b.p());
  std::vector<int> merged(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < ia.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < ib.size(); ++j) {
      if (b[j] == 0.0) continue;
      // Sign of the shuffle sorting ia[i] ++ ib[j]; zero if they overlap.
      int inversions = 0;
      bool overlap = false;
      for (int x : ia[i]) {
        for (int y : ib[j]) {
          if (x == y) overlap = true;
          if (x > y) ++inversions;
        }
      }
      if (overlap) continue;
      std::merge(ia[i].begin(), ia[i].end(), ib[j].begin(), ib[j].end(), merged.begin());
      const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
      c[static_cast<Eigen::Index>(multi_index_position(n, merged))] += sign * a[i] * b[j];
    }
  }
  return PVector(n, p, std::move(c));
}

double pinner(const PVector& a, const PVector& b) {
  check_same_space(a, b);
  return a.coords().dot(b.coords());
}

double pnorm(const PVector& a) { return a.coords().norm(); }

Frame gram_schmidt(const Mat& vectors) {
  require(vectors.cols() >= 1 && vectors.cols() <= vectors.rows(), ErrorCode::InvalidInput,
          "gram_schmidt needs 1 <= p <= n vectors");
  Eigen::JacobiSVD<Mat> svd(vectors);
  const double smin = svd.singularValues().minCoeff();
  require(smin > 1e-10, ErrorCode::DegenerateInput, "vectors are linearly dependent");
  Mat q = vectors;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    }
    q.col(j).normalize();
  }
  return Frame(std::move(q));
}

PVector plucker(const Frame& frame) { return wedge(frame.matrix()); }

bool is_simple(const PVector& a, double tol) {
  require(a.p() == 2, ErrorCode::UnsupportedGrade, "is_simple supports 2-vectors only");
  if (a.n() < 4) return true;
  const double n2 = a.coords().squaredNorm();
  return pnorm(wedge(a, a)) <= tol * n2;
}

PVector hodge_star_2_4(const PVector& a) {
  require(a.n() == 4 && a.p() == 2, ErrorCode::InvalidInput, "hodge_star_2_4 needs a 2-vector in R^4");
  // Coordinates: 12, 13, 14, 23, 24, 34.
  const Vec& c = a.coords();
  Vec s(6);
  s << c[5], -c[4], c[3], c[2], -c[1], c[0];
  return PVector(4, 2, std::move(s));
}

Frame complement_frame(const Mat& frame) {
  const Eigen::Index n = frame.rows();
  const Eigen::Index p = frame.cols();
  require(p < n, ErrorCode::InvalidInput, "frame has no orthogonal complement");
  Mat acc = frame;
  Mat basis(n, n - p);
  for (Eigen::Index found = 0; found < n - p; ++found) {
    // Take the standard basis vector with the largest residual; ties go to
    // the lowest index.
    Vec best;
    double best_len = -1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      Vec v = Vec::Unit(n, k);
      for (int pass = 0; pass < 2; ++pass) v -= acc * (acc.transpose() * v);
      const double len = v.norm();
      if (len > best_len + 1e-12) {
        best_len = len;
        best = v;
      }
    }
    best /= best_len;
    for (int pass = 0; pass < 2; ++pass) {
      best -= acc * (acc.transpose() * best);
      best.normalize();
    }
    basis.col(found) = best;
    acc.conservativeResize(Eigen::NoChange, acc.cols() + 1);
    acc.col(acc.cols() - 1) = best;
  }
  return Frame(std::move(basis));
}

}  // namespace barriers
