#pragma once
// Test-side helpers: seeded random inputs and small independent oracles.
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline Mat gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

inline Vec unit(std::mt19937_64& rng, int n) {
  Vec v = gaussian(rng, n, 1).col(0);
  return v / v.norm();
}

/// Haar-random orthogonal matrix with determinant +1 (QR with sign fix).
inline Mat rotation(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<Mat> qr(gaussian(rng, n, n));
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

inline Mat orthonormal(std::mt19937_64& rng, int n, int p) { return rotation(rng, n).leftCols(p); }

/// Random p x p rotation, used to re-gauge frames.
inline Mat gauge(std::mt19937_64& rng, int p) { return rotation(rng, p); }

/// Arc length on the unit sphere via the arccos of the clipped inner product.
inline double arc(const Vec& a, const Vec& b) { return std::acos(std::clamp(a.dot(b), -1.0, 1.0)); }

/// Unoriented principal angles from the SVD of F1^T F2, descending.
inline Vec unoriented_angles(const Mat& f1, const Mat& f2) {
  Eigen::JacobiSVD<Mat> svd(f1.transpose() * f2);
  const Vec s = svd.singularValues();  // descending, so angles ascend
  Vec out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) out(i) = std::acos(std::clamp(s(s.size() - 1 - i), -1.0, 1.0));
  return out;
}

}  // namespace oracle
