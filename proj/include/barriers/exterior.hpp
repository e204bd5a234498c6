#pragma once

// Exterior algebra over R^n in lexicographic multi-index coordinates, and
// the Plücker embedding of orthonormal frames.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace barriers {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Tolerance for accepting a matrix as an orthonormal frame.
inline constexpr double kFrameTol = 1e-9;

std::size_t binomial(int n, int k);

/// All strictly increasing p-subsets of {0..n-1}, in lexicographic order.
std::vector<std::vector<int>> multi_indices(int n, int p);

/// Position of a strictly increasing multi-index in the lexicographic order.
std::size_t multi_index_position(int n, const std::vector<int>& index);

/// Element of Λ_p(R^n), stored as C(n,p) coordinates.
class PVector {
 public:
  PVector(int n, int p);
  PVector(int n, int p, Vec coords);

  int n() const { return n_; }
  int p() const { return p_; }
  const Vec& coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[static_cast<Eigen::Index>(i)]; }

  /// Coordinate at a strictly increasing 0-based multi-index.
  double at(const std::vector<int>& index) const;

  double norm() const { return coords_.norm(); }

  PVector operator+(const PVector& o) const;
  PVector operator-(const PVector& o) const;
  PVector operator-() const;
  PVector operator*(double s) const;

 private:
  int n_;
  int p_;
  Vec coords_;
};

inline PVector operator*(double s, const PVector& a) { return a * s; }

/// Ordered orthonormal p-tuple in R^n, stored as the columns of an n x p matrix.
class Frame {
 public:
  /// Throws InvalidInput unless the columns are orthonormal within kFrameTol.
  explicit Frame(Mat columns);

  int n() const { return static_cast<int>(m_.rows()); }
  int p() const { return static_cast<int>(m_.cols()); }
  const Mat& matrix() const { return m_; }
  Vec vector(int i) const { return m_.col(i); }

 private:
  Mat m_;
};

/// Wedge of the columns of an n x p matrix; the coordinate at I is the
/// p x p minor on rows I.
PVector wedge(const Mat& vectors);

/// Exterior product of a p-vector and a q-vector.
PVector wedge(const PVector& a, const PVector& b);

double pinner(const PVector& a, const PVector& b);
double pnorm(const PVector& a);

/// Orientation-preserving orthonormalization (modified Gram-Schmidt with one
/// reorthogonalization pass). Throws DegenerateInput if the smallest singular
/// value of the input is at most 1e-10.
Frame gram_schmidt(const Mat& vectors);

PVector plucker(const Frame& frame);

/// Decomposability test for 2-vectors: |a ^ a| <= tol |a|^2.
bool is_simple(const PVector& a, double tol);

/// Hodge star on Λ²(R⁴) for the orientation e1^e2^e3^e4.
PVector hodge_star_2_4(const PVector& a);

/// Orthonormal basis of the orthogonal complement of `frame`. Each step
/// projects every standard basis vector and keeps the one with the largest
/// residual (lowest index on ties), so the result depends only on the span.
Frame complement_frame(const Mat& frame);

}  // namespace barriers
