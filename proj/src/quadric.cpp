#include "barriers/quadric.hpp"

#include "barriers/error.hpp"

#include <cmath>
#include <numbers>

namespace barriers {

namespace {

const Complex kI(0.0, 1.0);
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Rows: self-dual basis f₁⁺, f₂⁺, f₃⁺ then anti-self-dual f₁⁻, f₂⁻, f₃⁻, in
// Λ²R⁴ coordinates (12, 13, 14, 23, 24, 34).
Eigen::Matrix<double, 6, 6> duality_basis() {
  Eigen::Matrix<double, 6, 6> f;
  f << 1, 0, 0, 0, 0, 1,   //
      0, 1, 0, 0, -1, 0,   //
      0, 0, 1, 1, 0, 0,    //
      1, 0, 0, 0, 0, -1,   //
      0, 1, 0, 0, 1, 0,    //
      0, 0, 1, -1, 0, 0;
  return f * kInvSqrt2;
}

}  // namespace

ProjectivePoint::ProjectivePoint(CVec z) : z_(std::move(z)) {
  require(z_.size() >= 1 && z_.allFinite(), ErrorCode::InvalidInput, "projective point needs finite coordinates");
  require(z_.norm() > 1e-12, ErrorCode::InvalidInput, "projective representative must be nonzero");
}

double quadric_residual(const CVec& z) {
  Complex s = 0;
  for (Eigen::Index j = 0; j < z.size(); ++j) s += z[j] * z[j];
  return std::abs(s) / z.squaredNorm();
}

QuadricPoint::QuadricPoint(CVec z) : ProjectivePoint(std::move(z)) {
  require(size() >= 3, ErrorCode::InvalidInput, "quadric needs k >= 1");
  require(quadric_residual(this->z()) <= 1e-10, ErrorCode::NotOnQuadric, "point is not on the quadric");
}

bool projectively_equal(const CVec& a, const CVec& b, double tol) {
  if (a.size() != b.size()) return false;
  return 1.0 - std::abs(a.dot(b)) / (a.norm() * b.norm()) < tol;
}

QuadricPoint grassmann_to_quadric(const GrassmannPoint& w) {
  require(w.p() == 2, ErrorCode::UnsupportedGrade, "quadric model needs oriented 2-planes");
  const Mat& f = w.frame().matrix();
  CVec z = f.col(0).cast<Complex>() + kI * f.col(1).cast<Complex>();
  return QuadricPoint(std::move(z));
}

GrassmannPoint quadric_to_grassmann(const QuadricPoint& q) {
  // On the quadric Re z and Im z are orthogonal with equal length for every
  // representative, so scaling to |z|² = 2 gives an orthonormal frame.
  const CVec z = q.z() * (std::numbers::sqrt2 / q.z().norm());
  Mat f(z.size(), 2);
  f.col(0) = z.real();
  f.col(1) = z.imag();
  return GrassmannPoint(gram_schmidt(f));
}

CVec ho_chart(const QuadricPoint& q) {
  const CVec& z = q.z();
  const Complex d = z[0] - kI * z[1];
  require(std::abs(d) > 1e-10 * z.norm(), ErrorCode::ChartDomain, "point lies on the hyperplane z1 - i z2 = 0");
  return z.tail(z.size() - 2) / d;
}

QuadricPoint ho_chart_inv(const CVec& xi) {
  require(xi.size() >= 1 && xi.allFinite(), ErrorCode::InvalidInput, "chart point needs finite coordinates");
  Complex s = 0;
  for (Eigen::Index j = 0; j < xi.size(); ++j) s += xi[j] * xi[j];
  CVec z(xi.size() + 2);
  z[0] = 1.0 - s;
  z[1] = kI * (1.0 + s);
  z.tail(xi.size()) = 2.0 * xi;
  return QuadricPoint(std::move(z));
}

HyperplaneMargins hyperplane_margins(const QuadricPoint& q) {
  const CVec& z = q.z();
  const double len = z.norm();
  return HyperplaneMargins{std::abs(z[0] - kI * z[1]) / len, std::abs(z[0] + kI * z[1]) / len};
}

double fs_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  require(a.size() == b.size(), ErrorCode::InvalidInput, "projective points in different dimensions");
  const CVec u = a.z().normalized();
  CVec v = b.z().normalized();
  const Complex ip = u.dot(v);
  if (std::abs(ip) > 0) v *= std::conj(ip) / std::abs(ip);
  return std::numbers::sqrt2 * 2 * std::atan2((u - v).norm(), (u + v).norm());
}

double fs_speed(const CVec& z, const CVec& dz) {
  require(z.size() == dz.size(), ErrorCode::InvalidInput, "curve point and velocity differ in size");
  double num = 0;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    for (Eigen::Index l = j + 1; l < z.size(); ++l) num += std::norm(z[j] * dz[l] - z[l] * dz[j]);
  }
  return std::sqrt(2 * num) / z.squaredNorm();
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> split_s2xs2(const GrassmannPoint& w) {
  require(w.n() == 4 && w.p() == 2, ErrorCode::InvalidInput, "S2 x S2 splitting needs G(2,4)");
  const PVector& p = w.plucker();
  require(is_simple(p, 1e-9), ErrorCode::InvalidInput, "Plucker vector is not simple");
  const Eigen::Matrix<double, 6, 1> c = duality_basis() * p.coords() * std::numbers::sqrt2;
  return {c.head<3>(), c.tail<3>()};
}

GrassmannPoint plane_of_simple(const PVector& a) {
  require(a.p() == 2, ErrorCode::UnsupportedGrade, "plane_of_simple needs a 2-vector");
  require(a.norm() > 1e-12 && is_simple(a, 1e-9), ErrorCode::InvalidInput, "2-vector is not simple");
  const int n = a.n();
  // Antisymmetric matrix v wᵀ - w vᵀ; its column space is the plane.
  Mat m = Mat::Zero(n, n);
  const auto idx = multi_indices(n, 2);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    m(idx[k][0], idx[k][1]) = a[k];
    m(idx[k][1], idx[k][0]) = -a[k];
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU);
  Mat f = svd.matrixU().leftCols(2);
  f = gram_schmidt(f).matrix();
  if (pinner(wedge(f), a) < 0) f.col(1) *= -1;
  return GrassmannPoint(Frame(std::move(f)));
}

GrassmannPoint join_s2xs2(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  require(std::abs(a.norm() - 1) < 1e-9 && std::abs(b.norm() - 1) < 1e-9, ErrorCode::InvalidInput,
          "S2 x S2 coordinates must be unit vectors");
  Eigen::Matrix<double, 6, 1> c;
  c << a, b;
  const Vec coords = duality_basis().transpose() * c * kInvSqrt2;
  return plane_of_simple(PVector(4, 2, coords));
}

bool product_region_contains(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& axis_a,
                             const Eigen::Vector3d& axis_b, double epsilon) {
  const double c = std::cos(epsilon);
  return std::abs(a.dot(axis_a)) <= c && std::abs(b.dot(axis_b)) <= c;
}

}  // namespace barriers
