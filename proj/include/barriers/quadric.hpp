#pragma once

// Complex model of G⁺(2,k+2): the quadric Σ z_j² = 0 in CP^{k+1}, its
// Fubini-Study distance, the chart off the hyperplane z₁ - i z₂ = 0, and the
// k = 2 splitting G⁺(2,4) = S² x S².

#include "barriers/grassmann.hpp"

#include <Eigen/Dense>

#include <complex>
#include <utility>

namespace barriers {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;

class ProjectivePoint {
 public:
  explicit ProjectivePoint(CVec z);
  const CVec& z() const { return z_; }
  int size() const { return static_cast<int>(z_.size()); }

 private:
  CVec z_;
};

/// |Σ z_j²| / |z|².
double quadric_residual(const CVec& z);

class QuadricPoint : public ProjectivePoint {
 public:
  /// Throws NotOnQuadric if the residual exceeds 1e-10.
  explicit QuadricPoint(CVec z);
  int k() const { return size() - 2; }
};

/// 1 - |<a,b>| / (|a||b|) below 1e-10.
bool projectively_equal(const CVec& a, const CVec& b, double tol = 1e-10);

QuadricPoint grassmann_to_quadric(const GrassmannPoint& w);
GrassmannPoint quadric_to_grassmann(const QuadricPoint& q);

/// ξ_j = z_{j+2} / (z₁ - i z₂). Throws ChartDomain within 1e-10 |z| of H.
CVec ho_chart(const QuadricPoint& q);

/// (1 - Σξ², i(1 + Σξ²), 2ξ₁, …, 2ξ_k), i.e. gauge (z₁ - i z₂)/2 = 1.
QuadricPoint ho_chart_inv(const CVec& xi);

struct HyperplaneMargins {
  double m_h;        // |z₁ - i z₂| / |z|
  double m_h_prime;  // |z₁ + i z₂| / |z|
};

HyperplaneMargins hyperplane_margins(const QuadricPoint& q);

/// Distance for ds² = 2 Σ_{j<l} |z_j dz_l - z_l dz_j|² / |z|⁴, i.e.
/// √2 · arccos(|<a,b>| / (|a||b|)).
double fs_distance(const ProjectivePoint& a, const ProjectivePoint& b);

/// Speed sqrt(ds²(z, dz)) of a curve through z with velocity dz.
double fs_speed(const CVec& z, const CVec& dz);

/// Self-dual / anti-self-dual coordinates (a, b) of a plane in R⁴, both unit.
std::pair<Eigen::Vector3d, Eigen::Vector3d> split_s2xs2(const GrassmannPoint& w);

/// Inverse of split_s2xs2.
GrassmannPoint join_s2xs2(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

/// Both factors keep distance >= epsilon from the antipodal axis pair.
bool product_region_contains(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& axis_a,
                             const Eigen::Vector3d& axis_b, double epsilon);

/// Oriented plane spanned by a simple 2-vector.
GrassmannPoint plane_of_simple(const PVector& a);

}  // namespace barriers
