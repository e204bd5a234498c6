#pragma once

// Oriented Grassmannian G⁺(p,n): points as orthonormal frames with cached
// Plücker vectors, tangent vectors in canonical (singular value) form,
// explicit geodesics, principal angles and the convex sets bounded by
// θ₁ + θ₂ = π/2.

#include "barriers/exterior.hpp"

#include <vector>

namespace barriers {

class GrassmannPoint {
 public:
  explicit GrassmannPoint(Frame frame);

  const Frame& frame() const { return frame_; }
  const PVector& plucker() const { return plucker_; }
  int n() const { return frame_.n(); }
  int p() const { return frame_.p(); }

 private:
  Frame frame_;
  PVector plucker_;
};

/// Tangent vector X = Σ A(i,α) η(i,α) at `base`, where η(i,α) replaces e_i by
/// n_α. Carries the canonical form: X rotates e'_k towards n'_k at rate λ_k.
class GrassmannTangent {
 public:
  const GrassmannPoint& base() const { return base_; }
  const Frame& normal_frame() const { return normals_; }
  const Mat& coeffs() const { return coeffs_; }

  int rank() const { return static_cast<int>(lambda_.size()); }
  /// Positive singular values, descending.
  const Vec& lambda() const { return lambda_; }
  /// All p rotated tangent vectors e'_1..e'_p (same orientation as base).
  const Mat& rotated_tangent_frame() const { return rot_tangent_; }
  /// All n-p rotated normal vectors n'_1..n'_{n-p}.
  const Mat& rotated_normal_frame() const { return rot_normal_; }

  double norm() const { return lambda_.norm(); }

  /// Rebuild the coefficient matrix from (r, λ, rotated frames).
  Mat reconstruct_coeffs() const;

  /// X as an element of Λ_p(R^n).
  PVector as_pvector() const;

 private:
  friend GrassmannTangent kozlov_canonical(const GrassmannPoint&, const Frame&, const Mat&);
  GrassmannTangent(GrassmannPoint base, Frame normals, Mat coeffs)
      : base_(std::move(base)), normals_(std::move(normals)), coeffs_(std::move(coeffs)) {}

  GrassmannPoint base_;
  Frame normals_;
  Mat coeffs_;
  Vec lambda_;
  Mat rot_tangent_;
  Mat rot_normal_;
};

/// η(i,α) = e_1 ∧ … ∧ n_α ∧ … ∧ e_p, ordered with i major.
std::vector<PVector> eta_basis(const GrassmannPoint& w, const Frame& normal_frame);

/// Canonical form of the tangent with coefficient matrix `coeffs`
/// (p x (n-p)) against `normal_frame`. Throws ZeroTangent if every singular
/// value is at most 1e-12.
GrassmannTangent kozlov_canonical(const GrassmannPoint& w, const Frame& normal_frame, const Mat& coeffs);

/// Same, against the deterministic complement of w's frame.
GrassmannTangent kozlov_canonical(const GrassmannPoint& w, const Mat& coeffs);

struct GeodesicPoint {
  GrassmannPoint point;
  /// True when |X| was not 1 and the rates were normalized.
  bool rescaled;
};

/// w_X(t) = e'_1(λ_1 t) ∧ … ∧ e'_r(λ_r t) ∧ e'_{r+1} ∧ … ∧ e'_p with
/// e'_i(s) = e'_i cos s + n'_i sin s, at unit speed.
GeodesicPoint grassmann_geodesic(const GrassmannTangent& x, double t);

struct PrincipalAngles {
  std::vector<double> angles;  // descending
  double distance;
};

PrincipalAngles principal_angles(const GrassmannPoint& w1, const GrassmannPoint& w2);
double geodesic_distance(const GrassmannPoint& w1, const GrassmannPoint& w2);

/// π / (2(λ₁ + λ₂)) for the normalized rates; λ₂ = 0 when rank is 1.
double t_max(const GrassmannTangent& x);

enum class Membership { Inside, Boundary, Outside };

const char* membership_name(Membership m);

/// Classifies w2 against the convex set around w shrunk by `shrink`, using
/// θ₁ + θ₂ versus π/2 - shrink with a 1e-9 boundary band.
Membership bg_contains(const GrassmannPoint& w, const GrassmannPoint& w2, double shrink = 0.0);

struct MainRegionProbe {
  bool member;
  double s_min;
  double s_max;
};

/// w2 lies on some leaf {θ₁ + θ₂ = π/2 - ε} around w_{X1}(t), t in [0, 2π),
/// iff min_t s(t) <= π/2 - ε <= max_t s(t). X1 must have rank 1.
MainRegionProbe main_region_probe(const GrassmannTangent& x1, double epsilon, const GrassmannPoint& w2,
                                  int grid = 2048);

bool main_region_contains(const GrassmannTangent& x1, double epsilon, const GrassmannPoint& w2, int grid = 2048);

/// Standard point e_1 ∧ … ∧ e_p.
GrassmannPoint standard_point(int n, int p);

}  // namespace barriers
