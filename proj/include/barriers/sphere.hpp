#pragma once

// Round-sphere geometry on S^m ⊂ R^{m+1}: subsphere flags, great circles,
// and the tube region swept out by convex balls centred on a great circle.

#include "barriers/exterior.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

namespace barriers {

/// Convexity radius of the round sphere.
inline constexpr double kSphereConvexityRadius = std::numbers::pi / 2;

class SpherePoint {
 public:
  /// Throws InvalidInput unless |coords| is within 1e-9 of 1.
  explicit SpherePoint(Vec coords);

  /// Normalizes a nonzero vector onto the sphere.
  static SpherePoint normalized(const Vec& v);

  int ambient_dim() const { return static_cast<int>(x_.size()); }
  const Vec& coords() const { return x_; }

 private:
  Vec x_;
};

/// Orthonormal normals z_0..z_alpha; the flag's subsphere is their common
/// orthogonal complement intersected with the sphere. May be empty.
class SubsphereFlag {
 public:
  SubsphereFlag(int ambient_dim, Mat normals);
  explicit SubsphereFlag(Mat normals);

  int ambient_dim() const { return ambient_dim_; }
  int size() const { return static_cast<int>(normals_.cols()); }
  const Mat& normals() const { return normals_; }

  /// Flag with one more normal appended.
  SubsphereFlag with(const Vec& normal) const;

 private:
  int ambient_dim_;
  Mat normals_;
};

class GreatCircle {
 public:
  GreatCircle(SpherePoint base, Vec direction);

  const Vec& base() const { return base_; }
  const Vec& direction() const { return dir_; }
  int ambient_dim() const { return static_cast<int>(base_.size()); }

  /// cos(t) base + sin(t) direction.
  Vec point(double t) const;
  Vec velocity(double t) const;

 private:
  Vec base_;
  Vec dir_;
};

/// Region of points at distance >= epsilon from the codimension-2 subsphere
/// orthogonal to the circle plane. It is swept out by the leaves
/// ∂B(Γ(t), π/2 - epsilon), t in [0, 2π).
class SphereTubeRegion {
 public:
  SphereTubeRegion(GreatCircle circle, double epsilon);

  const GreatCircle& circle() const { return circle_; }
  double epsilon() const { return eps_; }
  double ball_radius() const { return std::numbers::pi / 2 - eps_; }
  SubsphereFlag barrier() const;
  int ambient_dim() const { return circle_.ambient_dim(); }

 private:
  GreatCircle circle_;
  double eps_;
};

double sphere_distance(const SpherePoint& x, const SpherePoint& y);
double sphere_distance(const Vec& x, const Vec& y);

inline SpherePoint circle_point(const GreatCircle& c, double t) { return SpherePoint(c.point(t)); }

/// Distance from x to the subsphere of the flag, atan2(|Px|, |x - Px|).
double subsphere_distance(const SpherePoint& x, const SubsphereFlag& f);
double subsphere_distance(const Vec& x, const SubsphereFlag& f);

/// Signed margin d(x, barrier) - epsilon.
double tube_margin(const SphereTubeRegion& r, const Vec& x);

bool tube_region_contains(const SphereTubeRegion& r, const SpherePoint& x);

/// Leaf parameters t in [0, 2π) whose sphere ∂B(Γ(t), ball_radius) passes
/// through x. The antipodal leaf ∂B(-Γ(t), ·) is the leaf at t + π, so each
/// leaf of the quotient appears once. Grid scan plus bisection refinement.
std::vector<double> sweepout_leaf_find(const SphereTubeRegion& r, const SpherePoint& x, int grid = 4096);

/// Region built from the flag of interior normals x_1..x_{k-1} and a point
/// x0 orthogonal to them: the circle satisfies Γ(π/2) = x0 and stays
/// orthogonal to every x_i.
SphereTubeRegion build_maximal_set_region(const SubsphereFlag& interior_flag, const SpherePoint& x0,
                                          double epsilon);

struct DisconnectionOptions {
  int neighbors = 12;
  double cutoff_factor = 3.0;
  double leaf_band = 1e-2;
  /// Components holding fewer than this fraction of the surviving samples
  /// are sampling debris in the thin wedges where a leaf touches the barrier
  /// tube; they are reported but not counted.
  double min_component_fraction = 0.01;
};

struct DisconnectionResult {
  int components = 0;
  /// Components before the size filter.
  int raw_components = 0;
  /// Component sizes in the antipodal quotient (pairs), descending.
  std::vector<int> component_sizes;
  int surviving_samples = 0;
  double spacing = 0.0;
};

/// Connected components of the region, optionally with the leaf at t0 (and
/// its antipode) removed, counted in the antipodal quotient.
DisconnectionResult region_disconnection_check(const SphereTubeRegion& r, std::optional<double> t0,
                                               int samples, std::uint64_t seed,
                                               const DisconnectionOptions& opts = {});

}  // namespace barriers
