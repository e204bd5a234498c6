#pragma once

// Parametric submanifolds of round spheres, their Gauss maps, mean
// curvature, and audits of Gauss images against barrier regions.

#include "barriers/grassmann.hpp"
#include "barriers/sphere.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace barriers {

enum class ImmersionKind { Equator, CliffordTorus, GeneralizedClifford, DistanceSphere, UserGrid };

const char* immersion_kind_name(ImmersionKind k);

struct ParamRange {
  double lo;
  double hi;
  bool periodic;
};

/// Immersion of a k-dimensional parameter box into S^m ⊂ R^{m+1}.
class ParametricImmersion {
 public:
  using Position = std::function<Vec(const Vec&)>;
  using Jacobian = std::function<Mat(const Vec&)>;

  /// Totally geodesic S^k in the first k+1 coordinates of S^m.
  static ParametricImmersion equator(int k, int m);
  /// (cos u, sin u, cos v, sin v) / √2 in S³.
  static ParametricImmersion clifford_torus();
  /// S^p(√(p/(p+q))) x S^q(√(q/(p+q))) in S^{p+q+1}.
  static ParametricImmersion generalized_clifford(int p, int q);
  /// Distance sphere {x_{m+1} = √(1-r²)} of Euclidean radius r in S^m.
  static ParametricImmersion distance_sphere(double r, int m);
  /// User-supplied position map; derivatives by central differences.
  static ParametricImmersion user(int k, int m, std::vector<ParamRange> ranges, Position position);

  /// Composition with the equatorial inclusion S^m ⊂ S^{m+extra}.
  ParametricImmersion include_equatorially(int extra) const;

  ImmersionKind kind() const { return kind_; }
  int dim() const { return k_; }
  int sphere_dim() const { return m_; }
  int codim() const { return m_ - k_; }
  const std::vector<ParamRange>& ranges() const { return ranges_; }

  Vec position(const Vec& params) const;
  /// (m+1) x k matrix of first derivatives.
  Mat jacobian(const Vec& params) const;
  bool analytic() const { return static_cast<bool>(jacobian_); }

 private:
  ParametricImmersion(ImmersionKind kind, int k, int m, std::vector<ParamRange> ranges, Position pos, Jacobian jac)
      : kind_(kind), k_(k), m_(m), ranges_(std::move(ranges)), position_(std::move(pos)), jacobian_(std::move(jac)) {}

  ImmersionKind kind_;
  int k_;
  int m_;
  std::vector<ParamRange> ranges_;
  Position position_;
  Jacobian jacobian_;
};

struct CliffordSample {
  Vec position;
  Mat tangents;  // 4 x 2
  Vec normal;
};

CliffordSample clifford_torus(double u, double v);

/// Orthonormal normal frame of M inside S^m at `params`, oriented so that
/// det(position, tangents, normals) > 0.
Mat normal_frame(const ParametricImmersion& imm, const Vec& params);

/// Unit normal of a hypersurface M^k ⊂ S^{k+1}, as a point of S^{k+1}.
SpherePoint hypersurface_gauss(const ParametricImmersion& imm, const Vec& params);

/// Oriented normal 2-plane of M^k ⊂ S^{k+2}, as a point of G⁺(2, k+3).
GrassmannPoint normal_plane_gauss(const ParametricImmersion& imm, const Vec& params);

/// |H| with H = (1/k) trace of the second fundamental form in the sphere.
/// Second derivatives by central differences with step h.
double mean_curvature_norm(const ParametricImmersion& imm, const Vec& params, double h = 1e-4);

/// Main-region barrier in G⁺(2,n): the rank-1 direction X1 and ε.
struct GrassmannRegion {
  GrassmannTangent x1;
  double epsilon;
};

using AuditRegion = std::variant<SphereTubeRegion, GrassmannRegion>;

struct GaussAudit {
  std::string kind;
  int grid = 0;
  double epsilon = 0;
  double min_margin = 0;
  Vec worst_point;
  bool h1_zero_asserted = false;
  std::string verdict;
};

inline constexpr const char* kVerdictHypothesesMet = "hypotheses-met (conclusion: totally geodesic expected)";

/// Signed margin of the Gauss image at one parameter point; positive inside
/// the region.
double gauss_margin(const ParametricImmersion& imm, const AuditRegion& region, const Vec& params);

/// Evaluates the Gauss map on a grid with `grid` samples per parameter axis.
GaussAudit gauss_image_audit(const ParametricImmersion& imm, const AuditRegion& region, int grid,
                             bool h1_zero_asserted);

/// Parameter grid used by the audit, one point per column.
Mat parameter_grid(const ParametricImmersion& imm, int grid);

/// Max discrete tension of the hypersurface Gauss map of a doubly periodic
/// surface, on the n x n flat torus grid of its parameters. The parameters
/// must be conformal for the induced metric (true for the Clifford torus).
double gauss_map_tension(const ParametricImmersion& imm, int n);

}  // namespace barriers
