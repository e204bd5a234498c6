#pragma once

// Discrete Dirichlet energy, tension field and projected gradient flow for
// maps from meshed compact domains (flat torus grid, icosphere) into round
// spheres and sphere products.

#include "barriers/sphere.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace barriers {

enum class DomainKind { TorusGrid, Icosphere };

struct DomainSpec {
  DomainKind kind = DomainKind::TorusGrid;
  int nu = 32;
  int nv = 32;
  int level = 3;
};

struct Edge {
  int a;
  int b;
  double weight;
};

struct DomainMesh {
  DomainSpec spec;
  /// Torus: (u, v) in [0, 2π)²; icosphere: unit positions in R³.
  Mat coords;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> faces;
  Vec masses;
  /// Per-vertex (neighbour, weight) lists, built from `edges`.
  std::vector<std::vector<std::pair<int, double>>> adjacency;

  int vertex_count() const { return static_cast<int>(coords.cols()); }
  int euler_characteristic() const {
    return vertex_count() - static_cast<int>(edges.size()) + static_cast<int>(faces.size());
  }
  double total_mass() const { return masses.sum(); }
};

/// Torus grid: unit weights, periodic 4-neighbour stencil, quad faces, mass
/// hu·hv. Icosphere: cotangent weights, barycentric lumped masses.
DomainMesh build_domain(const DomainSpec& spec);

enum class TargetKind { Sphere, ProductSpheres, Grassmann24 };

/// Round sphere S^m, or a product S^{m1} x S^{m2} with metric scale² times
/// the Euclidean one. G⁺(2,4) is the product S² x S² with scale 1/√2, which
/// makes the chordal distance agree with the Plücker embedding.
class TargetManifold {
 public:
  static TargetManifold sphere(int m);
  static TargetManifold product(int m1, int m2, double scale);
  static TargetManifold grassmann_2_4();

  TargetKind kind() const { return kind_; }
  int ambient_dim() const { return dims_[0] + (dims_[1] > 0 ? dims_[1] : 0); }
  double scale() const { return scale_; }
  /// Sphere dimension m (first factor for products).
  int sphere_dim() const { return dims_[0] - 1; }

  Vec project(const Vec& x) const;
  Vec tangent_project(const Vec& at, const Vec& v) const;
  double distance(const Vec& x, const Vec& y) const;
  bool is_member(const Vec& x, double tol = 1e-9) const;

  std::string describe() const;

 private:
  TargetManifold(TargetKind kind, std::array<int, 2> dims, double scale) : kind_(kind), dims_(dims), scale_(scale) {}

  TargetKind kind_;
  std::array<int, 2> dims_;  // ambient block sizes; second is 0 for spheres
  double scale_;
};

/// One target value per vertex, stored as columns.
struct DiscreteMap {
  Mat values;
  int vertex_count() const { return static_cast<int>(values.cols()); }
};

/// Throws InvalidInput unless every value is on the target within 1e-9.
void validate_map(const DomainMesh& mesh, const DiscreteMap& map, const TargetManifold& target);

/// ½ Σ_edges w_e scale² |φ(a) - φ(b)|².
double dirichlet_energy(const DomainMesh& mesh, const DiscreteMap& map, const TargetManifold& target);

/// Tangential part of the mass-normalized weighted Laplacian at `vertex`.
Vec discrete_tension(const DomainMesh& mesh, const DiscreteMap& map, const TargetManifold& target, int vertex);

/// Tension at every vertex, as columns.
Mat tension_field(const DomainMesh& mesh, const DiscreteMap& map, const TargetManifold& target);

double max_tension_norm(const DomainMesh& mesh, const DiscreteMap& map, const TargetManifold& target);

/// Largest pairwise target distance: all pairs below 2000 vertices,
/// otherwise 10⁶ seeded random pairs.
double oscillation(const DiscreteMap& map, const TargetManifold& target, std::uint64_t seed = 42);

/// Pushes x out of the barrier thickening onto {distance = ε}; points already
/// in the region are returned unchanged.
SpherePoint retract_into_region(const SpherePoint& x, const SphereTubeRegion& r, std::uint64_t seed = 42);

enum class FlowMode { Free, Constrained };

struct FlowConfig {
  double step = 0.2;
  long max_iters = 50000;
  double tension_tol = 1e-6;
  double oscillation_tol = 1e-2;
  FlowMode mode = FlowMode::Free;
  /// Region enforced in constrained mode; monitored for barrier events in
  /// free mode. Requires a sphere target.
  std::optional<SphereTubeRegion> region;
  std::uint64_t seed = 42;
  /// Record a trace row every this many accepted iterations.
  int trace_every = 10;
  double min_step = 1e-8;
};

enum class FlowStatus { ConvergedConstant, ConvergedNonconstant, MaxIters, Stalled };

const char* flow_status_name(FlowStatus s);

struct TraceRow {
  long iter;
  double energy;
  double max_tension;
  double oscillation;
  double step;
};

struct BarrierEvent {
  int vertex;
  long iter;
  double depth;
};

struct FlowTrace {
  std::vector<TraceRow> rows;
  std::vector<BarrierEvent> barrier_events;
  FlowStatus status = FlowStatus::MaxIters;
  long iters = 0;
  double initial_energy = 0;
  double final_energy = 0;
  double final_oscillation = 0;
  double final_max_tension = 0;
  /// True if no accepted step raised the energy beyond rounding (1e-12 relative).
  bool energy_monotone = true;
  /// Largest deviation from the target constraint seen after any step.
  double max_constraint_residual = 0;
  DiscreteMap final_map;
};

struct FlowState {
  DiscreteMap map;
  double energy;
  double step;
  bool stalled = false;
};

struct StepOutcome {
  bool accepted;
  double energy_before;
  double energy_after;
};

/// One Jacobi-style step: φ ← project(φ + step·τ(φ)), then retraction in
/// constrained mode. Rejected (with step halved) if the energy increases by
/// more than a relative 1e-12.
StepOutcome flow_step(const DomainMesh& mesh, const TargetManifold& target, const FlowConfig& cfg, FlowState& state);

FlowTrace run_flow(const DomainMesh& mesh, const DiscreteMap& init, const TargetManifold& target,
                   const FlowConfig& cfg);

// Initial maps.
DiscreteMap constant_map(const DomainMesh& mesh, const Vec& value);
/// Icosphere vertices mapped to themselves in S².
DiscreteMap identity_map(const DomainMesh& mesh);
/// Torus (u, v) ↦ (cos u, sin u, 0).
DiscreteMap great_circle_map(const DomainMesh& mesh);
/// Independent uniform samples from the geodesic cap B(center, radius).
DiscreteMap random_cap_map(const DomainMesh& mesh, const SpherePoint& center, double radius, std::uint64_t seed);

}  // namespace barriers
