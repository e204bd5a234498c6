#include "barriers/harmonic.hpp"

#include "barriers/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace barriers {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

void finish_adjacency(DomainMesh& mesh) {
  mesh.adjacency.assign(static_cast<std::size_t>(mesh.vertex_count()), {});
  for (const Edge& e : mesh.edges) {
    mesh.adjacency[static_cast<std::size_t>(e.a)].emplace_back(e.b, e.weight);
    mesh.adjacency[static_cast<std::size_t>(e.b)].emplace_back(e.a, e.weight);
  }
}

DomainMesh torus_grid(const DomainSpec& spec) {
  const int nu = spec.nu, nv = spec.nv;
  DomainMesh mesh;
  mesh.spec = spec;
  const double hu = kTwoPi / nu, hv = kTwoPi / nv;
  auto id = [&](int i, int j) { return ((i + nu) % nu) * nv + (j + nv) % nv; };
  mesh.coords.resize(2, nu * nv);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      mesh.coords(0, id(i, j)) = i * hu;
      mesh.coords(1, id(i, j)) = j * hv;
      mesh.edges.push_back({id(i, j), id(i + 1, j), 1.0});
      mesh.edges.push_back({id(i, j), id(i, j + 1), 1.0});
      mesh.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  mesh.masses = Vec::Constant(nu * nv, hu * hv);
  finish_adjacency(mesh);
  return mesh;
}

DomainMesh icosphere(const DomainSpec& spec) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> tris = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
      {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int l = 0; l < spec.level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& f : tris) {
      const int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    tris = std::move(next);
  }

  DomainMesh mesh;
  mesh.spec = spec;
  const int nv = static_cast<int>(v.size());
  mesh.coords.resize(3, nv);
  for (int i = 0; i < nv; ++i) mesh.coords.col(i) = v[static_cast<std::size_t>(i)];
  mesh.masses = Vec::Zero(nv);
  std::map<std::pair<int, int>, double> weights;
  for (const auto& f : tris) {
    const Eigen::Vector3d& p0 = v[static_cast<std::size_t>(f[0])];
    const Eigen::Vector3d& p1 = v[static_cast<std::size_t>(f[1])];
    const Eigen::Vector3d& p2 = v[static_cast<std::size_t>(f[2])];
    const double area = 0.5 * (p1 - p0).cross(p2 - p0).norm();
    for (int k = 0; k < 3; ++k) {
      const int i = f[static_cast<std::size_t>(k)];
      const int j = f[static_cast<std::size_t>((k + 1) % 3)];
      const int o = f[static_cast<std::size_t>((k + 2) % 3)];
      const Eigen::Vector3d a = v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(o)];
      const Eigen::Vector3d b = v[static_cast<std::size_t>(j)] - v[static_cast<std::size_t>(o)];
      // Half the cotangent of the angle opposite edge (i, j).
      weights[std::minmax(i, j)] += 0.5 * a.dot(b) / a.cross(b).norm();
      mesh.masses[i] += area / 3.0;
    }
    mesh.faces.push_back({f[0], f[1], f[2]});
  }
  for (const auto& [key, w] : weights) mesh.edges.push_back({key.first, key.second, w});
  finish_adjacency(mesh);
  return mesh;
}

Vec sample_sphere(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = g(rng);
  return x.normalized();
}

}  // namespace

DomainMesh build_domain(const DomainSpec& spec) {
  if (spec.kind == DomainKind::TorusGrid) {
    require(spec.nu >= 8 && spec.nv >= 8, ErrorCode::Config, "torus grid needs nu, nv >= 8");
    return torus_grid(spec);
  }
  require(spec.level >= 2 && spec.level <= 8, ErrorCode::Config, "icosphere level must lie in [2, 8]");
  return icosphere(spec);
}

TargetManifold TargetManifold::sphere(int m) {
  require(m >= 1, ErrorCode::Config, "sphere target needs m >= 1");
  return TargetManifold(TargetKind::Sphere, {m + 1, 0}, 1.0);
}

TargetManifold TargetManifold::product(int m1, int m2, double scale) {
  require(m1 >= 1 && m2 >= 1 && scale > 0, ErrorCode::Config, "invalid product target");
  return TargetManifold(TargetKind::ProductSpheres, {m1 + 1, m2 + 1}, scale);
}

TargetManifold TargetManifold::grassmann_2_4() {
  return TargetManifold(TargetKind::Grassmann24, {3, 3}, 1.0 / std::numbers::sqrt2);
}

Vec TargetManifold::project(const Vec& x) const {
  require(x.size() == ambient_dim(), ErrorCode::InvalidInput, "value has the wrong ambient dimension");
  Vec out = x;
  out.head(dims_[0]).normalize();
  if (dims_[1] > 0) out.tail(dims_[1]).normalize();
  return out;
}

Vec TargetManifold::tangent_project(const Vec& at, const Vec& v) const {
  Vec out = v;
  auto strip = [&](Eigen::Index start, Eigen::Index len) {
    const auto a = at.segment(start, len);
    out.segment(start, len) -= a.dot(v.segment(start, len)) * a;
  };
  strip(0, dims_[0]);
  if (dims_[1] > 0) strip(dims_[0], dims_[1]);
  return out;
}

double TargetManifold::distance(const Vec& x, const Vec& y) const {
  if (dims_[1] == 0) return sphere_distance(x, y);
  const double da = sphere_distance(Vec(x.head(dims_[0])), Vec(y.head(dims_[0])));
  const double db = sphere_distance(Vec(x.tail(dims_[1])), Vec(y.tail(dims_[1])));
  return scale_ * std::sqrt(da * da + db * db);
}

bool TargetManifold::is_member(const Vec& x, double tol) const {
  if (x.size() != ambient_dim() || !x.allFinite()) return false;
  if (std::abs(x.head(dims_[0]).norm() - 1.0) > tol) return false;
  return dims_[1] == 0 || std::abs(x.tail(dims_[1]).norm() - 1.0) <= tol;
}

std::string TargetManifold::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case TargetKind::Sphere: os << "sphere(" << dims_[0] - 1 << ")"; break;
    case TargetKind::ProductSpheres:
      os << "product-spheres(" << dims_[0] - 1 << "," << dims_[1] - 1 << "," << scale_ << ")";
      break;
    case TargetKind::Grassmann24: os << "grassmann-2-4"; break;
  }
  return os.str();
}

void validate_map(const DomainMesh& mesh, const DiscreteMap& map, const TargetManifold& target) {
  require(map.vertex_count() == mesh.vertex_count(), ErrorCode::InvalidInput, "map and mesh sizes differ");
  require(map.values.rows() == target.ambient_dim(), ErrorCode::InvalidInput, "map values have the wrong dimension");
  for (int i = 0; i < map.vertex_count(); ++i) {
    require(target.is_member(map.values.col(i)), ErrorCode::InvalidInput, "map value is off the target");
  }
}

double dirichlet_energy(const DomainMesh& mesh, const DiscreteMap& map, const TargetManifold& target) {
  double e = 0;
  for (const Edge& edge : mesh.edges) e += edge.weight * (map.values.col(edge.a) - map.values.col(edge.b)).squaredNorm();
  return 0.5 * target.scale() * target.scale() * e;
}

Vec discrete_tension(const DomainMesh& mesh, const DiscreteMap& map, const TargetManifold& target, int vertex) {
  require(vertex >= 0 && vertex < mesh.vertex_count(), ErrorCode::InvalidInput, "vertex out of range");
  const auto u = map.values.col(vertex);
  Vec lap = Vec::Zero(map.values.rows());
  for (const auto& [nb, w] : mesh.adjacency[static_cast<std::size_t>(vertex)]) lap += w * (map.values.col(nb) - u);
  lap /= mesh.masses[vertex];
  return target.tangent_project(u, lap);
}

Mat tension_field(const DomainMesh& mesh, const DiscreteMap& map, const TargetManifold& target) {
  Mat out(map.values.rows(), map.vertex_count());
  for (int i = 0; i < map.vertex_count(); ++i) out.col(i) = discrete_tension(mesh, map, target, i);
  return out;
}

double max_tension_norm(const DomainMesh& mesh, const DiscreteMap& map, const TargetManifold& target) {
  return tension_field(mesh, map, target).colwise().norm().maxCoeff();
}

double oscillation(const DiscreteMap& map, const TargetManifold& target, std::uint64_t seed) {
  const int n = map.vertex_count();
  if (n < 2) return 0.0;
  const Mat& v = map.values;
  if (n < 2000) {
    if (target.kind() == TargetKind::Sphere) {
      // Distance is monotone in the inner product.
      const Mat gram = v.transpose() * v;
      Eigen::Index i = 0, j = 0;
      gram.minCoeff(&i, &j);
      return target.distance(v.col(i), v.col(j));
    }
    double best = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) best = std::max(best, target.distance(v.col(i), v.col(j)));
    }
    return best;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  double best = 0;
  for (int k = 0; k < 1000000; ++k) {
    const int i = pick(rng), j = pick(rng);
    best = std::max(best, target.distance(v.col(i), v.col(j)));
  }
  return best;
}

SpherePoint retract_into_region(const SpherePoint& xp, const SphereTubeRegion& r, std::uint64_t seed) {
  const Vec& x = xp.coords();
  require(x.size() == r.ambient_dim(), ErrorCode::InvalidInput, "point and region in different dimensions");
  const SubsphereFlag barrier = r.barrier();
  if (subsphere_distance(x, barrier) >= r.epsilon()) return xp;
  const Mat& normals = barrier.normals();
  Vec px = normals * (normals.transpose() * x);
  Vec qx = x - px;
  if (px.norm() < 1e-12) {
    std::mt19937_64 rng(seed);
    const double a = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
    px = std::cos(a) * normals.col(0) + std::sin(a) * normals.col(1);
  }
  const double e = r.epsilon();
  Vec out = std::sin(e) * px.normalized() + std::cos(e) * qx.normalized();
  return SpherePoint(out.normalized());
}

const char* flow_status_name(FlowStatus s) {
  switch (s) {
    case FlowStatus::ConvergedConstant: return "converged-constant";
    case FlowStatus::ConvergedNonconstant: return "converged-nonconstant";
    case FlowStatus::MaxIters: return "max-iters";
    case FlowStatus::Stalled: return "stalled-flow";
  }
  return "unknown";
}

// Rounding noise of the edge sum; near a critical point genuine decreases
// fall below it and an exact comparison would stall the flow.
static double energy_slack(double e) { return 1e-12 * std::max(1.0, std::abs(e)); }

StepOutcome flow_step(const DomainMesh& mesh, const TargetManifold& target, const FlowConfig& cfg, FlowState& state) {
  const Mat tension = tension_field(mesh, state.map, target);
  DiscreteMap next;
  next.values.resize(state.map.values.rows(), state.map.values.cols());
  const bool constrained = cfg.mode == FlowMode::Constrained && cfg.region.has_value();
  for (int i = 0; i < state.map.vertex_count(); ++i) {
    Vec v = target.project(state.map.values.col(i) + state.step * tension.col(i));
    if (constrained) v = retract_into_region(SpherePoint(v), *cfg.region, cfg.seed + static_cast<std::uint64_t>(i)).coords();
    next.values.col(i) = v;
  }
  const double e_new = dirichlet_energy(mesh, next, target);
  const double e_old = state.energy;
  if (e_new > e_old + energy_slack(e_old)) {
    state.step *= 0.5;
    if (state.step < cfg.min_step) state.stalled = true;
    return StepOutcome{false, e_old, e_new};
  }
  state.map = std::move(next);
  state.energy = e_new;
  return StepOutcome{true, e_old, e_new};
}

FlowTrace run_flow(const DomainMesh& mesh, const DiscreteMap& init, const TargetManifold& target,
                   const FlowConfig& cfg) {
  require(cfg.step > 0 && cfg.tension_tol > 0 && cfg.oscillation_tol > 0 && cfg.max_iters >= 0,
          ErrorCode::Config, "invalid flow configuration");
  require(cfg.trace_every >= 1, ErrorCode::Config, "trace stride must be positive");
  validate_map(mesh, init, target);
  if (cfg.region) {
    require(target.kind() == TargetKind::Sphere && target.ambient_dim() == cfg.region->ambient_dim(),
            ErrorCode::InvalidInput, "region does not match the sphere target");
  }
  if (cfg.mode == FlowMode::Constrained) {
    require(cfg.region.has_value(), ErrorCode::Config, "constrained mode needs a region");
    for (int i = 0; i < init.vertex_count(); ++i) {
      require(tube_margin(*cfg.region, init.values.col(i)) >= -1e-12, ErrorCode::InvalidInput,
              "initial map leaves the region");
    }
  }

  FlowTrace trace;
  FlowState state{init, dirichlet_energy(mesh, init, target), cfg.step};
  trace.initial_energy = state.energy;
  std::vector<char> outside(static_cast<std::size_t>(init.vertex_count()), 0);

  // One row per iteration; the final row replaces a row of the same iteration.
  auto record = [&](long iter, double tension) {
    const TraceRow row{iter, state.energy, tension, oscillation(state.map, target, cfg.seed), state.step};
    if (!trace.rows.empty() && trace.rows.back().iter == iter) {
      trace.rows.back() = row;
    } else {
      trace.rows.push_back(row);
    }
  };

  long iter = 0;
  double tension = max_tension_norm(mesh, state.map, target);
  while (true) {
    if (tension < cfg.tension_tol) {
      const double osc = oscillation(state.map, target, cfg.seed);
      trace.status = osc < cfg.oscillation_tol ? FlowStatus::ConvergedConstant : FlowStatus::ConvergedNonconstant;
      break;
    }
    if (iter >= cfg.max_iters) {
      trace.status = FlowStatus::MaxIters;
      break;
    }
    if (iter % cfg.trace_every == 0 && (trace.rows.empty() || trace.rows.back().iter != iter)) record(iter, tension);
    const StepOutcome out = flow_step(mesh, target, cfg, state);
    if (!out.accepted) {
      if (state.stalled) {
        trace.status = FlowStatus::Stalled;
        break;
      }
      continue;
    }
    ++iter;
    if (out.energy_after > out.energy_before + energy_slack(out.energy_before)) trace.energy_monotone = false;
    for (int i = 0; i < state.map.vertex_count(); ++i) {
      const Vec v = state.map.values.col(i);
      const double res = (target.project(v) - v).norm();
      trace.max_constraint_residual = std::max(trace.max_constraint_residual, res);
      if (cfg.mode == FlowMode::Free && cfg.region) {
        const double margin = tube_margin(*cfg.region, v);
        const bool out_now = margin < 0;
        if (out_now && !outside[static_cast<std::size_t>(i)]) trace.barrier_events.push_back({i, iter, -margin});
        outside[static_cast<std::size_t>(i)] = out_now ? 1 : 0;
      }
    }
    tension = max_tension_norm(mesh, state.map, target);
  }
  trace.iters = iter;
  trace.final_energy = state.energy;
  trace.final_max_tension = tension;
  trace.final_oscillation = oscillation(state.map, target, cfg.seed);
  record(iter, tension);
  trace.final_map = std::move(state.map);
  return trace;
}

DiscreteMap constant_map(const DomainMesh& mesh, const Vec& value) {
  DiscreteMap m;
  m.values = value.replicate(1, mesh.vertex_count());
  return m;
}

DiscreteMap identity_map(const DomainMesh& mesh) {
  require(mesh.spec.kind == DomainKind::Icosphere, ErrorCode::InvalidInput, "identity map needs an icosphere domain");
  return DiscreteMap{mesh.coords};
}

DiscreteMap great_circle_map(const DomainMesh& mesh) {
  require(mesh.spec.kind == DomainKind::TorusGrid, ErrorCode::InvalidInput, "great-circle map needs a torus domain");
  DiscreteMap m;
  m.values = Mat::Zero(3, mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    m.values(0, i) = std::cos(mesh.coords(0, i));
    m.values(1, i) = std::sin(mesh.coords(0, i));
  }
  return m;
}

DiscreteMap random_cap_map(const DomainMesh& mesh, const SpherePoint& center, double radius, std::uint64_t seed) {
  require(radius > 0 && radius <= std::numbers::pi, ErrorCode::InvalidInput, "cap radius must lie in (0, pi]");
  std::mt19937_64 rng(seed);
  DiscreteMap m;
  m.values.resize(center.ambient_dim(), mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    Vec x;
    do {
      x = sample_sphere(rng, center.ambient_dim());
    } while (sphere_distance(x, center.coords()) > radius);
    m.values.col(i) = x;
  }
  return m;
}

}  // namespace barriers
