#include "barriers/barriers.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <random>
#include <string>

#include "barriers/error.hpp"
#include "barriers/gauss.hpp"
#include "barriers/grassmann.hpp"
#include "barriers/harmonic.hpp"
#include "barriers/quadric.hpp"
#include "barriers/sphere.hpp"

using namespace barriers;

struct barriers_gpoint {
  GrassmannPoint w;
};
struct barriers_gtangent {
  GrassmannTangent x;
};
struct barriers_tube_region {
  SphereTubeRegion r;
};
struct barriers_mesh {
  DomainMesh mesh;
};
struct barriers_flow_trace {
  FlowTrace trace;
};
struct barriers_immersion {
  ParametricImmersion imm;
};

namespace {

thread_local std::string g_last_error;

barriers_status set_error(barriers_status s, const char* what) {
  g_last_error = what;
  return s;
}

struct BufferTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
barriers_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return BARRIERS_OK;
  } catch (const BufferTooSmall& e) {
    return set_error(BARRIERS_ERR_BUFFER_TOO_SMALL, e.what());
  } catch (const Error& e) {
    return set_error(static_cast<barriers_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(BARRIERS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(BARRIERS_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::InvalidInput, std::string("null argument: ") + what);
}

void fits(size_t have, size_t want) {
  if (have < want)
    throw BufferTooSmall("output buffer holds " + std::to_string(have) + " values, need " + std::to_string(want));
}

Vec read_vec(const double* p, int n) { return Eigen::Map<const Vec>(p, n); }

void write_vec(const Vec& v, double* out) { std::copy(v.data(), v.data() + v.size(), out); }

CVec read_cvec(const double* p, int size) {
  CVec z(size);
  for (int j = 0; j < size; ++j) z(j) = Complex(p[2 * j], p[2 * j + 1]);
  return z;
}

void write_cvec(const CVec& z, double* out) {
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    out[2 * j] = z(j).real();
    out[2 * j + 1] = z(j).imag();
  }
}

void fill_audit(const GaussAudit& a, barriers_gauss_audit* out) {
  std::memset(out, 0, sizeof(*out));
  out->min_margin = a.min_margin;
  out->epsilon = a.epsilon;
  out->grid = a.grid;
  out->h1_zero_asserted = a.h1_zero_asserted ? 1 : 0;
  out->worst_dim = static_cast<int>(std::min<Eigen::Index>(a.worst_point.size(), 8));
  for (int i = 0; i < out->worst_dim; ++i) out->worst_point[i] = a.worst_point(i);
  std::strncpy(out->kind, a.kind.c_str(), sizeof(out->kind) - 1);
  std::strncpy(out->verdict, a.verdict.c_str(), sizeof(out->verdict) - 1);
}

TargetManifold make_target(const barriers_flow_spec& s) {
  switch (s.target) {
    case BARRIERS_TARGET_SPHERE:
      return TargetManifold::sphere(s.sphere_dim);
    case BARRIERS_TARGET_PRODUCT:
      return TargetManifold::product(s.sphere_dim, s.second_dim, s.product_scale);
    case BARRIERS_TARGET_GRASSMANN_2_4:
      return TargetManifold::grassmann_2_4();
  }
  fail(ErrorCode::Config, "unknown target kind");
}

// Base point of the initial cap: the region's circle base if there is a
// region, otherwise e_1 (one per factor for products).
Vec cap_center(const barriers_flow_spec& s, const TargetManifold& t) {
  if (s.region != nullptr) return s.region->r.circle().base();
  Vec c = Vec::Zero(t.ambient_dim());
  c(0) = 1.0;
  if (t.kind() != TargetKind::Sphere) c(t.sphere_dim() + 1) = 1.0;
  return c;
}

DiscreteMap make_init(const DomainMesh& mesh, const barriers_flow_spec& s, const TargetManifold& t) {
  switch (s.init) {
    case BARRIERS_INIT_CONSTANT:
      return constant_map(mesh, cap_center(s, t));
    case BARRIERS_INIT_IDENTITY:
      require(t.kind() == TargetKind::Sphere && t.sphere_dim() == 2, ErrorCode::Config,
              "identity initialization needs an S2 target");
      return identity_map(mesh);
    case BARRIERS_INIT_GREAT_CIRCLE:
      require(t.kind() == TargetKind::Sphere && t.sphere_dim() == 2, ErrorCode::Config,
              "great-circle initialization needs an S2 target");
      return great_circle_map(mesh);
    case BARRIERS_INIT_CAP: {
      if (t.kind() == TargetKind::Sphere)
        return random_cap_map(mesh, SpherePoint::normalized(cap_center(s, t)), s.cap_radius, s.init_seed);
      // Products: independent caps in each factor.
      const int m1 = t.sphere_dim() + 1;
      const int m2 = t.ambient_dim() - m1;
      Vec c1 = Vec::Zero(m1), c2 = Vec::Zero(m2);
      c1(0) = 1.0;
      c2(0) = 1.0;
      DiscreteMap a = random_cap_map(mesh, SpherePoint(c1), s.cap_radius, s.init_seed);
      DiscreteMap b = random_cap_map(mesh, SpherePoint(c2), s.cap_radius, s.init_seed + 1);
      DiscreteMap out;
      out.values.resize(m1 + m2, mesh.vertex_count());
      out.values.topRows(m1) = a.values;
      out.values.bottomRows(m2) = b.values;
      return out;
    }
  }
  fail(ErrorCode::Config, "unknown initialization");
}

FlowConfig make_config(const barriers_flow_spec& s) {
  FlowConfig cfg;
  cfg.step = s.step;
  cfg.max_iters = s.max_iters;
  cfg.tension_tol = s.tension_tol;
  cfg.oscillation_tol = s.oscillation_tol;
  cfg.mode = s.constrained ? FlowMode::Constrained : FlowMode::Free;
  if (s.region != nullptr) cfg.region = s.region->r;
  require(!s.constrained || s.region != nullptr, ErrorCode::Config, "constrained flow needs a region");
  cfg.seed = s.seed;
  cfg.trace_every = s.trace_every;
  return cfg;
}

}  // namespace

extern "C" {

const char* barriers_version(void) { return "0.1.0"; }

const char* barriers_status_name(barriers_status s) {
  switch (s) {
    case BARRIERS_OK:
      return "ok";
    case BARRIERS_ERR_BUFFER_TOO_SMALL:
      return "buffer-too-small";
    case BARRIERS_ERR_INTERNAL:
      return "internal";
    default:
      if (s >= 1 && s <= 12) return error_name(static_cast<ErrorCode>(static_cast<int>(s)));
      return "unknown";
  }
}

const char* barriers_last_error(void) { return g_last_error.c_str(); }

barriers_status barriers_sample_sphere(int dim, uint64_t seed, size_t count, double* out) {
  return guard([&] {
    need(out, "out");
    require(dim >= 1, ErrorCode::InvalidInput, "dimension must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (size_t i = 0; i < count; ++i) {
      Vec v(dim);
      do {
        for (int j = 0; j < dim; ++j) v(j) = g(rng);
      } while (v.norm() < 1e-12);
      v.normalize();
      write_vec(v, out + i * dim);
    }
  });
}

barriers_status barriers_random_rotation(int dim, uint64_t seed, double* out) {
  return guard([&] {
    need(out, "out");
    require(dim >= 1, ErrorCode::InvalidInput, "dimension must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Mat a(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int i = 0; i < dim; ++i) a(i, j) = g(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR();
    for (int j = 0; j < dim; ++j)
      if (r(j, j) < 0) q.col(j) = -q.col(j);
    if (q.determinant() < 0) q.col(0) = -q.col(0);
    std::copy(q.data(), q.data() + q.size(), out);
  });
}

// ---- Grassmannian ----------------------------------------------------------

barriers_status barriers_gpoint_create(int n, int p, const double* frame, barriers_gpoint** out) {
  return guard([&] {
    need(frame, "frame");
    need(out, "out");
    require(n >= 1 && p >= 1 && p < n, ErrorCode::InvalidInput, "need 1 <= p < n");
    Mat f = Eigen::Map<const Mat>(frame, n, p);
    *out = new barriers_gpoint{GrassmannPoint(Frame(f))};
  });
}

void barriers_gpoint_destroy(barriers_gpoint* w) { delete w; }

void barriers_gpoint_dims(const barriers_gpoint* w, int* n, int* p) {
  if (w == nullptr) return;
  if (n) *n = w->w.n();
  if (p) *p = w->w.p();
}

barriers_status barriers_gpoint_frame(const barriers_gpoint* w, double* out, size_t len) {
  return guard([&] {
    need(w, "point");
    need(out, "out");
    const Mat& f = w->w.frame().matrix();
    fits(len, static_cast<size_t>(f.size()));
    std::copy(f.data(), f.data() + f.size(), out);
  });
}

barriers_status barriers_gpoint_plucker(const barriers_gpoint* w, double* out, size_t len) {
  return guard([&] {
    need(w, "point");
    need(out, "out");
    const Vec& c = w->w.plucker().coords();
    fits(len, static_cast<size_t>(c.size()));
    write_vec(c, out);
  });
}

barriers_status barriers_gtangent_create(const barriers_gpoint* base, const double* normals, const double* coeffs,
                                         barriers_gtangent** out) {
  return guard([&] {
    need(base, "base");
    need(coeffs, "coeffs");
    need(out, "out");
    const int n = base->w.n(), p = base->w.p();
    Mat a = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(coeffs, p, n - p);
    if (normals == nullptr) {
      *out = new barriers_gtangent{kozlov_canonical(base->w, a)};
    } else {
      Mat nf = Eigen::Map<const Mat>(normals, n, n - p);
      *out = new barriers_gtangent{kozlov_canonical(base->w, Frame(nf), a)};
    }
  });
}

void barriers_gtangent_destroy(barriers_gtangent* x) { delete x; }

barriers_status barriers_gtangent_canonical(const barriers_gtangent* x, int* rank, double* lambda, size_t len) {
  return guard([&] {
    need(x, "tangent");
    const int p = x->x.base().p(), n = x->x.base().n();
    const size_t slots = static_cast<size_t>(std::min(p, n - p));
    if (rank) *rank = x->x.rank();
    if (lambda) {
      fits(len, slots);
      std::fill(lambda, lambda + slots, 0.0);
      write_vec(x->x.lambda(), lambda);
    }
  });
}

barriers_status barriers_gtangent_norm(const barriers_gtangent* x, double* out) {
  return guard([&] {
    need(x, "tangent");
    need(out, "out");
    *out = x->x.norm();
  });
}

barriers_status barriers_gtangent_reconstruction_error(const barriers_gtangent* x, double* out) {
  return guard([&] {
    need(x, "tangent");
    need(out, "out");
    *out = (x->x.reconstruct_coeffs() - x->x.coeffs()).cwiseAbs().maxCoeff();
  });
}

barriers_status barriers_t_max(const barriers_gtangent* x, double* out) {
  return guard([&] {
    need(x, "tangent");
    need(out, "out");
    *out = t_max(x->x);
  });
}

barriers_status barriers_geodesic(const barriers_gtangent* x, double t, barriers_gpoint** out, int* rescaled) {
  return guard([&] {
    need(x, "tangent");
    need(out, "out");
    GeodesicPoint g = grassmann_geodesic(x->x, t);
    if (rescaled) *rescaled = g.rescaled ? 1 : 0;
    *out = new barriers_gpoint{std::move(g.point)};
  });
}

barriers_status barriers_principal_angles(const barriers_gpoint* a, const barriers_gpoint* b, double* angles,
                                          size_t len, double* distance) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    PrincipalAngles pa = principal_angles(a->w, b->w);
    if (angles) {
      fits(len, pa.angles.size());
      std::copy(pa.angles.begin(), pa.angles.end(), angles);
    }
    if (distance) *distance = pa.distance;
  });
}

barriers_status barriers_bg_contains(const barriers_gpoint* w, const barriers_gpoint* w2, double shrink,
                                     barriers_membership* out) {
  return guard([&] {
    need(w, "w");
    need(w2, "w2");
    need(out, "out");
    *out = static_cast<barriers_membership>(static_cast<int>(bg_contains(w->w, w2->w, shrink)));
  });
}

barriers_status barriers_main_region_probe(const barriers_gtangent* x1, double epsilon, const barriers_gpoint* w2,
                                           int grid, int* member, double* s_min, double* s_max) {
  return guard([&] {
    need(x1, "x1");
    need(w2, "w2");
    MainRegionProbe p = main_region_probe(x1->x, epsilon, w2->w, grid);
    if (member) *member = p.member ? 1 : 0;
    if (s_min) *s_min = p.s_min;
    if (s_max) *s_max = p.s_max;
  });
}

// ---- sphere regions --------------------------------------------------------

barriers_status barriers_tube_region_create(int dim, const double* base, const double* direction, double epsilon,
                                            barriers_tube_region** out) {
  return guard([&] {
    need(base, "base");
    need(direction, "direction");
    need(out, "out");
    require(dim >= 2, ErrorCode::InvalidInput, "ambient dimension must be at least 2");
    GreatCircle c(SpherePoint(read_vec(base, dim)), read_vec(direction, dim));
    *out = new barriers_tube_region{SphereTubeRegion(std::move(c), epsilon)};
  });
}

barriers_status barriers_tube_region_maximal_set(int dim, int flag_count, const double* flag, const double* x0,
                                                 double epsilon, barriers_tube_region** out) {
  return guard([&] {
    need(x0, "x0");
    need(out, "out");
    require(dim >= 2 && flag_count >= 0, ErrorCode::InvalidInput, "bad dimensions");
    Mat normals(dim, flag_count);
    if (flag_count > 0) {
      need(flag, "flag");
      normals = Eigen::Map<const Mat>(flag, dim, flag_count);
    }
    SubsphereFlag f(dim, normals);
    *out = new barriers_tube_region{build_maximal_set_region(f, SpherePoint(read_vec(x0, dim)), epsilon)};
  });
}

void barriers_tube_region_destroy(barriers_tube_region* r) { delete r; }

barriers_status barriers_tube_region_circle(const barriers_tube_region* r, double* base, double* direction,
                                            double* epsilon, double* radius) {
  return guard([&] {
    need(r, "region");
    if (base) write_vec(r->r.circle().base(), base);
    if (direction) write_vec(r->r.circle().direction(), direction);
    if (epsilon) *epsilon = r->r.epsilon();
    if (radius) *radius = r->r.ball_radius();
  });
}

barriers_status barriers_tube_contains(const barriers_tube_region* r, const double* x, int* inside, double* margin) {
  return guard([&] {
    need(r, "region");
    need(x, "x");
    SpherePoint p(read_vec(x, r->r.ambient_dim()));
    if (inside) *inside = tube_region_contains(r->r, p) ? 1 : 0;
    if (margin) *margin = tube_margin(r->r, p.coords());
  });
}

barriers_status barriers_sweepout_leaf_find(const barriers_tube_region* r, const double* x, int grid,
                                            double* t_values, size_t cap, size_t* count) {
  return guard([&] {
    need(r, "region");
    need(x, "x");
    std::vector<double> ts = sweepout_leaf_find(r->r, SpherePoint(read_vec(x, r->r.ambient_dim())), grid);
    if (count) *count = ts.size();
    if (t_values) std::copy_n(ts.begin(), std::min(cap, ts.size()), t_values);
  });
}

barriers_status barriers_retract_into_region(const barriers_tube_region* r, const double* x, uint64_t seed,
                                             double* out) {
  return guard([&] {
    need(r, "region");
    need(x, "x");
    need(out, "out");
    write_vec(retract_into_region(SpherePoint(read_vec(x, r->r.ambient_dim())), r->r, seed).coords(), out);
  });
}

barriers_status barriers_region_disconnection(const barriers_tube_region* r, const barriers_disconnection_spec* spec,
                                              int* components, int* raw_components, int* surviving) {
  return guard([&] {
    need(r, "region");
    need(spec, "spec");
    DisconnectionOptions o;
    o.neighbors = spec->neighbors;
    o.cutoff_factor = spec->cutoff_factor;
    o.leaf_band = spec->leaf_band;
    std::optional<double> t0;
    if (spec->has_leaf) t0 = spec->t0;
    DisconnectionResult d = region_disconnection_check(r->r, t0, spec->samples, spec->seed, o);
    if (components) *components = d.components;
    if (raw_components) *raw_components = d.raw_components;
    if (surviving) *surviving = d.surviving_samples;
  });
}

// ---- quadric ---------------------------------------------------------------

barriers_status barriers_grassmann_to_quadric(const barriers_gpoint* w, double* z, size_t len) {
  return guard([&] {
    need(w, "point");
    need(z, "z");
    QuadricPoint q = grassmann_to_quadric(w->w);
    fits(len, 2 * static_cast<size_t>(q.size()));
    write_cvec(q.z(), z);
  });
}

barriers_status barriers_quadric_to_grassmann(int size, const double* z, barriers_gpoint** out) {
  return guard([&] {
    need(z, "z");
    need(out, "out");
    *out = new barriers_gpoint{quadric_to_grassmann(QuadricPoint(read_cvec(z, size)))};
  });
}

barriers_status barriers_quadric_residual(int size, const double* z, double* out) {
  return guard([&] {
    need(z, "z");
    need(out, "out");
    *out = quadric_residual(read_cvec(z, size));
  });
}

barriers_status barriers_ho_chart(int size, const double* z, double* xi) {
  return guard([&] {
    need(z, "z");
    need(xi, "xi");
    write_cvec(ho_chart(QuadricPoint(read_cvec(z, size))), xi);
  });
}

barriers_status barriers_ho_chart_inv(int k, const double* xi, double* z) {
  return guard([&] {
    need(xi, "xi");
    need(z, "z");
    write_cvec(ho_chart_inv(read_cvec(xi, k)).z(), z);
  });
}

barriers_status barriers_hyperplane_margins(int size, const double* z, double* m_h, double* m_h_prime) {
  return guard([&] {
    need(z, "z");
    HyperplaneMargins m = hyperplane_margins(QuadricPoint(read_cvec(z, size)));
    if (m_h) *m_h = m.m_h;
    if (m_h_prime) *m_h_prime = m.m_h_prime;
  });
}

barriers_status barriers_fs_distance(int size, const double* a, const double* b, double* out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = fs_distance(ProjectivePoint(read_cvec(a, size)), ProjectivePoint(read_cvec(b, size)));
  });
}

barriers_status barriers_fs_speed(int size, const double* z, const double* dz, double* out) {
  return guard([&] {
    need(z, "z");
    need(dz, "dz");
    need(out, "out");
    *out = fs_speed(read_cvec(z, size), read_cvec(dz, size));
  });
}

barriers_status barriers_split_s2xs2(const barriers_gpoint* w, double* a, double* b) {
  return guard([&] {
    need(w, "point");
    auto [va, vb] = split_s2xs2(w->w);
    if (a) std::copy(va.data(), va.data() + 3, a);
    if (b) std::copy(vb.data(), vb.data() + 3, b);
  });
}

// ---- harmonic flow ---------------------------------------------------------

barriers_status barriers_mesh_create(barriers_domain_kind kind, int nu, int nv, int level, barriers_mesh** out) {
  return guard([&] {
    need(out, "out");
    DomainSpec s;
    s.kind = kind == BARRIERS_ICOSPHERE ? DomainKind::Icosphere : DomainKind::TorusGrid;
    s.nu = nu;
    s.nv = nv;
    s.level = level;
    *out = new barriers_mesh{build_domain(s)};
  });
}

void barriers_mesh_destroy(barriers_mesh* mesh) { delete mesh; }

barriers_status barriers_mesh_get_info(const barriers_mesh* mesh, barriers_mesh_info* out) {
  return guard([&] {
    need(mesh, "mesh");
    need(out, "out");
    out->vertices = mesh->mesh.vertex_count();
    out->edges = static_cast<int>(mesh->mesh.edges.size());
    out->faces = static_cast<int>(mesh->mesh.faces.size());
    out->euler_characteristic = mesh->mesh.euler_characteristic();
    out->total_mass = mesh->mesh.total_mass();
  });
}

void barriers_flow_spec_defaults(barriers_flow_spec* s) {
  if (s == nullptr) return;
  s->target = BARRIERS_TARGET_SPHERE;
  s->sphere_dim = 2;
  s->second_dim = 2;
  s->product_scale = 1.0;
  s->init = BARRIERS_INIT_CAP;
  s->cap_radius = 0.4;
  s->init_seed = 42;
  s->step = 0.2;
  s->max_iters = 50000;
  s->tension_tol = 1e-6;
  s->oscillation_tol = 1e-2;
  s->constrained = 0;
  s->region = nullptr;
  s->seed = 42;
  s->trace_every = 10;
}

barriers_status barriers_initial_energy(const barriers_mesh* mesh, const barriers_flow_spec* spec, double* energy,
                                        double* max_tension) {
  return guard([&] {
    need(mesh, "mesh");
    need(spec, "spec");
    TargetManifold t = make_target(*spec);
    DiscreteMap init = make_init(mesh->mesh, *spec, t);
    if (energy) *energy = dirichlet_energy(mesh->mesh, init, t);
    if (max_tension) *max_tension = max_tension_norm(mesh->mesh, init, t);
  });
}

barriers_status barriers_flow_run(const barriers_mesh* mesh, const barriers_flow_spec* spec,
                                  barriers_flow_trace** out) {
  return guard([&] {
    need(mesh, "mesh");
    need(spec, "spec");
    need(out, "out");
    TargetManifold t = make_target(*spec);
    DiscreteMap init = make_init(mesh->mesh, *spec, t);
    FlowConfig cfg = make_config(*spec);
    *out = new barriers_flow_trace{run_flow(mesh->mesh, init, t, cfg)};
  });
}

void barriers_flow_trace_destroy(barriers_flow_trace* trace) { delete trace; }

barriers_status barriers_flow_trace_summary(const barriers_flow_trace* trace, barriers_flow_summary* out) {
  return guard([&] {
    need(trace, "trace");
    need(out, "out");
    const FlowTrace& f = trace->trace;
    out->status = static_cast<barriers_flow_status>(static_cast<int>(f.status));
    out->iters = f.iters;
    out->initial_energy = f.initial_energy;
    out->final_energy = f.final_energy;
    out->final_oscillation = f.final_oscillation;
    out->final_max_tension = f.final_max_tension;
    out->barrier_events = f.barrier_events.size();
    out->energy_monotone = f.energy_monotone ? 1 : 0;
    out->max_constraint_residual = f.max_constraint_residual;
  });
}

size_t barriers_flow_trace_rows(const barriers_flow_trace* trace) {
  return trace == nullptr ? 0 : trace->trace.rows.size();
}

barriers_status barriers_flow_trace_row(const barriers_flow_trace* trace, size_t i, barriers_trace_row* out) {
  return guard([&] {
    need(trace, "trace");
    need(out, "out");
    require(i < trace->trace.rows.size(), ErrorCode::InvalidInput, "row index out of range");
    const TraceRow& r = trace->trace.rows[i];
    *out = barriers_trace_row{r.iter, r.energy, r.max_tension, r.oscillation, r.step};
  });
}

barriers_status barriers_flow_trace_event(const barriers_flow_trace* trace, size_t i, barriers_barrier_event* out) {
  return guard([&] {
    need(trace, "trace");
    need(out, "out");
    require(i < trace->trace.barrier_events.size(), ErrorCode::InvalidInput, "event index out of range");
    const BarrierEvent& e = trace->trace.barrier_events[i];
    *out = barriers_barrier_event{e.vertex, e.iter, e.depth};
  });
}

const char* barriers_flow_status_name(barriers_flow_status s) {
  return flow_status_name(static_cast<FlowStatus>(static_cast<int>(s)));
}

// ---- Gauss maps ------------------------------------------------------------

barriers_status barriers_immersion_create(const barriers_immersion_spec* spec, barriers_immersion** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    switch (spec->kind) {
      case BARRIERS_IMM_EQUATOR:
        *out = new barriers_immersion{ParametricImmersion::equator(spec->k, spec->m)};
        return;
      case BARRIERS_IMM_CLIFFORD_TORUS:
        *out = new barriers_immersion{ParametricImmersion::clifford_torus()};
        return;
      case BARRIERS_IMM_GENERALIZED_CLIFFORD:
        *out = new barriers_immersion{ParametricImmersion::generalized_clifford(spec->p, spec->q)};
        return;
      case BARRIERS_IMM_DISTANCE_SPHERE:
        *out = new barriers_immersion{ParametricImmersion::distance_sphere(spec->radius, spec->m)};
        return;
    }
    fail(ErrorCode::InvalidInput, "unknown immersion kind");
  });
}

barriers_status barriers_immersion_include(const barriers_immersion* imm, int extra, barriers_immersion** out) {
  return guard([&] {
    need(imm, "immersion");
    need(out, "out");
    *out = new barriers_immersion{imm->imm.include_equatorially(extra)};
  });
}

void barriers_immersion_destroy(barriers_immersion* imm) { delete imm; }

void barriers_immersion_dims(const barriers_immersion* imm, int* k, int* m) {
  if (imm == nullptr) return;
  if (k) *k = imm->imm.dim();
  if (m) *m = imm->imm.sphere_dim();
}

barriers_status barriers_mean_curvature(const barriers_immersion* imm, const double* params, double* out) {
  return guard([&] {
    need(imm, "immersion");
    need(params, "params");
    need(out, "out");
    *out = mean_curvature_norm(imm->imm, read_vec(params, imm->imm.dim()));
  });
}

barriers_status barriers_hypersurface_gauss(const barriers_immersion* imm, const double* params, double* out) {
  return guard([&] {
    need(imm, "immersion");
    need(params, "params");
    need(out, "out");
    write_vec(hypersurface_gauss(imm->imm, read_vec(params, imm->imm.dim())).coords(), out);
  });
}

barriers_status barriers_gauss_map_tension(const barriers_immersion* imm, int n, double* out) {
  return guard([&] {
    need(imm, "immersion");
    need(out, "out");
    *out = gauss_map_tension(imm->imm, n);
  });
}

barriers_status barriers_gauss_audit_sphere(const barriers_immersion* imm, const barriers_tube_region* region,
                                            int grid, int h1_zero_asserted, barriers_gauss_audit* out) {
  return guard([&] {
    need(imm, "immersion");
    need(region, "region");
    need(out, "out");
    fill_audit(gauss_image_audit(imm->imm, AuditRegion(region->r), grid, h1_zero_asserted != 0), out);
  });
}

barriers_status barriers_gauss_audit_grassmann(const barriers_immersion* imm, const barriers_gtangent* x1,
                                               double epsilon, int grid, int h1_zero_asserted,
                                               barriers_gauss_audit* out) {
  return guard([&] {
    need(imm, "immersion");
    need(x1, "x1");
    need(out, "out");
    fill_audit(gauss_image_audit(imm->imm, AuditRegion(GrassmannRegion{x1->x, epsilon}), grid, h1_zero_asserted != 0),
               out);
  });
}

}  // extern "C"
