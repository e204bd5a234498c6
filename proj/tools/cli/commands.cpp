#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "barriers/barriers.h"

namespace cli {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void check(barriers_status s) {
  if (s == BARRIERS_OK) return;
  const int code = s == BARRIERS_ERR_CONFIG ? kExitUsage : kExitNumeric;
  throw CliError(code, barriers_status_name(s), barriers_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using GPoint = std::unique_ptr<barriers_gpoint, Deleter<barriers_gpoint, barriers_gpoint_destroy>>;
using GTangent = std::unique_ptr<barriers_gtangent, Deleter<barriers_gtangent, barriers_gtangent_destroy>>;
using Region = std::unique_ptr<barriers_tube_region, Deleter<barriers_tube_region, barriers_tube_region_destroy>>;
using Mesh = std::unique_ptr<barriers_mesh, Deleter<barriers_mesh, barriers_mesh_destroy>>;
using Trace = std::unique_ptr<barriers_flow_trace, Deleter<barriers_flow_trace, barriers_flow_trace_destroy>>;
using Immersion = std::unique_ptr<barriers_immersion, Deleter<barriers_immersion, barriers_immersion_destroy>>;

// Column-major n x n matrix.
struct Matrix {
  int n;
  std::vector<double> a;
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(j * n + i)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(j * n + i)]; }
  std::vector<double> columns(int first, int count) const {
    return {a.begin() + first * n, a.begin() + (first + count) * n};
  }
};

Matrix identity(int n) {
  Matrix m{n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0)};
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix rotation(int n, std::uint64_t seed) {
  Matrix m{n, std::vector<double>(static_cast<std::size_t>(n * n))};
  check(barriers_random_rotation(n, seed, m.a.data()));
  return m;
}

GPoint make_point(int n, int p, const std::vector<double>& frame) {
  barriers_gpoint* w = nullptr;
  check(barriers_gpoint_create(n, p, frame.data(), &w));
  return GPoint(w);
}

GTangent make_tangent(const barriers_gpoint* base, const double* normals, const std::vector<double>& coeffs) {
  barriers_gtangent* x = nullptr;
  check(barriers_gtangent_create(base, normals, coeffs.data(), &x));
  return GTangent(x);
}

// Diagonal tangent sum_i lambda_i eta(i,i) at the standard point.
std::pair<GPoint, GTangent> diagonal_tangent(int n, int p, const std::vector<double>& lambda) {
  GPoint w = make_point(n, p, identity(n).columns(0, p));
  std::vector<double> coeffs(static_cast<std::size_t>(p * (n - p)), 0.0);
  for (std::size_t i = 0; i < lambda.size(); ++i) coeffs[i * static_cast<std::size_t>(n - p) + i] = lambda[i];
  GTangent x = make_tangent(w.get(), nullptr, coeffs);
  return {std::move(w), std::move(x)};
}

Region make_region(int dim, int base_axis, int dir_axis, double eps) {
  std::vector<double> b(static_cast<std::size_t>(dim), 0.0), d(static_cast<std::size_t>(dim), 0.0);
  b[static_cast<std::size_t>(base_axis)] = 1.0;
  d[static_cast<std::size_t>(dir_axis)] = 1.0;
  barriers_tube_region* r = nullptr;
  check(barriers_tube_region_create(dim, b.data(), d.data(), eps, &r));
  return Region(r);
}

nlohmann::ordered_json header(const std::string& command, const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["seed"] = cfg.integer("seed");
  return j;
}

std::uint64_t seed_of(const ExperimentConfig& cfg) { return static_cast<std::uint64_t>(cfg.integer("seed")); }

// ---- grassmann -------------------------------------------------------------

int grassmann_tmax(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out) {
  const int n = static_cast<int>(cfg.integer("geometry.n")), p = static_cast<int>(cfg.integer("geometry.p"));
  const auto& lambda = cfg.list("grassmann.lambda");
  auto [w, x] = diagonal_tangent(n, p, lambda);
  double t = 0;
  int rank = 0;
  check(barriers_t_max(x.get(), &t));
  check(barriers_gtangent_canonical(x.get(), &rank, nullptr, 0));
  Report r;
  r.json_name = "tmax.json";
  r.summary = header("grassmann tmax", cfg);
  r.summary["n"] = n;
  r.summary["p"] = p;
  r.summary["lambda"] = lambda;
  r.summary["rank"] = rank;
  r.summary["t_max"] = t;
  emit_report(r, opts.out_dir);
  out << "t_max " << format_real(t) << "\n";
  return kExitOk;
}

int grassmann_geodesic(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out) {
  const int n = static_cast<int>(cfg.integer("geometry.n")), p = static_cast<int>(cfg.integer("geometry.p"));
  const int steps = static_cast<int>(cfg.integer("grassmann.samples"));
  auto [w, x] = diagonal_tangent(n, p, cfg.list("grassmann.lambda"));
  double tx = 0;
  check(barriers_t_max(x.get(), &tx));

  Table t{"geodesic", {"t", "distance", "error", "rescaled"}, {}};
  for (int i = 1; i <= p; ++i) t.columns.push_back("theta_" + std::to_string(i));
  double worst = 0;
  int rescaled = 0;
  for (int i = 0; i <= steps; ++i) {
    const double s = tx * i / steps;
    barriers_gpoint* g = nullptr;
    check(barriers_geodesic(x.get(), s, &g, &rescaled));
    GPoint gp(g);
    std::vector<double> angles(static_cast<std::size_t>(p));
    double d = 0;
    check(barriers_principal_angles(w.get(), gp.get(), angles.data(), angles.size(), &d));
    worst = std::max(worst, std::abs(d - s));
    std::vector<Cell> row{s, d, std::abs(d - s), static_cast<std::int64_t>(rescaled)};
    for (double a : angles) row.emplace_back(a);
    t.add(std::move(row));
  }
  const bool ok = worst < 1e-8;
  Report r;
  r.summary = header("grassmann geodesic", cfg);
  r.summary["t_max"] = tx;
  r.summary["rescaled"] = rescaled != 0;
  r.summary["max_speed_error"] = worst;
  r.summary["unit_speed"] = ok;
  r.tables.push_back(std::move(t));
  emit_report(r, opts.out_dir);
  out << "max |d(w, w_X(t)) - t| " << format_real(worst) << "\n";
  return ok ? kExitOk : kExitNumeric;
}

// Random configuration in G(2,n): frame columns of a Haar rotation give the
// base (e1, e2) and normals (n1, ...). X1 turns e1 towards n1; X2 turns e1
// towards n_a (a != 1) and e2 towards n_b (b != a) at equal rates.
struct MainConfig {
  GPoint base;
  GTangent x1;
  GTangent x2;
  int a;
  int b;
};

MainConfig main_config(int n, std::uint64_t seed) {
  const Matrix q = rotation(n, seed);
  GPoint w = make_point(n, 2, q.columns(0, 2));
  const std::vector<double> normals = q.columns(2, n - 2);
  const int m = n - 2;
  std::vector<double> c1(static_cast<std::size_t>(2 * m), 0.0);
  c1[0] = 1.0;
  GTangent x1 = make_tangent(w.get(), normals.data(), c1);
  // Admissible assignment drawn from the seed.
  const int a = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(m - 1));
  std::vector<int> rest;
  for (int j = 0; j < m; ++j)
    if (j != a) rest.push_back(j);
  const int b = rest[static_cast<std::size_t>((seed / 7) % rest.size())];
  std::vector<double> c2(static_cast<std::size_t>(2 * m), 0.0);
  c2[static_cast<std::size_t>(a)] = std::numbers::sqrt2 / 2;
  c2[static_cast<std::size_t>(m + b)] = std::numbers::sqrt2 / 2;
  GTangent x2 = make_tangent(w.get(), normals.data(), c2);
  return {std::move(w), std::move(x1), std::move(x2), a, b};
}

int grassmann_region(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out) {
  const int n = static_cast<int>(cfg.integer("geometry.n"));
  const double eps = cfg.real("geometry.epsilon");
  const int samples = static_cast<int>(cfg.integer("grassmann.samples"));
  const int grid = static_cast<int>(cfg.integer("grassmann.grid"));
  Table t{"region", {"config", "normal_e1", "normal_e2", "sign", "t", "s_min", "s_max", "level", "member"}, {}};
  int members = 0;
  for (int i = 0; i < samples; ++i) {
    MainConfig c = main_config(n, seed_of(cfg) + static_cast<std::uint64_t>(i));
    double tx = 0;
    check(barriers_t_max(c.x2.get(), &tx));
    for (int sign : {1, -1}) {
      barriers_gpoint* g = nullptr;
      check(barriers_geodesic(c.x2.get(), sign * tx, &g, nullptr));
      GPoint w2(g);
      int member = 0;
      double lo = 0, hi = 0;
      check(barriers_main_region_probe(c.x1.get(), eps, w2.get(), grid, &member, &lo, &hi));
      members += member;
      t.add({static_cast<std::int64_t>(i), static_cast<std::int64_t>(c.a + 1), static_cast<std::int64_t>(c.b + 1),
             static_cast<std::int64_t>(sign), sign * tx, lo, hi, kPi / 2 - eps, static_cast<std::int64_t>(member)});
    }
  }
  Report r;
  r.summary = header("grassmann region", cfg);
  r.summary["n"] = n;
  r.summary["epsilon"] = eps;
  r.summary["configurations"] = samples;
  r.summary["members"] = members;
  r.summary["all_excluded"] = members == 0;
  r.tables.push_back(std::move(t));
  emit_report(r, opts.out_dir);
  out << "excluded " << 2 * samples - members << " of " << 2 * samples << "\n";
  return members == 0 ? kExitOk : kExitNumeric;
}

// ---- sphere ----------------------------------------------------------------

int sphere_region(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out) {
  const int dim = static_cast<int>(cfg.integer("geometry.k")) + 2;
  const double eps = cfg.real("geometry.epsilon");
  const int samples = static_cast<int>(cfg.integer("sphere.samples"));
  const double band = cfg.real("sphere.boundary_band");
  const int grid = static_cast<int>(cfg.integer("sphere.grid"));
  Region region = make_region(dim, 0, 1, eps);
  std::vector<double> pts(static_cast<std::size_t>(dim * samples));
  check(barriers_sample_sphere(dim, seed_of(cfg), static_cast<std::size_t>(samples), pts.data()));

  Table t{"region", {"index", "margin", "closed_form", "sweepout", "leaves", "in_band"}, {}};
  int banded = 0, disagree = 0;
  double ts[8];
  for (int i = 0; i < samples; ++i) {
    const double* x = pts.data() + static_cast<std::ptrdiff_t>(i) * dim;
    int inside = 0;
    double margin = 0;
    size_t count = 0;
    check(barriers_tube_contains(region.get(), x, &inside, &margin));
    check(barriers_sweepout_leaf_find(region.get(), x, grid, ts, 8, &count));
    const int swept = count > 0 ? 1 : 0;
    const bool in_band = std::abs(margin) < band;
    banded += in_band;
    if (!in_band && swept != inside) ++disagree;
    t.add({static_cast<std::int64_t>(i), margin, static_cast<std::int64_t>(inside), static_cast<std::int64_t>(swept),
           static_cast<std::int64_t>(count), static_cast<std::int64_t>(in_band)});
  }
  Report r;
  r.summary = header("sphere region", cfg);
  r.summary["sphere_dim"] = dim - 1;
  r.summary["epsilon"] = eps;
  r.summary["samples"] = samples;
  r.summary["in_band"] = banded;
  r.summary["disagreements"] = disagree;
  r.tables.push_back(std::move(t));
  emit_report(r, opts.out_dir);
  out << "disagreements " << disagree << " of " << samples - banded << "\n";
  return disagree == 0 ? kExitOk : kExitNumeric;
}

int sphere_disconnect(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out) {
  const int dim = static_cast<int>(cfg.integer("geometry.k")) + 2;
  const double eps = cfg.real("geometry.epsilon");
  const int leaves = static_cast<int>(cfg.integer("sphere.leaves"));
  Region region = make_region(dim, 0, 1, eps);
  barriers_disconnection_spec spec{};
  spec.samples = static_cast<int>(cfg.integer("sphere.samples"));
  spec.neighbors = static_cast<int>(cfg.integer("sphere.neighbors"));
  spec.cutoff_factor = cfg.real("sphere.cutoff_factor");
  spec.leaf_band = cfg.real("sphere.leaf_band");

  Table t{"disconnect", {"leaf", "t0", "components", "raw_components", "surviving"}, {}};
  auto run = [&](int leaf, double t0) {
    spec.has_leaf = leaf >= 0;
    spec.t0 = t0;
    spec.seed = seed_of(cfg) + static_cast<std::uint64_t>(leaf + 1);
    int comps = 0, raw = 0, surviving = 0;
    check(barriers_region_disconnection(region.get(), &spec, &comps, &raw, &surviving));
    t.add({static_cast<std::int64_t>(leaf), leaf >= 0 ? Cell(t0) : Cell(std::string()), static_cast<std::int64_t>(comps),
           static_cast<std::int64_t>(raw), static_cast<std::int64_t>(surviving)});
    return comps;
  };
  const int intact = run(-1, 0.0);
  out << "intact region: " << intact << " component" << (intact == 1 ? "" : "s") << "\n";
  bool ok = intact == 1;
  std::vector<int> per_leaf;
  for (int j = 0; j < leaves; ++j) {
    // Leaves at t and t + pi coincide in the antipodal quotient.
    const double t0 = (j + 0.5) * kPi / leaves;
    const int c = run(j, t0);
    per_leaf.push_back(c);
    ok = ok && c == 2;
    out << "leaf " << j << " t0 " << format_real(t0) << ": " << c << " components\n";
  }
  Report r;
  r.summary = header("sphere disconnect", cfg);
  r.summary["sphere_dim"] = dim - 1;
  r.summary["epsilon"] = eps;
  r.summary["samples"] = spec.samples;
  r.summary["intact_components"] = intact;
  r.summary["leaf_components"] = per_leaf;
  r.summary["disconnected_by_every_leaf"] = ok;
  r.tables.push_back(std::move(t));
  emit_report(r, opts.out_dir);
  return ok ? kExitOk : kExitNumeric;
}

// ---- quadric ---------------------------------------------------------------

std::vector<Complex> to_complex(const std::vector<double>& z) {
  std::vector<Complex> c(z.size() / 2);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = Complex(z[2 * j], z[2 * j + 1]);
  return c;
}

// Distance between the unit representatives after optimal phase alignment,
// computed componentwise so it stays accurate near zero.
double projective_error(const std::vector<double>& a, const std::vector<double>& b) {
  auto za = to_complex(a), zb = to_complex(b);
  double na = 0, nb = 0;
  Complex inner = 0;
  for (std::size_t j = 0; j < za.size(); ++j) {
    na += std::norm(za[j]);
    nb += std::norm(zb[j]);
    inner += std::conj(zb[j]) * za[j];
  }
  const Complex phase = std::abs(inner) > 0 ? inner / std::abs(inner) : Complex(1);
  double e = 0;
  for (std::size_t j = 0; j < za.size(); ++j) e += std::norm(za[j] / std::sqrt(na) - phase * zb[j] / std::sqrt(nb));
  return std::sqrt(e);
}

std::vector<double> quadric_of(const barriers_gpoint* w, int size) {
  std::vector<double> z(static_cast<std::size_t>(2 * size));
  check(barriers_grassmann_to_quadric(w, z.data(), z.size()));
  return z;
}

std::vector<double> plucker_of(const barriers_gpoint* w, std::size_t len) {
  std::vector<double> c(len);
  check(barriers_gpoint_plucker(w, c.data(), len));
  return c;
}

int quadric_roundtrip(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out) {
  const int k = static_cast<int>(cfg.integer("quadric.k"));
  const int n = k + 2;
  const int samples = static_cast<int>(cfg.integer("quadric.samples"));
  const std::size_t pl = static_cast<std::size_t>(n * (n - 1) / 2);
  constexpr double h = 1e-5;
  Table t{"roundtrip", {"index", "residual", "roundtrip_error", "metric_rel_error"}, {}};
  double worst_res = 0, worst_rt = 0, worst_metric = 0;
  for (int i = 0; i < samples; ++i) {
    const Matrix q = rotation(n, seed_of(cfg) + static_cast<std::uint64_t>(i));
    GPoint w = make_point(n, 2, q.columns(0, 2));
    const std::vector<double> z = quadric_of(w.get(), n);
    double res = 0;
    check(barriers_quadric_residual(n, z.data(), &res));
    barriers_gpoint* back = nullptr;
    check(barriers_quadric_to_grassmann(n, z.data(), &back));
    GPoint wb(back);
    const auto a = plucker_of(w.get(), pl), b = plucker_of(wb.get(), pl);
    double rt = 0;
    for (std::size_t j = 0; j < pl; ++j) rt = std::max(rt, std::abs(a[j] - b[j]));

    // Unit tangent with a seeded direction; compare Fubini-Study speed of the
    // image curve with the Grassmannian unit speed.
    const Matrix g = rotation(2 * (n - 2), seed_of(cfg) + 1000003u + static_cast<std::uint64_t>(i));
    std::vector<double> coeffs(static_cast<std::size_t>(2 * (n - 2)));
    for (std::size_t j = 0; j < coeffs.size(); ++j) coeffs[j] = g(static_cast<int>(j), 0);
    GTangent x = make_tangent(w.get(), nullptr, coeffs);
    barriers_gpoint *gp = nullptr, *gm = nullptr;
    check(barriers_geodesic(x.get(), h, &gp, nullptr));
    check(barriers_geodesic(x.get(), -h, &gm, nullptr));
    GPoint wp(gp), wm(gm);
    const auto zp = quadric_of(wp.get(), n), zm = quadric_of(wm.get(), n);
    std::vector<double> dz(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) dz[j] = (zp[j] - zm[j]) / (2 * h);
    double speed = 0;
    check(barriers_fs_speed(n, z.data(), dz.data(), &speed));
    const double metric = std::abs(speed - 1.0);

    worst_res = std::max(worst_res, res);
    worst_rt = std::max(worst_rt, rt);
    worst_metric = std::max(worst_metric, metric);
    t.add({static_cast<std::int64_t>(i), res, rt, metric});
  }
  const bool ok = worst_res < 1e-10 && worst_rt < 1e-10 && worst_metric < 1e-4;
  Report r;
  r.summary = header("quadric roundtrip", cfg);
  r.summary["k"] = k;
  r.summary["samples"] = samples;
  r.summary["max_residual"] = worst_res;
  r.summary["max_roundtrip_error"] = worst_rt;
  r.summary["max_metric_rel_error"] = worst_metric;
  r.summary["ok"] = ok;
  r.tables.push_back(std::move(t));
  emit_report(r, opts.out_dir);
  out << "max residual " << format_real(worst_res) << ", round trip " << format_real(worst_rt) << ", metric "
      << format_real(worst_metric) << "\n";
  return ok ? kExitOk : kExitNumeric;
}

int quadric_chart(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out) {
  const int k = static_cast<int>(cfg.integer("quadric.k"));
  const int n = k + 2;
  const int samples = static_cast<int>(cfg.integer("quadric.samples"));
  Table t{"chart", {"index", "m_h", "m_h_prime", "roundtrip_error", "skipped"}, {}};
  double worst = 0;
  int skipped = 0;
  std::vector<double> xi(static_cast<std::size_t>(2 * k)), back(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < samples; ++i) {
    const Matrix q = rotation(n, seed_of(cfg) + static_cast<std::uint64_t>(i));
    GPoint w = make_point(n, 2, q.columns(0, 2));
    const std::vector<double> z = quadric_of(w.get(), n);
    double mh = 0, mhp = 0;
    check(barriers_hyperplane_margins(n, z.data(), &mh, &mhp));
    const barriers_status s = barriers_ho_chart(n, z.data(), xi.data());
    if (s == BARRIERS_ERR_CHART_DOMAIN) {
      ++skipped;
      t.add({static_cast<std::int64_t>(i), mh, mhp, std::string(), std::int64_t{1}});
      continue;
    }
    check(s);
    check(barriers_ho_chart_inv(k, xi.data(), back.data()));
    const double e = projective_error(z, back);
    worst = std::max(worst, e);
    t.add({static_cast<std::int64_t>(i), mh, mhp, e, std::int64_t{0}});
  }
  const bool ok = worst < 1e-10;
  Report r;
  r.summary = header("quadric chart", cfg);
  r.summary["k"] = k;
  r.summary["samples"] = samples;
  r.summary["skipped"] = skipped;
  r.summary["max_roundtrip_error"] = worst;
  r.summary["ok"] = ok;
  r.tables.push_back(std::move(t));
  emit_report(r, opts.out_dir);
  out << "max chart round trip " << format_real(worst) << " (" << skipped << " skipped)\n";
  return ok ? kExitOk : kExitNumeric;
}

// ---- flow ------------------------------------------------------------------

struct FlowResult {
  Report report;
  std::string line;
  bool ok = false;
  std::string error_tag;
  std::string error;
  int error_code = 0;
};

FlowResult flow_once(const ExperimentConfig& cfg, int run) {
  FlowResult res;
  const std::string& kind = cfg.text("mesh.kind");
  barriers_mesh* mp = nullptr;
  check(barriers_mesh_create(kind == "icosphere" ? BARRIERS_ICOSPHERE : BARRIERS_TORUS_GRID,
                             static_cast<int>(cfg.integer("mesh.nu")), static_cast<int>(cfg.integer("mesh.nv")),
                             static_cast<int>(cfg.integer("mesh.level")), &mp));
  Mesh mesh(mp);
  barriers_mesh_info info{};
  check(barriers_mesh_get_info(mesh.get(), &info));

  barriers_flow_spec spec;
  barriers_flow_spec_defaults(&spec);
  const std::string& target = cfg.text("flow.target");
  spec.target = target == "sphere"            ? BARRIERS_TARGET_SPHERE
                : target == "product-spheres" ? BARRIERS_TARGET_PRODUCT
                                              : BARRIERS_TARGET_GRASSMANN_2_4;
  spec.sphere_dim = static_cast<int>(cfg.integer("flow.sphere_dim"));
  spec.second_dim = static_cast<int>(cfg.integer("flow.second_dim"));
  spec.product_scale = cfg.real("flow.product_scale");
  const std::string& init = cfg.text("flow.init");
  spec.init = init == "constant"       ? BARRIERS_INIT_CONSTANT
              : init == "identity"     ? BARRIERS_INIT_IDENTITY
              : init == "great-circle" ? BARRIERS_INIT_GREAT_CIRCLE
                                       : BARRIERS_INIT_CAP;
  spec.cap_radius = cfg.real("flow.cap_radius");
  spec.init_seed = seed_of(cfg) + static_cast<std::uint64_t>(run);
  spec.seed = seed_of(cfg) + static_cast<std::uint64_t>(run);
  spec.step = cfg.has("flow.step") ? cfg.real("flow.step") : (kind == "icosphere" ? 0.1 : 0.2);
  spec.max_iters = static_cast<long>(cfg.integer("flow.max_iters"));
  spec.tension_tol = cfg.real("flow.tension_tol");
  spec.oscillation_tol = cfg.real("flow.oscillation_tol");
  spec.trace_every = static_cast<int>(cfg.integer("flow.trace_every"));
  spec.constrained = cfg.text("flow.mode") == "constrained";
  Region region;
  const double eps = cfg.real("geometry.epsilon");
  if (cfg.text("flow.region") == "tube") {
    region = make_region(spec.sphere_dim + 1, 0, 1, eps);
    spec.region = region.get();
  }

  barriers_flow_trace* tp = nullptr;
  check(barriers_flow_run(mesh.get(), &spec, &tp));
  Trace trace(tp);
  barriers_flow_summary sum{};
  check(barriers_flow_trace_summary(trace.get(), &sum));

  Table t{"trace", {"iter", "energy", "max_tension", "oscillation", "step"}, {}};
  const size_t rows = barriers_flow_trace_rows(trace.get());
  for (size_t i = 0; i < rows; ++i) {
    barriers_trace_row row{};
    check(barriers_flow_trace_row(trace.get(), i, &row));
    t.add({static_cast<std::int64_t>(row.iter), row.energy, row.max_tension, row.oscillation, row.step});
  }
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (size_t i = 0; i < sum.barrier_events; ++i) {
    barriers_barrier_event e{};
    check(barriers_flow_trace_event(trace.get(), i, &e));
    events.push_back({{"vertex", e.vertex}, {"iter", e.iter}, {"depth", e.depth}});
  }

  const std::string status = barriers_flow_status_name(sum.status);
  Report& r = res.report;
  r.summary = header("flow run", cfg);
  r.summary["run"] = run;
  r.summary["run_seed"] = spec.seed;
  r.summary["status"] = status;
  r.summary["iters"] = sum.iters;
  r.summary["final_energy"] = sum.final_energy;
  r.summary["initial_energy"] = sum.initial_energy;
  r.summary["final_oscillation"] = sum.final_oscillation;
  r.summary["final_max_tension"] = sum.final_max_tension;
  r.summary["energy_monotone"] = sum.energy_monotone != 0;
  r.summary["max_constraint_residual"] = sum.max_constraint_residual;
  r.summary["barrier_events"] = events;
  r.summary["domain"] = {{"kind", kind},
                         {"vertices", info.vertices},
                         {"edges", info.edges},
                         {"faces", info.faces},
                         {"euler_characteristic", info.euler_characteristic},
                         {"total_mass", info.total_mass}};
  r.summary["target"] = target;
  r.summary["mode"] = cfg.text("flow.mode");
  r.summary["region"] = cfg.text("flow.region");
  if (region) r.summary["epsilon"] = eps;
  r.tables.push_back(std::move(t));

  std::ostringstream line;
  line << "run " << run << ": " << status << " iters " << sum.iters << " energy " << format_real(sum.final_energy)
       << " oscillation " << format_real(sum.final_oscillation);
  res.line = line.str();
  res.ok = sum.status != BARRIERS_FLOW_STALLED;
  return res;
}

std::string run_dir(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%03d", i);
  return buf;
}

int flow_run(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out) {
  const int runs = opts.runs;
  if (runs < 1) throw CliError(kExitUsage, "usage", "--runs must be at least 1");
  std::vector<FlowResult> results(static_cast<std::size_t>(runs));
  const int workers = std::max(1, std::min(runs, opts.threads > 0 ? opts.threads : batch_threads()));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < runs; i = next++) {
      FlowResult& res = results[static_cast<std::size_t>(i)];
      try {
        res = flow_once(cfg, i);
      } catch (const CliError& e) {
        res.error_code = e.exit_code();
        res.error_tag = e.tag();
        res.error = e.what();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  int code = kExitOk;
  for (int i = 0; i < runs; ++i) {
    const FlowResult& res = results[static_cast<std::size_t>(i)];
    if (res.error_code != 0) throw CliError(res.error_code, res.error_tag, "run " + std::to_string(i) + ": " + res.error);
    emit_report(res.report, runs == 1 ? opts.out_dir : opts.out_dir / run_dir(i));
    out << res.line << "\n";
    if (!res.ok) code = kExitNumeric;
  }
  return code;
}

// ---- gauss -----------------------------------------------------------------

int gauss_audit(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& out) {
  const std::string& kind = cfg.text("gauss.immersion");
  barriers_immersion_spec spec{};
  spec.kind = kind == "equator"                ? BARRIERS_IMM_EQUATOR
              : kind == "clifford-torus"       ? BARRIERS_IMM_CLIFFORD_TORUS
              : kind == "generalized-clifford" ? BARRIERS_IMM_GENERALIZED_CLIFFORD
                                               : BARRIERS_IMM_DISTANCE_SPHERE;
  spec.k = static_cast<int>(cfg.integer("gauss.k"));
  spec.m = static_cast<int>(cfg.integer("gauss.m"));
  spec.p = static_cast<int>(cfg.integer("gauss.p"));
  spec.q = static_cast<int>(cfg.integer("gauss.q"));
  spec.radius = cfg.real("gauss.radius");
  barriers_immersion* ip = nullptr;
  check(barriers_immersion_create(&spec, &ip));
  Immersion imm(ip);
  int k = 0, m = 0;
  barriers_immersion_dims(imm.get(), &k, &m);
  const double eps = cfg.real("geometry.epsilon");
  const int grid = static_cast<int>(cfg.integer("gauss.grid"));
  const int h1 = cfg.boolean("gauss.h1_zero") ? 1 : 0;

  std::string region_kind = cfg.text("gauss.region");
  if (region_kind == "auto") region_kind = m - k == 1 ? "tube" : "grassmann";
  barriers_gauss_audit audit{};
  nlohmann::ordered_json region_json;
  if (region_kind == "tube") {
    if (m - k != 1) throw CliError(kExitUsage, "range", "key 'gauss.region' = \"tube\" needs a hypersurface");
    const auto& circle = cfg.list("gauss.circle");
    int a = 0, b = m;  // default circle through e_1 and e_{m+1}
    if (!circle.empty()) {
      a = static_cast<int>(circle[0]) - 1;
      b = static_cast<int>(circle[1]) - 1;
      if (a > m || b > m) throw CliError(kExitUsage, "range", "key 'gauss.circle' exceeds the ambient dimension");
    }
    Region region = make_region(m + 1, a, b, eps);
    check(barriers_gauss_audit_sphere(imm.get(), region.get(), grid, h1, &audit));
    region_json = {{"kind", "tube"}, {"circle", {a + 1, b + 1}}};
  } else {
    if (m - k != 2) throw CliError(kExitUsage, "range", "key 'gauss.region' = \"grassmann\" needs codimension 2");
    // Base plane e_m ^ e_{m+1}; X1 turns e_m towards e_1.
    const int n = m + 1;
    const Matrix id = identity(n);
    std::vector<double> frame = id.columns(m - 1, 2);
    std::vector<double> normals = id.columns(0, m - 1);
    GPoint w = make_point(n, 2, frame);
    std::vector<double> c1(static_cast<std::size_t>(2 * (n - 2)), 0.0);
    c1[0] = 1.0;
    GTangent x1 = make_tangent(w.get(), normals.data(), c1);
    check(barriers_gauss_audit_grassmann(imm.get(), x1.get(), eps, grid, h1, &audit));
    region_json = {{"kind", "grassmann-main"}, {"base_axes", {m, m + 1}}, {"x1_target_axis", 1}};
  }

  Report r;
  r.json_name = "audit.json";
  r.summary = header("gauss audit", cfg);
  r.summary["kind"] = audit.kind;
  r.summary["grid"] = audit.grid;
  r.summary["epsilon"] = audit.epsilon;
  r.summary["min_margin"] = audit.min_margin;
  r.summary["worst_point"] = std::vector<double>(audit.worst_point, audit.worst_point + audit.worst_dim);
  r.summary["h1_zero_asserted"] = audit.h1_zero_asserted != 0;
  r.summary["verdict"] = audit.verdict;
  r.summary["region"] = region_json;
  emit_report(r, opts.out_dir);
  out << "min_margin " << format_real(audit.min_margin) << "\nverdict " << audit.verdict << "\n";
  return kExitOk;
}

}  // namespace

int batch_threads() {
  if (const char* env = std::getenv("BARRIERS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_command(const ExperimentConfig& cfg, const std::string& command, const RunOptions& opts, std::ostream& out) {
  validate(cfg, command);
  using Fn = int (*)(const ExperimentConfig&, const RunOptions&, std::ostream&);
  static const std::map<std::string, Fn> table = {
      {"grassmann geodesic", grassmann_geodesic}, {"grassmann tmax", grassmann_tmax},
      {"grassmann region", grassmann_region},     {"sphere region", sphere_region},
      {"sphere disconnect", sphere_disconnect},   {"quadric roundtrip", quadric_roundtrip},
      {"quadric chart", quadric_chart},           {"flow run", flow_run},
      {"gauss audit", gauss_audit}};
  if (command != "flow run" && opts.runs != 1)
    throw CliError(kExitUsage, "usage", "--runs applies to flow run only");
  return table.at(command)(cfg, opts, out);
}

}  // namespace cli
