#include "barriers/error.hpp"
#include "barriers/harmonic.hpp"
#include "barriers/quadric.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <numbers>

using namespace barriers;
using std::numbers::pi;

namespace {

DomainMesh torus(int n) { return build_domain({DomainKind::TorusGrid, n, n, 3}); }
DomainMesh ico(int level) { return build_domain({DomainKind::Icosphere, 32, 32, level}); }

Vec e(int n, int i) { return Vec::Unit(n, i); }

// Two vertices joined by one unit edge, unit masses.
DomainMesh two_vertex_mesh() {
  DomainMesh m;
  m.coords = Mat::Zero(2, 2);
  m.edges = {{0, 1, 1.0}};
  m.masses = Vec::Ones(2);
  m.adjacency = {{{1, 1.0}}, {{0, 1.0}}};
  return m;
}

// Oracle: triangle areas summed from vertex positions.
double flat_area(const DomainMesh& m) {
  double a = 0;
  for (const auto& f : m.faces) {
    const Eigen::Vector3d p = m.coords.col(f[0]), q = m.coords.col(f[1]), r = m.coords.col(f[2]);
    a += 0.5 * (q - p).cross(r - p).norm();
  }
  return a;
}

}  // namespace

TEST_CASE("domain meshes") {
  const auto t8 = torus(8);
  CHECK(t8.vertex_count() == 64);
  CHECK(t8.edges.size() == 128);
  CHECK(t8.euler_characteristic() == 0);
  CHECK(t8.total_mass() == doctest::Approx(4 * pi * pi));
  for (const Edge& ed : t8.edges) CHECK(ed.weight == 1.0);

  const auto i2 = ico(2);
  CHECK(i2.vertex_count() == 162);
  CHECK(i2.euler_characteristic() == 2);

  const auto i4 = ico(4);
  CHECK(i4.total_mass() == doctest::Approx(4 * pi).epsilon(0.01));
  CHECK(flat_area(i4) == doctest::Approx(i4.total_mass()).epsilon(1e-12));
  for (int v = 0; v < i4.vertex_count(); ++v) CHECK(std::abs(i4.coords.col(v).norm() - 1) < 1e-12);

  CHECK_THROWS_AS(build_domain({DomainKind::TorusGrid, 4, 8, 3}), Error);
  CHECK_THROWS_AS(build_domain({DomainKind::Icosphere, 8, 8, 1}), Error);
}

TEST_CASE("target manifolds") {
  const auto s2 = TargetManifold::sphere(2);
  CHECK((s2.project(Vec::Constant(3, 2.0)).norm() - 1) < 1e-15);
  CHECK(s2.distance(e(3, 0), e(3, 1)) == doctest::Approx(pi / 2));

  const auto prod = TargetManifold::product(2, 2, 1.0);
  Vec x(6);
  x << 3, 0, 0, 0, 0, -2;
  const Vec px = prod.project(x);
  CHECK(prod.is_member(px));
  CHECK(std::abs(px.head(3).norm() - 1) < 1e-15);
  CHECK(std::abs(px.tail(3).norm() - 1) < 1e-15);

  // Chordal distance on the G(2,4) target equals the Plücker distance.
  const auto g = TargetManifold::grassmann_2_4();
  std::mt19937_64 rng(41);
  for (int i = 0; i < 50; ++i) {
    const GrassmannPoint w1(Frame(oracle::orthonormal(rng, 4, 2))), w2(Frame(oracle::orthonormal(rng, 4, 2)));
    const auto [a1, b1] = split_s2xs2(w1);
    const auto [a2, b2] = split_s2xs2(w2);
    Vec v1(6), v2(6);
    v1 << a1, b1;
    v2 << a2, b2;
    const double chord = g.scale() * (v1 - v2).norm();
    CHECK(chord == doctest::Approx((w1.plucker().coords() - w2.plucker().coords()).norm()).epsilon(1e-12));
  }
}

TEST_CASE("Dirichlet energy calibration") {
  const auto s2 = TargetManifold::sphere(2);
  const auto t = torus(32);
  CHECK(dirichlet_energy(t, constant_map(t, e(3, 2)), s2) == 0.0);

  const auto i4 = ico(4);
  CHECK(dirichlet_energy(i4, identity_map(i4), s2) == doctest::Approx(4 * pi).epsilon(0.02));
  const auto t128 = torus(128);
  CHECK(dirichlet_energy(t128, great_circle_map(t128), s2) == doctest::Approx(2 * pi * pi).epsilon(0.02));
}

TEST_CASE("tension field") {
  const auto s2 = TargetManifold::sphere(2);
  const auto t = torus(16);
  CHECK(max_tension_norm(t, constant_map(t, e(3, 0)), s2) == 0.0);

  const auto t128 = torus(128);
  CHECK(max_tension_norm(t128, great_circle_map(t128), s2) < 1e-3);

  // Tangency.
  const auto i3 = ico(3);
  const DiscreteMap id = identity_map(i3);
  const Mat tau = tension_field(i3, id, s2);
  for (int v = 0; v < i3.vertex_count(); ++v) CHECK(std::abs(tau.col(v).dot(id.values.col(v))) < 1e-12);

  // Refinement: the identity's tension shrinks with every level. The observed
  // rate is first order, see the notes in the README.
  double prev = max_tension_norm(i3, id, s2);
  for (int level : {4, 5}) {
    const auto m = ico(level);
    const double cur = max_tension_norm(m, identity_map(m), s2);
    CHECK(prev / cur > 1.5);
    prev = cur;
  }
}

TEST_CASE("oscillation") {
  const auto s2 = TargetManifold::sphere(2);
  const auto i3 = ico(3);
  CHECK(oscillation(constant_map(i3, e(3, 1)), s2) == 0.0);
  CHECK(oscillation(identity_map(i3), s2) == doctest::Approx(pi).epsilon(0.02));
  DiscreteMap two{Mat(3, 2)};
  const Vec p = e(3, 0), q = (e(3, 0) + e(3, 1)).normalized();
  two.values << p, q;
  CHECK(oscillation(two, s2) == doctest::Approx(pi / 4));
  // Sampled regime above 2000 vertices.
  const auto i5 = ico(5);
  CHECK(oscillation(identity_map(i5), s2) == doctest::Approx(pi).epsilon(0.02));
}

TEST_CASE("flow step") {
  const auto s2 = TargetManifold::sphere(2);
  FlowConfig cfg;
  cfg.step = 0.2;

  const auto t = torus(8);
  FlowState c{constant_map(t, e(3, 2)), 0.0, cfg.step};
  const auto out = flow_step(t, s2, cfg, c);
  CHECK(out.accepted);
  CHECK((c.map.values - constant_map(t, e(3, 2)).values).norm() == 0.0);

  // Hand computation on one edge.
  const auto m = two_vertex_mesh();
  const Vec pole = e(3, 2);
  const Vec off = Vec((Vec(3) << 0.3, 0.0, 1.0).finished()).normalized();
  DiscreteMap mp{Mat(3, 2)};
  mp.values << pole, off;
  FlowState st{mp, dirichlet_energy(m, mp, s2), 0.2};
  const auto o = flow_step(m, s2, cfg, st);
  CHECK(o.accepted);
  CHECK(o.energy_after < o.energy_before);
  auto tangential = [](const Vec& at, const Vec& v) { return Vec(v - at.dot(v) * at); };
  const Vec want1 = (off + 0.2 * tangential(off, pole - off)).normalized();
  const Vec want0 = (pole + 0.2 * tangential(pole, off - pole)).normalized();
  CHECK((st.map.values.col(1) - want1).norm() < 1e-15);
  CHECK((st.map.values.col(0) - want0).norm() < 1e-15);
  CHECK(oracle::arc(st.map.values.col(1), pole) < oracle::arc(off, pole));
  for (int v = 0; v < 2; ++v) CHECK(std::abs(st.map.values.col(v).norm() - 1) < 1e-12);
}

TEST_CASE("known harmonic maps are near-fixed points") {
  const auto s2 = TargetManifold::sphere(2);
  FlowConfig cfg;
  {
    const auto i5 = ico(5);
    const DiscreteMap id = identity_map(i5);
    cfg.step = 0.1;
    FlowState st{id, dirichlet_energy(i5, id, s2), cfg.step};
    for (int k = 0; k < 1000; ++k) flow_step(i5, s2, cfg, st);
    CHECK((st.map.values - id.values).colwise().norm().maxCoeff() < 1e-3);
  }
  {
    const auto t128 = torus(128);
    const DiscreteMap gc = great_circle_map(t128);
    cfg.step = 0.2;
    FlowState st{gc, dirichlet_energy(t128, gc, s2), cfg.step};
    for (int k = 0; k < 1000; ++k) flow_step(t128, s2, cfg, st);
    CHECK((st.map.values - gc.values).colwise().norm().maxCoeff() < 1e-3);
  }
}

TEST_CASE("run_flow") {
  const auto s2 = TargetManifold::sphere(2);
  const auto t = torus(32);
  FlowConfig cfg;

  const auto c = run_flow(t, constant_map(t, e(3, 0)), s2, cfg);
  CHECK(c.status == FlowStatus::ConvergedConstant);
  CHECK(c.iters <= 1);
  CHECK(c.rows.size() == 1);

  // Cap-supported start confined to the tube region collapses.
  const SphereTubeRegion region(GreatCircle(SpherePoint(e(3, 0)), e(3, 1)), 0.3);
  cfg.mode = FlowMode::Constrained;
  cfg.region = region;
  const DiscreteMap init = random_cap_map(t, SpherePoint(e(3, 0)), 0.4, 7);
  const auto r = run_flow(t, init, s2, cfg);
  CHECK(r.status == FlowStatus::ConvergedConstant);
  CHECK(r.final_energy < 1e-4 * r.initial_energy);
  CHECK(r.final_oscillation < 1e-2);
  CHECK(r.energy_monotone);
  CHECK(r.max_constraint_residual < 1e-9);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].iter > r.rows[i - 1].iter);
    CHECK(r.rows[i].energy <= r.rows[i - 1].energy * (1 + 1e-12));
  }
  for (int v = 0; v < t.vertex_count(); ++v) CHECK(tube_margin(region, r.final_map.values.col(v)) >= -1e-12);

  // Determinism.
  const auto r2 = run_flow(t, init, s2, cfg);
  CHECK(r2.iters == r.iters);
  CHECK(r2.final_energy == r.final_energy);

  // Constrained mode rejects a start outside the region.
  CHECK_THROWS_AS(run_flow(t, constant_map(t, e(3, 2)), s2, cfg), Error);
  cfg.step = -1;
  CHECK_THROWS_AS(run_flow(t, init, s2, cfg), Error);
}

TEST_CASE("free flow logs barrier events") {
  const auto s2 = TargetManifold::sphere(2);
  const auto t = torus(16);
  FlowConfig cfg;
  cfg.max_iters = 200;
  cfg.region = SphereTubeRegion(GreatCircle(SpherePoint(e(3, 0)), e(3, 1)), 0.3);
  // A cap around the barrier point e3: every vertex starts outside the region.
  const auto r = run_flow(t, random_cap_map(t, SpherePoint(e(3, 2)), 0.2, 3), s2, cfg);
  CHECK(r.barrier_events.size() >= static_cast<std::size_t>(t.vertex_count()));
  for (const auto& ev : r.barrier_events) CHECK(ev.depth > 0);
}

TEST_CASE("product and Grassmann targets") {
  const auto t = torus(16);
  FlowConfig cfg;
  cfg.max_iters = 20000;
  for (const auto& target : {TargetManifold::product(2, 2, 1.0), TargetManifold::grassmann_2_4()}) {
    std::mt19937_64 rng(43);
    DiscreteMap m{Mat(6, t.vertex_count())};
    const auto a = random_cap_map(t, SpherePoint(e(3, 0)), 0.4, 1);
    const auto b = random_cap_map(t, SpherePoint(e(3, 2)), 0.4, 2);
    m.values.topRows(3) = a.values;
    m.values.bottomRows(3) = b.values;
    const auto r = run_flow(t, m, target, cfg);
    CHECK(r.status == FlowStatus::ConvergedConstant);
    CHECK(r.energy_monotone);
    CHECK(r.max_constraint_residual < 1e-9);
  }
  DiscreteMap bad{Mat::Ones(6, t.vertex_count())};
  CHECK_THROWS_AS(validate_map(t, bad, TargetManifold::product(2, 2, 1.0)), Error);
}
