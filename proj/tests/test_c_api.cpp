// Exercises the shared library through its C header only.
#include "barriers/barriers.h"
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

const double kPi = 3.14159265358979323846;

barriers_gpoint* std_plane(int n) {
  std::vector<double> f(static_cast<std::size_t>(n * 2), 0.0);
  f[0] = 1;      // column 0 = e1
  f[n + 1] = 1;  // column 1 = e2
  barriers_gpoint* w = nullptr;
  REQUIRE(barriers_gpoint_create(n, 2, f.data(), &w) == BARRIERS_OK);
  return w;
}

}  // namespace

TEST_CASE("status reporting") {
  CHECK(std::string(barriers_version()) == "0.1.0");
  CHECK(std::string(barriers_status_name(BARRIERS_ERR_ZERO_TANGENT)) == "zero-tangent");
  barriers_gpoint* w = nullptr;
  const double bad[4] = {1, 0, 1, 0};
  CHECK(barriers_gpoint_create(2, 2, bad, &w) == BARRIERS_ERR_INVALID_INPUT);
  CHECK(w == nullptr);
  CHECK(std::strlen(barriers_last_error()) > 0);
  CHECK(barriers_gpoint_create(4, 2, nullptr, &w) == BARRIERS_ERR_INVALID_INPUT);
}

TEST_CASE("Grassmannian through the C API") {
  barriers_gpoint* w = std_plane(4);
  double pl[6];
  REQUIRE(barriers_gpoint_plucker(w, pl, 6) == BARRIERS_OK);
  CHECK(pl[0] == 1.0);
  CHECK(barriers_gpoint_plucker(w, pl, 3) == BARRIERS_ERR_BUFFER_TOO_SMALL);

  const double root = std::sqrt(2.0) / 2;
  const double coeffs[4] = {root, 0, 0, root};  // row-major 2 x 2
  barriers_gtangent* x = nullptr;
  REQUIRE(barriers_gtangent_create(w, nullptr, coeffs, &x) == BARRIERS_OK);
  int rank = 0;
  double lambda[2];
  REQUIRE(barriers_gtangent_canonical(x, &rank, lambda, 2) == BARRIERS_OK);
  CHECK(rank == 2);
  CHECK(lambda[0] == doctest::Approx(root));
  double tx = 0;
  REQUIRE(barriers_t_max(x, &tx) == BARRIERS_OK);
  CHECK(std::abs(tx - kPi / (2 * std::sqrt(2.0))) < 1e-12);
  double err = 1;
  REQUIRE(barriers_gtangent_reconstruction_error(x, &err) == BARRIERS_OK);
  CHECK(err < 1e-12);

  barriers_gpoint* end = nullptr;
  int rescaled = -1;
  REQUIRE(barriers_geodesic(x, tx, &end, &rescaled) == BARRIERS_OK);
  CHECK(rescaled == 0);
  barriers_membership mem;
  REQUIRE(barriers_bg_contains(w, end, 0.0, &mem) == BARRIERS_OK);
  CHECK(mem == BARRIERS_BOUNDARY);
  double angles[2], dist = 0;
  REQUIRE(barriers_principal_angles(w, end, angles, 2, &dist) == BARRIERS_OK);
  CHECK(angles[0] + angles[1] == doctest::Approx(kPi / 2));

  const double zero[4] = {0, 0, 0, 0};
  barriers_gtangent* z = nullptr;
  CHECK(barriers_gtangent_create(w, nullptr, zero, &z) == BARRIERS_ERR_ZERO_TANGENT);
  int member = 0;
  double lo, hi;
  CHECK(barriers_main_region_probe(x, 0.3, w, 2048, &member, &lo, &hi) == BARRIERS_ERR_INVALID_DIRECTION);

  barriers_gpoint_destroy(end);
  barriers_gtangent_destroy(x);
  barriers_gpoint_destroy(w);
}

TEST_CASE("sphere region through the C API") {
  const double base[4] = {1, 0, 0, 0}, dir[4] = {0, 1, 0, 0};
  barriers_tube_region* r = nullptr;
  REQUIRE(barriers_tube_region_create(4, base, dir, 0.3, &r) == BARRIERS_OK);
  int inside = 0;
  double margin = 0;
  REQUIRE(barriers_tube_contains(r, base, &inside, &margin) == BARRIERS_OK);
  CHECK(inside == 1);
  CHECK(margin == doctest::Approx(kPi / 2 - 0.3));

  const double off[4] = {0, 0, 1, 0};
  double ts[8];
  std::size_t count = 9;
  REQUIRE(barriers_sweepout_leaf_find(r, off, 4096, ts, 8, &count) == BARRIERS_OK);
  CHECK(count == 0);
  double out[4];
  REQUIRE(barriers_retract_into_region(r, off, 1, out) == BARRIERS_OK);
  REQUIRE(barriers_tube_contains(r, out, &inside, &margin) == BARRIERS_OK);
  CHECK(std::abs(margin) < 1e-12);

  barriers_disconnection_spec spec{1, 0.4, 10000, 42, 12, 3.0, 1e-2};
  int comps = 0, raw = 0, surv = 0;
  REQUIRE(barriers_region_disconnection(r, &spec, &comps, &raw, &surv) == BARRIERS_OK);
  CHECK(comps == 2);
  CHECK(raw >= 2);
  spec.samples = 10;
  CHECK(barriers_region_disconnection(r, &spec, &comps, &raw, &surv) == BARRIERS_ERR_INVALID_INPUT);
  barriers_tube_region_destroy(r);

  double too_wide = 0;
  CHECK(barriers_tube_region_create(4, base, dir, 2.0, &r) == BARRIERS_ERR_INVALID_INPUT);
  (void)too_wide;
}

TEST_CASE("quadric through the C API") {
  barriers_gpoint* w = std_plane(4);
  double z[8];
  REQUIRE(barriers_grassmann_to_quadric(w, z, 8) == BARRIERS_OK);
  double res = 1;
  REQUIRE(barriers_quadric_residual(4, z, &res) == BARRIERS_OK);
  CHECK(res < 1e-15);
  double mh = 0, mhp = 1;
  REQUIRE(barriers_hyperplane_margins(4, z, &mh, &mhp) == BARRIERS_OK);
  CHECK(mh == doctest::Approx(std::sqrt(2.0)));
  CHECK(mhp == doctest::Approx(0.0));
  const double on_h[8] = {1, 0, 0, -1, 0, 0, 0, 0};  // [1 : -i : 0 : 0]
  double xi[4];
  CHECK(barriers_ho_chart(4, on_h, xi) == BARRIERS_ERR_CHART_DOMAIN);
  const double not_quadric[8] = {1, 0, 0, 0, 0, 0, 0, 0};
  barriers_gpoint* back = nullptr;
  CHECK(barriers_quadric_to_grassmann(4, not_quadric, &back) == BARRIERS_ERR_NOT_ON_QUADRIC);
  double a[3], b[3];
  REQUIRE(barriers_split_s2xs2(w, a, b) == BARRIERS_OK);
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(b[0] == doctest::Approx(1.0));
  barriers_gpoint_destroy(w);
}

TEST_CASE("flow through the C API") {
  barriers_mesh* mesh = nullptr;
  REQUIRE(barriers_mesh_create(BARRIERS_TORUS_GRID, 8, 8, 0, &mesh) == BARRIERS_OK);
  barriers_mesh_info info;
  REQUIRE(barriers_mesh_get_info(mesh, &info) == BARRIERS_OK);
  CHECK(info.vertices == 64);
  CHECK(info.edges == 128);
  CHECK(info.euler_characteristic == 0);

  barriers_flow_spec spec;
  barriers_flow_spec_defaults(&spec);
  spec.init = BARRIERS_INIT_CONSTANT;
  barriers_flow_trace* trace = nullptr;
  REQUIRE(barriers_flow_run(mesh, &spec, &trace) == BARRIERS_OK);
  barriers_flow_summary sum;
  REQUIRE(barriers_flow_trace_summary(trace, &sum) == BARRIERS_OK);
  CHECK(sum.status == BARRIERS_FLOW_CONVERGED_CONSTANT);
  CHECK(sum.iters <= 1);
  CHECK(barriers_flow_trace_rows(trace) >= 1);
  barriers_trace_row row;
  CHECK(barriers_flow_trace_row(trace, 0, &row) == BARRIERS_OK);
  CHECK(barriers_flow_trace_row(trace, 1000, &row) == BARRIERS_ERR_INVALID_INPUT);
  barriers_flow_trace_destroy(trace);

  spec.init = BARRIERS_INIT_CAP;
  spec.max_iters = 20000;
  REQUIRE(barriers_flow_run(mesh, &spec, &trace) == BARRIERS_OK);
  REQUIRE(barriers_flow_trace_summary(trace, &sum) == BARRIERS_OK);
  CHECK(std::string(barriers_flow_status_name(sum.status)) == "converged-constant");
  CHECK(sum.energy_monotone == 1);
  barriers_flow_trace_destroy(trace);

  spec.step = -1;
  CHECK(barriers_flow_run(mesh, &spec, &trace) == BARRIERS_ERR_CONFIG);
  barriers_mesh_destroy(mesh);
  CHECK(barriers_mesh_create(BARRIERS_ICOSPHERE, 0, 0, 1, &mesh) == BARRIERS_ERR_CONFIG);
}

TEST_CASE("Gauss maps through the C API") {
  barriers_immersion_spec s{BARRIERS_IMM_EQUATOR, 2, 3, 1, 1, 0.8};
  barriers_immersion* eq = nullptr;
  REQUIRE(barriers_immersion_create(&s, &eq) == BARRIERS_OK);
  const double base[4] = {0, 0, 0, 1}, dir[4] = {1, 0, 0, 0};
  barriers_tube_region* r = nullptr;
  REQUIRE(barriers_tube_region_create(4, base, dir, 0.3, &r) == BARRIERS_OK);
  barriers_gauss_audit audit;
  REQUIRE(barriers_gauss_audit_sphere(eq, r, 16, 1, &audit) == BARRIERS_OK);
  CHECK(std::abs(audit.min_margin - (kPi / 2 - 0.3)) < 1e-9);
  CHECK(std::string(audit.verdict).rfind("hypotheses-met", 0) == 0);
  CHECK(std::string(audit.kind) == "equator");

  s.kind = BARRIERS_IMM_CLIFFORD_TORUS;
  barriers_immersion* ct = nullptr;
  REQUIRE(barriers_immersion_create(&s, &ct) == BARRIERS_OK);
  double tension = 1;
  REQUIRE(barriers_gauss_map_tension(ct, 64, &tension) == BARRIERS_OK);
  CHECK(tension < 1e-3);
  const double uv[2] = {0.3, 0.4};
  double h = 1;
  REQUIRE(barriers_mean_curvature(ct, uv, &h) == BARRIERS_OK);
  CHECK(h < 1e-6);

  barriers_immersion* inc = nullptr;
  REQUIRE(barriers_immersion_include(ct, 1, &inc) == BARRIERS_OK);
  int k = 0, m = 0;
  barriers_immersion_dims(inc, &k, &m);
  CHECK(k == 2);
  CHECK(m == 4);
  double g[5];
  CHECK(barriers_hypersurface_gauss(inc, uv, g) == BARRIERS_ERR_INVALID_INPUT);

  barriers_immersion_destroy(inc);
  barriers_immersion_destroy(ct);
  barriers_immersion_destroy(eq);
  barriers_tube_region_destroy(r);
}

TEST_CASE("random helpers are deterministic") {
  double a[12], b[12];
  REQUIRE(barriers_sample_sphere(4, 9, 3, a) == BARRIERS_OK);
  REQUIRE(barriers_sample_sphere(4, 9, 3, b) == BARRIERS_OK);
  CHECK(std::memcmp(a, b, sizeof a) == 0);
  double rot[9];
  REQUIRE(barriers_random_rotation(3, 5, rot) == BARRIERS_OK);
  const double det = rot[0] * (rot[4] * rot[8] - rot[7] * rot[5]) - rot[3] * (rot[1] * rot[8] - rot[7] * rot[2]) +
                     rot[6] * (rot[1] * rot[5] - rot[4] * rot[2]);
  CHECK(det == doctest::Approx(1.0));
}
