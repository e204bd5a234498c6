#include "barriers/error.hpp"
#include "barriers/gauss.hpp"
#include "barriers/harmonic.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <numbers>

using namespace barriers;
using std::numbers::pi;

namespace {

Vec e(int n, int i) { return Vec::Unit(n, i); }

Vec uv(double u, double v) { return (Vec(2) << u, v).finished(); }

SphereTubeRegion tube(int dim, int a, int b, double eps) {
  return SphereTubeRegion(GreatCircle(SpherePoint(e(dim, a)), e(dim, b)), eps);
}

GrassmannRegion grassmann_region(int n, double eps) {
  // Base e_{n-1} ^ e_n, X1 rotating e_{n-1} toward e1.
  Mat f = Mat::Zero(n, 2);
  f(n - 2, 0) = f(n - 1, 1) = 1;
  const GrassmannPoint w0{Frame(f)};
  Mat nf = Mat::Zero(n, n - 2);
  for (int i = 0; i < n - 2; ++i) nf(i, i) = 1;
  Mat a = Mat::Zero(2, n - 2);
  a(0, 0) = 1;
  return GrassmannRegion{kozlov_canonical(w0, Frame(nf), a), eps};
}

}  // namespace

TEST_CASE("Clifford torus") {
  const auto s = clifford_torus(0, 0);
  const double r = 1 / std::sqrt(2.0);
  CHECK((s.position - Vec((Vec(4) << r, 0, r, 0).finished())).norm() < 1e-15);
  CHECK((s.normal - Vec((Vec(4) << r, 0, -r, 0).finished())).norm() < 1e-15);
  CHECK(std::abs(s.normal.dot(s.position)) < 1e-12);
  CHECK((s.tangents.transpose() * s.normal).cwiseAbs().maxCoeff() < 1e-12);

  const auto imm = ParametricImmersion::clifford_torus();
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> ang(0, 2 * pi);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double u = ang(rng), v = ang(rng);
    worst = std::max(worst, mean_curvature_norm(imm, uv(u, v)));
    const Vec g = hypersurface_gauss(imm, uv(u, v)).coords();
    CHECK((g - clifford_torus(u, v).normal).norm() < 1e-12);
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("equator and distance sphere") {
  const auto eq = ParametricImmersion::equator(2, 3);
  const Mat grid = parameter_grid(eq, 16);
  std::vector<Vec> images;
  for (Eigen::Index c = 0; c < grid.cols(); ++c) {
    try {
      images.push_back(hypersurface_gauss(eq, grid.col(c)).coords());
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::ImmersionDegeneracy);  // chart poles
    }
  }
  REQUIRE(images.size() > 100);
  for (const Vec& g : images) CHECK((g - e(4, 3)).norm() < 1e-10);
  CHECK(mean_curvature_norm(eq, uv(0.7, 1.1)) < 1e-6);

  const auto ds = ParametricImmersion::distance_sphere(0.8, 3);
  const double h_exact = std::sqrt(1 - 0.64) / 0.8;  // cot of the geodesic radius
  CHECK(h_exact == doctest::Approx(0.75));
  for (const Vec& p : {uv(0.7, 1.1), uv(2.0, 0.3), uv(1.5, 5.0)})
    CHECK(mean_curvature_norm(ds, p) == doctest::Approx(h_exact).epsilon(0.01));

  const auto gc = ParametricImmersion::generalized_clifford(1, 2);
  CHECK(gc.dim() == 3);
  CHECK(gc.sphere_dim() == 4);
  CHECK(mean_curvature_norm(gc, (Vec(3) << 0.4, 1.0, 2.2).finished()) < 1e-6);
}

TEST_CASE("immersion invariants on the grid") {
  for (const auto& imm : {ParametricImmersion::clifford_torus(), ParametricImmersion::generalized_clifford(1, 2),
                          ParametricImmersion::distance_sphere(0.8, 3)}) {
    const Mat grid = parameter_grid(imm, 9);
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      CHECK(std::abs(imm.position(grid.col(c)).norm() - 1) < 1e-10);
    }
  }
  // Analytic derivatives agree with central differences.
  const auto gc = ParametricImmersion::generalized_clifford(2, 1);
  const Vec p = (Vec(3) << 0.9, 0.4, 2.0).finished();
  const Mat j = gc.jacobian(p);
  for (int a = 0; a < 3; ++a) {
    Vec pp = p, pm = p;
    pp[a] += 1e-6;
    pm[a] -= 1e-6;
    CHECK((j.col(a) - (gc.position(pp) - gc.position(pm)) / 2e-6).norm() < 1e-8);
  }
}

TEST_CASE("normal orientation and the codimension-2 Gauss map") {
  const auto ct = ParametricImmersion::clifford_torus();
  const auto inc = ct.include_equatorially(1);
  CHECK(inc.codim() == 2);
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> ang(0, 2 * pi);
  for (int i = 0; i < 100; ++i) {
    const Vec p = uv(ang(rng), ang(rng));
    const GrassmannPoint w = normal_plane_gauss(inc, p);
    Vec g(5);
    g << hypersurface_gauss(ct, p).coords(), 0;
    Mat f(5, 2);
    f << g, e(5, 4);
    CHECK((w.plucker().coords() - plucker(Frame(f)).coords()).norm() < 1e-10);

    const Vec x = inc.position(p);
    const Mat t = inc.jacobian(p);
    const Mat nf = normal_frame(inc, p);
    CHECK((nf.transpose() * x).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((nf.transpose() * t).cwiseAbs().maxCoeff() < 1e-10);
    Mat full(5, 5);
    full << x, t, nf;
    CHECK(full.determinant() > 0);
  }
  // Equatorial S^2 in S^4 has constant normal plane e4 ^ e5.
  const auto eq = ParametricImmersion::equator(2, 4);
  Mat f(5, 2);
  f << e(5, 3), e(5, 4);
  CHECK((normal_plane_gauss(eq, uv(0.8, 2.0)).plucker().coords() - plucker(Frame(f)).coords()).norm() < 1e-10);

  CHECK_THROWS_AS(normal_plane_gauss(ct, uv(0, 0)), Error);
  CHECK_THROWS_AS(hypersurface_gauss(inc, uv(0, 0)), Error);
}

TEST_CASE("degenerate user immersion") {
  const auto bad = ParametricImmersion::user(2, 3, {{0, 1, false}, {0, 1, false}},
                                             [](const Vec&) { return Vec(Vec::Unit(4, 0)); });
  CHECK_THROWS_AS(hypersurface_gauss(bad, uv(0.5, 0.5)), Error);
  try {
    hypersurface_gauss(bad, uv(0.5, 0.5));
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ImmersionDegeneracy);
  }
  // A user-grid Clifford torus matches the analytic builder.
  const auto user = ParametricImmersion::user(2, 3, {{0, 2 * pi, true}, {0, 2 * pi, true}}, [](const Vec& a) {
    return Vec(clifford_torus(a[0], a[1]).position);
  });
  CHECK((hypersurface_gauss(user, uv(0.3, 1.2)).coords() - clifford_torus(0.3, 1.2).normal).norm() < 1e-8);
  CHECK(mean_curvature_norm(user, uv(0.3, 1.2)) < 1e-5);
}

TEST_CASE("Gauss map tension of the Clifford torus") {
  const auto ct = ParametricImmersion::clifford_torus();
  for (int n : {32, 64, 128}) CHECK(gauss_map_tension(ct, n) < 1e-3);
  // Each component of the Gauss map is a discrete eigenfunction of the grid
  // Laplacian, so the tension is at rounding level.
  CHECK(gauss_map_tension(ct, 64) < 1e-10);
}

TEST_CASE("Gauss image audits") {
  const double eps = 0.3;
  const auto eq = ParametricImmersion::equator(2, 3);
  // Barrier normals e4, e1: the constant image e4 is as far from it as possible.
  const auto a = gauss_image_audit(eq, tube(4, 3, 0, eps), 16, true);
  CHECK(std::abs(a.min_margin - (pi / 2 - eps)) < 1e-9);
  CHECK(a.verdict == kVerdictHypothesesMet);
  CHECK(a.kind == "equator");
  const auto a_noh1 = gauss_image_audit(eq, tube(4, 3, 0, eps), 16, false);
  CHECK(a_noh1.verdict.find("topological") != std::string::npos);

  const auto ct = ParametricImmersion::clifford_torus();
  const auto c = gauss_image_audit(ct, tube(4, 0, 2, eps), 64, true);
  CHECK(c.min_margin <= 0);
  CHECK(c.verdict.find("Gauss-image") != std::string::npos);
  CHECK(std::abs(gauss_margin(ct, tube(4, 0, 2, eps), c.worst_point) - c.min_margin) < 1e-9);
  // The worst image point sits on the barrier.
  const Vec g = clifford_torus(pi / 2, pi / 2).normal;
  CHECK(subsphere_distance(g, tube(4, 0, 2, eps).barrier()) == doctest::Approx(0.0));

  // Codimension 2 against the main region.
  const auto eq2 = ParametricImmersion::equator(2, 4);
  const auto a2 = gauss_image_audit(eq2, grassmann_region(5, eps), 8, true);
  CHECK(std::abs(a2.min_margin - (pi / 2 - eps)) < 1e-9);
  CHECK(a2.verdict == kVerdictHypothesesMet);
  CHECK(std::abs(gauss_margin(eq2, grassmann_region(5, eps), a2.worst_point) - a2.min_margin) < 1e-9);

  CHECK_THROWS_AS(gauss_image_audit(eq, tube(5, 0, 1, eps), 8, true), Error);
  CHECK_THROWS_AS(gauss_image_audit(eq, grassmann_region(5, eps), 8, true), Error);
}
