#include "barriers/error.hpp"
#include "barriers/grassmann.hpp"
#include "barriers/sphere.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <numbers>

using namespace barriers;
using std::numbers::pi;

namespace {

Vec e(int n, int i) { return Vec::Unit(n, i); }

Mat cols(std::initializer_list<Vec> vs) {
  Mat m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
  int j = 0;
  for (const Vec& v : vs) m.col(j++) = v;
  return m;
}

GrassmannPoint plane(const Vec& a, const Vec& b) { return GrassmannPoint(Frame(cols({a, b}))); }

// A random point with an explicit normal frame.
struct Based {
  GrassmannPoint w;
  Frame normals;
};

Based random_based(std::mt19937_64& rng, int n, int p) {
  const Mat q = oracle::rotation(rng, n);
  return Based{GrassmannPoint(Frame(q.leftCols(p))), Frame(q.rightCols(n - p))};
}

GrassmannTangent random_unit_tangent(std::mt19937_64& rng, const Based& b) {
  Mat a = oracle::gaussian(rng, b.w.p(), b.w.n() - b.w.p());
  a /= a.norm();
  return kozlov_canonical(b.w, b.normals, a);
}

// Oracle for oriented principal angles: unoriented SVD angles, largest one
// reflected when the alignment determinant is negative.
std::vector<double> oriented_angles(const Mat& f1, const Mat& f2) {
  const Vec u = oracle::unoriented_angles(f1, f2);
  std::vector<double> a(u.data(), u.data() + u.size());
  if ((f1.transpose() * f2).determinant() < 0) a.front() = pi - a.front();
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

}  // namespace

TEST_CASE("eta basis") {
  const GrassmannPoint w = standard_point(4, 2);
  const Frame normals(cols({e(4, 2), e(4, 3)}));
  const auto eta = eta_basis(w, normals);
  REQUIRE(eta.size() == 4);
  const PVector expect[4] = {wedge(cols({e(4, 2), e(4, 1)})), wedge(cols({e(4, 3), e(4, 1)})),
                             wedge(cols({e(4, 0), e(4, 2)})), wedge(cols({e(4, 0), e(4, 3)}))};
  for (int i = 0; i < 4; ++i) CHECK((eta[i].coords() - expect[i].coords()).norm() == 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::abs(pinner(eta[i], eta[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
  CHECK_THROWS_AS(eta_basis(w, Frame(cols({e(4, 1), e(4, 3)}))), Error);
}

TEST_CASE("Kozlov canonical form examples") {
  const GrassmannPoint w = standard_point(4, 2);
  const Frame normals(cols({e(4, 2), e(4, 3)}));
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1;
  const auto x1 = kozlov_canonical(w, normals, a);
  CHECK(x1.rank() == 1);
  CHECK(x1.lambda()[0] == doctest::Approx(1.0));

  Mat a2 = Mat::Zero(2, 2);
  a2(0, 0) = a2(1, 1) = std::sqrt(2.0) / 2;
  const auto x2 = kozlov_canonical(w, normals, a2);
  CHECK(x2.rank() == 2);
  CHECK(x2.lambda()[0] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
  CHECK(x2.lambda()[1] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));

  CHECK_THROWS_AS(kozlov_canonical(w, normals, Mat::Zero(2, 2)), Error);
  try {
    kozlov_canonical(w, normals, Mat::Zero(2, 2));
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ZeroTangent);
  }
  CHECK_THROWS_AS(kozlov_canonical(w, normals, Mat::Zero(2, 3)), Error);
}

TEST_CASE("Kozlov reconstruction and gauge invariance") {
  std::mt19937_64 rng(21);
  for (auto [n, p] : {std::pair{4, 2}, {5, 2}, {6, 3}, {5, 3}}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Based b = random_based(rng, n, p);
      const Mat a = oracle::gaussian(rng, p, n - p);
      const auto x = kozlov_canonical(b.w, b.normals, a);
      CHECK((x.reconstruct_coeffs() - a).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(x.norm() * x.norm() - a.squaredNorm()) < 1e-10);
      const Mat rt = x.rotated_tangent_frame(), rn = x.rotated_normal_frame();
      CHECK((rt.transpose() * rt - Mat::Identity(p, p)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((rn.transpose() * rn - Mat::Identity(n - p, n - p)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(wedge(rt).coords().dot(b.w.plucker().coords()) - 1) < 1e-12);

      // Re-gauge both frames; the coefficients transform as R^T A S.
      const Mat r = oracle::gauge(rng, p), s = oracle::gauge(rng, n - p);
      const GrassmannPoint w2(Frame(b.w.frame().matrix() * r));
      const auto y = kozlov_canonical(w2, Frame(b.normals.matrix() * s), r.transpose() * a * s);
      CHECK((y.lambda() - x.lambda()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((y.as_pvector().coords() - x.as_pvector().coords()).norm() < 1e-10);
      CHECK(std::abs(t_max(y) - t_max(x)) < 1e-10);
      CHECK((grassmann_geodesic(y, 0.3).point.plucker().coords() - grassmann_geodesic(x, 0.3).point.plucker().coords())
                .norm() < 1e-10);
    }
  }
}

TEST_CASE("tangent as a p-vector is orthogonal to the base") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Based b = random_based(rng, 5, 2);
    const auto x = random_unit_tangent(rng, b);
    CHECK(std::abs(pinner(x.as_pvector(), b.w.plucker())) < 1e-12);
    CHECK(x.as_pvector().norm() == doctest::Approx(1.0).epsilon(1e-12));
    // Derivative of the geodesic at 0 is X.
    const double h = 1e-6;
    const Vec fd = (grassmann_geodesic(x, h).point.plucker().coords() -
                    grassmann_geodesic(x, -h).point.plucker().coords()) / (2 * h);
    CHECK((fd - x.as_pvector().coords()).norm() < 1e-8);
  }
}

TEST_CASE("geodesic examples") {
  const GrassmannPoint w = standard_point(4, 2);
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1;
  const auto x = kozlov_canonical(w, Frame(cols({e(4, 2), e(4, 3)})), a);
  const auto half = grassmann_geodesic(x, pi / 2);
  CHECK_FALSE(half.rescaled);
  CHECK((half.point.plucker().coords() - wedge(cols({e(4, 2), e(4, 1)})).coords()).norm() < 1e-15);
  const auto full = grassmann_geodesic(x, pi);
  CHECK((full.point.plucker().coords() + w.plucker().coords()).norm() < 1e-15);

  const auto big = kozlov_canonical(w, Frame(cols({e(4, 2), e(4, 3)})), 3 * a);
  const auto g = grassmann_geodesic(big, pi / 2);
  CHECK(g.rescaled);
  CHECK((g.point.plucker().coords() - half.point.plucker().coords()).norm() < 1e-15);
}

TEST_CASE("principal angles and distance") {
  const GrassmannPoint w = standard_point(4, 2);
  const auto same = principal_angles(w, w);
  CHECK(same.angles == std::vector<double>{0.0, 0.0});
  CHECK(same.distance == 0.0);

  const auto pa = principal_angles(w, plane(e(4, 0), e(4, 2)));
  CHECK(pa.angles[0] == doctest::Approx(pi / 2));
  CHECK(pa.angles[1] == doctest::Approx(0.0));
  CHECK(pa.distance == doctest::Approx(pi / 2));
  CHECK(geodesic_distance(w, plane(e(4, 2), e(4, 1))) == doctest::Approx(pi / 2));
  CHECK(geodesic_distance(w, plane(e(4, 1), e(4, 0))) == doctest::Approx(pi));
  CHECK_THROWS_AS(principal_angles(w, standard_point(5, 2)), Error);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat f1 = oracle::orthonormal(rng, 5, 2), f2 = oracle::orthonormal(rng, 5, 2);
    const auto got = principal_angles(GrassmannPoint(Frame(f1)), GrassmannPoint(Frame(f2)));
    const auto want = oriented_angles(f1, f2);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(got.angles[i] - want[i]) < 1e-7);
    // Gauge invariance.
    const auto rg = principal_angles(GrassmannPoint(Frame(f1 * oracle::gauge(rng, 2))),
                                     GrassmannPoint(Frame(f2 * oracle::gauge(rng, 2))));
    for (int i = 0; i < 2; ++i) CHECK(std::abs(got.angles[i] - rg.angles[i]) < 1e-10);
  }
}

TEST_CASE("small-t principal angles follow the rates") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const Based b = random_based(rng, 6, 3);
    const auto x = random_unit_tangent(rng, b);
    const double t = 0.2;
    const auto pa = principal_angles(b.w, grassmann_geodesic(x, t).point);
    for (int i = 0; i < x.rank(); ++i) CHECK(std::abs(pa.angles[i] - x.lambda()[i] * t) < 1e-10);
  }
}

TEST_CASE("t_max") {
  const GrassmannPoint w = standard_point(4, 2);
  const Frame normals(cols({e(4, 2), e(4, 3)}));
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1;
  CHECK(std::abs(t_max(kozlov_canonical(w, normals, a)) - pi / 2) < 1e-12);
  a(1, 1) = 1;
  a /= std::sqrt(2.0);
  CHECK(std::abs(t_max(kozlov_canonical(w, normals, a)) - pi / (2 * std::sqrt(2.0))) < 1e-12);
  CHECK(t_max(kozlov_canonical(w, normals, a)) == doctest::Approx(1.110721).epsilon(1e-6));
  Mat c = Mat::Zero(2, 2);
  c(0, 0) = 0.8;
  c(1, 1) = 0.6;
  CHECK(std::abs(t_max(kozlov_canonical(w, normals, c)) - pi / 2.8) < 1e-12);
}

TEST_CASE("unit-speed geodesics") {
  std::mt19937_64 rng(25);
  for (auto [n, p] : {std::pair{4, 2}, {5, 2}, {6, 3}}) {
    for (int trial = 0; trial < 30; ++trial) {
      const Based b = random_based(rng, n, p);
      const auto x = random_unit_tangent(rng, b);
      const double tx = t_max(x);
      for (double f : {0.1, 0.5, 0.9}) {
        CHECK(std::abs(geodesic_distance(b.w, grassmann_geodesic(x, f * tx).point) - f * tx) < 1e-8);
        const double s = 0.05 * tx;
        CHECK(std::abs(geodesic_distance(grassmann_geodesic(x, s).point, grassmann_geodesic(x, f * tx).point) -
                       (f * tx - s)) < 1e-8);
      }
    }
  }
}

TEST_CASE("bg_contains") {
  const GrassmannPoint w = standard_point(4, 2);
  CHECK(bg_contains(w, w) == Membership::Inside);
  CHECK(bg_contains(w, plane(e(4, 2), e(4, 3))) == Membership::Outside);
  CHECK(std::string(membership_name(Membership::Boundary)) == "boundary");

  std::mt19937_64 rng(26);
  for (auto [n, p] : {std::pair{4, 2}, {5, 2}, {6, 3}}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Based b = random_based(rng, n, p);
      const auto x = random_unit_tangent(rng, b);
      const double tx = t_max(x);
      for (double f : {0.1, 0.5, 0.9, 0.999}) CHECK(bg_contains(b.w, grassmann_geodesic(x, f * tx).point) == Membership::Inside);
      CHECK(bg_contains(b.w, grassmann_geodesic(x, tx).point) == Membership::Boundary);
      CHECK(bg_contains(b.w, grassmann_geodesic(x, 1.01 * tx).point) == Membership::Outside);
    }
  }
  CHECK_THROWS_AS(bg_contains(w, w, -0.1), Error);
}

TEST_CASE("main region: exclusion and construction") {
  const double eps = 0.3;
  const GrassmannPoint w0 = standard_point(4, 2);
  const Frame normals(cols({e(4, 2), e(4, 3)}));
  Mat a1 = Mat::Zero(2, 2);
  a1(0, 0) = 1;
  const auto x1 = kozlov_canonical(w0, normals, a1);

  // X2 rotating e1 -> n2 and e2 -> n1 never meets a shrunk leaf.
  Mat a2 = Mat::Zero(2, 2);
  a2(0, 1) = a2(1, 0) = std::sqrt(2.0) / 2;
  const auto x2 = kozlov_canonical(w0, normals, a2);
  for (double sign : {1.0, -1.0}) {
    const auto probe = main_region_probe(x1, eps, grassmann_geodesic(x2, sign * t_max(x2)).point);
    CHECK_FALSE(probe.member);
    CHECK(probe.s_min == doctest::Approx(pi / 2).epsilon(1e-9));
  }

  // The same-plane assignment does meet a leaf.
  Mat a3 = Mat::Zero(2, 2);
  a3(0, 0) = a3(1, 1) = std::sqrt(2.0) / 2;
  const auto x3 = kozlov_canonical(w0, normals, a3);
  CHECK(main_region_contains(x1, eps, grassmann_geodesic(x3, t_max(x3)).point));

  // A point on the shrunk boundary around w_{X1}(0) is a member.
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat a = oracle::gaussian(rng, 2, 2);
    const auto y = kozlov_canonical(w0, normals, a / a.norm());
    const double t = (pi / 2 - eps) / ((y.lambda()[0] + (y.rank() > 1 ? y.lambda()[1] : 0)) / y.norm());
    CHECK(main_region_contains(x1, eps, grassmann_geodesic(y, t).point));
  }

  CHECK_THROWS_AS(main_region_probe(x2, eps, w0), Error);
  try {
    main_region_probe(x2, eps, w0);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidDirection);
  }
}

TEST_CASE("main region agrees with a dense-grid oracle") {
  const double eps = 0.3, level = pi / 2 - eps;
  std::mt19937_64 rng(28);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Based b = random_based(rng, 4, 2);
    Mat a1 = Mat::Zero(2, 2);
    a1(0, 0) = 1;
    const auto x1 = kozlov_canonical(b.w, b.normals, a1);
    const Mat w2f = oracle::orthonormal(rng, 4, 2);
    const auto probe = main_region_probe(x1, eps, GrassmannPoint(Frame(w2f)));

    const Vec f1 = b.w.frame().matrix().col(0), f2 = b.w.frame().matrix().col(1);
    const Vec nn = b.normals.matrix().col(0);
    double lo = 10, hi = -10;
    const int grid = 100000;
    Mat f(4, 2);
    f.col(1) = f2;
    for (int i = 0; i < grid; ++i) {
      const double t = 2 * pi * i / grid;
      f.col(0) = std::cos(t) * f1 + std::sin(t) * nn;
      const auto ang = oriented_angles(f, w2f);
      lo = std::min(lo, ang[0] + ang[1]);
      hi = std::max(hi, ang[0] + ang[1]);
    }
    // s(t) has corners at its minima, so a grid of spacing h overshoots the
    // minimum by up to about 2h.
    const double resolution = 2 * (2 * pi / grid);
    CHECK(probe.s_min <= lo + 1e-9);
    CHECK(lo - probe.s_min < resolution);
    CHECK(probe.s_max >= hi - 1e-9);
    CHECK(probe.s_max - hi < 1e-6);
    if (std::abs(lo - level) < resolution || std::abs(hi - level) < 1e-6) continue;
    CHECK(probe.member == (lo <= level && level <= hi));
    ++compared;
  }
  CHECK(compared >= 95);
}

TEST_CASE("codimension-1 main region reduces to the sphere tube") {
  // G(1, k+2) = S^{k+1}: the p = 1 leaves are spheres of radius π/2 - ε.
  const double eps = 0.3;
  std::mt19937_64 rng(29);
  const Based b{GrassmannPoint(Frame(Mat(e(4, 0)))), Frame(cols({e(4, 1), e(4, 2), e(4, 3)}))};
  Mat a = Mat::Zero(1, 3);
  a(0, 0) = 1;
  const auto x1 = kozlov_canonical(b.w, b.normals, a);
  const SphereTubeRegion tube(GreatCircle(SpherePoint(e(4, 0)), e(4, 1)), eps);
  for (int i = 0; i < 300; ++i) {
    const Vec y = oracle::unit(rng, 4);
    if (std::abs(tube_margin(tube, y)) < 1e-6) continue;
    const bool grass = main_region_contains(x1, eps, GrassmannPoint(Frame(Mat(y))), 256);
    CHECK(grass == tube_region_contains(tube, SpherePoint(y)));
  }
}
