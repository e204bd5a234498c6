#include "barriers/grassmann.hpp"

#include "barriers/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace barriers {

namespace {

constexpr double kPi = std::numbers::pi;

void check_same_grassmannian(const GrassmannPoint& a, const GrassmannPoint& b) {
  require(a.n() == b.n() && a.p() == b.p(), ErrorCode::InvalidInput, "Grassmann points of different (p,n)");
}

double top_two_sum(const PrincipalAngles& pa) {
  double s = pa.angles[0];
  if (pa.angles.size() > 1) s += pa.angles[1];
  return s;
}

// Golden-section search for an extremum of f on [lo, hi].
double golden_extremum(const std::function<double(double)>& f, double lo, double hi, bool maximize, double tol) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  auto better = [&](double a, double b) { return maximize ? a > b : a < b; };
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (better(fc, fd)) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return f(0.5 * (lo + hi));
}

}  // namespace

GrassmannPoint::GrassmannPoint(Frame frame) : frame_(std::move(frame)), plucker_(barriers::plucker(frame_)) {
  require(frame_.p() < frame_.n(), ErrorCode::InvalidInput, "Grassmann point needs p < n");
}

GrassmannPoint standard_point(int n, int p) {
  return GrassmannPoint(Frame(Mat::Identity(n, p)));
}

std::vector<PVector> eta_basis(const GrassmannPoint& w, const Frame& normal_frame) {
  const int n = w.n(), p = w.p();
  require(normal_frame.n() == n && normal_frame.p() == n - p, ErrorCode::InvalidInput,
          "normal frame must span the orthogonal complement");
  const double cross = (w.frame().matrix().transpose() * normal_frame.matrix()).cwiseAbs().maxCoeff();
  require(cross < kFrameTol, ErrorCode::InvalidInput, "normal frame is not orthogonal to the plane");
  std::vector<PVector> out;
  out.reserve(static_cast<std::size_t>(p * (n - p)));
  for (int i = 0; i < p; ++i) {
    for (int a = 0; a < n - p; ++a) {
      Mat m = w.frame().matrix();
      m.col(i) = normal_frame.matrix().col(a);
      out.push_back(wedge(m));
    }
  }
  return out;
}

GrassmannTangent kozlov_canonical(const GrassmannPoint& w, const Frame& normal_frame, const Mat& coeffs) {
  const int n = w.n(), p = w.p(), q = n - p;
  require(coeffs.rows() == p && coeffs.cols() == q, ErrorCode::InvalidInput, "tangent coefficients must be p x (n-p)");
  require(coeffs.allFinite(), ErrorCode::InvalidInput, "tangent coefficients must be finite");
  require(normal_frame.n() == n && normal_frame.p() == q, ErrorCode::InvalidInput,
          "normal frame must span the orthogonal complement");
  const double cross = (w.frame().matrix().transpose() * normal_frame.matrix()).cwiseAbs().maxCoeff();
  require(cross < kFrameTol, ErrorCode::InvalidInput, "normal frame is not orthogonal to the plane");

  Eigen::JacobiSVD<Mat> svd(coeffs, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixU();
  Mat v = svd.matrixV();
  const Vec& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv[r] > 1e-12) ++r;
  require(r > 0, ErrorCode::ZeroTangent, "zero tangent vector");

  // Keep the rotated tangent frame positively oriented so it still spans w.
  if (u.determinant() < 0) {
    u.col(p - 1) *= -1;
    if (p - 1 < q) v.col(p - 1) *= -1;
  }

  GrassmannTangent x(w, normal_frame, coeffs);
  x.lambda_ = sv.head(r);
  x.rot_tangent_ = w.frame().matrix() * u;
  x.rot_normal_ = normal_frame.matrix() * v;
  return x;
}

GrassmannTangent kozlov_canonical(const GrassmannPoint& w, const Mat& coeffs) {
  return kozlov_canonical(w, complement_frame(w.frame().matrix()), coeffs);
}

Mat GrassmannTangent::reconstruct_coeffs() const {
  const int r = rank();
  const Mat et = base_.frame().matrix().transpose() * rot_tangent_.leftCols(r);
  const Mat nt = normals_.matrix().transpose() * rot_normal_.leftCols(r);
  return et * lambda_.asDiagonal() * nt.transpose();
}

PVector GrassmannTangent::as_pvector() const {
  const auto eta = eta_basis(base_, normals_);
  PVector out(base_.n(), base_.p());
  const int q = base_.n() - base_.p();
  for (int i = 0; i < base_.p(); ++i) {
    for (int a = 0; a < q; ++a) out = out + coeffs_(i, a) * eta[static_cast<std::size_t>(i * q + a)];
  }
  return out;
}

GeodesicPoint grassmann_geodesic(const GrassmannTangent& x, double t) {
  const double len = x.norm();
  const bool rescaled = std::abs(len - 1.0) > 1e-9;
  Mat f = x.rotated_tangent_frame();
  for (int i = 0; i < x.rank(); ++i) {
    const double s = x.lambda()[i] / len * t;
    f.col(i) = std::cos(s) * x.rotated_tangent_frame().col(i) + std::sin(s) * x.rotated_normal_frame().col(i);
  }
  return GeodesicPoint{GrassmannPoint(Frame(std::move(f))), rescaled};
}

PrincipalAngles principal_angles(const GrassmannPoint& w1, const GrassmannPoint& w2) {
  check_same_grassmannian(w1, w2);
  const Mat& f1 = w1.frame().matrix();
  const Mat& f2 = w2.frame().matrix();
  const Mat m = f1.transpose() * f2;
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat y1 = f1 * svd.matrixU();
  const Mat y2 = f2 * svd.matrixV();
  const int p = w1.p();
  std::vector<double> angles(static_cast<std::size_t>(p));
  // Angles between principal vectors; accurate near 0 and near π/2 alike.
  for (int i = 0; i < p; ++i) {
    angles[static_cast<std::size_t>(i)] = 2 * std::atan2((y1.col(i) - y2.col(i)).norm(), (y1.col(i) + y2.col(i)).norm());
  }
  std::sort(angles.begin(), angles.end(), std::greater<>());
  if (m.determinant() < 0) {
    // Orientation mismatch: the shortest oriented path swings the largest
    // angle past π/2.
    angles.front() = kPi - angles.front();
    std::sort(angles.begin(), angles.end(), std::greater<>());
  }
  double d2 = 0;
  for (double a : angles) d2 += a * a;
  return PrincipalAngles{std::move(angles), std::sqrt(d2)};
}

double geodesic_distance(const GrassmannPoint& w1, const GrassmannPoint& w2) {
  return principal_angles(w1, w2).distance;
}

double t_max(const GrassmannTangent& x) {
  const double len = x.norm();
  require(len > 1e-12, ErrorCode::ZeroTangent, "zero tangent vector");
  const double l1 = x.lambda()[0] / len;
  const double l2 = x.rank() > 1 ? x.lambda()[1] / len : 0.0;
  return kPi / (2 * (l1 + l2));
}

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Boundary: return "boundary";
    case Membership::Outside: return "outside";
  }
  return "unknown";
}

Membership bg_contains(const GrassmannPoint& w, const GrassmannPoint& w2, double shrink) {
  require(shrink >= 0 && shrink < kPi / 2, ErrorCode::InvalidInput, "shrink must lie in [0, pi/2)");
  const double s = top_two_sum(principal_angles(w, w2));
  const double level = kPi / 2 - shrink;
  if (std::abs(s - level) <= 1e-9) return Membership::Boundary;
  return s < level ? Membership::Inside : Membership::Outside;
}

MainRegionProbe main_region_probe(const GrassmannTangent& x1, double epsilon, const GrassmannPoint& w2, int grid) {
  require(x1.rank() == 1, ErrorCode::InvalidDirection, "main region direction must have rank 1");
  require(epsilon > 0 && epsilon < kPi / 2, ErrorCode::InvalidInput, "epsilon must lie in (0, pi/2)");
  require(grid >= 16, ErrorCode::InvalidInput, "main region grid too coarse");
  check_same_grassmannian(x1.base(), w2);
  auto s = [&](double t) { return top_two_sum(principal_angles(grassmann_geodesic(x1, t).point, w2)); };
  const double h = 2 * kPi / grid;
  int imin = 0, imax = 0;
  double vmin = s(0), vmax = vmin;
  for (int i = 1; i < grid; ++i) {
    const double v = s(i * h);
    if (v < vmin) {
      vmin = v;
      imin = i;
    }
    if (v > vmax) {
      vmax = v;
      imax = i;
    }
  }
  vmin = std::min(vmin, golden_extremum(s, (imin - 1) * h, (imin + 1) * h, false, 1e-10));
  vmax = std::max(vmax, golden_extremum(s, (imax - 1) * h, (imax + 1) * h, true, 1e-10));
  const double level = kPi / 2 - epsilon;
  return MainRegionProbe{vmin <= level && level <= vmax, vmin, vmax};
}

bool main_region_contains(const GrassmannTangent& x1, double epsilon, const GrassmannPoint& w2, int grid) {
  return main_region_probe(x1, epsilon, w2, grid).member;
}

}  // namespace barriers
