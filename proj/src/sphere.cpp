#include "barriers/sphere.hpp"

#include "barriers/error.hpp"
#include "union_find.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace barriers {

namespace {

constexpr double kUnitTol = 1e-9;
constexpr double kTwoPi = 2 * std::numbers::pi;

Vec standard_normal(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = g(rng);
  return v;
}

// Γ-function based volume of the unit sphere S^m.
double sphere_volume(int m) {
  const double a = (m + 1) / 2.0;
  return 2 * std::pow(std::numbers::pi, a) / std::tgamma(a);
}

}  // namespace

SpherePoint::SpherePoint(Vec coords) : x_(std::move(coords)) {
  require(x_.size() >= 2 && x_.allFinite(), ErrorCode::InvalidInput, "sphere point needs finite coordinates");
  require(std::abs(x_.norm() - 1.0) <= kUnitTol, ErrorCode::InvalidInput, "sphere point must have unit norm");
}

SpherePoint SpherePoint::normalized(const Vec& v) {
  const double len = v.norm();
  require(len > 0 && std::isfinite(len), ErrorCode::InvalidInput, "cannot normalize a zero vector");
  return SpherePoint(v / len);
}

SubsphereFlag::SubsphereFlag(int ambient_dim, Mat normals) : ambient_dim_(ambient_dim), normals_(std::move(normals)) {
  require(normals_.rows() == ambient_dim_, ErrorCode::InvalidInput, "flag normals have the wrong dimension");
  require(normals_.cols() < ambient_dim_, ErrorCode::DegenerateFlag, "flag leaves no subsphere");
  if (normals_.cols() > 0) {
    const Mat gram = normals_.transpose() * normals_;
    const double dev = (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    require(dev < kUnitTol, ErrorCode::InvalidInput, "flag normals must be orthonormal");
  }
}

SubsphereFlag::SubsphereFlag(Mat normals) : SubsphereFlag(static_cast<int>(normals.rows()), Mat(normals)) {}

SubsphereFlag SubsphereFlag::with(const Vec& normal) const {
  Mat m(ambient_dim_, normals_.cols() + 1);
  m << normals_, normal;
  return SubsphereFlag(ambient_dim_, std::move(m));
}

GreatCircle::GreatCircle(SpherePoint base, Vec direction) : base_(base.coords()), dir_(std::move(direction)) {
  require(dir_.size() == base_.size(), ErrorCode::InvalidInput, "circle direction has the wrong dimension");
  require(std::abs(dir_.norm() - 1.0) <= kUnitTol, ErrorCode::InvalidInput, "circle direction must be unit");
  require(std::abs(dir_.dot(base_)) <= kUnitTol, ErrorCode::InvalidInput, "circle direction must be tangent");
}

Vec GreatCircle::point(double t) const { return std::cos(t) * base_ + std::sin(t) * dir_; }
Vec GreatCircle::velocity(double t) const { return -std::sin(t) * base_ + std::cos(t) * dir_; }

SphereTubeRegion::SphereTubeRegion(GreatCircle circle, double epsilon) : circle_(std::move(circle)), eps_(epsilon) {
  require(epsilon > 0 && epsilon < std::numbers::pi / 2, ErrorCode::InvalidInput, "epsilon must lie in (0, pi/2)");
  require(ball_radius() < kSphereConvexityRadius, ErrorCode::InvalidInput, "leaf radius exceeds convexity radius");
}

SubsphereFlag SphereTubeRegion::barrier() const {
  Mat m(circle_.ambient_dim(), 2);
  m << circle_.base(), circle_.direction();
  return SubsphereFlag(std::move(m));
}

double sphere_distance(const Vec& x, const Vec& y) {
  require(x.size() == y.size(), ErrorCode::InvalidInput, "sphere points in different dimensions");
  return 2 * std::atan2((x - y).norm(), (x + y).norm());
}

double sphere_distance(const SpherePoint& x, const SpherePoint& y) { return sphere_distance(x.coords(), y.coords()); }

double subsphere_distance(const Vec& x, const SubsphereFlag& f) {
  require(x.size() == f.ambient_dim(), ErrorCode::InvalidInput, "point and flag in different dimensions");
  if (f.size() == 0) return 0.0;
  const Vec coeffs = f.normals().transpose() * x;
  const Vec rest = x - f.normals() * coeffs;
  return std::atan2(coeffs.norm(), rest.norm());
}

double subsphere_distance(const SpherePoint& x, const SubsphereFlag& f) { return subsphere_distance(x.coords(), f); }

double tube_margin(const SphereTubeRegion& r, const Vec& x) {
  return subsphere_distance(x, r.barrier()) - r.epsilon();
}

bool tube_region_contains(const SphereTubeRegion& r, const SpherePoint& x) {
  return tube_margin(r, x.coords()) >= -1e-12;
}

std::vector<double> sweepout_leaf_find(const SphereTubeRegion& r, const SpherePoint& xp, int grid) {
  const Vec& x = xp.coords();
  require(x.size() == r.ambient_dim(), ErrorCode::InvalidInput, "point and region in different dimensions");
  require(grid >= 16, ErrorCode::InvalidInput, "leaf scan grid too coarse");
  const double level = std::cos(r.ball_radius());
  const double a = x.dot(r.circle().base());
  const double b = x.dot(r.circle().direction());
  // <x, Γ(t)> - cos(radius); a zero means x sits on the leaf at t.
  auto f = [&](double t) { return a * std::cos(t) + b * std::sin(t) - level; };
  auto bisect = [&](double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  const double h = kTwoPi / grid;
  std::vector<double> roots;
  std::vector<double> vals(static_cast<std::size_t>(grid) + 1);
  for (int i = 0; i <= grid; ++i) vals[static_cast<std::size_t>(i)] = f(i * h);
  for (int i = 0; i < grid; ++i) {
    const double t0 = i * h;
    const double f0 = vals[static_cast<std::size_t>(i)];
    const double f1 = vals[static_cast<std::size_t>(i) + 1];
    if (f0 == 0.0) {
      roots.push_back(t0);
    } else if ((f0 < 0) != (f1 < 0) && f1 != 0.0) {
      roots.push_back(bisect(t0, t0 + h));
    }
  }
  // A leaf can graze x between two grid points without a sign change. Refine
  // every negative local maximum by golden-section search.
  for (int i = 0; i < grid; ++i) {
    const double fm = vals[static_cast<std::size_t>((i + grid - 1) % grid)];
    const double f0 = vals[static_cast<std::size_t>(i)];
    const double fp = vals[static_cast<std::size_t>(i) + 1];
    if (!(f0 < 0 && f0 >= fm && f0 >= fp)) continue;
    double lo = (i - 1) * h, hi = (i + 1) * h;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      if (f(c) > f(d)) {
        hi = d;
      } else {
        lo = c;
      }
      c = hi - g * (hi - lo);
      d = lo + g * (hi - lo);
    }
    const double tmax = 0.5 * (lo + hi);
    if (f(tmax) >= 0) {
      roots.push_back(bisect((i - 1) * h, tmax));
      roots.push_back(bisect(tmax, (i + 1) * h));
    }
  }
  for (double& t : roots) {
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double t : roots) {
    if (!out.empty() && t - out.back() < 1e-9) continue;
    if (std::abs(sphere_distance(x, r.circle().point(t)) - r.ball_radius()) > 1e-9) continue;
    out.push_back(t);
  }
  if (out.size() > 1 && out.front() + kTwoPi - out.back() < 1e-9) out.pop_back();
  return out;
}

SphereTubeRegion build_maximal_set_region(const SubsphereFlag& interior_flag, const SpherePoint& x0,
                                          double epsilon) {
  require(x0.ambient_dim() == interior_flag.ambient_dim(), ErrorCode::InvalidInput,
          "x0 and flag in different dimensions");
  if (interior_flag.size() > 0) {
    const double dev = (interior_flag.normals().transpose() * x0.coords()).cwiseAbs().maxCoeff();
    require(dev < kUnitTol, ErrorCode::InvalidInput, "x0 must be orthogonal to the flag normals");
  }
  const SubsphereFlag with_x0 = interior_flag.with(x0.coords());
  require(with_x0.size() < with_x0.ambient_dim(), ErrorCode::DegenerateFlag,
          "no unit vector is orthogonal to the flag and x0");
  const Frame complement = complement_frame(with_x0.normals());
  const SpherePoint base(complement.vector(0));
  // Γ(π/2) = x0 forces the direction to be x0 itself.
  return SphereTubeRegion(GreatCircle(base, x0.coords()), epsilon);
}

DisconnectionResult region_disconnection_check(const SphereTubeRegion& r, std::optional<double> t0,
                                               int samples, std::uint64_t seed,
                                               const DisconnectionOptions& opts) {
  require(samples >= 1000, ErrorCode::InvalidInput, "disconnection check needs at least 1000 samples");
  require(opts.neighbors >= 1 && opts.cutoff_factor > 0 && opts.leaf_band > 0 &&
              opts.min_component_fraction >= 0 && opts.min_component_fraction < 0.5, ErrorCode::InvalidInput,
          "invalid disconnection options");
  const int dim = r.ambient_dim();
  const int m = dim - 1;
  const double radius = r.ball_radius();
  Vec center;
  if (t0) center = r.circle().point(*t0);
  const SubsphereFlag barrier = r.barrier();

  auto in_region = [&](const Vec& x) { return subsphere_distance(x, barrier) >= r.epsilon(); };
  auto kept = [&](const Vec& x) {
    if (!in_region(x)) return false;
    if (!t0) return true;
    return std::abs(sphere_distance(x, center) - radius) >= opts.leaf_band &&
           std::abs(sphere_distance(x, Vec(-center)) - radius) >= opts.leaf_band;
  };

  // Antipodally symmetric sample of the region: x and -x are both kept.
  std::mt19937_64 rng(seed);
  const int half = samples / 2;
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(2 * half));
  long draws = 0;
  int in_region_count = 0;
  while (in_region_count < half) {
    Vec x = standard_normal(rng, dim);
    x.normalize();
    ++draws;
    if (!in_region(x)) continue;
    ++in_region_count;
    if (!kept(x)) continue;
    pts.push_back(x);
    pts.push_back(-x);
  }
  const int count = static_cast<int>(pts.size());
  require(count >= 100, ErrorCode::InsufficientSampling, "too few samples survive leaf removal");

  const double region_volume = sphere_volume(m) * static_cast<double>(in_region_count) / static_cast<double>(draws);
  const double spacing = std::pow(region_volume / (2.0 * in_region_count), 1.0 / m);
  const double cutoff = opts.cutoff_factor * spacing;
  const double arc_step = 0.5 * opts.leaf_band;

  auto arc_kept = [&](const Vec& a, const Vec& b, double len) {
    const int steps = static_cast<int>(std::ceil(len / arc_step));
    const Vec perp = (b - a.dot(b) * a).normalized();
    for (int s = 1; s < steps; ++s) {
      const double u = len * s / steps;
      if (!kept(std::cos(u) * a + std::sin(u) * perp)) return false;
    }
    return true;
  };

  UnionFind uf(count);
  const int k = std::min(opts.neighbors, count - 1);
  std::vector<std::pair<double, int>> cand;
  for (int i = 0; i < count; ++i) {
    cand.clear();
    for (int j = 0; j < count; ++j) {
      if (j == i) continue;
      const double chord2 = (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]).squaredNorm();
      cand.emplace_back(chord2, j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int q = 0; q < k; ++q) {
      const int j = cand[static_cast<std::size_t>(q)].second;
      const double d = sphere_distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
      if (d >= cutoff) break;
      if (uf.same(i, j)) continue;
      if (arc_kept(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)], d)) uf.unite(i, j);
    }
  }
  // Points are stored as (x, -x) pairs; identify them.
  for (int i = 0; i + 1 < count; i += 2) uf.unite(i, i + 1);

  std::map<int, int> by_root;
  for (int i = 0; i < count; i += 2) ++by_root[uf.find(i)];
  DisconnectionResult res;
  for (const auto& [root, size] : by_root) res.component_sizes.push_back(size);
  std::sort(res.component_sizes.rbegin(), res.component_sizes.rend());
  res.raw_components = static_cast<int>(res.component_sizes.size());
  const double floor = opts.min_component_fraction * count / 2.0;
  res.components = static_cast<int>(
      std::count_if(res.component_sizes.begin(), res.component_sizes.end(), [&](int s) { return s >= floor; }));
  res.surviving_samples = count;
  res.spacing = spacing;
  return res;
}

}  // namespace barriers
