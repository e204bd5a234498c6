#include "barriers/gauss.hpp"

#include "barriers/error.hpp"
#include "barriers/harmonic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace barriers {

namespace {

constexpr double kPi = std::numbers::pi;

// Hyperspherical coordinates on S^d: component i is a product of sines of the
// first i angles times the cosine of the next one (the last has no cosine).
struct Factor {
  int angle;
  bool cosine;
};

std::vector<std::vector<Factor>> hypersphere_factors(int d) {
  std::vector<std::vector<Factor>> comps(static_cast<std::size_t>(d + 1));
  for (int i = 0; i <= d; ++i) {
    auto& c = comps[static_cast<std::size_t>(i)];
    for (int l = 0; l < std::min(i, d); ++l) c.push_back({l, false});
    if (i < d) c.push_back({i, true});
  }
  return comps;
}

Vec hypersphere(const Vec& a) {
  const int d = static_cast<int>(a.size());
  const auto comps = hypersphere_factors(d);
  Vec x(d + 1);
  for (int i = 0; i <= d; ++i) {
    double v = 1;
    for (const Factor& f : comps[static_cast<std::size_t>(i)]) v *= f.cosine ? std::cos(a[f.angle]) : std::sin(a[f.angle]);
    x[i] = v;
  }
  return x;
}

Mat hypersphere_jacobian(const Vec& a) {
  const int d = static_cast<int>(a.size());
  const auto comps = hypersphere_factors(d);
  Mat j = Mat::Zero(d + 1, d);
  for (int i = 0; i <= d; ++i) {
    const auto& c = comps[static_cast<std::size_t>(i)];
    for (std::size_t s = 0; s < c.size(); ++s) {
      double v = 1;
      for (std::size_t t = 0; t < c.size(); ++t) {
        const Factor& f = c[t];
        const double ang = a[f.angle];
        if (t == s) {
          v *= f.cosine ? -std::sin(ang) : std::cos(ang);
        } else {
          v *= f.cosine ? std::cos(ang) : std::sin(ang);
        }
      }
      j(i, c[s].angle) += v;
    }
  }
  return j;
}

std::vector<ParamRange> hypersphere_ranges(int d) {
  std::vector<ParamRange> r;
  for (int i = 0; i + 1 < d; ++i) r.push_back({0.0, kPi, false});
  r.push_back({0.0, 2 * kPi, true});
  return r;
}

Mat fd_jacobian(const ParametricImmersion::Position& pos, const Vec& params, double h) {
  const Vec x0 = pos(params);
  Mat j(x0.size(), params.size());
  for (Eigen::Index c = 0; c < params.size(); ++c) {
    Vec p = params, m = params;
    p[c] += h;
    m[c] -= h;
    j.col(c) = (pos(p) - pos(m)) / (2 * h);
  }
  return j;
}

void check_tangents(const Mat& jac) {
  Eigen::JacobiSVD<Mat> svd(jac);
  require(svd.singularValues().minCoeff() > 1e-10, ErrorCode::ImmersionDegeneracy,
          "tangent vectors are linearly dependent");
}

}  // namespace

const char* immersion_kind_name(ImmersionKind k) {
  switch (k) {
    case ImmersionKind::Equator: return "equator";
    case ImmersionKind::CliffordTorus: return "clifford-torus";
    case ImmersionKind::GeneralizedClifford: return "generalized-clifford";
    case ImmersionKind::DistanceSphere: return "distance-sphere";
    case ImmersionKind::UserGrid: return "user-grid";
  }
  return "unknown";
}

ParametricImmersion ParametricImmersion::equator(int k, int m) {
  require(k >= 1 && m > k, ErrorCode::InvalidInput, "equator needs 1 <= k < m");
  auto pos = [k, m](const Vec& a) {
    Vec x = Vec::Zero(m + 1);
    x.head(k + 1) = hypersphere(a);
    return x;
  };
  auto jac = [k, m](const Vec& a) {
    Mat j = Mat::Zero(m + 1, k);
    j.topRows(k + 1) = hypersphere_jacobian(a);
    return j;
  };
  return ParametricImmersion(ImmersionKind::Equator, k, m, hypersphere_ranges(k), pos, jac);
}

ParametricImmersion ParametricImmersion::clifford_torus() {
  ParametricImmersion g = generalized_clifford(1, 1);
  g.kind_ = ImmersionKind::CliffordTorus;
  return g;
}

ParametricImmersion ParametricImmersion::generalized_clifford(int p, int q) {
  require(p >= 1 && q >= 1, ErrorCode::InvalidInput, "generalized Clifford needs p, q >= 1");
  const double r1 = std::sqrt(static_cast<double>(p) / (p + q));
  const double r2 = std::sqrt(static_cast<double>(q) / (p + q));
  auto pos = [=](const Vec& a) {
    Vec x(p + q + 2);
    x << r1 * hypersphere(a.head(p)), r2 * hypersphere(a.tail(q));
    return x;
  };
  auto jac = [=](const Vec& a) {
    Mat j = Mat::Zero(p + q + 2, p + q);
    j.block(0, 0, p + 1, p) = r1 * hypersphere_jacobian(a.head(p));
    j.block(p + 1, p, q + 1, q) = r2 * hypersphere_jacobian(a.tail(q));
    return j;
  };
  auto ranges = hypersphere_ranges(p);
  for (const auto& r : hypersphere_ranges(q)) ranges.push_back(r);
  return ParametricImmersion(ImmersionKind::GeneralizedClifford, p + q, p + q + 1, std::move(ranges), pos, jac);
}

ParametricImmersion ParametricImmersion::distance_sphere(double r, int m) {
  require(r > 0 && r < 1 && m >= 2, ErrorCode::InvalidInput, "distance sphere needs 0 < r < 1 and m >= 2");
  const double h = std::sqrt(1 - r * r);
  auto pos = [=](const Vec& a) {
    Vec x(m + 1);
    x << r * hypersphere(a), h;
    return x;
  };
  auto jac = [=](const Vec& a) {
    Mat j = Mat::Zero(m + 1, m - 1);
    j.topRows(m) = r * hypersphere_jacobian(a);
    return j;
  };
  return ParametricImmersion(ImmersionKind::DistanceSphere, m - 1, m, hypersphere_ranges(m - 1), pos, jac);
}

ParametricImmersion ParametricImmersion::user(int k, int m, std::vector<ParamRange> ranges, Position position) {
  require(k >= 1 && m > k && static_cast<int>(ranges.size()) == k && position, ErrorCode::InvalidInput,
          "invalid user immersion");
  return ParametricImmersion(ImmersionKind::UserGrid, k, m, std::move(ranges), std::move(position), nullptr);
}

ParametricImmersion ParametricImmersion::include_equatorially(int extra) const {
  require(extra >= 1, ErrorCode::InvalidInput, "inclusion needs at least one extra dimension");
  const int m_new = m_ + extra;
  Position pos = [inner = position_, m_new](const Vec& a) {
    Vec x = Vec::Zero(m_new + 1);
    const Vec y = inner(a);
    x.head(y.size()) = y;
    return x;
  };
  Jacobian jac;
  if (jacobian_) {
    jac = [inner = jacobian_, m_new, k = k_](const Vec& a) {
      Mat j = Mat::Zero(m_new + 1, k);
      const Mat y = inner(a);
      j.topRows(y.rows()) = y;
      return j;
    };
  }
  return ParametricImmersion(kind_, k_, m_new, ranges_, std::move(pos), std::move(jac));
}

Vec ParametricImmersion::position(const Vec& params) const {
  require(params.size() == k_, ErrorCode::InvalidInput, "wrong number of parameters");
  return position_(params);
}

Mat ParametricImmersion::jacobian(const Vec& params) const {
  require(params.size() == k_, ErrorCode::InvalidInput, "wrong number of parameters");
  return jacobian_ ? jacobian_(params) : fd_jacobian(position_, params, 1e-5);
}

CliffordSample clifford_torus(double u, double v) {
  const double s = 1 / std::numbers::sqrt2;
  CliffordSample c;
  c.position = Vec(4);
  c.position << s * std::cos(u), s * std::sin(u), s * std::cos(v), s * std::sin(v);
  c.tangents = Mat::Zero(4, 2);
  c.tangents(0, 0) = -s * std::sin(u);
  c.tangents(1, 0) = s * std::cos(u);
  c.tangents(2, 1) = -s * std::sin(v);
  c.tangents(3, 1) = s * std::cos(v);
  c.normal = Vec(4);
  c.normal << s * std::cos(u), s * std::sin(u), -s * std::cos(v), -s * std::sin(v);
  return c;
}

Mat normal_frame(const ParametricImmersion& imm, const Vec& params) {
  const Vec x = imm.position(params);
  const Mat t = imm.jacobian(params);
  check_tangents(t);
  Mat span(x.size(), t.cols() + 1);
  span << x, t;
  const Frame base = gram_schmidt(span);
  Mat normals = complement_frame(base.matrix()).matrix();
  Mat full(x.size(), x.size());
  full << x, t, normals;
  if (full.determinant() < 0) normals.col(normals.cols() - 1) *= -1;
  return normals;
}

SpherePoint hypersurface_gauss(const ParametricImmersion& imm, const Vec& params) {
  require(imm.codim() == 1, ErrorCode::InvalidInput, "hypersurface Gauss map needs codimension 1");
  return SpherePoint(normal_frame(imm, params).col(0));
}

GrassmannPoint normal_plane_gauss(const ParametricImmersion& imm, const Vec& params) {
  require(imm.codim() == 2, ErrorCode::InvalidInput, "normal-plane Gauss map needs codimension 2");
  return GrassmannPoint(Frame(normal_frame(imm, params)));
}

double mean_curvature_norm(const ParametricImmersion& imm, const Vec& params, double h) {
  const int k = imm.dim();
  const Vec x = imm.position(params);
  const Mat t = imm.jacobian(params);
  check_tangents(t);
  const Mat g = t.transpose() * t;
  const Mat ginv = g.inverse();
  const Mat nf = normal_frame(imm, params);
  // Second derivatives: central differences of the Jacobian when it is
  // analytic, of positions otherwise.
  Vec trace = Vec::Zero(x.size());
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      Vec xij;
      if (imm.analytic()) {
        Vec p = params, m = params;
        p[j] += h;
        m[j] -= h;
        xij = (imm.jacobian(p).col(i) - imm.jacobian(m).col(i)) / (2 * h);
      } else {
        Vec pp = params, pm = params, mp = params, mm = params;
        pp[i] += h; pp[j] += h;
        pm[i] += h; pm[j] -= h;
        mp[i] -= h; mp[j] += h;
        mm[i] -= h; mm[j] -= h;
        xij = (imm.position(pp) - imm.position(pm) - imm.position(mp) + imm.position(mm)) / (4 * h * h);
      }
      trace += ginv(i, j) * xij;
    }
  }
  const Vec hvec = nf * (nf.transpose() * trace) / k;
  return hvec.norm();
}

double gauss_margin(const ParametricImmersion& imm, const AuditRegion& region, const Vec& params) {
  if (const auto* tube = std::get_if<SphereTubeRegion>(&region)) {
    require(imm.codim() == 1 && tube->ambient_dim() == imm.sphere_dim() + 1, ErrorCode::InvalidInput,
            "region does not match the hypersurface Gauss target");
    return tube_margin(*tube, hypersurface_gauss(imm, params).coords());
  }
  const auto& g = std::get<GrassmannRegion>(region);
  require(imm.codim() == 2 && g.x1.base().p() == 2 && g.x1.base().n() == imm.sphere_dim() + 1,
          ErrorCode::InvalidInput, "region does not match the normal-plane Gauss target");
  const MainRegionProbe probe = main_region_probe(g.x1, g.epsilon, normal_plane_gauss(imm, params));
  const double level = kPi / 2 - g.epsilon;
  return std::min(level - probe.s_min, probe.s_max - level);
}

Mat parameter_grid(const ParametricImmersion& imm, int grid) {
  require(grid >= 2, ErrorCode::InvalidInput, "audit grid needs at least 2 samples per axis");
  const int k = imm.dim();
  long total = 1;
  for (int i = 0; i < k; ++i) total *= grid;
  require(total <= 4'000'000, ErrorCode::InvalidInput, "audit grid too large");
  Mat pts(k, total);
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int a = 0; a < k; ++a) {
      const int s = static_cast<int>(rest % grid);
      rest /= grid;
      const ParamRange& r = imm.ranges()[static_cast<std::size_t>(a)];
      const double frac = r.periodic ? static_cast<double>(s) / grid : static_cast<double>(s) / (grid - 1);
      pts(a, idx) = r.lo + frac * (r.hi - r.lo);
    }
  }
  return pts;
}

GaussAudit gauss_image_audit(const ParametricImmersion& imm, const AuditRegion& region, int grid,
                             bool h1_zero_asserted) {
  const Mat pts = parameter_grid(imm, grid);
  GaussAudit audit;
  audit.kind = immersion_kind_name(imm.kind());
  audit.grid = grid;
  audit.epsilon = std::holds_alternative<SphereTubeRegion>(region) ? std::get<SphereTubeRegion>(region).epsilon()
                                                                   : std::get<GrassmannRegion>(region).epsilon;
  audit.h1_zero_asserted = h1_zero_asserted;
  audit.min_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < pts.cols(); ++c) {
    const Vec p = pts.col(c);
    double margin;
    try {
      margin = gauss_margin(imm, region, p);
    } catch (const Error& e) {
      // Coordinate singularities (poles of hyperspherical charts) carry no
      // Gauss image information of their own.
      if (e.code() == ErrorCode::ImmersionDegeneracy) continue;
      throw;
    }
    if (margin < audit.min_margin) {
      audit.min_margin = margin;
      audit.worst_point = p;
    }
  }
  require(audit.worst_point.size() > 0, ErrorCode::ImmersionDegeneracy, "no regular grid points to audit");

  std::string failures;
  if (!h1_zero_asserted) failures = "topological hypothesis H1(M)=0 not asserted";
  if (audit.min_margin <= 0) {
    if (!failures.empty()) failures += "; ";
    failures += "Gauss-image hypothesis fails: image meets the barrier neighbourhood";
  }
  audit.verdict = failures.empty() ? kVerdictHypothesesMet : failures;
  return audit;
}

double gauss_map_tension(const ParametricImmersion& imm, int n) {
  require(imm.dim() == 2 && imm.codim() == 1, ErrorCode::InvalidInput, "needs a surface in S^3");
  require(imm.ranges()[0].periodic && imm.ranges()[1].periodic, ErrorCode::InvalidInput, "needs periodic parameters");
  const DomainMesh mesh = build_domain({DomainKind::TorusGrid, n, n, 0});
  DiscreteMap map;
  map.values.resize(4, mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) map.values.col(i) = hypersurface_gauss(imm, mesh.coords.col(i)).coords();
  return max_tension_norm(mesh, map, TargetManifold::sphere(3));
}

}  // namespace barriers
