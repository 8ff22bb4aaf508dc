#include "hpq/immersion.hpp"

#include <algorithm>
#include <cmath>

#include "hpq/error.hpp"

namespace hpq {

namespace {

void check_metric(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-8)) {
    throw GeometryError(ErrorCode::degenerate_metric,
                        "induced metric not positive definite (min eigenvalue " + std::to_string(lo) + ")");
  }
  if (hi / lo > 1e8) throw GeometryError(ErrorCode::degenerate_metric, "induced metric condition number above 1e8");
}

Mat metric_of(int p, const ChartJet& j) {
  Mat g(j.p, j.p);
  for (int a = 0; a < j.p; ++a)
    for (int b = a; b < j.p; ++b) g(a, b) = g(b, a) = eta_inner(p, j.x1(a), j.x1(b));
  return g;
}

std::vector<double> shifted(std::span<const double> u, int k, double s) {
  std::vector<double> v(u.begin(), u.end());
  v[k] += s;
  return v;
}

void check_stencil(const ImmersionChart& chart, std::span<const double> u, double step) {
  if (!chart.domain().contains(u, step + chart.jet_margin())) {
    throw GeometryError(ErrorCode::stencil_out_of_domain, "derivative stencil leaves the chart domain");
  }
}

}  // namespace

double FundamentalData::ii_norm_sq() const {
  double s = 0.0;
  for (const auto& m : h) s += m.squaredNorm();
  return s;
}

double FundamentalData::mean_curvature_norm_sq() const {
  double s = 0.0;
  for (const auto& m : h) s += m.trace() * m.trace();
  return s;
}

FundamentalData FundamentalData::rotated(const Mat& ot, const Mat& on) const {
  FundamentalData r = *this;
  for (int a = 0; a < p; ++a) {
    r.tangent[a] = Vec::Zero(position.size());
    for (int b = 0; b < p; ++b) r.tangent[a] += ot(b, a) * tangent[b];
  }
  for (int al = 0; al < q; ++al) {
    r.normal[al] = Vec::Zero(position.size());
    for (int be = 0; be < q; ++be) r.normal[al] += on(be, al) * normal[be];
  }
  r.frame_coeffs = frame_coeffs * ot;
  for (int al = 0; al < q; ++al) {
    Mat m = Mat::Zero(p, p);
    for (int be = 0; be < q; ++be) m += on(be, al) * h[be];
    r.h[al] = ot.transpose() * m * ot;
    r.h[al] = 0.5 * (r.h[al] + r.h[al].transpose()).eval();
  }
  r.mean_curvature = Vec::Zero(position.size());
  for (int al = 0; al < q; ++al) r.mean_curvature += r.h[al].trace() * r.normal[al];
  return r;
}

double FundamentalData::frame_defect() const {
  double d = 0.0;
  std::vector<const Vec*> f;
  for (const auto& v : tangent) f.push_back(&v);
  for (const auto& v : normal) f.push_back(&v);
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b) {
      const double target = a != b ? 0.0 : (static_cast<int>(a) < p ? 1.0 : -1.0);
      d = std::max(d, std::abs(eta_inner(p, *f[a], *f[b]) - target));
    }
  return d;
}

Vec FundamentalData::normal_part(const Vec& v) const {
  Vec r = Vec::Zero(v.size());
  for (const auto& n : normal) r -= eta_inner(p, v, n) * n;
  return r;
}

FundamentalData fundamental_data_from_jet(int p, int q, const ChartJet& j) {
  const QuadraticSpace space(p, q);
  const int n = p + q + 1;
  FundamentalData fd;
  fd.p = p;
  fd.q = q;
  fd.position = j.x;
  fd.metric = metric_of(p, j);
  check_metric(fd.metric);
  fd.tangent = pseudo_orthonormalize(space, j.d1, p, 0);

  Mat qxe(p, p);
  for (int i = 0; i < p; ++i)
    for (int a = 0; a < p; ++a) qxe(i, a) = eta_inner(p, j.x1(i), fd.tangent[a]);
  fd.frame_coeffs = fd.metric.ldlt().solve(qxe);

  std::vector<Vec> pool;
  for (int k = 0; k < n; ++k) {
    Vec v = Vec::Unit(n, k);
    v += eta_inner(p, v, j.x) * j.x;
    for (const auto& e : fd.tangent) v -= eta_inner(p, v, e) * e;
    pool.push_back(std::move(v));
  }
  try {
    fd.normal = pseudo_orthonormalize(space, pool, 0, q);
  } catch (const GeometryError& e) {
    throw GeometryError(ErrorCode::normal_completion, e.what());
  }

  const Mat& E = fd.frame_coeffs;
  fd.h.assign(q, Mat::Zero(p, p));
  for (int al = 0; al < q; ++al) {
    Mat c(p, p);
    for (int i = 0; i < p; ++i)
      for (int l = 0; l < p; ++l) c(i, l) = -eta_inner(p, j.x2(i, l), fd.normal[al]);
    Mat m = E.transpose() * c * E;
    fd.h[al] = 0.5 * (m + m.transpose());
  }
  fd.mean_curvature = Vec::Zero(n);
  for (int al = 0; al < q; ++al) fd.mean_curvature += fd.h[al].trace() * fd.normal[al];
  return fd;
}

FundamentalData fundamental_data(const ImmersionChart& chart, std::span<const double> u) {
  return fundamental_data_from_jet(chart.p(), chart.q(), chart.jet(u, 2));
}

Vec LocalGeometry::normal_part(const Vec& v) const {
  const int p = jet.p;
  Vec r = v + eta_inner(p, v, jet.x) * jet.x;
  Eigen::VectorXd c(p);
  for (int b = 0; b < p; ++b) c[b] = eta_inner(p, v, jet.x1(b));
  const Eigen::VectorXd w = metric_inv * c;
  for (int a = 0; a < p; ++a) r -= w[a] * jet.x1(a);
  return r;
}

LocalGeometry local_geometry(const ImmersionChart& chart, std::span<const double> u) {
  const int p = chart.p();
  LocalGeometry lg;
  lg.jet = chart.jet(u, 2);
  lg.metric = metric_of(p, lg.jet);
  check_metric(lg.metric);
  lg.metric_inv = lg.metric.inverse();
  lg.ii.resize(p * p);
  for (int i = 0; i < p; ++i)
    for (int l = i; l < p; ++l) {
      lg.ii[i * p + l] = lg.normal_part(lg.jet.x2(i, l));
      lg.ii[l * p + i] = lg.ii[i * p + l];
    }
  lg.mean_curvature = Vec::Zero(lg.jet.x.size());
  for (int i = 0; i < p; ++i)
    for (int l = 0; l < p; ++l) lg.mean_curvature += lg.metric_inv(i, l) * lg.ii[i * p + l];
  double s = 0.0;
  for (int i = 0; i < p; ++i)
    for (int l = 0; l < p; ++l)
      for (int k = 0; k < p; ++k)
        for (int m = 0; m < p; ++m)
          s -= lg.metric_inv(i, k) * lg.metric_inv(l, m) * eta_inner(p, lg.ii[i * p + l], lg.ii[k * p + m]);
  lg.ii_norm_sq = s;
  return lg;
}

double CovariantDerivativeII::norm_sq() const {
  double s = 0.0;
  for (double v : c) s += v * v;
  return s;
}

double default_derivative_step(const ImmersionChart& chart) {
  return chart.jet_mode().is_closed_form() ? 1e-4 : 1e-3;
}

namespace {

struct Stencil {
  LocalGeometry center;
  std::vector<LocalGeometry> plus, minus;
  double step;
};

Stencil stencil(const ImmersionChart& chart, std::span<const double> u, double step) {
  if (step <= 0) step = default_derivative_step(chart);
  check_stencil(chart, u, step);
  Stencil s;
  s.step = step;
  s.center = local_geometry(chart, u);
  for (int k = 0; k < chart.p(); ++k) {
    s.plus.push_back(local_geometry(chart, shifted(u, k, step)));
    s.minus.push_back(local_geometry(chart, shifted(u, k, -step)));
  }
  return s;
}

/// Gamma^m_ij at the center from central differences of g (Koszul formula).
std::vector<double> christoffel_fd(const Stencil& s, int p) {
  std::vector<Mat> dg(p);
  for (int k = 0; k < p; ++k) dg[k] = (s.plus[k].metric - s.minus[k].metric) / (2.0 * s.step);
  std::vector<double> lower(p * p * p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int l = 0; l < p; ++l) lower[(i * p + j) * p + l] = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
  std::vector<double> gam(p * p * p, 0.0);  // index (m*p + i)*p + j
  for (int m = 0; m < p; ++m)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        double v = 0.0;
        for (int l = 0; l < p; ++l) v += s.center.metric_inv(m, l) * lower[(i * p + j) * p + l];
        gam[(m * p + i) * p + j] = v;
      }
  return gam;
}

}  // namespace

CovariantDerivativeII covariant_derivative_II(const ImmersionChart& chart, std::span<const double> u,
                                              double step) {
  const int p = chart.p();
  const int q = chart.q();
  const Stencil s = stencil(chart, u, step);
  const FundamentalData fd = fundamental_data_from_jet(p, q, s.center.jet);
  const std::vector<double> gam = christoffel_fd(s, p);
  auto G = [&](int m, int i, int j) { return gam[(m * p + i) * p + j]; };

  // Coordinate components (nabla_k II)_ij as ambient vectors.
  std::vector<Vec> d(p * p * p);
  for (int k = 0; k < p; ++k)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        Vec v = s.center.normal_part((s.plus[k].ii[i * p + j] - s.minus[k].ii[i * p + j]) / (2.0 * s.step));
        for (int m = 0; m < p; ++m) {
          v -= G(m, k, i) * s.center.ii[m * p + j];
          v -= G(m, k, j) * s.center.ii[i * p + m];
        }
        d[(k * p + i) * p + j] = std::move(v);
      }

  CovariantDerivativeII out;
  out.p = p;
  out.q = q;
  out.c.assign(q * p * p * p, 0.0);
  const Mat& E = fd.frame_coeffs;
  for (int al = 0; al < q; ++al) {
    std::vector<double> comp(p * p * p);
    for (int x = 0; x < p * p * p; ++x) comp[x] = -eta_inner(p, d[x], fd.normal[al]);
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b)
        for (int c = 0; c < p; ++c) {
          double v = 0.0;
          for (int k = 0; k < p; ++k)
            for (int i = 0; i < p; ++i)
              for (int j = 0; j < p; ++j) v += E(k, a) * E(i, b) * E(j, c) * comp[(k * p + i) * p + j];
          out.at(al, a, b, c) = v;
        }
  }
  double res = 0.0;
  for (int al = 0; al < q; ++al)
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b)
        for (int c = 0; c < p; ++c) res = std::max(res, std::abs(out(al, a, b, c) - out(al, b, a, c)));
  out.codazzi_residual = res;
  return out;
}

std::vector<Vec> codifferential_A(const ImmersionChart& chart, std::span<const double> u, double step) {
  const int p = chart.p();
  const int q = chart.q();
  const CovariantDerivativeII nab = covariant_derivative_II(chart, u, step);
  const FundamentalData fd = fundamental_data(chart, u);
  std::vector<Vec> out;
  for (int c = 0; c < p; ++c) {
    Vec v = Vec::Zero(fd.position.size());
    for (int al = 0; al < q; ++al) {
      double s = 0.0;
      for (int a = 0; a < p; ++a) s += nab(al, a, a, c);
      v -= s * fd.normal[al];
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vec> mean_curvature_gradient(const ImmersionChart& chart, std::span<const double> u, double step) {
  const int p = chart.p();
  const Stencil s = stencil(chart, u, step);
  const FundamentalData fd = fundamental_data_from_jet(p, chart.q(), s.center.jet);
  std::vector<Vec> dH(p);
  for (int k = 0; k < p; ++k) {
    dH[k] = s.center.normal_part((s.plus[k].mean_curvature - s.minus[k].mean_curvature) / (2.0 * s.step));
  }
  std::vector<Vec> out;
  for (int c = 0; c < p; ++c) {
    Vec v = Vec::Zero(fd.position.size());
    for (int k = 0; k < p; ++k) v += fd.frame_coeffs(k, c) * dH[k];
    out.push_back(std::move(v));
  }
  return out;
}

double NormalCurvature::max_abs() const {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

NormalCurvature normal_curvature(const FundamentalData& fd) {
  const int p = fd.p, q = fd.q;
  NormalCurvature nc;
  nc.p = p;
  nc.q = q;
  nc.r.assign(p * p * q * q, 0.0);
  std::vector<Mat> B;
  for (const auto& m : fd.h) B.push_back(-m);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int al = 0; al < q; ++al)
        for (int be = 0; be < q; ++be) {
          // g_T(B_al e_b, B_be e_a) - g_T(B_al e_a, B_be e_b)
          nc.at(a, b, al, be) = B[al].col(b).dot(B[be].col(a)) - B[al].col(a).dot(B[be].col(b));
        }
  return nc;
}

NormalCurvature normal_curvature_fd(const ImmersionChart& chart, std::span<const double> u, double step) {
  const int p = chart.p(), q = chart.q();
  const Stencil s = stencil(chart, u, step);
  const FundamentalData fd = fundamental_data_from_jet(p, q, s.center.jet);
  NormalCurvature nc;
  nc.p = p;
  nc.q = q;
  nc.r.assign(p * p * q * q, 0.0);
  // eta_i = nabla^N_i (normal part of the constant vector c) = -g^{ab} Q(c, x_b) II_ai.
  auto eta = [&](const LocalGeometry& lg, const Vec& c, int i) {
    Vec v = Vec::Zero(c.size());
    for (int a = 0; a < p; ++a) {
      double w = 0.0;
      for (int b = 0; b < p; ++b) w += lg.metric_inv(a, b) * eta_inner(p, c, lg.jet.x1(b));
      v -= w * lg.ii[a * p + i];
    }
    return v;
  };
  for (int al = 0; al < q; ++al) {
    const Vec& c = fd.normal[al];
    // d[k][i] = d_k eta_i
    std::vector<Vec> d(p * p);
    for (int k = 0; k < p; ++k)
      for (int i = 0; i < p; ++i) d[k * p + i] = (eta(s.plus[k], c, i) - eta(s.minus[k], c, i)) / (2.0 * s.step);
    for (int k = 0; k < p; ++k)
      for (int i = 0; i < p; ++i) {
        const Vec r = s.center.normal_part(d[k * p + i] - d[i * p + k]);
        for (int be = 0; be < q; ++be) {
          const double val = eta_inner(p, r, fd.normal[be]);
          for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b)
              nc.at(a, b, al, be) += fd.frame_coeffs(k, a) * fd.frame_coeffs(i, b) * val;
        }
      }
  }
  return nc;
}

double max_commutator(const FundamentalData& fd) {
  double m = 0.0;
  for (int a = 0; a < fd.q; ++a)
    for (int b = a + 1; b < fd.q; ++b) m = std::max(m, (fd.h[a] * fd.h[b] - fd.h[b] * fd.h[a]).norm());
  return m;
}

}  // namespace hpq
