#include "hpq/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hpq/error.hpp"

namespace hpq {

CurvatureReport curvature_from_II(const FundamentalData& fd, double c) {
  const int p = fd.p;
  CurvatureReport rep;
  rep.p = p;
  rep.c = c;
  rep.r.assign(p * p * p * p, 0.0);
  // g_N(II_ab, II_cd) = -sum_alpha h_ab h_cd
  auto gn = [&](int a, int b, int cc, int d) {
    double s = 0.0;
    for (const auto& m : fd.h) s -= m(a, b) * m(cc, d);
    return s;
  };
  for (int k = 0; k < p; ++k)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        for (int l = 0; l < p; ++l) {
          const double cst = c * (double(i == j && k == l) - double(k == j && i == l));
          rep.R_at(k, i, j, l) = cst + gn(i, j, k, l) - gn(k, j, i, l);
        }
  rep.sec = Mat::Zero(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      if (a != b) rep.sec(a, b) = rep.R(a, b, b, a);
  rep.ric = Mat::Zero(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int j = 0; j < p; ++j) rep.ric(a, b) += rep.R(a, j, j, b);
  rep.ric = 0.5 * (rep.ric + rep.ric.transpose()).eval();
  rep.scal = rep.ric.trace();
  Eigen::SelfAdjointEigenSolver<Mat> es(rep.ric, Eigen::EigenvaluesOnly);
  rep.ric_eigenvalues = es.eigenvalues().reverse();
  rep.trace_residual = trace_identity_residual(fd, rep);
  return rep;
}

double trace_identity_residual(const FundamentalData& fd, const CurvatureReport& report) {
  const int p = fd.p;
  return std::abs(report.scal - report.c * p * (p - 1) + fd.mean_curvature_norm_sq() - fd.ii_norm_sq());
}

double curvature_symmetry_defect(const CurvatureReport& rep) {
  const int p = rep.p;
  double d = 0.0;
  for (int k = 0; k < p; ++k)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        for (int l = 0; l < p; ++l) {
          d = std::max(d, std::abs(rep.R(k, i, j, l) + rep.R(i, k, j, l)));
          d = std::max(d, std::abs(rep.R(k, i, j, l) + rep.R(k, i, l, j)));
          d = std::max(d, std::abs(rep.R(k, i, j, l) - rep.R(j, l, k, i)));
          d = std::max(d, std::abs(rep.R(k, i, j, l) + rep.R(i, j, k, l) + rep.R(j, k, i, l)));
        }
  return d;
}

namespace {

/// Gamma^m_ij at u from the metric and its first derivatives, index (m*p+i)*p+j.
std::vector<double> christoffel_at(const ImmersionChart& chart, std::span<const double> u) {
  const int p = chart.p();
  const ChartJet j = chart.jet(u, 2);
  Mat g(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) g(a, b) = eta_inner(p, j.x1(a), j.x1(b));
  const Mat gi = g.inverse();
  auto dg = [&](int k, int a, int b) {
    return eta_inner(p, j.x2(a, k), j.x1(b)) + eta_inner(p, j.x1(a), j.x2(b, k));
  };
  std::vector<double> out(p * p * p, 0.0);
  for (int m = 0; m < p; ++m)
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) {
        double v = 0.0;
        for (int l = 0; l < p; ++l) v += gi(m, l) * 0.5 * (dg(a, b, l) + dg(b, a, l) - dg(l, a, b));
        out[(m * p + a) * p + b] = v;
      }
  return out;
}

}  // namespace

std::vector<double> intrinsic_curvature_fd(const ImmersionChart& chart, std::span<const double> u, double step) {
  const int p = chart.p();
  if (step <= 0) step = default_derivative_step(chart);
  if (!chart.domain().contains(u, step + chart.jet_margin())) {
    throw GeometryError(ErrorCode::stencil_out_of_domain, "curvature stencil leaves the chart domain");
  }
  const FundamentalData fd = fundamental_data(chart, u);
  const std::vector<double> gam = christoffel_at(chart, u);
  std::vector<std::vector<double>> dgam(p);
  for (int k = 0; k < p; ++k) {
    std::vector<double> a(u.begin(), u.end()), b(u.begin(), u.end());
    a[k] += step;
    b[k] -= step;
    const auto ga = christoffel_at(chart, a);
    const auto gb = christoffel_at(chart, b);
    dgam[k].resize(p * p * p);
    for (int x = 0; x < p * p * p; ++x) dgam[k][x] = (ga[x] - gb[x]) / (2.0 * step);
  }
  auto G = [&](int m, int i, int j) { return gam[(m * p + i) * p + j]; };
  auto dG = [&](int k, int m, int i, int j) { return dgam[k][(m * p + i) * p + j]; };
  // Coordinate R(d_k, d_i) d_j = R^m d_m, lowered with g.
  std::vector<double> rc(p * p * p * p, 0.0);
  for (int k = 0; k < p; ++k)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        for (int m = 0; m < p; ++m) {
          double v = dG(k, m, i, j) - dG(i, m, k, j);
          for (int n = 0; n < p; ++n) v += G(m, k, n) * G(n, i, j) - G(m, i, n) * G(n, k, j);
          for (int l = 0; l < p; ++l) rc[((k * p + i) * p + j) * p + l] += fd.metric(l, m) * v;
        }
  const Mat& E = fd.frame_coeffs;
  // Contract one index at a time.
  std::vector<double> cur = rc, nxt(p * p * p * p);
  for (int slot = 0; slot < 4; ++slot) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    int stride = 1;
    for (int s = slot + 1; s < 4; ++s) stride *= p;
    for (int x = 0; x < p * p * p * p; ++x) {
      const int idx = (x / stride) % p;
      const int base = x - idx * stride;
      for (int a = 0; a < p; ++a) nxt[base + a * stride] += E(idx, a) * cur[x];
    }
    std::swap(cur, nxt);
  }
  return cur;
}

CurvatureReport curvature_at(const ImmersionChart& chart, std::span<const double> u, double c, double step) {
  const FundamentalData fd = fundamental_data(chart, u);
  CurvatureReport rep = curvature_from_II(fd, c);
  const std::vector<double> ri = intrinsic_curvature_fd(chart, u, step);
  double m = 0.0;
  for (std::size_t x = 0; x < ri.size(); ++x) m = std::max(m, std::abs(ri[x] - rep.r[x]));
  rep.gauss_residual = m;
  return rep;
}

double scal_bound(int p, int q) { return p * std::min(0, q - p + 1); }
double ii_bound(int p, int q) { return p * std::min(p - 1, q); }

BoundReport bound_check(const CurvatureReport& report, const FundamentalData& fd, int p, int q, double max_h) {
  BoundReport b;
  b.scal_margin = scal_bound(p, q) - report.scal;
  b.ii_margin = ii_bound(p, q) - fd.ii_norm_sq();
  b.ric_max = report.ric_eigenvalues.size() ? report.ric_eigenvalues[0] : 0.0;
  const double hn = std::sqrt(fd.mean_curvature_norm_sq());
  b.maximal = hn < max_h;
  if (!b.maximal) {
    std::ostringstream os;
    os << "|H| = " << hn << " exceeds maximality tolerance " << max_h << "; bounds not asserted";
    b.warning = os.str();
  }
  return b;
}

}  // namespace hpq
