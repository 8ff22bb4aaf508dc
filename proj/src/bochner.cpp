#include "hpq/bochner.hpp"

#include <cmath>

#include "hpq/error.hpp"

namespace hpq {

BochnerReport bochner_algebraic_terms(const FundamentalData& fd0, double c) {
  const int p = fd0.p;
  const CurvatureReport rep0 = curvature_from_II(fd0, c);
  Eigen::SelfAdjointEigenSolver<Mat> es(rep0.ric);
  const Mat v = es.eigenvectors().rowwise().reverse();
  const FundamentalData fd = fd0.rotated(v, Mat::Identity(fd0.q, fd0.q));
  const CurvatureReport rep = curvature_from_II(fd, c);

  BochnerReport b;
  b.scal = rep.scal;
  b.mean_curvature_norm = std::sqrt(fd.mean_curvature_norm_sq());
  for (int a = 0; a < fd.q; ++a)
    for (int be = a + 1; be < fd.q; ++be) b.comm_sq += (fd.h[a] * fd.h[be] - fd.h[be] * fd.h[a]).squaredNorm();
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j) b.sec_sq += rep.sec(i, j) * rep.sec(i, j);
  b.scal_term = -c * p * rep.scal;
  for (int i = 0; i < p; ++i) b.ric_sq += rep.ric(i, i) * rep.ric(i, i);
  for (int i = 0; i < p; ++i)
    for (int k = i + 1; k < p; ++k)
      for (int j = 0; j < p; ++j)
        for (int l = j + 1; l < p; ++l) {
          if (j == i && l == k) continue;
          b.r_offdiag_sq += 2.0 * rep.R(k, i, j, l) * rep.R(k, i, j, l);
        }
  b.rhs_total = b.comm_sq + b.sec_sq + b.scal_term + b.ric_sq + b.r_offdiag_sq;
  b.identity_asserted = b.mean_curvature_norm < 1e-5;
  return b;
}

BochnerReport bochner_terms(const ImmersionChart& chart, std::span<const double> u, double c,
                            const BochnerOptions& opts) {
  const int p = chart.p();
  const LocalGeometry center = local_geometry(chart, u);
  const FundamentalData fd = fundamental_data_from_jet(p, chart.q(), center.jet);
  BochnerReport b = bochner_algebraic_terms(fd, c);
  b.grad_II_sq = covariant_derivative_II(chart, u, opts.derivative_step).norm_sq();
  b.rhs_total += b.grad_II_sq;

  const double h = opts.laplacian_step;
  const Mat& E = fd.frame_coeffs;
  auto f_at = [&](const Eigen::VectorXd& du) {
    std::vector<double> w(u.begin(), u.end());
    for (int i = 0; i < p; ++i) w[i] += du[i];
    if (!chart.domain().contains(w, chart.jet_margin())) {
      throw GeometryError(ErrorCode::stencil_out_of_domain, "Laplacian stencil leaves the chart domain");
    }
    return local_geometry(chart, w).ii_norm_sq;
  };
  const double f0 = center.ii_norm_sq;
  double second = 0.0;
  for (int a = 0; a < p; ++a) {
    const Eigen::VectorXd d = h * E.col(a);
    second += (f_at(d) - 2.0 * f0 + f_at(-d)) / (h * h);
  }
  // g^{ij} Gamma^k_ij d_k f, Gamma exact from the 2-jet.
  Eigen::VectorXd trace_gamma = Eigen::VectorXd::Zero(p);
  for (int k = 0; k < p; ++k)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        for (int l = 0; l < p; ++l)
          trace_gamma[k] += center.metric_inv(i, j) * center.metric_inv(k, l) *
                            eta_inner(p, center.jet.x2(i, j), center.jet.x1(l));
  double first = 0.0;
  for (int k = 0; k < p; ++k) {
    const Eigen::VectorXd d = h * Eigen::VectorXd::Unit(p, k);
    first += trace_gamma[k] * (f_at(d) - f_at(-d)) / (2.0 * h);
  }
  b.lhs_fd = 0.5 * (second - first);
  b.residual = std::abs(b.rhs_total - b.lhs_fd);
  return b;
}

double maximum_principle_inequality(const BochnerReport& report, int p) {
  return 2.0 * report.lhs_fd - 2.0 * p * report.scal;
}

}  // namespace hpq
