#pragma once

#include <span>
#include <vector>

#include "hpq/chart.hpp"

namespace hpq {

/// Adapted frame and second fundamental form at one point.
///
/// h[alpha](i,j) = -g_N(II(e_i,e_j), n_alpha), so II = sum_alpha h[alpha] n_alpha
/// and |II|^2 is the plain sum of squares.
struct FundamentalData {
  int p = 0;
  int q = 0;
  Vec position;
  std::vector<Vec> tangent;  // e_1..e_p, Q = +1
  std::vector<Vec> normal;   // n_1..n_q, Q = -1
  Mat metric;                // g_ij = Q(x_i, x_j)
  Mat frame_coeffs;          // e_a = sum_i E(i,a) x_i
  std::vector<Mat> h;        // shape operators H^alpha
  Vec mean_curvature;        // sum_i II(e_i,e_i)

  double ii_norm_sq() const;
  /// <H,H> = -Q(H,H).
  double mean_curvature_norm_sq() const;
  /// Same point in the frame (e O_T, n O_N) for orthogonal O_T, O_N.
  FundamentalData rotated(const Mat& tangent_rot, const Mat& normal_rot) const;
  /// Max deviation of the frame Gram matrix from diag(+1 x p, -1 x q).
  double frame_defect() const;
  /// Normal component of an ambient vector (excluding the position direction).
  Vec normal_part(const Vec& v) const;
};

FundamentalData fundamental_data(const ImmersionChart& chart, std::span<const double> u);
FundamentalData fundamental_data_from_jet(int p, int q, const ChartJet& jet);

/// Frame components of the covariant derivative of II, with the same sign
/// convention as FundamentalData::h: value(alpha,k,i,j) = -g_N((nabla_{e_k} II)(e_i,e_j), n_alpha).
struct CovariantDerivativeII {
  int p = 0;
  int q = 0;
  std::vector<double> c;
  double codazzi_residual = 0.0;

  double operator()(int alpha, int k, int i, int j) const { return c[((alpha * p + k) * p + i) * p + j]; }
  double& at(int alpha, int k, int i, int j) { return c[((alpha * p + k) * p + i) * p + j]; }
  double norm_sq() const;
};

/// Step used by the derivative stencils when none is given.
double default_derivative_step(const ImmersionChart& chart);

/// nabla II by central differences of the coordinate II field, with Christoffel
/// symbols from central differences of g_T.
CovariantDerivativeII covariant_derivative_II(const ImmersionChart& chart, std::span<const double> u,
                                              double step = 0.0);

/// (d*A)(e_c) = -sum_a (nabla_{e_a} II)(e_a, e_c), one normal vector per tangent frame vector.
std::vector<Vec> codifferential_A(const ImmersionChart& chart, std::span<const double> u,
                                  double step = 0.0);

/// nabla^N_{e_c} H for each tangent frame vector, from differences of the H field.
std::vector<Vec> mean_curvature_gradient(const ImmersionChart& chart, std::span<const double> u,
                                         double step = 0.0);

/// value(a,b,alpha,beta) = g_N(R^N_{e_a,e_b} n_alpha, n_beta).
struct NormalCurvature {
  int p = 0;
  int q = 0;
  std::vector<double> r;

  double operator()(int a, int b, int alpha, int beta) const { return r[((a * p + b) * q + alpha) * q + beta]; }
  double& at(int a, int b, int alpha, int beta) { return r[((a * p + b) * q + alpha) * q + beta]; }
  double max_abs() const;
};

/// Ricci equation: g_T(B_alpha e_b, B_beta e_a) - g_T(B_alpha e_a, B_beta e_b), B_alpha = -H^alpha.
NormalCurvature normal_curvature(const FundamentalData& fd);

/// Normal curvature from second differences of normal fields, independent of the Ricci equation.
NormalCurvature normal_curvature_fd(const ImmersionChart& chart, std::span<const double> u,
                                    double step = 0.0);

/// Frobenius norm of [H^alpha, H^beta], maximized over pairs.
double max_commutator(const FundamentalData& fd);

/// Local quantities at a parameter point in coordinates.
struct LocalGeometry {
  ChartJet jet;
  Mat metric;
  Mat metric_inv;
  std::vector<Vec> ii;  // p*p coordinate II_ij, ambient normal vectors
  Vec mean_curvature;   // g^ij II_ij
  double ii_norm_sq = 0.0;

  /// v + Q(v,x) x - g^{ab} Q(v,x_b) x_a.
  Vec normal_part(const Vec& v) const;
};

LocalGeometry local_geometry(const ImmersionChart& chart, std::span<const double> u);

}  // namespace hpq
