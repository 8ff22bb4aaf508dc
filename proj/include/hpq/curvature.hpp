#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpq/immersion.hpp"

namespace hpq {

/// Intrinsic curvature in the tangent frame of a FundamentalData.
/// R(k,i,j,l) = <R_{e_k,e_i} e_j, e_l>, sec(e_i,e_j) = R(i,j,j,i), Ric_ab = sum_j R(a,j,j,b).
struct CurvatureReport {
  int p = 0;
  double c = -1.0;
  std::vector<double> r;
  Mat sec;
  Mat ric;
  Vec ric_eigenvalues;  // descending
  double scal = 0.0;
  double trace_residual = 0.0;
  std::optional<double> gauss_residual;

  double R(int k, int i, int j, int l) const { return r[((k * p + i) * p + j) * p + l]; }
  double& R_at(int k, int i, int j, int l) { return r[((k * p + i) * p + j) * p + l]; }
};

/// Assembles R from the Gauss equation for a submanifold of a space form of curvature c.
CurvatureReport curvature_from_II(const FundamentalData& fd, double c = -1.0);

/// |Scal - c p(p-1) + |H|^2 - |II|^2|; for c = -1 this is |Scal + p(p-1) + |H|^2 - |II|^2|.
double trace_identity_residual(const FundamentalData& fd, const CurvatureReport& report);

/// Largest violation of antisymmetry, pair symmetry and the first Bianchi identity.
double curvature_symmetry_defect(const CurvatureReport& report);

/// Curvature of g_T alone: Christoffel symbols at stencil points, differenced.
/// Components are in the tangent frame that fundamental_data produces at u.
std::vector<double> intrinsic_curvature_fd(const ImmersionChart& chart, std::span<const double> u,
                                           double step = 0.0);

/// Gauss-equation report at u with gauss_residual = max |R_Gauss - R_intrinsic|.
CurvatureReport curvature_at(const ImmersionChart& chart, std::span<const double> u, double c = -1.0,
                             double step = 0.0);

struct BoundReport {
  double scal_margin = 0.0;  // p min{0, q-p+1} - Scal
  double ii_margin = 0.0;    // p min{p-1, q} - |II|^2
  double ric_max = 0.0;
  bool maximal = true;
  std::string warning;
};

double scal_bound(int p, int q);
double ii_bound(int p, int q);

/// Signed margins to the sharp bounds.  Warns when |H| >= max_h.
BoundReport bound_check(const CurvatureReport& report, const FundamentalData& fd, int p, int q,
                        double max_h = 1e-5);

}  // namespace hpq
