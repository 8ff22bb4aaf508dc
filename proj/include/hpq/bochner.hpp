#pragma once

#include <span>

#include "hpq/curvature.hpp"

namespace hpq {

/// Right-hand terms of
///   1/2 Lap |II|^2 = |nabla II|^2 + sum_{a<b} |[H^a,H^b]|^2 + sum_{i!=j} sec(e_i,e_j)^2
///                    - c p Scal + sum_i Ric(e_i,e_i)^2 + r_offdiag_sq
/// for a maximal submanifold, all evaluated in a Ric-eigenframe.
struct BochnerReport {
  double grad_II_sq = 0.0;
  double comm_sq = 0.0;       // sum over unordered pairs a < b
  double sec_sq = 0.0;
  double scal_term = 0.0;     // -c p Scal
  double ric_sq = 0.0;
  double r_offdiag_sq = 0.0;  // 2 sum_{i<k} sum_{j<l, (j,l) != (i,k)} R(k,i,j,l)^2
  double rhs_total = 0.0;
  double lhs_fd = 0.0;        // 1/2 Lap |II|^2 by finite differences
  double residual = 0.0;
  double scal = 0.0;
  double mean_curvature_norm = 0.0;
  bool identity_asserted = true;  // false when |H| >= 1e-5
};

struct BochnerOptions {
  double laplacian_step = 1e-3;
  double derivative_step = 0.0;  // 0 selects default_derivative_step
};

BochnerReport bochner_terms(const ImmersionChart& chart, std::span<const double> u, double c = -1.0,
                            const BochnerOptions& opts = {});

/// Lap Scal - 2p Scal with Lap Scal = 2 lhs_fd (H = 0).
double maximum_principle_inequality(const BochnerReport& report, int p);

/// The six algebraic terms from fundamental data alone (grad_II_sq left at 0).
BochnerReport bochner_algebraic_terms(const FundamentalData& fd, double c = -1.0);

}  // namespace hpq
