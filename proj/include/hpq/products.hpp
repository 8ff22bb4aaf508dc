#pragma once

#include <span>
#include <vector>

#include "hpq/chart.hpp"
#include "hpq/immersion.hpp"

namespace hpq {

/// Weighted product of hyperbolic spaces H^{n_1} x ... x H^{n_k}, x = sum alpha_i x_i.
struct ProductSpec {
  std::vector<int> n;
  std::vector<double> alpha;

  int k() const { return static_cast<int>(n.size()); }
  int p() const;
  /// Throws invalid_spec unless sizes match, n_i > 0, alpha_i > 0 and sum alpha^2 = 1 to 1e-12.
  void validate() const;
};

/// alpha_i = sqrt(n_i / p), the weights with H = 0.
std::vector<double> maximal_weights(const std::vector<int>& n);
ProductSpec maximal_product(const std::vector<int>& n);

/// Factor i lives in the spacelike coordinates of its block and the timelike
/// coordinate f_{i+1}.  Each H^{n_i} is parametrized by u -> (u, sqrt(1 + |u|^2)).
ImmersionChart product_chart(const ProductSpec& spec, int q, double half_width = 3.0);

/// Unit timelike factor points x_i (Q(x_i) = -1) at parameter u.
std::vector<Vec> product_factor_points(const ProductSpec& spec, int q, std::span<const double> u);

/// sum_i (n_i/alpha_i - p alpha_i) x_i.
Vec product_mean_curvature(const ProductSpec& spec, const std::vector<Vec>& factor_points);

/// II(X_i, X_i) for any unit X_i tangent to factor i:
/// (1/alpha_i)(sum_{j != i} alpha_j^2) x_i - sum_{j != i} alpha_j x_j.
Vec product_II_closed_form(const ProductSpec& spec, const std::vector<Vec>& factor_points, int i);

struct PseudoFlatSpec {
  int p = 2;
  int q = 1;
  std::vector<double> mu;  // unit vector of length q+1-p
  double theta = 0.0;      // in [0, pi/2)

  void validate() const;
};

/// a(u) = diag(e^{u_1},..,e^{u_p}, 1,..,1, e^{-u_p},..,e^{-u_1}) in the Cartan basis.
struct CartanElement {
  std::vector<double> u;

  Mat cartan_matrix(int q) const;
  Mat standard_matrix(int q) const;
};

/// x_{mu,theta} = cos(theta) sum (v_i + v_{-i}) + sin(theta) sum mu_j w_j, in standard coordinates.
Vec pseudoflat_base_point(const PseudoFlatSpec& spec);

/// u -> a(u) x_{mu,theta}, returned in standard coordinates.
ImmersionChart pseudoflat_chart(const PseudoFlatSpec& spec, double half_width = 3.0);

/// Mean curvature of Sigma_{mu,theta} at a(u) x_{mu,theta}:
/// (p sin^2(theta)/cos(theta)) sum(e^{u_i} v_i + e^{-u_i} v_{-i}) - p sin(theta) sum mu_j w_j.
Vec pseudoflat_mean_curvature(const PseudoFlatSpec& spec, std::span<const double> u);

struct FlatCertificate {
  double max_grad_II = 0.0;
  double max_commutator = 0.0;
};

/// max |nabla II| and max |[H^a, H^b]| over the given parameter points.
FlatCertificate parallel_flat_certificate(const ImmersionChart& chart, const std::vector<Param>& points);
/// Same over a 3^p grid in [-0.5, 0.5]^p of the product chart.
FlatCertificate parallel_flat_certificate(const ProductSpec& spec, int q);

}  // namespace hpq
