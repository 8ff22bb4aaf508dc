#include <cmath>

#include "doctest.h"
#include "hpq/bochner.hpp"
#include "hpq/graph_chart.hpp"
#include "hpq/products.hpp"
#include "oracles.hpp"

using namespace hpq;

namespace {

// Full contraction sum_{i,j,k} <R^N_{k,i} II(e_k,e_j) - II(R_{k,i} e_k, e_j) - II(e_k, R_{k,i} e_j), II(e_i,e_j)>
// with <U,V> = -Q(U,V) on the normal bundle.  Frame independent.
double commutation_sum(const FundamentalData& fd, double c) {
  const int p = fd.p, q = fd.q;
  const CurvatureReport r = curvature_from_II(fd, c);
  // rn(k,i,a,b): coefficient of n_b in R^N_{k,i} n_a.
  auto rn = [&](int k, int i, int a, int b) {
    const Mat m = fd.h[a] * fd.h[b];
    return -(m(i, k) - m(k, i));
  };
  double s = 0.0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k)
        for (int b = 0; b < q; ++b) {
          double v = 0.0;
          for (int a = 0; a < q; ++a) v += fd.h[a](k, j) * rn(k, i, a, b);
          for (int l = 0; l < p; ++l) v -= r.R(k, i, k, l) * fd.h[b](l, j);
          for (int l = 0; l < p; ++l) v -= r.R(k, i, j, l) * fd.h[b](k, l);
          s += v * fd.h[b](i, j);
        }
  return s;
}

void check_terms(const BochnerReport& r, std::array<double, 6> expect, double tol) {
  CHECK(r.grad_II_sq == doctest::Approx(expect[0]).epsilon(tol).scale(1.0));
  CHECK(r.comm_sq == doctest::Approx(expect[1]).epsilon(tol).scale(1.0));
  CHECK(r.sec_sq == doctest::Approx(expect[2]).epsilon(tol).scale(1.0));
  CHECK(r.scal_term == doctest::Approx(expect[3]).epsilon(tol).scale(1.0));
  CHECK(r.ric_sq == doctest::Approx(expect[4]).epsilon(tol).scale(1.0));
  CHECK(r.r_offdiag_sq == doctest::Approx(expect[5]).epsilon(tol).scale(1.0));
}

}  // namespace

TEST_CASE("algebraic terms reproduce the brute-force commutation sum") {
  Lcg64 rng(1);
  for (auto [p, q] : {std::pair{2, 1}, {3, 1}, {3, 2}, {4, 3}, {4, 1}, {2, 3}}) {
    for (int t = 0; t < 5; ++t) {
      const FundamentalData fd = oracle::random_fundamental_data(rng, p, q, true);
      const BochnerReport r = bochner_algebraic_terms(fd);
      const double algebraic = r.comm_sq + r.sec_sq + r.scal_term + r.ric_sq + r.r_offdiag_sq;
      const double ref = commutation_sum(fd, -1.0);
      CHECK(algebraic == doctest::Approx(ref).epsilon(1e-10));
      CHECK(r.rhs_total == doctest::Approx(algebraic).epsilon(1e-12));
      CHECK(r.comm_sq >= 0.0);
      CHECK(r.r_offdiag_sq >= 0.0);
    }
  }
}

TEST_CASE("algebraic terms are frame independent") {
  Lcg64 rng(2);
  const FundamentalData fd = oracle::random_fundamental_data(rng, 3, 2, true);
  const BochnerReport a = bochner_algebraic_terms(fd);
  const BochnerReport b = bochner_algebraic_terms(fd.rotated(oracle::random_orthogonal(rng, 3), oracle::random_orthogonal(rng, 2)));
  for (auto [x, y] : {std::pair{a.comm_sq, b.comm_sq}, {a.sec_sq, b.sec_sq}, {a.scal_term, b.scal_term},
                      {a.ric_sq, b.ric_sq}, {a.r_offdiag_sq, b.r_offdiag_sq}})
    CHECK(x == doctest::Approx(y).epsilon(1e-9));
}

TEST_CASE("totally geodesic H^3 in H^{3,1}") {
  const BochnerReport r = bochner_terms(totally_geodesic_chart(3, 1), Param{0.1, 0.2, -0.1});
  check_terms(r, {0, 0, 6, -18, 12, 0}, 1e-9);
  CHECK(std::abs(r.rhs_total) < 1e-8);
  CHECK(std::abs(r.residual) < 1e-5);
  CHECK(r.identity_asserted);
}

TEST_CASE("maximal H^2 x H^1 in H^{3,1}") {
  const ImmersionChart c = product_chart(maximal_product({2, 1}), 1);
  const BochnerReport r = bochner_terms(c, Param{0.2, -0.1, 0.3});
  check_terms(r, {0, 0, 4.5, -9, 4.5, 0}, 1e-8);
  CHECK(std::abs(r.rhs_total) < 1e-7);
  CHECK(std::abs(r.lhs_fd) < 1e-6);
  CHECK(std::abs(r.residual) < 1e-5);
  CHECK(r.scal == doctest::Approx(-3.0).epsilon(1e-9));
  // Lap Scal - 2p Scal = -2p Scal >= 0 since Scal is constant.
  CHECK(maximum_principle_inequality(r, 3) == doctest::Approx(18.0).epsilon(1e-6));
}

TEST_CASE("maximal products satisfy the identity") {
  for (auto n : {std::vector<int>{1, 1}, {2, 2}, {3, 1}, {1, 1, 1}, {2, 1, 1}}) {
    const ProductSpec spec = maximal_product(n);
    const int p = spec.p();
    const BochnerReport r = bochner_terms(product_chart(spec, spec.k()), Param(p, 0.1));
    CHECK(std::abs(r.residual) < 1e-5);
    CHECK(r.grad_II_sq < 1e-10);
    CHECK(r.comm_sq < 1e-12);
    // Every factor has constant curvature, so R has no off-diagonal components.
    CHECK(r.r_offdiag_sq < 1e-12);
    CHECK(maximum_principle_inequality(r, p) >= -1e-6);
  }
}

TEST_CASE("non-maximal charts are flagged") {
  const PseudoFlatSpec spec{2, 2, {1.0}, 0.3};
  const BochnerReport r = bochner_terms(pseudoflat_chart(spec), Param{0.0, 0.0});
  CHECK_FALSE(r.identity_asserted);
  CHECK(r.mean_curvature_norm == doctest::Approx(2.0 * std::tan(0.3)).epsilon(1e-9));
}

TEST_CASE("finite-difference jets reproduce the closed-form terms") {
  const ImmersionChart c = product_chart(maximal_product({1, 2}), 2);
  const Param u{0.1, -0.2, 0.05};
  const BochnerReport a = bochner_terms(c, u);
  // Wider stencils keep roundoff in the nested Laplacian small.
  const BochnerReport b = bochner_terms(c.with_jet_mode(JetMode::finite_difference(1e-2, true)), u, -1.0, {1e-2, 1e-2});
  CHECK(b.sec_sq == doctest::Approx(a.sec_sq).epsilon(1e-6));
  CHECK(b.ric_sq == doctest::Approx(a.ric_sq).epsilon(1e-6));
  CHECK(std::abs(b.residual) < 1e-4);
}

TEST_CASE("Laplacian of |II|^2 is second-order accurate on a random graph") {
  Lcg64 rng(9);
  const ImmersionChart c = graph_chart(random_graph_spec(2, 1, rng));
  const Param u{0.05, 0.1};
  const double l1 = bochner_terms(c, u, -1.0, {4e-3, 0.0}).lhs_fd;
  const double l2 = bochner_terms(c, u, -1.0, {2e-3, 0.0}).lhs_fd;
  const double l3 = bochner_terms(c, u, -1.0, {1e-3, 0.0}).lhs_fd;
  CHECK(std::abs(l1 - l2) / std::max(std::abs(l2 - l3), 1e-12) > 3.0);
}
