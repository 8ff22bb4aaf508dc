#include <cmath>

#include "doctest.h"
#include "hpq/error.hpp"
#include "hpq/graph_chart.hpp"
#include "hpq/immersion.hpp"
#include "hpq/products.hpp"
#include "oracles.hpp"

using namespace hpq;

namespace {

double max_abs_diff(const CovariantDerivativeII& a, const CovariantDerivativeII& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.c.size(); ++k) m = std::max(m, std::abs(a.c[k] - b.c[k]));
  return m;
}

Param random_param(Lcg64& rng, int p, double w) {
  Param u(p);
  for (auto& x : u) x = rng.uniform(-w, w);
  return u;
}

}  // namespace

TEST_CASE("totally geodesic chart has vanishing second fundamental form") {
  for (auto [p, q] : {std::pair{2, 1}, {3, 2}}) {
    const ImmersionChart c = totally_geodesic_chart(p, q);
    const Param u(p, 0.3);
    const FundamentalData fd = fundamental_data(c, u);
    CHECK(fd.ii_norm_sq() < 1e-28);
    CHECK(fd.mean_curvature.norm() < 1e-14);
    CHECK(fd.frame_defect() < 1e-12);
    CHECK(std::sqrt(covariant_derivative_II(c, u).norm_sq()) < 1e-10);
    for (const auto& v : codifferential_A(c, u)) CHECK(v.norm() < 1e-10);
  }
}

TEST_CASE("frame invariants on random charts") {
  Lcg64 rng(101);
  for (int t = 0; t < 20; ++t) {
    const int p = 2 + rng.below(2), q = 1 + rng.below(2);
    const ImmersionChart c = graph_chart(random_graph_spec(p, q, rng));
    const Param u = random_param(rng, p, 0.25);
    const FundamentalData fd = fundamental_data(c, u);
    const QuadraticSpace s = c.space();
    CHECK(fd.frame_defect() < 1e-9);
    CHECK(std::abs(s.norm_sq(fd.position) + 1.0) < 1e-12);
    for (const auto& m : fd.h) CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (const auto& e : fd.tangent) CHECK(std::abs(s.inner(fd.mean_curvature, e)) < 1e-12);
    for (const auto& e : fd.tangent) CHECK(std::abs(s.inner(fd.position, e)) < 1e-12);
    CHECK(std::abs(s.inner(fd.mean_curvature, fd.position)) < 1e-12);
    // e_a = sum_i E(i,a) x_i
    const ChartJet j = c.jet(u, 1);
    for (int a = 0; a < p; ++a) {
      Vec v = Vec::Zero(p + q + 1);
      for (int i = 0; i < p; ++i) v += fd.frame_coeffs(i, a) * j.x1(i);
      CHECK((v - fd.tangent[a]).norm() < 1e-12);
    }
  }
}

TEST_CASE("gauge invariance of scalar quantities") {
  Lcg64 rng(7);
  for (int t = 0; t < 10; ++t) {
    const int p = 2 + rng.below(2), q = 1 + rng.below(2);
    const ImmersionChart c = graph_chart(random_graph_spec(p, q, rng));
    const FundamentalData fd = fundamental_data(c, random_param(rng, p, 0.2));
    const FundamentalData r = fd.rotated(oracle::random_orthogonal(rng, p), oracle::random_orthogonal(rng, q));
    CHECK(r.frame_defect() < 1e-9);
    CHECK(std::abs(r.ii_norm_sq() - fd.ii_norm_sq()) < 1e-8);
    CHECK(std::abs(r.mean_curvature_norm_sq() - fd.mean_curvature_norm_sq()) < 1e-8);
    CHECK((r.mean_curvature - fd.mean_curvature).norm() < 1e-8);
  }
}

TEST_CASE("product surface n=(1,1) has |II|^2 = 2") {
  const ImmersionChart c = product_chart(maximal_product({1, 1}), 1);
  for (double a : {-0.7, 0.0, 0.4}) {
    const Param u{a, 0.3 - a};
    CHECK(std::abs(fundamental_data(c, u).ii_norm_sq() - 2.0) < 1e-9);
  }
}

TEST_CASE("pseudo-flat tangent vectors") {
  for (auto [p, q] : {std::pair{2, 1}, {2, 2}, {3, 3}}) {
    const double theta = p == q + 1 ? 0.0 : 0.35;
    PseudoFlatSpec spec{p, q, std::vector<double>(q + 1 - p, 0.0), theta};
    if (!spec.mu.empty()) spec.mu.back() = 1.0;
    const ImmersionChart c = pseudoflat_chart(spec);
    const ChartJet j = c.jet(Param(p, 0.0), 1);
    const Mat t = cartan_to_standard(p, q);
    const QuadraticSpace s(p, q);
    for (int i = 1; i <= p; ++i) {
      const Vec expect = std::cos(theta) * (t.col(cartan_index_v(p, q, i, 1)) - t.col(cartan_index_v(p, q, i, -1)));
      CHECK((j.x1(i - 1) - expect).norm() < 1e-14);
      CHECK(std::sqrt(s.norm_sq(j.x1(i - 1))) == doctest::Approx(std::cos(theta) / std::sqrt(p)).epsilon(1e-14));
    }
  }
}

TEST_CASE("covariant derivative of II matches the exact third-jet formula") {
  Lcg64 rng(31);
  for (int t = 0; t < 10; ++t) {
    const int p = 2 + rng.below(2), q = 1 + rng.below(2);
    const ImmersionChart c = graph_chart(random_graph_spec(p, q, rng));
    const Param u = random_param(rng, p, 0.25);
    const auto fdv = covariant_derivative_II(c, u);
    const auto ex = oracle::exact_nabla_II(c, u);
    CHECK(max_abs_diff(fdv, ex) < 1e-6);
    CHECK(fdv.codazzi_residual < 1e-6);
    for (int al = 0; al < q; ++al)
      for (int k = 0; k < p; ++k)
        for (int i = 0; i < p; ++i)
          for (int j = 0; j < p; ++j) CHECK(std::abs(ex(al, k, i, j) - ex(al, i, k, j)) < 1e-10);
  }
}

TEST_CASE("Codazzi residual converges at second order") {
  Lcg64 rng(77);
  int checked = 0;
  for (int t = 0; t < 5; ++t) {
    const int p = 2 + rng.below(2), q = 1 + rng.below(2);
    const ImmersionChart c = graph_chart(random_graph_spec(p, q, rng));
    const Param u = random_param(rng, p, 0.2);
    const double r1 = covariant_derivative_II(c, u, 2e-2).codazzi_residual;
    const double r2 = covariant_derivative_II(c, u, 1e-2).codazzi_residual;
    if (r1 < 1e-9) continue;
    ++checked;
    CHECK(r1 / r2 >= 3.0);
  }
  CHECK(checked > 0);
}

TEST_CASE("product charts have parallel second fundamental form") {
  for (auto n : {std::vector<int>{1, 1}, {2, 1}, {1, 1, 1}, {2, 2}}) {
    ProductSpec spec = maximal_product(n);
    const int q = static_cast<int>(n.size());
    const ImmersionChart c = product_chart(spec, q);
    const Param u(spec.p(), 0.2);
    CHECK(std::sqrt(covariant_derivative_II(c, u).norm_sq()) < 1e-6);
    for (const auto& v : codifferential_A(c, u)) CHECK(v.norm() < 1e-6);
  }
  // Non-maximal weights: still parallel.
  const ProductSpec pmc{{1, 1}, {0.8, 0.6}};
  CHECK(std::sqrt(covariant_derivative_II(product_chart(pmc, 1), Param{0.1, -0.3}).norm_sq()) < 1e-6);
}

TEST_CASE("codifferential equals minus the normal gradient of H") {
  PseudoFlatSpec spec{2, 2, {1.0}, 0.3};
  const ImmersionChart c = pseudoflat_chart(spec);
  const Param u{0.2, -0.1};
  const auto lhs = codifferential_A(c, u);
  const auto grad = mean_curvature_gradient(c, u);
  for (int k = 0; k < 2; ++k) CHECK((lhs[k] + grad[k]).norm() < 1e-6);

  Lcg64 rng(55);
  for (int t = 0; t < 5; ++t) {
    const int p = 2 + rng.below(2), q = 1 + rng.below(2);
    const ImmersionChart g = graph_chart(random_graph_spec(p, q, rng));
    const Param v = random_param(rng, p, 0.2);
    const auto a = codifferential_A(g, v);
    const auto b = mean_curvature_gradient(g, v);
    double scale = 1.0;
    for (const auto& x : b) scale = std::max(scale, x.norm());
    for (int k = 0; k < p; ++k) CHECK((a[k] + b[k]).norm() < 1e-6 * scale);
  }
}

TEST_CASE("normal curvature") {
  Lcg64 rng(12);
  SUBCASE("q = 1 gives zero") {
    const ImmersionChart c = graph_chart(random_graph_spec(3, 1, rng));
    CHECK(normal_curvature(fundamental_data(c, Param{0.1, 0.0, -0.1})).max_abs() == 0.0);
  }
  SUBCASE("products are normally flat") {
    const ImmersionChart c = product_chart(maximal_product({1, 2, 1}), 3);
    CHECK(normal_curvature(fundamental_data(c, Param{0.3, -0.2, 0.1, 0.4})).max_abs() < 1e-9);
  }
  SUBCASE("Ricci equation on random II data matches the brute-force right-hand side") {
    for (int t = 0; t < 20; ++t) {
      const FundamentalData fd = oracle::random_fundamental_data(rng, 3, 3, false);
      const NormalCurvature nc = normal_curvature(fd);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int al = 0; al < 3; ++al)
            for (int be = 0; be < 3; ++be) CHECK(std::abs(nc(a, b, al, be) - oracle::ricci_rhs(fd, a, b, al, be)) < 1e-12);
    }
  }
  SUBCASE("Ricci equation agrees with the differentiated normal connection") {
    for (int t = 0; t < 10; ++t) {
      const int p = 2 + rng.below(2), q = 2;
      const ImmersionChart c = graph_chart(random_graph_spec(p, q, rng));
      const Param u = random_param(rng, p, 0.2);
      const NormalCurvature a = normal_curvature(fundamental_data(c, u));
      const NormalCurvature b = normal_curvature_fd(c, u);
      double d = 0.0;
      for (std::size_t k = 0; k < a.r.size(); ++k) d = std::max(d, std::abs(a.r[k] - b.r[k]));
      CHECK(d < 1e-6);
      CHECK(a.max_abs() > 1e-4);
    }
  }
  SUBCASE("R^N vanishes iff the shape operators commute") {
    for (int t = 0; t < 20; ++t) {
      FundamentalData fd = oracle::random_fundamental_data(rng, 3, 2, false);
      if (t % 2 == 0) {
        // Simultaneously diagonal shape operators.
        const Mat o = oracle::random_orthogonal(rng, 3);
        for (auto& m : fd.h) {
          Vec d(3);
          for (int i = 0; i < 3; ++i) d[i] = rng.normal();
          m = o * d.asDiagonal() * o.transpose();
        }
      }
      const bool flat = normal_curvature(fd).max_abs() < 1e-9;
      CHECK(flat == (max_commutator(fd) < 1e-9));
      CHECK(flat == (t % 2 == 0));
    }
  }
}

TEST_CASE("finite-difference jets agree with closed-form jets") {
  Lcg64 rng(19);
  const ImmersionChart c = graph_chart(random_graph_spec(2, 2, rng));
  const Param u{0.1, -0.15};
  const ChartJet a = c.jet(u);
  for (bool rich : {false, true}) {
    const ChartJet b = c.with_jet_mode(JetMode::finite_difference(1e-4, rich)).jet(u);
    double e1 = 0, e2 = 0, e3 = 0;
    for (int i = 0; i < 2; ++i) e1 = std::max(e1, (a.d1[i] - b.d1[i]).norm());
    for (int i = 0; i < 4; ++i) e2 = std::max(e2, (a.d2[i] - b.d2[i]).norm());
    for (int i = 0; i < 8; ++i) e3 = std::max(e3, (a.d3[i] - b.d3[i]).norm());
    CHECK(e1 < 1e-8);
    CHECK(e2 < 1e-6);
    CHECK(e3 < 1e-4);
  }
}

TEST_CASE("charts reject bad input") {
  const ImmersionChart c = totally_geodesic_chart(2, 1, 0.5);
  CHECK_THROWS_AS(c.jet(Param{0.6, 0.0}), GeometryError);
  CHECK_THROWS_AS(covariant_derivative_II(c, Param{0.5 - 5e-5, 0.0}), GeometryError);
  GraphSpec steep;
  steep.p = 2;
  steep.q = 1;
  steep.terms.push_back(GraphTerm{0, 3.0, {1, 0}});
  CHECK_THROWS_AS(fundamental_data(graph_chart(steep), Param{0.0, 0.0}), GeometryError);
}
