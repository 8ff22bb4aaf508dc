#include <cmath>

#include "doctest.h"
#include "hpq/error.hpp"
#include "hpq/graph_chart.hpp"
#include "hpq/immersion.hpp"
#include "hpq/products.hpp"
#include "oracles.hpp"

using namespace hpq;

TEST_CASE("product mean curvature for n = (1,1), alpha = (0.8, 0.6)") {
  const ProductSpec spec{{1, 1}, {0.8, 0.6}};
  const Param u{0.3, -0.2};
  const auto xs = product_factor_points(spec, 1, u);
  const Vec h = product_mean_curvature(spec, xs);
  const Vec expect = -0.35 * xs[0] + (1.0 / 0.6 - 1.2) * xs[1];
  CHECK((h - expect).norm() < 1e-14);
  CHECK(1.0 / 0.6 - 1.2 == doctest::Approx(0.4667).epsilon(1e-4));
  const FundamentalData fd = fundamental_data(product_chart(spec, 1), u);
  CHECK((fd.mean_curvature - h).norm() < 1e-9);
}

TEST_CASE("factor points and closed-form II") {
  const ProductSpec spec{{2, 1, 1}, {0.6, 0.64, 0.48}};
  spec.validate();
  const int q = 3;
  const Param u{0.1, 0.2, -0.3, 0.4};
  const auto xs = product_factor_points(spec, q, u);
  const QuadraticSpace s(spec.p(), q);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(s.inner(xs[i], xs[j]) == doctest::Approx(i == j ? -1.0 : 0.0));
  // x = sum alpha_i x_i is the chart position.
  const ImmersionChart c = product_chart(spec, q);
  Vec x = Vec::Zero(spec.p() + q + 1);
  for (int i = 0; i < 3; ++i) x += spec.alpha[i] * xs[i];
  CHECK((c.position(u) - x).norm() < 1e-14);
  // Closed-form II for each factor: tangent to x, orthogonal to x, traces to H.
  Vec sum = Vec::Zero(x.size());
  for (int i = 0; i < 3; ++i) {
    const Vec ni = product_II_closed_form(spec, xs, i);
    CHECK(std::abs(s.inner(ni, x)) < 1e-14);
    sum += spec.n[i] * ni;
  }
  CHECK((sum - product_mean_curvature(spec, xs)).norm() < 1e-13);
  // II(X,X) from the chart matches on unit factor directions: first factor, first coordinate.
  const FundamentalData fd = fundamental_data(c, u);
  const ChartJet j = c.jet(u, 2);
  const Vec t = j.x1(2) / std::sqrt(fd.metric(2, 2));  // factor 2 is one-dimensional
  Vec ii = Vec::Zero(x.size());
  for (int al = 0; al < q; ++al) {
    double v = 0.0;
    for (int a = 0; a < spec.p(); ++a)
      for (int b = 0; b < spec.p(); ++b) {
        // components of t in the orthonormal frame
        v += s.inner(t, fd.tangent[a]) * s.inner(t, fd.tangent[b]) * fd.h[al](a, b);
      }
    ii += v * fd.normal[al];
  }
  CHECK((ii - product_II_closed_form(spec, xs, 1)).norm() < 1e-9);
}

TEST_CASE("maximal weights") {
  const auto w = maximal_weights({2, 1, 1});
  CHECK(w[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(w[1] == doctest::Approx(0.5));
  const ProductSpec spec = maximal_product({3, 2});
  const auto xs = product_factor_points(spec, 2, Param(5, 0.3));
  CHECK(product_mean_curvature(spec, xs).norm() < 1e-14);
  CHECK_THROWS_AS((ProductSpec{{1, 1}, {0.8, 0.8}}.validate()), GeometryError);
  CHECK_THROWS_AS((ProductSpec{{1, 0}, {0.8, 0.6}}.validate()), GeometryError);
  CHECK_THROWS_AS(product_chart(maximal_product({1, 1, 1}), 1), GeometryError);
}

TEST_CASE("constant |H| on non-maximal products") {
  const ProductSpec spec{{1, 2}, {0.6, 0.8}};
  const ImmersionChart c = product_chart(spec, 2);
  Lcg64 rng(3);
  const double ref = fundamental_data(c, Param(3, 0.0)).mean_curvature_norm_sq();
  for (int t = 0; t < 5; ++t) {
    Param u(3);
    for (auto& x : u) x = rng.uniform(-1, 1);
    CHECK(fundamental_data(c, u).mean_curvature_norm_sq() == doctest::Approx(ref).epsilon(1e-9));
    const NormalCurvature nc = normal_curvature(fundamental_data(c, u));
    CHECK(nc.max_abs() < 1e-9);
  }
}

TEST_CASE("Cartan elements") {
  const CartanElement a{{0.3, -0.7}};
  const Mat m = a.standard_matrix(2);
  const QuadraticSpace s(2, 2);
  CHECK((m.transpose() * s.gram() * m - s.gram()).cwiseAbs().maxCoeff() < 1e-13);
  const Mat cm = a.cartan_matrix(2);
  CHECK(cm(0, 0) == doctest::Approx(std::exp(0.3)));
  CHECK(cm(4, 4) == doctest::Approx(std::exp(-0.3)));
  CHECK(cm(2, 2) == 1.0);
}

TEST_CASE("pseudo-flat orbit") {
  for (auto [p, q] : {std::pair{2, 1}, {2, 3}, {3, 2}, {3, 4}}) {
    const double theta = p == q + 1 ? 0.0 : 0.45;
    PseudoFlatSpec spec{p, q, {}, theta};
    for (int j = 0; j < q + 1 - p; ++j) spec.mu.push_back(j == 0 ? 0.6 : (j == 1 ? 0.8 : 0.0));
    if (q + 1 - p == 1) spec.mu = {-1.0};
    spec.validate();
    const ImmersionChart c = pseudoflat_chart(spec);
    const QuadraticSpace s(p, q);
    CHECK(s.norm_sq(pseudoflat_base_point(spec)) == doctest::Approx(-1.0).epsilon(1e-14));
    Lcg64 rng(p * 10 + q);
    for (int t = 0; t < 4; ++t) {
      Param u(p);
      for (auto& x : u) x = rng.uniform(-1, 1);
      const FundamentalData fd = fundamental_data(c, u);
      // Flat metric: coordinate vectors are orthogonal with Q = cos^2(theta)/p.
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
          CHECK(fd.metric(i, j) == doctest::Approx(i == j ? std::cos(theta) * std::cos(theta) / p : 0.0).epsilon(1e-12));
      const Vec h = pseudoflat_mean_curvature(spec, u);
      CHECK((fd.mean_curvature - h).norm() < 1e-9);
      CHECK(std::sqrt(fd.mean_curvature_norm_sq()) == doctest::Approx(p * std::tan(theta)).epsilon(1e-10));
      CHECK(std::abs(s.inner(h, c.position(u))) < 1e-12);
      // Orbit structure: position(u) = a(u) x_base.
      const Vec y = CartanElement{u}.standard_matrix(q) * pseudoflat_base_point(spec);
      CHECK((c.position(u) - y).norm() < 1e-12);
    }
  }
  CHECK_THROWS_AS((PseudoFlatSpec{3, 1, {}, 0.2}.validate()), GeometryError);
  CHECK_THROWS_AS((PseudoFlatSpec{2, 2, {0.5}, 0.2}.validate()), GeometryError);
  CHECK_THROWS_AS((PseudoFlatSpec{2, 2, {1.0}, 1.6}.validate()), GeometryError);
  CHECK_THROWS_AS((PseudoFlatSpec{2, 1, {}, 0.3}.validate()), GeometryError);
}

TEST_CASE("parallel and flat certificates") {
  for (auto n : {std::vector<int>{1, 1}, {2, 1}, {1, 1, 1}}) {
    const FlatCertificate cert = parallel_flat_certificate(maximal_product(n), static_cast<int>(n.size()));
    CHECK(cert.max_grad_II < 1e-6);
    CHECK(cert.max_commutator < 1e-9);
  }
  const PseudoFlatSpec spec{2, 2, {1.0}, 0.3};
  const ImmersionChart c = pseudoflat_chart(spec);
  const FlatCertificate cp = parallel_flat_certificate(c, {Param{0.0, 0.0}, Param{0.2, -0.3}});
  CHECK(cp.max_grad_II < 1e-6);
  CHECK(cp.max_commutator < 1e-9);
  // A generic graph is neither parallel nor normally flat.
  GraphSpec g;
  g.p = 2;
  g.q = 2;
  g.terms = {GraphTerm{0, 0.3, {2, 0}}, GraphTerm{0, 0.2, {1, 2}}, GraphTerm{1, 0.25, {1, 1}}, GraphTerm{1, 0.1, {0, 3}}};
  const FlatCertificate cg = parallel_flat_certificate(graph_chart(g), {Param{0.05, 0.1}});
  CHECK(cg.max_grad_II > 1e-3);
  CHECK(cg.max_commutator > 1e-3);
}

TEST_CASE("pseudo-flat mean curvature coefficient is p, not sqrt(p)") {
  // The vector with coefficient sqrt(p) on the v-part is not Q-orthogonal to the point,
  // so it cannot be a mean curvature vector; coefficient p is and matches the chart.
  const PseudoFlatSpec spec{2, 2, {1.0}, 0.3};
  const Param u{0.4, -0.2};
  const int p = spec.p, q = spec.q;
  const Mat t = cartan_to_standard(p, q);
  const QuadraticSpace s(p, q);
  auto candidate = [&](double coef) {
    Vec h = Vec::Zero(p + q + 1);
    for (int i = 1; i <= p; ++i) {
      h += coef * std::sin(spec.theta) * std::sin(spec.theta) / std::cos(spec.theta) *
           (std::exp(u[i - 1]) * t.col(cartan_index_v(p, q, i, 1)) + std::exp(-u[i - 1]) * t.col(cartan_index_v(p, q, i, -1)));
    }
    for (int j = 1; j <= q + 1 - p; ++j) h -= p * std::sin(spec.theta) * spec.mu[j - 1] * t.col(cartan_index_w(p, j));
    return h;
  };
  const Vec x = pseudoflat_chart(spec).position(u);
  CHECK(std::abs(s.inner(candidate(p), x)) < 1e-12);
  CHECK((candidate(p) - pseudoflat_mean_curvature(spec, u)).norm() < 1e-12);
  CHECK(std::abs(s.inner(candidate(std::sqrt(double(p))), x)) > 1e-2);
}
