#include <cmath>

#include "doctest.h"
#include "hpq/error.hpp"
#include "hpq/products.hpp"
#include "hpq/random.hpp"
#include "hpq/spaceform.hpp"

using namespace hpq;

namespace {

/// Random point of H^{p,q} and a unit tangent vector there.
std::pair<Vec, Vec> random_point_and_tangent(Lcg64& rng, const QuadraticSpace& s) {
  const int n = s.dim();
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1, 1);
  x[s.p()] += 3.0;
  x = normalize_to_quadric(s, x);
  Vec X;
  do {
    X = Vec(n);
    for (int i = 0; i < n; ++i) X[i] = rng.uniform(-1, 1);
    X = project_tangent(s, x, X);
  } while (s.norm_sq(X) < 0.1);
  X /= std::sqrt(s.norm_sq(X));
  return {x, X};
}

}  // namespace

TEST_CASE("geodesic basics") {
  QuadraticSpace s(1, 0);
  QuadricPoint x(s, Vec::Unit(2, 1));
  const Vec X = Vec::Unit(2, 0);
  CHECK((geodesic(s, x, X, 0.0).vec() - x.vec()).norm() == 0.0);
  const Vec g = geodesic(s, x, X, 1.0).vec();
  CHECK(g[0] == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(geodesic(s, x, Vec::Unit(2, 1), 1.0), GeometryError);
  CHECK_THROWS_AS(geodesic(s, x, 2.0 * X, 1.0), GeometryError);
}

TEST_CASE("geodesics stay on the quadric and form a one-parameter group") {
  Lcg64 rng(4);
  QuadraticSpace s(3, 2);
  for (int k = 0; k < 50; ++k) {
    auto [x, X] = random_point_and_tangent(rng, s);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    QuadricPoint xp(s, x);
    const Vec y = geodesic(s, xp, X, a).vec();
    CHECK(std::abs(s.norm_sq(y) + 1.0) < 1e-10);
    const Vec Y = std::sinh(a) * x + std::cosh(a) * X;  // velocity at time a
    const Vec z1 = geodesic(s, QuadricPoint(s, y), Y, b).vec();
    const Vec z2 = geodesic(s, xp, X, a + b).vec();
    CHECK((z1 - z2).norm() < 1e-9 * z2.norm());
  }
}

TEST_CASE("tangent projector") {
  Lcg64 rng(8);
  QuadraticSpace s(2, 2);
  for (int k = 0; k < 20; ++k) {
    auto [x, X] = random_point_and_tangent(rng, s);
    const QuadricPoint xp(s, x);
    const Mat P = tangent_projector(s, xp);
    CHECK((P * x).norm() < 1e-12 * x.squaredNorm());
    CHECK((P * X - X).norm() < 1e-12 * x.squaredNorm());
    CHECK((P * P - P).cwiseAbs().maxCoeff() < 1e-12 * x.squaredNorm() * x.squaredNorm());
    const Mat GP = s.gram() * P;
    CHECK((GP - GP.transpose()).cwiseAbs().maxCoeff() < 1e-12 * x.squaredNorm());
    Vec v(5);
    for (int i = 0; i < 5; ++i) v[i] = rng.uniform(-1, 1);
    CHECK(std::abs(s.inner(P * v, x)) < 1e-12 * x.squaredNorm());
  }
}

TEST_CASE("projector reproduces the normal part of the Cartan orbit acceleration") {
  for (auto [p, q] : {std::pair{2, 1}, {2, 2}, {3, 3}}) {
    const double theta = p == q + 1 ? 0.0 : 0.4;
    PseudoFlatSpec spec{p, q, {}, theta};
    if (q + 1 - p > 0) {
      spec.mu.assign(q + 1 - p, 0.0);
      spec.mu[0] = 1.0;
    }
    const QuadraticSpace s(p, q);
    const Vec x = pseudoflat_base_point(spec);
    const Mat t = cartan_to_standard(p, q);
    for (int i = 1; i <= p; ++i) {
      // d^2/dt^2 of a(t e_i) x at t = 0
      const Vec acc = std::cos(theta) * (t.col(cartan_index_v(p, q, i, 1)) + t.col(cartan_index_v(p, q, i, -1)));
      const Vec got = tangent_projector(s, QuadricPoint(s, x)) * acc;
      const Vec expect = acc - (std::cos(theta) * std::cos(theta) / p) * x;
      CHECK((got - expect).norm() < 1e-13);
    }
  }
}

TEST_CASE("boundary rays keep their orientation") {
  QuadraticSpace s(2, 1);
  Vec v(4);
  v << -2.0, 0.0, 2.0, 0.0;
  BoundaryRay r(s, v);
  CHECK(r.rep().cwiseAbs().maxCoeff() == 1.0);
  CHECK(r.rep()[0] == -1.0);
  BoundaryRay r2(s, -v);
  CHECK(antipodal(r.rep(), r2.rep()));
  CHECK_THROWS_AS(BoundaryRay(s, Vec::Unit(4, 0)), GeometryError);
}

TEST_CASE("gram triple test") {
  const Polyhedron P = Polyhedron::canonical(2, 1);
  const QuadraticSpace s = P.space();
  const auto& v = P.vertices();
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = 0; b < v.size(); ++b)
      for (std::size_t c = 0; c < v.size(); ++c) {
        const double g = gram_triple_test(s, v[a], v[b], v[c]);
        CHECK(g <= 1e-15);
        Mat m(3, 3);
        const Vec* r[3] = {&v[a].rep(), &v[b].rep(), &v[c].rep()};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) m(i, j) = s.inner(*r[i], *r[j]);
        CHECK(std::abs(m.determinant() - g) < 1e-14);
      }
  CHECK(gram_triple_test(s, v[0], v[0], v[1]) == 0.0);

  const Vec& v1 = P.vertex(1, 1).rep();
  const Vec& v2 = P.vertex(2, 1).rep();
  const Vec& vm1 = P.vertex(1, -1).rep();
  const Vec& vm2 = P.vertex(2, -1).rep();
  const BoundaryRay x(s, v1 + v2), y(s, v2 + vm1), z(s, vm1 + vm2);
  const double g = gram_triple_test(s, x, y, z);
  CHECK(g < 0.0);
  Mat m(3, 3);
  const Vec* r[3] = {&x.rep(), &y.rep(), &z.rep()};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = s.inner(*r[i], *r[j]);
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  CHECK(es.eigenvalues()[0] < 0.0);
  CHECK(es.eigenvalues()[1] > 0.0);
  CHECK(es.eigenvalues()[2] > 0.0);
}

TEST_CASE("canonical polyhedron vertices are the Cartan null vectors") {
  for (auto [p, q] : {std::pair{2, 1}, {3, 2}, {2, 3}}) {
    const Polyhedron P = Polyhedron::canonical(p, q);
    const Mat t = cartan_to_standard(p, q);
    for (int i = 1; i <= p; ++i)
      for (int sg : {1, -1}) {
        const Vec c = t.col(cartan_index_v(p, q, i, sg));
        CHECK((P.vertex(i, sg).rep() - c / c.cwiseAbs().maxCoeff()).norm() == 0.0);
      }
  }
}

TEST_CASE("polyhedron samples: null, pairwise Q <= 0, no antipodes, triples <= 0") {
  for (auto [p, q] : {std::pair{2, 1}, {3, 2}}) {
    const Polyhedron P = Polyhedron::canonical(p, q);
    const QuadraticSpace s = P.space();
    const auto samples = sample_polyhedron(P, 60, 17);
    REQUIRE(samples.size() == 60);
    for (const auto& r : samples) CHECK(causal_type(s, r.rep()) == CausalType::lightlike);
    for (std::size_t a = 0; a < samples.size(); ++a)
      for (std::size_t b = 0; b < samples.size(); ++b) {
        CHECK(s.inner(samples[a].rep(), samples[b].rep()) <= 1e-15);
        CHECK_FALSE(antipodal(samples[a].rep(), samples[b].rep(), 1e-6));
      }
    for (std::size_t a = 0; a < 20; ++a)
      for (std::size_t b = 0; b < 20; ++b)
        for (std::size_t c = 0; c < 20; ++c) CHECK(gram_triple_test(s, samples[a], samples[b], samples[c]) <= 1e-12);
    const auto again = sample_polyhedron(P, 60, 17);
    for (std::size_t a = 0; a < samples.size(); ++a) CHECK((again[a].rep() - samples[a].rep()).norm() == 0.0);
  }
}

TEST_CASE("log and exp are inverse") {
  Lcg64 rng(21);
  QuadraticSpace s(2, 1);
  for (int k = 0; k < 20; ++k) {
    auto [x, X] = random_point_and_tangent(rng, s);
    const double d = rng.uniform(0.01, 2.0);
    const Vec y = exp_map(s, x, d * X);
    CHECK(std::abs(quadric_distance(s, x, y) - d) < 1e-9);
    CHECK((log_map(s, x, y) - d * X).norm() < 1e-9 * x.norm());
  }
}

TEST_CASE("truncated rays tend to the ray") {
  const Polyhedron P = Polyhedron::canonical(2, 1);
  const QuadraticSpace s = P.space();
  const Vec o = pseudoflat_base_point(PseudoFlatSpec{2, 1, {}, 0.0});
  for (const auto& v : P.vertices()) {
    const Vec x = truncate_ray(s, o, v.rep(), 12.0);
    CHECK(std::abs(s.norm_sq(x) + 1.0) < 1e-5);
    CHECK(std::abs(quadric_distance(s, o, x) - 12.0) < 1e-6);
    CHECK((x / x.cwiseAbs().maxCoeff() - v.rep()).norm() < 1e-8);
  }
}
