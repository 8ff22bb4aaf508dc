#include "hpq/spaceform.hpp"

#include <cmath>

#include "hpq/error.hpp"
#include "hpq/random.hpp"

namespace hpq {

QuadricPoint::QuadricPoint(const QuadraticSpace& space, Vec x, double tol) : x_(std::move(x)) {
  if (!on_quadric(space, x_, tol)) {
    throw GeometryError(ErrorCode::not_on_quadric,
                        "Q(x) = " + std::to_string(space.norm_sq(x_)));
  }
}

BoundaryRay::BoundaryRay(const QuadraticSpace& space, const Vec& v) {
  if (causal_type(space, v) != CausalType::lightlike) {
    throw GeometryError(ErrorCode::invalid_spec, "boundary ray must be lightlike");
  }
  rep_ = v / v.cwiseAbs().maxCoeff();
}

Polyhedron::Polyhedron(int p, int q, std::vector<BoundaryRay> vertices)
    : p_(p), q_(q), vertices_(std::move(vertices)) {
  if (static_cast<int>(vertices_.size()) != 2 * p) {
    throw GeometryError(ErrorCode::invalid_spec, "polyhedron needs 2p vertices");
  }
  for (const auto& v : vertices_) {
    if (v.rep().size() != p + q + 1) {
      throw GeometryError(ErrorCode::dimension_mismatch, "polyhedron vertex length");
    }
  }
}

Polyhedron Polyhedron::canonical(int p, int q) {
  const Mat t = cartan_to_standard(p, q);
  const QuadraticSpace s(p, q);
  std::vector<BoundaryRay> verts;
  for (int sign : {+1, -1})
    for (int i = 1; i <= p; ++i) verts.emplace_back(s, t.col(cartan_index_v(p, q, i, sign)));
  return Polyhedron(p, q, std::move(verts));
}

Vec normalize_to_quadric(const QuadraticSpace& space, const Vec& x) {
  const double qx = space.norm_sq(x);
  if (!(qx < 0)) {
    throw GeometryError(ErrorCode::not_on_quadric, "cannot normalize a non-timelike vector");
  }
  return x / std::sqrt(-qx);
}

bool on_quadric(const QuadraticSpace& space, const Vec& x, double tol) {
  return x.size() == space.dim() && std::abs(space.norm_sq(x) + 1.0) < tol;
}

QuadricPoint geodesic(const QuadraticSpace& space, const QuadricPoint& x, const Vec& X, double t) {
  if (std::abs(space.inner(x.vec(), X)) > 1e-9 || std::abs(space.norm_sq(X) - 1.0) > 1e-9) {
    throw GeometryError(ErrorCode::not_tangent, "geodesic needs a unit spacelike tangent vector");
  }
  return QuadricPoint(space, std::cosh(t) * x.vec() + std::sinh(t) * X);
}

Mat tangent_projector(const QuadraticSpace& space, const QuadricPoint& x) {
  const Vec& v = x.vec();
  return Mat::Identity(space.dim(), space.dim()) + v * (v.transpose() * space.gram());
}

Vec project_tangent(const QuadraticSpace& space, const Vec& x, const Vec& v) {
  return v + space.inner(v, x) * x;
}

double gram_triple_test(const QuadraticSpace& space, const BoundaryRay& a, const BoundaryRay& b,
                        const BoundaryRay& c) {
  return 2.0 * space.inner(a.rep(), b.rep()) * space.inner(a.rep(), c.rep()) *
         space.inner(b.rep(), c.rep());
}

std::vector<BoundaryRay> sample_polyhedron(const Polyhedron& poly, int n, std::uint64_t seed) {
  const int p = poly.p();
  const QuadraticSpace space = poly.space();
  Lcg64 rng(seed);
  std::vector<BoundaryRay> out;
  out.reserve(n);
  std::vector<double> t(p);
  for (int k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int i = 0; i < p; ++i) {
      t[i] = -std::log(rng.uniform_open());
      sum += t[i];
    }
    Vec v = Vec::Zero(space.dim());
    for (int i = 1; i <= p; ++i) {
      const int sign = (rng.next() >> 63) ? -1 : 1;
      v += (t[i - 1] / sum) * poly.vertex(i, sign).rep();
    }
    out.emplace_back(space, v);
  }
  return out;
}

double quadric_distance(const QuadraticSpace& space, const Vec& x, const Vec& y) {
  return std::acosh(std::max(1.0, -space.inner(x, y)));
}

Vec log_map(const QuadraticSpace& space, const Vec& x, const Vec& y) {
  const double c = -space.inner(x, y);
  if (c < 1.0 - 1e-12) {
    throw GeometryError(ErrorCode::non_spacelike_boundary, "points are not spacelike separated");
  }
  const Vec w = y - c * x;  // y + Q(x,y) x
  // |w| = sinh d; asinh is accurate for nearby points where acosh(c) is not.
  const double sh = std::sqrt(std::max(space.norm_sq(w), 0.0));
  if (sh < 1e-300) return w;
  return (std::asinh(sh) / sh) * w;
}

Vec exp_map(const QuadraticSpace& space, const Vec& x, const Vec& v) {
  const double n2 = space.norm_sq(v);
  if (n2 <= 0.0) return x + v;
  const double n = std::sqrt(n2);
  return std::cosh(n) * x + (std::sinh(n) / n) * v;
}

Vec truncate_ray(const QuadraticSpace& space, const Vec& center, const Vec& ray, double R) {
  const double a = space.inner(ray, center);
  // Spacelike geodesics from `center` reach exactly the rays with Q(ray, center) < 0.
  if (!(a < -1e-14)) {
    throw GeometryError(ErrorCode::non_spacelike_boundary, "ray not reachable from the center");
  }
  const Vec s = (ray + a * center) / (-a);
  return std::cosh(R) * center + std::sinh(R) * s;
}

bool antipodal(const Vec& a, const Vec& b, double tol) {
  const Vec ua = a / a.norm();
  const Vec ub = b / b.norm();
  return (ua + ub).norm() < tol;
}

}  // namespace hpq
