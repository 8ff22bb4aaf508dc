#pragma once

#include <cstdint>
#include <vector>

#include "hpq/pseudo_linalg.hpp"

namespace hpq {

/// A point of H^{p,q} = {Q(x) = -1}.
class QuadricPoint {
 public:
  QuadricPoint(const QuadraticSpace& space, Vec x, double tol = 1e-9);
  const Vec& vec() const noexcept { return x_; }

 private:
  Vec x_;
};

/// A positive ray of the null cone, i.e. a point of Ein^{p,q}.
///
/// The representative is scaled by a positive factor so its largest
/// |coordinate| is 1.  Negative scaling is not allowed: v and -v are
/// antipodal points of Ein, not the same point.
class BoundaryRay {
 public:
  BoundaryRay(const QuadraticSpace& space, const Vec& v);
  const Vec& rep() const noexcept { return rep_; }

 private:
  Vec rep_;
};

/// Ideal polygon/polyhedron given by 2p null rays ordered v_1..v_p, v_{-1}..v_{-p}.
/// For p = 2 the cyclic vertex order is the stored order.
class Polyhedron {
 public:
  Polyhedron(int p, int q, std::vector<BoundaryRay> vertices);
  /// The polyhedron P spanned by the Cartan null basis, in standard coordinates.
  static Polyhedron canonical(int p, int q);

  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  QuadraticSpace space() const { return QuadraticSpace(p_, q_); }
  const std::vector<BoundaryRay>& vertices() const noexcept { return vertices_; }
  /// v_i for sign = +1, v_{-i} for sign = -1 (i = 1..p).
  const BoundaryRay& vertex(int i, int sign) const { return vertices_[sign > 0 ? i - 1 : p_ + i - 1]; }

 private:
  int p_;
  int q_;
  std::vector<BoundaryRay> vertices_;
};

Vec normalize_to_quadric(const QuadraticSpace& space, const Vec& x);
bool on_quadric(const QuadraticSpace& space, const Vec& x, double tol = 1e-9);

/// cosh(t) x + sinh(t) X for a unit spacelike X tangent at x.
QuadricPoint geodesic(const QuadraticSpace& space, const QuadricPoint& x, const Vec& X, double t);

/// Matrix of v -> v + Q(v,x) x.
Mat tangent_projector(const QuadraticSpace& space, const QuadricPoint& x);
Vec project_tangent(const QuadraticSpace& space, const Vec& x, const Vec& v);

/// 2 <a,b><a,c><b,c>; the Gram determinant of three null vectors.
double gram_triple_test(const QuadraticSpace& space, const BoundaryRay& a, const BoundaryRay& b,
                        const BoundaryRay& c);

/// n rays [sum_i t_i v_{eps(i) i}] with t on the simplex, drawn from Lcg64(seed).
std::vector<BoundaryRay> sample_polyhedron(const Polyhedron& poly, int n, std::uint64_t seed = 1);

/// Hyperbolic-type distance between spacelike-separated points: cosh d = -Q(x,y).
double quadric_distance(const QuadraticSpace& space, const Vec& x, const Vec& y);
/// Tangent vector at x of length d pointing to y (requires -Q(x,y) >= 1).
Vec log_map(const QuadraticSpace& space, const Vec& x, const Vec& y);
/// exp_x(v) for spacelike tangent v.
Vec exp_map(const QuadraticSpace& space, const Vec& x, const Vec& v);

/// Point at distance R from `center` along the geodesic ray toward the ideal point `ray`.
Vec truncate_ray(const QuadraticSpace& space, const Vec& center, const Vec& ray, double R);

/// True when a = -lambda b for some lambda > 0 (up to relative tolerance).
bool antipodal(const Vec& a, const Vec& b, double tol = 1e-9);

}  // namespace hpq
