#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace hpq {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class BasisMode { standard, cartan };
enum class CausalType { timelike, spacelike, lightlike };

const char* to_string(BasisMode mode);
const char* to_string(CausalType type);

/// The form of signature (p, q+1) on R^{p+q+1}.
///
/// Standard mode orders coordinates as p spacelike then q+1 timelike.
/// Cartan mode uses the null basis (v_1..v_p, w_1..w_{q+1-p}, v_{-p}..v_{-1}).
class QuadraticSpace {
 public:
  QuadraticSpace(int p, int q, BasisMode mode = BasisMode::standard);

  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int dim() const noexcept { return p_ + q_ + 1; }
  BasisMode mode() const noexcept { return mode_; }
  const Mat& gram() const noexcept { return gram_; }

  double inner(const Vec& a, const Vec& b) const;
  double norm_sq(const Vec& a) const { return inner(a, a); }

  QuadraticSpace with_mode(BasisMode mode) const { return QuadraticSpace(p_, q_, mode); }

  friend bool operator==(const QuadraticSpace& a, const QuadraticSpace& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.mode_ == b.mode_;
  }

 private:
  int p_;
  int q_;
  BasisMode mode_;
  Mat gram_;
};

/// Standard-basis form without bounds checks; used in inner loops.
inline double eta_inner(int p, const Vec& a, const Vec& b) {
  const auto n = a.size();
  double s = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) s += a[i] * b[i];
  for (Eigen::Index i = p; i < n; ++i) s -= a[i] * b[i];
  return s;
}

double q_inner(const QuadraticSpace& space, const Vec& a, const Vec& b);

/// Lightlike when |Q(v,v)| < 1e-10 |v|^2 (Euclidean norm of the coordinates).
CausalType causal_type(const QuadraticSpace& space, const Vec& v);

/// Returns n_plus vectors with Q = +1 followed by n_minus vectors with Q = -1,
/// mutually Q-orthogonal and spanning a subspace of span(vs).
///
/// Each step pivots on the candidate of largest |Q| of the wanted sign; when
/// all diagonal entries are small relative to an off-diagonal one (null
/// bases), the pivot is w_a +- w_b.  The first coordinate of each output with
/// magnitude above 1e-12 of its largest entry is made positive.
std::vector<Vec> pseudo_orthonormalize(const QuadraticSpace& space, std::span<const Vec> vs,
                                       int n_plus, int n_minus, double tol = 1e-9);

/// Columns are the Cartan basis vectors written in standard coordinates:
/// v_i = (e_i + f_i)/(2 sqrt p), w_j = f_{p+j}, v_{-i} = (f_i - e_i)/(2 sqrt p).
Mat cartan_to_standard(int p, int q);
Mat standard_to_cartan(int p, int q);

/// Coordinates of v (given in space's basis) in the requested basis.
Vec change_basis(const QuadraticSpace& space, const Vec& v, BasisMode to);

/// Position of v_{+-i} (i = 1..p, sign = +-1) and w_j (j = 1..q+1-p) in Cartan ordering.
int cartan_index_v(int p, int q, int i, int sign);
int cartan_index_w(int p, int j);

}  // namespace hpq
