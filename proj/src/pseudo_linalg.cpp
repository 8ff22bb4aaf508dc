#include "hpq/pseudo_linalg.hpp"

#include <algorithm>
#include <cmath>

#include "hpq/error.hpp"

namespace hpq {

const char* to_string(BasisMode mode) {
  return mode == BasisMode::standard ? "standard" : "cartan";
}

const char* to_string(CausalType type) {
  switch (type) {
    case CausalType::timelike: return "timelike";
    case CausalType::spacelike: return "spacelike";
    case CausalType::lightlike: return "lightlike";
  }
  return "unknown";
}

QuadraticSpace::QuadraticSpace(int p, int q, BasisMode mode) : p_(p), q_(q), mode_(mode) {
  if (p < 1 || q < 0) {
    throw GeometryError(ErrorCode::invalid_spec, "need p >= 1 and q >= 0");
  }
  const int n = p + q + 1;
  gram_ = Mat::Zero(n, n);
  if (mode == BasisMode::standard) {
    for (int i = 0; i < n; ++i) gram_(i, i) = i < p ? 1.0 : -1.0;
    return;
  }
  if (p > q + 1) {
    throw GeometryError(ErrorCode::unsupported_basis, "cartan basis requires p <= q+1");
  }
  const double off = -1.0 / (2.0 * p);
  for (int i = 0; i < p; ++i) {
    gram_(i, n - 1 - i) = off;
    gram_(n - 1 - i, i) = off;
  }
  for (int j = p; j < n - p; ++j) gram_(j, j) = -1.0;
}

double QuadraticSpace::inner(const Vec& a, const Vec& b) const {
  const int n = dim();
  if (a.size() != n || b.size() != n) {
    throw GeometryError(ErrorCode::dimension_mismatch,
                        "vector length does not match ambient dimension " + std::to_string(n));
  }
  if (mode_ == BasisMode::standard) return eta_inner(p_, a, b);
  // Symmetric accumulation: swapping a and b reproduces every term exactly.
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (gram_(i, i) != 0.0) s += gram_(i, i) * (a[i] * b[i]);
    for (int j = i + 1; j < n; ++j) {
      if (gram_(i, j) != 0.0) s += gram_(i, j) * (a[i] * b[j] + a[j] * b[i]);
    }
  }
  return s;
}

double q_inner(const QuadraticSpace& space, const Vec& a, const Vec& b) { return space.inner(a, b); }

CausalType causal_type(const QuadraticSpace& space, const Vec& v) {
  const double e2 = v.squaredNorm();
  if (e2 == 0.0) throw GeometryError(ErrorCode::zero_vector, "causal type of the zero vector");
  const double qv = space.norm_sq(v);
  if (std::abs(qv) < 1e-10 * e2) return CausalType::lightlike;
  return qv > 0 ? CausalType::spacelike : CausalType::timelike;
}

namespace {

void fix_sign(Vec& u) {
  const double big = u.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (std::abs(u[k]) > 1e-12 * big) {
      if (u[k] < 0) u = -u;
      return;
    }
  }
}

}  // namespace

std::vector<Vec> pseudo_orthonormalize(const QuadraticSpace& space, std::span<const Vec> vs,
                                       int n_plus, int n_minus, double tol) {
  std::vector<Vec> w(vs.begin(), vs.end());
  for (const auto& v : w) {
    if (v.size() != space.dim()) {
      throw GeometryError(ErrorCode::dimension_mismatch, "pseudo_orthonormalize input");
    }
  }
  std::vector<Vec> out;
  out.reserve(n_plus + n_minus);
  const int m = static_cast<int>(w.size());
  for (int step = 0; step < n_plus + n_minus; ++step) {
    const double s = step < n_plus ? 1.0 : -1.0;
    Mat g(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) g(a, b) = g(b, a) = space.inner(w[a], w[b]);

    int best_single = -1;
    double single_score = -1.0;
    for (int a = 0; a < m; ++a) {
      if (s * g(a, a) > single_score) {
        single_score = s * g(a, a);
        best_single = a;
      }
    }
    double off = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) off = std::max(off, std::abs(g(a, b)));

    Vec c;
    double score = 0.0;
    if (best_single >= 0 && single_score >= tol && single_score >= 0.5 * off) {
      c = w[best_single];
      score = single_score;
    } else if (m > 0) {
      // Best combination: top eigenvector of s*G.
      Eigen::SelfAdjointEigenSolver<Mat> es(s * g);
      const Vec coef = es.eigenvectors().col(m - 1);
      c = Vec::Zero(space.dim());
      for (int a = 0; a < m; ++a) c += coef[a] * w[a];
      score = s * space.norm_sq(c);
    }
    if (score < tol) {
      throw GeometryError(ErrorCode::degenerate_span,
                          "no pivot of sign " + std::string(s > 0 ? "+" : "-") +
                              " above tolerance at step " + std::to_string(step));
    }
    Vec u = c / std::sqrt(score);
    // One extra pass against earlier outputs keeps the result orthogonal to 1e-15.
    for (int r = 0; r < 2; ++r) {
      for (const auto& e : out) u -= space.inner(u, e) * space.inner(e, e) * e;
      const double nu = s * space.norm_sq(u);
      if (nu < tol) throw GeometryError(ErrorCode::degenerate_span, "pivot lost to cancellation");
      u /= std::sqrt(nu);
    }
    fix_sign(u);
    for (auto& v : w) {
      for (int r = 0; r < 2; ++r) v -= s * space.inner(v, u) * u;
    }
    out.push_back(std::move(u));
  }
  return out;
}

int cartan_index_v(int p, int q, int i, int sign) {
  const int n = p + q + 1;
  return sign > 0 ? i - 1 : n - i;
}

int cartan_index_w(int p, int j) { return p + j - 1; }

Mat cartan_to_standard(int p, int q) {
  if (p > q + 1) {
    throw GeometryError(ErrorCode::unsupported_basis, "cartan basis requires p <= q+1");
  }
  const int n = p + q + 1;
  Mat t = Mat::Zero(n, n);
  const double s = 1.0 / (2.0 * std::sqrt(static_cast<double>(p)));
  for (int i = 1; i <= p; ++i) {
    const int e = i - 1;
    const int f = p + i - 1;
    const int vp = cartan_index_v(p, q, i, +1);
    const int vm = cartan_index_v(p, q, i, -1);
    t(e, vp) = s;
    t(f, vp) = s;
    t(e, vm) = -s;
    t(f, vm) = s;
  }
  for (int j = 1; j <= q + 1 - p; ++j) t(2 * p + j - 1, cartan_index_w(p, j)) = 1.0;
  return t;
}

Mat standard_to_cartan(int p, int q) {
  const Mat t = cartan_to_standard(p, q);
  const QuadraticSpace c(p, q, BasisMode::cartan);
  const QuadraticSpace s(p, q, BasisMode::standard);
  // T^T eta T = G_c, hence T^{-1} = G_c^{-1} T^T eta.
  return c.gram().inverse() * t.transpose() * s.gram();
}

Vec change_basis(const QuadraticSpace& space, const Vec& v, BasisMode to) {
  if (v.size() != space.dim()) throw GeometryError(ErrorCode::dimension_mismatch, "change_basis");
  if (space.mode() == to) return v;
  if (to == BasisMode::standard) return cartan_to_standard(space.p(), space.q()) * v;
  return standard_to_cartan(space.p(), space.q()) * v;
}

}  // namespace hpq
