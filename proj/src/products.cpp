#include "hpq/products.hpp"

#include <cmath>
#include <numeric>

#include "hpq/error.hpp"

namespace hpq {

int ProductSpec::p() const { return std::accumulate(n.begin(), n.end(), 0); }

void ProductSpec::validate() const {
  if (n.empty() || n.size() != alpha.size()) {
    throw GeometryError(ErrorCode::invalid_spec, "product needs matching non-empty n and alpha");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < 1) throw GeometryError(ErrorCode::invalid_spec, "factor dimensions must be positive");
    if (!(alpha[i] > 0)) throw GeometryError(ErrorCode::invalid_spec, "weights must be positive");
    s += alpha[i] * alpha[i];
  }
  if (std::abs(s - 1.0) > 1e-12) throw GeometryError(ErrorCode::invalid_spec, "sum of alpha_i^2 must be 1");
}

std::vector<double> maximal_weights(const std::vector<int>& n) {
  const double p = std::accumulate(n.begin(), n.end(), 0);
  std::vector<double> a;
  for (int ni : n) a.push_back(std::sqrt(ni / p));
  return a;
}

ProductSpec maximal_product(const std::vector<int>& n) { return ProductSpec{n, maximal_weights(n)}; }

namespace {

struct ProductMap {
  std::vector<int> n;
  std::vector<double> alpha;
  int p;
  int q;

  template <class S>
  std::vector<S> operator()(std::span<const S> u) const {
    using std::sqrt;
    std::vector<S> x(p + q + 1, S{});
    int off = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
      S r2 = S{} + 1.0;
      for (int a = 0; a < n[i]; ++a) {
        x[off + a] = alpha[i] * u[off + a];
        r2 = r2 + u[off + a] * u[off + a];
      }
      x[p + i] = alpha[i] * sqrt(r2);
      off += n[i];
    }
    return x;
  }
};

struct CartanOrbitMap {
  Mat t;  // Cartan -> standard
  int p;
  int q;
  double theta;
  std::vector<double> mu;

  template <class S>
  std::vector<S> operator()(std::span<const S> u) const {
    using std::exp;
    const int n = p + q + 1;
    std::vector<S> c(n, S{});
    for (int i = 1; i <= p; ++i) {
      c[cartan_index_v(p, q, i, +1)] = std::cos(theta) * exp(u[i - 1]);
      c[cartan_index_v(p, q, i, -1)] = std::cos(theta) * exp(-u[i - 1]);
    }
    for (std::size_t j = 0; j < mu.size(); ++j) c[cartan_index_w(p, j + 1)] = S{} + std::sin(theta) * mu[j];
    std::vector<S> x(n, S{});
    for (int r = 0; r < n; ++r)
      for (int col = 0; col < n; ++col)
        if (t(r, col) != 0.0) x[r] = x[r] + t(r, col) * c[col];
    return x;
  }
};

}  // namespace

ImmersionChart product_chart(const ProductSpec& spec, int q, double half_width) {
  spec.validate();
  if (spec.k() > q + 1) {
    throw GeometryError(ErrorCode::invalid_spec, "product has more than q+1 factors");
  }
  const int p = spec.p();
  return ImmersionChart::from_functor(p, q, Box::cube(p, half_width), ProductMap{spec.n, spec.alpha, p, q},
                                      "product");
}

std::vector<Vec> product_factor_points(const ProductSpec& spec, int q, std::span<const double> u) {
  const int p = spec.p();
  std::vector<Vec> pts;
  int off = 0;
  for (int i = 0; i < spec.k(); ++i) {
    Vec x = Vec::Zero(p + q + 1);
    double r2 = 1.0;
    for (int a = 0; a < spec.n[i]; ++a) {
      x[off + a] = u[off + a];
      r2 += u[off + a] * u[off + a];
    }
    x[p + i] = std::sqrt(r2);
    pts.push_back(std::move(x));
    off += spec.n[i];
  }
  return pts;
}

Vec product_mean_curvature(const ProductSpec& spec, const std::vector<Vec>& xs) {
  const int p = spec.p();
  Vec h = Vec::Zero(xs.at(0).size());
  for (int i = 0; i < spec.k(); ++i) h += (spec.n[i] / spec.alpha[i] - p * spec.alpha[i]) * xs[i];
  return h;
}

Vec product_II_closed_form(const ProductSpec& spec, const std::vector<Vec>& xs, int i) {
  double others = 0.0;
  for (int j = 0; j < spec.k(); ++j)
    if (j != i) others += spec.alpha[j] * spec.alpha[j];
  Vec v = (others / spec.alpha[i]) * xs[i];
  for (int j = 0; j < spec.k(); ++j)
    if (j != i) v -= spec.alpha[j] * xs[j];
  return v;
}

void PseudoFlatSpec::validate() const {
  if (p < 1 || q < 0) throw GeometryError(ErrorCode::invalid_spec, "need p >= 1, q >= 0");
  if (p > q + 1) throw GeometryError(ErrorCode::invalid_spec, "pseudo-flat needs p <= q+1");
  if (static_cast<int>(mu.size()) != q + 1 - p) {
    throw GeometryError(ErrorCode::invalid_spec, "mu must have length q+1-p");
  }
  if (!mu.empty()) {
    double s = 0.0;
    for (double m : mu) s += m * m;
    if (std::abs(std::sqrt(s) - 1.0) > 1e-12) throw GeometryError(ErrorCode::invalid_spec, "mu must be a unit vector");
  } else if (theta != 0.0) {
    throw GeometryError(ErrorCode::invalid_spec, "p = q+1 leaves no w directions; theta must be 0");
  }
  if (!(theta >= 0.0 && theta < M_PI / 2)) {
    throw GeometryError(ErrorCode::invalid_spec, "theta must lie in [0, pi/2)");
  }
}

Mat CartanElement::cartan_matrix(int q) const {
  const int p = static_cast<int>(u.size());
  const int n = p + q + 1;
  Mat a = Mat::Identity(n, n);
  for (int i = 1; i <= p; ++i) {
    a(cartan_index_v(p, q, i, +1), cartan_index_v(p, q, i, +1)) = std::exp(u[i - 1]);
    a(cartan_index_v(p, q, i, -1), cartan_index_v(p, q, i, -1)) = std::exp(-u[i - 1]);
  }
  return a;
}

Mat CartanElement::standard_matrix(int q) const {
  const int p = static_cast<int>(u.size());
  return cartan_to_standard(p, q) * cartan_matrix(q) * standard_to_cartan(p, q);
}

Vec pseudoflat_base_point(const PseudoFlatSpec& spec) {
  spec.validate();
  const std::vector<double> zero(spec.p, 0.0);
  return pseudoflat_chart(spec).position(zero);
}

ImmersionChart pseudoflat_chart(const PseudoFlatSpec& spec, double half_width) {
  spec.validate();
  return ImmersionChart::from_functor(
      spec.p, spec.q, Box::cube(spec.p, half_width),
      CartanOrbitMap{cartan_to_standard(spec.p, spec.q), spec.p, spec.q, spec.theta, spec.mu}, "pseudoflat");
}

Vec pseudoflat_mean_curvature(const PseudoFlatSpec& spec, std::span<const double> u) {
  spec.validate();
  const int p = spec.p, q = spec.q;
  const Mat t = cartan_to_standard(p, q);
  const double st = std::sin(spec.theta), ct = std::cos(spec.theta);
  Vec c = Vec::Zero(p + q + 1);
  for (int i = 1; i <= p; ++i) {
    c[cartan_index_v(p, q, i, +1)] = p * st * st / ct * std::exp(u[i - 1]);
    c[cartan_index_v(p, q, i, -1)] = p * st * st / ct * std::exp(-u[i - 1]);
  }
  for (std::size_t j = 0; j < spec.mu.size(); ++j) c[cartan_index_w(p, j + 1)] = -p * st * spec.mu[j];
  return t * c;
}

FlatCertificate parallel_flat_certificate(const ImmersionChart& chart, const std::vector<Param>& points) {
  FlatCertificate cert;
  for (const auto& u : points) {
    cert.max_grad_II = std::max(cert.max_grad_II, std::sqrt(covariant_derivative_II(chart, u).norm_sq()));
    cert.max_commutator = std::max(cert.max_commutator, max_commutator(fundamental_data(chart, u)));
  }
  return cert;
}

FlatCertificate parallel_flat_certificate(const ProductSpec& spec, int q) {
  const ImmersionChart chart = product_chart(spec, q);
  const int p = spec.p();
  std::vector<Param> pts;
  int total = 1;
  for (int i = 0; i < p; ++i) total *= 3;
  for (int idx = 0; idx < total; ++idx) {
    Param u(p);
    int r = idx;
    for (int i = 0; i < p; ++i) {
      u[i] = -0.5 + 0.5 * (r % 3);
      r /= 3;
    }
    pts.push_back(u);
  }
  return parallel_flat_certificate(chart, pts);
}

}  // namespace hpq
