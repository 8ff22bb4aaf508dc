#include "hpq/chart.hpp"

#include <cmath>

#include "hpq/error.hpp"

namespace hpq {

Box Box::cube(int p, double half_width) {
  return Box{std::vector<double>(p, -half_width), std::vector<double>(p, half_width)};
}

bool Box::contains(std::span<const double> u, double margin) const {
  if (u.size() != lo.size()) return false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < lo[i] + margin || u[i] > hi[i] - margin) return false;
  }
  return true;
}

ImmersionChart::ImmersionChart(int p, int q, Box domain, std::shared_ptr<const ChartFunction> f,
                               JetMode mode, std::string label)
    : p_(p), q_(q), domain_(std::move(domain)), f_(std::move(f)), mode_(mode), label_(std::move(label)) {
  if (p < 1 || p > Jet::kMaxVars || q < 0) {
    throw GeometryError(ErrorCode::invalid_spec, "chart dimensions out of range");
  }
  if (static_cast<int>(domain_.lo.size()) != p || static_cast<int>(domain_.hi.size()) != p) {
    throw GeometryError(ErrorCode::dimension_mismatch, "chart domain dimension");
  }
}

ImmersionChart ImmersionChart::with_jet_mode(JetMode mode) const {
  ImmersionChart c = *this;
  c.mode_ = mode;
  return c;
}

double ImmersionChart::jet_margin() const {
  if (mode_.is_closed_form()) return 0.0;
  return 2.0 * 10.0 * mode_.h * (mode_.richardson ? 2.0 : 1.0);
}

Vec ImmersionChart::position(std::span<const double> u) const {
  const std::vector<double> y = f_->eval(u);
  const int n = p_ + q_ + 1;
  if (static_cast<int>(y.size()) != n) {
    throw GeometryError(ErrorCode::dimension_mismatch, "chart output length");
  }
  Vec x = Eigen::Map<const Vec>(y.data(), n);
  const double qx = eta_inner(p_, x, x);
  if (!(qx < 0)) throw GeometryError(ErrorCode::not_on_quadric, "chart value is not timelike");
  return x / std::sqrt(-qx);
}

ChartJet ImmersionChart::jet(std::span<const double> u, int order) const {
  if (!domain_.contains(u, jet_margin())) {
    throw GeometryError(ErrorCode::stencil_out_of_domain, "jet evaluation outside chart domain");
  }
  if (mode_.is_closed_form()) return closed_form_jet(u, order);
  ChartJet a = fd_jet(u, order, mode_.h);
  if (!mode_.richardson) return a;
  const ChartJet b = fd_jet(u, order, 2.0 * mode_.h);
  auto mix = [](std::vector<Vec>& x, const std::vector<Vec>& y) {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = (4.0 * x[k] - y[k]) / 3.0;
  };
  mix(a.d1, b.d1);
  mix(a.d2, b.d2);
  mix(a.d3, b.d3);
  return a;
}

ChartJet ImmersionChart::closed_form_jet(std::span<const double> u, int order) const {
  const int p = p_;
  const int n = p_ + q_ + 1;
  std::vector<Jet> ju;
  ju.reserve(p);
  for (int i = 0; i < p; ++i) ju.push_back(Jet::variable(p, i, u[i]));
  std::vector<Jet> y = f_->eval(std::span<const Jet>(ju));
  if (static_cast<int>(y.size()) != n) {
    throw GeometryError(ErrorCode::dimension_mismatch, "chart output length");
  }
  for (auto& c : y) {
    if (c.nvar() == 0) c = Jet(p, c.value());
  }
  Jet qy(p, 0.0);
  for (int k = 0; k < n; ++k) {
    if (k < p) qy += y[k] * y[k];
    else qy -= y[k] * y[k];
  }
  if (!(qy.value() < 0)) throw GeometryError(ErrorCode::not_on_quadric, "chart value is not timelike");
  const Jet scale = 1.0 / sqrt(-qy);
  for (auto& c : y) c = c * scale;

  ChartJet j;
  j.p = p;
  j.x.resize(n);
  for (int k = 0; k < n; ++k) j.x[k] = y[k].value();
  j.d1.assign(p, Vec(n));
  j.d2.assign(p * p, Vec(n));
  for (int i = 0; i < p; ++i)
    for (int k = 0; k < n; ++k) j.d1[i][k] = y[k].d1(i);
  for (int i = 0; i < p; ++i)
    for (int l = 0; l < p; ++l)
      for (int k = 0; k < n; ++k) j.d2[i * p + l][k] = y[k].d2(i, l);
  if (order >= 3) {
    j.d3.assign(p * p * p, Vec(n));
    for (int i = 0; i < p; ++i)
      for (int l = 0; l < p; ++l)
        for (int m = 0; m < p; ++m)
          for (int k = 0; k < n; ++k) j.d3[(i * p + l) * p + m][k] = y[k].d3(i, l, m);
  }
  return j;
}

ChartJet ImmersionChart::fd_jet(std::span<const double> u, int order, double h) const {
  const int p = p_;
  std::vector<double> w(u.begin(), u.end());
  auto at = [&](std::initializer_list<std::pair<int, double>> shifts) {
    std::vector<double> v = w;
    for (const auto& [i, s] : shifts) v[i] += s;
    return position(v);
  };
  ChartJet j;
  j.p = p;
  j.x = position(w);
  const double h1 = h, h2 = h, h3 = 10.0 * h;
  j.d1.resize(p);
  for (int i = 0; i < p; ++i) j.d1[i] = (at({{i, h1}}) - at({{i, -h1}})) / (2.0 * h1);
  j.d2.resize(p * p);
  for (int i = 0; i < p; ++i) {
    j.d2[i * p + i] = (at({{i, h2}}) - 2.0 * j.x + at({{i, -h2}})) / (h2 * h2);
    for (int l = i + 1; l < p; ++l) {
      const Vec v = (at({{i, h2}, {l, h2}}) - at({{i, h2}, {l, -h2}}) - at({{i, -h2}, {l, h2}}) +
                     at({{i, -h2}, {l, -h2}})) /
                    (4.0 * h2 * h2);
      j.d2[i * p + l] = v;
      j.d2[l * p + i] = v;
    }
  }
  if (order < 3) return j;
  j.d3.resize(p * p * p);
  const double c3 = 1.0 / (2.0 * h3 * h3 * h3);
  auto put = [&](int a, int b, int c, const Vec& v) {
    const int idx[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
    for (const auto& t : idx) j.d3[(t[0] * p + t[1]) * p + t[2]] = v;
  };
  for (int i = 0; i < p; ++i) {
    put(i, i, i,
        (at({{i, 2 * h3}}) - 2.0 * at({{i, h3}}) + 2.0 * at({{i, -h3}}) - at({{i, -2 * h3}})) * c3);
    for (int l = 0; l < p; ++l) {
      if (l == i) continue;
      // d_i d_i d_l: central second difference in i, differenced in l.
      const Vec plus = at({{i, h3}, {l, h3}}) - 2.0 * at({{l, h3}}) + at({{i, -h3}, {l, h3}});
      const Vec minus = at({{i, h3}, {l, -h3}}) - 2.0 * at({{l, -h3}}) + at({{i, -h3}, {l, -h3}});
      put(i, i, l, (plus - minus) * c3);
    }
  }
  for (int i = 0; i < p; ++i)
    for (int l = i + 1; l < p; ++l)
      for (int m = l + 1; m < p; ++m) {
        Vec s = Vec::Zero(j.x.size());
        for (int a : {-1, 1})
          for (int b : {-1, 1})
            for (int c : {-1, 1}) s += double(a * b * c) * at({{i, a * h3}, {l, b * h3}, {m, c * h3}});
        put(i, l, m, s / (8.0 * h3 * h3 * h3));
      }
  return j;
}

}  // namespace hpq
