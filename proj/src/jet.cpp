#include "hpq/jet.hpp"

#include <cmath>
#include <stdexcept>

namespace hpq {

namespace {

struct Layout {
  int nvar = 0;
  int nterms = 1;
  std::vector<int> idx2;  // nvar*nvar, symmetric
  std::vector<int> idx3;  // nvar^3, symmetric
  struct Triple {
    std::uint16_t a, b, c;
  };
  std::vector<Triple> mul;
};

Layout build_layout(int n) {
  Layout l;
  l.nvar = n;
  std::vector<std::vector<int>> monos;  // exponent vectors
  monos.push_back(std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    monos.push_back(e);
  }
  l.idx2.assign(n * n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<int> e(n, 0);
      ++e[i];
      ++e[j];
      l.idx2[i * n + j] = l.idx2[j * n + i] = static_cast<int>(monos.size());
      monos.push_back(e);
    }
  l.idx3.assign(n * n * n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        std::vector<int> e(n, 0);
        ++e[i];
        ++e[j];
        ++e[k];
        const int id = static_cast<int>(monos.size());
        const int perm[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
        for (const auto& pm : perm) l.idx3[(pm[0] * n + pm[1]) * n + pm[2]] = id;
        monos.push_back(e);
      }
  l.nterms = static_cast<int>(monos.size());
  auto degree = [](const std::vector<int>& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
  };
  auto find = [&](const std::vector<int>& e) {
    for (std::size_t m = 0; m < monos.size(); ++m)
      if (monos[m] == e) return static_cast<int>(m);
    return -1;
  };
  for (int a = 0; a < l.nterms; ++a)
    for (int b = 0; b < l.nterms; ++b) {
      if (degree(monos[a]) + degree(monos[b]) > 3) continue;
      std::vector<int> e(n);
      for (int v = 0; v < n; ++v) e[v] = monos[a][v] + monos[b][v];
      l.mul.push_back({static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                       static_cast<std::uint16_t>(find(e))});
    }
  return l;
}

const Layout& layout(int nvar) {
  static const std::vector<Layout> all = [] {
    std::vector<Layout> v;
    for (int n = 0; n <= Jet::kMaxVars; ++n) v.push_back(build_layout(n));
    return v;
  }();
  return all.at(nvar);
}

}  // namespace

int jet_term_count(int nvar) { return layout(nvar).nterms; }

Jet::Jet(int nvar, double value) : nvar_(nvar), nterms_(layout(nvar).nterms) {
  if (nvar < 0 || nvar > kMaxVars) throw std::out_of_range("Jet: too many variables");
  c_[0] = value;
}

Jet Jet::variable(int nvar, int i, double value) {
  Jet j(nvar, value);
  j.c_[1 + i] = 1.0;
  return j;
}

double Jet::d1(int i) const { return c_[1 + i]; }

double Jet::d2(int i, int j) const {
  const double c = c_[layout(nvar_).idx2[i * nvar_ + j]];
  return i == j ? 2.0 * c : c;
}

double Jet::d3(int i, int j, int k) const {
  const double c = c_[layout(nvar_).idx3[(i * nvar_ + j) * nvar_ + k]];
  if (i == j && j == k) return 6.0 * c;
  if (i == j || j == k || i == k) return 2.0 * c;
  return c;
}

namespace {

void promote(Jet& a, const Jet& b) {
  if (a.nvar() == 0 && b.nvar() != 0) a = Jet(b.nvar(), a.value());
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  promote(*this, o);
  const int n = o.nvar_ == 0 ? 1 : nterms_;
  for (int k = 0; k < n; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  promote(*this, o);
  const int n = o.nvar_ == 0 ? 1 : nterms_;
  for (int k = 0; k < n; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (int k = 0; k < nterms_; ++k) c_[k] *= s;
  return *this;
}

Jet operator-(Jet a) {
  for (int k = 0; k < a.nterms_; ++k) a.c_[k] = -a.c_[k];
  return a;
}

Jet operator-(double s, Jet a) {
  a = -a;
  a.c_[0] += s;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.nvar_ == 0) return b * a.c_[0];
  if (b.nvar_ == 0) return a * b.c_[0];
  Jet r(a.nvar_, 0.0);
  for (const auto& t : layout(a.nvar_).mul) r.c_[t.c] += a.c_[t.a] * b.c_[t.b];
  return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet Jet::compose(double f0, double f1, double f2, double f3) const {
  Jet d = *this;
  d.c_[0] = 0.0;
  const Jet d2 = d * d;
  const Jet d3 = d2 * d;
  Jet r = d * f1;
  for (int k = 0; k < nterms_; ++k) r.c_[k] += 0.5 * f2 * d2.c_[k] + (f3 / 6.0) * d3.c_[k];
  r.c_[0] = f0;
  return r;
}

Jet operator/(double s, const Jet& a) {
  const double x = a.value();
  const double i1 = 1.0 / x;
  return a.compose(s * i1, -s * i1 * i1, 2.0 * s * i1 * i1 * i1, -6.0 * s * i1 * i1 * i1 * i1);
}

Jet& Jet::operator/=(const Jet& o) { return *this = *this * (1.0 / o); }

Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.value());
  const double x = a.value();
  return a.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e, e);
}

Jet log(const Jet& a) {
  const double x = a.value();
  return a.compose(std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s, -c);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c, s);
}

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose(s, c, s, c);
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose(c, s, c, s);
}

Jet pow(const Jet& a, double e) {
  const double x = a.value();
  const double f0 = std::pow(x, e);
  return a.compose(f0, e * f0 / x, e * (e - 1) * f0 / (x * x), e * (e - 1) * (e - 2) * f0 / (x * x * x));
}

}  // namespace hpq
