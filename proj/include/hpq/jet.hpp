#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace hpq {

/// Truncated Taylor polynomial of total degree <= 3 in up to kMaxVars variables.
///
/// Coefficients are stored by monomial: constant, then x_i, then x_i x_j (i <= j),
/// then x_i x_j x_k (i <= j <= k).  Arithmetic is exact up to the truncation, so
/// evaluating a smooth formula on variable() seeds yields its order-3 jet.
class Jet {
 public:
  static constexpr int kMaxVars = 8;
  static constexpr int kMaxTerms = 165;

  Jet() = default;
  Jet(int nvar, double value);
  static Jet variable(int nvar, int i, double value);

  int nvar() const noexcept { return nvar_; }
  int nterms() const noexcept { return nterms_; }
  double value() const noexcept { return c_[0]; }
  double coeff(int k) const noexcept { return c_[k]; }

  /// Partial derivatives at the expansion point.
  double d1(int i) const;
  double d2(int i, int j) const;
  double d3(int i, int j, int k) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double s) { c_[0] += s; return *this; }
  Jet& operator-=(double s) { c_[0] -= s; return *this; }
  Jet& operator*=(double s);
  Jet& operator/=(double s) { return *this *= (1.0 / s); }

  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, Jet a);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);

  /// f(a) from f and its first three derivatives at a.value().
  Jet compose(double f0, double f1, double f2, double f3) const;

 private:
  int nvar_ = 0;
  int nterms_ = 1;
  std::array<double, kMaxTerms> c_{};
};

Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet pow(const Jet& a, double e);

int jet_term_count(int nvar);

}  // namespace hpq
