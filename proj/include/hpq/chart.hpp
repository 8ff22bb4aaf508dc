#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hpq/jet.hpp"
#include "hpq/pseudo_linalg.hpp"

namespace hpq {

using Param = std::vector<double>;

/// Axis-aligned parameter box.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(int p, double half_width);
  bool contains(std::span<const double> u, double margin = 0.0) const;
};

struct JetMode {
  enum class Kind { closed_form, finite_difference };
  Kind kind = Kind::closed_form;
  double h = 1e-4;
  bool richardson = false;

  static JetMode closed_form() { return {}; }
  static JetMode finite_difference(double h = 1e-4, bool richardson = false) {
    return {Kind::finite_difference, h, richardson};
  }
  bool is_closed_form() const { return kind == Kind::closed_form; }
};

/// Position and partial derivatives of a chart at one parameter point.
struct ChartJet {
  int p = 0;
  Vec x;
  std::vector<Vec> d1;  // p
  std::vector<Vec> d2;  // p*p
  std::vector<Vec> d3;  // p^3, empty below order 3

  const Vec& x1(int i) const { return d1[i]; }
  const Vec& x2(int i, int j) const { return d2[i * p + j]; }
  const Vec& x3(int i, int j, int k) const { return d3[(i * p + j) * p + k]; }
};

/// Ambient-valued map evaluated either on doubles or on order-3 jets.
class ChartFunction {
 public:
  virtual ~ChartFunction() = default;
  virtual std::vector<double> eval(std::span<const double> u) const = 0;
  virtual std::vector<Jet> eval(std::span<const Jet> u) const = 0;
};

template <class F>
class FunctorChartFunction final : public ChartFunction {
 public:
  explicit FunctorChartFunction(F f) : f_(std::move(f)) {}
  std::vector<double> eval(std::span<const double> u) const override { return f_(u); }
  std::vector<Jet> eval(std::span<const Jet> u) const override { return f_(u); }

 private:
  F f_;
};

/// A parametrized spacelike p-submanifold patch of H^{p,q} in standard coordinates.
///
/// Positions are rescaled onto the quadric by 1/sqrt(-Q) before any
/// differentiation, in both jet modes.
class ImmersionChart {
 public:
  ImmersionChart(int p, int q, Box domain, std::shared_ptr<const ChartFunction> f,
                 JetMode mode = JetMode::closed_form(), std::string label = {});

  /// F must provide `template <class S> std::vector<S> operator()(std::span<const S>) const`.
  template <class F>
  static ImmersionChart from_functor(int p, int q, Box domain, F f, std::string label = {}) {
    return ImmersionChart(p, q, std::move(domain),
                          std::make_shared<FunctorChartFunction<F>>(std::move(f)),
                          JetMode::closed_form(), std::move(label));
  }

  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  QuadraticSpace space() const { return QuadraticSpace(p_, q_); }
  const Box& domain() const noexcept { return domain_; }
  const JetMode& jet_mode() const noexcept { return mode_; }
  const std::string& label() const noexcept { return label_; }
  ImmersionChart with_jet_mode(JetMode mode) const;

  Vec position(std::span<const double> u) const;
  ChartJet jet(std::span<const double> u, int order = 3) const;

  /// Margin the FD jet stencil needs around u.
  double jet_margin() const;

 private:
  ChartJet closed_form_jet(std::span<const double> u, int order) const;
  ChartJet fd_jet(std::span<const double> u, int order, double h) const;

  int p_;
  int q_;
  Box domain_;
  std::shared_ptr<const ChartFunction> f_;
  JetMode mode_;
  std::string label_;
};

}  // namespace hpq
