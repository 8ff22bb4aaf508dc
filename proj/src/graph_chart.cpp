#include "hpq/graph_chart.hpp"

#include <cmath>

#include "hpq/error.hpp"

namespace hpq {

void GraphSpec::validate() const {
  if (p < 1 || p > Jet::kMaxVars || q < 0) throw GeometryError(ErrorCode::invalid_spec, "graph dimensions");
  if (!(half_width > 0)) throw GeometryError(ErrorCode::invalid_spec, "graph half_width must be positive");
  for (const auto& t : terms) {
    if (t.normal < 0 || t.normal >= q) throw GeometryError(ErrorCode::invalid_spec, "graph term normal index");
    if (!t.powers.empty() && static_cast<int>(t.powers.size()) != p) {
      throw GeometryError(ErrorCode::invalid_spec, "graph term powers must have length p");
    }
    for (int e : t.powers)
      if (e < 0) throw GeometryError(ErrorCode::invalid_spec, "graph term powers must be nonnegative");
    if (t.sine && static_cast<int>(t.freq.size()) != p) {
      throw GeometryError(ErrorCode::invalid_spec, "sine term freq must have length p");
    }
  }
}

namespace {

struct GraphMap {
  int p;
  int q;
  std::vector<GraphTerm> terms;

  template <class S>
  std::vector<S> operator()(std::span<const S> u) const {
    using std::sin;
    using std::sqrt;
    std::vector<S> z(p + q + 1, S{});
    S r2 = S{} + 1.0;
    for (int i = 0; i < p; ++i) {
      z[i] = u[i];
      r2 = r2 + u[i] * u[i];
    }
    z[p] = sqrt(r2);
    for (const auto& t : terms) {
      S v = S{} + t.coef;
      if (t.sine) {
        S arg = S{} + t.phase;
        for (int i = 0; i < p; ++i) arg = arg + t.freq[i] * u[i];
        v = t.coef * sin(arg);
      } else {
        for (int i = 0; i < static_cast<int>(t.powers.size()); ++i)
          for (int e = 0; e < t.powers[i]; ++e) v = v * u[i];
      }
      z[p + 1 + t.normal] = z[p + 1 + t.normal] + v;
    }
    return z;
  }
};

}  // namespace

ImmersionChart graph_chart(const GraphSpec& spec) {
  spec.validate();
  return ImmersionChart::from_functor(spec.p, spec.q, Box::cube(spec.p, spec.half_width),
                                      GraphMap{spec.p, spec.q, spec.terms}, "graph");
}

ImmersionChart totally_geodesic_chart(int p, int q, double half_width) {
  GraphSpec s;
  s.p = p;
  s.q = q;
  s.half_width = half_width;
  return graph_chart(s);
}

GraphSpec random_graph_spec(int p, int q, Lcg64& rng, double scale) {
  GraphSpec s;
  s.p = p;
  s.q = q;
  for (int al = 0; al < q; ++al) {
    const int count = 3 + rng.below(3);
    for (int c = 0; c < count; ++c) {
      GraphTerm t;
      t.normal = al;
      t.coef = rng.uniform(-scale, scale);
      t.powers.assign(p, 0);
      const int deg = 1 + rng.below(3);
      for (int d = 0; d < deg; ++d) ++t.powers[rng.below(p)];
      s.terms.push_back(t);
    }
    GraphTerm t;
    t.normal = al;
    t.sine = true;
    t.coef = rng.uniform(-scale, scale);
    for (int i = 0; i < p; ++i) t.freq.push_back(rng.uniform(-1.5, 1.5));
    t.phase = rng.uniform(0.0, 6.283185307179586);
    s.terms.push_back(t);
  }
  return s;
}

}  // namespace hpq
