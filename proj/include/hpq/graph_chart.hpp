#pragma once

#include <vector>

#include "hpq/chart.hpp"
#include "hpq/random.hpp"

namespace hpq {

/// One term of a normal graph function f_alpha:
/// coef * prod_i u_i^powers_i, or coef * sin(freq . u + phase) when `sine` is set.
struct GraphTerm {
  int normal = 0;
  double coef = 0.0;
  std::vector<int> powers;
  bool sine = false;
  std::vector<double> freq;
  double phase = 0.0;
};

/// z(u) = (u, sqrt(1 + |u|^2), f_1(u), .., f_q(u)) rescaled onto the quadric.
/// With no terms this is the totally geodesic H^p.
struct GraphSpec {
  int p = 2;
  int q = 1;
  std::vector<GraphTerm> terms;
  double half_width = 0.5;

  void validate() const;
};

ImmersionChart graph_chart(const GraphSpec& spec);
ImmersionChart totally_geodesic_chart(int p, int q, double half_width = 3.0);

/// Polynomial terms of degree 1..3 plus one sine term per normal direction.
GraphSpec random_graph_spec(int p, int q, Lcg64& rng, double scale = 0.3);

}  // namespace hpq
