#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hpq/chart.hpp"
#include "hpq/immersion.hpp"
#include "hpq/mesh.hpp"
#include "hpq/spaceform.hpp"

namespace hpq {

struct SolverConfig {
  double step = 0.0;  // initial flow step; 0 picks 0.2 h^2 from the mean edge length h
  double tol_H = 1e-3;
  int max_iters = 20000;  // per level
  double truncation_radius = 3.0;
  int fit_ring = 2;
  int fit_degree = 4;  // 2 = quadratic graph; 3, 4 add higher terms that absorb bias
  int rings = 40;
  /// Ring counts solved coarse to fine, each seeded from the previous one.
  /// Empty: {rings/4, rings/2, rings} with levels below 6 rings dropped.
  std::vector<int> levels;
  int jobs = 1;

  void validate() const;
  std::vector<int> level_schedule() const;
};

/// Closed boundary loop phi -> b(phi) on the quadric, phi in [0, 2 pi).
struct BoundaryCurve {
  int p = 2;
  int q = 1;
  std::function<Vec(double)> at;
  std::string label;
};

/// Truncation of a polyhedron's ideal boundary at radius R:
/// b(phi) = normalize(sum_i a_i (e^{R w_i} v_i + e^{-R w_i} v_{-i})), w = (cos phi, sin phi),
/// a_i = sqrt(-1 / (2p Q(v_i, v_{-i}))).  For the canonical polyhedron this is the
/// circle |u| = R on the Barbot surface.
BoundaryCurve polyhedron_boundary(const Polyhedron& poly, double R);

/// Cyclic list of n ideal points: b(phi) = normalize(sum_k e^{R cos(phi - 2 pi k/n)} v_k).
/// Truncating edge points at a fixed distance would make photon edges null, so the loop
/// instead approaches each ray as R grows.  Throws unless the sampled loop is spacelike.
BoundaryCurve ray_boundary(int p, int q, const std::vector<BoundaryRay>& rays, double R);

/// Closed loop of quadric points, joined by geodesic segments.
BoundaryCurve loop_boundary(int p, int q, const std::vector<Vec>& points);

/// Moves each vertex by a relative perturbation of size `amount`, re-projects it onto
/// the null cone, and redraws until all vertex pairs keep Q(v_a, v_b) < 0.
Polyhedron jitter_polyhedron(const Polyhedron& poly, double amount, std::uint64_t seed);

/// Disk mesh on the best-fitting totally geodesic H^2, blended onto the boundary loop.
Mesh seed_mesh(const BoundaryCurve& boundary, const SolverConfig& config);
Mesh seed_mesh(const BoundaryCurve& boundary, int rings);

/// Samples chart.position(center + radius * (s, t)) on a ring mesh.
Mesh chart_mesh(const ImmersionChart& chart, const Param& center, double radius, int rings);

/// Second fundamental form at vertex v from a least-squares graph fit over the
/// fitted tangent plane, in exponential coordinates at the vertex.
FundamentalData estimate_fundamental(const Mesh& mesh, int v, int fit_ring, int fit_degree);
Vec estimate_H(const Mesh& mesh, int v, const SolverConfig& config);

struct FlowState {
  Mesh mesh;
  std::vector<Vec> H;  // zero on the boundary
  double max_H = 0.0;
  double tau = 0.0;
  double tau_max = 0.0;
  int rejected = 0;  // backtracking halvings so far
  std::shared_ptr<const std::vector<std::vector<int>>> hoods;  // fit neighborhoods, fixed topology
};

FlowState start_flow(Mesh mesh, const SolverConfig& config);

/// One accepted step x <- normalize(x + tau H) on interior vertices, halving tau
/// until max |H| does not increase and all edges stay spacelike.
FlowState flow_step(const FlowState& state, const SolverConfig& config);

struct CurvatureSummary {
  int vertices = 0;  // interior vertices with a full fit neighborhood
  double min_scal = 0.0;
  double max_scal = 0.0;
  double min_ii_sq = 0.0;
  double max_ii_sq = 0.0;
  double max_ric = 0.0;
  double max_H = 0.0;
};

struct VertexReport {
  std::array<double, 2> param{};
  double scal = 0.0;
  double ii_sq = 0.0;
  double ric_max = 0.0;
  double H = 0.0;
  bool supported = false;
};

struct SolveResult {
  Mesh mesh;
  bool converged = false;
  double residual_H = 0.0;
  int iterations = 0;
  std::vector<double> history;  // max |H| after each accepted step, all levels
  std::vector<FundamentalData> estimates;
  std::vector<VertexReport> vertices;
  CurvatureSummary summary;
  bool bounds_ok = true;
  std::vector<std::string> violations;
};

SolveResult solve(const BoundaryCurve& boundary, const SolverConfig& config);
/// Flows a given mesh at its own resolution.
SolveResult solve_from(Mesh mesh, const SolverConfig& config);
/// Curvature report of a mesh without flowing it.
SolveResult summarize(Mesh mesh, const SolverConfig& config);

}  // namespace hpq
