#include "hpq/plateau.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "hpq/curvature.hpp"
#include "hpq/error.hpp"
#include "hpq/random.hpp"

namespace hpq {

void SolverConfig::validate() const {
  if (!(tol_H > 0.0)) throw GeometryError(ErrorCode::invalid_spec, "tol_H must be positive");
  if (!(truncation_radius > 0.0)) throw GeometryError(ErrorCode::invalid_spec, "truncation radius must be positive");
  if (step < 0.0) throw GeometryError(ErrorCode::invalid_spec, "step must be positive (or 0 for automatic)");
  if (fit_ring < 1) throw GeometryError(ErrorCode::invalid_spec, "fit_ring must be at least 1");
  if (fit_degree < 2 || fit_degree > 4) throw GeometryError(ErrorCode::invalid_spec, "fit_degree must be 2, 3 or 4");
  if (rings < 2) throw GeometryError(ErrorCode::invalid_spec, "need at least 2 rings");
  if (max_iters < 0) throw GeometryError(ErrorCode::invalid_spec, "max_iters must be nonnegative");
  if (jobs < 1) throw GeometryError(ErrorCode::invalid_spec, "jobs must be at least 1");
  for (int k : levels)
    if (k < 2) throw GeometryError(ErrorCode::invalid_spec, "level ring counts must be at least 2");
}

std::vector<int> SolverConfig::level_schedule() const {
  if (!levels.empty()) return levels;
  std::vector<int> out;
  for (int k : {rings / 4, rings / 2})
    if (k >= 6 && (out.empty() || k > out.back())) out.push_back(k);
  out.push_back(rings);
  return out;
}

namespace {

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n < 64) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (n + jobs - 1) / jobs;
  for (int t = 0; t < jobs; ++t) {
    const int lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Projects onto the null cone in standard coordinates: equal spacelike and timelike norms.
Vec to_null_cone(int p, const Vec& v) {
  const double s = v.head(p).norm(), t = v.tail(v.size() - p).norm();
  if (s < 1e-300 || t < 1e-300) throw GeometryError(ErrorCode::zero_vector, "cannot project onto the null cone");
  Vec out(v.size());
  const double m = 0.5 * (s + t);
  out.head(p) = v.head(p) * (m / s);
  out.tail(v.size() - p) = v.tail(v.size() - p) * (m / t);
  return out;
}

void check_no_antipodes(const std::vector<BoundaryRay>& rays) {
  for (std::size_t a = 0; a < rays.size(); ++a)
    for (std::size_t b = a + 1; b < rays.size(); ++b)
      if (antipodal(rays[a].rep(), rays[b].rep(), 1e-9)) {
        throw GeometryError(ErrorCode::antipodal_boundary,
                            "boundary contains antipodal rays " + std::to_string(a) + " and " + std::to_string(b));
      }
}

double wrap_phi(double phi) {
  double f = std::fmod(phi, 2.0 * M_PI);
  if (f < 0) f += 2.0 * M_PI;
  return f;
}

double mean_edge_length(const Mesh& mesh) {
  const QuadraticSpace s = mesh.space();
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < mesh.size(); ++i)
    for (int j : mesh.adjacency[i])
      if (j > i) {
        sum += quadric_distance(s, mesh.vertices[i], mesh.vertices[j]);
        ++n;
      }
  return n > 0 ? sum / n : 0.0;
}

}  // namespace

BoundaryCurve polyhedron_boundary(const Polyhedron& poly, double R) {
  if (poly.p() != 2) throw GeometryError(ErrorCode::invalid_spec, "boundary loops are implemented for p = 2");
  if (!(R > 0.0)) throw GeometryError(ErrorCode::invalid_spec, "truncation radius must be positive");
  check_no_antipodes(poly.vertices());
  const QuadraticSpace s = poly.space();
  const int p = poly.p();
  std::vector<Vec> plus, minus;
  std::vector<double> a;
  for (int i = 1; i <= p; ++i) {
    const Vec& vp = poly.vertex(i, +1).rep();
    const Vec& vm = poly.vertex(i, -1).rep();
    const double qpm = s.inner(vp, vm);
    if (!(qpm < 0.0)) {
      throw GeometryError(ErrorCode::non_spacelike_boundary, "opposite polyhedron vertices must satisfy Q(v_i, v_-i) < 0");
    }
    plus.push_back(vp);
    minus.push_back(vm);
    a.push_back(std::sqrt(-1.0 / (2.0 * p * qpm)));
  }
  BoundaryCurve out;
  out.p = p;
  out.q = poly.q();
  out.label = "polyhedron";
  out.at = [s, plus, minus, a, R, p](double phi) {
    const double w[2] = {std::cos(phi), std::sin(phi)};
    Vec x = Vec::Zero(s.dim());
    for (int i = 0; i < p; ++i) x += a[i] * (std::exp(R * w[i]) * plus[i] + std::exp(-R * w[i]) * minus[i]);
    return normalize_to_quadric(s, x);
  };
  return out;
}

BoundaryCurve ray_boundary(int p, int q, const std::vector<BoundaryRay>& rays, double R) {
  if (p != 2) throw GeometryError(ErrorCode::invalid_spec, "boundary loops are implemented for p = 2");
  if (rays.size() < 3) throw GeometryError(ErrorCode::invalid_spec, "a boundary loop needs at least 3 rays");
  check_no_antipodes(rays);
  const QuadraticSpace s(p, q);
  Vec sum = Vec::Zero(s.dim());
  for (const auto& r : rays) {
    if (r.rep().size() != s.dim()) throw GeometryError(ErrorCode::dimension_mismatch, "ray length");
    sum += r.rep();
  }
  if (!(s.norm_sq(sum) < 0.0)) {
    throw GeometryError(ErrorCode::non_spacelike_boundary, "rays do not bound a spacelike disk (sum is not timelike)");
  }
  std::vector<Vec> reps;
  for (const auto& r : rays) reps.push_back(r.rep());
  BoundaryCurve out;
  out.p = p;
  out.q = q;
  out.label = "rays";
  // Ray k sits at angle 2 pi k / n; e^{R cos(phi - phi_k)} makes b(phi) approach it as R grows.
  // With the four vertices of the canonical P this is the Barbot circle |u| = R.
  out.at = [s, reps, R](double phi) {
    const int n = static_cast<int>(reps.size());
    Vec x = Vec::Zero(s.dim());
    for (int k = 0; k < n; ++k) x += std::exp(R * std::cos(phi - 2.0 * M_PI * k / n)) * reps[k];
    return normalize_to_quadric(s, x);
  };
  // Arbitrary ray lists need not give a spacelike loop.
  const int samples = 720;
  for (int k = 0; k < samples; ++k) {
    const Vec a = out.at(2.0 * M_PI * k / samples);
    const Vec b = out.at(2.0 * M_PI * (k + 1) / samples);
    if (!(s.norm_sq(b - a) > 0.0)) {
      throw GeometryError(ErrorCode::non_spacelike_boundary, "truncated ray loop is not spacelike");
    }
  }
  return out;
}

BoundaryCurve loop_boundary(int p, int q, const std::vector<Vec>& points) {
  if (p != 2) throw GeometryError(ErrorCode::invalid_spec, "boundary loops are implemented for p = 2");
  if (points.size() < 3) throw GeometryError(ErrorCode::invalid_spec, "a boundary loop needs at least 3 points");
  const QuadraticSpace s(p, q);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!on_quadric(s, points[k], 1e-8)) throw GeometryError(ErrorCode::not_on_quadric, "boundary loop point off the quadric");
    const Vec& b = points[(k + 1) % points.size()];
    if (!(s.inner(points[k], b) < -1.0)) {
      throw GeometryError(ErrorCode::non_spacelike_boundary, "consecutive loop points are not spacelike separated");
    }
  }
  BoundaryCurve out;
  out.p = p;
  out.q = q;
  out.label = "loop";
  out.at = [s, points](double phi) {
    const int n = static_cast<int>(points.size());
    const double x = wrap_phi(phi) / (2.0 * M_PI) * n;
    const int k = std::min(static_cast<int>(x), n - 1);
    const double t = x - k;
    if (t == 0.0) return points[k];
    const Vec l = log_map(s, points[k], points[(k + 1) % n]);
    return normalize_to_quadric(s, exp_map(s, points[k], t * l));
  };
  return out;
}

Polyhedron jitter_polyhedron(const Polyhedron& poly, double amount, std::uint64_t seed) {
  const QuadraticSpace s = poly.space();
  Lcg64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<BoundaryRay> verts;
    std::vector<Vec> raw;
    for (const auto& v : poly.vertices()) {
      Vec d(s.dim());
      for (int i = 0; i < s.dim(); ++i) d[i] = rng.normal();
      const Vec moved = v.rep() + amount * v.rep().norm() * d / d.norm();
      raw.push_back(to_null_cone(poly.p(), moved));
    }
    bool ok = true;
    for (std::size_t a = 0; a < raw.size() && ok; ++a)
      for (std::size_t b = a + 1; b < raw.size() && ok; ++b) ok = s.inner(raw[a], raw[b]) < 0.0;
    if (!ok) continue;
    for (const auto& r : raw) verts.emplace_back(s, r);
    return Polyhedron(poly.p(), poly.q(), std::move(verts));
  }
  throw GeometryError(ErrorCode::invalid_spec, "could not jitter the polyhedron while keeping Q(v_a, v_b) < 0");
}

Mesh seed_mesh(const BoundaryCurve& boundary, const SolverConfig& config) {
  config.validate();
  return seed_mesh(boundary, config.level_schedule().front());
}

Mesh seed_mesh(const BoundaryCurve& boundary, int rings) {
  if (boundary.p != 2) throw GeometryError(ErrorCode::invalid_spec, "the Plateau solver handles p = 2");
  const QuadraticSpace s(boundary.p, boundary.q);
  Mesh mesh = ring_disk_topology(rings);
  mesh.p = boundary.p;
  mesh.q = boundary.q;
  const int nb = 6 * rings;
  std::vector<Vec> b(nb);
  for (int j = 0; j < nb; ++j) b[j] = boundary.at(2.0 * M_PI * j / nb);
  for (int j = 0; j < nb; ++j)
    for (int k = j + 1; k < nb; ++k)
      if ((b[j] - b[k]).norm() < 1e-12 * (1.0 + b[j].norm())) {
        throw GeometryError(ErrorCode::invalid_spec, "boundary loop is not a simple closed curve");
      }

  // Best-fitting (2,1) subspace: leading Euclidean principal directions of the
  // normalized boundary samples, then Q-orthonormalized.
  Mat m = Mat::Zero(s.dim(), s.dim());
  for (const auto& x : b) m += x * x.transpose() / x.squaredNorm();
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  std::vector<Vec> span;
  for (int k = 0; k < boundary.p + 1; ++k) span.push_back(es.eigenvectors().col(s.dim() - 1 - k));
  std::vector<Vec> w;
  try {
    w = pseudo_orthonormalize(s, span, boundary.p, 1);
  } catch (const GeometryError&) {
    throw GeometryError(ErrorCode::non_spacelike_boundary, "boundary is not spacelike-spannable");
  }
  auto proj_w = [&](const Vec& y) {
    Vec out = Vec::Zero(s.dim());
    for (int a = 0; a < boundary.p; ++a) out += s.inner(y, w[a]) * w[a];
    out -= s.inner(y, w[boundary.p]) * w[boundary.p];
    return out;
  };
  Vec msum = Vec::Zero(s.dim());
  for (const auto& x : b) msum += proj_w(x) / x.norm();
  if (!(s.norm_sq(msum) < 0.0)) {
    throw GeometryError(ErrorCode::non_spacelike_boundary, "boundary has no timelike center in its best-fit plane");
  }
  const Vec c = normalize_to_quadric(s, msum);
  for (const auto& x : b)
    if (!(s.inner(c, x) < -1.0)) {
      throw GeometryError(ErrorCode::non_spacelike_boundary, "boundary point not spacelike separated from the center");
    }
  std::vector<Vec> tw;
  for (const auto& v : w) tw.push_back(v + s.inner(v, c) * c);
  const std::vector<Vec> tb = pseudo_orthonormalize(s, tw, boundary.p, 0);

  // Interior points: exp_c(r (xi_W + r^m xi_N)) where xi = log_c b(phi) is split into
  // the plane's tangent part xi_W and the rest.  Large m keeps the seed on the plane
  // away from the boundary; m = 0 is the geodesic cone over the boundary, which is
  // always spacelike.  The flattest valid blend is used.
  const int nv = static_cast<int>(mesh.param_hint.size());
  std::vector<Vec> xw(nv), xn(nv);
  for (int i = 0; i < nv; ++i) {
    if (mesh.boundary[i] || (mesh.param_hint[i][0] == 0.0 && mesh.param_hint[i][1] == 0.0)) continue;
    const Vec xi = log_map(s, c, boundary.at(std::atan2(mesh.param_hint[i][1], mesh.param_hint[i][0])));
    xw[i] = Vec::Zero(s.dim());
    for (const auto& e : tb) xw[i] += s.inner(xi, e) * e;
    xn[i] = xi - xw[i];
  }
  mesh.vertices.resize(nv);
  for (double m_exp : {3.0, 2.0, 1.0, 0.5, 0.25, 0.0}) {
    for (int i = 0; i < nv; ++i) {
      const double x = mesh.param_hint[i][0], y = mesh.param_hint[i][1];
      const double r = std::hypot(x, y);
      if (mesh.boundary[i]) {
        mesh.vertices[i] = boundary.at(std::atan2(y, x));
      } else if (r == 0.0) {
        mesh.vertices[i] = c;
      } else {
        mesh.vertices[i] = normalize_to_quadric(s, exp_map(s, c, r * (xw[i] + std::pow(r, m_exp) * xn[i])));
      }
    }
    if (check_mesh(mesh).min_edge_margin > 0.0) return mesh;
  }
  throw GeometryError(ErrorCode::non_spacelike_boundary, "seed mesh has a non-spacelike edge");
}

Mesh chart_mesh(const ImmersionChart& chart, const Param& center, double radius, int rings) {
  return ring_disk_mesh(chart.p(), chart.q(), rings, [&](double s, double t) {
    Param u = center;
    u[0] += radius * s;
    u[1] += radius * t;
    return chart.position(u);
  });
}

namespace {

struct FitBasis {
  int cols = 0;
  std::vector<std::array<int, 2>> powers;  // monomials t1^a t2^b, without the constant
};

FitBasis fit_basis(int degree) {
  FitBasis fb;
  for (int d = 1; d <= degree; ++d)
    for (int a = d; a >= 0; --a) fb.powers.push_back({a, d - a});
  fb.cols = static_cast<int>(fb.powers.size());
  return fb;
}

struct GraphFit {
  Mat coef;  // cols x q
  bool ok = false;
};

GraphFit fit_graph(const std::vector<Vec>& logs, const std::vector<Vec>& e, const std::vector<Vec>& n,
                   const QuadraticSpace& s, double scale, int degree) {
  const int m = static_cast<int>(logs.size());
  static const FitBasis bases[5] = {{}, {}, fit_basis(2), fit_basis(3), fit_basis(4)};
  const FitBasis& fb = bases[degree];
  Mat A(m, fb.cols);
  Mat B(m, static_cast<int>(n.size()));
  for (int j = 0; j < m; ++j) {
    const double t1 = s.inner(logs[j], e[0]) / scale, t2 = s.inner(logs[j], e[1]) / scale;
    const double wt = std::exp(-0.125 * (t1 * t1 + t2 * t2));
    double p1[5] = {1.0, t1, t1 * t1, t1 * t1 * t1, t1 * t1 * t1 * t1};
    double p2[5] = {1.0, t2, t2 * t2, t2 * t2 * t2, t2 * t2 * t2 * t2};
    for (int c = 0; c < fb.cols; ++c) A(j, c) = wt * p1[fb.powers[c][0]] * p2[fb.powers[c][1]];
    for (std::size_t al = 0; al < n.size(); ++al) B(j, al) = -wt * s.inner(logs[j], n[al]) / scale;
  }
  GraphFit out;
  Eigen::ColPivHouseholderQR<Mat> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < fb.cols) return out;
  out.coef = qr.solve(B);
  out.ok = true;
  return out;
}


FundamentalData estimate_with_hood(const Mesh& mesh, int v, const std::vector<int>& nb, int fit_degree) {
  if (mesh.p != 2) throw GeometryError(ErrorCode::invalid_spec, "mesh estimators handle p = 2");
  const QuadraticSpace s = mesh.space();
  const Vec& x = mesh.vertices[v];
  std::vector<Vec> logs;
  logs.reserve(nb.size());
  double scale = 0.0;
  for (int j : mesh.adjacency[v]) scale += quadric_distance(s, x, mesh.vertices[j]);
  scale /= std::max<std::size_t>(1, mesh.adjacency[v].size());
  for (int j : nb) logs.push_back(log_map(s, x, mesh.vertices[j]));
  if (logs.size() < 5 || !(scale > 0.0)) {
    throw GeometryError(ErrorCode::rank_deficient_fit, "vertex " + std::to_string(v) + " has too few neighbors");
  }

  // Tangent plane: leading principal directions of the log vectors, signs fixed
  // by the first significant component.
  Mat cov = Mat::Zero(s.dim(), s.dim());
  for (const auto& l : logs) cov += l * l.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(cov);
  std::vector<Vec> e;
  for (int k = 0; k < 2; ++k) {
    Vec d = es.eigenvectors().col(s.dim() - 1 - k);
    for (int i = 0; i < d.size(); ++i)
      if (std::abs(d[i]) > 1e-12) {
        if (d[i] < 0) d = -d;
        break;
      }
    e.push_back(d + s.inner(d, x) * x);
  }

  // Q-orthonormal tangent pair, then normals greedily from the projected standard basis.
  auto complete = [&](std::vector<Vec>& tangent) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < a; ++b) tangent[a] -= s.inner(tangent[a], tangent[b]) * tangent[b];
      const double n2 = s.norm_sq(tangent[a]);
      if (!(n2 > 1e-24)) throw GeometryError(ErrorCode::degenerate_metric, "fitted plane is not spacelike at vertex " + std::to_string(v));
      tangent[a] /= std::sqrt(n2);
    }
    std::vector<Vec> pool;
    for (int k = 0; k < s.dim(); ++k) {
      Vec b = Vec::Unit(s.dim(), k);
      b += s.inner(b, x) * x;
      for (const auto& t : tangent) b -= s.inner(b, t) * t;
      pool.push_back(b);
    }
    std::vector<Vec> normals;
    for (int al = 0; al < mesh.q; ++al) {
      int best = -1;
      double score = 1e-12;
      for (int k = 0; k < static_cast<int>(pool.size()); ++k)
        if (-s.norm_sq(pool[k]) > score) {
          score = -s.norm_sq(pool[k]);
          best = k;
        }
      if (best < 0) throw GeometryError(ErrorCode::normal_completion, "normal completion failed at vertex " + std::to_string(v));
      Vec nv = pool[best] / std::sqrt(score);
      for (int i = 0; i < nv.size(); ++i)
        if (std::abs(nv[i]) > 1e-12) {
          if (nv[i] < 0) nv = -nv;
          break;
        }
      for (auto& b : pool) b += s.inner(b, nv) * nv;
      normals.push_back(nv);
    }
    return normals;
  };

  int degree = fit_degree;
  while (degree > 2 && static_cast<int>(logs.size()) < fit_basis(degree).cols + 3) --degree;
  std::vector<Vec> n = complete(e);
  GraphFit fit;
  for (int pass = 0; pass < 2; ++pass) {
    fit = fit_graph(logs, e, n, s, scale, degree);
    while (!fit.ok && degree > 2) fit = fit_graph(logs, e, n, s, scale, --degree);
    if (!fit.ok) throw GeometryError(ErrorCode::rank_deficient_fit, "rank-deficient fit at vertex " + std::to_string(v));
    if (pass == 1) break;
    // Tilt the plane by the fitted slopes and refit.
    std::vector<Vec> tilted;
    for (int a = 0; a < 2; ++a) {
      Vec d = e[a];
      for (int al = 0; al < mesh.q; ++al) d += fit.coef(a, al) * n[al];
      tilted.push_back(d);
    }
    e = tilted;
    n = complete(e);
  }

  FundamentalData fd;
  fd.p = 2;
  fd.q = mesh.q;
  fd.position = x;
  fd.tangent = e;
  fd.normal = n;
  fd.metric = Mat::Identity(2, 2);
  fd.frame_coeffs = Mat::Identity(2, 2);
  fd.mean_curvature = Vec::Zero(s.dim());
  // Rows 2..4 hold the t1^2, t1 t2, t2^2 coefficients (in units of the scale).
  for (int al = 0; al < mesh.q; ++al) {
    Mat h(2, 2);
    h(0, 0) = 2.0 * fit.coef(2, al) / scale;
    h(0, 1) = h(1, 0) = fit.coef(3, al) / scale;
    h(1, 1) = 2.0 * fit.coef(4, al) / scale;
    fd.h.push_back(h);
    fd.mean_curvature += h.trace() * n[al];
  }
  return fd;
}

}  // namespace

FundamentalData estimate_fundamental(const Mesh& mesh, int v, int fit_ring, int fit_degree) {
  return estimate_with_hood(mesh, v, ring_neighborhood(mesh, v, fit_ring), fit_degree);
}

Vec estimate_H(const Mesh& mesh, int v, const SolverConfig& config) {
  if (mesh.boundary[v]) throw GeometryError(ErrorCode::invalid_spec, "estimate_H needs an interior vertex");
  return estimate_fundamental(mesh, v, config.fit_ring, config.fit_degree).mean_curvature;
}

namespace {

std::vector<std::vector<int>> neighborhoods(const Mesh& mesh, int ring) {
  std::vector<std::vector<int>> out(mesh.size());
  for (int i = 0; i < mesh.size(); ++i)
    if (!mesh.boundary[i]) out[i] = ring_neighborhood(mesh, i, ring);
  return out;
}

void compute_H(const Mesh& mesh, const std::vector<std::vector<int>>& hoods, const SolverConfig& config,
               std::vector<Vec>& H, double& max_H) {
  const QuadraticSpace s = mesh.space();
  H.assign(mesh.size(), Vec::Zero(s.dim()));
  std::vector<double> norms(mesh.size(), 0.0);
  parallel_for(mesh.size(), config.jobs, [&](int i) {
    if (mesh.boundary[i]) return;
    H[i] = estimate_with_hood(mesh, i, hoods[i], config.fit_degree).mean_curvature;
    norms[i] = std::sqrt(std::max(0.0, -s.norm_sq(H[i])));
  });
  max_H = *std::max_element(norms.begin(), norms.end());
}

}  // namespace

FlowState start_flow(Mesh mesh, const SolverConfig& config) {
  config.validate();
  FlowState st;
  st.mesh = std::move(mesh);
  st.hoods = std::make_shared<const std::vector<std::vector<int>>>(neighborhoods(st.mesh, config.fit_ring));
  compute_H(st.mesh, *st.hoods, config, st.H, st.max_H);
  const double h = mean_edge_length(st.mesh);
  st.tau = config.step > 0.0 ? config.step : 0.2 * h * h;
  st.tau_max = st.tau;
  return st;
}

FlowState flow_step(const FlowState& state, const SolverConfig& config) {
  const QuadraticSpace s = state.mesh.space();
  double tau = state.tau;
  int rejected = state.rejected;
  while (true) {
    if (tau < 1e-12) throw GeometryError(ErrorCode::step_collapse, "flow step collapsed below 1e-12");
    FlowState next;
    next.mesh = state.mesh;
    for (int i = 0; i < next.mesh.size(); ++i) {
      if (next.mesh.boundary[i]) continue;
      next.mesh.vertices[i] = normalize_to_quadric(s, state.mesh.vertices[i] + tau * state.H[i]);
    }
    bool ok = check_mesh(next.mesh).min_edge_margin > 0.0;
    if (ok) {
      try {
        compute_H(next.mesh, *state.hoods, config, next.H, next.max_H);
        ok = next.max_H <= state.max_H;
      } catch (const GeometryError&) {
        ok = false;
      }
    }
    if (!ok) {
      tau *= 0.5;
      ++rejected;
      continue;
    }
    next.tau = std::min(state.tau_max, tau * 1.25);
    next.tau_max = state.tau_max;
    next.hoods = state.hoods;
    next.rejected = rejected;
    return next;
  }
}

SolveResult summarize(Mesh mesh, const SolverConfig& config) {
  config.validate();
  const QuadraticSpace s = mesh.space();
  SolveResult r;
  const int n = mesh.size();
  r.estimates.resize(n);
  r.vertices.resize(n);
  const std::vector<int> dist = boundary_distance(mesh);
  parallel_for(n, config.jobs, [&](int i) {
    VertexReport& vr = r.vertices[i];
    vr.param = mesh.param_hint[i];
    if (mesh.boundary[i]) return;
    r.estimates[i] = estimate_fundamental(mesh, i, config.fit_ring, config.fit_degree);
    const CurvatureReport c = curvature_from_II(r.estimates[i]);
    vr.scal = c.scal;
    vr.ii_sq = r.estimates[i].ii_norm_sq();
    vr.ric_max = c.ric_eigenvalues[0];
    vr.H = std::sqrt(std::max(0.0, r.estimates[i].mean_curvature_norm_sq()));
    vr.supported = dist[i] > config.fit_ring;
  });
  CurvatureSummary& sm = r.summary;
  bool first = true;
  for (int i = 0; i < n; ++i) {
    if (mesh.boundary[i]) continue;
    r.residual_H = std::max(r.residual_H, r.vertices[i].H);
    if (!r.vertices[i].supported) continue;
    const VertexReport& vr = r.vertices[i];
    if (first) {
      sm.min_scal = sm.max_scal = vr.scal;
      sm.min_ii_sq = sm.max_ii_sq = vr.ii_sq;
      sm.max_ric = vr.ric_max;
      first = false;
    }
    ++sm.vertices;
    sm.min_scal = std::min(sm.min_scal, vr.scal);
    sm.max_scal = std::max(sm.max_scal, vr.scal);
    sm.min_ii_sq = std::min(sm.min_ii_sq, vr.ii_sq);
    sm.max_ii_sq = std::max(sm.max_ii_sq, vr.ii_sq);
    sm.max_ric = std::max(sm.max_ric, vr.ric_max);
    sm.max_H = std::max(sm.max_H, vr.H);
  }
  r.converged = r.residual_H <= config.tol_H;
  const double ii_cap = ii_bound(mesh.p, mesh.q) + 5e-2;
  if (r.converged && sm.vertices > 0) {
    if (sm.max_scal > 1e-2) r.violations.push_back("max interior Scal " + std::to_string(sm.max_scal) + " > 1e-2");
    if (sm.max_ii_sq > ii_cap) {
      r.violations.push_back("max interior |II|^2 " + std::to_string(sm.max_ii_sq) + " > " + std::to_string(ii_cap));
    }
  }
  r.bounds_ok = r.violations.empty();
  r.mesh = std::move(mesh);
  return r;
}

namespace {

// Flows until max |H| <= tol_H or the iteration budget is spent.
Mesh run_level(Mesh mesh, const SolverConfig& config, std::vector<double>& history, int& iterations) {
  FlowState st = start_flow(std::move(mesh), config);
  history.push_back(st.max_H);
  for (int it = 0; it < config.max_iters && st.max_H > config.tol_H; ++it) {
    st = flow_step(st, config);
    history.push_back(st.max_H);
    ++iterations;
  }
  return std::move(st.mesh);
}

}  // namespace

SolveResult solve_from(Mesh mesh, const SolverConfig& config) {
  config.validate();
  std::vector<double> history;
  int iterations = 0;
  Mesh out = run_level(std::move(mesh), config, history, iterations);
  SolveResult r = summarize(std::move(out), config);
  r.history = std::move(history);
  r.iterations = iterations;
  return r;
}

SolveResult solve(const BoundaryCurve& boundary, const SolverConfig& config) {
  config.validate();
  const std::vector<int> levels = config.level_schedule();
  std::vector<double> history;
  int iterations = 0;
  Mesh mesh = seed_mesh(boundary, levels.front());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (l > 0) {
      Mesh fine = ring_disk_topology(levels[l]);
      fine.p = boundary.p;
      fine.q = boundary.q;
      fine.vertices.resize(fine.param_hint.size());
      for (int i = 0; i < fine.size(); ++i) {
        const auto& h = fine.param_hint[i];
        fine.vertices[i] = fine.boundary[i] ? boundary.at(std::atan2(h[1], h[0])) : interpolate(mesh, h[0], h[1]);
      }
      if (!(check_mesh(fine).min_edge_margin > 0.0)) {
        throw GeometryError(ErrorCode::non_spacelike_boundary, "refined mesh has a non-spacelike edge");
      }
      mesh = std::move(fine);
    }
    mesh = run_level(std::move(mesh), config, history, iterations);
  }
  SolveResult r = summarize(std::move(mesh), config);
  r.history = std::move(history);
  r.iterations = iterations;
  return r;
}

}  // namespace hpq
