#include "hpq/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "hpq/error.hpp"
#include "hpq/spaceform.hpp"

namespace hpq {

int Mesh::interior_count() const {
  return static_cast<int>(std::count(boundary.begin(), boundary.end(), 0));
}

namespace {

int ring_start(int k) { return k == 0 ? 0 : 1 + 3 * k * (k - 1); }
int ring_size(int k) { return k == 0 ? 1 : 6 * k; }

void add_edge(Mesh& m, int a, int b) {
  auto& na = m.adjacency[a];
  if (std::find(na.begin(), na.end(), b) == na.end()) na.push_back(b);
  auto& nb = m.adjacency[b];
  if (std::find(nb.begin(), nb.end(), a) == nb.end()) nb.push_back(a);
}

}  // namespace

Mesh ring_disk_topology(int rings) {
  if (rings < 2) throw GeometryError(ErrorCode::invalid_spec, "ring mesh needs at least 2 rings");
  Mesh m;
  const int n = ring_start(rings + 1);
  m.adjacency.assign(n, {});
  m.boundary.assign(n, 0);
  m.param_hint.resize(n);
  m.param_hint[0] = {0.0, 0.0};
  for (int k = 1; k <= rings; ++k) {
    const double r = static_cast<double>(k) / rings;
    for (int j = 0; j < ring_size(k); ++j) {
      const double phi = 2.0 * M_PI * j / ring_size(k);
      m.param_hint[ring_start(k) + j] = {r * std::cos(phi), r * std::sin(phi)};
      if (k == rings) m.boundary[ring_start(k) + j] = 1;
    }
  }
  // Zip consecutive rings by angle.  Angles are j/size in units of a full turn.
  for (int k = 1; k <= rings; ++k) {
    const int ni = ring_size(k - 1), no = ring_size(k);
    const int si = ring_start(k - 1), so = ring_start(k);
    if (k == 1) {
      for (int j = 0; j < no; ++j) m.triangles.push_back({0, so + j, so + (j + 1) % no});
      continue;
    }
    int i = 0, o = 0;
    while (i < ni || o < no) {
      // Advance the side whose next vertex comes first in angle; ties go to the outer ring.
      const long double ai = static_cast<long double>(i + 1) / ni;
      const long double ao = static_cast<long double>(o + 1) / no;
      if (o < no && (i >= ni || ao <= ai)) {
        m.triangles.push_back({si + i % ni, so + o, so + (o + 1) % no});
        ++o;
      } else {
        m.triangles.push_back({si + i, so + o % no, si + (i + 1) % ni});
        ++i;
      }
    }
  }
  for (const auto& t : m.triangles) {
    add_edge(m, t[0], t[1]);
    add_edge(m, t[1], t[2]);
    add_edge(m, t[2], t[0]);
  }
  for (auto& a : m.adjacency) std::sort(a.begin(), a.end());
  return m;
}

Mesh ring_disk_mesh(int p, int q, int rings, const std::function<Vec(double, double)>& f) {
  Mesh m = ring_disk_topology(rings);
  m.p = p;
  m.q = q;
  m.vertices.reserve(m.param_hint.size());
  for (const auto& h : m.param_hint) m.vertices.push_back(f(h[0], h[1]));
  return m;
}

std::vector<int> ring_neighborhood(const Mesh& mesh, int v, int depth) {
  std::vector<int> out;
  std::vector<int> seen{v};
  std::vector<int> frontier{v};
  for (int d = 0; d < depth; ++d) {
    std::vector<int> next;
    for (int a : frontier)
      for (int b : mesh.adjacency[a]) {
        if (std::find(seen.begin(), seen.end(), b) != seen.end()) continue;
        seen.push_back(b);
        next.push_back(b);
        out.push_back(b);
      }
    frontier = std::move(next);
  }
  return out;
}

std::vector<int> boundary_distance(const Mesh& mesh) {
  const int n = mesh.size() > 0 ? mesh.size() : static_cast<int>(mesh.adjacency.size());
  std::vector<int> dist(n, std::numeric_limits<int>::max());
  std::deque<int> queue;
  for (int i = 0; i < n; ++i)
    if (mesh.boundary[i]) {
      dist[i] = 0;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    const int a = queue.front();
    queue.pop_front();
    for (int b : mesh.adjacency[a])
      if (dist[b] > dist[a] + 1) {
        dist[b] = dist[a] + 1;
        queue.push_back(b);
      }
  }
  return dist;
}

MeshCheck check_mesh(const Mesh& mesh) {
  const QuadraticSpace s = mesh.space();
  MeshCheck c;
  c.min_edge_margin = std::numeric_limits<double>::infinity();
  c.min_interior_degree = std::numeric_limits<int>::max();
  for (int i = 0; i < mesh.size(); ++i) {
    c.quadric_defect = std::max(c.quadric_defect, std::abs(s.norm_sq(mesh.vertices[i]) + 1.0));
    if (!mesh.boundary[i]) {
      c.min_interior_degree = std::min(c.min_interior_degree, static_cast<int>(mesh.adjacency[i].size()));
    }
    for (int j : mesh.adjacency[i]) {
      if (j < i) continue;
      const Vec d = mesh.vertices[i] - mesh.vertices[j];
      c.min_edge_margin = std::min(c.min_edge_margin, s.norm_sq(d) / d.squaredNorm());
    }
  }
  return c;
}

Vec interpolate(const Mesh& mesh, double s, double t) {
  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  std::array<double, 3> best_w{};
  for (int k = 0; k < static_cast<int>(mesh.triangles.size()); ++k) {
    const auto& tr = mesh.triangles[k];
    const auto& a = mesh.param_hint[tr[0]];
    const auto& b = mesh.param_hint[tr[1]];
    const auto& c = mesh.param_hint[tr[2]];
    const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    const double w1 = ((s - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (t - a[1])) / det;
    const double w2 = ((b[0] - a[0]) * (t - a[1]) - (s - a[0]) * (b[1] - a[1])) / det;
    const double w0 = 1.0 - w1 - w2;
    // Largest minimum weight: the containing triangle, or the nearest one outside the polygon.
    const double score = std::min({w0, w1, w2});
    if (score > best_score) {
      best_score = score;
      best = k;
      best_w = {w0, w1, w2};
    }
  }
  const auto& tr = mesh.triangles[best];
  const Vec x = best_w[0] * mesh.vertices[tr[0]] + best_w[1] * mesh.vertices[tr[1]] +
                best_w[2] * mesh.vertices[tr[2]];
  return normalize_to_quadric(mesh.space(), x);
}

}  // namespace hpq
