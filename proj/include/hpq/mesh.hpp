#pragma once

#include <array>
#include <functional>
#include <vector>

#include "hpq/pseudo_linalg.hpp"

namespace hpq {

/// Disk-topology vertex mesh on H^{p,q} (p = 2).  Vertices are ordered ring by
/// ring from the center outward; the last ring is the boundary.
struct Mesh {
  int p = 2;
  int q = 1;
  std::vector<Vec> vertices;
  std::vector<std::vector<int>> adjacency;
  std::vector<std::array<int, 3>> triangles;
  std::vector<char> boundary;                   // 1 on the boundary loop
  std::vector<std::array<double, 2>> param_hint;  // position in the unit parameter disk

  int size() const { return static_cast<int>(vertices.size()); }
  QuadraticSpace space() const { return QuadraticSpace(p, q); }
  int interior_count() const;
};

/// Connectivity of the unit disk with `rings` concentric rings, 6k vertices on
/// ring k, center vertex 0.  Positions are left empty; param_hint is filled.
Mesh ring_disk_topology(int rings);

/// The same topology with vertex i placed at f(param_hint[i]).
Mesh ring_disk_mesh(int p, int q, int rings, const std::function<Vec(double, double)>& f);

/// Vertices at graph distance 1..depth from v, in BFS order.
std::vector<int> ring_neighborhood(const Mesh& mesh, int v, int depth);

/// Graph distance from each vertex to the boundary.
std::vector<int> boundary_distance(const Mesh& mesh);

struct MeshCheck {
  double quadric_defect = 0.0;   // max |Q(x) + 1|
  double min_edge_margin = 0.0;  // min over edges of Q(d,d)/|d|^2 for chords d
  int min_interior_degree = 0;
};

MeshCheck check_mesh(const Mesh& mesh);

/// Point of the mesh at parameter (s, t) by barycentric interpolation of the
/// triangle containing it, renormalized onto the quadric.
Vec interpolate(const Mesh& mesh, double s, double t);

}  // namespace hpq
