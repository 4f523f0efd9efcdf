#include <algorithm>
#include <unordered_map>

#include "polygon.hpp"
#include "shocklab/mesh.hpp"

namespace shocklab {

namespace {

struct Corner {
  int cell;
  int next;  // node after the vertex in the cell's counter-clockwise order
  int prev;  // node before it
};

std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint64_t>(std::max(a, b));
}

}  // namespace

Mesh build_median_dual(const Mesh& primal) {
  if (primal.vertex_centered) throw MeshError("median dual requires a primal cell mesh");
  const int nn = primal.num_nodes();
  const int nc = primal.num_volumes();
  const int ne = primal.num_faces();

  Mesh dual;
  dual.vertex_centered = true;
  dual.ogrid = primal.ogrid;

  // Dual nodes: primal vertices, then cell centroids, then edge midpoints.
  const int centroid_base = nn;
  const int midpoint_base = nn + nc;
  dual.nodes.reserve(nn + nc + ne);
  dual.nodes.insert(dual.nodes.end(), primal.nodes.begin(), primal.nodes.end());
  for (const auto& cv : primal.volumes) dual.nodes.push_back(cv.centroid);
  std::unordered_map<std::uint64_t, int> edge_of;
  edge_of.reserve(ne);
  for (int e = 0; e < ne; ++e) {
    const Face& f = primal.faces[e];
    dual.nodes.push_back(f.center);
    edge_of.emplace(pair_key(f.nodes[0], f.nodes[1]), e);
  }
  auto edge_index = [&](int a, int b) { return edge_of.at(pair_key(a, b)); };

  dual.polygons.resize(nn);
  std::vector<Corner> corners;
  for (int v = 0; v < nn; ++v) {
    corners.clear();
    for (int c : primal.volumes_at(v)) {
      const auto& poly = primal.polygons[c];
      const int k = static_cast<int>(poly.size());
      const int pos = static_cast<int>(std::find(poly.begin(), poly.end(), v) - poly.begin());
      corners.push_back({c, poly[(pos + 1) % k], poly[(pos + k - 1) % k]});
    }
    if (corners.empty()) throw MeshError("node " + std::to_string(v) + " is not used by any cell");

    auto start = corners.begin();
    bool on_boundary = false;
    for (auto it = corners.begin(); it != corners.end(); ++it)
      if (primal.faces[edge_index(v, it->next)].is_boundary()) {
        start = it;
        on_boundary = true;
        break;
      }

    auto& poly = dual.polygons[v];
    if (on_boundary) poly.push_back(v);
    Corner cur = *start;
    for (std::size_t visited = 0;; ++visited) {
      if (visited == corners.size()) throw MeshError("non-manifold vertex " + std::to_string(v));
      poly.push_back(midpoint_base + edge_index(v, cur.next));
      poly.push_back(centroid_base + cur.cell);
      if (on_boundary && primal.faces[edge_index(v, cur.prev)].is_boundary()) {
        poly.push_back(midpoint_base + edge_index(v, cur.prev));
        break;
      }
      const auto nxt = std::find_if(corners.begin(), corners.end(),
                                    [&](const Corner& c) { return c.next == cur.prev; });
      if (nxt == corners.end()) throw MeshError("broken vertex fan at node " + std::to_string(v));
      if (!on_boundary && nxt == start) break;
      cur = *nxt;
    }
  }

  dual.volumes.reserve(nn);
  for (int v = 0; v < nn; ++v) {
    const auto [area, centroid] = detail::polygon_area_centroid(dual.nodes, dual.polygons[v]);
    if (!(area > 0.0)) throw MeshError("dual volume " + std::to_string(v) + " has non-positive area");
    dual.volumes.push_back({area, centroid});
  }

  auto add_face = [&](int left, int right, Vec2 area_vec, std::array<int, 2> nodes, Vec2 center,
                      BoundaryTag tag) {
    const double len = norm(area_vec);
    Face f;
    f.nodes = nodes;
    f.left = left;
    f.right = right;
    f.tag = tag;
    f.normal = (1.0 / len) * area_vec;
    f.length = len;
    f.center = center;
    dual.faces.push_back(f);
  };

  for (int e = 0; e < ne; ++e) {
    const Face& pf = primal.faces[e];
    const int a = pf.nodes[0];
    const int b = pf.nodes[1];
    const Vec2 m = pf.center;
    const Vec2 cl = primal.volumes[pf.left].centroid;
    Vec2 n = perp_right(m - cl);
    std::array<int, 2> ends{centroid_base + pf.left, midpoint_base + e};
    if (!pf.is_boundary()) {
      const Vec2 cr = primal.volumes[pf.right].centroid;
      n += perp_right(cr - m);
      ends[1] = centroid_base + pf.right;
    }
    if (dot(n, primal.nodes[b] - primal.nodes[a]) < 0.0) n = -n;
    add_face(a, b, n, ends, m, BoundaryTag::interior);

    if (pf.is_boundary()) {
      const double half = 0.5 * pf.length;
      add_face(a, -1, half * pf.normal, {a, midpoint_base + e}, 0.5 * (primal.nodes[a] + m), pf.tag);
      add_face(b, -1, half * pf.normal, {midpoint_base + e, b}, 0.5 * (m + primal.nodes[b]), pf.tag);
    }
  }

  dual.finalize();
  return dual;
}

}  // namespace shocklab
