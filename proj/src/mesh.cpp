#include "shocklab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include "polygon.hpp"

namespace shocklab {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::interior: return "interior";
    case BoundaryTag::inflow: return "inflow";
    case BoundaryTag::outflow: return "outflow";
    case BoundaryTag::wall: return "wall";
    case BoundaryTag::symmetry: return "symmetry";
  }
  return "?";
}

BoundaryTag boundary_tag_from_string(std::string_view s) {
  if (s == "inflow") return BoundaryTag::inflow;
  if (s == "outflow") return BoundaryTag::outflow;
  if (s == "wall") return BoundaryTag::wall;
  if (s == "symmetry") return BoundaryTag::symmetry;
  throw MeshError("unknown boundary tag '" + std::string(s) + "'");
}

std::string_view to_string(GridKind kind) {
  switch (kind) {
    case GridKind::quad: return "quad";
    case GridKind::regular_tri: return "regular_tri";
    case GridKind::irregular_tri: return "irregular_tri";
  }
  return "?";
}

GridKind grid_kind_from_string(std::string_view s) {
  if (s == "quad") return GridKind::quad;
  if (s == "regular_tri") return GridKind::regular_tri;
  if (s == "irregular_tri") return GridKind::irregular_tri;
  throw std::invalid_argument("unknown grid kind '" + std::string(s) + "'");
}

void Mesh::finalize() {
  const int nv = num_volumes();
  volume_face_offsets.assign(nv + 1, 0);
  for (const Face& f : faces) {
    ++volume_face_offsets[f.left + 1];
    if (!f.is_boundary()) ++volume_face_offsets[f.right + 1];
  }
  for (int i = 0; i < nv; ++i) volume_face_offsets[i + 1] += volume_face_offsets[i];
  volume_faces.assign(volume_face_offsets.back(), -1);
  std::vector<int> fill(volume_face_offsets.begin(), volume_face_offsets.end() - 1);
  for (int fi = 0; fi < num_faces(); ++fi) {
    const Face& f = faces[fi];
    volume_faces[fill[f.left]++] = fi;
    if (!f.is_boundary()) volume_faces[fill[f.right]++] = fi;
  }

  const int nn = num_nodes();
  node_volume_offsets.assign(nn + 1, 0);
  for (const auto& poly : polygons)
    for (int n : poly) ++node_volume_offsets[n + 1];
  for (int i = 0; i < nn; ++i) node_volume_offsets[i + 1] += node_volume_offsets[i];
  node_volumes.assign(node_volume_offsets.back(), -1);
  fill.assign(node_volume_offsets.begin(), node_volume_offsets.end() - 1);
  for (int c = 0; c < static_cast<int>(polygons.size()); ++c)
    for (int n : polygons[c]) node_volumes[fill[n]++] = c;
}

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

}  // namespace

Mesh build_cell_mesh(std::vector<Vec2> nodes, std::vector<std::vector<int>> cells,
                     std::span<const BoundaryEdge> bedges) {
  Mesh mesh;
  mesh.nodes = std::move(nodes);
  mesh.polygons = std::move(cells);
  const int nn = mesh.num_nodes();

  mesh.volumes.reserve(mesh.polygons.size());
  for (std::size_t c = 0; c < mesh.polygons.size(); ++c) {
    const auto& poly = mesh.polygons[c];
    if (poly.size() < 3) throw MeshError("cell " + std::to_string(c) + " has fewer than 3 nodes");
    for (int n : poly)
      if (n < 0 || n >= nn)
        throw MeshError("cell " + std::to_string(c) + " references node " + std::to_string(n) +
                        " outside [0, " + std::to_string(nn) + ")");
    const auto [area, centroid] = detail::polygon_area_centroid(mesh.nodes, poly);
    if (!(area > 0.0))
      throw MeshError("cell " + std::to_string(c) + " has non-positive area " + std::to_string(area));
    mesh.volumes.push_back({area, centroid});
  }

  std::unordered_map<std::uint64_t, int> edge_face;
  edge_face.reserve(mesh.polygons.size() * 4);
  for (int c = 0; c < static_cast<int>(mesh.polygons.size()); ++c) {
    const auto& poly = mesh.polygons[c];
    const int k = static_cast<int>(poly.size());
    for (int e = 0; e < k; ++e) {
      const int a = poly[e];
      const int b = poly[(e + 1) % k];
      const auto [it, inserted] = edge_face.try_emplace(edge_key(a, b), mesh.num_faces());
      if (inserted) {
        const Vec2 d = mesh.nodes[b] - mesh.nodes[a];
        const double len = norm(d);
        if (!(len > 0.0)) throw MeshError("zero-length edge in cell " + std::to_string(c));
        Face f;
        f.nodes = {a, b};
        f.left = c;
        f.normal = (1.0 / len) * perp_right(d);
        f.length = len;
        f.center = 0.5 * (mesh.nodes[a] + mesh.nodes[b]);
        mesh.faces.push_back(f);
      } else {
        Face& f = mesh.faces[it->second];
        if (f.right >= 0) throw MeshError("edge shared by more than two cells");
        if (f.nodes[0] != b) throw MeshError("inconsistent cell orientation at cell " + std::to_string(c));
        f.right = c;
      }
    }
  }

  for (const BoundaryEdge& be : bedges) {
    const auto it = edge_face.find(edge_key(be.a, be.b));
    if (it == edge_face.end())
      throw MeshError("boundary edge " + std::to_string(be.a) + "-" + std::to_string(be.b) +
                      " is not an edge of any cell");
    Face& f = mesh.faces[it->second];
    if (!f.is_boundary()) throw MeshError("boundary tag given for interior edge");
    f.tag = be.tag;
  }
  for (const Face& f : mesh.faces)
    if (f.is_boundary() && f.tag == BoundaryTag::interior)
      throw MeshError("untagged boundary edge " + std::to_string(f.nodes[0]) + "-" +
                      std::to_string(f.nodes[1]));

  mesh.finalize();
  return mesh;
}

std::vector<BoundaryEdge> boundary_edges(const Mesh& mesh) {
  std::vector<BoundaryEdge> out;
  for (const Face& f : mesh.faces)
    if (f.is_boundary()) out.push_back({f.nodes[0], f.nodes[1], f.tag});
  return out;
}

namespace {

void check_params(const GridParams& p) {
  if (p.n_radial < 2) throw std::invalid_argument("n_radial must be >= 2");
  if (p.n_circumferential < 4) throw std::invalid_argument("n_circumferential must be >= 4");
  if (!(p.r_cylinder > 0.0)) throw std::invalid_argument("r_cylinder must be positive");
  if (!(p.r_outer > p.r_cylinder)) throw std::invalid_argument("r_outer must exceed r_cylinder");
}

// Geometric stretching; the wall layer is one third of the outermost layer.
std::vector<double> radial_stations(const GridParams& p) {
  const int nr = p.n_radial;
  const double q = std::pow(3.0, 1.0 / (nr - 1));
  const double first = (p.r_outer - p.r_cylinder) * (q - 1.0) / (std::pow(q, nr) - 1.0);
  std::vector<double> r(nr + 1);
  r[0] = p.r_cylinder;
  double step = first;
  for (int i = 1; i < nr; ++i) {
    r[i] = r[i - 1] + step;
    step *= q;
  }
  r[nr] = p.r_outer;
  return r;
}

struct StructuredLayout {
  int nr, nt;
  int node(int i, int j) const { return i * (nt + 1) + j; }
};

}  // namespace

Mesh generate_grid(GridKind kind, const GridParams& params) {
  check_params(params);
  const StructuredLayout L{params.n_radial, params.n_circumferential};
  const auto radii = radial_stations(params);

  // Angle measured from the stagnation direction (-x). (2j - nt) is an exact integer, so
  // mirrored columns get exactly negated angles.
  std::vector<Vec2> nodes((L.nr + 1) * (L.nt + 1));
  const double dphi = std::numbers::pi / (2.0 * L.nt);
  for (int i = 0; i <= L.nr; ++i)
    for (int j = 0; j <= L.nt; ++j) {
      const double phi = (2 * j - L.nt) * dphi;
      nodes[L.node(i, j)] = {-radii[i] * std::cos(phi), radii[i] * std::sin(phi)};
    }

  std::vector<std::vector<int>> cells;
  cells.reserve(kind == GridKind::quad ? L.nr * L.nt : 2 * L.nr * L.nt);
  for (int i = 0; i < L.nr; ++i)
    for (int j = 0; j < L.nt; ++j) {
      const int a = L.node(i, j), b = L.node(i, j + 1), c = L.node(i + 1, j + 1),
                d = L.node(i + 1, j);
      if (kind == GridKind::quad) {
        cells.push_back({a, b, c, d});
      } else {
        // Every diagonal runs from (i, j) to (i + 1, j + 1): one rotational sense throughout.
        cells.push_back({a, b, c});
        cells.push_back({a, c, d});
      }
    }

  std::vector<BoundaryEdge> bedges;
  const Vec2 inflow_dir{1.0, 0.0};
  for (int j = 0; j < L.nt; ++j) {
    bedges.push_back({L.node(0, j), L.node(0, j + 1), BoundaryTag::wall});
    const int a = L.node(L.nr, j), b = L.node(L.nr, j + 1);
    // Outer arc traversed clockwise here, so the outward normal is the left perpendicular.
    const Vec2 d = nodes[b] - nodes[a];
    const Vec2 outward{-d.y, d.x};
    bedges.push_back({a, b, dot(outward, inflow_dir) < 0.0 ? BoundaryTag::inflow : BoundaryTag::outflow});
  }
  for (int i = 0; i < L.nr; ++i) {
    bedges.push_back({L.node(i, 0), L.node(i + 1, 0), BoundaryTag::outflow});
    bedges.push_back({L.node(i, L.nt), L.node(i + 1, L.nt), BoundaryTag::outflow});
  }

  if (kind == GridKind::irregular_tri) {
    std::mt19937_64 rng(params.random_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec2> offsets(nodes.size());
    for (int i = 1; i < L.nr; ++i)
      for (int j = 1; j < L.nt; ++j) {
        const Vec2 x = nodes[L.node(i, j)];
        double h = norm(nodes[L.node(i + 1, j)] - x);
        h = std::min(h, norm(nodes[L.node(i - 1, j)] - x));
        h = std::min(h, norm(nodes[L.node(i, j + 1)] - x));
        h = std::min(h, norm(nodes[L.node(i, j - 1)] - x));
        const double angle = 2.0 * std::numbers::pi * unit(rng);
        const double mag = 0.2 * h * unit(rng);
        offsets[L.node(i, j)] = {mag * std::cos(angle), mag * std::sin(angle)};
      }

    double amplitude = 1.0;
    for (int attempt = 0;; ++attempt) {
      std::vector<Vec2> moved(nodes.size());
      for (std::size_t n = 0; n < nodes.size(); ++n) moved[n] = nodes[n] + amplitude * offsets[n];
      const bool ok = std::all_of(cells.begin(), cells.end(), [&](const auto& c) {
        return detail::polygon_area_centroid(moved, c).area > 0.0;
      });
      if (ok) {
        nodes = std::move(moved);
        break;
      }
      if (attempt == 10) throw MeshError("irregular grid: degenerate cells after 10 retries");
      amplitude *= 0.5;
    }
  }

  Mesh mesh = build_cell_mesh(std::move(nodes), std::move(cells), bedges);
  mesh.ogrid = OGridInfo{kind, params};
  return mesh;
}

Mesh generate_box(const BoxSpec& s) {
  if (s.nx < 1 || s.ny < 1 || !(s.lx > 0) || !(s.ly > 0)) throw std::invalid_argument("bad box spec");
  auto node = [&](int i, int j) { return j * (s.nx + 1) + i; };
  std::vector<Vec2> nodes((s.nx + 1) * (s.ny + 1));
  for (int j = 0; j <= s.ny; ++j)
    for (int i = 0; i <= s.nx; ++i)
      nodes[node(i, j)] = {s.x0 + s.lx * i / s.nx, s.y0 + s.ly * j / s.ny};
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      const int a = node(i, j), b = node(i + 1, j), c = node(i + 1, j + 1), d = node(i, j + 1);
      if (s.triangles) {
        cells.push_back({a, b, c});
        cells.push_back({a, c, d});
      } else {
        cells.push_back({a, b, c, d});
      }
    }
  std::vector<BoundaryEdge> bedges;
  for (int i = 0; i < s.nx; ++i) {
    bedges.push_back({node(i, 0), node(i + 1, 0), s.tags[0]});
    bedges.push_back({node(i, s.ny), node(i + 1, s.ny), s.tags[2]});
  }
  for (int j = 0; j < s.ny; ++j) {
    bedges.push_back({node(s.nx, j), node(s.nx, j + 1), s.tags[1]});
    bedges.push_back({node(0, j), node(0, j + 1), s.tags[3]});
  }
  return build_cell_mesh(std::move(nodes), std::move(cells), bedges);
}

std::vector<Violation> validate_topology(const Mesh& mesh) {
  std::vector<Violation> out;
  auto report = [&](std::string kind, int index, std::string msg) {
    out.push_back({std::move(kind), index, std::move(msg)});
  };
  const int nv = mesh.num_volumes();
  if (static_cast<int>(mesh.polygons.size()) != nv)
    report("count", -1, "polygon count differs from control-volume count");

  std::vector<Vec2> closure(nv);
  std::vector<double> perimeter(nv, 0.0);
  std::vector<int> face_count(nv, 0);
  for (int fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.left < 0 || f.left >= nv) {
      report("adjacency", fi, "left volume out of range");
      continue;
    }
    if (f.is_boundary()) {
      if (f.tag == BoundaryTag::interior) report("adjacency", fi, "boundary face without tag");
    } else {
      if (f.right >= nv) {
        report("adjacency", fi, "right volume out of range");
        continue;
      }
      if (f.right == f.left) report("adjacency", fi, "face references the same volume twice");
      if (f.tag != BoundaryTag::interior) report("adjacency", fi, "interior face carries a boundary tag");
    }
    if (!(f.length > 0.0)) report("length", fi, "non-positive face length");
    if (std::abs(norm(f.normal) - 1.0) > 1e-12) report("normal", fi, "normal is not unit length");
    const Vec2 s = f.length * f.normal;
    closure[f.left] += s;
    perimeter[f.left] += f.length;
    ++face_count[f.left];
    if (!f.is_boundary() && f.right != f.left) {
      closure[f.right] -= s;
      perimeter[f.right] += f.length;
      ++face_count[f.right];
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (!(mesh.volumes[v].area > 0.0)) report("area", v, "non-positive area");
    if (face_count[v] == 0) {
      report("adjacency", v, "volume has no faces");
      continue;
    }
    if (norm(closure[v]) > 1e-12 * perimeter[v]) {
      std::ostringstream os;
      os << "open control volume: |sum n*l| = " << norm(closure[v]);
      report("closure", v, os.str());
    }
  }
  return out;
}

}  // namespace shocklab
