#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shocklab/geometry.hpp"

namespace shocklab {

enum class BoundaryTag : std::uint8_t { interior, inflow, outflow, wall, symmetry };

std::string_view to_string(BoundaryTag tag);
BoundaryTag boundary_tag_from_string(std::string_view s);

enum class GridKind { quad, regular_tri, irregular_tri };

std::string_view to_string(GridKind kind);
GridKind grid_kind_from_string(std::string_view s);

struct GridParams {
  int n_radial = 80;
  int n_circumferential = 120;
  double r_cylinder = 1.0;
  double r_outer = 4.0;
  std::uint64_t random_seed = 1;
};

/// A face between two control volumes, or between one volume and the boundary.
/// The normal is unit length and points from `left` to `right` (outward for boundary faces).
struct Face {
  std::array<int, 2> nodes{};
  int left = -1;
  int right = -1;  // -1 on boundary faces
  BoundaryTag tag = BoundaryTag::interior;
  Vec2 normal;
  double length = 0.0;
  Vec2 center;  // reconstruction point

  bool is_boundary() const { return right < 0; }
};

struct ControlVolume {
  double area = 0.0;
  Vec2 centroid;
};

/// O-grid layout metadata kept for shock-front diagnostics.
struct OGridInfo {
  GridKind kind = GridKind::quad;
  GridParams params;
};

/// Finite-volume mesh. `polygons[i]` is the counter-clockwise outline of control volume `i`
/// over `nodes`; for a primal mesh these are the cells, for a median dual the dual volumes.
struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::vector<int>> polygons;
  std::vector<Face> faces;
  std::vector<ControlVolume> volumes;
  bool vertex_centered = false;
  std::optional<OGridInfo> ogrid;

  // Derived adjacency (filled by finalize()).
  std::vector<int> volume_face_offsets;
  std::vector<int> volume_faces;
  std::vector<int> node_volume_offsets;
  std::vector<int> node_volumes;

  int num_volumes() const { return static_cast<int>(volumes.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_nodes() const { return static_cast<int>(nodes.size()); }

  std::span<const int> faces_of(int volume) const {
    return {volume_faces.data() + volume_face_offsets[volume],
            volume_faces.data() + volume_face_offsets[volume + 1]};
  }
  std::span<const int> volumes_at(int node) const {
    return {node_volumes.data() + node_volume_offsets[node],
            node_volumes.data() + node_volume_offsets[node + 1]};
  }

  /// Rebuilds the volume->face and node->volume incidence lists.
  void finalize();
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Half-annulus O-grid around a cylinder at the origin, facing a freestream from -x.
Mesh generate_grid(GridKind kind, const GridParams& params);

/// Builds faces and geometry from counter-clockwise cells. Every boundary edge must appear in
/// `boundary_edges` with its tag.
struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::wall;
};
Mesh build_cell_mesh(std::vector<Vec2> nodes, std::vector<std::vector<int>> cells,
                     std::span<const BoundaryEdge> boundary_edges);

/// Structured rectangle [x0,x0+lx]x[y0,y0+ly]; optionally split into triangles.
/// Sides are tagged {bottom, right, top, left}.
struct BoxSpec {
  int nx = 4;
  int ny = 4;
  double x0 = 0.0;
  double y0 = 0.0;
  double lx = 1.0;
  double ly = 1.0;
  bool triangles = false;
  std::array<BoundaryTag, 4> tags{BoundaryTag::wall, BoundaryTag::wall, BoundaryTag::wall,
                                  BoundaryTag::wall};
};
Mesh generate_box(const BoxSpec& spec);

/// Vertex-centered control volumes bounded by centroid-to-edge-midpoint segments.
Mesh build_median_dual(const Mesh& mesh);

struct Violation {
  std::string kind;
  int index = -1;
  std::string message;
};

std::vector<Violation> validate_topology(const Mesh& mesh);

void write_mesh(const Mesh& mesh, const std::filesystem::path& path);
Mesh read_mesh(const std::filesystem::path& path);

/// Outward boundary edges (node pairs with tags) of a primal cell mesh.
std::vector<BoundaryEdge> boundary_edges(const Mesh& mesh);

}  // namespace shocklab
