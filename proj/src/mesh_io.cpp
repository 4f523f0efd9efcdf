#include <fstream>
#include <iomanip>
#include <sstream>

#include "shocklab/mesh.hpp"

namespace shocklab {

void write_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  if (mesh.vertex_centered) throw MeshError("only primal cell meshes can be written");
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open '" + path.string() + "' for writing");
  const auto bedges = boundary_edges(mesh);
  out << "MESH2D 1\n" << mesh.num_nodes() << ' ' << mesh.polygons.size() << ' ' << bedges.size() << '\n';
  out << std::setprecision(17);
  for (const Vec2& x : mesh.nodes) out << x.x << ' ' << x.y << '\n';
  for (const auto& poly : mesh.polygons) {
    if (poly.size() != 3 && poly.size() != 4) throw MeshError("mesh file supports triangles and quads only");
    out << poly.size();
    for (int n : poly) out << ' ' << n;
    out << '\n';
  }
  for (const BoundaryEdge& e : bedges) out << e.a << ' ' << e.b << ' ' << to_string(e.tag) << '\n';
  if (!out) throw MeshError("write failed for '" + path.string() + "'");
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw MeshError(std::string("count mismatch: file ended while reading ") + what);
  }
  int line() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

[[noreturn]] void malformed(const LineReader& r, const std::string& msg) {
  throw MeshError("line " + std::to_string(r.line()) + ": " + msg);
}

}  // namespace

Mesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open '" + path.string() + "'");
  LineReader reader(in);

  {
    auto ls = reader.next("header");
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "MESH2D" || version != 1)
      malformed(reader, "malformed header, expected 'MESH2D 1'");
  }
  long n_nodes = 0, n_cells = 0, n_bfaces = 0;
  {
    auto ls = reader.next("counts");
    if (!(ls >> n_nodes >> n_cells >> n_bfaces) || n_nodes < 3 || n_cells < 1 || n_bfaces < 0)
      malformed(reader, "malformed count line");
  }

  std::vector<Vec2> nodes(n_nodes);
  for (auto& x : nodes) {
    auto ls = reader.next("nodes");
    if (!(ls >> x.x >> x.y)) malformed(reader, "malformed node line");
  }
  std::vector<std::vector<int>> cells(n_cells);
  for (auto& cell : cells) {
    auto ls = reader.next("cells");
    int k = 0;
    if (!(ls >> k) || (k != 3 && k != 4)) malformed(reader, "cell must have 3 or 4 nodes");
    cell.resize(k);
    for (int& n : cell) {
      if (!(ls >> n)) malformed(reader, "malformed cell line");
      if (n < 0 || n >= n_nodes) malformed(reader, "cell node index " + std::to_string(n) + " out of range");
    }
  }
  std::vector<BoundaryEdge> bedges(n_bfaces);
  for (auto& e : bedges) {
    auto ls = reader.next("boundary faces");
    std::string tag;
    if (!(ls >> e.a >> e.b >> tag)) malformed(reader, "malformed boundary face line");
    if (e.a < 0 || e.a >= n_nodes || e.b < 0 || e.b >= n_nodes)
      malformed(reader, "boundary face node index out of range");
    e.tag = boundary_tag_from_string(tag);
  }
  return build_cell_mesh(std::move(nodes), std::move(cells), bedges);
}

}  // namespace shocklab
