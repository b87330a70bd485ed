#include "axivem/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace axivem {

namespace {

double signed_area(const PolyMesh& mesh, const PolyElement& e) {
  double a2 = 0;
  const int m = int(e.vertex_ids.size());
  for (int i = 0; i < m; ++i) {
    const auto& p = mesh.vertices[size_t(e.vertex_ids[size_t(i)])];
    const auto& q = mesh.vertices[size_t(e.vertex_ids[size_t((i + 1) % m)])];
    a2 += p.r * q.z - q.r * p.z;
  }
  return a2 / 2;
}

}  // namespace

void finalize_mesh(PolyMesh& mesh) {
  for (const auto& v : mesh.vertices)
    if (!(v.r > 0))
      throw std::invalid_argument("mesh: vertices must satisfy r > 0 (domain bounded away from the axis)");

  for (auto& e : mesh.elements) {
    if (e.vertex_ids.size() < 3) throw std::invalid_argument("mesh: element with fewer than 3 vertices");
    for (int id : e.vertex_ids)
      if (id < 0 || id >= mesh.num_nodes()) throw std::invalid_argument("mesh: vertex index out of range");
    if (signed_area(mesh, e) < 0) std::reverse(e.vertex_ids.begin(), e.vertex_ids.end());
  }

  // Edge conformity: shared edges must appear exactly twice with
  // identical vertex pairs; single-owner edges form the boundary.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> owners;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& ids = mesh.elements[size_t(e)].vertex_ids;
    const int m = int(ids.size());
    for (int k = 0; k < m; ++k) {
      int a = ids[size_t(k)], b = ids[size_t((k + 1) % m)];
      owners[{std::min(a, b), std::max(a, b)}].push_back({e, k});
    }
  }
  mesh.boundary_edges.clear();
  for (const auto& [edge, who] : owners) {
    if (who.size() > 2)
      throw std::invalid_argument("mesh: edge shared by more than two elements (non-conforming)");
    if (who.size() == 1) mesh.boundary_edges.push_back(who.front());
  }
}

PolyMesh generate_structured_mesh(double r_in, double r_out, double z_min, double z_max, int nr,
                                  int nz) {
  if (!(r_in > 0)) throw std::invalid_argument("generate_structured_mesh: r_in must be positive");
  if (!(r_out > r_in) || !(z_max > z_min))
    throw std::invalid_argument("generate_structured_mesh: empty domain");
  if (nr < 1 || nz < 1) throw std::invalid_argument("generate_structured_mesh: need nr, nz >= 1");

  PolyMesh mesh;
  mesh.vertices.reserve(size_t((nr + 1) * (nz + 1)));
  for (int j = 0; j <= nz; ++j)
    for (int i = 0; i <= nr; ++i)
      mesh.vertices.push_back({r_in + (r_out - r_in) * i / nr, z_min + (z_max - z_min) * j / nz});

  mesh.elements.reserve(size_t(nr * nz));
  for (int j = 0; j < nz; ++j)
    for (int i = 0; i < nr; ++i) {
      const int a = j * (nr + 1) + i;
      mesh.elements.push_back({{a, a + 1, a + nr + 2, a + nr + 1}});
    }
  finalize_mesh(mesh);
  return mesh;
}

std::vector<int> boundary_nodes(const PolyMesh& mesh) {
  std::vector<char> flag(size_t(mesh.num_nodes()), 0);
  for (const auto& [e, k] : mesh.boundary_edges) {
    const auto& ids = mesh.elements[size_t(e)].vertex_ids;
    const int m = int(ids.size());
    flag[size_t(ids[size_t(k)])] = 1;
    flag[size_t(ids[size_t((k + 1) % m)])] = 1;
  }
  std::vector<int> nodes;
  for (int n = 0; n < mesh.num_nodes(); ++n)
    if (flag[size_t(n)]) nodes.push_back(n);
  return nodes;
}

PolyMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("read_mesh_file: cannot open " + path);
  int nv = 0, ne = 0;
  if (!(in >> nv >> ne) || nv < 3 || ne < 1)
    throw std::invalid_argument("read_mesh_file: bad header in " + path);
  PolyMesh mesh;
  mesh.vertices.resize(size_t(nv));
  for (auto& v : mesh.vertices)
    if (!(in >> v.r >> v.z)) throw std::invalid_argument("read_mesh_file: truncated vertex list");
  mesh.elements.resize(size_t(ne));
  for (auto& e : mesh.elements) {
    int m = 0;
    if (!(in >> m) || m < 3) throw std::invalid_argument("read_mesh_file: bad element record");
    e.vertex_ids.resize(size_t(m));
    for (auto& id : e.vertex_ids)
      if (!(in >> id)) throw std::invalid_argument("read_mesh_file: truncated element list");
  }
  finalize_mesh(mesh);
  return mesh;
}

void write_mesh_file(const PolyMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_mesh_file: cannot open " + path);
  out.precision(17);
  out << mesh.num_nodes() << ' ' << mesh.num_elements() << '\n';
  for (const auto& v : mesh.vertices) out << v.r << ' ' << v.z << '\n';
  for (const auto& e : mesh.elements) {
    out << e.vertex_ids.size();
    for (int id : e.vertex_ids) out << ' ' << id;
    out << '\n';
  }
}

}  // namespace axivem
