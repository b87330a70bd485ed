#pragma once

#include <string>
#include <utility>
#include <vector>

#include "axivem/element.hpp"
#include "axivem/types.hpp"

namespace axivem {

struct Vertex {
  double r;
  double z;
};

struct PolyElement {
  std::vector<int> vertex_ids;  // counter-clockwise
};

// Conforming polygonal mesh of the meridional (r, z) section. Immutable
// after construction; geometry queries are per-element and pure.
struct PolyMesh {
  std::vector<Vertex> vertices;
  std::vector<PolyElement> elements;
  // (element id, local edge id) pairs of edges owned by exactly one element.
  std::vector<std::pair<int, int>> boundary_edges;

  int num_nodes() const { return int(vertices.size()); }
  int num_elements() const { return int(elements.size()); }

  Mat2X<double> element_vertices(int e) const {
    const auto& ids = elements[size_t(e)].vertex_ids;
    Mat2X<double> v(2, Index(ids.size()));
    for (size_t k = 0; k < ids.size(); ++k) {
      v(0, Index(k)) = vertices[size_t(ids[k])].r;
      v(1, Index(k)) = vertices[size_t(ids[k])].z;
    }
    return v;
  }

  ElementGeometry<double> geometry(int e) const { return compute_geometry(element_vertices(e)); }
};

// Normalizes element orientation to CCW, checks r > 0 everywhere, edge
// conformity (every edge shared by at most two elements) and fills
// boundary_edges. Throws std::invalid_argument on violations.
void finalize_mesh(PolyMesh& mesh);

// Structured quadrilateral mesh of [r_in, r_out] x [z_min, z_max] with
// nr x nz cells; (nr+1)(nz+1) vertices, CCW quads, boundary edges flagged.
PolyMesh generate_structured_mesh(double r_in, double r_out, double z_min, double z_max, int nr,
                                  int nz);

// Node ids lying on the rectangle boundary of a structured mesh domain.
std::vector<int> boundary_nodes(const PolyMesh& mesh);

// Line-oriented mesh format:
//   <num_vertices> <num_elements>
//   r z                (one line per vertex)
//   m id_1 ... id_m    (one line per element)
PolyMesh read_mesh_file(const std::string& path);
void write_mesh_file(const PolyMesh& mesh, const std::string& path);

}  // namespace axivem
