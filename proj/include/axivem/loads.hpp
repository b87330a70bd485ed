#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCore>

#include "axivem/mesh.hpp"
#include "axivem/quadrature.hpp"
#include "axivem/types.hpp"

namespace axivem {

enum class DofComponent : int { radial = 0, axial = 1 };

struct DirichletEntry {
  int node;
  DofComponent component;
  double value;
};

struct DirichletSpec {
  std::vector<DirichletEntry> entries;

  // Prescribes both components of `field` at every node in `nodes`.
  static DirichletSpec from_field(const std::vector<int>& nodes,
                                  const std::function<Vec2<double>(double, double)>& field,
                                  const PolyMesh& mesh) {
    DirichletSpec spec;
    spec.entries.reserve(nodes.size() * 2);
    for (int n : nodes) {
      const auto u = field(mesh.vertices[size_t(n)].r, mesh.vertices[size_t(n)].z);
      spec.entries.push_back({n, DofComponent::radial, u.x()});
      spec.entries.push_back({n, DofComponent::axial, u.y()});
    }
    return spec;
  }
};

// Traction along a boundary edge, evaluated at the edge parameter
// s in [0,1]. `constant` widens the vertical-edge quadrature shortcut
// to the one-point rule; varying tractions always use two-point Gauss.
struct EdgeTraction {
  std::function<Vec2<double>(double s)> value;
  bool constant = false;

  static EdgeTraction uniform(double tr, double tz) {
    return {[tr, tz](double) { return Vec2<double>(tr, tz); }, true};
  }
};

struct TractionSpec {
  struct Entry {
    int element;
    int local_edge;
    EdgeTraction traction;
  };
  std::vector<Entry> entries;
};

// Consistent nodal loads of a traction on one edge:
//   f_i = sum_q w_q N_i(s_q) t_c(s_q) r(s_q) |e|
// returned in the order (n1 radial, n1 axial, n2 radial, n2 axial).
// One-point quadrature only when the edge is vertical and the traction
// constant; two-point Gauss otherwise.
Vec4<double> edge_load_vector(const Vec2<double>& p1, const Vec2<double>& p2,
                              const EdgeTraction& traction);

// Symmetric elimination of prescribed DOFs on the assembled system:
// f <- f - K(:,j) g_j, then row/column j cleared, K(j,j) = 1, f(j) = g_j.
// Keeps K symmetric (and SPD on the free block). Throws on conflicting
// double prescription.
void apply_dirichlet(Eigen::SparseMatrix<double>& K, VecX<double>& f, const DirichletSpec& spec);

}  // namespace axivem
