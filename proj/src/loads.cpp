#include "axivem/loads.hpp"

#include <cmath>
#include <map>

namespace axivem {

Vec4<double> edge_load_vector(const Vec2<double>& p1, const Vec2<double>& p2,
                              const EdgeTraction& traction) {
  const double len = (p2 - p1).norm();
  if (!(len > 0)) throw std::invalid_argument("edge_load_vector: zero-length edge");
  Vec4<double> f = Vec4<double>::Zero();

  auto accumulate = [&](double s, double w) {
    const double r = p1.x() + s * (p2.x() - p1.x());
    const Vec2<double> t = traction.value(s);
    const double fac = w * r * len;
    f(0) += fac * (1 - s) * t.x();
    f(1) += fac * (1 - s) * t.y();
    f(2) += fac * s * t.x();
    f(3) += fac * s * t.y();
  };

  const bool vertical = edge_is_vertical(p1.x(), p2.x(), len);
  if (vertical && traction.constant) {
    for (const auto& q : edge_midpoint_rule<double>()) accumulate(q.s, q.w);
  } else {
    for (const auto& q : edge_gauss2_rule<double>()) accumulate(q.s, q.w);
  }
  return f;
}

void apply_dirichlet(Eigen::SparseMatrix<double>& K, VecX<double>& f, const DirichletSpec& spec) {
  std::map<int, double> fixed;
  for (const auto& e : spec.entries) {
    const int dof = 2 * e.node + int(e.component);
    auto [it, inserted] = fixed.insert({dof, e.value});
    if (!inserted && it->second != e.value)
      throw std::invalid_argument("apply_dirichlet: conflicting prescription at DOF " +
                                  std::to_string(dof));
  }
  if (fixed.empty()) return;

  // f <- f - K(:,j) g_j for every constrained column, skipping entries in
  // constrained rows (their equations are replaced below).
  for (const auto& [j, g] : fixed)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, j); it; ++it)
      if (!fixed.count(int(it.row()))) f(it.row()) -= it.value() * g;

  // Rebuild K keeping only free-free couplings; unit diagonal on the
  // constrained block preserves symmetry.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(size_t(K.nonZeros()));
  for (int j = 0; j < K.outerSize(); ++j) {
    const bool col_fixed = fixed.count(j) != 0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, j); it; ++it) {
      if (col_fixed || fixed.count(int(it.row()))) continue;
      trips.emplace_back(it.row(), j, it.value());
    }
  }
  for (const auto& [j, g] : fixed) {
    trips.emplace_back(j, j, 1.0);
    f(j) = g;
  }
  K.setZero();
  K.setFromTriplets(trips.begin(), trips.end());
}

}  // namespace axivem
