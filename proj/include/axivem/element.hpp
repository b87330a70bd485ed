#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "axivem/material.hpp"
#include "axivem/quadrature.hpp"
#include "axivem/types.hpp"

namespace axivem {

// Triangle of the centroid fan: (centroid, v_i, v_{i+1}).
template <typename Scalar>
struct FanTriangle {
  Scalar area;
  Scalar mean_radius;  // (r_c + r_i + r_{i+1}) / 3
};

// Per-element geometry. Vertices are stored CCW as columns of a 2 x m
// matrix in (r, z) coordinates.
template <typename Scalar>
struct ElementGeometry {
  Mat2X<Scalar> vertices;
  Scalar area;
  Vec2<Scalar> centroid;
  Scalar diameter;
  Scalar weighted_volume;  // integral of r over the element
  std::vector<FanTriangle<Scalar>> triangles;

  Index num_vertices() const { return vertices.cols(); }
  Index num_dofs() const { return 2 * vertices.cols(); }
};

// Shoelace area/centroid, diameter as the max pairwise vertex distance,
// and the centroid fan with exact per-triangle integrals of r
// (int_T r = area * mean of the corner radii).
template <typename Scalar>
ElementGeometry<Scalar> compute_geometry(const Mat2X<Scalar>& verts) {
  const Index m = verts.cols();
  if (m < 3) throw std::invalid_argument("compute_geometry: polygon needs >= 3 vertices");

  ElementGeometry<Scalar> g;
  g.vertices = verts;

  Scalar a2 = 0, cr = 0, cz = 0;
  for (Index i = 0; i < m; ++i) {
    const auto p = verts.col(i);
    const auto q = verts.col((i + 1) % m);
    const Scalar cross = p.x() * q.y() - q.x() * p.y();
    a2 += cross;
    cr += (p.x() + q.x()) * cross;
    cz += (p.y() + q.y()) * cross;
  }
  g.area = a2 / Scalar(2);

  g.diameter = 0;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j)
      g.diameter = std::max(g.diameter, Scalar((verts.col(i) - verts.col(j)).norm()));

  if (!(g.area > Scalar(1e-14) * g.diameter * g.diameter))
    throw std::invalid_argument(
        "compute_geometry: degenerate or clockwise polygon (normalize to CCW first)");

  g.centroid = Vec2<Scalar>(cr / (Scalar(6) * g.area), cz / (Scalar(6) * g.area));

  g.weighted_volume = 0;
  g.triangles.reserve(m);
  for (Index i = 0; i < m; ++i) {
    const auto p1 = g.centroid;
    const auto p2 = verts.col(i);
    const auto p3 = verts.col((i + 1) % m);
    const Scalar tri2 =
        (p2.x() - p1.x()) * (p3.y() - p1.y()) - (p3.x() - p1.x()) * (p2.y() - p1.y());
    if (!(tri2 > Scalar(0)))
      throw std::invalid_argument(
          "compute_geometry: element is not star-shaped with respect to its centroid");
    FanTriangle<Scalar> t;
    t.area = tri2 / Scalar(2);
    t.mean_radius = (p1.x() + p2.x() + p3.x()) / Scalar(3);
    g.weighted_volume += t.area * t.mean_radius;
    g.triangles.push_back(t);
  }
  return g;
}

// Fan weights w_i approximating int_E N_i dr dz. N_i is interpolated
// linearly on each fan triangle with value 1 at v_i, 1/m at the centroid
// and 0 at the remaining vertices, then averaged triangle by triangle
// over the whole fan. The weights sum to |E| and integrate fields that
// are linear on the fan exactly when the vertex mean coincides with the
// centroid (always true for parallelograms).
template <typename Scalar>
VecX<Scalar> correction_weights(const ElementGeometry<Scalar>& g) {
  const Index m = g.num_vertices();
  VecX<Scalar> w = VecX<Scalar>::Zero(m);
  const Scalar adjacent = (Scalar(1) + Scalar(1) / Scalar(m)) / Scalar(3);
  const Scalar distal = Scalar(1) / (Scalar(3) * Scalar(m));
  for (Index i = 0; i < m; ++i)
    for (Index t = 0; t < m; ++t) {
      const bool touches = (t == i) || ((t + 1) % m == i);
      w(i) += (touches ? adjacent : distal) * g.triangles[size_t(t)].area;
    }
  return w;
}

// Boundary term of the projection system. Entry (j, p) integrates the
// unit-DOF virtual field against the traction of basis stress p over the
// element boundary with the radial weight:
//   sum_e sum_q w_q (v_h^j . t^p) r(s_q) |e|.
// Vertical edges use the midpoint rule (the integrand is linear there),
// all other edges two-point Gauss.
template <typename Scalar>
MatX<Scalar> boundary_integral_matrix(const ElementGeometry<Scalar>& g, const Mat4<Scalar>& c) {
  const Index m = g.num_vertices();
  MatX<Scalar> bnd = MatX<Scalar>::Zero(2 * m, 4);
  for (Index e = 0; e < m; ++e) {
    const Index a = e;
    const Index b = (e + 1) % m;
    const Vec2<Scalar> p1 = g.vertices.col(a);
    const Vec2<Scalar> p2 = g.vertices.col(b);
    const Scalar len = (p2 - p1).norm();
    if (!(len > Scalar(0))) throw std::invalid_argument("boundary_integral_matrix: zero-length edge");
    const Vec2<Scalar> tangent = (p2 - p1) / len;
    const Vec2<Scalar> normal(tangent.y(), -tangent.x());  // outward for CCW polygons

    auto accumulate = [&](Scalar s, Scalar w) {
      const Scalar r = p1.x() + s * (p2.x() - p1.x());
      const Scalar n1 = Scalar(1) - s;
      const Scalar n2 = s;
      for (int p = 0; p < 4; ++p) {
        const Vec4<Scalar> sig = c.col(p);  // basis stress (sigma_r, sigma_z, tau, sigma_theta)
        const Scalar tr = sig(0) * normal.x() + sig(2) * normal.y();
        const Scalar tz = sig(2) * normal.x() + sig(1) * normal.y();
        const Scalar f = w * r * len;
        bnd(2 * a + 0, p) += f * n1 * tr;
        bnd(2 * a + 1, p) += f * n1 * tz;
        bnd(2 * b + 0, p) += f * n2 * tr;
        bnd(2 * b + 1, p) += f * n2 * tz;
      }
    };

    if (edge_is_vertical(p1.x(), p2.x(), g.diameter)) {
      for (const auto& q : edge_midpoint_rule<Scalar>()) accumulate(q.s, q.w);
    } else {
      for (const auto& q : edge_gauss2_rule<Scalar>()) accumulate(q.s, q.w);
    }
  }
  return bnd;
}

// Volumetric term of the projection system, from the divergence of a
// constant stress in cylindrical coordinates:
//   div sigma^p = ((sigma_r^p - sigma_theta^p)/r, tau^p/r),
// so testing against v and integrating with the r weight leaves
//   (sigma_r^p - sigma_theta^p) int_E v_r  +  tau^p int_E v_z.
// Both area integrals are approximated with the fan weights.
template <typename Scalar>
MatX<Scalar> volumetric_correction_matrix(const ElementGeometry<Scalar>& g, const Mat4<Scalar>& c) {
  const Index m = g.num_vertices();
  const VecX<Scalar> w = correction_weights(g);
  MatX<Scalar> corr = MatX<Scalar>::Zero(2 * m, 4);
  const Eigen::Matrix<Scalar, 1, 4> radial_stress_gap = c.row(kRadial) - c.row(kHoop);
  const Eigen::Matrix<Scalar, 1, 4> shear_stress = c.row(kShear);
  for (Index i = 0; i < m; ++i) {
    corr.row(2 * i + 0) = radial_stress_gap * w(i);
    corr.row(2 * i + 1) = shear_stress * w(i);
  }
  return corr;
}

template <typename Scalar>
struct ProjectionSystem {
  Mat4X<Scalar> B;          // 4 x 2m: constant projected strain per unit DOF
  MatX<Scalar> rhs_matrix;  // 2m x 4: boundary minus volumetric data
};

// Assembles B column by column: for each DOF j solve
//   C * B(:, j) = (boundary_row_j - correction_row_j) / weighted_volume
// through an orthogonal factorization of the (well-conditioned) 4x4
// strain-stress system.
template <typename Scalar>
ProjectionSystem<Scalar> build_B(const ElementGeometry<Scalar>& g, const Mat4<Scalar>& c) {
  const Index n = g.num_dofs();
  ProjectionSystem<Scalar> sys;
  sys.rhs_matrix = boundary_integral_matrix(g, c) - volumetric_correction_matrix(g, c);
  sys.B.resize(4, n);
  Eigen::ColPivHouseholderQR<Mat4<Scalar>> qr(c);
  if (qr.rank() < 4)
    throw std::runtime_error("build_B: singular constitutive system (inadmissible material?)");
  for (Index j = 0; j < n; ++j)
    sys.B.col(j) = qr.solve(Vec4<Scalar>(sys.rhs_matrix.row(j).transpose()) / g.weighted_volume);
  return sys;
}

// Nodal vector of a pure axial translation (the only in-plane rigid mode
// under axisymmetry; radial translation carries hoop strain u_r / r).
template <typename Scalar>
VecX<Scalar> axial_translation_vector(Index num_vertices) {
  VecX<Scalar> d = VecX<Scalar>::Zero(2 * num_vertices);
  for (Index i = 0; i < num_vertices; ++i) d(2 * i + 1) = Scalar(1);
  return d;
}

// Symmetric idempotent projector whose range spans the rows of B together
// with the axial translation. B annihilates the translation, so without
// the extra row the stabilization would penalize the rigid mode.
template <typename Scalar>
MatX<Scalar> projector_P(const Mat4X<Scalar>& B) {
  const Index n = B.cols();
  MatX<Scalar> a(5, n);
  a.topRows(4) = B;
  a.row(4) = axial_translation_vector<Scalar>(n / 2).transpose();

  MatX<Scalar> gram = a * a.transpose();
  Eigen::JacobiSVD<MatX<Scalar>> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Scalar tol = Scalar(1e-12) * svd.singularValues()(0);
  VecX<Scalar> inv = svd.singularValues();
  for (Index i = 0; i < inv.size(); ++i) inv(i) = inv(i) > tol ? Scalar(1) / inv(i) : Scalar(0);
  const MatX<Scalar> gram_pinv =
      svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return a.transpose() * gram_pinv * a;
}

// K_c = B' C B * int_E r: the integrand is constant, so the r-weighted
// volume is the exact quadrature. Symmetrized to make the roundoff
// asymmetry of the triple product exactly zero.
template <typename Scalar>
MatX<Scalar> consistency_stiffness(const Mat4X<Scalar>& B, const Mat4<Scalar>& c,
                                   Scalar weighted_volume) {
  MatX<Scalar> kc = B.transpose() * (c * B) * weighted_volume;
  kc = ((kc + kc.transpose()) / Scalar(2)).eval();
  return kc;
}

// Boundary stabilization
//   K_s = tau/h_E sum_e sum_q 2 pi r_q w_q (I-P) N N' (I-P) |e|
// with the edge shape pair scattered into the radial and axial DOF slots
// of the edge vertices independently. Vertical edges use the midpoint
// rule, others two-point Gauss. The symmetric (I-P) sandwich keeps K_s
// an exact Gram matrix: PSD and vanishing on range(P).
template <typename Scalar>
MatX<Scalar> stabilization_stiffness(const ElementGeometry<Scalar>& g, const MatX<Scalar>& P,
                                     Scalar tau, bool two_pi = true) {
  if (!(tau > Scalar(0))) throw std::invalid_argument("stabilization_stiffness: tau must be positive");
  const Index m = g.num_vertices();
  const Index n = 2 * m;
  const MatX<Scalar> q = MatX<Scalar>::Identity(n, n) - P;
  MatX<Scalar> ks = MatX<Scalar>::Zero(n, n);
  const Scalar angular = two_pi ? Scalar(2) * std::numbers::pi_v<Scalar> : Scalar(1);

  for (Index e = 0; e < m; ++e) {
    const Index a = e;
    const Index b = (e + 1) % m;
    const Vec2<Scalar> p1 = g.vertices.col(a);
    const Vec2<Scalar> p2 = g.vertices.col(b);
    const Scalar len = (p2 - p1).norm();

    auto accumulate = [&](Scalar s, Scalar w) {
      const Scalar r = p1.x() + s * (p2.x() - p1.x());
      const Scalar f = angular * r * w * len;
      for (int comp = 0; comp < 2; ++comp) {
        VecX<Scalar> shape = VecX<Scalar>::Zero(n);
        shape(2 * a + comp) = Scalar(1) - s;
        shape(2 * b + comp) = s;
        // scaling the factor into the vector keeps the Gram update
        // exactly symmetric in floating point
        const VecX<Scalar> qs = std::sqrt(f) * (q * shape);
        ks.noalias() += qs * qs.transpose();
      }
    };

    if (edge_is_vertical(p1.x(), p2.x(), g.diameter)) {
      for (const auto& qp : edge_midpoint_rule<Scalar>()) accumulate(qp.s, qp.w);
    } else {
      for (const auto& qp : edge_gauss2_rule<Scalar>()) accumulate(qp.s, qp.w);
    }
  }
  return (tau / g.diameter) * ks;
}

template <typename Scalar>
struct ElementKernels {
  Mat4X<Scalar> B;
  MatX<Scalar> rhs_matrix;
  MatX<Scalar> P;
  MatX<Scalar> Kc;
  MatX<Scalar> Ks;
  MatX<Scalar> K;
};

template <typename Scalar>
ElementKernels<Scalar> local_stiffness(const ElementGeometry<Scalar>& g,
                                       const Material<Scalar>& mat, Scalar tau,
                                       bool two_pi = true) {
  const Mat4<Scalar> c = constitutive_matrix(mat);
  ElementKernels<Scalar> k;
  auto sys = build_B(g, c);
  k.B = std::move(sys.B);
  k.rhs_matrix = std::move(sys.rhs_matrix);
  k.P = projector_P(k.B);
  k.Kc = consistency_stiffness(k.B, c, g.weighted_volume);
  k.Ks = stabilization_stiffness(g, k.P, tau, two_pi);
  k.K = k.Kc + k.Ks;
  return k;
}

// Fan-sampled hoop recovery used by the patch-test reports. u_r / r is
// sampled at each fan triangle's mean radius with the same shape-function
// averaging as the volumetric correction, and the sum is normalized by
// the r-weighted volume:
//   row . d  =  sum_T Nbar_i(T) A_T d_r,i / rbar_T^2  /  int_E r.
// The inverse-square radial sampling under-reads fields with u_r growing
// in r, so it is reported alongside the projected hoop strain, never in
// place of it.
template <typename Scalar>
RowVecX<Scalar> hoop_sample_row(const ElementGeometry<Scalar>& g) {
  const Index m = g.num_vertices();
  RowVecX<Scalar> row = RowVecX<Scalar>::Zero(2 * m);
  const Scalar adjacent = (Scalar(1) + Scalar(1) / Scalar(m)) / Scalar(3);
  const Scalar distal = Scalar(1) / (Scalar(3) * Scalar(m));
  for (Index i = 0; i < m; ++i) {
    Scalar acc = 0;
    for (Index t = 0; t < m; ++t) {
      const bool touches = (t == i) || ((t + 1) % m == i);
      const auto& tri = g.triangles[size_t(t)];
      acc += (touches ? adjacent : distal) * tri.area / (tri.mean_radius * tri.mean_radius);
    }
    row(2 * i) = acc / g.weighted_volume;
  }
  return row;
}

}  // namespace axivem
