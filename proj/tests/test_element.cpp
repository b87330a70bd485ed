#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "axivem/element.hpp"
#include "oracles.hpp"

using namespace axivem;

namespace {

Mat2X<double> rectangle(double r1, double z1, double w, double h) {
  Mat2X<double> v(2, 4);
  v << r1, r1 + w, r1 + w, r1, z1, z1, z1 + h, z1 + h;
  return v;
}

constexpr double kStrain = 0.01;

Vec2<double> radial_field(double r, double) { return {kStrain * r, 0.0}; }
Vec2<double> axial_field(double, double z) { return {0.0, kStrain * z}; }
Vec2<double> shear_field(double r, double z) { return {kStrain / 2 * z, kStrain / 2 * r}; }

const Material<double> kMat = make_material(1.0, 0.3);
const Mat4<double> kC = constitutive_matrix(kMat);

}  // namespace

TEST_CASE("boundary integrals match the 16-point oracle") {
  std::mt19937 rng(23u);
  for (int trial = 0; trial < 50; ++trial) {
    const auto poly = oracles::random_convex_polygon(rng, 2.5, 0.0, 0.9);
    const auto g = compute_geometry(poly);
    const auto bnd = boundary_integral_matrix(g, kC);
    const Index m = g.num_vertices();

    MatX<double> ref = MatX<double>::Zero(2 * m, 4);
    for (Index e = 0; e < m; ++e) {
      const Index a = e, b = (e + 1) % m;
      const Vec2<double> p1 = poly.col(a), p2 = poly.col(b);
      const Vec2<double> t = (p2 - p1).normalized();
      const Vec2<double> n(t.y(), -t.x());
      for (int p = 0; p < 4; ++p) {
        const Vec4<double> sig = kC.col(p);
        const double tr = sig(0) * n.x() + sig(2) * n.y();
        const double tz = sig(2) * n.x() + sig(1) * n.y();
        ref(2 * a + 0, p) += oracles::edge_integral(p1, p2, [&](double r, double, double s) {
          return (1 - s) * tr * r;
        });
        ref(2 * a + 1, p) += oracles::edge_integral(p1, p2, [&](double r, double, double s) {
          return (1 - s) * tz * r;
        });
        ref(2 * b + 0, p) += oracles::edge_integral(p1, p2, [&](double r, double, double s) {
          return s * tr * r;
        });
        ref(2 * b + 1, p) += oracles::edge_integral(p1, p2, [&](double r, double, double s) {
          return s * tz * r;
        });
      }
    }
    CHECK((bnd - ref).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + ref.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("boundary column for the axial basis decouples from radial DOFs on horizontal edges") {
  // On a horizontal edge the axial-basis traction is purely axial, so the
  // radial DOFs of that edge pick up nothing; their whole column comes
  // from the vertical edges.
  const auto g = compute_geometry(rectangle(1.0, 0.0, 1.0, 1.0));
  const auto bnd = boundary_integral_matrix(g, kC);
  const double lambda = kMat.lame_lambda;
  // radial DOF of vertex 1 = (2,0): vertical edge (2,0)-(2,1) contributes
  // lambda * r * L / 2, horizontal edge contributes zero radially.
  CHECK(bnd(2, kAxial) == doctest::Approx(lambda * 2.0 * 1.0 / 2).epsilon(1e-13));
}

TEST_CASE("correction weights sum to the element area") {
  std::mt19937 rng(31u);
  for (int trial = 0; trial < 20; ++trial) {
    const auto poly = oracles::random_convex_polygon(rng, 2.0, 1.0, 0.8);
    const auto g = compute_geometry(poly);
    CHECK(correction_weights(g).sum() == doctest::Approx(g.area).epsilon(1e-13));
  }
}

TEST_CASE("volumetric correction column structure") {
  const auto g = compute_geometry(rectangle(1.0, 0.0, 0.5, 0.5));
  const auto corr = volumetric_correction_matrix(g, kC);
  const double mu = kMat.lame_mu;
  const auto w = correction_weights(g);

  // axial basis: sigma_r - sigma_theta = 0, whole radial part of the column vanishes
  for (Index i = 0; i < 4; ++i) CHECK(corr(2 * i, kAxial) == 0.0);
  // radial basis: sigma_r - sigma_theta = 2 mu
  for (Index i = 0; i < 4; ++i)
    CHECK(corr(2 * i, kRadial) == doctest::Approx(2 * mu * w(i)).epsilon(1e-14));
  // shear basis: no normal stress, radial rows vanish; axial rows carry mu
  for (Index i = 0; i < 4; ++i) {
    CHECK(corr(2 * i, kShear) == 0.0);
    CHECK(corr(2 * i + 1, kShear) == doctest::Approx(mu * w(i)).epsilon(1e-14));
  }
  // hoop basis mirrors the radial one with opposite sign
  for (Index i = 0; i < 4; ++i)
    CHECK(corr(2 * i, kHoop) == doctest::Approx(-2 * mu * w(i)).epsilon(1e-14));
}

TEST_CASE("projection reproduces the constant-strain fields on rectangles") {
  std::mt19937 rng(37u);
  std::uniform_real_distribution<double> ur(0.6, 3.0), usz(0.2, 1.5), uz0(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double r1 = ur(rng), z1 = uz0(rng), w = usz(rng), h = usz(rng);
    const auto g = compute_geometry(rectangle(r1, z1, w, h));
    const auto B = build_B(g, kC).B;
    const double rbar = r1 + w / 2, zbar = z1 + h / 2;

    {
      const Vec4<double> eps = B * oracles::nodal_vector(g.vertices, radial_field);
      CHECK(eps(kRadial) == doctest::Approx(kStrain).epsilon(1e-12));
      CHECK(std::abs(eps(kAxial)) <= 1e-12);
      CHECK(std::abs(eps(kShear)) <= 1e-12);
      CHECK(eps(kHoop) == doctest::Approx(kStrain).epsilon(1e-12));  // true coupling u_r/r
    }
    {
      const Vec4<double> eps = B * oracles::nodal_vector(g.vertices, axial_field);
      CHECK(eps(kAxial) == doctest::Approx(kStrain).epsilon(1e-12));
      CHECK(std::abs(eps(kRadial)) <= 1e-12);
      CHECK(std::abs(eps(kShear)) <= 1e-12);
      CHECK(std::abs(eps(kHoop)) <= 1e-7);
    }
    {
      const Vec4<double> eps = B * oracles::nodal_vector(g.vertices, shear_field);
      CHECK(eps(kShear) == doctest::Approx(kStrain).epsilon(1e-12));
      CHECK(std::abs(eps(kRadial)) <= 1e-12);
      CHECK(std::abs(eps(kAxial)) <= 1e-12);
      // hoop of u_r = (c/2) z projected with the r weight: (c/2) zbar/rbar
      CHECK(eps(kHoop) == doctest::Approx(kStrain / 2 * zbar / rbar).epsilon(1e-10));
    }
    {
      const VecX<double> zero = VecX<double>::Zero(8);
      CHECK((B * zero).norm() == 0.0);
    }
  }
}

TEST_CASE("axial translation is annihilated on arbitrary polygons") {
  std::mt19937 rng(41u);
  for (int trial = 0; trial < 20; ++trial) {
    const auto poly = oracles::random_convex_polygon(rng, 1.8, -0.5, 0.9);
    const auto g = compute_geometry(poly);
    const auto B = build_B(g, kC).B;
    const VecX<double> dz = axial_translation_vector<double>(g.num_vertices());
    CHECK((B * dz).norm() <= 1e-13 * B.norm() * dz.norm());
  }
}

TEST_CASE("projector identities") {
  std::mt19937 rng(43u);
  for (int trial = 0; trial < 20; ++trial) {
    const auto poly = oracles::random_convex_polygon(rng, 2.2, 0.3, 0.8);
    const auto g = compute_geometry(poly);
    const auto B = build_B(g, kC).B;
    const auto P = projector_P(B);
    const Index n = g.num_dofs();

    CHECK((P * P - P).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((P - P.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((P * B.transpose() - B.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(((MatX<double>::Identity(n, n) - P) * B.transpose()).cwiseAbs().maxCoeff() <= 1e-10);

    // row space of B plus the rigid axial mode
    CHECK(P.trace() == doctest::Approx(5.0).epsilon(1e-10));
    const VecX<double> dz = axial_translation_vector<double>(n / 2);
    CHECK((P * dz - dz).norm() <= 1e-12 * dz.norm());
  }
}

TEST_CASE("consistency stiffness: rank, symmetry, PSD") {
  const auto g = compute_geometry(rectangle(1.0, 0.0, 0.5, 0.5));
  const auto B = build_B(g, kC).B;
  const auto Kc = consistency_stiffness(B, kC, g.weighted_volume);

  CHECK((Kc - Kc.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<MatX<double>> es(Kc);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
  // rank of a 4-row factor
  int positive = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-12 * es.eigenvalues().maxCoeff()) ++positive;
  CHECK(positive <= 4);

  const VecX<double> dz = axial_translation_vector<double>(4);
  CHECK((Kc * dz).norm() <= 1e-12 * es.eigenvalues().maxCoeff());

  std::mt19937 rng(47u);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 50; ++t) {
    VecX<double> d(8);
    for (Index i = 0; i < 8; ++i) d(i) = gauss(rng);
    CHECK(d.dot(Kc * d) >= -1e-12 * es.eigenvalues().maxCoeff() * d.squaredNorm());
  }
}

TEST_CASE("stabilization: exact symmetry, PSD, kernel and scaling") {
  std::mt19937 rng(53u);
  const auto poly = oracles::random_convex_polygon(rng, 2.0, 0.0, 0.8);
  const auto g = compute_geometry(poly);
  const auto B = build_B(g, kC).B;
  const auto P = projector_P(B);
  const double tau = kMat.lame_mu;
  const auto Ks = stabilization_stiffness(g, P, tau);
  const Index n = g.num_dofs();

  CHECK((Ks - Ks.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<MatX<double>> es(Ks);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());

  // vanishes on range(P)
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 20; ++t) {
    VecX<double> d(n);
    for (Index i = 0; i < n; ++i) d(i) = gauss(rng);
    const VecX<double> dp = P * d;
    CHECK(std::abs(dp.dot(Ks * dp)) <= 1e-10 * std::max(1.0, dp.squaredNorm()));
  }

  // tau scaling and the 2 pi normalization switch
  const auto Ks2 = stabilization_stiffness(g, P, 2 * tau);
  CHECK((Ks2 - 2 * Ks).cwiseAbs().maxCoeff() <= 1e-12 * Ks.cwiseAbs().maxCoeff());
  const auto Ks_nopi = stabilization_stiffness(g, P, tau, false);
  CHECK((Ks - 2 * std::numbers::pi * Ks_nopi).cwiseAbs().maxCoeff() <=
        1e-12 * Ks.cwiseAbs().maxCoeff());

  CHECK_THROWS_AS(stabilization_stiffness(g, P, 0.0), std::invalid_argument);
}

TEST_CASE("local stiffness: one near-zero mode, rigid kernel, radial translation energy") {
  std::mt19937 rng(59u);
  for (int trial = 0; trial < 20; ++trial) {
    const auto poly = oracles::random_convex_polygon(rng, 2.0, 0.0, 0.9);
    const auto g = compute_geometry(poly);
    const auto k = local_stiffness(g, kMat, kMat.lame_mu);
    const Index n = g.num_dofs();

    CHECK((k.K - k.K.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<MatX<double>> es(k.K);
    const double lmax = es.eigenvalues().maxCoeff();
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * lmax);

    int near_zero = 0;
    for (Index i = 0; i < n; ++i)
      if (std::abs(es.eigenvalues()(i)) <= 1e-10 * lmax) ++near_zero;
    CHECK(near_zero == 1);

    const VecX<double> dz = axial_translation_vector<double>(n / 2);
    CHECK((k.K * dz).norm() <= 1e-10 * lmax * dz.norm());

    VecX<double> dr = VecX<double>::Zero(n);
    for (Index i = 0; i < n / 2; ++i) dr(2 * i) = 1.0;
    CHECK(dr.dot(k.K * dr) > 1e-8 * lmax);  // hoop strain makes it non-rigid
  }
}

TEST_CASE("single square element kernels at the golden material") {
  const auto g = compute_geometry(rectangle(1.0, 0.0, 0.5, 0.5));
  const auto k = local_stiffness(g, kMat, kMat.lame_mu);
  CHECK(k.K.rows() == 8);
  CHECK(k.B.cols() == 8);
  CHECK(k.rhs_matrix.rows() == 8);
  CHECK(k.rhs_matrix.cols() == 4);
  // rhs consistency: C * B * Vw reproduces the stored data column-wise
  for (Index j = 0; j < 8; ++j) {
    const Vec4<double> lhs = kC * k.B.col(j) * g.weighted_volume;
    CHECK((lhs.transpose() - k.rhs_matrix.row(j)).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("fan-sampled hoop recovery responds to radial displacement only") {
  const auto g = compute_geometry(rectangle(1.0, 0.0, 0.5, 0.5));
  const auto row = hoop_sample_row(g);
  for (Index i = 0; i < 4; ++i) CHECK(row(2 * i + 1) == 0.0);

  const VecX<double> d_rad = oracles::nodal_vector(g.vertices, radial_field);
  const double sampled = row.dot(d_rad);
  CHECK(sampled > 0.0);
  CHECK(sampled < kStrain);  // under-reads u_r ~ r

  const VecX<double> d_ax = oracles::nodal_vector(g.vertices, axial_field);
  CHECK(row.dot(d_ax) == 0.0);
}
