#include <doctest.h>

#include <cmath>
#include <sstream>

#include "axivem/report_io.hpp"
#include "axivem/verify.hpp"

using namespace axivem;

TEST_CASE("patch tests pass on the golden configuration") {
  PatchConfig config;  // 4x4 on [1,3]x[0,2], E = 1, nu = 0.3, tau = mu
  for (const auto& pc : patch_cases()) {
    const auto res = run_patch_test(pc.id, config);
    INFO(res.name, ": ", res.failure);
    CHECK(res.pass);
  }
}

TEST_CASE("radial patch reports the hoop anomaly, never asserts it away") {
  const auto res = run_patch_test(PatchCaseId::radial, PatchConfig{});
  CHECK(res.hoop_sampled >= 0.0);
  CHECK(res.hoop_sampled <= 0.01);
  CHECK(res.hoop_sampled == doctest::Approx(0.003247).epsilon(0.25));
  // the projected hoop tracks the true coupling u_r / r
  CHECK(res.hoop_projected == doctest::Approx(0.01).epsilon(1e-10));
  // deviation from the reference value is part of the table
  CHECK(res.reference(2) == doctest::Approx(0.003247));
}

TEST_CASE("hoop patch exhibits the radial/hoop coupling") {
  const auto res = run_patch_test(PatchCaseId::hoop, PatchConfig{});
  CHECK(res.pass);
  CHECK(res.computed(0) == doctest::Approx(0.01).epsilon(1e-10));  // coupled radial strain
  CHECK(res.hoop_sampled < 0.01);
}

TEST_CASE("patch results are invariant under the stabilization scale") {
  // The reproduced strain components do not move with tau; only the
  // anomalous hoop recovery of the shear case shifts (the interior
  // relaxation it measures is stabilization-dependent).
  PatchConfig unit_tau;
  unit_tau.tau = 1.0;
  for (const auto id : {PatchCaseId::radial, PatchCaseId::axial, PatchCaseId::shear}) {
    const auto a = run_patch_test(id, PatchConfig{});
    const auto b = run_patch_test(id, unit_tau);
    for (int i : {0, 1, 3}) CHECK(std::abs(a.computed(i) - b.computed(i)) <= 1e-10);
    CHECK(b.pass);
  }
}

TEST_CASE("patch on a refined mesh still reproduces the primary strains") {
  PatchConfig config;
  config.nr = config.nz = 8;
  const auto res = run_patch_test(PatchCaseId::axial, config);
  CHECK(res.pass);
  CHECK_FALSE(res.gated);  // non-golden configurations report without gating
  CHECK(std::abs(res.computed(1) - 0.01) <= 1e-12);
  CHECK(run_patch_test(PatchCaseId::axial, PatchConfig{}).gated);
}

TEST_CASE("weighted seminorms") {
  const auto mesh = generate_structured_mesh(1.0, 3.0, 0.0, 2.0, 4, 4);
  const DisplacementField constant = [](double, double) { return Vec2<double>(1.0, -2.0); };
  const GradientField zero_grad = [](double, double) { return Mat2<double>::Zero().eval(); };
  CHECK(weighted_seminorm(mesh, constant, zero_grad, 1) == 0.0);

  // u_r = r: the only gradient entry is 1, so the square is int r = 8
  const DisplacementField linear = [](double r, double) { return Vec2<double>(r, 0.0); };
  const GradientField linear_grad = [](double, double) {
    Mat2<double> g;
    g << 1, 0, 0, 0;
    return g;
  };
  CHECK(weighted_seminorm(mesh, linear, linear_grad, 1) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-13));

  // homogeneity in the field magnitude
  const GradientField scaled_grad = [](double, double) {
    Mat2<double> g;
    g << -3, 0, 0, 0;
    return g;
  };
  CHECK(weighted_seminorm(mesh, linear, scaled_grad, 1) ==
        doctest::Approx(3 * std::sqrt(8.0)).epsilon(1e-13));

  // l = 0 norm of a constant: sqrt(|u|^2 int r) = sqrt(5 * 8)
  CHECK(weighted_seminorm(mesh, constant, zero_grad, 0) ==
        doctest::Approx(std::sqrt(5.0 * 8.0)).epsilon(1e-13));

  CHECK_THROWS_AS(weighted_seminorm(mesh, constant, zero_grad, 2), std::invalid_argument);
}

TEST_CASE("quadratic manufactured field converges at first order") {
  const auto mat = make_material(1.0, 0.3);
  const auto study =
      convergence_study(manufactured_solution("quadratic"), {4, 8, 16}, mat, mat.lame_mu);
  CHECK(study.monotone);
  CHECK(study.pass);
  CHECK(study.interpolation_rate >= 0.9);
  for (size_t i = 1; i < study.levels.size(); ++i)
    CHECK(study.levels[i].interpolation_error < study.levels[i - 1].interpolation_error);
}

TEST_CASE("equilibrium manufactured field: solve error matches interpolation error") {
  const auto mat = make_material(1.0, 0.3);
  const auto study = convergence_study(manufactured_solution("lame"), {4, 8, 16}, mat, mat.lame_mu);
  CHECK(study.pass);
  CHECK(study.solve_rate >= 0.9);
  for (const auto& level : study.levels)
    CHECK(level.solve_error == doctest::Approx(level.interpolation_error).epsilon(1e-6));
}

TEST_CASE("patch-exact manufactured field reports exact") {
  const auto mat = make_material(1.0, 0.3);
  ManufacturedSolution axial{"axial-exact",
                             [](double, double z) { return Vec2<double>(0.0, 0.01 * z); },
                             [](double, double) {
                               Mat2<double> g;
                               g << 0, 0, 0, 0.01;
                               return g;
                             },
                             true};
  const auto study = convergence_study(axial, {4, 8, 16}, mat, mat.lame_mu);
  CHECK(study.exact);
  CHECK(study.pass);
}

TEST_CASE("doubling the modulus leaves the displacement-controlled error unchanged") {
  const auto& solution = manufactured_solution("quadratic");
  const auto a = convergence_study(solution, {4, 8, 16}, make_material(1.0, 0.3),
                                   make_material(1.0, 0.3).lame_mu);
  const auto b = convergence_study(solution, {4, 8, 16}, make_material(2.0, 0.3),
                                   make_material(2.0, 0.3).lame_mu);
  for (size_t i = 0; i < a.levels.size(); ++i) {
    CHECK(a.levels[i].solve_error ==
          doctest::Approx(b.levels[i].solve_error).epsilon(1e-10));
  }
}

TEST_CASE("fewer than three levels is rejected") {
  const auto mat = make_material(1.0, 0.3);
  CHECK_THROWS_AS(convergence_study(manufactured_solution("quadratic"), {4, 8}, mat, mat.lame_mu),
                  std::invalid_argument);
}

TEST_CASE("stabilization checks") {
  const auto mat = make_material(1.0, 0.3);
  const auto report = stabilization_checks({4, 8}, mat, mat.lame_mu);
  CHECK(report.random_energy_positive);
  CHECK(report.projected_energy_zero);
  CHECK(report.ratio_spread < 2.0);
  for (const auto& level : report.levels) CHECK(level.spectrum_ratio > 1.0);
}

TEST_CASE("pressurized thick cylinder against the closed-form solution") {
  // Internal pressure p at r = a, traction-free at r = b, ends held
  // axially: u_r = A r + B / r with
  //   A = p a^2 / (2 (lambda + mu) (b^2 - a^2)),
  //   B = p a^2 b^2 / (2 mu (b^2 - a^2)).
  const double a = 1.0, b = 3.0, p = 1.0;
  const auto mat = make_material(1.0, 0.3);
  const double A = p * a * a / (2 * (mat.lame_lambda + mat.lame_mu) * (b * b - a * a));
  const double B = p * a * a * b * b / (2 * mat.lame_mu * (b * b - a * a));

  auto solve_level = [&](int n) {
    const auto mesh = generate_structured_mesh(a, b, 0.0, 2.0, n, n);
    DirichletSpec ends;
    for (int node = 0; node < mesh.num_nodes(); ++node) {
      const double z = mesh.vertices[size_t(node)].z;
      if (std::abs(z) < 1e-12 || std::abs(z - 2.0) < 1e-12)
        ends.entries.push_back({node, DofComponent::axial, 0.0});
    }
    TractionSpec pressure;
    for (const auto& [e, k] : mesh.boundary_edges) {
      const auto& ids = mesh.elements[size_t(e)].vertex_ids;
      const auto& va = mesh.vertices[size_t(ids[size_t(k)])];
      const auto& vb = mesh.vertices[size_t(ids[size_t((k + 1) % 4)])];
      if (std::abs(va.r - a) < 1e-12 && std::abs(vb.r - a) < 1e-12)
        pressure.entries.push_back({e, k, EdgeTraction::uniform(p, 0.0)});
    }
    AssemblyOptions options{mat.lame_mu, true, false, false};
    const auto report = solve_dirichlet_problem(mesh, mat, options, ends, &pressure);
    double worst = 0;
    for (int node = 0; node < mesh.num_nodes(); ++node) {
      const double r = mesh.vertices[size_t(node)].r;
      worst = std::max(worst, std::abs(report.displacement(2 * node) - (A * r + B / r)));
      worst = std::max(worst, std::abs(report.displacement(2 * node + 1)));
    }
    return worst;
  };

  // u_r = A r + B / r solves the axisymmetric harmonic condition, so it
  // lies in the virtual space and the traction-driven solve reproduces
  // it nodally to machine precision.
  const double scale = A * b + B / a;
  CHECK(solve_level(8) <= 1e-12 * scale);
  CHECK(solve_level(16) <= 1e-12 * scale);
}

TEST_CASE("report writers produce parseable output") {
  const auto res = run_patch_test(PatchCaseId::axial, PatchConfig{});
  std::ostringstream table;
  write_patch_table(res, table);
  CHECK(table.str().find("PASS") != std::string::npos);
  CHECK(table.str().find("eps_z") != std::string::npos);

  CHECK(format_full(0.1) == "0.1");
  CHECK(std::stod(format_full(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_full(0.003247)) == 0.003247);
}
