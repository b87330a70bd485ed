#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "axivem/assembly.hpp"

namespace axivem {

using DisplacementField = std::function<Vec2<double>(double r, double z)>;
// Full displacement gradient [[du_r/dr, du_r/dz], [du_z/dr, du_z/dz]].
using GradientField = std::function<Mat2<double>(double r, double z)>;

enum class PatchCaseId { radial, axial, hoop, shear };

// One constant-strain patch test: analytic field, target strain vector
// and the reference computed averages it is compared against.
struct PatchCase {
  PatchCaseId id;
  std::string name;
  DisplacementField field;
  Vec4<double> target_strain;        // expected-value column of the report
  Vec4<double> reference_computed;   // reference averages the report diffs against
};

const std::array<PatchCase, 4>& patch_cases();
const PatchCase& patch_case(PatchCaseId id);
PatchCaseId patch_case_from_name(const std::string& name);

struct PatchConfig {
  double r_in = 1.0, r_out = 3.0, z_min = 0.0, z_max = 2.0;
  int nr = 4, nz = 4;
  Material<double> material = make_material(1.0, 0.3);
  double tau = make_material(1.0, 0.3).lame_mu;
  bool two_pi = true;
  bool serial = false;
};

struct PatchResult {
  PatchCaseId id;
  std::string name;
  // Component rows in report order: radial, axial, hoop, shear.
  Vec4<double> computed;       // averages; hoop row carries the fan-sampled recovery
  Vec4<double> expected;       // target strain
  Vec4<double> abs_error;
  Vec4<double> reference;      // reference averages for the diff column
  double hoop_projected;       // average projected hoop strain (B d)
  double hoop_sampled;         // average fan-sampled hoop recovery
  // Hard assertions gate only the golden configuration (4x4 on
  // [1,3]x[0,2], E = 1, nu = 0.3); other configurations run report-only.
  bool gated = false;
  bool pass = false;
  std::string failure;
  double runtime_seconds = 0;
};

// Prescribes the analytic field on every boundary node, solves, and
// averages each strain component over the elements. Hard assertions
// follow the per-case tolerances of the acceptance suite.
PatchResult run_patch_test(PatchCaseId id, const PatchConfig& config);

// Weighted Sobolev seminorm [u]_l with integrand r |grad^l u|^2, l in
// {0, 1}, integrated with a degree-4 fan-triangle rule.
double weighted_seminorm(const PolyMesh& mesh, const DisplacementField& value_field,
                         const GradientField& gradient_field, int order);

// Weighted H1 distance between an exact gradient and the element-wise
// constant projected strains of a DOF vector.
double projected_gradient_error(const PolyMesh& mesh, const std::vector<ElementKernels<double>>& kernels,
                                const VecX<double>& d, const GradientField& exact_gradient);

struct ManufacturedSolution {
  std::string name;
  DisplacementField field;
  GradientField gradient;
  bool equilibrium;  // satisfies the zero-body-force equations
};

// Built-ins: "quadratic" (u_z = 0.01 z^2, interpolation-rate study) and
// "lame" (u_r = 0.01 r + 0.01 / r, an exact zero-body-force solution).
const ManufacturedSolution& manufactured_solution(const std::string& name);

struct ConvergenceLevel {
  int nr;
  double h;
  double interpolation_error;  // projected interpolant vs exact gradient
  double solve_error;          // solved field vs exact gradient
};

struct ConvergenceStudy {
  std::string field_name;
  std::vector<ConvergenceLevel> levels;
  double interpolation_rate = 0;  // log-log slope gating the study
  double solve_rate = 0;
  bool exact = false;             // errors at machine precision at every level
  bool monotone = false;
  bool pass = false;
};

// Dirichlet data is imposed on the whole boundary at every level. The
// rate gate uses the interpolation error (the quantity the refinement
// bound controls); the solved-field error is reported alongside and
// coincides with it for equilibrium fields. Body forces are out of
// scope, so non-equilibrium manufactured fields keep an O(1) gap
// between the solved field and the prescription.
ConvergenceStudy convergence_study(const ManufacturedSolution& solution,
                                   const std::vector<int>& levels, const Material<double>& material,
                                   double tau, double rate_threshold = 0.9);

struct StabilizationReport {
  struct Level {
    int nr;
    double max_patch_ratio;   // max over elements/cases of ||Ks d*|| / ||K d*||
    double spectrum_ratio;    // max over elements of lambda_max/lambda_min on range(I-P)
  };
  std::vector<Level> levels;
  double ratio_spread = 0;    // max/min of spectrum_ratio across levels
  bool random_energy_positive = false;  // d' Ks d > 0 for random d outside range(P)
  bool projected_energy_zero = false;   // d' Ks d ~ 0 for random d in range(P)
};

StabilizationReport stabilization_checks(const std::vector<int>& levels,
                                         const Material<double>& material, double tau);

}  // namespace axivem
