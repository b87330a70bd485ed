#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "axivem/loads.hpp"
#include "axivem/material.hpp"
#include "axivem/mesh.hpp"

namespace axivem {

// Raised when a solve cannot be completed (singular or indefinite
// system, residual above tolerance).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssemblyOptions {
  double tau;             // stabilization parameter (typically the shear modulus)
  bool two_pi = true;     // keep the 2 pi factor inside K_s
  bool serial = false;    // disable the element-kernel thread pool
  bool use_cg = false;    // iterative path instead of the direct factorization
};

// Global DOF numbering is interleaved: node i owns DOFs (2i, 2i+1).
struct GlobalSystem {
  Eigen::SparseMatrix<double> K;
  VecX<double> f;
  int num_nodes = 0;
};

struct AssembledProblem {
  GlobalSystem system;
  std::vector<ElementGeometry<double>> geometry;
  std::vector<ElementKernels<double>> kernels;
};

// Element kernels are pure per-element and computed concurrently; the
// scatter-add runs serially in element order so assembly is bitwise
// reproducible for a fixed mesh.
AssembledProblem assemble(const PolyMesh& mesh, const Material<double>& material,
                          const AssemblyOptions& options);

void add_tractions(AssembledProblem& problem, const PolyMesh& mesh, const TractionSpec& tractions);

struct SolveReport {
  VecX<double> displacement;            // 2N
  MatX<double> element_strains;         // 4 x num_elements, rows per StrainComponent
  MatX<double> element_stresses;        // 4 x num_elements
  VecX<double> element_hoop_sampled;    // fan-sampled hoop recovery per element
  double residual = 0;                  // ||K d - f|| / max(||f||, 1)
  int iterations = 0;                   // CG only; 0 for the direct path
  std::string solver;
};

// Direct sparse symmetric factorization by default (patch tests demand
// machine-precision solves); diagonal-preconditioned CG when requested.
VecX<double> solve_system(const GlobalSystem& system, const AssemblyOptions& options,
                          double* residual_out = nullptr, int* iterations_out = nullptr);

// eps_E = B_E d_E per element (constant projected strain at the
// centroid), sigma_E = C eps_E, plus the fan-sampled hoop diagnostic.
SolveReport recover_strains(const PolyMesh& mesh, const Material<double>& material,
                            const AssembledProblem& problem, const VecX<double>& d);

// Convenience: assemble, apply Dirichlet data, solve, recover.
SolveReport solve_dirichlet_problem(const PolyMesh& mesh, const Material<double>& material,
                                    const AssemblyOptions& options, const DirichletSpec& dirichlet,
                                    const TractionSpec* tractions = nullptr);

}  // namespace axivem
