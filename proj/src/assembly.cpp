#include "axivem/assembly.hpp"

#include <algorithm>
#include <thread>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace axivem {

AssembledProblem assemble(const PolyMesh& mesh, const Material<double>& material,
                          const AssemblyOptions& options) {
  const int ne = mesh.num_elements();
  AssembledProblem problem;
  problem.geometry.resize(size_t(ne));
  problem.kernels.resize(size_t(ne));

  auto build_range = [&](int begin, int end) {
    for (int e = begin; e < end; ++e) {
      problem.geometry[size_t(e)] = mesh.geometry(e);
      problem.kernels[size_t(e)] =
          local_stiffness(problem.geometry[size_t(e)], material, options.tau, options.two_pi);
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = options.serial ? 1 : int(std::min<unsigned>(hw, 8));
  if (workers <= 1 || ne < 2 * workers) {
    build_range(0, ne);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    const int chunk = (ne + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(ne, begin + chunk);
      if (begin < end)
        pool.emplace_back([&, w, begin, end] {
          try {
            build_range(begin, end);
          } catch (...) {
            errors[size_t(w)] = std::current_exception();
          }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  // Serial scatter in element order: deterministic assembly.
  const int n = 2 * mesh.num_nodes();
  std::vector<Eigen::Triplet<double>> trips;
  for (int e = 0; e < ne; ++e) {
    const auto& ids = mesh.elements[size_t(e)].vertex_ids;
    const auto& K = problem.kernels[size_t(e)].K;
    const int m = int(ids.size());
    for (int i = 0; i < 2 * m; ++i) {
      const int gi = 2 * ids[size_t(i / 2)] + i % 2;
      for (int j = 0; j < 2 * m; ++j) {
        const int gj = 2 * ids[size_t(j / 2)] + j % 2;
        trips.emplace_back(gi, gj, K(i, j));
      }
    }
  }
  problem.system.K.resize(n, n);
  problem.system.K.setFromTriplets(trips.begin(), trips.end());
  problem.system.f = VecX<double>::Zero(n);
  problem.system.num_nodes = mesh.num_nodes();
  return problem;
}

void add_tractions(AssembledProblem& problem, const PolyMesh& mesh, const TractionSpec& tractions) {
  for (const auto& entry : tractions.entries) {
    const auto& ids = mesh.elements[size_t(entry.element)].vertex_ids;
    const int m = int(ids.size());
    if (entry.local_edge < 0 || entry.local_edge >= m)
      throw std::invalid_argument("add_tractions: local edge out of range");
    const int a = ids[size_t(entry.local_edge)];
    const int b = ids[size_t((entry.local_edge + 1) % m)];
    const Vec2<double> p1(mesh.vertices[size_t(a)].r, mesh.vertices[size_t(a)].z);
    const Vec2<double> p2(mesh.vertices[size_t(b)].r, mesh.vertices[size_t(b)].z);
    const Vec4<double> fe = edge_load_vector(p1, p2, entry.traction);
    problem.system.f(2 * a + 0) += fe(0);
    problem.system.f(2 * a + 1) += fe(1);
    problem.system.f(2 * b + 0) += fe(2);
    problem.system.f(2 * b + 1) += fe(3);
  }
}

VecX<double> solve_system(const GlobalSystem& system, const AssemblyOptions& options,
                          double* residual_out, int* iterations_out) {
  VecX<double> d;
  int iterations = 0;
  if (options.use_cg) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(1e-14);
    cg.compute(system.K);
    d = cg.solve(system.f);
    iterations = int(cg.iterations());
    if (cg.info() != Eigen::Success)
      throw NumericalError("solve_system: CG did not converge (singular system? axial translation unconstrained?)");
  } else {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(system.K);
    if (ldlt.info() != Eigen::Success)
      throw NumericalError(
          "solve_system: factorization failed; the matrix is singular or indefinite "
          "(likely missing axial constraint)");
    d = ldlt.solve(system.f);
  }
  const double fnorm = std::max(system.f.norm(), 1.0);
  const double residual = (system.K * d - system.f).norm() / fnorm;
  if (residual_out) *residual_out = residual;
  if (iterations_out) *iterations_out = iterations;
  if (!(residual <= 1e-10))
    throw NumericalError("solve_system: residual " + std::to_string(residual) +
                         " above tolerance (likely missing axial constraint)");
  return d;
}

SolveReport recover_strains(const PolyMesh& mesh, const Material<double>& material,
                            const AssembledProblem& problem, const VecX<double>& d) {
  const int ne = mesh.num_elements();
  const Mat4<double> c = constitutive_matrix(material);
  SolveReport report;
  report.displacement = d;
  report.element_strains.resize(4, ne);
  report.element_stresses.resize(4, ne);
  report.element_hoop_sampled.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& ids = mesh.elements[size_t(e)].vertex_ids;
    VecX<double> de(2 * Index(ids.size()));
    for (size_t k = 0; k < ids.size(); ++k) {
      de(2 * Index(k) + 0) = d(2 * ids[k] + 0);
      de(2 * Index(k) + 1) = d(2 * ids[k] + 1);
    }
    const Vec4<double> eps = problem.kernels[size_t(e)].B * de;
    report.element_strains.col(e) = eps;
    report.element_stresses.col(e) = c * eps;
    report.element_hoop_sampled(e) = hoop_sample_row(problem.geometry[size_t(e)]).dot(de);
  }
  return report;
}

SolveReport solve_dirichlet_problem(const PolyMesh& mesh, const Material<double>& material,
                                    const AssemblyOptions& options, const DirichletSpec& dirichlet,
                                    const TractionSpec* tractions) {
  AssembledProblem problem = assemble(mesh, material, options);
  if (tractions) add_tractions(problem, mesh, *tractions);
  apply_dirichlet(problem.system.K, problem.system.f, dirichlet);
  double residual = 0;
  int iterations = 0;
  const VecX<double> d = solve_system(problem.system, options, &residual, &iterations);
  SolveReport report = recover_strains(mesh, material, problem, d);
  report.residual = residual;
  report.iterations = iterations;
  report.solver = options.use_cg ? "cg" : "ldlt";
  return report;
}

}  // namespace axivem
