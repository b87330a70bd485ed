#pragma once

#include <iosfwd>
#include <string>

#include "axivem/verify.hpp"

namespace axivem {

// All CSV numerics are printed with 17 significant digits so values
// round-trip exactly through the text format.
std::string format_full(double v);

void write_patch_csv(const PatchResult& result, const std::string& path);
void write_patch_table(const PatchResult& result, std::ostream& out);

void write_convergence_csv(const ConvergenceStudy& study, const std::string& path);
void write_convergence_table(const ConvergenceStudy& study, std::ostream& out);

void write_solution_csv(const PolyMesh& mesh, const SolveReport& report,
                        const std::string& nodes_path, const std::string& strains_path);

void dump_element_kernels(const ElementGeometry<double>& geometry,
                          const ElementKernels<double>& kernels, std::ostream& out);

}  // namespace axivem
