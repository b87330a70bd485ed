#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "axivem/report_io.hpp"
#include "axivem/verify.hpp"

namespace fs = std::filesystem;
using namespace axivem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct MeshSpec {
  std::string mesh = "4x4";
  std::string domain = "1,3,0,2";
  std::string mesh_file;
};

struct MaterialSpec {
  double youngs = 1.0;
  double poisson = 0.3;
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<double> tau;

  Material<double> build() const {
    if (lambda && mu) return material_from_lame(*lambda, *mu);
    return make_material(youngs, poisson);
  }
  double tau_or_default(const Material<double>& m) const { return tau ? *tau : m.lame_mu; }
};

std::vector<double> parse_csv_doubles(const std::string& text, size_t expect) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  if (vals.size() != expect)
    throw CLI::ValidationError("expected " + std::to_string(expect) + " comma-separated values, got '" + text + "'");
  return vals;
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw CLI::ValidationError("mesh must look like NRxNZ, got '" + text + "'");
  return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
}

PolyMesh build_mesh(const MeshSpec& spec, double* domain_out = nullptr) {
  if (!spec.mesh_file.empty()) return read_mesh_file(spec.mesh_file);
  const auto [nr, nz] = parse_grid(spec.mesh);
  const auto d = parse_csv_doubles(spec.domain, 4);
  if (domain_out) std::copy(d.begin(), d.end(), domain_out);
  return generate_structured_mesh(d[0], d[1], d[2], d[3], nr, nz);
}

DisplacementField named_field(const std::string& name) {
  if (name == "zero") return [](double, double) { return Vec2<double>::Zero().eval(); };
  for (const auto& c : patch_cases())
    if (c.name == name) return c.field;
  // "ur=VAL,uz=VAL" constant prescription
  if (name.rfind("ur=", 0) == 0) {
    const auto comma = name.find(",uz=");
    if (comma != std::string::npos) {
      const double ur = std::stod(name.substr(3, comma - 3));
      const double uz = std::stod(name.substr(comma + 4));
      return [ur, uz](double, double) { return Vec2<double>(ur, uz); };
    }
  }
  throw CLI::ValidationError("unknown field '" + name + "' (radial|axial|hoop|shear|zero|ur=..,uz=..)");
}

std::vector<int> select_nodes(const PolyMesh& mesh, const std::string& pred) {
  if (pred == "all_boundary" || pred == "boundary") return boundary_nodes(mesh);
  if (pred.rfind("nodes:", 0) == 0) {
    std::vector<int> out;
    std::stringstream ss(pred.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const int n = std::stoi(item);
      if (n < 0 || n >= mesh.num_nodes())
        throw CLI::ValidationError("node id " + item + " out of range");
      out.push_back(n);
    }
    return out;
  }
  double lo_r = 1e300, hi_r = -1e300, lo_z = 1e300, hi_z = -1e300;
  for (const auto& v : mesh.vertices) {
    lo_r = std::min(lo_r, v.r); hi_r = std::max(hi_r, v.r);
    lo_z = std::min(lo_z, v.z); hi_z = std::max(hi_z, v.z);
  }
  const double tol = 1e-10 * std::max(hi_r - lo_r, hi_z - lo_z);
  std::vector<int> out;
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const auto& v = mesh.vertices[size_t(n)];
    const bool hit = (pred == "r_min" && std::abs(v.r - lo_r) < tol) ||
                     (pred == "r_max" && std::abs(v.r - hi_r) < tol) ||
                     (pred == "z_min" && std::abs(v.z - lo_z) < tol) ||
                     (pred == "z_max" && std::abs(v.z - hi_z) < tol);
    if (hit) out.push_back(n);
  }
  if (pred != "r_min" && pred != "r_max" && pred != "z_min" && pred != "z_max")
    throw CLI::ValidationError("unknown node set '" + pred + "'");
  return out;
}

TractionSpec select_traction_edges(const PolyMesh& mesh, const std::string& pred, double tr, double tz) {
  double lo_r = 1e300, hi_r = -1e300, lo_z = 1e300, hi_z = -1e300;
  for (const auto& v : mesh.vertices) {
    lo_r = std::min(lo_r, v.r); hi_r = std::max(hi_r, v.r);
    lo_z = std::min(lo_z, v.z); hi_z = std::max(hi_z, v.z);
  }
  const double tol = 1e-10 * std::max(hi_r - lo_r, hi_z - lo_z);
  TractionSpec spec;
  for (const auto& [e, k] : mesh.boundary_edges) {
    const auto& ids = mesh.elements[size_t(e)].vertex_ids;
    const int m = int(ids.size());
    const auto& a = mesh.vertices[size_t(ids[size_t(k)])];
    const auto& b = mesh.vertices[size_t(ids[size_t((k + 1) % m)])];
    const double mr = (a.r + b.r) / 2, mz = (a.z + b.z) / 2;
    const bool hit = (pred == "r_min" && std::abs(mr - lo_r) < tol) ||
                     (pred == "r_max" && std::abs(mr - hi_r) < tol) ||
                     (pred == "z_min" && std::abs(mz - lo_z) < tol) ||
                     (pred == "z_max" && std::abs(mz - hi_z) < tol) ||
                     (pred == "all_boundary" || pred == "boundary");
    if (hit) spec.entries.push_back({e, k, EdgeTraction::uniform(tr, tz)});
  }
  return spec;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open " + p.string());
  return f;
}

// Flat key/value config support: `--config FILE` is expanded into
// `--key=value` arguments before parsing. Section headers like
// [material] are organizational and skipped; keys already present on
// the command line win over the file.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ValidationError("--config needs a file path");
      config_path = args[i + 1];
      args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + long(i));
      break;
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw CLI::ValidationError("cannot open config file " + config_path);
  auto has_flag = [&](const std::string& key) {
    for (const auto& a : args)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(start, end - start + 1);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("config line is not key=value: '" + line + "'");
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    if (value == "true" || value == "") {
      if (!has_flag(key)) args.push_back("--" + key);
    } else if (!has_flag(key)) {
      args.push_back("--" + key + "=" + value);
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axivem: first-order virtual element solver for axisymmetric linear elasticity"};
  app.require_subcommand(1);

  MeshSpec mesh_spec;
  MaterialSpec mat_spec;
  std::string out_dir = "out";
  bool two_pi_normalization = false;
  bool serial = false;
  bool use_cg = false;

  auto add_common = [&](CLI::App* cmd, bool with_mesh_file = true) {
    cmd->add_option("--mesh", mesh_spec.mesh, "structured grid NRxNZ")->capture_default_str();
    cmd->add_option("--domain", mesh_spec.domain, "r_in,r_out,z_min,z_max")->capture_default_str();
    if (with_mesh_file) cmd->add_option("--mesh-file", mesh_spec.mesh_file, "polygonal mesh file (overrides --mesh)");
    cmd->add_option("--E", mat_spec.youngs, "Young's modulus")->capture_default_str();
    cmd->add_option("--nu", mat_spec.poisson, "Poisson ratio")->capture_default_str();
    cmd->add_option("--lambda", mat_spec.lambda, "Lame lambda (with --mu, overrides E/nu)");
    cmd->add_option("--mu", mat_spec.mu, "Lame mu (with --lambda, overrides E/nu)");
    cmd->add_option("--tau", mat_spec.tau, "stabilization parameter (default: shear modulus)");
    cmd->add_flag("--two-pi-normalization", two_pi_normalization,
                  "strip the 2*pi factor from the stabilization term");
    cmd->add_flag("--serial", serial, "single-threaded element kernels");
    cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
  };

  // patch -----------------------------------------------------------------
  auto* patch = app.add_subcommand("patch", "run the constant-strain patch tests");
  std::string patch_case_name = "all";
  patch->add_option("--case", patch_case_name, "radial|axial|hoop|shear|all")->capture_default_str();
  add_common(patch, false);

  // converge ---------------------------------------------------------------
  auto* converge = app.add_subcommand("converge", "manufactured-solution refinement study");
  std::string field_name = "quadratic";
  std::string levels_text = "4,8,16";
  double rate_threshold = 0.9;
  converge->add_option("--field", field_name, "quadratic|lame")->capture_default_str();
  converge->add_option("--levels", levels_text, "comma-separated structured sizes")->capture_default_str();
  converge->add_option("--rate-threshold", rate_threshold, "minimum fitted slope")->capture_default_str();
  add_common(converge, false);

  // solve -------------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "assemble and solve one boundary-value problem");
  std::vector<std::string> dirichlet_args;
  std::vector<std::string> traction_args;
  solve->add_option("--dirichlet", dirichlet_args,
                    "NODESET:FIELD, e.g. all_boundary:axial or r_min:ur=0,uz=0");
  solve->add_option("--traction", traction_args, "EDGESET:tr,tz constant traction, e.g. r_max:1.0,0.0");
  solve->add_flag("--cg", use_cg, "diagonally preconditioned conjugate gradients");
  add_common(solve);

  // dump-element --------------------------------------------------------------
  auto* dump = app.add_subcommand("dump-element", "print B, P, K_c, K_s for one element");
  int element_id = 0;
  dump->add_option("--element", element_id, "element index")->capture_default_str();
  add_common(dump);

  app.footer("A config file passed with --config holds the same options as flat key=value lines;\n"
             "explicit flags take precedence.");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    fs::create_directories(out_dir);
    const Material<double> material = mat_spec.build();
    const double tau = mat_spec.tau_or_default(material);
    const bool two_pi = !two_pi_normalization;

    if (patch->parsed()) {
      PatchConfig config;
      const auto [nr, nz] = parse_grid(mesh_spec.mesh);
      const auto d = parse_csv_doubles(mesh_spec.domain, 4);
      config.r_in = d[0]; config.r_out = d[1]; config.z_min = d[2]; config.z_max = d[3];
      config.nr = nr; config.nz = nz;
      config.material = material;
      config.tau = tau;
      config.two_pi = two_pi;
      config.serial = serial;

      std::vector<PatchCaseId> ids;
      if (patch_case_name == "all")
        for (const auto& c : patch_cases()) ids.push_back(c.id);
      else
        ids.push_back(patch_case_from_name(patch_case_name));

      bool all_pass = true;
      for (auto id : ids) {
        const PatchResult res = run_patch_test(id, config);
        write_patch_table(res, std::cout);
        write_patch_csv(res, (fs::path(out_dir) / ("patch_" + res.name + ".csv")).string());
        auto txt = open_out(fs::path(out_dir) / ("patch_" + res.name + ".txt"));
        write_patch_table(res, txt);
        all_pass = all_pass && res.pass;
      }
      return all_pass ? kExitOk : kExitAssertion;
    }

    if (converge->parsed()) {
      std::vector<int> levels;
      std::stringstream ss(levels_text);
      std::string item;
      while (std::getline(ss, item, ',')) levels.push_back(std::stoi(item));
      const auto& solution = manufactured_solution(field_name);
      const ConvergenceStudy study = convergence_study(solution, levels, material, tau, rate_threshold);
      write_convergence_table(study, std::cout);
      write_convergence_csv(study, (fs::path(out_dir) / "converge.csv").string());
      return study.pass ? kExitOk : kExitAssertion;
    }

    if (solve->parsed()) {
      const PolyMesh mesh = build_mesh(mesh_spec);
      DirichletSpec dirichlet;
      for (const auto& arg : dirichlet_args) {
        // split on the last colon: the node set itself may contain one
        // ("nodes:3,5,7:axial")
        const auto colon = arg.rfind(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--dirichlet needs NODESET:FIELD");
        const auto nodes = select_nodes(mesh, arg.substr(0, colon));
        const auto part = DirichletSpec::from_field(nodes, named_field(arg.substr(colon + 1)), mesh);
        dirichlet.entries.insert(dirichlet.entries.end(), part.entries.begin(), part.entries.end());
      }
      TractionSpec tractions;
      for (const auto& arg : traction_args) {
        const auto colon = arg.find(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--traction needs EDGESET:tr,tz");
        const auto tv = parse_csv_doubles(arg.substr(colon + 1), 2);
        const auto part = select_traction_edges(mesh, arg.substr(0, colon), tv[0], tv[1]);
        tractions.entries.insert(tractions.entries.end(), part.entries.begin(), part.entries.end());
      }
      AssemblyOptions options{tau, two_pi, serial, use_cg};
      const SolveReport report = solve_dirichlet_problem(mesh, material, options, dirichlet, &tractions);
      write_solution_csv(mesh, report, (fs::path(out_dir) / "solution_nodes.csv").string(),
                         (fs::path(out_dir) / "solution_strains.csv").string());
      std::cout << "solved " << mesh.num_elements() << " elements, " << 2 * mesh.num_nodes()
                << " DOFs; solver " << report.solver << ", residual " << report.residual << "\n";
      return kExitOk;
    }

    if (dump->parsed()) {
      const PolyMesh mesh = build_mesh(mesh_spec);
      if (element_id < 0 || element_id >= mesh.num_elements())
        throw CLI::ValidationError("--element out of range");
      const auto geometry = mesh.geometry(element_id);
      const auto kernels = local_stiffness(geometry, material, tau, two_pi);
      dump_element_kernels(geometry, kernels, std::cout);
      auto txt = open_out(fs::path(out_dir) / ("element_" + std::to_string(element_id) + ".txt"));
      dump_element_kernels(geometry, kernels, txt);
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
