#include "twophase/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "twophase/errors.hpp"
#include "twophase/oned.hpp"
#include "twophase/output.hpp"
#include "twophase/rearrange.hpp"

namespace twophase::cli {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace {

Indicator greedy_fill(const Mesh& mesh, const ProblemParams& params,
                      const std::vector<int>& order) {
  const double limit = params.target_volume(mesh.total_area()) * (1.0 + 1e-12);
  Indicator d(mesh.num_cells(), 0);
  double filled = 0.0;
  for (int c : order) {
    const double a = mesh.cell_area()[c];
    if (filled + a <= limit) {
      d[c] = 1;
      filled += a;
    }
  }
  return d;
}

struct RunSpec {
  std::string problem = "poisson";
  std::string method = "rm";
  ProblemParams params;
  int nx = 64, ny = 32;
  double lx = 2.0, ly = 1.0;
  std::string mesh_path;
  double epsilon = 0.0;
  int max_iter = 500;
  std::optional<std::uint64_t> seed;
  std::string init_path;
  double y0 = 0.3;
  double c0 = 0.3;
  int cells = 4096;
  std::string out_dir = ".";
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file " + path);
  return load_mesh(in);
}

void write_common(const RunSpec& spec, const std::vector<IterationRecord>& records,
                  const std::string& title, std::ostream& err) {
  auto csv = open_output(fs::path(spec.out_dir) / "history.csv");
  write_history_csv(csv, records);
  auto svg = open_output(fs::path(spec.out_dir) / "convergence.svg");
  write_convergence_svg(svg, records, title);
  err << "warning: convergence.svg measures the objective gap against the final iterate, "
         "a proxy for the unknown optimum\n";
}

int run_2d(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  Method method;
  if (spec.method == "rm") method = Method::RM;
  else if (spec.method == "arm") method = Method::ARM;
  else if (spec.method == "rarm") method = Method::RARM;
  else throw InvalidArgument("method '" + spec.method + "' is only valid for map1d");

  const Mesh mesh = spec.mesh_path.empty()
                        ? build_rect_mesh(spec.nx, spec.ny, spec.lx, spec.ly)
                        : read_mesh_file(spec.mesh_path);

  BangBangDensity f0{{}, spec.params};
  if (!spec.init_path.empty()) {
    std::ifstream in(spec.init_path);
    if (!in) throw IoError("cannot open indicator file " + spec.init_path);
    f0.indicator = load_indicator(in, mesh.num_cells());
  } else if (spec.seed) {
    f0.indicator = random_indicator(mesh, spec.params, *spec.seed);
  } else {
    f0.indicator = default_indicator(mesh, spec.params);
  }

  std::unique_ptr<Problem> problem;
  if (spec.problem == "poisson") problem = std::make_unique<PoissonProblem>(mesh);
  else problem = std::make_unique<EigenProblem>(mesh);

  OptimizerConfig config;
  config.method = method;
  config.epsilon = spec.epsilon;
  config.max_iter = spec.max_iter;
  const History h = run(*problem, f0, config);

  write_common(spec, h.records, spec.problem + " / " + spec.method, err);
  {
    auto vtk = open_output(fs::path(spec.out_dir) / "density.vtk");
    write_vtk(vtk, mesh, h.final_density.values(), {});
  }
  {
    auto vtk = open_output(fs::path(spec.out_dir) / "state.vtk");
    write_vtk(vtk, mesh, {}, h.final_evaluation.state);
  }
  out << std::setprecision(10) << "objective=" << h.final_evaluation.objective
      << " iterations=" << h.iterations() << " restarts=" << h.restarts()
      << " reason=" << to_string(h.reason) << '\n';
  return kOk;
}

int run_map1d(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  oned::MapMethod method;
  if (spec.method == "rm") method = oned::MapMethod::RM;
  else if (spec.method == "arm") method = oned::MapMethod::ModifiedARM;
  else if (spec.method == "oarm") method = oned::MapMethod::OptimalARM;
  else throw InvalidArgument("map1d supports methods rm, arm, oarm");

  const auto traj = oned::iterate_map(method, spec.y0, spec.params, spec.max_iter);
  const double theta =
      method == oned::MapMethod::OptimalARM ? oned::theta_star(oned::rate_L(spec.params)) : 0.0;
  std::vector<IterationRecord> records;
  std::vector<double> ys;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    IterationRecord r;
    r.k = traj[i].k;
    r.objective = traj[i + 1].y;
    r.diff_l2 = spec.params.contrast() * std::sqrt(2.0 * std::abs(traj[i + 1].y - traj[i].y));
    r.theta = method == oned::MapMethod::ModifiedARM ? oned::nesterov_map_theta(r.k) : theta;
    records.push_back(r);
  }
  for (const auto& it : traj) ys.push_back(it.y);

  write_common(spec, records, "map1d / " + spec.method, err);
  out << std::setprecision(10) << "y_final=" << ys.back() << " iterations=" << records.size()
      << " L=" << oned::rate_L(spec.params);
  if (method == oned::MapMethod::OptimalARM) {
    out << " theta_star=" << theta << " r_star=" << oned::r_star(oned::rate_L(spec.params));
  }
  try {
    const double rate = method == oned::MapMethod::ModifiedARM ? oned::fit_envelope_rate(ys)
                                                               : oned::fit_rate(ys);
    out << " fitted_rate=" << rate;
  } catch (const InvalidArgument&) {
    out << " fitted_rate=n/a";
  }
  out << '\n';
  return kOk;
}

int run_fd1d(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  if (spec.method != "rm") throw InvalidArgument("fd1d supports method rm only");
  const auto h = oned::fd_rm_1d(spec.cells, spec.params, spec.c0, spec.max_iter);
  std::vector<IterationRecord> records;
  for (const auto& r : h.records) records.push_back({r.k, r.offset, r.diff_l2, 0.0, false});
  write_common(spec, records, "fd1d / rm", err);
  out << std::setprecision(10) << "offset_final=" << h.records.back().offset
      << " iterations=" << h.records.size()
      << " reason=" << (h.converged ? "diff_zero" : "max_iter") << '\n';
  return kOk;
}

int cmd_run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  spec.params.validate();
  if (spec.max_iter < 1) throw InvalidArgument("--max-iter must be at least 1");
  if (spec.method == "oarm" && spec.problem != "map1d") {
    throw InvalidArgument("method oarm is only valid for map1d");
  }
  std::error_code ec;
  fs::create_directories(spec.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + spec.out_dir);

  if (spec.problem == "map1d") return run_map1d(spec, out, err);
  if (spec.problem == "fd1d") return run_fd1d(spec, out, err);
  return run_2d(spec, out, err);
}

int cmd_mesh_info(const std::string& path, std::ostream& out) {
  const Mesh mesh = read_mesh_file(path);
  out << std::setprecision(15) << "nv=" << mesh.num_vertices() << " nt=" << mesh.num_cells()
      << " area=" << mesh.total_area() << " boundary=" << mesh.num_boundary_vertices() << '\n';
  return kOk;
}

}  // namespace

Indicator default_indicator(const Mesh& mesh, const ProblemParams& params) {
  std::vector<int> order(mesh.num_cells());
  std::iota(order.begin(), order.end(), 0);
  return greedy_fill(mesh, params, order);
}

Indicator random_indicator(const Mesh& mesh, const ProblemParams& params, std::uint64_t seed) {
  std::vector<int> order(mesh.num_cells());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  // Fisher-Yates by hand: std::shuffle's draw sequence is implementation-defined.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  return greedy_fill(mesh, params, order);
}

Indicator load_indicator(std::istream& in, std::size_t num_cells) {
  Indicator d;
  d.reserve(num_cells);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      if (tok != "0" && tok != "1") throw ParseError("expected 0 or 1, got '" + tok + "'", lineno);
      d.push_back(tok == "1" ? 1 : 0);
    }
  }
  if (d.size() != num_cells) {
    throw ParseError("indicator has " + std::to_string(d.size()) + " entries, mesh has " +
                         std::to_string(num_cells) + " cells",
                     lineno);
  }
  return d;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-phase composite optimization by (accelerated) rearrangement"};
  app.require_subcommand(1);

  RunSpec spec;
  std::uint64_t seed = 0;
  auto* run_cmd = app.add_subcommand("run", "run one optimization or 1D experiment");
  run_cmd->add_option("--problem", spec.problem, "poisson | eigen | map1d | fd1d")
      ->check(CLI::IsMember({"poisson", "eigen", "map1d", "fd1d"}));
  run_cmd->add_option("--method", spec.method, "rm | arm | rarm | oarm")
      ->check(CLI::IsMember({"rm", "arm", "rarm", "oarm"}));
  run_cmd->add_option("--fminus", spec.params.f_minus, "low density f_-");
  run_cmd->add_option("--fplus", spec.params.f_plus, "high density f_+");
  run_cmd->add_option("--delta", spec.params.delta, "volume fraction of the f_+ phase");
  auto* nx = run_cmd->add_option("--nx", spec.nx, "rectangle cells along x");
  auto* ny = run_cmd->add_option("--ny", spec.ny, "rectangle cells along y");
  auto* lx = run_cmd->add_option("--lx", spec.lx, "rectangle width");
  auto* ly = run_cmd->add_option("--ly", spec.ly, "rectangle height");
  auto* mesh_opt = run_cmd->add_option("--mesh", spec.mesh_path, "mesh file (nv nt / x y / i j k)");
  for (auto* o : {nx, ny, lx, ly}) mesh_opt->excludes(o);
  run_cmd->add_option("--epsilon", spec.epsilon, "stop when ||f_{k+1}-f_k|| <= epsilon");
  run_cmd->add_option("--max-iter,--iters", spec.max_iter, "iteration cap");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "random feasible initial density");
  auto* init_opt = run_cmd->add_option("--init", spec.init_path, "initial indicator file (0/1 per cell)");
  seed_opt->excludes(init_opt);
  run_cmd->add_option("--y0", spec.y0, "map1d initial state");
  run_cmd->add_option("--c0", spec.c0, "fd1d initial support center in [-1,1]");
  run_cmd->add_option("--cells", spec.cells, "fd1d grid cells");
  run_cmd->add_option("--out", spec.out_dir, "output directory");

  std::string info_path;
  auto* info_cmd = app.add_subcommand("mesh-info", "print mesh statistics");
  info_cmd->add_option("path", info_path, "mesh file")->required();

  std::string export_path;
  int ex_nx = 1, ex_ny = 1;
  double ex_lx = 1.0, ex_ly = 1.0;
  auto* export_cmd = app.add_subcommand("mesh-export", "write a rectangle mesh file");
  export_cmd->add_option("--nx", ex_nx)->required();
  export_cmd->add_option("--ny", ex_ny)->required();
  export_cmd->add_option("--lx", ex_lx);
  export_cmd->add_option("--ly", ex_ly);
  export_cmd->add_option("--out", export_path, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kArgumentError;
  }

  try {
    if (*run_cmd) {
      if (*seed_opt) spec.seed = seed;
      return cmd_run(spec, out, err);
    }
    if (*info_cmd) return cmd_mesh_info(info_path, out);
    if (*export_cmd) {
      const Mesh mesh = build_rect_mesh(ex_nx, ex_ny, ex_lx, ex_ly);
      auto f = open_output(export_path);
      write_mesh(f, mesh);
      return kOk;
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const DomainError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kArgumentError;
}

}  // namespace twophase::cli
