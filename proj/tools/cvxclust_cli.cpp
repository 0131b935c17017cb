// Command-line front end: cluster, path, demo, gen, certify, replay.

#include "cvxclust/demos.hpp"
#include "cvxclust/fixtures.hpp"
#include "cvxclust/io.hpp"
#include "cvxclust/solver.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef CVXCLUST_VERSION
#define CVXCLUST_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace cvxclust;
using io::json;

namespace {

enum Exit { kOk = 0, kError = 1, kCertFailed = 2, kNotConverged = 3 };

struct CommonOptions {
  std::uint64_t seed = 0;
  std::optional<double> lambda;
  std::string out = "out";
  std::optional<double> fuse_tol;
  int max_iters = 10000;
  double rho = 1.0;
};

void add_common(CLI::App* app, CommonOptions& opts) {
  app->add_option("--seed", opts.seed, "Seed for randomized steps")->envname("CVXCLUST_SEED");
  app->add_option("--lambda", opts.lambda, "Fusion penalty")->envname("CVXCLUST_LAMBDA");
  app->add_option("--out", opts.out, "Output directory")->envname("CVXCLUST_OUT");
  app->add_option("--fuse-tol", opts.fuse_tol, "Distance at which prototypes count as fused")
      ->envname("CVXCLUST_FUSE_TOL");
  app->add_option("--max-iters", opts.max_iters, "ADMM iteration cap")
      ->envname("CVXCLUST_MAX_ITERS");
  app->add_option("--rho", opts.rho, "Initial ADMM penalty")->envname("CVXCLUST_RHO");
}

SolverConfig solver_config(const CommonOptions& opts, double lambda) {
  SolverConfig cfg;
  cfg.lambda = lambda;
  cfg.max_iters = opts.max_iters;
  cfg.admm_rho = opts.rho;
  cfg.fuse_tol = opts.fuse_tol;
  cfg.seed = opts.seed;
  cfg.validate();
  return cfg;
}

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string num(double v) { return io::format_double(v); }

// Collects what a command did; the canonical argument list has every
// resolved setting spelled out so a replay does not depend on the environment.
class Manifest {
 public:
  Manifest(std::string command, const CommonOptions& opts)
      : command_(std::move(command)), out_(opts.out), started_(now_utc()) {
    args_ = {command_, "--seed", std::to_string(opts.seed), "--max-iters",
             std::to_string(opts.max_iters), "--rho", num(opts.rho)};
    if (opts.fuse_tol) add_args({"--fuse-tol", num(*opts.fuse_tol)});
    fs::create_directories(out_);
  }

  void add_args(const std::vector<std::string>& args) {
    args_.insert(args_.end(), args.begin(), args.end());
  }
  void add_input(const std::string& path) { inputs_.push_back(path); }
  void set_config(json config) { config_ = std::move(config); }

  fs::path output(const std::string& name) {
    outputs_.push_back(name);
    const fs::path path = out_ / name;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    return path;
  }

  void write(int exit_code, std::uint64_t seed) {
    json manifest = {{"command", command_},
                     {"argv", args_},
                     {"inputs", inputs_},
                     {"config", config_},
                     {"tool_version", CVXCLUST_VERSION},
                     {"seed", seed},
                     {"started_at", started_},
                     {"finished_at", now_utc()},
                     {"outputs", outputs_},
                     {"exit_code", exit_code}};
    io::write_json(out_ / "manifest.json", manifest);
  }

 private:
  std::string command_;
  fs::path out_;
  std::string started_;
  std::vector<std::string> args_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  json config_ = json::object();
};

json solver_json(const PrototypeSolution& s) {
  return {{"objective", s.objective_value},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"polished", s.polished},
          {"primal_residual", s.residuals.primal},
          {"dual_residual", s.residuals.dual}};
}

int run_exit(const ClusterRun& run) {
  if (!run.solution.converged) return kNotConverged;
  return run.report.all_pass() ? kOk : kCertFailed;
}

// prototypes.csv, partition.json, balls.json, report.json and, for d = 2,
// plot.svg under `prefix`.
void write_run(Manifest& manifest, const std::string& prefix, const Dataset& dataset,
               const ClusterRun& run, double lambda, bool plot) {
  io::write_matrix_csv(manifest.output(prefix + "prototypes.csv"), run.solution.prototypes);
  io::write_json(manifest.output(prefix + "partition.json"), io::to_json(run.partition));
  io::write_json(manifest.output(prefix + "balls.json"), io::to_json(run.balls));
  json report = io::to_json(run.report);
  report["lambda"] = lambda;
  report["solver"] = solver_json(run.solution);
  io::write_json(manifest.output(prefix + "report.json"), report);
  if (plot && dataset.d() == 2) {
    std::ostringstream title;
    title << "lambda=" << lambda << " k=" << run.partition.k();
    io::write_text(manifest.output(prefix + "plot.svg"),
                   svg::render(make_panel(title.str(), dataset, run)));
  }
}

void print_report(const CertReport& report) {
  for (const auto& c : report.checks) {
    std::cout << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  margin " << c.margin
              << "\n";
  }
}

int cmd_cluster(const std::string& input, const CommonOptions& opts) {
  const Dataset dataset = io::read_csv(input);
  double lambda = 0.0;
  if (opts.lambda) {
    lambda = *opts.lambda;
  } else {
    lambda = dataset.n() >= 2 ? 0.5 * lambda_upper_bound(dataset) : 0.0;
    std::cerr << "warning: --lambda not given, using 0.5 x upper bound = " << lambda << "\n";
  }
  const SolverConfig cfg = solver_config(opts, lambda);
  Manifest manifest("cluster", opts);
  manifest.add_args({input, "--lambda", num(lambda)});
  manifest.add_input(input);
  manifest.set_config(io::to_json(cfg));

  const ClusterRun run = cluster_and_certify(dataset, cfg);
  write_run(manifest, "", dataset, run, lambda, true);
  const int code = run_exit(run);
  std::cout << "n=" << dataset.n() << " d=" << dataset.d() << " lambda=" << lambda
            << " k=" << run.partition.k() << " converged=" << run.solution.converged
            << " iterations=" << run.solution.iterations << "\n";
  print_report(run.report);
  manifest.write(code, opts.seed);
  return code;
}

int cmd_path(const std::string& input, const std::optional<std::string>& grid_spec, bool cold,
             const CommonOptions& opts) {
  const Dataset dataset = io::read_csv(input);
  const std::vector<double> grid =
      grid_spec ? parse_lambda_grid(*grid_spec) : default_lambda_grid(dataset);
  const SolverConfig cfg = solver_config(opts, 0.0);
  Manifest manifest("path", opts);
  manifest.add_args({input});
  if (grid_spec) manifest.add_args({"--lambda-grid", *grid_spec});
  if (cold) manifest.add_args({"--cold"});
  manifest.add_input(input);
  json config = io::to_json(cfg);
  config.erase("lambda");
  config["lambdas"] = grid;
  config["warm_start"] = !cold;
  manifest.set_config(config);

  const LambdaPath path = lambda_path(dataset, grid, cfg, !cold);
  io::write_path_csv(manifest.output("path.csv"), path);

  bool failed = false;
  bool not_converged = false;
  bool uncertified = false;
  std::vector<svg::Panel> panels;
  for (std::size_t t = 0; t < path.entries.size(); ++t) {
    const PathEntry& e = path.entries[t];
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "lambda_%03zu/", t);
    if (e.error) {
      std::cerr << "lambda=" << e.lambda << ": " << *e.error << "\n";
      failed = true;
      continue;
    }
    const ClusterRun run = certify_solution(dataset, e.solution, e.lambda,
                                            opts.fuse_tol.value_or(default_fuse_tol(dataset)));
    write_run(manifest, prefix, dataset, run, e.lambda, false);
    not_converged = not_converged || !run.solution.converged;
    uncertified = uncertified || !run.report.all_pass();
    std::cout << "lambda=" << e.lambda << " k=" << e.k << " converged=" << e.converged
              << " certified=" << run.report.all_pass() << "\n";
    if (dataset.d() == 2) {
      std::ostringstream title;
      title << "lambda=" << e.lambda << " k=" << e.k;
      panels.push_back(make_panel(title.str(), dataset, run));
    }
  }
  const int code = failed ? kError : not_converged ? kNotConverged : uncertified ? kCertFailed : kOk;
  if (!panels.empty()) io::write_text(manifest.output("path.svg"), svg::render_grid(panels, 4));
  manifest.write(code, opts.seed);
  return code;
}

int demo_inflexibility(Manifest& manifest, const SolverConfig& cfg) {
  const InflexibilityResult r = run_inflexibility(cfg);
  auto rows = [](const std::vector<GrowthStep>& steps) {
    json out = json::array();
    for (const auto& s : steps) {
      out.push_back({{"added", s.added},
                     {"lambda", s.lambda},
                     {"k", s.k},
                     {"converged", s.converged},
                     {"growing_single", s.growing_single},
                     {"growing_pure", s.growing_pure}});
    }
    return out;
  };
  io::write_json(manifest.output("inflexibility.json"),
                 {{"fixed_lambda", rows(r.fixed_lambda)},
                  {"decreasing_lambda", rows(r.decreasing_lambda)},
                  {"merges_at_fixed_lambda", r.merges_at_fixed_lambda},
                  {"splits_at_decreasing_lambda", r.splits_at_decreasing_lambda}});
  io::write_text(manifest.output("inflexibility.svg"), svg::render_grid(r.panels, 4));
  std::cout << "fixed lambda k:";
  for (const auto& s : r.fixed_lambda) std::cout << " " << s.k;
  std::cout << "  (growing cluster merges: " << (r.merges_at_fixed_lambda ? "yes" : "no") << ")\n";
  std::cout << "decreasing lambda k:";
  for (const auto& s : r.decreasing_lambda) std::cout << " " << s.k;
  std::cout << "  (others split, growing intact: "
            << (r.splits_at_decreasing_lambda ? "yes" : "no") << ")\n";
  return r.merges_at_fixed_lambda && r.splits_at_decreasing_lambda ? kOk : kCertFailed;
}

int demo_compare(Manifest& manifest, const SolverConfig& cfg) {
  const ComparisonResult r = run_comparison(cfg);
  json rows = json::array();
  bool ok = true;
  for (const auto& row : r.rows) {
    json j = {{"dataset", row.dataset},       {"lambda", row.lambda},
              {"n", row.n},                   {"convex_k", row.convex_k},
              {"converged", row.converged},   {"certified", row.certified},
              {"baseline_k", row.baseline_k}, {"kmeans_labels", row.kmeans.labels()},
              {"ward_labels", row.ward.labels()}};
    if (row.dataset == "three_blobs_noise") {
      j["noise_max_cluster"] = row.noise_max_cluster;
      j["clean_in_large"] = row.clean_in_large;
      ok = ok && row.noise_max_cluster <= 3 && row.clean_in_large >= 0.8;
    }
    ok = ok && row.converged && row.certified;
    std::cout << row.dataset << ": lambda=" << row.lambda << " convex k=" << row.convex_k
              << " certified=" << row.certified << "\n";
    rows.push_back(std::move(j));
  }
  io::write_json(manifest.output("compare.json"), rows);
  io::write_text(manifest.output("compare.svg"), svg::render_grid(r.panels, 3));
  return ok ? kOk : kCertFailed;
}

int demo_impossible(Manifest& manifest, const SolverConfig& cfg) {
  json out = json::array();
  bool ok = true;
  for (const auto& report : run_impossibility_demo(cfg)) {
    json entries = json::array();
    for (const auto& e : report.entries) {
      entries.push_back(
          {{"lambda", e.lambda}, {"k", e.k}, {"converged", e.converged}, {"violation", e.violation}});
    }
    out.push_back({{"n", report.n}, {"violations", report.violations()}, {"entries", entries}});
    std::cout << "n=" << report.n << ": " << report.entries.size() << " lambdas, "
              << report.violations() << " nontrivial solutions\n";
    ok = ok && report.violations() == 0;
  }
  io::write_json(manifest.output("impossible.json"), out);
  return ok ? kOk : kCertFailed;
}

int demo_boundary(Manifest& manifest, const SolverConfig& cfg) {
  json out = json::array();
  bool ok = true;
  for (const auto& b : run_boundary_demo(cfg)) {
    out.push_back({{"cluster_size", b.cluster_size},
                   {"lambda", b.lambda},
                   {"k", b.k},
                   {"converged", b.converged},
                   {"prototype_error", b.prototype_error},
                   {"boundary_gap", b.boundary_gap},
                   {"containment_margin", b.containment_margin},
                   {"certified", b.certified}});
    std::cout << "n_l=" << b.cluster_size << " lambda=" << b.lambda << " k=" << b.k
              << " containment margin=" << b.containment_margin << "\n";
    ok = ok && b.k == 1 && b.prototype_error <= 1e-6 && std::abs(b.containment_margin) <= 1e-6 &&
         b.certified;
  }
  io::write_json(manifest.output("boundary.json"), out);
  return ok ? kOk : kCertFailed;
}

int cmd_demo(const std::string& name, const CommonOptions& opts) {
  if (name != "inflexibility" && name != "compare" && name != "impossible" &&
      name != "boundary") {
    throw std::invalid_argument("unknown demo '" + name + "'");
  }
  const SolverConfig cfg = solver_config(opts, 0.0);
  Manifest manifest("demo", opts);
  manifest.add_args({name});
  json config = io::to_json(cfg);
  config.erase("lambda");
  config["demo"] = name;
  manifest.set_config(config);
  int code = kOk;
  if (name == "inflexibility") code = demo_inflexibility(manifest, cfg);
  if (name == "compare") code = demo_compare(manifest, cfg);
  if (name == "impossible") code = demo_impossible(manifest, cfg);
  if (name == "boundary") code = demo_boundary(manifest, cfg);
  manifest.write(code, opts.seed);
  return code;
}

Matrix parse_centers(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream by_row(text);
  std::string row;
  while (std::getline(by_row, row, ';')) {
    Dataset parsed = [&] {
      std::istringstream line(row);
      return io::parse_csv(line);
    }();
    rows.push_back(std::vector<double>(parsed.points().data(),
                                       parsed.points().data() + parsed.points().size()));
  }
  if (rows.empty()) throw std::invalid_argument("no centers given");
  Matrix centers(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw std::invalid_argument("ragged centers");
    for (std::size_t c = 0; c < rows[i].size(); ++c) centers(i, c) = rows[i][c];
  }
  return centers;
}

struct GenOptions {
  std::string kind;
  int n = 100;
  double noise = 0.0;
  double stdev = fixtures::kBlobStdev;
  std::optional<std::string> centers;
  double noise_fraction = 0.1;
  double noise_margin = 4.0;
  int dim = 1;
};

int cmd_gen(const GenOptions& g, const CommonOptions& opts) {
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(g.kind);
  spec.n = g.n;
  spec.seed = opts.seed;
  spec.noise = g.noise;
  spec.stdev = g.stdev;
  spec.centers = g.centers ? parse_centers(*g.centers) : fixtures::blob_centers();
  spec.noise_fraction = g.noise_fraction;
  spec.noise_margin = g.noise_margin;
  spec.lambda = opts.lambda.value_or(0.1);
  spec.dim = g.dim;
  const GeneratedData data = generate(spec);

  Manifest manifest("gen", opts);
  manifest.add_args({"--kind", g.kind, "--n", std::to_string(g.n), "--noise", num(g.noise),
                     "--stdev", num(g.stdev), "--noise-fraction", num(g.noise_fraction),
                     "--noise-margin", num(g.noise_margin), "--dim", std::to_string(g.dim),
                     "--lambda", num(spec.lambda)});
  if (g.centers) manifest.add_args({"--centers", *g.centers});
  manifest.set_config({{"kind", g.kind},
                       {"n", g.n},
                       {"noise", g.noise},
                       {"stdev", g.stdev},
                       {"centers", io::to_json(spec.centers)},
                       {"noise_fraction", g.noise_fraction},
                       {"noise_margin", g.noise_margin},
                       {"lambda", spec.lambda},
                       {"dim", g.dim}});
  std::vector<std::string> header;
  for (int c = 0; c < data.dataset.d(); ++c) header.push_back("x" + std::to_string(c));
  io::write_matrix_csv(manifest.output("data.csv"), data.dataset.points(), header);
  if (!data.labels.empty()) io::write_labels_csv(manifest.output("labels.csv"), data.labels);
  std::cout << "wrote " << data.dataset.n() << " points to " << (fs::path(opts.out) / "data.csv").string()
            << "\n";
  manifest.write(kOk, opts.seed);
  return kOk;
}

int cmd_certify(const std::string& data_path, const std::string& prototypes_path,
                const CommonOptions& opts) {
  if (!opts.lambda) throw std::invalid_argument("certify needs --lambda");
  const Dataset dataset = io::read_csv(data_path);
  const Dataset prototypes = io::read_csv(prototypes_path);
  const double fuse_tol = opts.fuse_tol.value_or(default_fuse_tol(dataset));
  Manifest manifest("certify", opts);
  manifest.add_args({data_path, prototypes_path, "--lambda", num(*opts.lambda)});
  manifest.add_input(data_path);
  manifest.add_input(prototypes_path);
  manifest.set_config({{"lambda", *opts.lambda}, {"fuse_tol", fuse_tol}});

  const ClusterRun run = certify_prototypes(dataset, prototypes.points(), *opts.lambda, fuse_tol);
  io::write_json(manifest.output("partition.json"), io::to_json(run.partition));
  io::write_json(manifest.output("balls.json"), io::to_json(run.balls));
  json report = io::to_json(run.report);
  report["lambda"] = *opts.lambda;
  report["objective"] = run.solution.objective_value;
  io::write_json(manifest.output("report.json"), report);
  std::cout << "k=" << run.partition.k() << " objective=" << run.solution.objective_value << "\n";
  print_report(run.report);
  const int code = run.report.all_pass() ? kOk : kCertFailed;
  manifest.write(code, opts.seed);
  return code;
}

int dispatch(int argc, char** argv);

int cmd_replay(const std::string& manifest_path, const std::optional<std::string>& out) {
  const json manifest = io::read_json(manifest_path);
  auto args = manifest.at("argv").get<std::vector<std::string>>();
  args.push_back("--out");
  args.push_back(out ? *out : fs::path(manifest_path).parent_path().string());
  std::vector<std::string> storage = {"cvxclust"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> raw;
  for (auto& s : storage) raw.push_back(s.data());
  return dispatch(static_cast<int>(raw.size()), raw.data());
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Convex clustering with certified solutions"};
  app.set_version_flag("--version", CVXCLUST_VERSION);
  app.require_subcommand(1);

  CommonOptions opts;

  std::string input;
  auto* cluster = app.add_subcommand("cluster", "Solve and certify one lambda");
  cluster->add_option("input", input, "Dataset CSV")->required();
  add_common(cluster, opts);

  std::optional<std::string> grid;
  bool cold = false;
  auto* path = app.add_subcommand("path", "Solve across a lambda grid");
  path->add_option("input", input, "Dataset CSV")->required();
  path->add_option("--lambda-grid", grid, "min:max:count:log|lin");
  path->add_flag("--cold", cold, "Solve every lambda from scratch");
  add_common(path, opts);

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Run an experiment: inflexibility, compare, impossible, boundary");
  demo->add_option("name", demo_name, "Demo name")->required();
  add_common(demo, opts);

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("--kind", gen_opts.kind,
                  "two_moons, uniform, gaussian_blobs, blobs_with_noise, collinear, boundary_witness")
      ->required();
  gen->add_option("--n", gen_opts.n, "Number of points");
  gen->add_option("--noise", gen_opts.noise, "Moon noise stdev");
  gen->add_option("--stdev", gen_opts.stdev, "Blob stdev");
  gen->add_option("--centers", gen_opts.centers, "Blob centers as \"x,y;x,y;...\"");
  gen->add_option("--noise-fraction", gen_opts.noise_fraction, "Background noise fraction");
  gen->add_option("--noise-margin", gen_opts.noise_margin, "Noise box margin in stdevs");
  gen->add_option("--dim", gen_opts.dim, "Dimension of boundary_witness");
  add_common(gen, opts);

  std::string data_path;
  std::string prototypes_path;
  auto* cert = app.add_subcommand("certify", "Audit a prototype matrix");
  cert->add_option("data", data_path, "Dataset CSV")->required();
  cert->add_option("prototypes", prototypes_path, "Prototype CSV, one row per point")->required();
  add_common(cert, opts);

  std::string manifest_path;
  std::optional<std::string> replay_out;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path, "manifest.json")->required();
  replay->add_option("--out", replay_out, "Output directory (default: the manifest's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  if (*cluster) return cmd_cluster(input, opts);
  if (*path) return cmd_path(input, grid, cold, opts);
  if (*demo) return cmd_demo(demo_name, opts);
  if (*gen) return cmd_gen(gen_opts, opts);
  if (*cert) return cmd_certify(data_path, prototypes_path, opts);
  if (*replay) return cmd_replay(manifest_path, replay_out);
  return kError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
