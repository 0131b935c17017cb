#include "cvxclust/certify.hpp"
#include "cvxclust/datagen.hpp"
#include "cvxclust/demos.hpp"
#include "cvxclust/hyperparam.hpp"
#include "cvxclust/solver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cvxclust;

namespace {

py::dict solution_dict(const PrototypeSolution& s) {
  py::dict d;
  d["prototypes"] = s.prototypes;
  d["lambda"] = s.lambda;
  d["objective"] = s.objective_value;
  d["iterations"] = s.iterations;
  d["converged"] = s.converged;
  d["polished"] = s.polished;
  d["primal_residual"] = s.residuals.primal;
  d["dual_residual"] = s.residuals.dual;
  return d;
}

py::dict partition_dict(const Partition& p) {
  py::dict d;
  d["labels"] = p.labels();
  d["centroids"] = p.centroids();
  d["sizes"] = p.sizes();
  d["k"] = p.k();
  return d;
}

py::dict report_dict(const CertReport& report) {
  py::list checks;
  for (const auto& c : report.checks) {
    py::dict d;
    d["name"] = c.name;
    d["pass"] = c.pass;
    d["margin"] = c.margin;
    d["witness_indices"] = c.witness_indices;
    checks.append(d);
  }
  py::dict d;
  d["all_pass"] = report.all_pass();
  d["checks"] = checks;
  return d;
}

SolverConfig make_config(double lambda, double primal_tol, double dual_tol, int max_iters,
                         double rho, std::optional<double> fuse_tol, bool polish) {
  SolverConfig cfg;
  cfg.lambda = lambda;
  cfg.primal_tol = primal_tol;
  cfg.dual_tol = dual_tol;
  cfg.max_iters = max_iters;
  cfg.admm_rho = rho;
  cfg.fuse_tol = fuse_tol;
  cfg.polish = polish;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Convex clustering solver and solution certification";
  m.attr("__version__") = CVXCLUST_VERSION;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "objective",
      [](const Matrix& x, const Matrix& u, double lambda) {
        return objective(Dataset(x), u, lambda);
      },
      py::arg("x"), py::arg("prototypes"), py::arg("lam"));

  m.def(
      "solve",
      [](const Matrix& x, double lambda, double primal_tol, double dual_tol, int max_iters,
         double rho, bool polish) {
        const SolverConfig cfg =
            make_config(lambda, primal_tol, dual_tol, max_iters, rho, std::nullopt, polish);
        PrototypeSolution s;
        {
          py::gil_scoped_release release;
          s = solve_admm(Dataset(x), cfg);
        }
        return solution_dict(s);
      },
      py::arg("x"), py::arg("lam"), py::arg("primal_tol") = 1e-6, py::arg("dual_tol") = 1e-6,
      py::arg("max_iters") = 10000, py::arg("rho") = 1.0, py::arg("polish") = true,
      "Minimize the convex clustering objective with ADMM.");

  m.def(
      "solve_reference",
      [](const Matrix& x, double lambda, int iters, double smoothing) {
        return solution_dict(solve_reference(Dataset(x), lambda, iters, smoothing));
      },
      py::arg("x"), py::arg("lam"), py::arg("iters") = 20000, py::arg("smoothing") = 1e-9,
      "Slow smoothed-gradient oracle for cross-checks.");

  m.def(
      "extract_partition",
      [](const Matrix& u, double fuse_tol) { return partition_dict(extract_partition(u, fuse_tol)); },
      py::arg("prototypes"), py::arg("fuse_tol"));

  m.def(
      "default_fuse_tol", [](const Matrix& x) { return default_fuse_tol(Dataset(x)); },
      py::arg("x"));

  m.def(
      "bounding_balls",
      [](const Matrix& x, const std::vector<int>& labels, double lambda) {
        py::list out;
        for (const auto& b : bounding_balls(Dataset(x), partition_from_labels(x, labels), lambda)) {
          py::dict d;
          d["cluster_index"] = b.cluster_index;
          d["center"] = b.center;
          d["radius"] = b.radius;
          out.append(d);
        }
        return out;
      },
      py::arg("x"), py::arg("labels"), py::arg("lam"));

  m.def(
      "certify",
      [](const Matrix& x, const Matrix& u, double lambda, std::optional<double> fuse_tol) {
        const Dataset ds(x);
        const ClusterRun run =
            certify_prototypes(ds, u, lambda, fuse_tol.value_or(default_fuse_tol(ds)));
        py::dict d = report_dict(run.report);
        d["partition"] = partition_dict(run.partition);
        return d;
      },
      py::arg("x"), py::arg("prototypes"), py::arg("lam"), py::arg("fuse_tol") = py::none(),
      "Run the certification suite on a prototype matrix.");

  m.def(
      "lambda_upper_bound", [](const Matrix& x) { return lambda_upper_bound(Dataset(x)); },
      py::arg("x"));
  m.def(
      "lambda_lower_bound", [](const Matrix& x, int q) { return lambda_lower_bound(Dataset(x), q); },
      py::arg("x"), py::arg("q"));

  m.def(
      "lambda_path",
      [](const Matrix& x, const std::vector<double>& lambdas, bool warm_start) {
        SolverConfig cfg;
        LambdaPath path;
        {
          py::gil_scoped_release release;
          path = lambda_path(Dataset(x), lambdas, cfg, warm_start);
        }
        py::list out;
        for (const auto& e : path.entries) {
          py::dict d;
          d["lambda"] = e.lambda;
          d["k"] = e.k;
          d["converged"] = e.converged;
          d["objective"] = e.objective;
          d["labels"] = e.partition.labels();
          d["error"] = e.error ? py::object(py::str(*e.error)) : py::object(py::none());
          out.append(d);
        }
        return out;
      },
      py::arg("x"), py::arg("lambdas"), py::arg("warm_start") = true);

  m.def(
      "generate",
      [](const std::string& kind, int n, std::uint64_t seed, double noise, double stdev,
         std::optional<Matrix> centers, double noise_fraction, double noise_margin, double lambda,
         int dim) {
        GeneratorSpec spec;
        spec.kind = parse_generator_kind(kind);
        spec.n = n;
        spec.seed = seed;
        spec.noise = noise;
        spec.stdev = stdev;
        if (centers) spec.centers = *centers;
        spec.noise_fraction = noise_fraction;
        spec.noise_margin = noise_margin;
        spec.lambda = lambda;
        spec.dim = dim;
        const GeneratedData data = generate(spec);
        return py::make_tuple(data.dataset.points(), data.labels);
      },
      py::arg("kind"), py::arg("n"), py::arg("seed") = 0, py::arg("noise") = 0.0,
      py::arg("stdev") = 1.0, py::arg("centers") = py::none(), py::arg("noise_fraction") = 0.1,
      py::arg("noise_margin") = 4.0, py::arg("lam") = 0.1, py::arg("dim") = 1,
      "Synthetic dataset; returns (points, labels).");

  m.def(
      "kmeans",
      [](const Matrix& x, int k, std::uint64_t seed) { return kmeans(Dataset(x), k, seed).labels(); },
      py::arg("x"), py::arg("k"), py::arg("seed") = 0);
  m.def(
      "ward",
      [](const Matrix& x, int k) { return ward_agglomerative(Dataset(x), k).labels(); },
      py::arg("x"), py::arg("k"));

  m.def(
      "collinear_impossibility",
      [](int n, const std::vector<double>& lambdas) {
        const auto report = collinear_impossibility(n, lambdas, SolverConfig{});
        std::vector<int> ks;
        for (const auto& e : report.entries) ks.push_back(e.k);
        return ks;
      },
      py::arg("n"), py::arg("lambdas"));
}
