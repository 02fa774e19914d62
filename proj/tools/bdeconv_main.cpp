// bdeconv: simulate, estimate, bench and gcurve subcommands.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdeconv/asymptotics.hpp"
#include "bdeconv/distribution_recovery.hpp"
#include "bdeconv/error.hpp"
#include "bdeconv/estimator.hpp"
#include "bdeconv/json_io.hpp"
#include "bdeconv/model_sim.hpp"
#include "bdeconv/monte_carlo.hpp"
#include "bdeconv/plots.hpp"
#include "bdeconv/pseudo_moment.hpp"
#include "bdeconv/rng.hpp"

namespace fs = std::filesystem;
using namespace bdeconv;

namespace {

ComplexSeries load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_series_csv(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string field;
  std::istringstream in(text);
  while (std::getline(in, field, ',')) out.push_back(std::stod(field));
  return out;
}

// "start:stop:steps" -> steps+1 evenly spaced values.
std::vector<double> parse_grid(const std::string& text) {
  const std::vector<std::string> parts = [&] {
    std::vector<std::string> v;
    std::string f;
    std::istringstream in(text);
    while (std::getline(in, f, ':')) v.push_back(f);
    return v;
  }();
  if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "grid must be start:stop:steps");
  const double start = std::stod(parts[0]);
  const double stop = std::stod(parts[1]);
  const int steps = std::stoi(parts[2]);
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one step");
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) grid.push_back(start + (stop - start) * i / steps);
  return grid;
}

void print_text(std::ostream& out, const EstimationResult& est, const DistributionEstimate& dist,
                const CovarianceReport* cov) {
  out << std::setprecision(6) << std::fixed;
  out << "sigma_hat   " << est.sigma_hat << "   (bracket " << est.bracket.lower << " .. " << est.bracket.upper
      << ")\n";
  out << "theta_hat  ";
  for (double c : est.theta_hat) out << ' ' << c;
  out << "   (delay shift " << est.delay_shift << ")\n";
  out << "|J_n|       " << std::scientific << est.j_residual << " (threshold " << est.j_threshold << ")\n"
      << std::fixed;
  out << "start used  " << est.start_used << " of " << est.starts.size() << (est.converged ? "" : " [not converged]")
      << '\n';
  out << "alphabet:\n";
  for (std::size_t i = 0; i < dist.alphabet.points.size(); ++i) {
    const cplx a = dist.alphabet.points[i];
    out << "  a_" << i + 1 << " = " << a.real() << (a.imag() < 0 ? " - " : " + ") << std::abs(a.imag())
        << "i   pi = " << dist.weights.weights[i] << '\n';
  }
  if (dist.weights.negative_flag) out << "  warning: negative weight estimate\n";
  if (cov != nullptr) {
    out << "plug-in standard errors (theta..., sigma):";
    for (double s : cov->std_errors) out << ' ' << s;
    out << "\nalpha_hat " << cov->alpha_hat << (cov->negative_alpha ? " [NEGATIVE_ALPHA]" : "") << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind deconvolution of finite-alphabet signals in Gaussian noise"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate observations from a preset model");
  std::string sim_preset = "mixture";
  double sim_sigma0 = 0.05;
  std::size_t sim_n = 2000;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  sim->add_option("--preset", sim_preset, "mixture or ar2")->check(CLI::IsMember({"mixture", "ar2"}));
  sim->add_option("--sigma0", sim_sigma0, "Noise level");
  sim->add_option("--n", sim_n, "Number of observations");
  sim->add_option("--seed", sim_seed, "Random seed");
  sim->add_option("--out", sim_out, "Output CSV (t,re,im); stdout when omitted");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate noise level, inverse filter and alphabet");
  std::string est_input;
  int est_p = 3;
  int est_kn = 1;
  RootSearchConfig search;
  bool with_cov = false;
  bool as_json = false;
  std::string json_out;
  est->add_option("--input", est_input, "Observation CSV (t,re,im)")->required();
  est->add_option("--p", est_p, "Alphabet size");
  est->add_option("--kn", est_kn, "Filter half width k(n)");
  est->add_option("--sigma-max", search.sigma_max, "Root search ceiling (default 3 * std |Y|)");
  est->add_option("--starts", search.n_starts, "Number of random starts");
  est->add_option("--seed", search.seed, "Seed for the random starts");
  est->add_option("--tol", search.bisect_tol, "Bisection tolerance on sigma");
  est->add_option("--workers", search.workers, "Threads for the multi-start search");
  est->add_flag("--with-cov", with_cov, "Add the plug-in covariance report");
  est->add_flag("--json", as_json, "Print JSON instead of text");
  est->add_option("--json-out", json_out, "Also write the JSON result to this file");

  // bench
  auto* bench = app.add_subcommand("bench", "Monte Carlo reproduction of the simulation tables");
  std::string bench_config;
  ExperimentConfig exp;
  std::string bench_preset = "mixture";
  bench->add_option("--config", bench_config, "JSON experiment config (flags below override nothing when set)");
  bench->add_option("--preset", bench_preset, "mixture or ar2")->check(CLI::IsMember({"mixture", "ar2"}));
  bench->add_option("--sigma0", exp.sigma0, "Noise level");
  bench->add_option("--n", exp.n, "Observations per replication");
  bench->add_option("--kn", exp.kn, "Filter half width");
  bench->add_option("--replications", exp.replications, "Number of replications N");
  bench->add_option("--seed", exp.seed, "Master seed");
  bench->add_option("--starts", exp.search.n_starts, "Random starts per estimate");
  bench->add_option("--workers", exp.workers, "Replications run concurrently");
  bench->add_option("--out-dir", exp.output_dir, "Directory for table.csv, runs.csv, scatter.svg");

  // gcurve
  auto* gc = app.add_subcommand("gcurve", "Tabulate G(sigma) = sign(J) log(|J|+1) for a fixed filter");
  std::string gc_input;
  int gc_p = 3;
  std::string gc_xi;
  std::string gc_grid = "0:2:200";
  std::string gc_out;
  std::string gc_svg;
  gc->add_option("--input", gc_input, "Observation CSV")->required();
  gc->add_option("--p", gc_p, "Alphabet size");
  gc->add_option("--xi", gc_xi, "Filter taps s_{-K},...,s_K, comma separated")->required();
  gc->add_option("--sigma-grid", gc_grid, "start:stop:steps");
  gc->add_option("--out", gc_out, "CSV output (sigma,J,G); stdout when omitted");
  gc->add_option("--svg", gc_svg, "Optional SVG plot");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const ComplexSeries y = simulate_model(make_preset(parse_preset(sim_preset), sim_sigma0, sim_n, sim_seed));
      if (sim_out.empty()) {
        write_series_csv(std::cout, y);
      } else {
        std::ofstream out(sim_out);
        if (!out) throw Error(ErrorCode::Io, "cannot open " + sim_out);
        write_series_csv(out, y);
      }
      return 0;
    }

    if (*est) {
      const ComplexSeries y = load_series(est_input);
      const EstimationResult result = estimate(y, FilterSpec::identity(est_kn), est_p, search);
      const DistributionEstimate dist = recover_distribution(y, result);
      std::optional<CovarianceReport> cov;
      if (with_cov) cov = plug_in_covariance(result, y);
      const std::string doc = estimation_to_json(result, &dist, cov ? &*cov : nullptr);
      if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) throw Error(ErrorCode::Io, "cannot open " + json_out);
        out << doc << '\n';
      }
      if (as_json) {
        std::cout << doc << '\n';
      } else {
        print_text(std::cout, result, dist, cov ? &*cov : nullptr);
      }
      return 0;
    }

    if (*bench) {
      if (!bench_config.empty()) {
        exp = experiment_config_from_json(slurp(bench_config));
      } else {
        exp.preset = parse_preset(bench_preset);
      }
      const McSummary summary = run_monte_carlo(exp);
      emit_table(std::cout, summary);
      if (!exp.output_dir.empty()) {
        const fs::path dir(exp.output_dir);
        fs::create_directories(dir);
        emit_table(dir / "table.csv", summary);
        std::ofstream runs(dir / "runs.csv");
        emit_runs(runs, summary);
        std::ofstream cfg_out(dir / "config.json");
        cfg_out << to_json(exp) << '\n';
        // Scatter of the first replication's data and estimates.
        const ComplexSeries y = simulate_model(make_preset(exp.preset, exp.sigma0, exp.n, derive_seed(exp.seed, 0)));
        const std::vector<cplx> est_points =
            summary.records.empty() ? std::vector<cplx>{} : summary.records.front().points;
        emit_scatter(dir / "scatter.svg", y, reference_alphabet(), est_points);
      }
      std::cerr << "N_elim=" << summary.n_elim << " N_failed=" << summary.n_failed << '\n';
      return summary.n_failed == 0 ? 0 : 1;
    }

    if (*gc) {
      const ComplexSeries y = load_series(gc_input);
      const FilterSpec spec = FilterSpec::fir(parse_list(gc_xi));
      const MomentVector d_n = empirical_moments(z_series(spec, y), gc_p);
      const std::vector<double> grid = parse_grid(gc_grid);
      const std::vector<GCurvePoint> curve = g_curve(spec, d_n, grid);
      if (gc_out.empty()) {
        write_g_curve_csv(std::cout, curve);
      } else {
        std::ofstream out(gc_out);
        if (!out) throw Error(ErrorCode::Io, "cannot open " + gc_out);
        write_g_curve_csv(out, curve);
      }
      if (!gc_svg.empty()) {
        std::ofstream svg(gc_svg);
        if (!svg) throw Error(ErrorCode::Io, "cannot open " + gc_svg);
        emit_g_curve_svg(svg, curve);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
