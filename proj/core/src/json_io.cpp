#include "bdeconv/json_io.hpp"

#include <type_traits>

#include <json.hpp>

#include "bdeconv/error.hpp"

namespace bdeconv {

namespace {

using nlohmann::json;

json complex_list(std::span<const cplx> values) {
  json arr = json::array();
  for (const cplx& v : values) arr.push_back({{"re", v.real()}, {"im", v.imag()}});
  return arr;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
void read_opt(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned()) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a nonnegative integer");
  }
  target = v.get<T>();
}

}  // namespace

ExperimentConfig experiment_config_from_json(std::string_view text) {
  ExperimentConfig cfg;
  try {
    const json j = json::parse(text);
    if (j.contains("preset")) cfg.preset = parse_preset(j.at("preset").get<std::string>());
    read_opt(j, "sigma0", cfg.sigma0);
    read_opt(j, "n", cfg.n);
    read_opt(j, "kn", cfg.kn);
    read_opt(j, "p", cfg.p);
    read_opt(j, "replications", cfg.replications);
    read_opt(j, "seed", cfg.seed);
    read_opt(j, "workers", cfg.workers);
    read_opt(j, "output_dir", cfg.output_dir);
    if (j.contains("search")) {
      const json& s = j.at("search");
      read_opt(s, "sigma_max", cfg.search.sigma_max);
      read_opt(s, "grid_steps", cfg.search.grid_steps);
      read_opt(s, "bisect_tol", cfg.search.bisect_tol);
      read_opt(s, "n_starts", cfg.search.n_starts);
      read_opt(s, "simplex_tol", cfg.search.simplex_tol);
      read_opt(s, "xi_box", cfg.search.xi_box);
      read_opt(s, "max_evaluations", cfg.search.max_evaluations);
      read_opt(s, "restarts", cfg.search.restarts);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string to_json(const ExperimentConfig& cfg) {
  const json j = {
      {"preset", std::string(to_string(cfg.preset))},
      {"sigma0", cfg.sigma0},
      {"n", cfg.n},
      {"kn", cfg.kn},
      {"p", cfg.p},
      {"replications", cfg.replications},
      {"seed", cfg.seed},
      {"workers", cfg.workers},
      {"output_dir", cfg.output_dir},
      {"search",
       {{"sigma_max", cfg.search.sigma_max},
        {"grid_steps", cfg.search.grid_steps},
        {"bisect_tol", cfg.search.bisect_tol},
        {"n_starts", cfg.search.n_starts},
        {"simplex_tol", cfg.search.simplex_tol},
        {"xi_box", cfg.search.xi_box},
        {"max_evaluations", cfg.search.max_evaluations},
        {"restarts", cfg.search.restarts}}},
  };
  return j.dump(2);
}

std::string estimation_to_json(const EstimationResult& est, const DistributionEstimate* dist,
                               const CovarianceReport* cov) {
  json starts = json::array();
  for (const StartOutcome& s : est.starts) {
    starts.push_back({{"sigma", s.sigma ? json(*s.sigma) : json(nullptr)},
                      {"evaluations", s.evaluations},
                      {"converged", s.converged}});
  }
  json j = {
      {"sigma_hat", est.sigma_hat},
      {"xi_hat", est.xi_hat},
      {"theta_hat", est.theta_hat},
      {"theta_unit", est.theta_unit},
      {"normalization",
       {{"scale", "unit l2 norm"},
        {"sign", "largest-magnitude tap positive"},
        {"delay_shift", est.delay_shift},
        {"dropped_energy", est.dropped_energy}}},
      {"bracket", {est.bracket.lower, est.bracket.upper}},
      {"j_residual", est.j_residual},
      {"j_threshold", est.j_threshold},
      {"start_used", est.start_used},
      {"converged", est.converged},
      {"half_width", est.half_width},
      {"p", est.p},
      {"sigma_max", est.sigma_max},
      {"starts", starts},
  };
  if (dist != nullptr) {
    j["distribution"] = {
        {"points", complex_list(dist->alphabet.points)},
        {"weights", dist->weights.weights},
        {"min_eigenvalue", dist->alphabet.min_eigenvalue},
        {"negative_flag", dist->weights.negative_flag},
        {"weights_imag_residual", dist->weights.imag_residual},
    };
  }
  if (cov != nullptr) {
    j["covariance"] = {
        {"cov", matrix_json(cov->cov)},
        {"std_errors", cov->std_errors},
        {"alpha_hat", cov->alpha_hat},
        {"negative_alpha", cov->negative_alpha},
        {"j_variance", cov->j_variance},
        {"fd_step", {{"sigma", cov->fd_step_sigma}, {"xi", cov->fd_step_xi}}},
        {"bandwidth", cov->bandwidth},
        {"effective_n", cov->effective_n},
    };
  }
  return j.dump(2);
}

}  // namespace bdeconv
