#pragma once

// JSON documents exchanged with the command line tool.
//
// Experiment config (all keys optional, defaults shown):
//   {
//     "preset": "mixture",        // or "ar2"
//     "sigma0": 0.05, "n": 2000, "kn": 1, "p": 3,
//     "replications": 20, "seed": 1, "workers": 1,
//     "output_dir": "",
//     "search": {
//       "sigma_max": 0, "grid_steps": 200, "bisect_tol": 1e-9,
//       "n_starts": 8, "simplex_tol": 1e-10, "xi_box": 2.0,
//       "max_evaluations": 1500, "restarts": 2
//     }
//   }

#include <optional>
#include <string>
#include <string_view>

#include "bdeconv/asymptotics.hpp"
#include "bdeconv/distribution_recovery.hpp"
#include "bdeconv/estimator.hpp"
#include "bdeconv/monte_carlo.hpp"

namespace bdeconv {

ExperimentConfig experiment_config_from_json(std::string_view text);
std::string to_json(const ExperimentConfig& cfg);

/// EstimationResult plus the optional distribution and covariance blocks.
std::string estimation_to_json(const EstimationResult& est, const DistributionEstimate* dist,
                               const CovarianceReport* cov);

}  // namespace bdeconv
