#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bdeconv/estimator.hpp"
#include "bdeconv/model_sim.hpp"

namespace bdeconv {

struct ExperimentConfig {
  Preset preset = Preset::Mixture;
  double sigma0 = 0.05;
  std::size_t n = 2000;
  int kn = 1;
  int p = 3;
  int replications = 20;
  std::uint64_t seed = 1;
  RootSearchConfig search;
  std::string output_dir;
  unsigned workers = 1;

  void validate() const;
};

struct ReplicationRecord {
  int index = 0;
  bool failed = false;
  std::string failure;
  double sigma_hat = 0.0;
  std::vector<double> theta_hat;
  std::vector<cplx> points;
  std::vector<double> weights;
  bool negative_flag = false;
  int delay_shift = 0;
  double j_residual = 0.0;
};

struct ParameterStat {
  std::string name;
  cplx mean;
  /// sqrt(sum |x - mean|^2 / (N_used - 1)); absent when N_used < 2.
  std::optional<double> std;
};

struct McSummary {
  std::vector<ParameterStat> parameters;
  int n_elim = 0;
  int n_failed = 0;
  int n_used = 0;
  std::vector<ReplicationRecord> records;

  const ParameterStat& parameter(const std::string& name) const;
};

/// One simulate -> estimate -> recover pipeline with replication-derived seeds.
ReplicationRecord run_replication(const ExperimentConfig& cfg, int index);

/// Aggregates records in index order. Runs with negative weights are counted
/// in n_elim and failed runs in n_failed; neither enters means or stds.
McSummary summarize(std::vector<ReplicationRecord> records);

McSummary run_monte_carlo(const ExperimentConfig& cfg);

/// CSV: parameter,mean_re,mean_im,std followed by N_elim / N_failed / N_used rows.
void emit_table(std::ostream& out, const McSummary& summary);
void emit_table(const std::filesystem::path& path, const McSummary& summary);
/// Reads back what emit_table wrote (parameters and counts only).
McSummary read_table(std::istream& in);

/// Per-replication CSV.
void emit_runs(std::ostream& out, const McSummary& summary);

}  // namespace bdeconv
