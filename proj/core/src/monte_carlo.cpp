#include "bdeconv/monte_carlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bdeconv/distribution_recovery.hpp"
#include "bdeconv/error.hpp"
#include "bdeconv/parallel.hpp"
#include "bdeconv/rng.hpp"

namespace bdeconv {

namespace {

// Shortest round-trip representation, independent of stream state and locale.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw Error(ErrorCode::Io, "malformed number '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replications < 1) throw Error(ErrorCode::InvalidArgument, "replications must be at least 1");
  if (kn < 0) throw Error(ErrorCode::InvalidArgument, "kn must be nonnegative");
  if (!(sigma0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma0 must be nonnegative");
  if (n < 2 * static_cast<std::size_t>(kn) + 2) throw Error(ErrorCode::InvalidArgument, "n too small for kn");
  if (p != static_cast<int>(reference_alphabet().size())) {
    throw Error(ErrorCode::InvalidArgument, "named presets use the three-point alphabet (p = 3)");
  }
  search.validate();
}

const ParameterStat& McSummary::parameter(const std::string& name) const {
  for (const ParameterStat& s : parameters) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::InvalidArgument, "no parameter named " + name);
}

ReplicationRecord run_replication(const ExperimentConfig& cfg, int index) {
  ReplicationRecord rec;
  rec.index = index;
  const auto i = static_cast<std::uint64_t>(index);
  const ComplexSeries y = simulate_model(make_preset(cfg.preset, cfg.sigma0, cfg.n, derive_seed(cfg.seed, 2 * i)));
  RootSearchConfig search = cfg.search;
  search.seed = derive_seed(cfg.seed, 2 * i + 1);
  search.workers = 1;
  try {
    const EstimationResult est = estimate(y, FilterSpec::identity(cfg.kn), cfg.p, search);
    rec.sigma_hat = est.sigma_hat;
    rec.theta_hat = est.theta_hat;
    rec.delay_shift = est.delay_shift;
    rec.j_residual = est.j_residual;
    const DistributionEstimate dist = recover_distribution(y, est);
    rec.points = dist.alphabet.points;
    rec.weights = dist.weights.weights;
    rec.negative_flag = dist.weights.negative_flag;
  } catch (const Error& e) {
    rec.failed = true;
    rec.failure = std::string(to_string(e.code()));
  }
  return rec;
}

McSummary summarize(std::vector<ReplicationRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const ReplicationRecord& a, const ReplicationRecord& b) { return a.index < b.index; });
  McSummary summary;
  std::vector<const ReplicationRecord*> used;
  for (const ReplicationRecord& r : records) {
    if (r.failed) {
      ++summary.n_failed;
    } else if (r.negative_flag) {
      ++summary.n_elim;
    } else {
      used.push_back(&r);
    }
  }
  summary.n_used = static_cast<int>(used.size());

  auto add = [&](std::string name, auto&& value_of) {
    ParameterStat stat;
    stat.name = std::move(name);
    if (!used.empty()) {
      cplx sum = 0.0;
      for (const ReplicationRecord* r : used) sum += value_of(*r);
      stat.mean = sum / static_cast<double>(used.size());
      if (used.size() > 1) {
        double ss = 0.0;
        for (const ReplicationRecord* r : used) ss += std::norm(value_of(*r) - stat.mean);
        stat.std = std::sqrt(ss / static_cast<double>(used.size() - 1));
      }
    }
    summary.parameters.push_back(std::move(stat));
  };

  const ReplicationRecord* shape = used.empty() ? nullptr : used.front();
  add("sigma", [](const ReplicationRecord& r) { return cplx(r.sigma_hat); });
  if (shape != nullptr) {
    for (std::size_t k = 0; k < shape->theta_hat.size(); ++k) {
      add("theta_" + std::to_string(k), [k](const ReplicationRecord& r) { return cplx(r.theta_hat.at(k)); });
    }
    for (std::size_t k = 0; k < shape->points.size(); ++k) {
      add("a_" + std::to_string(k + 1), [k](const ReplicationRecord& r) { return r.points.at(k); });
    }
    for (std::size_t k = 0; k < shape->weights.size(); ++k) {
      add("pi_" + std::to_string(k + 1), [k](const ReplicationRecord& r) { return cplx(r.weights.at(k)); });
    }
  }
  summary.records = std::move(records);
  return summary;
}

McSummary run_monte_carlo(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ReplicationRecord> records(static_cast<std::size_t>(cfg.replications));
  parallel_for(records.size(), cfg.workers,
               [&](std::size_t i) { records[i] = run_replication(cfg, static_cast<int>(i)); });
  return summarize(std::move(records));
}

void emit_table(std::ostream& out, const McSummary& summary) {
  out << "parameter,mean_re,mean_im,std\n";
  for (const ParameterStat& s : summary.parameters) {
    out << s.name << ',' << format_double(s.mean.real()) << ',' << format_double(s.mean.imag()) << ','
        << (s.std ? format_double(*s.std) : std::string()) << '\n';
  }
  out << "N_elim," << summary.n_elim << ",0,\n";
  out << "N_failed," << summary.n_failed << ",0,\n";
  out << "N_used," << summary.n_used << ",0,\n";
}

void emit_table(const std::filesystem::path& path, const McSummary& summary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  emit_table(out, summary);
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

McSummary read_table(std::istream& in) {
  McSummary summary;
  std::string line;
  if (!std::getline(in, line) || line != "parameter,mean_re,mean_im,std") {
    throw Error(ErrorCode::Io, "missing table header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 4) throw Error(ErrorCode::Io, "table row must have 4 fields: " + line);
    if (f[0] == "N_elim" || f[0] == "N_failed" || f[0] == "N_used") {
      const int count = static_cast<int>(parse_double(f[1]));
      (f[0] == "N_elim" ? summary.n_elim : f[0] == "N_failed" ? summary.n_failed : summary.n_used) = count;
      continue;
    }
    ParameterStat s;
    s.name = f[0];
    s.mean = cplx(parse_double(f[1]), parse_double(f[2]));
    if (!f[3].empty()) s.std = parse_double(f[3]);
    summary.parameters.push_back(std::move(s));
  }
  return summary;
}

void emit_runs(std::ostream& out, const McSummary& summary) {
  out << "replication,status,sigma,theta,points,weights,negative_flag,delay_shift\n";
  for (const ReplicationRecord& r : summary.records) {
    out << r.index << ',' << (r.failed ? r.failure : "ok") << ',' << format_double(r.sigma_hat) << ',';
    for (std::size_t k = 0; k < r.theta_hat.size(); ++k) out << (k ? " " : "") << format_double(r.theta_hat[k]);
    out << ',';
    for (std::size_t k = 0; k < r.points.size(); ++k) {
      out << (k ? " " : "") << format_double(r.points[k].real()) << (r.points[k].imag() < 0 ? "" : "+")
          << format_double(r.points[k].imag()) << 'i';
    }
    out << ',';
    for (std::size_t k = 0; k < r.weights.size(); ++k) out << (k ? " " : "") << format_double(r.weights[k]);
    out << ',' << (r.negative_flag ? 1 : 0) << ',' << r.delay_shift << '\n';
  }
}

}  // namespace bdeconv
