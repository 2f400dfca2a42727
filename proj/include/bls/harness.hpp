#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bls/fixtures.hpp"
#include "bls/optimize.hpp"
#include "bls/traversal.hpp"

namespace bls {

/// One traversal experiment: every method x alpha x trajectory.
///
/// JSON keys mirror the field names. Exactly one of "network_file" and
/// "fixture" may be given (fixture is the default); a relative
/// network_file is resolved against the config file's directory.
struct ExperimentConfig {
  std::optional<std::filesystem::path> network_file;
  FixtureConfig fixture;
  std::vector<Method> methods{Method::Bounded, Method::Linear, Method::Random, Method::Ict};
  int trajectories = 1000;
  int steps = 500;
  double step_length = step_preset::kLhqLike;
  std::vector<double> alpha_values{kDefaultAlpha};
  double sv_threshold = kDefaultSvThreshold;
  int fid_interval = 10;
  std::uint64_t feature_seed = 0;
  std::uint64_t master_seed = 0;
  /// Rethrow the first per-trajectory numeric failure instead of flagging it.
  bool strict = false;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
};

ExperimentConfig experiment_config_from_json_text(const std::string& text,
                                                  const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string experiment_config_to_json_text(const ExperimentConfig& cfg);

/// One CSV row. A trajectory that failed numerically ends with a row whose
/// metrics are NaN at the failing iteration.
struct ResultRow {
  std::string method;
  double alpha = 0.0;
  int trajectory = 0;
  int iter = 0;
  double cos_sim = 0.0;
  double step_len = 0.0;
  double cum_dist = 0.0;

  bool flagged() const;
};

struct FrechetSeries {
  std::string method;
  double alpha = 0.0;
  std::vector<std::pair<int, double>> series;  // (iter, squared distance)
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<FrechetSeries> frechet;
  int failed_trajectories = 0;
};

/// The network an experiment runs on (loaded or generated).
MappingNetwork experiment_network(const ExperimentConfig& cfg);

/// Initial (z0, direction) of trajectory `index`; shared by every method
/// and alpha of an experiment.
std::pair<Vector, Vector> trajectory_start(std::uint64_t master_seed, std::size_t dim,
                                           int index);

/// Proxy features (rows) of w = M(z), z ~ N(0, I), `count` samples drawn
/// from `feature_seed`.
Matrix reference_features(const MappingNetwork& net, const Network& extractor,
                          std::uint64_t feature_seed, int count);

/// Fixed proxy extractor for an experiment, derived from feature_seed.
Network experiment_extractor(std::size_t dim, std::uint64_t feature_seed);

/// Rows are ordered by method, alpha, trajectory, iter (config order for
/// methods and alphas). Fréchet points are taken at iteration 0 and every
/// fid_interval iterations, against reference_features(); they need at
/// least two surviving trajectories.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kCsvHeader = "method,alpha,trajectory,iter,cos_sim,step_len,cum_dist";

/// 17 significant digits, '\n' line ends, NaN written as "nan".
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> parse_csv(std::istream& in);
std::vector<ResultRow> read_csv(const std::filesystem::path& path);

/// JSON array of {"method", "alpha", "series": [[iter, value], ...]}.
std::string frechet_to_json_text(const std::vector<FrechetSeries>& series);
void write_frechet_json(const std::vector<FrechetSeries>& series,
                        const std::filesystem::path& path);

struct MetricStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};

struct SummaryRow {
  std::string method;
  double alpha = 0.0;
  int iter = 0;
  int count = 0;  // non-flagged rows contributing
  MetricStats cos_sim;
  MetricStats step_len;
  MetricStats cum_dist;
};

/// Mean and standard deviation of each metric per (method, alpha, iter),
/// skipping flagged rows. Groups appear in first-seen (method, alpha)
/// order with ascending iter.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
void write_summary(const std::vector<SummaryRow>& summary, std::ostream& out);

// ---- optimization demos -----------------------------------------------

enum class Task { LatentDistance, ScoreMatch, FeatureMatch };

std::string_view task_name(Task t);
/// "latent-distance", "score-match" or "feature-match".
Task parse_task(std::string_view name);

struct OptimizeConfig {
  std::optional<std::filesystem::path> network_file;
  FixtureConfig fixture;
  Task task = Task::LatentDistance;
  Driver driver = Driver::Sgd;
  int iters = 500;
  std::optional<double> lr;  // task preset when unset
  double alpha = kDefaultAlpha;
  double sv_threshold = kDefaultSvThreshold;
  double d_t = 100.0;
  std::uint64_t seed = 0;

  void validate() const;
};

OptimizeConfig optimize_config_from_json_text(const std::string& text,
                                              const std::filesystem::path& base_dir = {});

/// A fully built optimization problem.
struct OptimizeProblem {
  MappingNetwork net;
  LossSpec loss;
  Vector init_z;
  double lr;
};

/// Task presets (all draws from `seed`):
///  latent-distance: w0 = M(z_ref), d_t from the config, start at an
///    independent z.
///  score-match: fixture scorer, target s = highest score over 1,000
///    reference codes w = M(z).
///  feature-match: fixture extractor, target = features of M(z_ref),
///    Bernoulli(1/2) mask with at least one kept entry.
OptimizeProblem build_problem(const OptimizeConfig& cfg);

struct OptimizeResult {
  std::vector<OptState> states;
  std::string task;
  std::string driver;
};

OptimizeResult run_optimize(const OptimizeConfig& cfg);

/// Header `task,driver,iter,loss,w_dist` where w_dist = |w - w_start|.
void write_optimize_csv(const OptimizeResult& result, std::ostream& out);

}  // namespace bls
