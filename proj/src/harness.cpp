#include "bls/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bls/error.hpp"
#include "bls/metrics.hpp"

namespace bls {
namespace {

using nlohmann::json;

// Stream tags under master_seed / feature_seed.
constexpr std::uint64_t kReferenceStream = 0x5eed'f1d0ULL;
constexpr std::uint64_t kRandomMethodStream = 0x7a3d'0001ULL;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known, const char* what) {
  for (const auto& [key, _] : obj.items())
    if (!known.count(key))
      throw ConfigError(std::string("unknown key '") + key + "' in " + what);
}

template <class T>
T get_field(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

std::uint64_t get_seed(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_unsigned())
    throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
  return obj.at(key).get<std::uint64_t>();
}

FixtureConfig fixture_from_json(const json& obj) {
  if (!obj.is_object()) throw ConfigError("'fixture' must be an object");
  reject_unknown_keys(obj, {"dim", "depth", "hidden_dim", "activation", "use_pixel_norm", "seed"},
                      "fixture");
  FixtureConfig f;
  f.dim = get_field<std::size_t>(obj, "dim", f.dim);
  f.depth = get_field<std::size_t>(obj, "depth", f.depth);
  f.hidden_dim = get_field<std::size_t>(obj, "hidden_dim", f.hidden_dim);
  f.activation = parse_activation(
      get_field<std::string>(obj, "activation", std::string(activation_name(f.activation))));
  f.use_pixel_norm = get_field<bool>(obj, "use_pixel_norm", f.use_pixel_norm);
  f.seed = get_seed(obj, "seed", f.seed);
  f.validate();
  return f;
}

json fixture_to_json(const FixtureConfig& f) {
  return json{{"dim", f.dim},
              {"depth", f.depth},
              {"hidden_dim", f.hidden_dim},
              {"activation", std::string(activation_name(f.activation))},
              {"use_pixel_norm", f.use_pixel_norm},
              {"seed", f.seed}};
}

std::optional<std::filesystem::path> network_path(const json& doc,
                                                  const std::filesystem::path& base_dir) {
  if (!doc.contains("network_file")) return std::nullopt;
  if (doc.contains("fixture"))
    throw ConfigError("give either 'network_file' or 'fixture', not both");
  std::filesystem::path p = get_field<std::string>(doc, "network_file", "");
  if (p.empty()) throw ConfigError("'network_file' is empty");
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p;
}

MappingNetwork load_or_generate(const std::optional<std::filesystem::path>& file,
                                const FixtureConfig& fixture) {
  if (file) return MappingNetwork(load_network(*file));
  return gen_mapping_network(fixture);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Everything one (method, alpha, trajectory) run produces.
struct TrajectoryOutput {
  std::vector<TraversalRecord> records;
  std::optional<int> failed_at;
  std::string failure;
  std::vector<Vector> snapshots;  // w at iterations 0, k, 2k, ... while alive
};

TrajectoryOutput run_one(const MappingNetwork& net, const ExperimentConfig& cfg, Method method,
                         double alpha, int trajectory) {
  TrajectoryOutput out;
  auto [z0, direction] = trajectory_start(cfg.master_seed, net.dim(), trajectory);

  TraversalConfig tc;
  tc.method = method;
  tc.steps = cfg.steps;
  tc.step_length = cfg.step_length;
  tc.alpha = alpha;
  tc.sv_threshold = cfg.sv_threshold;
  tc.seed = mix64(cfg.master_seed ^ mix64(kRandomMethodStream + static_cast<std::uint64_t>(trajectory)));

  TraversalState state = initial_state(net, z0, direction);
  out.snapshots.push_back(state.pair.w);
  Rng rng(tc.seed);
  out.records.reserve(static_cast<std::size_t>(cfg.steps));
  for (int t = 0; t < cfg.steps; ++t) {
    try {
      TraversalStep step = step_any(net, state, tc, rng);
      state = std::move(step.state);
      out.records.push_back(step.record);
    } catch (const NumericError& e) {
      if (cfg.strict) throw;
      out.failed_at = t + 1;
      out.failure = e.what();
      break;
    } catch (const InputError& e) {
      // Overflowing latents surface as non-finite Jacobians.
      if (cfg.strict) throw;
      out.failed_at = t + 1;
      out.failure = e.what();
      break;
    }
    if (state.iter % cfg.fid_interval == 0) out.snapshots.push_back(state.pair.w);
  }
  return out;
}

void append_rows(std::vector<ResultRow>& rows, const std::string& method, double alpha,
                 int trajectory, const TrajectoryOutput& out) {
  for (const auto& r : out.records)
    rows.push_back(ResultRow{method, alpha, trajectory, r.iter, r.cos_sim, r.step_len, r.cum_dist});
  if (out.failed_at) {
    const double nan = std::nan("");
    rows.push_back(ResultRow{method, alpha, trajectory, *out.failed_at, nan, nan, nan});
  }
}

MetricStats stats_of(const std::vector<double>& xs) {
  MetricStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

// ---- configuration -----------------------------------------------------

void ExperimentConfig::validate() const {
  fixture.validate();
  if (methods.empty()) throw ConfigError("'methods' must not be empty");
  if (trajectories < 1) throw ConfigError("'trajectories' must be at least 1");
  if (steps < 1) throw ConfigError("'steps' must be at least 1");
  if (!(step_length > 0.0) || !std::isfinite(step_length))
    throw ConfigError("'step_length' must be positive");
  if (alpha_values.empty()) throw ConfigError("'alpha_values' must not be empty");
  for (double a : alpha_values)
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("every alpha must be positive");
  if (!(sv_threshold >= 0.0) || !std::isfinite(sv_threshold))
    throw ConfigError("'sv_threshold' must be non-negative");
  if (fid_interval < 1) throw ConfigError("'fid_interval' must be at least 1");
}

ExperimentConfig experiment_config_from_json_text(const std::string& text,
                                                  const std::filesystem::path& base_dir) {
  const json doc = parse_json(text, "experiment config");
  if (!doc.is_object()) throw ConfigError("experiment config must be a JSON object");
  reject_unknown_keys(doc,
                      {"network_file", "fixture", "methods", "trajectories", "steps",
                       "step_length", "alpha_values", "sv_threshold", "fid_interval",
                       "feature_seed", "master_seed", "strict", "threads"},
                      "experiment config");
  ExperimentConfig cfg;
  cfg.network_file = network_path(doc, base_dir);
  if (doc.contains("fixture")) cfg.fixture = fixture_from_json(doc.at("fixture"));
  if (doc.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : get_field<std::vector<std::string>>(doc, "methods", {}))
      cfg.methods.push_back(parse_method(name));
  }
  cfg.trajectories = get_field<int>(doc, "trajectories", cfg.trajectories);
  cfg.steps = get_field<int>(doc, "steps", cfg.steps);
  cfg.step_length = get_field<double>(doc, "step_length", cfg.step_length);
  cfg.alpha_values = get_field<std::vector<double>>(doc, "alpha_values", cfg.alpha_values);
  cfg.sv_threshold = get_field<double>(doc, "sv_threshold", cfg.sv_threshold);
  cfg.fid_interval = get_field<int>(doc, "fid_interval", cfg.fid_interval);
  cfg.feature_seed = get_seed(doc, "feature_seed", cfg.feature_seed);
  cfg.master_seed = get_seed(doc, "master_seed", cfg.master_seed);
  cfg.strict = get_field<bool>(doc, "strict", cfg.strict);
  cfg.threads = get_field<unsigned>(doc, "threads", cfg.threads);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  try {
    return experiment_config_from_json_text(read_file(path), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string experiment_config_to_json_text(const ExperimentConfig& cfg) {
  json doc;
  if (cfg.network_file)
    doc["network_file"] = cfg.network_file->string();
  else
    doc["fixture"] = fixture_to_json(cfg.fixture);
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(method_name(m)));
  doc["methods"] = methods;
  doc["trajectories"] = cfg.trajectories;
  doc["steps"] = cfg.steps;
  doc["step_length"] = cfg.step_length;
  doc["alpha_values"] = cfg.alpha_values;
  doc["sv_threshold"] = cfg.sv_threshold;
  doc["fid_interval"] = cfg.fid_interval;
  doc["feature_seed"] = cfg.feature_seed;
  doc["master_seed"] = cfg.master_seed;
  doc["strict"] = cfg.strict;
  doc["threads"] = cfg.threads;
  return doc.dump(2) + "\n";
}

// ---- experiment --------------------------------------------------------

bool ResultRow::flagged() const {
  return std::isnan(cos_sim) || std::isnan(step_len) || std::isnan(cum_dist);
}

MappingNetwork experiment_network(const ExperimentConfig& cfg) {
  return load_or_generate(cfg.network_file, cfg.fixture);
}

std::pair<Vector, Vector> trajectory_start(std::uint64_t master_seed, std::size_t dim, int index) {
  Rng rng = Rng::stream(master_seed, static_cast<std::uint64_t>(index));
  FixtureConfig shape;
  shape.dim = dim;
  Vector z = sample_z(shape, rng);
  Vector d = sample_direction(shape, rng);
  return {std::move(z), std::move(d)};
}

Network experiment_extractor(std::size_t dim, std::uint64_t feature_seed) {
  FixtureConfig f;
  f.dim = dim;
  f.seed = feature_seed;
  return gen_feature_extractor(f);
}

Matrix reference_features(const MappingNetwork& net, const Network& extractor,
                          std::uint64_t feature_seed, int count) {
  Rng rng = Rng::stream(feature_seed, kReferenceStream);
  Matrix feats(count, static_cast<Eigen::Index>(extractor.output_dim()));
  FixtureConfig shape;
  shape.dim = net.dim();
  for (int i = 0; i < count; ++i)
    feats.row(i) = forward(extractor, forward(net, sample_z(shape, rng))).transpose();
  return feats;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const MappingNetwork net = experiment_network(cfg);
  const Network extractor = experiment_extractor(net.dim(), cfg.feature_seed);

  struct Task {
    Method method;
    double alpha;
    int trajectory;
  };
  std::vector<Task> tasks;
  for (Method m : cfg.methods)
    for (double a : cfg.alpha_values)
      for (int k = 0; k < cfg.trajectories; ++k) tasks.push_back({m, a, k});

  std::vector<TrajectoryOutput> outputs(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        outputs[i] = run_one(net, cfg, tasks[i].method, tasks[i].alpha, tasks[i].trajectory);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, tasks.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  // Lowest task index wins so the reported error does not depend on timing.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentResult result;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    append_rows(result.rows, std::string(method_name(tasks[i].method)), tasks[i].alpha,
                tasks[i].trajectory, outputs[i]);
    if (outputs[i].failed_at) ++result.failed_trajectories;
  }

  if (cfg.trajectories < 2) {
    for (Method m : cfg.methods)
      for (double a : cfg.alpha_values) result.frechet.push_back({std::string(method_name(m)), a, {}});
    return result;
  }

  const FeaturePopulation reference =
      fit_gaussian(reference_features(net, extractor, cfg.feature_seed, cfg.trajectories));
  const std::size_t n_points = static_cast<std::size_t>(cfg.steps / cfg.fid_interval) + 1;
  std::size_t base = 0;
  for (Method m : cfg.methods) {
    for (double a : cfg.alpha_values) {
      FrechetSeries fs{std::string(method_name(m)), a, {}};
      for (std::size_t p = 0; p < n_points; ++p) {
        std::vector<Vector> feats;
        for (int k = 0; k < cfg.trajectories; ++k) {
          const auto& snaps = outputs[base + static_cast<std::size_t>(k)].snapshots;
          if (p < snaps.size()) feats.push_back(forward(extractor, snaps[p]));
        }
        if (feats.size() < 2) continue;
        fs.series.emplace_back(static_cast<int>(p) * cfg.fid_interval,
                               frechet_distance(fit_gaussian(feats), reference));
      }
      result.frechet.push_back(std::move(fs));
      base += static_cast<std::size_t>(cfg.trajectories);
    }
  }
  return result;
}

// ---- CSV / JSON output -------------------------------------------------

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << format_double(r.alpha) << ',' << r.trajectory << ',' << r.iter << ','
        << format_double(r.cos_sim) << ',' << format_double(r.step_len) << ','
        << format_double(r.cum_dist) << '\n';
  }
}

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_csv(rows, out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<ResultRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV (missing header)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw InputError("unexpected CSV header: '" + line + "'");

  std::vector<ResultRow> rows;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 7)
      throw InputError("CSV line " + std::to_string(lineno) + " has " +
                       std::to_string(cells.size()) + " fields");
    try {
      ResultRow r;
      r.method = cells[0];
      r.alpha = std::stod(cells[1]);
      r.trajectory = std::stoi(cells[2]);
      r.iter = std::stoi(cells[3]);
      r.cos_sim = std::stod(cells[4]);
      r.step_len = std::stod(cells[5]);
      r.cum_dist = std::stod(cells[6]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw InputError("CSV line " + std::to_string(lineno) + " has a malformed number");
    }
  }
  return rows;
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_csv(in);
}

std::string frechet_to_json_text(const std::vector<FrechetSeries>& series) {
  json arr = json::array();
  for (const auto& s : series) {
    json pts = json::array();
    for (const auto& [iter, value] : s.series) pts.push_back(json::array({iter, value}));
    arr.push_back(json{{"method", s.method}, {"alpha", s.alpha}, {"series", std::move(pts)}});
  }
  return arr.dump(2) + "\n";
}

void write_frechet_json(const std::vector<FrechetSeries>& series,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << frechet_to_json_text(series);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  struct Acc {
    std::vector<double> cos, step, cum;
  };
  std::vector<std::pair<std::string, double>> group_order;
  std::map<std::pair<std::string, double>, std::map<int, Acc>> groups;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.method, r.alpha);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) group_order.push_back(key);
    Acc& acc = it->second[r.iter];
    if (r.flagged()) continue;
    acc.cos.push_back(r.cos_sim);
    acc.step.push_back(r.step_len);
    acc.cum.push_back(r.cum_dist);
  }

  std::vector<SummaryRow> out;
  for (const auto& key : group_order) {
    for (const auto& [iter, acc] : groups.at(key)) {
      SummaryRow s;
      s.method = key.first;
      s.alpha = key.second;
      s.iter = iter;
      s.count = static_cast<int>(acc.cos.size());
      s.cos_sim = stats_of(acc.cos);
      s.step_len = stats_of(acc.step);
      s.cum_dist = stats_of(acc.cum);
      out.push_back(std::move(s));
    }
  }
  return out;
}

void write_summary(const std::vector<SummaryRow>& summary, std::ostream& out) {
  out << "method,alpha,iter,count,cos_sim_mean,cos_sim_std,step_len_mean,step_len_std,"
         "cum_dist_mean,cum_dist_std\n";
  for (const auto& s : summary) {
    out << s.method << ',' << format_double(s.alpha) << ',' << s.iter << ',' << s.count << ','
        << format_double(s.cos_sim.mean) << ',' << format_double(s.cos_sim.std) << ','
        << format_double(s.step_len.mean) << ',' << format_double(s.step_len.std) << ','
        << format_double(s.cum_dist.mean) << ',' << format_double(s.cum_dist.std) << '\n';
  }
}

// ---- optimization demos ------------------------------------------------

std::string_view task_name(Task t) {
  switch (t) {
    case Task::LatentDistance: return "latent-distance";
    case Task::ScoreMatch: return "score-match";
    case Task::FeatureMatch: return "feature-match";
  }
  return "unknown";
}

Task parse_task(std::string_view name) {
  if (name == "latent-distance") return Task::LatentDistance;
  if (name == "score-match") return Task::ScoreMatch;
  if (name == "feature-match") return Task::FeatureMatch;
  throw ConfigError("unknown optimization task '" + std::string(name) + "'");
}

void OptimizeConfig::validate() const {
  fixture.validate();
  if (iters < 1) throw ConfigError("'iters' must be at least 1");
  if (lr && (!(*lr > 0.0) || !std::isfinite(*lr))) throw ConfigError("'lr' must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("'alpha' must be positive");
  if (!(sv_threshold >= 0.0)) throw ConfigError("'sv_threshold' must be non-negative");
  if (!(d_t >= 0.0)) throw ConfigError("'d_t' must be non-negative");
}

OptimizeConfig optimize_config_from_json_text(const std::string& text,
                                              const std::filesystem::path& base_dir) {
  const json doc = parse_json(text, "optimize config");
  if (!doc.is_object()) throw ConfigError("optimize config must be a JSON object");
  reject_unknown_keys(doc,
                      {"network_file", "fixture", "task", "driver", "iters", "lr", "alpha",
                       "sv_threshold", "d_t", "seed"},
                      "optimize config");
  OptimizeConfig cfg;
  cfg.network_file = network_path(doc, base_dir);
  if (doc.contains("fixture")) cfg.fixture = fixture_from_json(doc.at("fixture"));
  if (doc.contains("task")) cfg.task = parse_task(get_field<std::string>(doc, "task", ""));
  if (doc.contains("driver")) cfg.driver = parse_driver(get_field<std::string>(doc, "driver", ""));
  cfg.iters = get_field<int>(doc, "iters", cfg.iters);
  if (doc.contains("lr")) cfg.lr = get_field<double>(doc, "lr", 0.0);
  cfg.alpha = get_field<double>(doc, "alpha", cfg.alpha);
  cfg.sv_threshold = get_field<double>(doc, "sv_threshold", cfg.sv_threshold);
  cfg.d_t = get_field<double>(doc, "d_t", cfg.d_t);
  cfg.seed = get_seed(doc, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

OptimizeProblem build_problem(const OptimizeConfig& cfg) {
  cfg.validate();
  MappingNetwork net = load_or_generate(cfg.network_file, cfg.fixture);
  FixtureConfig shape = cfg.fixture;
  shape.dim = net.dim();

  Rng rng = Rng::stream(cfg.seed, 0);
  const Vector z_ref = sample_z(shape, rng);
  Vector init_z = sample_z(shape, rng);

  LearningRates rates{};
  LossSpec spec;
  switch (cfg.task) {
    case Task::LatentDistance:
      spec = loss::LatentDistance{forward(net, z_ref), cfg.d_t};
      rates = lr_preset::kLatentDistance;
      break;
    case Task::ScoreMatch: {
      Network scorer = gen_scorer(shape);
      double best = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < 1000; ++i)
        best = std::max(best, forward(scorer, forward(net, sample_z(shape, rng)))[0]);
      spec = loss::ScoreMatch{std::move(scorer), best};
      rates = lr_preset::kScoreMatch;
      break;
    }
    case Task::FeatureMatch: {
      Network extractor = gen_feature_extractor(shape);
      Vector target = forward(extractor, forward(net, z_ref));
      Vector mask(target.size());
      for (Eigen::Index i = 0; i < mask.size(); ++i) mask[i] = rng.uniform() < 0.5 ? 0.0 : 1.0;
      if (mask.sum() == 0.0) mask[0] = 1.0;
      spec = loss::FeatureMatch{std::move(extractor), std::move(target), std::move(mask)};
      rates = lr_preset::kFeatureMatch;
      break;
    }
  }
  const double lr = cfg.lr ? *cfg.lr : (cfg.driver == Driver::Sgd ? rates.sgd : rates.bounded);
  return OptimizeProblem{std::move(net), std::move(spec), std::move(init_z), lr};
}

OptimizeResult run_optimize(const OptimizeConfig& cfg) {
  OptimizeProblem p = build_problem(cfg);
  OptimizeResult r;
  r.states = run_optimization(p.net, p.loss, p.init_z, cfg.iters, p.lr, cfg.driver, cfg.alpha,
                              cfg.sv_threshold);
  r.task = std::string(task_name(cfg.task));
  r.driver = std::string(driver_name(cfg.driver));
  return r;
}

void write_optimize_csv(const OptimizeResult& result, std::ostream& out) {
  out << "task,driver,iter,loss,w_dist\n";
  if (result.states.empty()) return;
  const Vector& start = result.states.front().pair.w;
  for (const auto& s : result.states) {
    out << result.task << ',' << result.driver << ',' << s.iter << ',' << format_double(s.loss)
        << ',' << format_double((s.pair.w - start).norm()) << '\n';
  }
}

}  // namespace bls
