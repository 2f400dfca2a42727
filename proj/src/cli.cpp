#include "bls/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bls/error.hpp"
#include "bls/fixtures.hpp"
#include "bls/harness.hpp"

namespace bls {
namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FixtureConfig fixture_from_file(const fs::path& path) {
  // A fixture file is an experiment config holding only "fixture", or a
  // bare fixture object.
  const std::string text = read_text(path);
  try {
    return experiment_config_from_json_text(text, path.parent_path()).fixture;
  } catch (const ConfigError&) {
    return experiment_config_from_json_text("{\"fixture\": " + text + "}", path.parent_path())
        .fixture;
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  bool strict = false;
  // gen-net
  std::optional<std::size_t> dim, depth, hidden_dim;
  std::string activation;
  bool pixel_norm = false;
  // optimize
  std::string task = "latent-distance";
  std::string driver = "sgd";
  std::optional<int> iters;
  std::optional<double> lr;
  // report
  std::string csv;
};

int cmd_gen_net(const Options& o, std::ostream& out) {
  FixtureConfig f = o.config.empty() ? FixtureConfig{} : fixture_from_file(o.config);
  if (o.seed) f.seed = *o.seed;
  if (o.dim) f.dim = *o.dim;
  if (o.depth) f.depth = *o.depth;
  if (o.hidden_dim) f.hidden_dim = *o.hidden_dim;
  if (!o.activation.empty()) f.activation = parse_activation(o.activation);
  if (o.pixel_norm) f.use_pixel_norm = true;
  const fs::path path = o.out.empty() ? fs::path("net.json") : fs::path(o.out);
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  save_network(gen_mapping_network(f).network(), path);
  if (!o.quiet) out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_traverse(const Options& o, std::ostream& out) {
  ExperimentConfig cfg = load_experiment_config(o.config);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.strict) cfg.strict = true;
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  ensure_dir(dir);

  const ExperimentResult result = run_experiment(cfg);
  write_csv(result.rows, dir / "traversal.csv");
  write_frechet_json(result.frechet, dir / "frechet.json");
  if (!o.quiet) {
    out << "wrote " << (dir / "traversal.csv").string() << " (" << result.rows.size()
        << " rows) and " << (dir / "frechet.json").string() << "\n";
    if (result.failed_trajectories > 0)
      out << result.failed_trajectories << " trajectories failed numerically (flagged rows)\n";
  }
  return kExitOk;
}

int cmd_optimize(const Options& o, std::ostream& out) {
  OptimizeConfig cfg;
  if (!o.config.empty()) {
    const fs::path path(o.config);
    cfg = optimize_config_from_json_text(read_text(path), path.parent_path());
  }
  cfg.task = parse_task(o.task);
  cfg.driver = parse_driver(o.driver);
  if (o.seed) cfg.seed = *o.seed;
  if (o.iters) cfg.iters = *o.iters;
  if (o.lr) cfg.lr = *o.lr;
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  ensure_dir(dir);

  const OptimizeResult result = run_optimize(cfg);
  const fs::path path = dir / ("optimize_" + result.task + "_" + result.driver + ".csv");
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + path.string() + "'");
  write_optimize_csv(result, file);
  if (!file) throw IoError("write failed for '" + path.string() + "'");
  if (!o.quiet)
    out << "wrote " << path.string() << " (loss " << result.states.front().loss << " -> "
        << result.states.back().loss << ")\n";
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  write_summary(summarize(read_csv(o.csv)), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounded Local Space latent traversal on synthetic mapping networks", "blsnav"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen-net", "Generate a fixture mapping network as JSON");
  gen->add_option("--config", o.config, "Fixture config JSON")->check(CLI::ExistingFile);
  gen->add_option("--out", o.out, "Output network file (default net.json)");
  gen->add_option("--seed", o.seed, "Fixture seed");
  gen->add_option("--dim", o.dim, "Latent dimension");
  gen->add_option("--depth", o.depth, "Number of linear layers");
  gen->add_option("--hidden-dim", o.hidden_dim, "Hidden width");
  gen->add_option("--activation", o.activation, "leaky_relu or tanh");
  gen->add_flag("--pixel-norm", o.pixel_norm, "Prepend a pixel-norm layer");
  gen->add_flag("--quiet", o.quiet, "No progress output");

  auto* trav = app.add_subcommand("traverse", "Run a traversal experiment");
  trav->add_option("--config", o.config, "Experiment config JSON")->required();
  trav->add_option("--out", o.out, "Output directory (default .)");
  trav->add_option("--seed", o.seed, "Override master_seed");
  trav->add_flag("--strict", o.strict, "Fail on the first numeric error");
  trav->add_flag("--quiet", o.quiet, "No progress output");

  auto* opt = app.add_subcommand("optimize", "Run a latent optimization demo");
  opt->add_option("--config", o.config, "Optimize config JSON")->check(CLI::ExistingFile);
  opt->add_option("--task", o.task, "latent-distance, score-match or feature-match")
      ->check(CLI::IsMember({"latent-distance", "score-match", "feature-match"}));
  opt->add_option("--driver", o.driver, "sgd or bounded")->check(CLI::IsMember({"sgd", "bounded"}));
  opt->add_option("--out", o.out, "Output directory (default .)");
  opt->add_option("--seed", o.seed, "Problem seed");
  opt->add_option("--iters", o.iters, "Iterations");
  opt->add_option("--lr", o.lr, "Learning rate (default: task preset)");
  opt->add_flag("--quiet", o.quiet, "No progress output");

  auto* rep = app.add_subcommand("report", "Summarize a traversal CSV");
  rep->add_option("csv", o.csv, "Traversal CSV")->required();
  rep->add_flag("--quiet", o.quiet, "Accepted for symmetry; the table is always printed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen_net(o, out);
    if (*trav) return cmd_traverse(o, out);
    if (*opt) return cmd_optimize(o, out);
    if (*rep) return cmd_report(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace bls
