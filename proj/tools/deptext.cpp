// Command-line front end: synth, run, grid, report, check-grads.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "deptext/corpus.hpp"
#include "deptext/error.hpp"
#include "deptext/experiment.hpp"
#include "deptext/nn.hpp"
#include "deptext/random.hpp"

namespace fs = std::filesystem;
using namespace deptext;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr double kGradTolerance = 1e-4;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig c = load_experiment_config(o.config);
  if (o.seed) {
    c.master_seed = *o.seed;
    if (!c.split_seed_explicit) c.split.seed = derive_seed(c.master_seed, "split");
    if (!c.word2vec_seed_explicit) c.word2vec.seed = derive_seed(c.master_seed, "word2vec");
  }
  if (!o.out.empty()) c.output_dir = o.out;
  if (!o.format.empty()) c.corpus_format = parse_corpus_format(o.format);
  validate(c);
  return c;
}

void print_row(const ReportRow& r) {
  if (r.ok()) {
    std::printf("%-5s %-12s %-6s acc=%.4f f1=%.4f  %.1fs\n", r.model.c_str(), r.feature.c_str(), r.trainable.c_str(),
                r.metrics.accuracy, r.metrics.f1, r.wall_time);
  } else {
    std::printf("%-5s %-12s %-6s FAILED: %s\n", r.model.c_str(), r.feature.c_str(), r.trainable.c_str(),
                r.error.c_str());
  }
  std::fflush(stdout);
}

int cmd_synth(const std::string& out, std::uint64_t seed, const std::string& format, std::size_t n_dep,
              std::size_t n_not) {
  const Corpus corpus = generate_synthetic_corpus(n_dep, n_not, seed);
  const fs::path path = out;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_corpus(corpus, path, parse_corpus_format(format));
  fs::path manifest = path;
  manifest += ".manifest.json";
  std::ofstream m(manifest);
  m << synthetic_manifest(n_dep, n_not, seed).dump(2) << '\n';
  if (!m) throw Error(ErrorKind::IoError, "cannot write " + manifest.string());
  std::cout << "wrote " << corpus.size() << " posts to " << path.string() << '\n';
  return kExitOk;
}

int cmd_run(const Overrides& o, const std::string& model, const std::string& feature,
            std::optional<bool> trainable) {
  ExperimentConfig c = resolve(o);
  if (!model.empty()) c.models = {parse_model(model)};
  if (!feature.empty()) c.features = {parse_feature(feature)};
  if (trainable) c.embedding_trainable = *trainable;
  const CellResult result = run_single(c);
  ExperimentReport report;
  report.rows.push_back(result.row);
  if (result.history) report.curves[result.cell] = *result.history;
  report.manifest = {{"version", 1},
                     {"config", to_json(c)},
                     {"cells", {{{"name", result.cell}, {"seed", result.row.seed}, {"ok", true}}}}};
  export_report(report, c.output_dir);
  print_row(result.row);
  return kExitOk;
}

int cmd_grid(const Overrides& o) {
  const ExperimentConfig c = resolve(o);
  const ExperimentReport report = run_grid(c);
  export_report(report, c.output_dir);
  for (const auto& r : report.rows) print_row(r);
  std::cout << "results written to " << c.output_dir.string() << '\n';
  return report.failures() == 0 ? kExitOk : kExitRuntime;
}

int cmd_report(const std::string& dir) {
  const ExperimentReport report = read_report(dir);
  std::ofstream md(fs::path(dir) / "results.md");
  md << render_results_markdown(report);
  if (!md) throw Error(ErrorKind::IoError, "cannot write " + (fs::path(dir) / "results.md").string());
  std::cout << render_results_markdown(report);
  return report.failures() == 0 ? kExitOk : kExitRuntime;
}

int cmd_check_grads(std::uint64_t seed) {
  bool ok = true;
  for (const auto& c : nn::gradient_suite(seed)) {
    const bool pass = c.result.max_rel_error <= kGradTolerance;
    ok = ok && pass;
    std::printf("%-26s max rel err %.3e  %s\n", c.name.c_str(), c.result.max_rel_error, pass ? "ok" : "FAIL");
    for (const auto& e : c.result.entries) {
      std::printf("    %-12s %5zu entries  %.3e\n", e.parameter.c_str(), e.checked, e.max_rel_error);
    }
  }
  return ok ? kExitOk : kExitRuntime;
}

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "Experiment config (.toml-style or .json)")->required();
  app->add_option("--seed", o.seed, "Master seed override");
  app->add_option("--out", o.out, "Output directory override");
  app->add_option("--format", o.format, "Corpus format override")->check(CLI::IsMember({"jsonl", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depression detection experiments on short social-media posts"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Generate the planted-signal synthetic corpus");
  std::string synth_out = "data/synthetic_corpus.jsonl";
  std::uint64_t synth_seed = 7;
  std::string synth_format = "jsonl";
  std::size_t n_dep = 391;
  std::size_t n_not = 592;
  synth->add_option("--out", synth_out, "Corpus file to write")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--format", synth_format, "jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();
  synth->add_option("--depressed", n_dep, "Depressed posts")->capture_default_str();
  synth->add_option("--not-depressed", n_not, "Not-depressed posts")->capture_default_str();

  Overrides run_o;
  std::string run_model;
  std::string run_feature;
  std::optional<bool> run_trainable;
  auto* run = app.add_subcommand("run", "Run a single model/feature cell");
  add_overrides(run, run_o);
  run->add_option("--model", run_model, "lstm, gru, svm or nb");
  run->add_option("--feature", run_feature, "stylometric, tfidf or embedding");
  run->add_option("--trainable", run_trainable, "Train the embedding (recurrent + embedding only)");

  Overrides grid_o;
  auto* grid = app.add_subcommand("grid", "Run every configured model/feature cell");
  add_overrides(grid, grid_o);

  std::string report_dir = "out";
  auto* report = app.add_subcommand("report", "Re-render results.md from an output directory");
  report->add_option("--out", report_dir, "Output directory holding results.csv")->capture_default_str();

  std::uint64_t grad_seed = 0;
  auto* grads = app.add_subcommand("check-grads", "Finite-difference gradient check of the recurrent models");
  grads->add_option("--seed", grad_seed, "Seed for inputs and weights")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_out, synth_seed, synth_format, n_dep, n_not);
    if (run->parsed()) return cmd_run(run_o, run_model, run_feature, run_trainable);
    if (grid->parsed()) return cmd_grid(grid_o);
    if (report->parsed()) return cmd_report(report_dir);
    if (grads->parsed()) return cmd_check_grads(grad_seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
