#ifndef DEPTEXT_EXPERIMENT_HPP
#define DEPTEXT_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deptext/classical.hpp"
#include "deptext/corpus.hpp"
#include "deptext/metrics.hpp"
#include "deptext/nn.hpp"
#include "deptext/textproc.hpp"
#include "deptext/word2vec.hpp"

namespace deptext {

enum class ModelKind { Lstm, Gru, Svm, Nb };
enum class FeatureKind { Stylometric, Tfidf, Embedding };
enum class Pooling { Mean, None };

std::string_view model_name(ModelKind kind);
std::string_view feature_name(FeatureKind kind);
ModelKind parse_model(std::string_view name);
FeatureKind parse_feature(std::string_view name);
inline bool is_recurrent(ModelKind kind) { return kind == ModelKind::Lstm || kind == ModelKind::Gru; }

struct RnnHyper {
  Index hidden_dim = 300;
  int epochs = 50;
  int batch_size = 32;
  nn::RmsPropConfig optimizer;
  double forget_bias = 1.0;
};

struct ExperimentConfig {
  std::filesystem::path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::Jsonl;
  SplitSpec split;
  /// Split seed comes from the master seed unless set explicitly.
  bool split_seed_explicit = false;
  bool word2vec_seed_explicit = false;
  PreprocessConfig preprocess = PreprocessConfig::defaults();
  std::optional<std::filesystem::path> stopwords_path;

  std::vector<ModelKind> models;
  std::vector<FeatureKind> features;
  bool embedding_trainable = true;
  /// Runs recurrent embedding cells once trainable and once frozen.
  bool cross_trainable = false;
  /// Lets recurrent models take the dense TF-IDF row as a length-1 sequence.
  bool tfidf_as_sequence = false;
  /// How classical models read embedding features; None hands them raw
  /// index sequences, which they cannot consume.
  Pooling embedding_pooling = Pooling::Mean;

  int ngram_min = 1;
  int ngram_max = 2;
  SkipGramConfig word2vec;
  int vocab_size = 1000;
  int max_len = 100;
  RnnHyper lstm;
  RnnHyper gru;
  SvmConfig svm;
  double nb_alpha = 1.0;

  std::filesystem::path output_dir = "out";
  std::uint64_t master_seed = 42;
  bool write_checkpoints = true;
};

/// Relative paths resolve against base_dir. Unknown keys are rejected.
/// Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& json, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Fully resolved form, suitable for manifests.
nlohmann::json to_json(const ExperimentConfig& config);

/// Throws ConfigError for missing paths or empty selectors.
void validate(const ExperimentConfig& config);

struct CellSpec {
  ModelKind model = ModelKind::Nb;
  FeatureKind feature = FeatureKind::Tfidf;
  /// Set for recurrent embedding cells only.
  std::optional<bool> trainable;
  /// Appends "_trainable"/"_frozen" to the name.
  bool tag_trainable = false;

  std::string name() const;
};

/// Feature/model compatibility. Recurrent models take stylometric vectors
/// (length-1 sequences) and embedding index sequences, plus TF-IDF when
/// tfidf_as_sequence is set; classical models take stylometric, TF-IDF and
/// mean-pooled embeddings. Throws ConfigError otherwise.
void check_compatibility(const CellSpec& cell, const ExperimentConfig& config);

/// Cross product of selectors in config order (features outer, models
/// inner); recurrent embedding cells are doubled under cross_trainable.
std::vector<CellSpec> expand_grid(const ExperimentConfig& config);

struct ReportRow {
  std::string model;
  std::string feature;
  /// "true", "false" or "n/a".
  std::string trainable = "n/a";
  ClassificationReport metrics;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  /// Empty on success.
  std::string error;

  bool ok() const { return error.empty(); }
};

struct CellResult {
  std::string cell;
  ReportRow row;
  std::optional<nn::TrainHistory> history;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  /// Keyed by cell name.
  std::map<std::string, nn::TrainHistory> curves;
  nlohmann::json manifest;

  std::size_t failures() const;
};

class Pipeline;

/// load -> split -> preprocess -> featurize -> fit -> evaluate on the
/// validation split. Writes the cell's checkpoint under
/// <output_dir>/checkpoints when enabled. Module errors are rethrown with
/// the stage name prepended.
CellResult run_single(const ExperimentConfig& config, const CellSpec& cell);
/// Config must select exactly one model and one feature. Throws ConfigError.
CellResult run_single(const ExperimentConfig& config);

/// Runs every cell, recording per-cell failures instead of aborting.
ExperimentReport run_grid(const ExperimentConfig& config);

/// results.csv, results.md, timings.csv, curves_<cell>.csv per recurrent
/// run, manifest.json. Throws IoError.
void export_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// results.csv columns; wall time lives in timings.csv so this file stays
/// byte-identical across runs.
std::string render_results_csv(const ExperimentReport& report);
/// Aligned Markdown table with the published reference figures shown
/// beside the measured ones.
std::string render_results_markdown(const ExperimentReport& report);

/// Reads results.csv (and timings.csv when present) back into rows.
ExperimentReport read_report(const std::filesystem::path& dir);

}  // namespace deptext

#endif  // DEPTEXT_EXPERIMENT_HPP
