#ifndef DEPTEXT_NN_HPP
#define DEPTEXT_NN_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "deptext/types.hpp"
#include "deptext/word2vec.hpp"

namespace deptext::nn {

/// A trainable tensor with its gradient and RMSprop accumulator.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix rms_cache;
  bool trainable = true;
  bool has_grad = false;

  Parameter() = default;
  Parameter(std::string name, Matrix init, bool trainable = true);

  void zero_grad();
};

enum class CellKind { Lstm, Gru };

std::string_view cell_name(CellKind kind);
CellKind parse_cell(std::string_view name);

/// Gate blocks are stacked row-wise in the order [input, forget, output,
/// candidate]: W is 4H x I, U is 4H x H, b is 4H x 1.
struct LstmLayer {
  Index input_dim = 0;
  Index hidden_dim = 0;
  Parameter W;
  Parameter U;
  Parameter b;
};

/// Gate blocks stacked as [update z, reset r, candidate]: W is 3H x I,
/// U is 3H x H, b is 3H x 1. h' = (1 - z) * h + z * candidate.
struct GruLayer {
  Index input_dim = 0;
  Index hidden_dim = 0;
  Parameter W;
  Parameter U;
  Parameter b;
};

struct LstmState {
  Matrix h;
  Matrix c;
};

/// One LSTM step. Columns of x, h and c are batch entries; a single
/// example is a one-column matrix. Throws DimensionMismatch.
LstmState lstm_cell_step(const LstmLayer& layer, const Eigen::Ref<const Matrix>& x,
                         const Eigen::Ref<const Matrix>& h, const Eigen::Ref<const Matrix>& c);

/// One GRU step; see lstm_cell_step for the layout.
Matrix gru_cell_step(const GruLayer& layer, const Eigen::Ref<const Matrix>& x,
                     const Eigen::Ref<const Matrix>& h);

struct RmsPropConfig {
  double lr = 0.001;
  double rho = 0.9;
  double epsilon = 1e-8;
};

struct RnnConfig {
  CellKind cell = CellKind::Lstm;
  /// Ignored when an embedding is used; the embedding width is the input.
  Index input_dim = 0;
  Index hidden_dim = 300;
  bool use_embedding = false;
  int vocab_size = 0;
  Index embedding_dim = 300;
  bool embedding_trainable = true;
  double forget_bias = 1.0;
  std::uint64_t seed = 0;
  RmsPropConfig optimizer;
};

/// Token-index sequences (embedding models) or dense T x input_dim
/// sequences, one entry per example.
using SequenceBatch = std::variant<std::vector<IndexSeq>, std::vector<Matrix>>;

std::size_t batch_size(const SequenceBatch& batch);
SequenceBatch gather(const SequenceBatch& batch, std::span<const std::size_t> rows);

struct SequenceDataset {
  SequenceBatch inputs;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

/// Optional embedding, one recurrent layer, and a two-way softmax head on
/// the final hidden state.
class RnnModel {
 public:
  /// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero,
  /// LSTM forget bias set to config.forget_bias, GRU update bias to its
  /// negation so both cells start with the same keep rate. A requested
  /// embedding is drawn like a skip-gram initial matrix.
  explicit RnnModel(const RnnConfig& config);
  /// Embedding initialized from a trained matrix; its shape overrides
  /// vocab_size and embedding_dim.
  RnnModel(const RnnConfig& config, const EmbeddingMatrix& embedding);

  const RnnConfig& config() const { return config_; }
  CellKind cell() const { return config_.cell; }
  bool has_embedding() const { return embedding_.has_value(); }
  Index input_dim() const;
  Index hidden_dim() const { return config_.hidden_dim; }

  const Parameter* embedding() const { return embedding_ ? &*embedding_ : nullptr; }
  Parameter* embedding() { return embedding_ ? &*embedding_ : nullptr; }
  const LstmLayer& lstm() const { return std::get<LstmLayer>(recurrent_); }
  const GruLayer& gru() const { return std::get<GruLayer>(recurrent_); }
  LstmLayer& lstm() { return std::get<LstmLayer>(recurrent_); }
  GruLayer& gru() { return std::get<GruLayer>(recurrent_); }
  const Parameter& head_weight() const { return head_W_; }
  const Parameter& head_bias() const { return head_b_; }
  Parameter& head_weight() { return head_W_; }
  Parameter& head_bias() { return head_b_; }

  /// Every parameter, in a fixed order: embedding (if any), W, U, b, head W,
  /// head b.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

 private:
  void init(std::optional<EmbeddingMatrix> embedding);

  RnnConfig config_;
  std::optional<Parameter> embedding_;
  std::variant<LstmLayer, GruLayer> recurrent_;
  Parameter head_W_;
  Parameter head_b_;
};

/// Class probabilities, one row per example, columns {NotDepressed,
/// Depressed}. Padding index 0 always embeds to the zero vector and is
/// processed like any other step. Throws InputModeMismatch,
/// DimensionMismatch, IndexOutOfRange, EmptyBatch.
Matrix forward(const RnnModel& model, const SequenceBatch& batch);

/// Mean cross-entropy with probabilities clamped to [1e-12, 1 - 1e-12].
/// Fills the grad of every trainable parameter by backpropagation through
/// time; a frozen embedding gets no gradient. Row 0 of the embedding never
/// receives gradient. Throws LengthMismatch, LabelOutOfRange, EmptyBatch.
double loss_and_gradients(RnnModel& model, const SequenceBatch& batch, std::span<const int> labels);

/// Loss only, no gradients.
double loss(const RnnModel& model, const SequenceBatch& batch, std::span<const int> labels);

/// cache <- rho * cache + (1 - rho) * g^2; value <- value - lr * g / (sqrt(cache) + eps).
/// Frozen parameters are skipped. Throws UninitializedGradient when a
/// trainable parameter has no gradient, InvalidArgument for bad settings.
void rmsprop_step(std::span<Parameter* const> params, const RmsPropConfig& config);
void rmsprop_step(RnnModel& model);

/// Argmax of forward(); an exact tie resolves to label 0.
std::vector<int> predict(const RnnModel& model, const SequenceBatch& batch);

struct FitConfig {
  int epochs = 50;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;

  bool operator==(const EpochRecord&) const = default;
};

using TrainHistory = std::vector<EpochRecord>;

/// Mini-batch RMSprop with a seeded shuffle each epoch. train_loss is the
/// example-weighted mean of the batch losses seen during the epoch; the
/// accuracies are measured after the epoch. An empty validation set
/// records accuracy 0. Throws EmptyDataset.
TrainHistory fit(RnnModel& model, const SequenceDataset& train, const SequenceDataset& val,
                 const FitConfig& config);

/// "epoch,train_loss,train_acc,val_acc"
void write_history_csv(const TrainHistory& history, std::ostream& out);

struct GradCheckEntry {
  std::string parameter;
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

struct GradCheckResult {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
};

/// Compares analytic gradients against central finite differences of the
/// loss for every entry of every trainable parameter. Relative error is
/// |a - n| / max(|a|, |n|, abs_floor); the floor keeps near-zero gradients
/// from being judged below the round-off of the difference quotient
/// (about 1e-11 at step 1e-5).
GradCheckResult check_gradients(RnnModel& model, const SequenceBatch& batch, std::span<const int> labels,
                                double step = 1e-5, double abs_floor = 1e-6);

struct GradSuiteCase {
  std::string name;
  GradCheckResult result;
};

/// Gradient checks for LSTM and GRU with input width 5, hidden width 7,
/// four steps and three examples: dense inputs, trainable embedding and
/// frozen embedding.
std::vector<GradSuiteCase> gradient_suite(std::uint64_t seed = 0);

/// <stem>.bin holds the parameter blobs, <stem>.json the manifest.
void save_checkpoint(const RnnModel& model, const std::filesystem::path& stem);
RnnModel load_checkpoint(const std::filesystem::path& stem);

}  // namespace deptext::nn

#endif  // DEPTEXT_NN_HPP
