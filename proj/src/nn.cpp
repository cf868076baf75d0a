#include "deptext/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <iomanip>

#include "deptext/checkpoint.hpp"
#include "deptext/error.hpp"
#include "deptext/random.hpp"

namespace deptext::nn {
namespace {

constexpr double kProbClamp = 1e-12;

Matrix sigmoid(const Matrix& a) { return (1.0 / (1.0 + (-a.array()).exp())).matrix(); }

Matrix uniform_matrix(Rng& rng, Index rows, Index cols, double bound) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-bound, bound);
  }
  return m;
}

void check_dims(const char* what, Index got, Index want) {
  if (got != want) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected " + std::to_string(want) +
                                                  ", got " + std::to_string(got));
  }
}

// Per-timestep activations retained for backpropagation. For LSTM `gates`
// holds [i, f, o, g] after their nonlinearities; for GRU it holds [z, r, n].
struct Tape {
  std::vector<Matrix> x;      // I x B per step
  std::vector<Matrix> gates;  // kH x B per step
  std::vector<Matrix> h;      // H x B, h[0] is the initial state
  std::vector<Matrix> c;      // LSTM only, same indexing as h
  Matrix probs;               // 2 x B
};

std::vector<Matrix> assemble_inputs(const RnnModel& model, const SequenceBatch& batch) {
  const auto n = batch_size(batch);
  if (n == 0) throw Error(ErrorKind::EmptyBatch, "forward on an empty batch");
  std::vector<Matrix> steps;
  if (const auto* tokens = std::get_if<std::vector<IndexSeq>>(&batch)) {
    if (!model.has_embedding()) {
      throw Error(ErrorKind::InputModeMismatch, "token indices given to a model without an embedding");
    }
    const Matrix& table = model.embedding()->value;
    const auto len = (*tokens)[0].size();
    if (len == 0) throw Error(ErrorKind::EmptyBatch, "zero-length sequences");
    steps.assign(len, Matrix::Zero(table.cols(), static_cast<Index>(n)));
    for (std::size_t b = 0; b < n; ++b) {
      const auto& seq = (*tokens)[b];
      if (seq.size() != len) throw Error(ErrorKind::DimensionMismatch, "ragged token batch");
      for (std::size_t t = 0; t < len; ++t) {
        const int idx = seq[t];
        if (idx < 0 || idx >= table.rows()) {
          throw Error(ErrorKind::IndexOutOfRange, "token index " + std::to_string(idx));
        }
        if (idx != 0) steps[t].col(static_cast<Index>(b)) = table.row(idx).transpose();
      }
    }
    return steps;
  }
  const auto& dense = std::get<std::vector<Matrix>>(batch);
  if (model.has_embedding()) {
    throw Error(ErrorKind::InputModeMismatch, "dense sequences given to an embedding model");
  }
  const auto len = dense[0].rows();
  if (len == 0) throw Error(ErrorKind::EmptyBatch, "zero-length sequences");
  steps.assign(static_cast<std::size_t>(len), Matrix(model.input_dim(), static_cast<Index>(n)));
  for (std::size_t b = 0; b < n; ++b) {
    if (dense[b].rows() != len) throw Error(ErrorKind::DimensionMismatch, "ragged dense batch");
    check_dims("dense input width", dense[b].cols(), model.input_dim());
    for (Index t = 0; t < len; ++t) steps[static_cast<std::size_t>(t)].col(static_cast<Index>(b)) = dense[b].row(t).transpose();
  }
  return steps;
}

void lstm_gates(const LstmLayer& layer, const Matrix& x, const Matrix& h, Matrix& gates) {
  const Index H = layer.hidden_dim;
  gates.noalias() = layer.W.value * x;
  gates.noalias() += layer.U.value * h;
  gates.colwise() += layer.b.value.col(0);
  gates.topRows(3 * H) = sigmoid(gates.topRows(3 * H));
  gates.bottomRows(H) = gates.bottomRows(H).array().tanh().matrix();
}

void gru_gates(const GruLayer& layer, const Matrix& x, const Matrix& h, Matrix& gates) {
  const Index H = layer.hidden_dim;
  const auto& W = layer.W.value;
  const auto& U = layer.U.value;
  gates.resize(3 * H, x.cols());
  gates.topRows(2 * H).noalias() = W.topRows(2 * H) * x;
  gates.topRows(2 * H).noalias() += U.topRows(2 * H) * h;
  gates.topRows(2 * H).colwise() += layer.b.value.col(0).head(2 * H);
  gates.topRows(2 * H) = sigmoid(gates.topRows(2 * H));
  const Matrix rh = gates.middleRows(H, H).cwiseProduct(h);
  Matrix cand = W.bottomRows(H) * x;
  cand.noalias() += U.bottomRows(H) * rh;
  cand.colwise() += layer.b.value.col(0).tail(H);
  gates.bottomRows(H) = cand.array().tanh().matrix();
}

Matrix softmax_columns(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Index b = 0; b < logits.cols(); ++b) {
    const double m = logits.col(b).maxCoeff();
    p.col(b) = (logits.col(b).array() - m).exp().matrix();
    p.col(b) /= p.col(b).sum();
  }
  return p;
}

void run_forward(const RnnModel& model, const SequenceBatch& batch, Tape& tape) {
  tape.x = assemble_inputs(model, batch);
  const Index H = model.hidden_dim();
  const Index B = tape.x[0].cols();
  const auto T = tape.x.size();
  tape.gates.resize(T);
  tape.h.assign(1, Matrix::Zero(H, B));
  tape.c.clear();
  if (model.cell() == CellKind::Lstm) {
    const auto& layer = model.lstm();
    tape.c.assign(1, Matrix::Zero(H, B));
    for (std::size_t t = 0; t < T; ++t) {
      tape.gates[t].resize(4 * H, B);
      lstm_gates(layer, tape.x[t], tape.h[t], tape.gates[t]);
      const auto& g = tape.gates[t];
      Matrix c = g.middleRows(H, H).cwiseProduct(tape.c[t]) + g.topRows(H).cwiseProduct(g.bottomRows(H));
      tape.h.push_back(g.middleRows(2 * H, H).cwiseProduct(Matrix(c.array().tanh().matrix())));
      tape.c.push_back(std::move(c));
    }
  } else {
    const auto& layer = model.gru();
    for (std::size_t t = 0; t < T; ++t) {
      gru_gates(layer, tape.x[t], tape.h[t], tape.gates[t]);
      const auto& g = tape.gates[t];
      const auto z = g.topRows(H).array();
      tape.h.push_back(((1.0 - z) * tape.h[t].array() + z * g.bottomRows(H).array()).matrix());
    }
  }
  Matrix logits = model.head_weight().value * tape.h.back();
  logits.colwise() += model.head_bias().value.col(0);
  tape.probs = softmax_columns(logits);
}

void validate_labels(std::size_t n, std::span<const int> labels) {
  if (n == 0) throw Error(ErrorKind::EmptyBatch, "loss on an empty batch");
  if (labels.size() != n) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(n) + " inputs but " +
                                               std::to_string(labels.size()) + " labels");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error(ErrorKind::LabelOutOfRange, "label " + std::to_string(y));
  }
}

double mean_loss(const Matrix& probs, std::span<const int> labels) {
  double total = 0.0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    const double p = std::clamp(probs(labels[b], static_cast<Index>(b)), kProbClamp, 1.0 - kProbClamp);
    total -= std::log(p);
  }
  return total / static_cast<double>(labels.size());
}

void backward_lstm(LstmLayer& layer, const Tape& tape, Matrix dh, std::vector<Matrix>* dx) {
  const Index H = layer.hidden_dim;
  const auto T = tape.x.size();
  Matrix dc_next = Matrix::Zero(H, dh.cols());
  Matrix da(4 * H, dh.cols());
  for (std::size_t t = T; t-- > 0;) {
    const auto& g = tape.gates[t];
    const auto i = g.topRows(H).array();
    const auto f = g.middleRows(H, H).array();
    const auto o = g.middleRows(2 * H, H).array();
    const auto cand = g.bottomRows(H).array();
    const Eigen::ArrayXXd tanh_c = tape.c[t + 1].array().tanh();
    const Eigen::ArrayXXd dc = dc_next.array() + dh.array() * o * (1.0 - tanh_c.square());
    da.topRows(H) = (dc * cand * i * (1.0 - i)).matrix();
    da.middleRows(H, H) = (dc * tape.c[t].array() * f * (1.0 - f)).matrix();
    da.middleRows(2 * H, H) = (dh.array() * tanh_c * o * (1.0 - o)).matrix();
    da.bottomRows(H) = (dc * i * (1.0 - cand.square())).matrix();
    dc_next = (dc * f).matrix();

    layer.W.grad.noalias() += da * tape.x[t].transpose();
    layer.U.grad.noalias() += da * tape.h[t].transpose();
    layer.b.grad += da.rowwise().sum();
    if (dx) (*dx)[t].noalias() = layer.W.value.transpose() * da;
    dh.noalias() = layer.U.value.transpose() * da;
  }
}

void backward_gru(GruLayer& layer, const Tape& tape, Matrix dh, std::vector<Matrix>* dx) {
  const Index H = layer.hidden_dim;
  const auto T = tape.x.size();
  const auto& U = layer.U.value;
  Matrix da(3 * H, dh.cols());
  for (std::size_t t = T; t-- > 0;) {
    const auto& g = tape.gates[t];
    const auto& h_prev = tape.h[t];
    const auto z = g.topRows(H).array();
    const auto r = g.middleRows(H, H).array();
    const auto n = g.bottomRows(H).array();
    const Eigen::ArrayXXd dn = dh.array() * z;
    const Eigen::ArrayXXd dz = dh.array() * (n - h_prev.array());
    Matrix dh_prev = (dh.array() * (1.0 - z)).matrix();

    const Matrix da_n = (dn * (1.0 - n.square())).matrix();
    const Matrix rh = (r * h_prev.array()).matrix();
    const Matrix drh = U.bottomRows(H).transpose() * da_n;
    const Eigen::ArrayXXd dr = drh.array() * h_prev.array();
    dh_prev.array() += drh.array() * r;

    da.topRows(H) = (dz * z * (1.0 - z)).matrix();
    da.middleRows(H, H) = (dr * r * (1.0 - r)).matrix();
    da.bottomRows(H) = da_n;

    layer.W.grad.noalias() += da * tape.x[t].transpose();
    layer.U.grad.topRows(2 * H).noalias() += da.topRows(2 * H) * h_prev.transpose();
    layer.U.grad.bottomRows(H).noalias() += da_n * rh.transpose();
    layer.b.grad += da.rowwise().sum();
    if (dx) (*dx)[t].noalias() = layer.W.value.transpose() * da;
    dh_prev.noalias() += U.topRows(2 * H).transpose() * da.topRows(2 * H);
    dh = std::move(dh_prev);
  }
}

}  // namespace

Parameter::Parameter(std::string name_, Matrix init, bool trainable_)
    : name(std::move(name_)),
      value(std::move(init)),
      grad(Matrix::Zero(value.rows(), value.cols())),
      rms_cache(Matrix::Zero(value.rows(), value.cols())),
      trainable(trainable_) {}

void Parameter::zero_grad() {
  grad.setZero();
  has_grad = false;
}

std::string_view cell_name(CellKind kind) { return kind == CellKind::Lstm ? "lstm" : "gru"; }

CellKind parse_cell(std::string_view name) {
  if (name == "lstm") return CellKind::Lstm;
  if (name == "gru") return CellKind::Gru;
  throw Error(ErrorKind::InvalidArgument, "unknown cell '" + std::string(name) + "'");
}

LstmState lstm_cell_step(const LstmLayer& layer, const Eigen::Ref<const Matrix>& x,
                         const Eigen::Ref<const Matrix>& h, const Eigen::Ref<const Matrix>& c) {
  check_dims("lstm x rows", x.rows(), layer.input_dim);
  check_dims("lstm h rows", h.rows(), layer.hidden_dim);
  check_dims("lstm c rows", c.rows(), layer.hidden_dim);
  check_dims("lstm h cols", h.cols(), x.cols());
  check_dims("lstm c cols", c.cols(), x.cols());
  const Index H = layer.hidden_dim;
  Matrix gates(4 * H, x.cols());
  lstm_gates(layer, x, h, gates);
  LstmState next;
  next.c = gates.middleRows(H, H).cwiseProduct(c) + gates.topRows(H).cwiseProduct(gates.bottomRows(H));
  next.h = gates.middleRows(2 * H, H).cwiseProduct(Matrix(next.c.array().tanh().matrix()));
  return next;
}

Matrix gru_cell_step(const GruLayer& layer, const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& h) {
  check_dims("gru x rows", x.rows(), layer.input_dim);
  check_dims("gru h rows", h.rows(), layer.hidden_dim);
  check_dims("gru h cols", h.cols(), x.cols());
  const Index H = layer.hidden_dim;
  Matrix gates;
  gru_gates(layer, x, h, gates);
  const auto z = gates.topRows(H).array();
  return ((1.0 - z) * h.array() + z * gates.bottomRows(H).array()).matrix();
}

std::size_t batch_size(const SequenceBatch& batch) {
  return std::visit([](const auto& v) { return v.size(); }, batch);
}

SequenceBatch gather(const SequenceBatch& batch, std::span<const std::size_t> rows) {
  return std::visit(
      [&](const auto& v) -> SequenceBatch {
        std::remove_cvref_t<decltype(v)> out;
        out.reserve(rows.size());
        for (auto r : rows) out.push_back(v.at(r));
        return out;
      },
      batch);
}

RnnModel::RnnModel(const RnnConfig& config) : config_(config) {
  if (config_.use_embedding) {
    if (config_.vocab_size < 1 || config_.embedding_dim < 1) {
      throw Error(ErrorKind::InvalidArgument, "embedding needs vocab_size and embedding_dim >= 1");
    }
    SkipGramConfig sg;
    sg.dim = static_cast<int>(config_.embedding_dim);
    sg.seed = derive_seed(config_.seed, "embedding");
    init(initial_embeddings(config_.vocab_size, sg));
  } else {
    init(std::nullopt);
  }
}

RnnModel::RnnModel(const RnnConfig& config, const EmbeddingMatrix& embedding) : config_(config) {
  config_.use_embedding = true;
  config_.vocab_size = embedding.vocab_size();
  config_.embedding_dim = embedding.dim();
  init(embedding);
}

Index RnnModel::input_dim() const { return has_embedding() ? config_.embedding_dim : config_.input_dim; }

void RnnModel::init(std::optional<EmbeddingMatrix> embedding) {
  const Index H = config_.hidden_dim;
  if (H < 1) throw Error(ErrorKind::InvalidArgument, "hidden_dim must be >= 1");
  if (embedding) {
    embedding->rows.row(0).setZero();
    embedding_.emplace("embedding", std::move(embedding->rows), config_.embedding_trainable);
  }
  const Index I = input_dim();
  if (I < 1) throw Error(ErrorKind::InvalidArgument, "input_dim must be >= 1");

  Rng rng(config_.seed);
  const Index gates = config_.cell == CellKind::Lstm ? 4 : 3;
  Parameter W("rnn.W", uniform_matrix(rng, gates * H, I, 1.0 / std::sqrt(static_cast<double>(I))));
  Parameter U("rnn.U", uniform_matrix(rng, gates * H, H, 1.0 / std::sqrt(static_cast<double>(H))));
  Parameter b("rnn.b", Matrix::Zero(gates * H, 1));
  if (config_.cell == CellKind::Lstm) {
    b.value.middleRows(H, H).setConstant(config_.forget_bias);
    recurrent_ = LstmLayer{I, H, std::move(W), std::move(U), std::move(b)};
  } else {
    // Update gate rows first; keep rate 1 - z starts at sigmoid(forget_bias).
    b.value.topRows(H).setConstant(-config_.forget_bias);
    recurrent_ = GruLayer{I, H, std::move(W), std::move(U), std::move(b)};
  }
  head_W_ = Parameter("head.W", uniform_matrix(rng, 2, H, 1.0 / std::sqrt(static_cast<double>(H))));
  head_b_ = Parameter("head.b", Matrix::Zero(2, 1));
}

std::vector<Parameter*> RnnModel::parameters() {
  std::vector<Parameter*> out;
  if (embedding_) out.push_back(&*embedding_);
  std::visit(
      [&](auto& layer) {
        out.push_back(&layer.W);
        out.push_back(&layer.U);
        out.push_back(&layer.b);
      },
      recurrent_);
  out.push_back(&head_W_);
  out.push_back(&head_b_);
  return out;
}

std::vector<const Parameter*> RnnModel::parameters() const {
  auto mut = const_cast<RnnModel*>(this)->parameters();
  return {mut.begin(), mut.end()};
}

Matrix forward(const RnnModel& model, const SequenceBatch& batch) {
  Tape tape;
  run_forward(model, batch, tape);
  return tape.probs.transpose();
}

double loss(const RnnModel& model, const SequenceBatch& batch, std::span<const int> labels) {
  validate_labels(batch_size(batch), labels);
  Tape tape;
  run_forward(model, batch, tape);
  return mean_loss(tape.probs, labels);
}

double loss_and_gradients(RnnModel& model, const SequenceBatch& batch, std::span<const int> labels) {
  const auto n = batch_size(batch);
  validate_labels(n, labels);
  Tape tape;
  run_forward(model, batch, tape);
  const double value = mean_loss(tape.probs, labels);

  for (auto* p : model.parameters()) p->zero_grad();

  // d(loss)/d(logits); zero where the clamp is active.
  Matrix dlogits = tape.probs;
  for (std::size_t b = 0; b < n; ++b) {
    const auto col = static_cast<Index>(b);
    const double p = tape.probs(labels[b], col);
    if (p < kProbClamp || p > 1.0 - kProbClamp) {
      dlogits.col(col).setZero();
    } else {
      dlogits(labels[b], col) -= 1.0;
    }
  }
  dlogits /= static_cast<double>(n);

  model.head_weight().grad.noalias() = dlogits * tape.h.back().transpose();
  model.head_bias().grad = dlogits.rowwise().sum();
  Matrix dh = model.head_weight().value.transpose() * dlogits;

  Parameter* emb = model.embedding();
  const bool emb_grad = emb && emb->trainable;
  std::vector<Matrix> dx;
  if (emb_grad) dx.assign(tape.x.size(), Matrix());

  if (model.cell() == CellKind::Lstm) {
    backward_lstm(model.lstm(), tape, std::move(dh), emb_grad ? &dx : nullptr);
  } else {
    backward_gru(model.gru(), tape, std::move(dh), emb_grad ? &dx : nullptr);
  }

  if (emb_grad) {
    const auto& tokens = std::get<std::vector<IndexSeq>>(batch);
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t t = 0; t < tokens[b].size(); ++t) {
        const int idx = tokens[b][t];
        if (idx != 0) emb->grad.row(idx) += dx[t].col(static_cast<Index>(b)).transpose();
      }
    }
  }
  for (auto* p : model.parameters()) {
    if (p->trainable) p->has_grad = true;
  }
  return value;
}

void rmsprop_step(std::span<Parameter* const> params, const RmsPropConfig& config) {
  if (!(config.lr > 0.0) || !(config.rho >= 0.0 && config.rho < 1.0) || !(config.epsilon > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "RMSprop needs lr > 0, 0 <= rho < 1, epsilon > 0");
  }
  for (const auto* p : params) {
    if (p->trainable && !p->has_grad) {
      throw Error(ErrorKind::UninitializedGradient, "parameter '" + p->name + "' has no gradient");
    }
  }
  for (auto* p : params) {
    if (!p->trainable) continue;
    p->rms_cache = config.rho * p->rms_cache + (1.0 - config.rho) * p->grad.cwiseAbs2();
    p->value.array() -= config.lr * p->grad.array() / (p->rms_cache.array().sqrt() + config.epsilon);
  }
}

void rmsprop_step(RnnModel& model) {
  const auto params = model.parameters();
  rmsprop_step(params, model.config().optimizer);
}

std::vector<int> predict(const RnnModel& model, const SequenceBatch& batch) {
  const Matrix probs = forward(model, batch);
  std::vector<int> labels(static_cast<std::size_t>(probs.rows()));
  for (Index b = 0; b < probs.rows(); ++b) labels[static_cast<std::size_t>(b)] = probs(b, 1) > probs(b, 0) ? 1 : 0;
  return labels;
}

namespace {

double accuracy_on(const RnnModel& model, const SequenceDataset& data) {
  constexpr std::size_t kChunk = 256;
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < data.size(); start += kChunk) {
    rows.resize(std::min(kChunk, data.size() - start));
    std::iota(rows.begin(), rows.end(), start);
    const auto pred = predict(model, gather(data.inputs, rows));
    for (std::size_t i = 0; i < rows.size(); ++i) correct += pred[i] == data.labels[rows[i]];
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace

TrainHistory fit(RnnModel& model, const SequenceDataset& train, const SequenceDataset& val,
                 const FitConfig& config) {
  if (train.size() == 0) throw Error(ErrorKind::EmptyDataset, "empty training set");
  if (batch_size(train.inputs) != train.size() || batch_size(val.inputs) != val.size()) {
    throw Error(ErrorKind::LengthMismatch, "dataset inputs and labels differ in length");
  }
  if (config.epochs < 1 || config.batch_size < 1) {
    throw Error(ErrorKind::InvalidArgument, "epochs and batch_size must be >= 1");
  }
  Rng rng(config.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  TrainHistory history;
  std::vector<int> labels;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const auto len = std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), order.size() - start);
      const std::span<const std::size_t> rows(order.data() + start, len);
      labels.clear();
      for (auto r : rows) labels.push_back(train.labels[r]);
      loss_sum += loss_and_gradients(model, gather(train.inputs, rows), labels) * static_cast<double>(len);
      rmsprop_step(model);
    }
    history.push_back({epoch, loss_sum / static_cast<double>(train.size()), accuracy_on(model, train),
                       accuracy_on(model, val)});
  }
  return history;
}

void write_history_csv(const TrainHistory& history, std::ostream& out) {
  out << "epoch,train_loss,train_acc,val_acc\n";
  out << std::setprecision(17);
  for (const auto& r : history) {
    out << r.epoch << ',' << r.train_loss << ',' << r.train_accuracy << ',' << r.val_accuracy << '\n';
  }
}

GradCheckResult check_gradients(RnnModel& model, const SequenceBatch& batch, std::span<const int> labels,
                                double step, double abs_floor) {
  loss_and_gradients(model, batch, labels);
  GradCheckResult result;
  for (auto* p : model.parameters()) {
    if (!p->trainable) continue;
    GradCheckEntry entry{p->name, 0.0, 0};
    const Matrix analytic = p->grad;
    for (Index r = 0; r < p->value.rows(); ++r) {
      for (Index c = 0; c < p->value.cols(); ++c) {
        const double saved = p->value(r, c);
        p->value(r, c) = saved + step;
        const double up = loss(model, batch, labels);
        p->value(r, c) = saved - step;
        const double down = loss(model, batch, labels);
        p->value(r, c) = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double a = analytic(r, c);
        const double scale = std::max({std::abs(a), std::abs(numeric), abs_floor});
        const double rel = std::abs(a - numeric) / scale;
        entry.max_rel_error = std::max(entry.max_rel_error, rel);
        ++entry.checked;
      }
    }
    result.max_rel_error = std::max(result.max_rel_error, entry.max_rel_error);
    result.entries.push_back(std::move(entry));
  }
  return result;
}

std::vector<GradSuiteCase> gradient_suite(std::uint64_t seed) {
  constexpr Index kInput = 5;
  constexpr Index kHidden = 7;
  constexpr int kVocab = 10;
  constexpr std::size_t kSteps = 4;
  constexpr std::size_t kBatch = 3;
  const std::vector<int> labels = {0, 1, 1};
  Rng rng(derive_seed(seed, "gradient-suite"));

  std::vector<Matrix> dense;
  for (std::size_t b = 0; b < kBatch; ++b) {
    Matrix x(static_cast<Index>(kSteps), kInput);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1.0, 1.0);
    dense.push_back(std::move(x));
  }
  // The trailing 0 exercises a padding step.
  std::vector<IndexSeq> indices;
  for (std::size_t b = 0; b < kBatch; ++b) {
    IndexSeq seq;
    for (std::size_t t = 0; t + 1 < kSteps; ++t) seq.push_back(1 + static_cast<int>(rng.below(kVocab - 1)));
    seq.push_back(0);
    indices.push_back(std::move(seq));
  }

  std::vector<GradSuiteCase> out;
  for (CellKind cell : {CellKind::Lstm, CellKind::Gru}) {
    for (int variant = 0; variant < 3; ++variant) {
      RnnConfig cfg;
      cfg.cell = cell;
      cfg.hidden_dim = kHidden;
      cfg.seed = derive_seed(seed, std::string(cell_name(cell)) + std::to_string(variant));
      std::string name(cell_name(cell));
      SequenceBatch batch;
      if (variant == 0) {
        cfg.input_dim = kInput;
        name += "/dense";
        batch = dense;
      } else {
        cfg.use_embedding = true;
        cfg.vocab_size = kVocab;
        cfg.embedding_dim = kInput;
        cfg.embedding_trainable = variant == 1;
        name += variant == 1 ? "/embedding-trainable" : "/embedding-frozen";
        batch = indices;
      }
      RnnModel model(cfg);
      // Unit-scale embedding rows, like the dense inputs; the default skip-gram
      // scale leaves recurrent gradients near the finite-difference noise floor.
      if (auto* e = model.embedding()) {
        for (Index r = 1; r < e->value.rows(); ++r) {
          for (Index c = 0; c < e->value.cols(); ++c) e->value(r, c) = rng.uniform(-1.0, 1.0);
        }
      }
      out.push_back({name, check_gradients(model, batch, labels)});
    }
  }
  return out;
}

void save_checkpoint(const RnnModel& model, const std::filesystem::path& stem) {
  const auto& cfg = model.config();
  nlohmann::json manifest;
  manifest["kind"] = "rnn";
  manifest["cell"] = cell_name(cfg.cell);
  manifest["input_dim"] = model.input_dim();
  manifest["hidden_dim"] = cfg.hidden_dim;
  manifest["use_embedding"] = model.has_embedding();
  manifest["vocab_size"] = cfg.vocab_size;
  manifest["embedding_dim"] = cfg.embedding_dim;
  manifest["embedding_trainable"] = cfg.embedding_trainable;
  manifest["forget_bias"] = cfg.forget_bias;
  manifest["seed"] = cfg.seed;
  manifest["optimizer"] = {{"name", "rmsprop"},
                           {"lr", cfg.optimizer.lr},
                           {"rho", cfg.optimizer.rho},
                           {"epsilon", cfg.optimizer.epsilon}};
  std::vector<Blob> blobs;
  nlohmann::json trainable = nlohmann::json::object();
  for (const auto* p : model.parameters()) {
    blobs.push_back({p->name, p->value});
    blobs.push_back({p->name + ".rms_cache", p->rms_cache});
    trainable[p->name] = p->trainable;
  }
  manifest["trainable"] = trainable;
  write_checkpoint(stem, manifest, blobs);
}

RnnModel load_checkpoint(const std::filesystem::path& stem) {
  const Checkpoint ck = read_checkpoint(stem);
  const auto& m = ck.manifest;
  if (m.value("kind", "") != "rnn") throw Error(ErrorKind::IoError, "checkpoint is not an RNN model");
  RnnConfig cfg;
  cfg.cell = parse_cell(m.at("cell").get<std::string>());
  cfg.input_dim = m.at("input_dim").get<Index>();
  cfg.hidden_dim = m.at("hidden_dim").get<Index>();
  cfg.use_embedding = m.at("use_embedding").get<bool>();
  cfg.vocab_size = m.at("vocab_size").get<int>();
  cfg.embedding_dim = m.at("embedding_dim").get<Index>();
  cfg.embedding_trainable = m.at("embedding_trainable").get<bool>();
  cfg.forget_bias = m.at("forget_bias").get<double>();
  cfg.seed = m.at("seed").get<std::uint64_t>();
  cfg.optimizer.lr = m.at("optimizer").at("lr").get<double>();
  cfg.optimizer.rho = m.at("optimizer").at("rho").get<double>();
  cfg.optimizer.epsilon = m.at("optimizer").at("epsilon").get<double>();
  RnnModel model = cfg.use_embedding ? RnnModel(cfg, EmbeddingMatrix{ck.blob("embedding")}) : RnnModel(cfg);
  for (auto* p : model.parameters()) {
    const Matrix& value = ck.blob(p->name);
    if (value.rows() != p->value.rows() || value.cols() != p->value.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "checkpoint blob '" + p->name + "' has the wrong shape");
    }
    p->value = value;
    p->rms_cache = ck.blob(p->name + ".rms_cache");
  }
  return model;
}

}  // namespace deptext::nn
