#include "deptext/classical.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "deptext/checkpoint.hpp"
#include "deptext/error.hpp"
#include "deptext/random.hpp"

namespace deptext {
namespace {

constexpr double kVarianceFloorScale = 1e-9;

std::array<std::size_t, 2> class_counts(std::span<const int> labels, std::size_t n_rows) {
  if (n_rows == 0) throw Error(ErrorKind::EmptyInput, "no training samples");
  if (labels.size() != n_rows) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(n_rows) + " samples but " +
                                               std::to_string(labels.size()) + " labels");
  }
  std::array<std::size_t, 2> counts{};
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error(ErrorKind::LabelOutOfRange, "label " + std::to_string(y));
    ++counts[static_cast<std::size_t>(y)];
  }
  if (counts[0] == 0 || counts[1] == 0) throw Error(ErrorKind::SingleClass, "training labels hold one class");
  return counts;
}

void set_priors(NbModel& model, const std::array<std::size_t, 2>& counts) {
  const double n = static_cast<double>(counts[0] + counts[1]);
  model.priors = {static_cast<double>(counts[0]) / n, static_cast<double>(counts[1]) / n};
}

void finish_multinomial(NbModel& model, Matrix mass) {
  mass.array() += model.alpha;
  model.log_likelihood.resize(2, mass.cols());
  for (Index c = 0; c < 2; ++c) {
    model.log_likelihood.row(c) = (mass.row(c).array() / mass.row(c).sum()).log().matrix();
  }
}

NbPrediction decide(const std::array<double, 2>& log_joint) {
  NbPrediction out;
  out.label = log_joint[1] > log_joint[0] ? 1 : 0;
  const double m = std::max(log_joint[0], log_joint[1]);
  const double lse = m + std::log(std::exp(log_joint[0] - m) + std::exp(log_joint[1] - m));
  out.log_posterior = {log_joint[0] - lse, log_joint[1] - lse};
  return out;
}

void check_dim(const NbModel& model, Index got) {
  if (got != model.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(model.dim()) + " features, got " +
                                                  std::to_string(got));
  }
}

}  // namespace

Index NbModel::dim() const { return kind == NbKind::Multinomial ? log_likelihood.cols() : mean.cols(); }

NbModel fit_nb(NbKind kind, const Eigen::Ref<const Matrix>& features, std::span<const int> labels, double alpha) {
  const auto counts = class_counts(labels, static_cast<std::size_t>(features.rows()));
  if (!features.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite feature value");
  NbModel model;
  model.kind = kind;
  model.alpha = alpha;
  set_priors(model, counts);
  const Index d = features.cols();

  if (kind == NbKind::Multinomial) {
    if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
    if ((features.array() < 0.0).any()) throw Error(ErrorKind::NegativeFeature, "multinomial NB on negative input");
    Matrix mass = Matrix::Zero(2, d);
    for (Index i = 0; i < features.rows(); ++i) mass.row(labels[static_cast<std::size_t>(i)]) += features.row(i);
    finish_multinomial(model, std::move(mass));
    return model;
  }

  const RowVector overall_mean = features.colwise().mean();
  const double max_var =
      (features.rowwise() - overall_mean).array().square().colwise().mean().maxCoeff();
  model.variance_floor = max_var > 0.0 ? kVarianceFloorScale * max_var : kVarianceFloorScale;
  model.mean = Matrix::Zero(2, d);
  model.variance = Matrix::Zero(2, d);
  for (Index i = 0; i < features.rows(); ++i) model.mean.row(labels[static_cast<std::size_t>(i)]) += features.row(i);
  for (Index c = 0; c < 2; ++c) model.mean.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  for (Index i = 0; i < features.rows(); ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    model.variance.row(c) += (features.row(i) - model.mean.row(c)).cwiseAbs2();
  }
  for (Index c = 0; c < 2; ++c) {
    model.variance.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    model.variance.row(c).array() += model.variance_floor;
  }
  return model;
}

NbModel fit_nb(NbKind kind, std::span<const SparseVector> features, std::span<const int> labels, double alpha) {
  if (kind != NbKind::Multinomial) {
    throw Error(ErrorKind::InvalidArgument, "Gaussian NB requires dense features");
  }
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
  const auto counts = class_counts(labels, features.size());
  const Index d = features[0].size();
  NbModel model;
  model.kind = kind;
  model.alpha = alpha;
  set_priors(model, counts);
  Matrix mass = Matrix::Zero(2, d);
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != d) throw Error(ErrorKind::DimensionMismatch, "ragged sparse features");
    for (SparseVector::InnerIterator it(features[i]); it; ++it) {
      if (it.value() < 0.0) throw Error(ErrorKind::NegativeFeature, "multinomial NB on negative input");
      mass(labels[i], it.index()) += it.value();
    }
  }
  finish_multinomial(model, std::move(mass));
  return model;
}

NbPrediction predict_nb(const NbModel& model, const Eigen::Ref<const Vector>& x) {
  check_dim(model, x.size());
  std::array<double, 2> log_joint{};
  for (Index c = 0; c < 2; ++c) {
    double s = std::log(model.priors[static_cast<std::size_t>(c)]);
    if (model.kind == NbKind::Multinomial) {
      s += model.log_likelihood.row(c).dot(x.transpose());
    } else {
      const auto var = model.variance.row(c).array();
      const auto diff = x.transpose().array() - model.mean.row(c).array();
      s += (-0.5 * (2.0 * std::numbers::pi * var).log() - diff.square() / (2.0 * var)).sum();
    }
    log_joint[static_cast<std::size_t>(c)] = s;
  }
  return decide(log_joint);
}

NbPrediction predict_nb(const NbModel& model, const SparseVector& x) {
  if (model.kind != NbKind::Multinomial) return predict_nb(model, Vector(x));
  check_dim(model, x.size());
  std::array<double, 2> log_joint{std::log(model.priors[0]), std::log(model.priors[1])};
  for (SparseVector::InnerIterator it(x); it; ++it) {
    log_joint[0] += model.log_likelihood(0, it.index()) * it.value();
    log_joint[1] += model.log_likelihood(1, it.index()) * it.value();
  }
  return decide(log_joint);
}

double svm_objective(const SvmModel& model, const Eigen::Ref<const Matrix>& features, std::span<const int> labels) {
  double hinge = 0.0;
  for (Index i = 0; i < features.rows(); ++i) {
    const double y = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - y * (features.row(i).dot(model.weights.transpose()) + model.bias));
  }
  return 0.5 * model.lambda * (model.weights.squaredNorm() + model.bias * model.bias) + hinge / static_cast<double>(features.rows());
}

SvmModel fit_svm(const Eigen::Ref<const Matrix>& features, std::span<const int> labels, const SvmConfig& config,
                 SvmTrace* trace) {
  class_counts(labels, static_cast<std::size_t>(features.rows()));
  if (!(config.lambda > 0.0) || config.epochs < 1) {
    throw Error(ErrorKind::InvalidArgument, "SVM needs lambda > 0 and epochs >= 1");
  }
  if (!features.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite feature value");

  SvmModel model{Vector::Zero(features.cols()), 0.0, config.lambda};
  Rng rng(config.seed);
  std::vector<std::size_t> order(static_cast<std::size_t>(features.rows()));
  std::iota(order.begin(), order.end(), 0);
  if (trace) trace->epoch_objective.clear();
  double t = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (auto i : order) {
      t += 1.0;
      const double eta = 1.0 / (config.lambda * t);
      const auto x = features.row(static_cast<Index>(i));
      const double y = labels[i] == 1 ? 1.0 : -1.0;
      const double margin = y * (x.dot(model.weights.transpose()) + model.bias);
      // The bias is the weight of a constant feature and shrinks with w.
      // Left unshrunk, the huge early steps would fix it for good.
      model.weights *= 1.0 - eta * config.lambda;
      model.bias *= 1.0 - eta * config.lambda;
      if (margin < 1.0) {
        model.weights += eta * y * x.transpose();
        model.bias += eta * y;
      }
    }
    if (trace) trace->epoch_objective.push_back(svm_objective(model, features, labels));
  }
  return model;
}

int predict_svm(const SvmModel& model, const Eigen::Ref<const Vector>& x) {
  if (x.size() != model.weights.size()) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(model.weights.size()) +
                                                  " features, got " + std::to_string(x.size()));
  }
  return model.weights.dot(x) + model.bias > 0.0 ? 1 : 0;
}

std::vector<int> predict_svm_rows(const SvmModel& model, const Eigen::Ref<const Matrix>& features) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(features.rows()));
  for (Index i = 0; i < features.rows(); ++i) out.push_back(predict_svm(model, features.row(i).transpose()));
  return out;
}

void save_nb(const NbModel& model, const std::filesystem::path& stem) {
  nlohmann::json manifest;
  manifest["kind"] = "nb";
  manifest["variant"] = model.kind == NbKind::Multinomial ? "multinomial" : "gaussian";
  manifest["alpha"] = model.alpha;
  manifest["variance_floor"] = model.variance_floor;
  manifest["dim"] = model.dim();
  Matrix priors(2, 1);
  priors << model.priors[0], model.priors[1];
  std::vector<Blob> blobs{{"priors", priors}};
  if (model.kind == NbKind::Multinomial) {
    blobs.push_back({"log_likelihood", model.log_likelihood});
  } else {
    blobs.push_back({"mean", model.mean});
    blobs.push_back({"variance", model.variance});
  }
  write_checkpoint(stem, manifest, blobs);
}

NbModel load_nb(const std::filesystem::path& stem) {
  const Checkpoint ck = read_checkpoint(stem);
  if (ck.manifest.value("kind", "") != "nb") throw Error(ErrorKind::IoError, "checkpoint is not an NB model");
  NbModel model;
  model.kind = ck.manifest.at("variant") == "multinomial" ? NbKind::Multinomial : NbKind::Gaussian;
  model.alpha = ck.manifest.at("alpha").get<double>();
  model.variance_floor = ck.manifest.at("variance_floor").get<double>();
  const Matrix& priors = ck.blob("priors");
  model.priors = {priors(0, 0), priors(1, 0)};
  if (model.kind == NbKind::Multinomial) {
    model.log_likelihood = ck.blob("log_likelihood");
  } else {
    model.mean = ck.blob("mean");
    model.variance = ck.blob("variance");
  }
  return model;
}

void save_svm(const SvmModel& model, const SvmConfig& config, const std::filesystem::path& stem) {
  nlohmann::json manifest;
  manifest["kind"] = "svm";
  manifest["lambda"] = model.lambda;
  manifest["epochs"] = config.epochs;
  manifest["seed"] = config.seed;
  manifest["dim"] = model.weights.size();
  Matrix bias(1, 1);
  bias(0, 0) = model.bias;
  write_checkpoint(stem, manifest, {{"weights", model.weights}, {"bias", bias}});
}

SvmModel load_svm(const std::filesystem::path& stem) {
  const Checkpoint ck = read_checkpoint(stem);
  if (ck.manifest.value("kind", "") != "svm") throw Error(ErrorKind::IoError, "checkpoint is not an SVM model");
  SvmModel model;
  model.weights = ck.blob("weights").col(0);
  model.bias = ck.blob("bias")(0, 0);
  model.lambda = ck.manifest.at("lambda").get<double>();
  return model;
}

}  // namespace deptext
