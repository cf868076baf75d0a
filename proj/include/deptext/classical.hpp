#ifndef DEPTEXT_CLASSICAL_HPP
#define DEPTEXT_CLASSICAL_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "deptext/types.hpp"

namespace deptext {

enum class NbKind { Multinomial, Gaussian };

/// Two-class Naive Bayes.
///
/// Multinomial: `log_likelihood` is 2 x d, each row the log of a Laplace
/// smoothed distribution over features. Gaussian: `mean` and `variance`
/// are 2 x d; variances include the additive floor.
struct NbModel {
  NbKind kind = NbKind::Multinomial;
  std::array<double, 2> priors{};
  double alpha = 1.0;
  double variance_floor = 0.0;
  Matrix log_likelihood;
  Matrix mean;
  Matrix variance;

  Index dim() const;
};

struct NbPrediction {
  int label = 0;
  /// Normalized log posteriors, log P(class | x).
  std::array<double, 2> log_posterior{};
};

/// Rows of `features` are samples. Throws SingleClass, NegativeFeature
/// (multinomial), LengthMismatch, EmptyInput.
NbModel fit_nb(NbKind kind, const Eigen::Ref<const Matrix>& features, std::span<const int> labels,
               double alpha = 1.0);
/// Sparse input; multinomial only.
NbModel fit_nb(NbKind kind, std::span<const SparseVector> features, std::span<const int> labels,
               double alpha = 1.0);

/// Ties go to label 0. Throws DimensionMismatch.
NbPrediction predict_nb(const NbModel& model, const Eigen::Ref<const Vector>& x);
NbPrediction predict_nb(const NbModel& model, const SparseVector& x);

struct SvmModel {
  Vector weights;
  double bias = 0.0;
  double lambda = 1e-4;
};

struct SvmConfig {
  double lambda = 1e-4;
  int epochs = 100;
  std::uint64_t seed = 0;
};

struct SvmTrace {
  /// Regularized objective after each epoch.
  std::vector<double> epoch_objective;
};

/// lambda/2 * (|w|^2 + b^2) + mean hinge, labels mapped {0,1} -> {-1,+1}.
double svm_objective(const SvmModel& model, const Eigen::Ref<const Matrix>& features,
                     std::span<const int> labels);

/// Stochastic subgradient descent with step 1/(lambda t), t counting
/// updates from 1, over a seeded shuffle each epoch. The bias is
/// regularized like a weight on a constant feature. Throws SingleClass,
/// LengthMismatch, EmptyInput, InvalidArgument.
SvmModel fit_svm(const Eigen::Ref<const Matrix>& features, std::span<const int> labels,
                 const SvmConfig& config, SvmTrace* trace = nullptr);

/// sign(w.x + b) mapped to {0, 1}; zero maps to 0. Throws DimensionMismatch.
int predict_svm(const SvmModel& model, const Eigen::Ref<const Vector>& x);
std::vector<int> predict_svm_rows(const SvmModel& model, const Eigen::Ref<const Matrix>& features);

void save_nb(const NbModel& model, const std::filesystem::path& stem);
NbModel load_nb(const std::filesystem::path& stem);
void save_svm(const SvmModel& model, const SvmConfig& config, const std::filesystem::path& stem);
SvmModel load_svm(const std::filesystem::path& stem);

}  // namespace deptext

#endif  // DEPTEXT_CLASSICAL_HPP
