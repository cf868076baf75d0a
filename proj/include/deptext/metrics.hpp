#ifndef DEPTEXT_METRICS_HPP
#define DEPTEXT_METRICS_HPP

#include <cstddef>
#include <span>

namespace deptext {

/// Counts with Depressed (label 1) as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassificationReport {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Zero denominators yield 0 rather than an error. Throws LengthMismatch,
/// EmptyInput, LabelOutOfRange.
ClassificationReport classification_report(std::span<const int> predictions, std::span<const int> truth);

}  // namespace deptext

#endif  // DEPTEXT_METRICS_HPP
