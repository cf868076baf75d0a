#include "deptext/metrics.hpp"

#include <string>

#include "deptext/error.hpp"

namespace deptext {

ClassificationReport classification_report(std::span<const int> predictions, std::span<const int> truth) {
  if (predictions.size() != truth.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                               std::to_string(truth.size()) + " labels");
  }
  if (predictions.empty()) throw Error(ErrorKind::EmptyInput, "no predictions to score");
  ClassificationReport r;
  auto& cm = r.confusion;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const int p = predictions[i];
    const int t = truth[i];
    if ((p != 0 && p != 1) || (t != 0 && t != 1)) {
      throw Error(ErrorKind::LabelOutOfRange, "labels must be 0 or 1");
    }
    if (p == 1) {
      (t == 1 ? cm.tp : cm.fp)++;
    } else {
      (t == 0 ? cm.tn : cm.fn)++;
    }
  }
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  r.precision = ratio(cm.tp, cm.tp + cm.fp);
  r.recall = ratio(cm.tp, cm.tp + cm.fn);
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

}  // namespace deptext
