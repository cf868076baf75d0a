#ifndef DEPTEXT_ERROR_HPP
#define DEPTEXT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace deptext {

enum class ErrorKind {
  MalformedRecord,
  UnknownLabel,
  DuplicateId,
  EmptyText,
  ClassTooSmall,
  EmptyCorpus,
  DimensionMismatch,
  TooFewSamples,
  VocabMismatch,
  PaddingQuery,
  IndexOutOfRange,
  InputModeMismatch,
  LabelOutOfRange,
  EmptyBatch,
  UninitializedGradient,
  EmptyDataset,
  NegativeFeature,
  SingleClass,
  LengthMismatch,
  EmptyInput,
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace deptext

#endif  // DEPTEXT_ERROR_HPP
