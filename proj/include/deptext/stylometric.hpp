#ifndef DEPTEXT_STYLOMETRIC_HPP
#define DEPTEXT_STYLOMETRIC_HPP

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "deptext/textproc.hpp"
#include "deptext/types.hpp"

namespace deptext {

inline constexpr Index kStyloDim = 12;

/// Column order of a stylometric vector.
inline constexpr std::array<std::string_view, kStyloDim> kStyloFeatureNames = {
    "char_count",     "word_count",      "sentence_count", "avg_word_len",
    "avg_sentence_len", "type_token_ratio", "punct_ratio",   "digit_ratio",
    "latin_ratio",    "emoji_count",     "stopword_ratio", "hapax_ratio",
};

using StyloVector = Eigen::Matrix<Scalar, kStyloDim, 1>;

/// Per-document writing-style statistics.
///
/// Character features run over the raw text: char_count counts non-whitespace
/// code points; punct/digit/latin ratios divide by all code points. Word
/// features run over tokenize() output (Latin-lowercased when the config
/// asks for it, never stemmed). Sentences are runs delimited by danda, '.',
/// '?' or '!' that contain something other than whitespace; at least one.
/// Throws EmptyText for blank input.
StyloVector extract_stylometric(std::string_view text, const PreprocessConfig& config);

/// Population mean and standard deviation per feature.
struct Standardizer {
  Vector mean;
  Vector stddev;

  Index dim() const { return mean.size(); }
};

/// Throws TooFewSamples for fewer than two rows. Rows are samples.
Standardizer fit_standardizer(const Eigen::Ref<const Matrix>& samples);
Standardizer fit_standardizer(std::span<const StyloVector> vectors);

/// (x - mean) / stddev, with zero-variance features mapped to 0.
/// Throws DimensionMismatch.
Vector apply_standardizer(const Standardizer& standardizer, const Eigen::Ref<const Vector>& v);
Matrix apply_standardizer_rows(const Standardizer& standardizer, const Eigen::Ref<const Matrix>& samples);

/// CSV with the fixed 12-column header; one row per sample.
void write_stylometric_csv(std::ostream& out, std::span<const StyloVector> vectors);

}  // namespace deptext

#endif  // DEPTEXT_STYLOMETRIC_HPP
