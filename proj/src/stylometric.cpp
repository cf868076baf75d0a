#include "deptext/stylometric.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

#include "deptext/error.hpp"
#include "deptext/unicode.hpp"

namespace deptext {
namespace {

bool is_sentence_delimiter(char32_t c) {
  return c == U'।' || c == U'॥' || c == U'.' || c == U'?' || c == U'!';
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

StyloVector extract_stylometric(std::string_view text, const PreprocessConfig& config) {
  const std::u32string cps = unicode::decode(text);
  std::size_t non_ws = 0;
  std::size_t punct = 0;
  std::size_t digits = 0;
  std::size_t latin = 0;
  std::size_t emoji = 0;
  std::size_t sentences = 0;
  bool sentence_open = false;
  for (char32_t c : cps) {
    const bool ws = unicode::is_whitespace(c);
    if (!ws) ++non_ws;
    if (unicode::is_punctuation(c)) ++punct;
    if (unicode::is_decimal_digit(c)) ++digits;
    if (unicode::is_latin_letter(c)) ++latin;
    if (unicode::is_emoji(c)) ++emoji;
    if (is_sentence_delimiter(c)) {
      if (sentence_open) ++sentences;
      sentence_open = false;
    } else if (!ws) {
      sentence_open = true;
    }
  }
  if (non_ws == 0) throw Error(ErrorKind::EmptyText, "stylometric extraction on blank text");
  if (sentence_open) ++sentences;
  sentences = std::max<std::size_t>(sentences, 1);

  TokenSeq words = tokenize(text);
  if (config.lowercase_latin) {
    for (auto& w : words) w = lowercase_latin(w);
  }
  std::map<std::string, std::size_t> freq;
  std::size_t total_word_len = 0;
  std::size_t stop = 0;
  for (const auto& w : words) {
    ++freq[w];
    total_word_len += unicode::length(w);
    if (config.stopwords.contains(w)) ++stop;
  }
  std::size_t hapax = 0;
  for (const auto& [w, n] : freq) {
    if (n == 1) ++hapax;
  }

  const std::size_t n_words = words.size();
  StyloVector v;
  v << static_cast<double>(non_ws), static_cast<double>(n_words), static_cast<double>(sentences),
      ratio(total_word_len, n_words), ratio(n_words, sentences), ratio(freq.size(), n_words),
      ratio(punct, cps.size()), ratio(digits, cps.size()), ratio(latin, cps.size()),
      static_cast<double>(emoji), ratio(stop, n_words), ratio(hapax, n_words);
  return v;
}

Standardizer fit_standardizer(const Eigen::Ref<const Matrix>& samples) {
  if (samples.rows() < 2) {
    throw Error(ErrorKind::TooFewSamples, "standardizer needs at least 2 samples, got " +
                                              std::to_string(samples.rows()));
  }
  Standardizer s;
  s.mean = samples.colwise().mean().transpose();
  const Matrix centered = samples.rowwise() - s.mean.transpose();
  s.stddev = (centered.array().square().colwise().sum() / static_cast<double>(samples.rows()))
                 .sqrt()
                 .transpose();
  // Exactly constant columns must record 0 even when the mean is inexact.
  for (Index j = 0; j < samples.cols(); ++j) {
    if ((samples.col(j).array() == samples(0, j)).all()) s.stddev(j) = 0.0;
  }
  return s;
}

Standardizer fit_standardizer(std::span<const StyloVector> vectors) {
  Matrix samples(static_cast<Index>(vectors.size()), kStyloDim);
  for (std::size_t i = 0; i < vectors.size(); ++i) samples.row(static_cast<Index>(i)) = vectors[i].transpose();
  return fit_standardizer(samples);
}

Vector apply_standardizer(const Standardizer& standardizer, const Eigen::Ref<const Vector>& v) {
  if (v.size() != standardizer.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(standardizer.dim()) +
                                                  " features, got " + std::to_string(v.size()));
  }
  Vector out(v.size());
  for (Index j = 0; j < v.size(); ++j) {
    const double sd = standardizer.stddev(j);
    out(j) = sd > 0.0 ? (v(j) - standardizer.mean(j)) / sd : 0.0;
  }
  return out;
}

Matrix apply_standardizer_rows(const Standardizer& standardizer, const Eigen::Ref<const Matrix>& samples) {
  Matrix out(samples.rows(), samples.cols());
  for (Index i = 0; i < samples.rows(); ++i) {
    out.row(i) = apply_standardizer(standardizer, samples.row(i).transpose()).transpose();
  }
  return out;
}

void write_stylometric_csv(std::ostream& out, std::span<const StyloVector> vectors) {
  for (Index j = 0; j < kStyloDim; ++j) {
    if (j > 0) out << ',';
    out << kStyloFeatureNames[static_cast<std::size_t>(j)];
  }
  out << '\n';
  out << std::setprecision(17);
  for (const auto& v : vectors) {
    for (Index j = 0; j < kStyloDim; ++j) {
      if (j > 0) out << ',';
      out << v(j);
    }
    out << '\n';
  }
}

}  // namespace deptext
