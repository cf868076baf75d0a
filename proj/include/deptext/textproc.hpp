#ifndef DEPTEXT_TEXTPROC_HPP
#define DEPTEXT_TEXTPROC_HPP

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "deptext/types.hpp"

namespace deptext {

struct PreprocessConfig {
  bool lowercase_latin = true;
  // Removes interior punctuation other than dashes. Edge punctuation is
  // always stripped by tokenize().
  bool strip_punct = false;
  bool remove_stopwords = true;
  bool stem = true;
  std::set<std::string> stopwords;

  /// Flags all on, bundled stop-word list.
  static PreprocessConfig defaults();
  /// Flags all off, empty stop-word list.
  static PreprocessConfig identity();
};

/// Splits on Unicode whitespace and strips P*/S* code points from both
/// ends of each piece. Empty pieces are dropped.
TokenSeq tokenize(std::string_view text);

/// Suffix stripping against a fixed table, longest match first. The token
/// is returned unchanged if the remaining stem would be shorter than two
/// code points.
std::string stem(std::string_view token);
std::string stem(std::string_view token, const std::vector<std::string>& suffixes);

TokenSeq preprocess(std::string_view text, const PreprocessConfig& config);

std::string lowercase_latin(std::string_view token);

/// Parses one-entry-per-line word lists; '#' starts a comment line and
/// blank lines are skipped. Entries must be valid tokens.
std::vector<std::string> parse_word_list(std::string_view contents);
std::vector<std::string> load_word_list(const std::filesystem::path& path);

/// Bundled lists, compiled in from data/*.txt.
const std::vector<std::string>& default_stopwords();
/// Sorted longest first.
const std::vector<std::string>& default_suffixes();

}  // namespace deptext

#endif  // DEPTEXT_TEXTPROC_HPP
