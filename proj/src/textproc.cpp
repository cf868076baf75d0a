#include "deptext/textproc.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "deptext/error.hpp"
#include "deptext/unicode.hpp"
#include "embedded_data.hpp"

namespace deptext {
namespace {

bool is_edge_strippable(char32_t c) {
  return unicode::is_punctuation(c) || unicode::is_symbol(c);
}

std::vector<std::u32string> sorted_suffixes(const std::vector<std::string>& suffixes) {
  std::vector<std::u32string> out;
  out.reserve(suffixes.size());
  for (const auto& s : suffixes) out.push_back(unicode::decode(s));
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return out;
}

std::string strip_interior_punct(std::string_view token) {
  std::u32string cps = unicode::decode(token);
  std::erase_if(cps, [](char32_t c) { return unicode::is_punctuation(c) && !unicode::is_dash(c); });
  return unicode::encode(cps);
}

std::string stem_with(std::string_view token, const std::vector<std::u32string>& table) {
  const std::u32string cps = unicode::decode(token);
  for (const auto& suffix : table) {
    if (cps.size() >= suffix.size() && cps.ends_with(suffix)) {
      if (cps.size() - suffix.size() < 2) break;
      return unicode::encode(std::u32string_view(cps).substr(0, cps.size() - suffix.size()));
    }
  }
  return std::string(token);
}

}  // namespace

PreprocessConfig PreprocessConfig::defaults() {
  PreprocessConfig config;
  config.stopwords.insert(default_stopwords().begin(), default_stopwords().end());
  return config;
}

PreprocessConfig PreprocessConfig::identity() {
  PreprocessConfig config;
  config.lowercase_latin = false;
  config.strip_punct = false;
  config.remove_stopwords = false;
  config.stem = false;
  return config;
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq tokens;
  const std::u32string cps = unicode::decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && unicode::is_whitespace(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !unicode::is_whitespace(cps[j])) ++j;
    std::size_t lo = i;
    std::size_t hi = j;
    while (lo < hi && is_edge_strippable(cps[lo])) ++lo;
    while (hi > lo && is_edge_strippable(cps[hi - 1])) --hi;
    if (hi > lo) tokens.push_back(unicode::encode(std::u32string_view(cps).substr(lo, hi - lo)));
    i = j;
  }
  return tokens;
}

std::string stem(std::string_view token) {
  static const std::vector<std::u32string> table = sorted_suffixes(default_suffixes());
  return stem_with(token, table);
}

std::string stem(std::string_view token, const std::vector<std::string>& suffixes) {
  return stem_with(token, sorted_suffixes(suffixes));
}

std::string lowercase_latin(std::string_view token) {
  std::u32string cps = unicode::decode(token);
  for (auto& c : cps) {
    if (unicode::is_latin_letter(c)) c = unicode::to_lower(c);
  }
  return unicode::encode(cps);
}

TokenSeq preprocess(std::string_view text, const PreprocessConfig& config) {
  TokenSeq out;
  for (auto& token : tokenize(text)) {
    std::string t = std::move(token);
    if (config.lowercase_latin) t = lowercase_latin(t);
    if (config.strip_punct) {
      t = strip_interior_punct(t);
      if (t.empty()) continue;
    }
    if (config.remove_stopwords && config.stopwords.contains(t)) continue;
    if (config.stem) t = stem(t);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> parse_word_list(std::string_view contents) {
  std::vector<std::string> out;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') continue;
    const auto start = line.find_first_not_of(" \t");
    const auto end = line.find_last_not_of(" \t");
    std::string entry = line.substr(start, end - start + 1);
    const auto cps = unicode::decode(entry);
    if (std::any_of(cps.begin(), cps.end(), unicode::is_whitespace)) {
      throw Error(ErrorKind::MalformedRecord,
                  "word list line " + std::to_string(line_no) + " contains whitespace");
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_word_list(buf.str());
}

const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = parse_word_list(embedded::kStopwords);
  return words;
}

const std::vector<std::string>& default_suffixes() {
  static const std::vector<std::string> suffixes = [] {
    auto list = parse_word_list(embedded::kSuffixes);
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      return unicode::length(a) > unicode::length(b);
    });
    return list;
  }();
  return suffixes;
}

}  // namespace deptext
