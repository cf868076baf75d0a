#ifndef DEPTEXT_CORPUS_HPP
#define DEPTEXT_CORPUS_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace deptext {

enum class Label { NotDepressed = 0, Depressed = 1 };

/// "depressed" / "not_depressed".
std::string_view label_name(Label label);
/// Throws UnknownLabel.
Label parse_label(std::string_view name);
inline int class_index(Label label) { return static_cast<int>(label); }

struct LabeledPost {
  std::string id;
  std::string text;
  Label label = Label::NotDepressed;

  bool operator==(const LabeledPost&) const = default;
};

/// Ordered, immutable collection of posts with unique ids and non-empty
/// texts. Class counts are derived from the posts on demand.
class Corpus {
 public:
  Corpus() = default;
  /// Throws DuplicateId or EmptyText.
  explicit Corpus(std::vector<LabeledPost> posts);

  const std::vector<LabeledPost>& posts() const { return posts_; }
  std::size_t size() const { return posts_.size(); }
  bool empty() const { return posts_.empty(); }
  const LabeledPost& operator[](std::size_t i) const { return posts_[i]; }

  std::size_t count(Label label) const;
  /// Indexed by class_index().
  std::array<std::size_t, 2> counts() const;

  std::vector<std::string> texts() const;
  std::vector<int> labels() const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<LabeledPost> posts_;
};

enum class CorpusFormat { Jsonl, Csv };

CorpusFormat parse_corpus_format(std::string_view name);
std::string_view format_name(CorpusFormat format);

Corpus parse_jsonl(std::istream& in);
Corpus parse_csv(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

void write_jsonl(const Corpus& corpus, std::ostream& out);
void write_csv(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool stratified = true;

  /// Throws InvalidArgument unless 0 < train_fraction < 1.
  void validate() const;
};

struct Split {
  Corpus train;
  Corpus validation;
};

/// Seeded partition of the corpus. Both halves keep corpus order. With
/// stratification each class contributes round(fraction * class size)
/// posts to train, clamped so neither half loses the class entirely.
Split stratified_split(const Corpus& corpus, const SplitSpec& spec);

/// Deterministic stand-in corpus. Each post carries several class marker
/// words among neutral filler; the vocabularies and rates are reported by
/// synthetic_manifest().
Corpus generate_synthetic_corpus(std::size_t n_depressed, std::size_t n_not, std::uint64_t seed);
nlohmann::json synthetic_manifest(std::size_t n_depressed, std::size_t n_not, std::uint64_t seed);

}  // namespace deptext

#endif  // DEPTEXT_CORPUS_HPP
