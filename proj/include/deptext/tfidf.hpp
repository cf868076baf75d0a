#ifndef DEPTEXT_TFIDF_HPP
#define DEPTEXT_TFIDF_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>

#include "deptext/types.hpp"

namespace deptext {

struct NGramEntry {
  Index index = 0;
  std::size_t df = 0;

  bool operator==(const NGramEntry&) const = default;
};

/// N-gram vocabulary with document frequencies. N-grams are tokens joined
/// by a single space; indices follow the byte-lexicographic order of the
/// joined strings.
struct NGramVocabulary {
  std::map<std::string, NGramEntry> entries;
  std::size_t n_docs = 0;
  int ngram_min = 1;
  int ngram_max = 2;

  Index size() const { return static_cast<Index>(entries.size()); }
  /// ln((1 + n_docs) / (1 + df)) + 1
  double idf(std::size_t df) const;

  bool operator==(const NGramVocabulary&) const = default;
};

/// All n-grams of sizes [ngram_min, ngram_max] in document order.
std::vector<std::string> extract_ngrams(std::span<const std::string> doc, int ngram_min, int ngram_max);

/// Throws EmptyCorpus for no documents, InvalidArgument for a bad range.
NGramVocabulary fit_vectorizer(std::span<const TokenSeq> docs, int ngram_min = 1, int ngram_max = 2);

/// Raw-count tf times smoothed idf, L2-normalized. Out-of-vocabulary n-grams
/// are ignored; a document without known n-grams maps to the empty vector.
SparseVector transform(const NGramVocabulary& vocab, std::span<const std::string> doc);

/// Densified rows for a batch of documents.
Matrix transform_dense(const NGramVocabulary& vocab, std::span<const TokenSeq> docs);

/// TSV: "#n_docs\t<N>\t<min>\t<max>" header, then "ngram\tindex\tdf" rows.
void write_vocabulary_tsv(const NGramVocabulary& vocab, std::ostream& out);
NGramVocabulary read_vocabulary_tsv(std::istream& in);

}  // namespace deptext

#endif  // DEPTEXT_TFIDF_HPP
