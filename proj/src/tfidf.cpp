#include "deptext/tfidf.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "deptext/error.hpp"

namespace deptext {

double NGramVocabulary::idf(std::size_t df) const {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
}

std::vector<std::string> extract_ngrams(std::span<const std::string> doc, int ngram_min, int ngram_max) {
  std::vector<std::string> out;
  for (int n = ngram_min; n <= ngram_max; ++n) {
    const auto len = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + len <= doc.size(); ++i) {
      std::string gram = doc[i];
      for (std::size_t k = 1; k < len; ++k) {
        gram.push_back(' ');
        gram += doc[i + k];
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

NGramVocabulary fit_vectorizer(std::span<const TokenSeq> docs, int ngram_min, int ngram_max) {
  if (docs.empty()) throw Error(ErrorKind::EmptyCorpus, "TF-IDF fit on zero documents");
  if (ngram_min < 1 || ngram_max < ngram_min) {
    throw Error(ErrorKind::InvalidArgument, "n-gram range must satisfy 1 <= min <= max");
  }
  NGramVocabulary vocab;
  vocab.n_docs = docs.size();
  vocab.ngram_min = ngram_min;
  vocab.ngram_max = ngram_max;
  for (const auto& doc : docs) {
    const auto grams = extract_ngrams(doc, ngram_min, ngram_max);
    const std::set<std::string> unique(grams.begin(), grams.end());
    for (const auto& g : unique) ++vocab.entries[g].df;
  }
  Index next = 0;
  for (auto& [gram, entry] : vocab.entries) entry.index = next++;
  return vocab;
}

SparseVector transform(const NGramVocabulary& vocab, std::span<const std::string> doc) {
  // index -> (raw count, df)
  std::map<Index, std::pair<double, std::size_t>> tf;
  for (const auto& g : extract_ngrams(doc, vocab.ngram_min, vocab.ngram_max)) {
    if (auto it = vocab.entries.find(g); it != vocab.entries.end()) {
      auto& slot = tf[it->second.index];
      slot.first += 1.0;
      slot.second = it->second.df;
    }
  }
  SparseVector out(vocab.size());
  if (tf.empty()) return out;
  double norm2 = 0.0;
  for (auto& [index, slot] : tf) {
    slot.first *= vocab.idf(slot.second);
    norm2 += slot.first * slot.first;
  }
  const double norm = std::sqrt(norm2);
  out.reserve(static_cast<Index>(tf.size()));
  for (const auto& [index, slot] : tf) out.insertBack(index) = slot.first / norm;
  return out;
}

Matrix transform_dense(const NGramVocabulary& vocab, std::span<const TokenSeq> docs) {
  Matrix out = Matrix::Zero(static_cast<Index>(docs.size()), vocab.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const SparseVector v = transform(vocab, docs[i]);
    for (SparseVector::InnerIterator it(v); it; ++it) out(static_cast<Index>(i), it.index()) = it.value();
  }
  return out;
}

void write_vocabulary_tsv(const NGramVocabulary& vocab, std::ostream& out) {
  out << "#n_docs\t" << vocab.n_docs << '\t' << vocab.ngram_min << '\t' << vocab.ngram_max << '\n';
  for (const auto& [gram, entry] : vocab.entries) {
    out << gram << '\t' << entry.index << '\t' << entry.df << '\n';
  }
}

NGramVocabulary read_vocabulary_tsv(std::istream& in) {
  NGramVocabulary vocab;
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#n_docs\t")) {
    throw Error(ErrorKind::MalformedRecord, "line 1: expected '#n_docs' header");
  }
  {
    std::istringstream header(line.substr(8));
    if (!(header >> vocab.n_docs >> vocab.ngram_min >> vocab.ngram_max)) {
      throw Error(ErrorKind::MalformedRecord, "line 1: bad header fields");
    }
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw Error(ErrorKind::MalformedRecord, "line " + std::to_string(line_no) + ": expected 3 fields");
    }
    NGramEntry entry;
    entry.index = std::stol(line.substr(t1 + 1, t2 - t1 - 1));
    entry.df = std::stoul(line.substr(t2 + 1));
    vocab.entries.emplace(line.substr(0, t1), entry);
  }
  return vocab;
}

}  // namespace deptext
