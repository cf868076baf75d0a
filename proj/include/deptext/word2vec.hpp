#ifndef DEPTEXT_WORD2VEC_HPP
#define DEPTEXT_WORD2VEC_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "deptext/types.hpp"

namespace deptext {

/// Frequency-ranked word index. Index 0 is reserved for padding; words get
/// 1..V in descending corpus frequency, ties broken by first occurrence.
class IndexVocabulary {
 public:
  IndexVocabulary() = default;
  IndexVocabulary(std::vector<std::string> words, std::vector<std::size_t> frequencies);

  int size() const { return static_cast<int>(words_.size()); }
  /// 0 for out-of-vocabulary words.
  int lookup(const std::string& word) const;
  const std::string& word(int index) const { return words_.at(static_cast<std::size_t>(index - 1)); }
  std::size_t frequency(int index) const { return freq_.at(static_cast<std::size_t>(index - 1)); }

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::size_t>& frequencies() const { return freq_; }

  bool operator==(const IndexVocabulary& other) const {
    return words_ == other.words_ && freq_ == other.freq_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::size_t> freq_;
  std::unordered_map<std::string, int> index_;
};

/// (V + 1) x dim; row 0 is the all-zero padding row.
struct EmbeddingMatrix {
  Matrix rows;

  Index dim() const { return rows.cols(); }
  int vocab_size() const { return static_cast<int>(rows.rows()) - 1; }
};

struct SkipGramConfig {
  int dim = 300;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double initial_lr = 0.025;
  std::uint64_t seed = 1;

  /// Throws InvalidArgument. epochs may be 0, which returns the initial matrix.
  void validate() const;
};

struct SkipGramStats {
  /// Mean per-pair negative-sampling loss, one entry per epoch.
  std::vector<double> epoch_loss;
  std::size_t pairs_per_epoch = 0;
};

/// Throws EmptyCorpus or InvalidArgument.
IndexVocabulary build_vocab(std::span<const TokenSeq> docs, int max_size);

/// Initial matrix: row 0 zero, the rest uniform in [-0.5/dim, 0.5/dim]
/// drawn row-major from the config seed.
EmbeddingMatrix initial_embeddings(int vocab_size, const SkipGramConfig& config);

/// Skip-gram with negative sampling. Out-of-vocabulary tokens are removed
/// before windowing; every remaining (center, context) pair within
/// `window` positions is trained against `negatives` draws from the
/// unigram^0.75 noise distribution. The rate decays linearly to
/// 1e-4 * initial_lr over all epochs. Throws VocabMismatch when no
/// document holds an in-vocabulary token.
EmbeddingMatrix train_skipgram(std::span<const TokenSeq> docs, const IndexVocabulary& vocab,
                               const SkipGramConfig& config, SkipGramStats* stats = nullptr);

/// Maps tokens to indices dropping OOV words, keeps the first max_len and
/// right-pads with 0 to exactly max_len.
IndexSeq encode_sequence(std::span<const std::string> tokens, const IndexVocabulary& vocab, int max_len);

/// Top-k rows by cosine similarity to row `word_index`, excluding the query
/// and padding rows. Descending similarity, ties by ascending index.
/// Zero rows have similarity 0. Throws PaddingQuery for index 0.
std::vector<std::pair<int, double>> cosine_neighbors(const EmbeddingMatrix& emb, int word_index, int k);

/// Mean of the rows for nonzero indices; zero vector when there are none.
/// Throws IndexOutOfRange.
Vector mean_pool(const EmbeddingMatrix& emb, std::span<const int> indices);

/// Binary layout: 8-byte magic "DTEMB001", V and dim as little-endian u64,
/// then (V + 1) * dim little-endian f64 values row-major.
void write_embeddings(const EmbeddingMatrix& emb, std::ostream& out);
EmbeddingMatrix read_embeddings(std::istream& in);

/// Sidecar TSV: word, index, frequency.
void write_vocab_tsv(const IndexVocabulary& vocab, std::ostream& out);
IndexVocabulary read_vocab_tsv(std::istream& in);

}  // namespace deptext

#endif  // DEPTEXT_WORD2VEC_HPP
