#include "deptext/word2vec.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "binary_io.hpp"
#include "deptext/error.hpp"
#include "deptext/random.hpp"

namespace deptext {
namespace {

constexpr char kEmbeddingMagic[9] = "DTEMB001";
constexpr double kNoisePower = 0.75;
constexpr double kMinLrFraction = 1e-4;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -ln(sigmoid(x)) without overflow.
double softplus_neg(double x) { return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

}  // namespace

IndexVocabulary::IndexVocabulary(std::vector<std::string> words, std::vector<std::size_t> frequencies)
    : words_(std::move(words)), freq_(std::move(frequencies)) {
  if (words_.size() != freq_.size()) {
    throw Error(ErrorKind::LengthMismatch, "vocabulary words and frequencies differ in length");
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<int>(i) + 1).second) {
      throw Error(ErrorKind::DuplicateId, "vocabulary word '" + words_[i] + "' repeated");
    }
  }
}

int IndexVocabulary::lookup(const std::string& word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? 0 : it->second;
}

void SkipGramConfig::validate() const {
  if (dim < 1 || window < 1 || negatives < 1 || epochs < 0 || !(initial_lr > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "skip-gram config needs dim, window, negatives >= 1, epochs >= 0, initial_lr > 0");
  }
}

IndexVocabulary build_vocab(std::span<const TokenSeq> docs, int max_size) {
  if (docs.empty()) throw Error(ErrorKind::EmptyCorpus, "vocabulary from zero documents");
  if (max_size < 1) throw Error(ErrorKind::InvalidArgument, "max_size must be >= 1");
  struct Stat {
    std::size_t count = 0;
    std::size_t first = 0;
  };
  std::unordered_map<std::string, Stat> stats;
  std::vector<std::string> order;
  for (const auto& doc : docs) {
    for (const auto& w : doc) {
      auto [it, inserted] = stats.try_emplace(w);
      if (inserted) {
        it->second.first = order.size();
        order.push_back(w);
      }
      ++it->second.count;
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    return stats[a].count > stats[b].count;
  });
  if (order.size() > static_cast<std::size_t>(max_size)) order.resize(static_cast<std::size_t>(max_size));
  std::vector<std::size_t> freq;
  freq.reserve(order.size());
  for (const auto& w : order) freq.push_back(stats[w].count);
  return IndexVocabulary(std::move(order), std::move(freq));
}

EmbeddingMatrix initial_embeddings(int vocab_size, const SkipGramConfig& config) {
  config.validate();
  EmbeddingMatrix emb{Matrix::Zero(vocab_size + 1, config.dim)};
  Rng rng(config.seed);
  const double half = 0.5 / config.dim;
  for (Index r = 1; r <= vocab_size; ++r) {
    for (Index c = 0; c < config.dim; ++c) emb.rows(r, c) = rng.uniform(-half, half);
  }
  return emb;
}

EmbeddingMatrix train_skipgram(std::span<const TokenSeq> docs, const IndexVocabulary& vocab,
                               const SkipGramConfig& config, SkipGramStats* stats) {
  config.validate();
  EmbeddingMatrix emb = initial_embeddings(vocab.size(), config);

  std::vector<IndexSeq> encoded;
  encoded.reserve(docs.size());
  std::size_t total_centers = 0;
  std::size_t pairs_per_epoch = 0;
  for (const auto& doc : docs) {
    IndexSeq ids;
    for (const auto& w : doc) {
      if (const int id = vocab.lookup(w); id != 0) ids.push_back(id);
    }
    total_centers += ids.size();
    const auto n = static_cast<int>(ids.size());
    for (int i = 0; i < n; ++i) {
      pairs_per_epoch += static_cast<std::size_t>(std::min(n - 1, i + config.window) - std::max(0, i - config.window));
    }
    encoded.push_back(std::move(ids));
  }
  if (total_centers == 0) throw Error(ErrorKind::VocabMismatch, "no in-vocabulary tokens in training documents");

  std::vector<double> noise_cdf(static_cast<std::size_t>(vocab.size()));
  double acc = 0.0;
  for (int i = 1; i <= vocab.size(); ++i) {
    acc += std::pow(static_cast<double>(vocab.frequency(i)), kNoisePower);
    noise_cdf[static_cast<std::size_t>(i - 1)] = acc;
  }
  const double noise_total = acc;

  Rng rng(derive_seed(config.seed, "negatives"));
  auto draw_noise = [&]() {
    const double u = rng.uniform() * noise_total;
    const auto it = std::upper_bound(noise_cdf.begin(), noise_cdf.end(), u);
    const auto pos = std::min<std::ptrdiff_t>(it - noise_cdf.begin(), static_cast<std::ptrdiff_t>(noise_cdf.size()) - 1);
    return static_cast<int>(pos) + 1;
  };

  Matrix context = Matrix::Zero(vocab.size() + 1, config.dim);
  Vector grad_center(config.dim);
  const double total_steps = static_cast<double>(total_centers) * config.epochs;
  std::size_t step = 0;
  if (stats) {
    stats->epoch_loss.clear();
    stats->pairs_per_epoch = pairs_per_epoch;
  }

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    for (const auto& ids : encoded) {
      const auto n = static_cast<int>(ids.size());
      for (int i = 0; i < n; ++i, ++step) {
        const double lr = config.initial_lr *
                          std::max(kMinLrFraction, 1.0 - static_cast<double>(step) / total_steps);
        const int center = ids[static_cast<std::size_t>(i)];
        const int lo = std::max(0, i - config.window);
        const int hi = std::min(n - 1, i + config.window);
        for (int j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const int target = ids[static_cast<std::size_t>(j)];
          auto v = emb.rows.row(center);
          grad_center.setZero();
          for (int s = 0; s <= config.negatives; ++s) {
            int out_word = target;
            double label = 1.0;
            if (s > 0) {
              out_word = draw_noise();
              if (out_word == target) continue;
              label = 0.0;
            }
            auto u = context.row(out_word);
            const double score = v.dot(u);
            loss_sum += label > 0.0 ? softplus_neg(score) : softplus_neg(-score);
            const double g = (label - sigmoid(score)) * lr;
            grad_center += g * u.transpose();
            u += g * v;
          }
          v += grad_center.transpose();
        }
      }
    }
    if (stats) stats->epoch_loss.push_back(pairs_per_epoch ? loss_sum / static_cast<double>(pairs_per_epoch) : 0.0);
  }
  return emb;
}

IndexSeq encode_sequence(std::span<const std::string> tokens, const IndexVocabulary& vocab, int max_len) {
  if (max_len < 1) throw Error(ErrorKind::InvalidArgument, "max_len must be >= 1");
  IndexSeq out;
  out.reserve(static_cast<std::size_t>(max_len));
  for (const auto& t : tokens) {
    if (out.size() == static_cast<std::size_t>(max_len)) break;
    if (const int id = vocab.lookup(t); id != 0) out.push_back(id);
  }
  out.resize(static_cast<std::size_t>(max_len), 0);
  return out;
}

std::vector<std::pair<int, double>> cosine_neighbors(const EmbeddingMatrix& emb, int word_index, int k) {
  const int v_size = emb.vocab_size();
  if (word_index == 0) throw Error(ErrorKind::PaddingQuery, "neighbors of the padding row");
  if (word_index < 0 || word_index > v_size) {
    throw Error(ErrorKind::IndexOutOfRange, "word index " + std::to_string(word_index));
  }
  if (k < 0 || k > v_size - 1) throw Error(ErrorKind::InvalidArgument, "k must lie in [0, V-1]");

  const auto query = emb.rows.row(word_index);
  const double qn = query.norm();
  std::vector<std::pair<int, double>> scored;
  scored.reserve(static_cast<std::size_t>(v_size));
  for (int r = 1; r <= v_size; ++r) {
    if (r == word_index) continue;
    const double rn = emb.rows.row(r).norm();
    const double sim = (qn > 0.0 && rn > 0.0) ? query.dot(emb.rows.row(r)) / (qn * rn) : 0.0;
    scored.emplace_back(r, sim);
  }
  std::partial_sort(scored.begin(), scored.begin() + k, scored.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  scored.resize(static_cast<std::size_t>(k));
  return scored;
}

Vector mean_pool(const EmbeddingMatrix& emb, std::span<const int> indices) {
  Vector sum = Vector::Zero(emb.dim());
  int n = 0;
  for (int idx : indices) {
    if (idx < 0 || idx > emb.vocab_size()) {
      throw Error(ErrorKind::IndexOutOfRange, "index " + std::to_string(idx));
    }
    if (idx == 0) continue;
    sum += emb.rows.row(idx).transpose();
    ++n;
  }
  return n == 0 ? sum : Vector(sum / n);
}

void write_embeddings(const EmbeddingMatrix& emb, std::ostream& out) {
  binary::put_magic(out, kEmbeddingMagic);
  binary::put_u64(out, static_cast<std::uint64_t>(emb.vocab_size()));
  binary::put_u64(out, static_cast<std::uint64_t>(emb.dim()));
  for (Index r = 0; r < emb.rows.rows(); ++r) {
    for (Index c = 0; c < emb.rows.cols(); ++c) binary::put_f64(out, emb.rows(r, c));
  }
}

EmbeddingMatrix read_embeddings(std::istream& in) {
  binary::expect_magic(in, kEmbeddingMagic);
  const auto v = static_cast<Index>(binary::get_u64(in));
  const auto dim = static_cast<Index>(binary::get_u64(in));
  EmbeddingMatrix emb{Matrix(v + 1, dim)};
  for (Index r = 0; r <= v; ++r) {
    for (Index c = 0; c < dim; ++c) emb.rows(r, c) = binary::get_f64(in);
  }
  return emb;
}

void write_vocab_tsv(const IndexVocabulary& vocab, std::ostream& out) {
  for (int i = 1; i <= vocab.size(); ++i) {
    out << vocab.word(i) << '\t' << i << '\t' << vocab.frequency(i) << '\n';
  }
}

IndexVocabulary read_vocab_tsv(std::istream& in) {
  std::vector<std::string> words;
  std::vector<std::size_t> freq;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    int index = 0;
    std::size_t f = 0;
    if (!std::getline(fields, word, '\t') || !(fields >> index >> f) ||
        index != static_cast<int>(words.size()) + 1) {
      throw Error(ErrorKind::MalformedRecord, "line " + std::to_string(line_no));
    }
    words.push_back(std::move(word));
    freq.push_back(f);
  }
  return IndexVocabulary(std::move(words), std::move(freq));
}

}  // namespace deptext
