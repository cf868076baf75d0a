#ifndef DEPTEXT_TEST_FIXTURES_HPP
#define DEPTEXT_TEST_FIXTURES_HPP

// Fixtures shared by the unit tests and the acceptance runner.

#include <string>
#include <vector>

#include "deptext/corpus.hpp"
#include "deptext/random.hpp"
#include "deptext/textproc.hpp"
#include "deptext/types.hpp"

namespace deptext::fixtures {

/// "alpha" and "beta" always sit next to each other among words from one
/// pool; "gamma" only ever appears among words from a disjoint pool, so it
/// never shares a window with either.
inline std::vector<TokenSeq> planted_cooccurrence_corpus(std::uint64_t seed = 17) {
  const std::vector<std::string> pool_ab = {"r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8"};
  const std::vector<std::string> pool_c = {"s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8"};
  Rng rng(seed);
  std::vector<TokenSeq> docs;
  for (int d = 0; d < 300; ++d) {
    const bool ab = d % 2 == 0;
    const auto& pool = ab ? pool_ab : pool_c;
    TokenSeq doc;
    for (int i = 0; i < 10; ++i) doc.push_back(pool[rng.below(pool.size())]);
    const auto at = static_cast<std::ptrdiff_t>(rng.below(doc.size() + 1));
    if (ab) {
      doc.insert(doc.begin() + at, {"alpha", "beta"});
    } else {
      doc.insert(doc.begin() + at, "gamma");
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

/// 16 posts (8 per class) from the planted-signal synthetic corpus.
inline Corpus overfit_subset(const Corpus& corpus) {
  std::vector<LabeledPost> picked;
  std::size_t dep = 0;
  std::size_t nd = 0;
  for (const auto& p : corpus.posts()) {
    auto& n = p.label == Label::Depressed ? dep : nd;
    if (n < 8) {
      picked.push_back(p);
      ++n;
    }
    if (picked.size() == 16) break;
  }
  return Corpus(std::move(picked));
}

/// Six term-count documents for the naive Bayes oracle.
struct NbToy {
  Matrix counts;
  std::vector<int> labels;
};

inline NbToy nb_toy() {
  NbToy t;
  t.counts.resize(6, 4);
  t.counts << 3, 0, 1, 0,
              2, 1, 0, 0,
              4, 0, 2, 1,
              0, 3, 0, 2,
              1, 2, 0, 3,
              0, 1, 1, 4;
  t.labels = {0, 0, 0, 1, 1, 1};
  return t;
}

/// Linearly separable 2-D fixture: class 1 above the line x + y = 0 with a
/// margin, class 0 below.
struct SvmToy {
  Matrix x;
  std::vector<int> labels;
};

inline SvmToy svm_separable(std::uint64_t seed = 4) {
  Rng rng(seed);
  SvmToy t;
  t.x.resize(60, 2);
  for (Index i = 0; i < 60; ++i) {
    const int label = i % 2;
    const double u = rng.uniform(-3.0, 3.0);
    const double offset = rng.uniform(1.0, 3.0) * (label == 1 ? 1.0 : -1.0);
    // Point at distance |offset|/sqrt(2) from the separating line.
    t.x(i, 0) = u + offset / 2.0;
    t.x(i, 1) = -u + offset / 2.0;
    t.labels.push_back(label);
  }
  return t;
}

}  // namespace deptext::fixtures

#endif  // DEPTEXT_TEST_FIXTURES_HPP
