#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deptext/corpus.hpp"
#include "deptext/error.hpp"
#include "deptext/random.hpp"

namespace deptext {
namespace {

constexpr int kGeneratorVersion = 2;
constexpr std::size_t kMinWords = 8;
constexpr std::size_t kMaxWords = 24;
constexpr std::size_t kMinMarkers = 4;
constexpr std::size_t kMaxMarkers = 8;
// Probability that a marker slot draws from the opposite class's list.
constexpr double kMarkerFlip = 0.10;
constexpr double kEmojiRate = 0.35;
constexpr double kEllipsisRate = 0.30;
// Filler and marker words are drawn with Zipf weights 1 / rank^s, so common
// words and bigrams recur the way they do in real posts.
constexpr double kZipfExponent = 1.0;

const std::vector<std::string> kDepressedMarkers = {
    "একা",     "কষ্ট",     "দুঃখ",    "হতাশ",  "কান্না",   "অন্ধকার",  "ক্লান্ত",
    "ব্যর্থ",    "শূন্য",     "যন্ত্রণা",  "নিঃসঙ্গ", "অসহায়",   "বিষণ্ণ",    "মৃত্যু",
    "ভাঙা",    "হারিয়ে",   "বোঝা",    "অর্থহীন", "ক্ষত",     "ঘুমহীন",   "অভিমান",
    "লুকিয়ে",   "বিদায়",    "অবহেলা", "sad",    "alone",
};

const std::vector<std::string> kNotDepressedMarkers = {
    "আনন্দ",   "খুশি",     "ভালোবাসা", "সুন্দর",  "হাসি",     "বন্ধুরা",   "উৎসব",
    "জয়",      "শুভ",      "অভিনন্দন", "ধন্যবাদ", "মজা",     "সফল",     "স্বপ্ন",
    "আলো",    "বেড়াতে",   "ঈদ",      "জন্মদিন", "চমৎকার",  "দারুণ",    "শান্তি",
    "গর্বিত",   "আশা",     "উপভোগ",  "happy", "enjoy",
};

const std::vector<std::string> kFiller = {
    "আমি",   "আজ",    "সকালে", "বাড়ি",   "অফিস",   "ক্লাস",  "রাতে",   "মা",     "বাবা",
    "ভাই",    "বোন",   "সময়",   "দিন",    "কাজ",    "পড়া",   "রাস্তা",  "বৃষ্টি",   "চা",
    "ভাত",   "খেলা",  "গান",   "ছবি",    "শহর",    "গ্রাম",   "নদী",   "মনে",    "হলো",
    "গেল",   "এলো",   "বলল",  "দেখলাম", "ভাবছি",  "আছে",   "নেই",   "না",     "খুব",
    "অনেক",  "একটু",  "সবাই", "কেউ",    "কিছু",   "এখন",   "তখন",   "আবার",  "শুধু",
    "আমার",  "তোমার", "এই",   "সেই",    "কথা",   "মন",     "জীবন",  "পরিবার", "বন্ধু",
    "life",   "ok",    "post",  "facebook",
};

const std::array<std::string, 4> kDepressedEmoji = {"😢", "💔", "😞", "😔"};
const std::array<std::string, 4> kNotDepressedEmoji = {"😊", "🎉", "😀", "🌸"};
const std::array<std::string, 3> kTerminators = {"।", "?", "!"};

const std::string& pick(Rng& rng, std::span<const std::string> items) {
  return items[static_cast<std::size_t>(rng.below(items.size()))];
}

const std::string& pick_zipf(Rng& rng, const std::vector<std::string>& items) {
  std::vector<double> cdf;
  double total = 0.0;
  for (std::size_t r = 0; r < items.size(); ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), kZipfExponent);
    cdf.push_back(total);
  }
  const double u = rng.uniform() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return items[std::min(static_cast<std::size_t>(it - cdf.begin()), items.size() - 1)];
}

std::string make_text(Rng& rng, Label label) {
  const bool depressed = label == Label::Depressed;
  const auto n_words = kMinWords + rng.below(kMaxWords - kMinWords + 1);
  const auto n_markers = kMinMarkers + rng.below(kMaxMarkers - kMinMarkers + 1);

  std::vector<std::string> words;
  words.reserve(n_words);
  for (std::size_t i = 0; i < n_words - n_markers; ++i) words.push_back(pick_zipf(rng, kFiller));
  for (std::size_t i = 0; i < n_markers; ++i) {
    const bool own = rng.uniform() >= kMarkerFlip;
    const auto& list = (own == depressed) ? kDepressedMarkers : kNotDepressedMarkers;
    const auto pos = static_cast<std::size_t>(rng.below(words.size() + 1));
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos), pick_zipf(rng, list));
  }

  // One to three sentences.
  const auto n_sentences = 1 + rng.below(3);
  std::vector<std::size_t> breaks;
  for (std::size_t s = 1; s < n_sentences; ++s) {
    breaks.push_back(1 + static_cast<std::size_t>(rng.below(words.size() - 1)));
  }
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) text.push_back(' ');
    text += words[i];
    if (std::find(breaks.begin(), breaks.end(), i + 1) != breaks.end()) {
      text += pick(rng, kTerminators);
    }
  }
  if (depressed && rng.uniform() < kEllipsisRate) {
    text += "...";
  } else {
    text += pick(rng, kTerminators);
  }
  if (rng.uniform() < kEmojiRate) {
    text += ' ';
    text += depressed ? pick(rng, kDepressedEmoji) : pick(rng, kNotDepressedEmoji);
  }
  return text;
}

}  // namespace

Corpus generate_synthetic_corpus(std::size_t n_depressed, std::size_t n_not, std::uint64_t seed) {
  if (n_depressed < 1 || n_not < 1) {
    throw Error(ErrorKind::InvalidArgument, "synthetic corpus needs at least one post per class");
  }
  Rng rng(seed);
  std::vector<Label> labels(n_depressed, Label::Depressed);
  labels.insert(labels.end(), n_not, Label::NotDepressed);
  rng.shuffle(std::span(labels));

  std::vector<LabeledPost> posts;
  posts.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", i + 1);
    posts.push_back({id, make_text(rng, labels[i]), labels[i]});
  }
  return Corpus(std::move(posts));
}

nlohmann::json synthetic_manifest(std::size_t n_depressed, std::size_t n_not, std::uint64_t seed) {
  nlohmann::json m;
  m["generator"] = "deptext-synthetic";
  m["version"] = kGeneratorVersion;
  m["seed"] = seed;
  m["counts"] = {{"depressed", n_depressed}, {"not_depressed", n_not}};
  m["words_per_post"] = {kMinWords, kMaxWords};
  m["markers_per_post"] = {kMinMarkers, kMaxMarkers};
  m["marker_flip_probability"] = kMarkerFlip;
  m["zipf_exponent"] = kZipfExponent;
  m["word_order"] = "lists are in Zipf rank order";
  m["emoji_probability"] = kEmojiRate;
  m["depressed_ellipsis_probability"] = kEllipsisRate;
  m["depressed_markers"] = kDepressedMarkers;
  m["not_depressed_markers"] = kNotDepressedMarkers;
  m["filler"] = kFiller;
  m["depressed_emoji"] = kDepressedEmoji;
  m["not_depressed_emoji"] = kNotDepressedEmoji;
  return m;
}

}  // namespace deptext
