#include "test_support.hpp"

#include <random>

#include "deptext/textproc.hpp"
#include "deptext/unicode.hpp"

using namespace deptext;

TEST_CASE("tokenize splits on whitespace and strips edge punctuation") {
  CHECK(tokenize("আমি ভালো নেই।") == TokenSeq{"আমি", "ভালো", "নেই"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("a  b\tc!") == TokenSeq{"a", "b", "c"});
  CHECK(tokenize("  \n\t ").empty());
  // Symbols go at the edges too; interior hyphens and apostrophes stay.
  CHECK(tokenize("#sad well-being don't 😢 ...") == TokenSeq{"sad", "well-being", "don't"});
  // U+3000 ideographic space and NBSP are whitespace.
  CHECK(tokenize("x　y z") == TokenSeq{"x", "y", "z"});
}

TEST_CASE("tokens never contain whitespace and are never empty") {
  std::mt19937_64 gen(11);
  const std::vector<std::string> pieces = {"আমি", " ", "\t", "।", "!", "a", "B", "-", "😢", " ", "...", "ক"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int n = static_cast<int>(gen() % 20);
    for (int i = 0; i < n; ++i) text += pieces[gen() % pieces.size()];
    for (const auto& tok : tokenize(text)) {
      REQUIRE_FALSE(tok.empty());
      for (char32_t c : unicode::decode(tok)) CHECK_FALSE(unicode::is_whitespace(c));
    }
    // Flags-off round trip.
    const auto once = preprocess(text, PreprocessConfig::identity());
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    CHECK(tokenize(joined) == once);
    CHECK(once == tokenize(text));
  }
}

TEST_CASE("stem strips the longest table suffix with a two code point guard") {
  CHECK(stem("বন্ধুরা") == "বন্ধু");
  CHECK(stem("ছেলেগুলোকে") == "ছেলে");
  CHECK(stem("ছেলেদের") == "ছেলে");
  CHECK(stem("ভালো") == "ভালো");
  CHECK(stem("রা") == "রা");
  CHECK(stem("করা") == "করা");
  CHECK(stem("hello") == "hello");
  for (const auto& w : {"বন্ধুরা", "ছেলেগুলোকে", "বইটা", "ab", "মানুষের"}) {
    CHECK(unicode::length(stem(w)) <= unicode::length(w));
  }
  CHECK(stem("catsxx", {"xx", "sxx"}) == "cat");
}

TEST_CASE("preprocess composes lowercase, stopwords and stemming in order") {
  PreprocessConfig cfg = PreprocessConfig::identity();
  cfg.lowercase_latin = true;
  cfg.remove_stopwords = true;
  cfg.stopwords = {"i", "am"};
  CHECK(preprocess("I am FINE", cfg) == TokenSeq{"fine"});
  CHECK(preprocess("I am", cfg).empty());
  CHECK(preprocess("I am FINE", PreprocessConfig::identity()) == TokenSeq{"I", "am", "FINE"});

  const PreprocessConfig defaults = PreprocessConfig::defaults();
  CHECK(preprocess("আমি বন্ধুরা না!", defaults) == TokenSeq{"বন্ধু", "না"});

  // Stemming runs after stopword removal, so a stopword that only appears
  // once stemmed is kept.
  PreprocessConfig stem_only = PreprocessConfig::identity();
  stem_only.remove_stopwords = true;
  stem_only.stem = true;
  stem_only.stopwords = {"বন্ধু"};
  CHECK(preprocess("বন্ধুরা", stem_only) == TokenSeq{"বন্ধু"});
}

TEST_CASE("strip_punct removes interior punctuation but keeps dashes") {
  PreprocessConfig cfg = PreprocessConfig::identity();
  cfg.strip_punct = true;
  CHECK(preprocess("don't well-being a.b.c", cfg) == TokenSeq{"dont", "well-being", "abc"});
}

TEST_CASE("preprocess output is an order-preserving image of tokenize") {
  const std::string text = "আমার মনটা ভালো নেই। I AM tired, বন্ধুরা কোথায়?";
  const auto toks = tokenize(text);
  const auto out = preprocess(text, PreprocessConfig::defaults());
  CHECK(out.size() <= toks.size());
  std::size_t j = 0;
  for (const auto& o : out) {
    bool found = false;
    for (; j < toks.size() && !found; ++j) {
      found = stem(lowercase_latin(toks[j])) == o;
    }
    CHECK_MESSAGE(found, o);
  }
}

TEST_CASE("word lists") {
  CHECK(parse_word_list("# header\nএক\n\n  দুই  \r\n# c\n") == std::vector<std::string>{"এক", "দুই"});
  CHECK_THROWS_KIND(parse_word_list("two words\n"), ErrorKind::MalformedRecord);
  const auto& stop = default_stopwords();
  CHECK(std::find(stop.begin(), stop.end(), "আমি") != stop.end());
  CHECK(std::find(stop.begin(), stop.end(), "না") == stop.end());
  CHECK(load_word_list(test::source_dir() / "data" / "stopwords_bn.txt") == stop);
  // The built-in suffix table is the file's entries, longest first.
  auto file_suffixes = load_word_list(test::source_dir() / "data" / "suffixes_bn.txt");
  auto built_in = default_suffixes();
  for (std::size_t i = 1; i < built_in.size(); ++i) {
    CHECK(unicode::length(built_in[i - 1]) >= unicode::length(built_in[i]));
  }
  std::sort(file_suffixes.begin(), file_suffixes.end());
  std::sort(built_in.begin(), built_in.end());
  CHECK(file_suffixes == built_in);
  CHECK_THROWS_KIND(load_word_list("/nonexistent/list.txt"), ErrorKind::IoError);
}

TEST_CASE("unicode helpers") {
  CHECK(unicode::length("আমি") == 3);
  CHECK(unicode::encode(unicode::decode("মন 😢 ok")) == "মন 😢 ok");
  CHECK_FALSE(unicode::is_valid_utf8("\xff\xfe"));
  CHECK(unicode::decode("\xff") == std::u32string(1, U'�'));
  CHECK(unicode::is_punctuation(U'।'));
  CHECK(unicode::is_dash(U'-'));
  CHECK(unicode::is_symbol(U'#') == false);
  CHECK(unicode::is_symbol(U'+'));
  CHECK(unicode::is_decimal_digit(U'৭'));
  CHECK(unicode::is_latin_letter(U'é'));
  CHECK_FALSE(unicode::is_latin_letter(U'ক'));
  CHECK(unicode::is_emoji(U'\U0001F622'));
  CHECK_FALSE(unicode::is_emoji(U'a'));
  CHECK(lowercase_latin("ÉCOLE মন") == "école মন");
}
