#include "test_support.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "deptext/corpus.hpp"

using namespace deptext;

namespace {

Corpus parse_jsonl_text(const std::string& s) {
  std::istringstream in(s);
  return parse_jsonl(in);
}

Corpus balanced(std::size_t n_dep, std::size_t n_not) {
  std::vector<LabeledPost> posts;
  for (std::size_t i = 0; i < n_dep + n_not; ++i) {
    posts.push_back({"p" + std::to_string(i), "text " + std::to_string(i),
                     i < n_dep ? Label::Depressed : Label::NotDepressed});
  }
  return Corpus(std::move(posts));
}

std::set<std::string> ids(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& p : c.posts()) out.insert(p.id);
  return out;
}

}  // namespace

TEST_CASE("jsonl loading") {
  const Corpus c = parse_jsonl_text(
      "{\"id\":\"a\",\"text\":\"আমি একা\",\"label\":\"depressed\"}\n"
      "{\"id\":\"b\",\"text\":\"happy day\",\"label\":\"not_depressed\"}\n");
  CHECK(c.size() == 2);
  CHECK(c.count(Label::Depressed) == 1);
  CHECK(c.count(Label::NotDepressed) == 1);
  CHECK(c[0].id == "a");
  CHECK(c.labels() == std::vector<int>{1, 0});

  try {
    parse_jsonl_text("{\"id\":\"a\",\"text\":\"x\",\"label\":\"maybe\"}\n");
    FAIL("expected UnknownLabel");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownLabel);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    CHECK(std::string(e.what()).find("maybe") != std::string::npos);
  }
  try {
    parse_jsonl_text("{\"id\":\"a\",\"text\":\"x\",\"label\":\"depressed\"}\n{not json\n");
    FAIL("expected MalformedRecord");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedRecord);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_KIND(parse_jsonl_text("{\"id\":\"a\",\"label\":\"depressed\"}\n"), ErrorKind::MalformedRecord);
  CHECK_THROWS_KIND(parse_jsonl_text("{\"id\":\"a\",\"text\":\"x\",\"label\":\"depressed\"}\n"
                                     "{\"id\":\"a\",\"text\":\"y\",\"label\":\"depressed\"}\n"),
                    ErrorKind::DuplicateId);
  CHECK_THROWS_KIND(parse_jsonl_text("{\"id\":\"a\",\"text\":\"  \\t \",\"label\":\"depressed\"}\n"),
                    ErrorKind::EmptyText);
}

TEST_CASE("csv loading with quoting") {
  std::istringstream in(
      "id,text,label\n"
      "1,\"hello, \"\"world\"\"\",not_depressed\n"
      "2,\"two\nlines\",depressed\n");
  const Corpus c = parse_csv(in);
  REQUIRE(c.size() == 2);
  CHECK(c[0].text == "hello, \"world\"");
  CHECK(c[1].text == "two\nlines");
  CHECK(c[1].label == Label::Depressed);

  std::istringstream bad_header("id,label,text\n1,depressed,x\n");
  CHECK_THROWS_KIND(parse_csv(bad_header), ErrorKind::MalformedRecord);
  std::istringstream bad_label("id,text,label\n1,x,sad\n");
  CHECK_THROWS_KIND(parse_csv(bad_label), ErrorKind::UnknownLabel);
  std::istringstream short_row("id,text,label\n1,x\n");
  CHECK_THROWS_KIND(parse_csv(short_row), ErrorKind::MalformedRecord);
}

TEST_CASE("both formats round-trip") {
  const Corpus c = generate_synthetic_corpus(20, 30, 5);
  const auto dir = test::scratch_dir("corpus_roundtrip");
  save_corpus(c, dir / "c.jsonl", CorpusFormat::Jsonl);
  save_corpus(c, dir / "c.csv", CorpusFormat::Csv);
  CHECK(load_corpus(dir / "c.jsonl", CorpusFormat::Jsonl) == c);
  CHECK(load_corpus(dir / "c.csv", CorpusFormat::Csv) == c);
  CHECK_THROWS_KIND(load_corpus(dir / "missing.jsonl", CorpusFormat::Jsonl), ErrorKind::IoError);
}

TEST_CASE("bundled synthetic corpus mirrors the published class counts") {
  const Corpus c = load_corpus(test::source_dir() / "data" / "synthetic_corpus.jsonl", CorpusFormat::Jsonl);
  CHECK(c.count(Label::Depressed) == 391);
  CHECK(c.count(Label::NotDepressed) == 592);
  CHECK(c.counts()[0] + c.counts()[1] == c.size());
  // The bundled file is exactly what the generator produces for seed 7.
  CHECK(c == generate_synthetic_corpus(391, 592, 7));
}

TEST_CASE("synthetic generator") {
  const Corpus c = generate_synthetic_corpus(391, 592, 7);
  CHECK(c.count(Label::Depressed) == 391);
  CHECK(c.count(Label::NotDepressed) == 592);
  const Corpus tiny = generate_synthetic_corpus(1, 1, 0);
  CHECK(tiny.size() == 2);
  CHECK(tiny[0].id != tiny[1].id);
  CHECK(generate_synthetic_corpus(50, 50, 3) == generate_synthetic_corpus(50, 50, 3));
  CHECK_FALSE(generate_synthetic_corpus(50, 50, 3) == generate_synthetic_corpus(50, 50, 4));
  CHECK_THROWS_KIND(generate_synthetic_corpus(0, 3, 1), ErrorKind::InvalidArgument);
  const auto m = synthetic_manifest(391, 592, 7);
  CHECK(m["counts"]["depressed"] == 391);
  CHECK(m["seed"] == 7);
}

TEST_CASE("stratified split") {
  SplitSpec spec;
  spec.train_fraction = 0.8;
  spec.seed = 9;
  const Split s = stratified_split(balanced(5, 5), spec);
  CHECK(s.train.count(Label::Depressed) == 4);
  CHECK(s.train.count(Label::NotDepressed) == 4);
  CHECK(s.validation.size() == 2);

  const Split again = stratified_split(balanced(5, 5), spec);
  CHECK(again.train == s.train);
  CHECK(again.validation == s.validation);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    spec.seed = seed;
    const Corpus c = balanced(40, 60);
    const Split t = stratified_split(c, spec);
    const auto vd = static_cast<long>(t.validation.count(Label::Depressed));
    const auto vn = static_cast<long>(t.validation.count(Label::NotDepressed));
    CHECK(std::abs(vd - 8) <= 1);
    CHECK(std::abs(vn - 12) <= 1);
    // Partition: disjoint and covering.
    const auto a = ids(t.train);
    const auto b = ids(t.validation);
    CHECK(a.size() + b.size() == c.size());
    std::set<std::string> all = a;
    all.insert(b.begin(), b.end());
    CHECK(all == ids(c));
  }
}

TEST_CASE("split preconditions") {
  SplitSpec spec;
  CHECK_THROWS_KIND(stratified_split(balanced(1, 5), spec), ErrorKind::ClassTooSmall);
  spec.train_fraction = 1.0;
  CHECK_THROWS_KIND(spec.validate(), ErrorKind::InvalidArgument);
  spec.train_fraction = 0.0;
  CHECK_THROWS_KIND(stratified_split(balanced(5, 5), spec), ErrorKind::InvalidArgument);
}

TEST_CASE("labels") {
  CHECK(parse_label("depressed") == Label::Depressed);
  CHECK(parse_label("not_depressed") == Label::NotDepressed);
  CHECK(label_name(Label::Depressed) == "depressed");
  CHECK_THROWS_KIND(parse_label("Depressed"), ErrorKind::UnknownLabel);
  CHECK(class_index(Label::Depressed) == 1);
  CHECK(class_index(Label::NotDepressed) == 0);
}
