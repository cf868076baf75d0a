#include "test_support.hpp"

#include <fstream>

#include "deptext/config.hpp"
#include "deptext/experiment.hpp"

using namespace deptext;

TEST_CASE("key/value parser") {
  const auto j = parse_kv_config(R"(
# leading comment
top = 1
[a]
s = "hi # not a comment"   # trailing comment
i = -12
f = 0.5
e = 1e-4
b = true
l = ["x", "y"]
n = [1, 2.5]
[b]
empty = []
)");
  CHECK(j["top"] == 1);
  CHECK(j["a"]["s"] == "hi # not a comment");
  CHECK(j["a"]["i"] == -12);
  CHECK(j["a"]["i"].is_number_integer());
  CHECK(j["a"]["f"] == 0.5);
  CHECK(j["a"]["e"] == 1e-4);
  CHECK(j["a"]["b"] == true);
  CHECK(j["a"]["l"] == nlohmann::json::array({"x", "y"}));
  CHECK(j["a"]["n"] == nlohmann::json::array({1, 2.5}));
  CHECK(j["b"]["empty"].empty());
}

TEST_CASE("parser errors carry line numbers") {
  const auto expect = [](std::string_view text, std::string_view fragment) {
    try {
      parse_kv_config(text);
      FAIL("no error for: " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
      CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
    }
  };
  expect("[a]\nx = 1\nx = 2\n", "line 3");
  expect("[a]\n[a]\n", "duplicate section");
  expect("x = \"open\n", "line 1");
  expect("[a\n", "line 1");
  expect("novalue\n", "line 1");
  expect("x = [1, 2\n", "line 1");
  expect("x = bogus\n", "line 1");
}

TEST_CASE("desk config and its JSON equivalent resolve identically") {
  const auto src = test::source_dir();
  const auto toml = load_experiment_config(src / "configs" / "grid_desk.toml");
  const auto dir = test::scratch_dir("config_json");
  const nlohmann::json raw = load_config_file(src / "configs" / "grid_desk.toml");
  // Paths are absolute in the JSON copy so it can live elsewhere.
  nlohmann::json copy = raw;
  copy["corpus"]["path"] = (src / "data" / "synthetic_corpus.jsonl").string();
  copy["run"]["output_dir"] = (src / "out" / "grid").string();
  std::ofstream(dir / "grid.json") << copy.dump(2);
  const auto json = load_experiment_config(dir / "grid.json");
  CHECK(to_json(toml) == to_json(json));
  CHECK(toml.models.size() == 4);
  CHECK(toml.features.size() == 3);
  CHECK(toml.master_seed == 42);
  CHECK(toml.corpus_path.is_absolute());
  CHECK(toml.split.seed != 42);  // derived, not copied
}

TEST_CASE("strict keys") {
  const auto base = nlohmann::json::parse(R"({"corpus": {"path": "x.jsonl"}, "grid": {"models": ["nb"], "features": ["tfidf"]}})");
  CHECK_NOTHROW(config_from_json(base, "/tmp"));
  auto bad = base;
  bad["grid"]["modles"] = nlohmann::json::array({"svm"});
  CHECK_THROWS_KIND(config_from_json(bad, "/tmp"), ErrorKind::ConfigError);
  bad = base;
  bad["extra"] = nlohmann::json::object();
  CHECK_THROWS_KIND(config_from_json(bad, "/tmp"), ErrorKind::ConfigError);
  bad = base;
  bad["grid"]["models"] = nlohmann::json::array({"cnn"});
  CHECK_THROWS_KIND(config_from_json(bad, "/tmp"), ErrorKind::ConfigError);
  bad = base;
  bad["svm"] = {{"lambda", "small"}};
  CHECK_THROWS_KIND(config_from_json(bad, "/tmp"), ErrorKind::ConfigError);

  const auto c = config_from_json(base, "/tmp");
  CHECK_THROWS_KIND(validate(c), ErrorKind::ConfigError);  // corpus file missing
}
