#include "deptext/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "deptext/config.hpp"
#include "deptext/error.hpp"
#include "deptext/random.hpp"
#include "deptext/stylometric.hpp"
#include "deptext/tfidf.hpp"
#include "embedded_data.hpp"

namespace deptext {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kManifestVersion = 1;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    throw Error(e.kind(), std::string("[") + stage + "] " + e.detail());
  }
}

// ---- JSON config reading -------------------------------------------------

class Section {
 public:
  Section(const json& root, const char* name) : name_(name) {
    if (root.contains(name)) {
      if (!root[name].is_object()) config_error(std::string("[") + name + "] must be a table");
      obj_ = &root[name];
    }
  }

  ~Section() = default;

  void finish() const {
    if (!obj_) return;
    for (const auto& [key, value] : obj_->items()) {
      if (!used_.contains(key)) config_error("unknown key '" + key + "' in [" + name_ + "]");
    }
  }

  template <typename T>
  void read(const char* key, T& out) {
    if (!obj_ || !obj_->contains(key)) return;
    used_.insert(key);
    try {
      out = (*obj_)[key].get<T>();
    } catch (const json::exception&) {
      config_error(std::string("bad value for ") + name_ + "." + key);
    }
  }

  bool has(const char* key) const { return obj_ && obj_->contains(key); }

 private:
  std::string name_;
  const json* obj_ = nullptr;
  std::set<std::string> used_;
};

template <typename E, typename Parse>
std::vector<E> read_selector(Section& s, const char* key, Parse parse) {
  std::vector<std::string> names;
  s.read(key, names);
  std::vector<E> out;
  for (const auto& n : names) {
    try {
      out.push_back(parse(n));
    } catch (const Error& e) {
      config_error(e.detail());
    }
  }
  return out;
}

void read_rnn(const json& root, const char* name, RnnHyper& h) {
  Section s(root, name);
  s.read("hidden_dim", h.hidden_dim);
  s.read("epochs", h.epochs);
  s.read("batch_size", h.batch_size);
  s.read("lr", h.optimizer.lr);
  s.read("rho", h.optimizer.rho);
  s.read("epsilon", h.optimizer.epsilon);
  s.read("forget_bias", h.forget_bias);
  s.finish();
  if (h.hidden_dim < 1 || h.epochs < 1 || h.batch_size < 1) {
    config_error(std::string("[") + name + "] needs hidden_dim, epochs, batch_size >= 1");
  }
}

json rnn_json(const RnnHyper& h) {
  return {{"hidden_dim", h.hidden_dim}, {"epochs", h.epochs},       {"batch_size", h.batch_size},
          {"lr", h.optimizer.lr},       {"rho", h.optimizer.rho},   {"epsilon", h.optimizer.epsilon},
          {"forget_bias", h.forget_bias}};
}

// ---- CSV helpers ---------------------------------------------------------

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Baseline {
  std::string accuracy;
  std::string f1;
};

std::map<std::pair<std::string, std::string>, Baseline> reference_baseline() {
  std::map<std::pair<std::string, std::string>, Baseline> out;
  std::istringstream in{std::string(embedded::kReferenceBaseline)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    std::string part;
    while (std::getline(fields, part, '\t')) f.push_back(part);
    f.resize(4);
    out[{f[0], f[1]}] = {f[2], f[3]};
  }
  return out;
}

}  // namespace

// ---- names ---------------------------------------------------------------

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Lstm: return "lstm";
    case ModelKind::Gru: return "gru";
    case ModelKind::Svm: return "svm";
    case ModelKind::Nb: return "nb";
  }
  return "?";
}

std::string_view feature_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Stylometric: return "stylometric";
    case FeatureKind::Tfidf: return "tfidf";
    case FeatureKind::Embedding: return "embedding";
  }
  return "?";
}

ModelKind parse_model(std::string_view name) {
  for (auto k : {ModelKind::Lstm, ModelKind::Gru, ModelKind::Svm, ModelKind::Nb}) {
    if (model_name(k) == name) return k;
  }
  throw Error(ErrorKind::ConfigError, "unknown model '" + std::string(name) + "'");
}

FeatureKind parse_feature(std::string_view name) {
  for (auto k : {FeatureKind::Stylometric, FeatureKind::Tfidf, FeatureKind::Embedding}) {
    if (feature_name(k) == name) return k;
  }
  throw Error(ErrorKind::ConfigError, "unknown feature '" + std::string(name) + "'");
}

// ---- config --------------------------------------------------------------

ExperimentConfig config_from_json(const json& root, const fs::path& base_dir) {
  if (!root.is_object()) config_error("config root must be a table");
  static const std::set<std::string> kSections = {"corpus", "split", "preprocess", "grid", "tfidf",
                                                  "word2vec", "lstm",  "gru",        "svm",  "nb",
                                                  "run"};
  for (const auto& [key, value] : root.items()) {
    if (!kSections.contains(key)) config_error("unknown section [" + key + "]");
  }
  auto resolve = [&](const std::string& p) {
    return (fs::path(p).is_absolute() ? fs::path(p) : base_dir / p).lexically_normal();
  };

  ExperimentConfig c;
  {
    Section s(root, "corpus");
    std::string path;
    std::string format = "jsonl";
    s.read("path", path);
    s.read("format", format);
    s.finish();
    if (!path.empty()) c.corpus_path = resolve(path);
    try {
      c.corpus_format = parse_corpus_format(format);
    } catch (const Error& e) {
      config_error(e.detail());
    }
  }
  {
    Section s(root, "split");
    s.read("train_fraction", c.split.train_fraction);
    s.read("stratified", c.split.stratified);
    c.split_seed_explicit = s.has("seed");
    s.read("seed", c.split.seed);
    s.finish();
    if (!(c.split.train_fraction > 0.0 && c.split.train_fraction < 1.0)) {
      config_error("split.train_fraction must lie strictly between 0 and 1");
    }
  }
  {
    Section s(root, "preprocess");
    s.read("lowercase_latin", c.preprocess.lowercase_latin);
    s.read("strip_punct", c.preprocess.strip_punct);
    s.read("remove_stopwords", c.preprocess.remove_stopwords);
    s.read("stem", c.preprocess.stem);
    std::string stopwords;
    s.read("stopwords_path", stopwords);
    s.finish();
    if (!stopwords.empty()) {
      c.stopwords_path = resolve(stopwords);
      try {
        const auto words = load_word_list(*c.stopwords_path);
        c.preprocess.stopwords = {words.begin(), words.end()};
      } catch (const Error& e) {
        config_error("preprocess.stopwords_path: " + e.detail());
      }
    }
  }
  {
    Section s(root, "grid");
    c.models = read_selector<ModelKind>(s, "models", parse_model);
    c.features = read_selector<FeatureKind>(s, "features", parse_feature);
    s.read("embedding_trainable", c.embedding_trainable);
    s.read("cross_trainable", c.cross_trainable);
    s.read("tfidf_as_sequence", c.tfidf_as_sequence);
    std::string pooling = "mean";
    s.read("embedding_pooling", pooling);
    s.finish();
    if (pooling == "mean") {
      c.embedding_pooling = Pooling::Mean;
    } else if (pooling == "none") {
      c.embedding_pooling = Pooling::None;
    } else {
      config_error("grid.embedding_pooling must be \"mean\" or \"none\"");
    }
  }
  {
    Section s(root, "tfidf");
    s.read("ngram_min", c.ngram_min);
    s.read("ngram_max", c.ngram_max);
    s.finish();
    if (c.ngram_min < 1 || c.ngram_max < c.ngram_min) config_error("tfidf n-gram range must satisfy 1 <= min <= max");
  }
  {
    Section s(root, "word2vec");
    s.read("dim", c.word2vec.dim);
    s.read("window", c.word2vec.window);
    s.read("negatives", c.word2vec.negatives);
    s.read("epochs", c.word2vec.epochs);
    s.read("initial_lr", c.word2vec.initial_lr);
    c.word2vec_seed_explicit = s.has("seed");
    s.read("seed", c.word2vec.seed);
    s.read("vocab_size", c.vocab_size);
    s.read("max_len", c.max_len);
    s.finish();
    try {
      c.word2vec.validate();
    } catch (const Error& e) {
      config_error(e.detail());
    }
    if (c.vocab_size < 1 || c.max_len < 1) config_error("word2vec.vocab_size and max_len must be >= 1");
  }
  read_rnn(root, "lstm", c.lstm);
  read_rnn(root, "gru", c.gru);
  {
    Section s(root, "svm");
    s.read("lambda", c.svm.lambda);
    s.read("epochs", c.svm.epochs);
    s.finish();
    if (!(c.svm.lambda > 0.0) || c.svm.epochs < 1) config_error("svm needs lambda > 0 and epochs >= 1");
  }
  {
    Section s(root, "nb");
    s.read("alpha", c.nb_alpha);
    s.finish();
    if (!(c.nb_alpha > 0.0)) config_error("nb.alpha must be positive");
  }
  {
    Section s(root, "run");
    s.read("seed", c.master_seed);
    std::string out;
    s.read("output_dir", out);
    s.read("checkpoints", c.write_checkpoints);
    s.finish();
    if (!out.empty()) c.output_dir = resolve(out);
  }
  if (!c.split_seed_explicit) c.split.seed = derive_seed(c.master_seed, "split");
  if (!c.word2vec_seed_explicit) c.word2vec.seed = derive_seed(c.master_seed, "word2vec");
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  return config_from_json(load_config_file(path), path.parent_path());
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["corpus"] = {{"path", c.corpus_path.string()}, {"format", format_name(c.corpus_format)}};
  j["split"] = {{"train_fraction", c.split.train_fraction}, {"stratified", c.split.stratified}, {"seed", c.split.seed}};
  j["preprocess"] = {{"lowercase_latin", c.preprocess.lowercase_latin},
                     {"strip_punct", c.preprocess.strip_punct},
                     {"remove_stopwords", c.preprocess.remove_stopwords},
                     {"stem", c.preprocess.stem}};
  if (c.stopwords_path) j["preprocess"]["stopwords_path"] = c.stopwords_path->string();
  json models = json::array();
  for (auto m : c.models) models.push_back(model_name(m));
  json features = json::array();
  for (auto f : c.features) features.push_back(feature_name(f));
  j["grid"] = {{"models", models},
               {"features", features},
               {"embedding_trainable", c.embedding_trainable},
               {"cross_trainable", c.cross_trainable},
               {"tfidf_as_sequence", c.tfidf_as_sequence},
               {"embedding_pooling", c.embedding_pooling == Pooling::Mean ? "mean" : "none"}};
  j["tfidf"] = {{"ngram_min", c.ngram_min}, {"ngram_max", c.ngram_max}};
  j["word2vec"] = {{"dim", c.word2vec.dim},
                   {"window", c.word2vec.window},
                   {"negatives", c.word2vec.negatives},
                   {"epochs", c.word2vec.epochs},
                   {"initial_lr", c.word2vec.initial_lr},
                   {"seed", c.word2vec.seed},
                   {"vocab_size", c.vocab_size},
                   {"max_len", c.max_len}};
  j["lstm"] = rnn_json(c.lstm);
  j["gru"] = rnn_json(c.gru);
  j["svm"] = {{"lambda", c.svm.lambda}, {"epochs", c.svm.epochs}};
  j["nb"] = {{"alpha", c.nb_alpha}};
  j["run"] = {{"seed", c.master_seed}, {"output_dir", c.output_dir.string()}, {"checkpoints", c.write_checkpoints}};
  return j;
}

void validate(const ExperimentConfig& config) {
  if (config.corpus_path.empty()) config_error("corpus.path is required");
  if (!fs::is_regular_file(config.corpus_path)) config_error("corpus file not found: " + config.corpus_path.string());
  if (config.models.empty()) config_error("grid.models is empty");
  if (config.features.empty()) config_error("grid.features is empty");
}

// ---- cells ---------------------------------------------------------------

std::string CellSpec::name() const {
  std::string n = std::string(model_name(model)) + "_" + std::string(feature_name(feature));
  if (tag_trainable && trainable) n += *trainable ? "_trainable" : "_frozen";
  return n;
}

void check_compatibility(const CellSpec& cell, const ExperimentConfig& config) {
  if (is_recurrent(cell.model)) {
    if (cell.feature == FeatureKind::Tfidf && !config.tfidf_as_sequence) {
      config_error(cell.name() + ": recurrent models take TF-IDF only with grid.tfidf_as_sequence = true");
    }
    return;
  }
  if (cell.feature == FeatureKind::Embedding && config.embedding_pooling == Pooling::None) {
    config_error(cell.name() + ": " + std::string(model_name(cell.model)) +
                 " cannot consume raw index sequences; set grid.embedding_pooling = \"mean\"");
  }
}

std::vector<CellSpec> expand_grid(const ExperimentConfig& config) {
  std::vector<CellSpec> cells;
  for (auto f : config.features) {
    for (auto m : config.models) {
      if (is_recurrent(m) && f == FeatureKind::Embedding) {
        if (config.cross_trainable) {
          cells.push_back({m, f, true, true});
          cells.push_back({m, f, false, true});
        } else {
          cells.push_back({m, f, config.embedding_trainable, false});
        }
      } else {
        cells.push_back({m, f, std::nullopt, false});
      }
    }
  }
  return cells;
}

std::size_t ExperimentReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.ok(); }));
}

// ---- pipeline ------------------------------------------------------------

/// Shared, lazily computed data products for the cells of one run.
class Pipeline {
 public:
  explicit Pipeline(const ExperimentConfig& config) : config_(config) {}

  const Split& split() {
    if (!split_) {
      const Corpus corpus = in_stage("load", [&] { return load_corpus(config_.corpus_path, config_.corpus_format); });
      split_ = in_stage("split", [&] { return stratified_split(corpus, config_.split); });
      train_labels_ = split_->train.labels();
      val_labels_ = split_->validation.labels();
    }
    return *split_;
  }

  const std::vector<int>& train_labels() { return split(), train_labels_; }
  const std::vector<int>& val_labels() { return split(), val_labels_; }

  const std::pair<std::vector<TokenSeq>, std::vector<TokenSeq>>& tokens() {
    if (!tokens_) {
      const auto& s = split();
      tokens_.emplace();
      in_stage("preprocess", [&] {
        for (const auto& p : s.train.posts()) tokens_->first.push_back(preprocess(p.text, config_.preprocess));
        for (const auto& p : s.validation.posts()) tokens_->second.push_back(preprocess(p.text, config_.preprocess));
        return 0;
      });
    }
    return *tokens_;
  }

  struct Dense {
    Matrix train;
    Matrix val;
  };

  const Dense& stylometric() {
    if (!stylo_) {
      const auto& s = split();
      stylo_ = in_stage("featurize", [&] {
        auto extract = [&](const Corpus& c) {
          Matrix m(static_cast<Index>(c.size()), kStyloDim);
          for (std::size_t i = 0; i < c.size(); ++i) {
            m.row(static_cast<Index>(i)) = extract_stylometric(c[i].text, config_.preprocess).transpose();
          }
          return m;
        };
        const Matrix train = extract(s.train);
        const Standardizer std_ = fit_standardizer(train);
        return Dense{apply_standardizer_rows(std_, train), apply_standardizer_rows(std_, extract(s.validation))};
      });
    }
    return *stylo_;
  }

  struct Tfidf {
    NGramVocabulary vocab;
    std::vector<SparseVector> train;
    std::vector<SparseVector> val;
    Matrix train_dense;
    Matrix val_dense;
  };

  const Tfidf& tfidf() {
    if (!tfidf_) {
      const auto& [train_tokens, val_tokens] = tokens();
      tfidf_ = in_stage("featurize", [&] {
        Tfidf t;
        t.vocab = fit_vectorizer(train_tokens, config_.ngram_min, config_.ngram_max);
        for (const auto& d : train_tokens) t.train.push_back(transform(t.vocab, d));
        for (const auto& d : val_tokens) t.val.push_back(transform(t.vocab, d));
        t.train_dense = transform_dense(t.vocab, train_tokens);
        t.val_dense = transform_dense(t.vocab, val_tokens);
        return t;
      });
    }
    return *tfidf_;
  }

  struct Embedding {
    IndexVocabulary vocab;
    EmbeddingMatrix matrix;
    std::vector<IndexSeq> train;
    std::vector<IndexSeq> val;
    Matrix pooled_train;
    Matrix pooled_val;
  };

  const Embedding& embedding() {
    if (!embedding_) {
      const auto& [train_tokens, val_tokens] = tokens();
      embedding_ = in_stage("featurize", [&] {
        Embedding e;
        e.vocab = build_vocab(train_tokens, config_.vocab_size);
        e.matrix = train_skipgram(train_tokens, e.vocab, config_.word2vec);
        auto encode = [&](const std::vector<TokenSeq>& docs, std::vector<IndexSeq>& seqs, Matrix& pooled) {
          pooled.resize(static_cast<Index>(docs.size()), e.matrix.dim());
          for (std::size_t i = 0; i < docs.size(); ++i) {
            seqs.push_back(encode_sequence(docs[i], e.vocab, config_.max_len));
            pooled.row(static_cast<Index>(i)) = mean_pool(e.matrix, seqs.back()).transpose();
          }
        };
        encode(train_tokens, e.train, e.pooled_train);
        encode(val_tokens, e.val, e.pooled_val);
        return e;
      });
    }
    return *embedding_;
  }

 private:
  const ExperimentConfig& config_;
  std::optional<Split> split_;
  std::vector<int> train_labels_;
  std::vector<int> val_labels_;
  std::optional<std::pair<std::vector<TokenSeq>, std::vector<TokenSeq>>> tokens_;
  std::optional<Dense> stylo_;
  std::optional<Tfidf> tfidf_;
  std::optional<Embedding> embedding_;
};

namespace {

std::vector<Matrix> as_length_one(const Matrix& rows) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Index i = 0; i < rows.rows(); ++i) out.emplace_back(rows.row(i));
  return out;
}

CellResult execute(const ExperimentConfig& config, const CellSpec& cell, Pipeline& pipe) {
  check_compatibility(cell, config);
  const auto start = std::chrono::steady_clock::now();
  CellResult result;
  result.cell = cell.name();
  result.row.model = std::string(model_name(cell.model));
  result.row.feature = std::string(feature_name(cell.feature));
  if (cell.trainable) result.row.trainable = *cell.trainable ? "true" : "false";
  const std::uint64_t seed = derive_seed(config.master_seed, cell.name());
  result.row.seed = seed;

  const auto& train_labels = pipe.train_labels();
  const auto& val_labels = pipe.val_labels();
  const bool save = config.write_checkpoints;
  const fs::path ck_dir = config.output_dir / "checkpoints";
  if (save) {
    std::error_code ec;
    fs::create_directories(ck_dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + ck_dir.string());
  }
  const fs::path stem = ck_dir / cell.name();
  std::vector<int> predictions;

  if (is_recurrent(cell.model)) {
    const RnnHyper& hyper = cell.model == ModelKind::Lstm ? config.lstm : config.gru;
    nn::RnnConfig rc;
    rc.cell = cell.model == ModelKind::Lstm ? nn::CellKind::Lstm : nn::CellKind::Gru;
    rc.hidden_dim = hyper.hidden_dim;
    rc.forget_bias = hyper.forget_bias;
    rc.optimizer = hyper.optimizer;
    rc.seed = derive_seed(seed, "init");
    nn::SequenceDataset train;
    nn::SequenceDataset val;
    std::optional<nn::RnnModel> model;
    if (cell.feature == FeatureKind::Embedding) {
      const auto& e = pipe.embedding();
      rc.embedding_trainable = cell.trainable.value_or(config.embedding_trainable);
      model.emplace(rc, e.matrix);
      train = {e.train, train_labels};
      val = {e.val, val_labels};
    } else {
      const Matrix& tr = cell.feature == FeatureKind::Stylometric ? pipe.stylometric().train : pipe.tfidf().train_dense;
      const Matrix& va = cell.feature == FeatureKind::Stylometric ? pipe.stylometric().val : pipe.tfidf().val_dense;
      rc.input_dim = tr.cols();
      model.emplace(rc);
      train = {as_length_one(tr), train_labels};
      val = {as_length_one(va), val_labels};
    }
    const nn::FitConfig fc{hyper.epochs, hyper.batch_size, derive_seed(seed, "fit")};
    result.history = in_stage("fit", [&] { return nn::fit(*model, train, val, fc); });
    predictions = in_stage("evaluate", [&] { return nn::predict(*model, val.inputs); });
    if (save) in_stage("checkpoint", [&] { return nn::save_checkpoint(*model, stem), 0; });
  } else if (cell.model == ModelKind::Svm) {
    const Matrix* tr = nullptr;
    const Matrix* va = nullptr;
    switch (cell.feature) {
      case FeatureKind::Stylometric: tr = &pipe.stylometric().train; va = &pipe.stylometric().val; break;
      case FeatureKind::Tfidf: tr = &pipe.tfidf().train_dense; va = &pipe.tfidf().val_dense; break;
      case FeatureKind::Embedding: tr = &pipe.embedding().pooled_train; va = &pipe.embedding().pooled_val; break;
    }
    SvmConfig sc = config.svm;
    sc.seed = derive_seed(seed, "fit");
    const SvmModel model = in_stage("fit", [&] { return fit_svm(*tr, train_labels, sc); });
    predictions = in_stage("evaluate", [&] { return predict_svm_rows(model, *va); });
    if (save) in_stage("checkpoint", [&] { return save_svm(model, sc, stem), 0; });
  } else {
    NbModel model;
    if (cell.feature == FeatureKind::Tfidf) {
      const auto& t = pipe.tfidf();
      model = in_stage("fit", [&] { return fit_nb(NbKind::Multinomial, t.train, train_labels, config.nb_alpha); });
      predictions = in_stage("evaluate", [&] {
        std::vector<int> out;
        for (const auto& v : t.val) out.push_back(predict_nb(model, v).label);
        return out;
      });
    } else {
      const Matrix& tr = cell.feature == FeatureKind::Stylometric ? pipe.stylometric().train : pipe.embedding().pooled_train;
      const Matrix& va = cell.feature == FeatureKind::Stylometric ? pipe.stylometric().val : pipe.embedding().pooled_val;
      model = in_stage("fit", [&] { return fit_nb(NbKind::Gaussian, tr, train_labels, config.nb_alpha); });
      predictions = in_stage("evaluate", [&] {
        std::vector<int> out;
        for (Index i = 0; i < va.rows(); ++i) out.push_back(predict_nb(model, Vector(va.row(i).transpose())).label);
        return out;
      });
    }
    if (save) in_stage("checkpoint", [&] { return save_nb(model, stem), 0; });
  }

  result.row.metrics = in_stage("evaluate", [&] { return classification_report(predictions, val_labels); });
  result.row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

CellResult run_single(const ExperimentConfig& config, const CellSpec& cell) {
  validate(config);
  check_compatibility(cell, config);
  Pipeline pipe(config);
  return execute(config, cell, pipe);
}

CellResult run_single(const ExperimentConfig& config) {
  validate(config);
  if (config.models.size() != 1 || config.features.size() != 1) {
    config_error("a single run needs exactly one model and one feature");
  }
  CellSpec cell{config.models[0], config.features[0], std::nullopt, false};
  if (is_recurrent(cell.model) && cell.feature == FeatureKind::Embedding) cell.trainable = config.embedding_trainable;
  return run_single(config, cell);
}

ExperimentReport run_grid(const ExperimentConfig& config) {
  validate(config);
  const auto grid = expand_grid(config);
  for (const auto& cell : grid) check_compatibility(cell, config);
  ExperimentReport report;
  Pipeline pipe(config);
  json cells = json::array();
  for (const auto& cell : grid) {
    CellResult result;
    try {
      result = execute(config, cell, pipe);
    } catch (const std::exception& e) {
      result.cell = cell.name();
      result.row.model = std::string(model_name(cell.model));
      result.row.feature = std::string(feature_name(cell.feature));
      if (cell.trainable) result.row.trainable = *cell.trainable ? "true" : "false";
      result.row.seed = derive_seed(config.master_seed, cell.name());
      result.row.error = e.what();
    }
    cells.push_back({{"name", result.cell}, {"seed", result.row.seed}, {"ok", result.row.ok()}});
    if (result.history) report.curves[result.cell] = *result.history;
    report.rows.push_back(std::move(result.row));
  }
  report.manifest = {{"version", kManifestVersion}, {"config", to_json(config)}, {"cells", cells}};
  return report;
}

// ---- rendering -----------------------------------------------------------

std::string render_results_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "model,feature,trainable,accuracy,f1,precision,recall,tp,fp,tn,fn,seed,status\n";
  for (const auto& r : report.rows) {
    const auto& m = r.metrics;
    out << r.model << ',' << r.feature << ',' << r.trainable << ',' << fixed(m.accuracy) << ',' << fixed(m.f1) << ','
        << fixed(m.precision) << ',' << fixed(m.recall) << ',' << m.confusion.tp << ',' << m.confusion.fp << ','
        << m.confusion.tn << ',' << m.confusion.fn << ',' << r.seed << ','
        << csv_field(r.ok() ? "ok" : "error: " + r.error) << '\n';
  }
  return out.str();
}

std::string render_results_markdown(const ExperimentReport& report) {
  const auto baseline = reference_baseline();
  const std::vector<std::string> header = {"model",     "feature", "trainable",    "accuracy",    "f1",
                                           "wall time (s)", "status",  "published acc", "published f1"};
  std::vector<std::vector<std::string>> table;
  for (const auto& r : report.rows) {
    std::vector<std::string> row = {r.model,
                                    r.feature,
                                    r.trainable,
                                    r.ok() ? fixed(100.0 * r.metrics.accuracy, 2) : "-",
                                    r.ok() ? fixed(100.0 * r.metrics.f1, 2) : "-",
                                    fixed(r.wall_time, 2),
                                    r.ok() ? "ok" : "error",
                                    "",
                                    ""};
    if (auto it = baseline.find({r.model, r.feature}); it != baseline.end()) {
      row[7] = it->second.accuracy;
      row[8] = it->second.f1;
    }
    table.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : table) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    out << '|';
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << ' ' << std::left << std::setw(static_cast<int>(width[c])) << cells[c] << " |";
    }
    out << '\n';
  };
  out << "# Results\n\nAccuracy and F1 in percent on the validation split; F1 scores the depressed class.\n"
      << "Published figures come from a private 983-post dataset and are shown for reference only.\n\n";
  emit(header);
  out << '|';
  for (auto w : width) out << std::string(w + 2, '-') << '|';
  out << '\n';
  for (const auto& row : table) emit(row);
  bool any_error = false;
  for (const auto& r : report.rows) {
    if (r.ok()) continue;
    if (!any_error) out << "\n## Failed cells\n\n";
    any_error = true;
    out << "- " << r.model << '/' << r.feature << ": " << r.error << '\n';
  }
  return out.str();
}

void export_report(const ExperimentReport& report, const fs::path& dir) {
  if (report.rows.empty()) throw Error(ErrorKind::InvalidArgument, "empty report");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "results.csv", render_results_csv(report));
  write_file(dir / "results.md", render_results_markdown(report));
  std::ostringstream timings;
  timings << "model,feature,trainable,wall_time_s\n";
  for (const auto& r : report.rows) {
    timings << r.model << ',' << r.feature << ',' << r.trainable << ',' << fixed(r.wall_time, 3) << '\n';
  }
  write_file(dir / "timings.csv", timings.str());
  for (const auto& [cell, history] : report.curves) {
    std::ostringstream curve;
    nn::write_history_csv(history, curve);
    write_file(dir / ("curves_" + cell + ".csv"), curve.str());
  }
  write_file(dir / "manifest.json", report.manifest.dump(2) + "\n");
}

ExperimentReport read_report(const fs::path& dir) {
  ExperimentReport report;
  std::istringstream in(read_file(dir / "results.csv"));
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 13) throw Error(ErrorKind::MalformedRecord, "results.csv line " + std::to_string(line_no));
    ReportRow r;
    r.model = f[0];
    r.feature = f[1];
    r.trainable = f[2];
    r.metrics.accuracy = std::stod(f[3]);
    r.metrics.f1 = std::stod(f[4]);
    r.metrics.precision = std::stod(f[5]);
    r.metrics.recall = std::stod(f[6]);
    r.metrics.confusion = {std::stoul(f[7]), std::stoul(f[8]), std::stoul(f[9]), std::stoul(f[10])};
    r.seed = std::stoull(f[11]);
    if (f[12] != "ok") r.error = f[12].starts_with("error: ") ? f[12].substr(7) : f[12];
    report.rows.push_back(std::move(r));
  }
  if (fs::exists(dir / "timings.csv")) {
    std::istringstream tin(read_file(dir / "timings.csv"));
    std::getline(tin, line);
    for (auto& r : report.rows) {
      if (!std::getline(tin, line)) break;
      const auto f = split_csv_line(line);
      if (f.size() == 4 && f[0] == r.model && f[1] == r.feature && f[2] == r.trainable) r.wall_time = std::stod(f[3]);
    }
  }
  if (fs::exists(dir / "manifest.json")) report.manifest = json::parse(read_file(dir / "manifest.json"));
  return report;
}

}  // namespace deptext
