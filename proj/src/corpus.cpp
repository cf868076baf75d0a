#include "deptext/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "deptext/error.hpp"
#include "deptext/random.hpp"
#include "deptext/unicode.hpp"

namespace deptext {
namespace {

bool is_blank(std::string_view text) {
  const auto cps = unicode::decode(text);
  return std::all_of(cps.begin(), cps.end(), unicode::is_whitespace);
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }

LabeledPost make_post(std::string id, std::string text, std::string_view label, std::size_t line) {
  if (!unicode::is_valid_utf8(id) || !unicode::is_valid_utf8(text)) {
    throw Error(ErrorKind::MalformedRecord, at_line(line) + ": invalid UTF-8");
  }
  LabeledPost post;
  try {
    post.label = parse_label(label);
  } catch (const Error& e) {
    throw Error(ErrorKind::UnknownLabel, at_line(line) + ": unknown label '" + std::string(label) + "'");
  }
  if (id.empty()) throw Error(ErrorKind::MalformedRecord, at_line(line) + ": empty id");
  if (is_blank(text)) throw Error(ErrorKind::EmptyText, at_line(line) + ": id '" + id + "'");
  post.id = std::move(id);
  post.text = std::move(text);
  return post;
}

// RFC-4180 record reader. Returns false at end of input. `line` is advanced
// past every physical line consumed.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  const std::size_t start_line = line + 1;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw Error(ErrorKind::MalformedRecord, at_line(start_line) + ": stray quote");
      }
      quoted = true;
      field_was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '\r' && in.peek() == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      fields.push_back(std::move(field));
      return true;
    } else {
      if (field_was_quoted) {
        throw Error(ErrorKind::MalformedRecord, at_line(start_line) + ": text after closing quote");
      }
      field.push_back(c);
    }
  }
  if (quoted) throw Error(ErrorKind::MalformedRecord, at_line(start_line) + ": unterminated quote");
  ++line;
  fields.push_back(std::move(field));
  return true;
}

std::string csv_quote(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string_view label_name(Label label) {
  return label == Label::Depressed ? "depressed" : "not_depressed";
}

Label parse_label(std::string_view name) {
  if (name == "depressed") return Label::Depressed;
  if (name == "not_depressed") return Label::NotDepressed;
  throw Error(ErrorKind::UnknownLabel, "unknown label '" + std::string(name) + "'");
}

Corpus::Corpus(std::vector<LabeledPost> posts) : posts_(std::move(posts)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(posts_.size());
  for (const auto& post : posts_) {
    if (!seen.insert(post.id).second) throw Error(ErrorKind::DuplicateId, "id '" + post.id + "'");
    if (is_blank(post.text)) throw Error(ErrorKind::EmptyText, "id '" + post.id + "'");
  }
}

std::size_t Corpus::count(Label label) const {
  return static_cast<std::size_t>(
      std::count_if(posts_.begin(), posts_.end(), [&](const auto& p) { return p.label == label; }));
}

std::array<std::size_t, 2> Corpus::counts() const {
  return {count(Label::NotDepressed), count(Label::Depressed)};
}

std::vector<std::string> Corpus::texts() const {
  std::vector<std::string> out;
  out.reserve(posts_.size());
  for (const auto& p : posts_) out.push_back(p.text);
  return out;
}

std::vector<int> Corpus::labels() const {
  std::vector<int> out;
  out.reserve(posts_.size());
  for (const auto& p : posts_) out.push_back(class_index(p.label));
  return out;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::Jsonl;
  if (name == "csv") return CorpusFormat::Csv;
  throw Error(ErrorKind::InvalidArgument, "unknown corpus format '" + std::string(name) + "'");
}

std::string_view format_name(CorpusFormat format) {
  return format == CorpusFormat::Jsonl ? "jsonl" : "csv";
}

Corpus parse_jsonl(std::istream& in) {
  std::vector<LabeledPost> posts;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::MalformedRecord, at_line(line_no) + ": " + e.what());
    }
    if (!record.is_object()) throw Error(ErrorKind::MalformedRecord, at_line(line_no) + ": not an object");
    for (const char* key : {"id", "text", "label"}) {
      if (!record.contains(key) || !record[key].is_string()) {
        throw Error(ErrorKind::MalformedRecord,
                    at_line(line_no) + ": missing string field '" + key + "'");
      }
    }
    auto post = make_post(record["id"].get<std::string>(), record["text"].get<std::string>(),
                          record["label"].get<std::string>(), line_no);
    if (!ids.insert(post.id).second) {
      throw Error(ErrorKind::DuplicateId, at_line(line_no) + ": id '" + post.id + "'");
    }
    posts.push_back(std::move(post));
  }
  return Corpus(std::move(posts));
}

Corpus parse_csv(std::istream& in) {
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!read_csv_record(in, fields, line) ||
      fields != std::vector<std::string>{"id", "text", "label"}) {
    throw Error(ErrorKind::MalformedRecord, "line 1: expected header 'id,text,label'");
  }
  std::vector<LabeledPost> posts;
  std::unordered_set<std::string> ids;
  while (true) {
    const std::size_t record_line = line + 1;
    if (!read_csv_record(in, fields, line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 3) {
      throw Error(ErrorKind::MalformedRecord, at_line(record_line) + ": expected 3 fields, got " +
                                                  std::to_string(fields.size()));
    }
    auto post = make_post(std::move(fields[0]), std::move(fields[1]), fields[2], record_line);
    if (!ids.insert(post.id).second) {
      throw Error(ErrorKind::DuplicateId, at_line(record_line) + ": id '" + post.id + "'");
    }
    posts.push_back(std::move(post));
  }
  return Corpus(std::move(posts));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return format == CorpusFormat::Jsonl ? parse_jsonl(in) : parse_csv(in);
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const auto& post : corpus.posts()) {
    nlohmann::ordered_json record;
    record["id"] = post.id;
    record["text"] = post.text;
    record["label"] = label_name(post.label);
    out << record.dump() << '\n';
  }
}

void write_csv(const Corpus& corpus, std::ostream& out) {
  out << "id,text,label\n";
  for (const auto& post : corpus.posts()) {
    out << csv_quote(post.id) << ',' << csv_quote(post.text) << ',' << label_name(post.label) << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  if (format == CorpusFormat::Jsonl) {
    write_jsonl(corpus, out);
  } else {
    write_csv(corpus, out);
  }
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "train_fraction must lie strictly between 0 and 1");
  }
}

Split stratified_split(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<bool> in_train(corpus.size(), false);

  auto take = [&](std::vector<std::size_t>& members) {
    const auto n = members.size();
    auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    rng.shuffle(std::span(members));
    for (std::size_t i = 0; i < n_train; ++i) in_train[members[i]] = true;
  };

  if (spec.stratified) {
    for (Label label : {Label::NotDepressed, Label::Depressed}) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (corpus[i].label == label) members.push_back(i);
      }
      if (members.size() < 2) {
        throw Error(ErrorKind::ClassTooSmall, std::string(label_name(label)) + " has " +
                                                  std::to_string(members.size()) + " posts");
      }
      take(members);
    }
  } else {
    if (corpus.size() < 2) throw Error(ErrorKind::ClassTooSmall, "corpus has fewer than 2 posts");
    std::vector<std::size_t> members(corpus.size());
    for (std::size_t i = 0; i < members.size(); ++i) members[i] = i;
    take(members);
  }

  std::vector<LabeledPost> train;
  std::vector<LabeledPost> validation;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (in_train[i] ? train : validation).push_back(corpus[i]);
  }
  return {Corpus(std::move(train)), Corpus(std::move(validation))};
}

}  // namespace deptext
