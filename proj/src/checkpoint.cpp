#include "deptext/checkpoint.hpp"

#include <fstream>

#include "binary_io.hpp"
#include "deptext/error.hpp"

namespace deptext {
namespace {

constexpr char kCheckpointMagic[9] = "DTCKPT01";

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

}  // namespace

void write_blobs(std::ostream& out, const std::vector<Blob>& blobs) {
  binary::put_magic(out, kCheckpointMagic);
  binary::put_u64(out, blobs.size());
  for (const auto& blob : blobs) {
    binary::put_u64(out, blob.name.size());
    out.write(blob.name.data(), static_cast<std::streamsize>(blob.name.size()));
    binary::put_u64(out, static_cast<std::uint64_t>(blob.value.rows()));
    binary::put_u64(out, static_cast<std::uint64_t>(blob.value.cols()));
    for (Index r = 0; r < blob.value.rows(); ++r) {
      for (Index c = 0; c < blob.value.cols(); ++c) binary::put_f64(out, blob.value(r, c));
    }
  }
}

std::vector<Blob> read_blobs(std::istream& in) {
  binary::expect_magic(in, kCheckpointMagic);
  const auto count = binary::get_u64(in);
  std::vector<Blob> blobs;
  for (std::uint64_t i = 0; i < count; ++i) {
    Blob blob;
    blob.name.resize(binary::get_u64(in));
    if (!in.read(blob.name.data(), static_cast<std::streamsize>(blob.name.size()))) {
      throw Error(ErrorKind::IoError, "truncated blob name");
    }
    const auto rows = static_cast<Index>(binary::get_u64(in));
    const auto cols = static_cast<Index>(binary::get_u64(in));
    blob.value.resize(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) blob.value(r, c) = binary::get_f64(in);
    }
    blobs.push_back(std::move(blob));
  }
  return blobs;
}

void write_checkpoint(const std::filesystem::path& stem, const nlohmann::json& manifest,
                      const std::vector<Blob>& blobs) {
  const auto bin = with_suffix(stem, ".bin");
  const auto json = with_suffix(stem, ".json");
  std::ofstream out(bin, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + bin.string());
  write_blobs(out, blobs);
  std::ofstream mout(json, std::ios::binary);
  if (!mout) throw Error(ErrorKind::IoError, "cannot write " + json.string());
  mout << manifest.dump(2) << '\n';
}

const Matrix& Checkpoint::blob(const std::string& name) const {
  for (const auto& b : blobs) {
    if (b.name == name) return b.value;
  }
  throw Error(ErrorKind::IoError, "checkpoint has no blob '" + name + "'");
}

Checkpoint read_checkpoint(const std::filesystem::path& stem) {
  const auto bin = with_suffix(stem, ".bin");
  const auto json = with_suffix(stem, ".json");
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + bin.string());
  std::ifstream min(json, std::ios::binary);
  if (!min) throw Error(ErrorKind::IoError, "cannot open " + json.string());
  Checkpoint ck;
  ck.blobs = read_blobs(in);
  try {
    ck.manifest = nlohmann::json::parse(min);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::IoError, json.string() + ": " + e.what());
  }
  return ck;
}

}  // namespace deptext
