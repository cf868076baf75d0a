#ifndef DEPTEXT_CHECKPOINT_HPP
#define DEPTEXT_CHECKPOINT_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deptext/types.hpp"

namespace deptext {

struct Blob {
  std::string name;
  Matrix value;
};

/// Binary layout: magic "DTCKPT01", blob count, then per blob the name
/// length, name bytes, rows, cols (all little-endian u64) and rows * cols
/// little-endian f64 values row-major.
void write_blobs(std::ostream& out, const std::vector<Blob>& blobs);
std::vector<Blob> read_blobs(std::istream& in);

/// Writes <stem>.bin and <stem>.json. Throws IoError.
void write_checkpoint(const std::filesystem::path& stem, const nlohmann::json& manifest,
                      const std::vector<Blob>& blobs);

struct Checkpoint {
  nlohmann::json manifest;
  std::vector<Blob> blobs;

  /// Throws IoError when missing.
  const Matrix& blob(const std::string& name) const;
};

Checkpoint read_checkpoint(const std::filesystem::path& stem);

}  // namespace deptext

#endif  // DEPTEXT_CHECKPOINT_HPP
