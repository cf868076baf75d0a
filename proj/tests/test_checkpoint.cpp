#include "test_support.hpp"

#include <fstream>
#include <sstream>

#include "deptext/checkpoint.hpp"

using namespace deptext;

TEST_CASE("blob stream round trip") {
  std::vector<Blob> blobs;
  Matrix a(2, 3);
  a << 1.5, -2.25, 3e-300,
       -0.0, 1e300, 7;
  blobs.push_back({"a", a});
  blobs.push_back({"empty", Matrix(0, 4)});
  blobs.push_back({"unicode näme", Matrix::Constant(1, 1, 0.1)});
  std::stringstream ss;
  write_blobs(ss, blobs);
  const auto back = read_blobs(ss);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].name == blobs[i].name);
    CHECK(back[i].value.rows() == blobs[i].value.rows());
    CHECK(back[i].value.cols() == blobs[i].value.cols());
    CHECK(back[i].value == blobs[i].value);
  }
}

TEST_CASE("byte layout is little-endian and row-major") {
  Matrix m(1, 2);
  m << 1.0, 2.0;
  std::stringstream ss;
  write_blobs(ss, {{"m", m}});
  const std::string bytes = ss.str();
  CHECK(bytes.substr(0, 8) == "DTCKPT01");
  // magic, count, name length, name, rows, cols, then two doubles
  CHECK(bytes.size() == 8 + 8 + 8 + 1 + 8 + 8 + 16);
  CHECK(static_cast<unsigned char>(bytes[8]) == 1);
  // 1.0 is 0x3FF0000000000000: last stored byte of the first value is 0x3F.
  CHECK(static_cast<unsigned char>(bytes[8 + 8 + 8 + 1 + 8 + 8 + 7]) == 0x3F);
}

TEST_CASE("corrupt streams are rejected") {
  std::stringstream bad("NOTACKPT");
  CHECK_THROWS_KIND(read_blobs(bad), ErrorKind::IoError);

  std::stringstream ss;
  write_blobs(ss, {{"m", Matrix::Ones(3, 3)}});
  std::string bytes = ss.str();
  bytes.resize(bytes.size() - 5);
  std::stringstream truncated(bytes);
  CHECK_THROWS_KIND(read_blobs(truncated), ErrorKind::IoError);
}

TEST_CASE("checkpoint files") {
  const auto dir = test::scratch_dir("checkpoint");
  nlohmann::json manifest = {{"kind", "test"}, {"n", 3}};
  write_checkpoint(dir / "ck", manifest, {{"w", Matrix::Identity(2, 2)}});
  CHECK(std::filesystem::exists(dir / "ck.bin"));
  CHECK(std::filesystem::exists(dir / "ck.json"));
  const Checkpoint ck = read_checkpoint(dir / "ck");
  CHECK(ck.manifest == manifest);
  CHECK(ck.blob("w") == Matrix::Identity(2, 2));
  CHECK_THROWS_KIND(ck.blob("missing"), ErrorKind::IoError);
  CHECK_THROWS_KIND(read_checkpoint(dir / "nope"), ErrorKind::IoError);
}
