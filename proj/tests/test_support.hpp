#ifndef DEPTEXT_TEST_SUPPORT_HPP
#define DEPTEXT_TEST_SUPPORT_HPP

#include <doctest.h>

#include <filesystem>
#include <string>

#include "deptext/error.hpp"

namespace deptext::test {

inline std::filesystem::path source_dir() { return DEPTEXT_SOURCE_DIR; }

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::current_path() / "scratch" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace deptext::test

// Checks that `expr` throws deptext::Error of the given kind.
#define CHECK_THROWS_KIND(expr, error_kind)                                    \
  do {                                                                         \
    bool thrown_ = false;                                                      \
    try {                                                                      \
      (void)(expr);                                                            \
    } catch (const ::deptext::Error& e_) {                                     \
      thrown_ = true;                                                          \
      CHECK_MESSAGE(e_.kind() == (error_kind), e_.what());                     \
    }                                                                          \
    CHECK_MESSAGE(thrown_, "expected deptext::Error from " #expr);             \
  } while (false)

#endif  // DEPTEXT_TEST_SUPPORT_HPP
