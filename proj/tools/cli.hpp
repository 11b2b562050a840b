#pragma once

#include <iosfwd>

namespace derivcheck::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitWarnings = 1;
inline constexpr int kExitInputError = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace derivcheck::cli
