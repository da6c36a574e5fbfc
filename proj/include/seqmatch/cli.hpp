#pragma once

#include <iosfwd>

namespace seqmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

// Entry point of the seqmatch tool. Results go to --out (atomically) or to
// out; one-line errors go to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seqmatch::cli
