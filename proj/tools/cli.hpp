#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wpg::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalidInput = 2;
inline constexpr int kIoFailure = 3;
inline constexpr int kVerificationFailure = 4;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wpg::cli
