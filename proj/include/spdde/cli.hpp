#pragma once

#include <ostream>

namespace spdde {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCertificateFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point of the spdde command line; returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spdde
