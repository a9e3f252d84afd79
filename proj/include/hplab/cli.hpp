#pragma once

// The hplab command-line runner.
//
//   hplab <command> [options]      commands: gram h1 hannorm dk pick thmc1
//                                  interpseq example316 example317 selftest plot
//   hplab --config run.json        command and options from a JSON object
//
// Exit codes: 0 success, 1 numerical failure (JSON diagnostic on stdout),
// 2 usage or schema error.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hplab {

inline constexpr std::uint64_t kDefaultSeed = 20240501;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hplab
