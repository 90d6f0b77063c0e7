#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace efl {

// Exit codes: 0 proved/pass, 1 refuted/counterexample, 2 unknown or
// inconclusive, 3 usage, parse or type error.
enum Exit { kProved = 0, kRefuted = 1, kUnknown = 2, kError = 3 };

// Runs one command line (without the program name) and returns the exit
// code. Reports go to `out`, errors to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace efl
