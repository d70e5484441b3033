#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cq {

// Command-line front end: one verb with operands, a --script batch file, or
// (with neither) the interactive loop on `in`. Returns the exit code: 0 on
// success, 1 on domain errors, 2 on syntax or usage errors. When
// `interactive` is set the loop writes a prompt before each line.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err, bool interactive = false);

}  // namespace cq
