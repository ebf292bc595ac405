#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reconet {

/// Entry point behind the `reconet` executable. `args` excludes the program
/// name. Data goes to `out`, diagnostics to `err`. Exit codes: 0 success,
/// 2 parse/format, 3 precondition, 4 numerical failure, 5 unknown method/flag.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reconet
