#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sgf {

// Entry point of the `sgf` command-line tool. args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgf
