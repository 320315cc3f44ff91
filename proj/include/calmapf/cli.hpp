/*
 * command line front end: run / sweep / verify
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace calmapf {

// Exit codes: 0 success, 1 run failure (or conflict found by verify),
// 2 usage / configuration / parse error.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace calmapf
