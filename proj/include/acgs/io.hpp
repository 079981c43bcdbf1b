#pragma once

#include "acgs/model.hpp"

#include <iosfwd>
#include <string>

namespace acgs {

// Reads the line-oriented .acgs format. Agents without an ability entry default
// to IR; states without a protocol entry allow every action of the agent.
Stcgs parse_acgs(std::string_view text);
Stcgs load_acgs(const std::string& path);

// Throws ModelError for names that parse_acgs would reject.
void write_acgs(std::ostream& os, const Stcgs& m);
std::string to_acgs(const Stcgs& m);

// One formula per line; blank lines and '#' comments are skipped.
std::vector<std::string> read_formula_lines(std::string_view text);

}  // namespace acgs
