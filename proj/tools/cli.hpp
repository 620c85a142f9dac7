#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cges/data.hpp"
#include "cges/graph.hpp"

namespace cges::cli {

enum ExitCode : int { ok = 0, usage = 1, data_error = 2, internal = 3 };

/// Edge list: a `nodes N directed D undirected U` header, then `u -> v` and `u -- v` lines.
std::string write_edge_list(const Pdag& g, const std::vector<Variable>& variables);
/// Throws ParseError on malformed lines and VariableMismatch on unknown names.
Pdag read_edge_list(std::string_view text, const std::vector<Variable>& variables);

/// Parsed `key = value` lines; `#` starts a comment. Values are split on whitespace.
struct Manifest {
    std::vector<std::pair<std::string, std::vector<std::string>>> entries;
    const std::vector<std::string>* find(std::string_view key) const;
};
Manifest parse_manifest(std::string_view text);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cges::cli
