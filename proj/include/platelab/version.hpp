#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace platelab {

inline constexpr const char* kVersion = "0.1.0";

/// Writes "# platelab <version>" followed by the comma-separated header row.
void write_csv_preamble(std::ostream& os, const std::vector<std::string>& columns);

} // namespace platelab
