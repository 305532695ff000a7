#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace obf {

struct LineDiff {
    std::vector<std::string> added;    // lines only in b
    std::vector<std::string> removed;  // lines only in a
    std::size_t common_lines = 0;
    std::size_t added_chars = 0;    // bytes incl. one newline per line
    std::size_t removed_chars = 0;
    std::size_t common_chars = 0;
};

/// Minimal line-level edit script between a and b (Myers / LCS). Lines are
/// split on '\n'; a trailing newline does not create an extra empty line.
LineDiff line_diff(std::string_view a, std::string_view b);

std::vector<std::string> split_lines(std::string_view text);

}  // namespace obf
