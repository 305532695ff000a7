#include "obfuscator/diff.hpp"

#include <algorithm>

namespace obf {

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

namespace {

// Myers' greedy shortest-edit-script search over line indices, with the
// per-step furthest-reaching vectors kept for backtracking. Inputs are the
// line arrays with any common prefix/suffix already trimmed off.
struct EditScript {
    // For each index pair step: true = line from a (removed), false = from b.
    std::vector<std::pair<char, std::size_t>> ops;  // ('-',i) / ('+',j)
    bool found = false;
};

EditScript myers(const std::vector<std::string>& a,
                 const std::vector<std::string>& b, int max_d) {
    int n = static_cast<int>(a.size());
    int m = static_cast<int>(b.size());
    int offset = std::max(n + m, 1);
    std::vector<std::vector<int>> trace;
    std::vector<int> v(2 * static_cast<std::size_t>(offset) + 1, 0);

    EditScript script;
    int final_d = -1;
    for (int d = 0; d <= std::min(n + m, max_d); ++d) {
        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && v[static_cast<std::size_t>(offset + k - 1)] <
                                          v[static_cast<std::size_t>(offset + k + 1)]))
                x = v[static_cast<std::size_t>(offset + k + 1)];
            else
                x = v[static_cast<std::size_t>(offset + k - 1)] + 1;
            int y = x - k;
            while (x < n && y < m && a[static_cast<std::size_t>(x)] ==
                                         b[static_cast<std::size_t>(y)]) {
                ++x;
                ++y;
            }
            v[static_cast<std::size_t>(offset + k)] = x;
            if (x >= n && y >= m) {
                final_d = d;
                break;
            }
        }
        trace.push_back(v);
        if (final_d >= 0) break;
    }
    if (final_d < 0) return script;  // capped out

    // Backtrack through the stored vectors.
    int x = n;
    int y = m;
    for (int d = final_d; d > 0; --d) {
        const auto& prev = trace[static_cast<std::size_t>(d - 1)];
        int k = x - y;
        int prev_k;
        if (k == -d || (k != d && prev[static_cast<std::size_t>(offset + k - 1)] <
                                      prev[static_cast<std::size_t>(offset + k + 1)]))
            prev_k = k + 1;
        else
            prev_k = k - 1;
        int prev_x = prev[static_cast<std::size_t>(offset + prev_k)];
        int prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            --x;
            --y;  // diagonal: common line
        }
        if (x == prev_x) {
            script.ops.emplace_back('+', static_cast<std::size_t>(prev_y));
            y = prev_y;
        } else {
            script.ops.emplace_back('-', static_cast<std::size_t>(prev_x));
            x = prev_x;
        }
    }
    script.found = true;
    return script;
}

std::size_t char_mass(const std::string& line) { return line.size() + 1; }

}  // namespace

LineDiff line_diff(std::string_view a_text, std::string_view b_text) {
    auto a = split_lines(a_text);
    auto b = split_lines(b_text);

    LineDiff diff;

    std::size_t prefix = 0;
    while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) {
        diff.common_chars += char_mass(a[prefix]);
        ++diff.common_lines;
        ++prefix;
    }
    std::size_t suffix = 0;
    while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
           a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
        diff.common_chars += char_mass(a[a.size() - 1 - suffix]);
        ++diff.common_lines;
        ++suffix;
    }

    std::vector<std::string> mid_a(a.begin() + static_cast<std::ptrdiff_t>(prefix),
                                   a.end() - static_cast<std::ptrdiff_t>(suffix));
    std::vector<std::string> mid_b(b.begin() + static_cast<std::ptrdiff_t>(prefix),
                                   b.end() - static_cast<std::ptrdiff_t>(suffix));

    // 5000 edit steps cover any realistic source pair; beyond that the
    // texts share essentially nothing and the coarse answer is the truth.
    EditScript script = myers(mid_a, mid_b, 5000);
    if (!script.found) {
        for (auto& line : mid_a) {
            diff.removed_chars += char_mass(line);
            diff.removed.push_back(std::move(line));
        }
        for (auto& line : mid_b) {
            diff.added_chars += char_mass(line);
            diff.added.push_back(std::move(line));
        }
        return diff;
    }

    std::vector<bool> a_removed(mid_a.size(), false);
    std::vector<bool> b_added(mid_b.size(), false);
    for (auto& [op, index] : script.ops) {
        if (op == '-') a_removed[index] = true;
        else b_added[index] = true;
    }
    for (std::size_t i = 0; i < mid_a.size(); ++i) {
        if (a_removed[i]) {
            diff.removed_chars += char_mass(mid_a[i]);
            diff.removed.push_back(mid_a[i]);
        } else {
            diff.common_chars += char_mass(mid_a[i]);
            ++diff.common_lines;
        }
    }
    for (std::size_t j = 0; j < mid_b.size(); ++j) {
        if (b_added[j]) {
            diff.added_chars += char_mass(mid_b[j]);
            diff.added.push_back(mid_b[j]);
        }
    }
    return diff;
}

}  // namespace obf
