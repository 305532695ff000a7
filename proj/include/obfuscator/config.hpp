#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace obf {

/// Per-run obfuscation settings. The seed fully determines every random
/// choice made downstream, so equal (input, config) pairs give byte-equal
/// output.
struct ObfuscationConfig {
    bool rename = false;  // identifier renaming is opt-in
    std::uint64_t seed = 0;
    std::set<std::string> keep_list;
    bool enable_int_split = true;
    bool enable_bool_noise = true;
    bool enable_xor_eq = true;
    std::vector<std::string> include_paths;  // reserved for a preprocessor
    std::optional<std::string> output_path;
    bool dump_ast = false;
};

}  // namespace obf
