#pragma once

#include "obfuscator/diff.hpp"

#include <string>
#include <vector>

namespace obf {

/// Command templates for the external tools the harness drives. {in} and
/// {out} expand to file paths. The formatter must print the formatted file
/// to stdout.
struct ToolConfig {
    std::string compiler_cmd = "cc -std=c99 {in} -o {out}";
    std::string formatter_cmd;
    std::string obfuscator_cmd;
    double timeout_seconds = 10.0;
    std::string work_dir;  // scratch space; a temp dir when empty

    /// Empty when valid, otherwise a description of what's missing.
    std::string validate() const;
};

enum class TestStatus {
    Ok,
    CompileFailOriginal,
    CompileFailObfuscated,
    OutputMismatch,
    ObfuscatorError,
    ToolNotFound,
};

const char* to_string(TestStatus status);

struct TestResult {
    std::string name;
    TestStatus status = TestStatus::Ok;
    std::string detail;
};

struct DiffReport {
    std::string file;
    bool failed = false;
    std::string detail;
    std::size_t original_size_chars = 0;
    std::size_t obf_size_chars = 0;
    std::size_t added_chars = 0;
    std::size_t removed_chars = 0;
    double diff_pct = 0.0;
};

/// Compile-run-compare over every .c file in corpus_dir: the original and
/// the obfuscated program must compile and produce byte-identical output.
/// A sidecar `<name>.expect` file adds per-test assertions: lines of the
/// form `absent <ident>` (checked when the obfuscator command asks for
/// renaming) and `present <ident>` against the obfuscated source.
std::vector<TestResult> run_unit_tests(const std::string& corpus_dir,
                                       const ToolConfig& tools);

/// The six-step evaluation for one file: prettify, measure, obfuscate,
/// measure, prettify again, line-diff the two prettified texts. diff_pct is
/// 100 * (added+removed) / (added+removed+common) character mass of the
/// diff body.
DiffReport evaluate(const std::string& file, const ToolConfig& tools);

double diff_percentage(const LineDiff& diff);

std::string report(const std::vector<TestResult>& results);
std::string report(const std::vector<DiffReport>& reports);
std::string to_csv(const std::vector<DiffReport>& reports);

}  // namespace obf
