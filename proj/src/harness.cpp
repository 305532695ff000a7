#include "obfuscator/harness.hpp"

#include "obfuscator/subprocess.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace obf {

namespace {

std::string replace_all(std::string text, const std::string& what,
                        const std::string& with) {
    std::size_t pos = 0;
    while ((pos = text.find(what, pos)) != std::string::npos) {
        text.replace(pos, what.size(), with);
        pos += with.size();
    }
    return text;
}

std::string expand(const std::string& tmpl, const std::string& in,
                   const std::string& out = "") {
    return replace_all(replace_all(tmpl, "{in}", in), "{out}", out);
}

std::string read_file(const fs::path& path) {
    std::ifstream stream(path, std::ios::binary);
    std::ostringstream buf;
    buf << stream.rdbuf();
    return buf.str();
}

bool write_file(const fs::path& path, const std::string& content) {
    std::ofstream stream(path, std::ios::binary);
    stream << content;
    return static_cast<bool>(stream);
}

fs::path scratch_dir(const ToolConfig& tools, const std::string& label) {
    fs::path base = tools.work_dir.empty()
                        ? fs::temp_directory_path() / "obfuscator-harness"
                        : fs::path(tools.work_dir);
    fs::path dir = base / label;
    std::error_code ec;
    fs::create_directories(dir, ec);
    return dir;
}

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
}

bool contains_identifier(const std::string& text, const std::string& name) {
    std::size_t pos = 0;
    while ((pos = text.find(name, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
        std::size_t end = pos + name.size();
        bool right_ok = end >= text.size() || !is_word_char(text[end]);
        if (left_ok && right_ok) return true;
        pos = end;
    }
    return false;
}

// Sidecar expectations: `absent foo` / `present main`, # for comments.
// Absent checks only apply when the obfuscator was asked to rename.
std::string check_expectations(const fs::path& expect_file,
                               const std::string& obf_source,
                               bool rename_active) {
    std::ifstream stream(expect_file);
    std::string line;
    while (std::getline(stream, line)) {
        std::istringstream fields(line);
        std::string directive;
        std::string name;
        fields >> directive >> name;
        if (directive.empty() || directive[0] == '#' || name.empty()) continue;
        if (directive == "absent" && rename_active) {
            if (contains_identifier(obf_source, name))
                return "identifier '" + name + "' still present";
        } else if (directive == "present") {
            if (!contains_identifier(obf_source, name))
                return "identifier '" + name + "' missing";
        }
    }
    return "";
}

std::string first_line(const std::string& text) {
    std::size_t nl = text.find('\n');
    return nl == std::string::npos ? text : text.substr(0, nl);
}

TestResult run_one_test(const fs::path& source, const ToolConfig& tools) {
    TestResult result;
    result.name = source.filename().string();
    fs::path dir = scratch_dir(tools, source.stem().string());

    fs::path orig_bin = dir / "original";
    auto compile_orig =
        run_command(expand(tools.compiler_cmd, source.string(), orig_bin.string()),
                    tools.timeout_seconds);
    if (compile_orig.command_not_found()) {
        result.status = TestStatus::ToolNotFound;
        result.detail = "compiler: " + first_line(compile_orig.err);
        return result;
    }
    if (!compile_orig.ok()) {
        result.status = TestStatus::CompileFailOriginal;
        result.detail = first_line(compile_orig.err);
        return result;
    }
    auto run_orig = run_command(orig_bin.string(), tools.timeout_seconds);
    if (run_orig.timed_out) {
        result.status = TestStatus::CompileFailOriginal;
        result.detail = "original program timed out";
        return result;
    }

    fs::path obf_source = dir / ("obf_" + source.filename().string());
    auto obfuscate =
        run_command(expand(tools.obfuscator_cmd, source.string(), obf_source.string()),
                    tools.timeout_seconds);
    if (obfuscate.command_not_found()) {
        result.status = TestStatus::ToolNotFound;
        result.detail = "obfuscator: " + first_line(obfuscate.err);
        return result;
    }
    if (!obfuscate.ok() || !fs::exists(obf_source)) {
        result.status = TestStatus::ObfuscatorError;
        result.detail = first_line(obfuscate.err);
        return result;
    }

    fs::path obf_bin = dir / "obfuscated";
    auto compile_obf = run_command(
        expand(tools.compiler_cmd, obf_source.string(), obf_bin.string()),
        tools.timeout_seconds);
    if (!compile_obf.ok()) {
        result.status = TestStatus::CompileFailObfuscated;
        result.detail = first_line(compile_obf.err);
        return result;
    }
    auto run_obf = run_command(obf_bin.string(), tools.timeout_seconds);
    if (run_obf.timed_out || run_obf.out != run_orig.out ||
        run_obf.exit_code != run_orig.exit_code) {
        result.status = TestStatus::OutputMismatch;
        result.detail = run_obf.timed_out ? "obfuscated program timed out"
                                          : "stdout or exit code differs";
        return result;
    }

    fs::path expect = source;
    expect.replace_extension(".expect");
    if (fs::exists(expect)) {
        bool rename_active =
            tools.obfuscator_cmd.find("--rename") != std::string::npos;
        std::string failure =
            check_expectations(expect, read_file(obf_source), rename_active);
        if (!failure.empty()) {
            result.status = TestStatus::ObfuscatorError;
            result.detail = failure;
            return result;
        }
    }

    result.status = TestStatus::Ok;
    return result;
}

}  // namespace

std::string ToolConfig::validate() const {
    std::string problems;
    if (compiler_cmd.find("{in}") == std::string::npos ||
        compiler_cmd.find("{out}") == std::string::npos)
        problems += "compiler command needs {in} and {out}; ";
    if (!formatter_cmd.empty() &&
        formatter_cmd.find("{in}") == std::string::npos)
        problems += "formatter command needs {in}; ";
    if (obfuscator_cmd.find("{in}") == std::string::npos ||
        obfuscator_cmd.find("{out}") == std::string::npos)
        problems += "obfuscator command needs {in} and {out}; ";
    return problems;
}

const char* to_string(TestStatus status) {
    switch (status) {
        case TestStatus::Ok: return "ok";
        case TestStatus::CompileFailOriginal: return "compile_fail_original";
        case TestStatus::CompileFailObfuscated: return "compile_fail_obfuscated";
        case TestStatus::OutputMismatch: return "output_mismatch";
        case TestStatus::ObfuscatorError: return "obfuscator_error";
        case TestStatus::ToolNotFound: return "tool_not_found";
    }
    return "?";
}

std::vector<TestResult> run_unit_tests(const std::string& corpus_dir,
                                       const ToolConfig& tools) {
    std::vector<fs::path> sources;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(corpus_dir, ec)) {
        if (entry.path().extension() == ".c") sources.push_back(entry.path());
    }
    std::sort(sources.begin(), sources.end());

    std::vector<TestResult> results;
    results.reserve(sources.size());
    for (const auto& source : sources)
        results.push_back(run_one_test(source, tools));
    return results;
}

double diff_percentage(const LineDiff& diff) {
    std::size_t changed = diff.added_chars + diff.removed_chars;
    std::size_t total = changed + diff.common_chars;
    if (total == 0) return 0.0;
    return 100.0 * static_cast<double>(changed) / static_cast<double>(total);
}

DiffReport evaluate(const std::string& file, const ToolConfig& tools) {
    DiffReport rep;
    rep.file = fs::path(file).filename().string();
    fs::path dir = scratch_dir(tools, "eval_" + fs::path(file).stem().string());

    auto fail = [&](const std::string& why) {
        rep.failed = true;
        rep.detail = why;
        return rep;
    };

    auto pretty_orig = run_command(expand(tools.formatter_cmd, file),
                                   tools.timeout_seconds);
    if (!pretty_orig.ok())
        return fail("formatter failed: " + first_line(pretty_orig.err));
    rep.original_size_chars = pretty_orig.out.size();

    fs::path pretty_path = dir / "pretty_original.c";
    if (!write_file(pretty_path, pretty_orig.out))
        return fail("cannot write scratch file");

    fs::path obf_path = dir / "obfuscated.c";
    auto obfuscate = run_command(
        expand(tools.obfuscator_cmd, pretty_path.string(), obf_path.string()),
        tools.timeout_seconds);
    if (!obfuscate.ok() || !fs::exists(obf_path))
        return fail("obfuscator failed: " + first_line(obfuscate.err));
    rep.obf_size_chars = read_file(obf_path).size();

    auto pretty_obf = run_command(expand(tools.formatter_cmd, obf_path.string()),
                                  tools.timeout_seconds);
    if (!pretty_obf.ok())
        return fail("formatter failed: " + first_line(pretty_obf.err));

    LineDiff diff = line_diff(pretty_orig.out, pretty_obf.out);
    rep.added_chars = diff.added_chars;
    rep.removed_chars = diff.removed_chars;
    rep.diff_pct = diff_percentage(diff);
    return rep;
}

std::string report(const std::vector<TestResult>& results) {
    std::ostringstream out;
    int passed = 0;
    for (const auto& result : results) {
        if (result.status == TestStatus::Ok) {
            out << "[OK] " << result.name << "\n";
            ++passed;
        } else {
            out << "[FAIL " << to_string(result.status) << "] " << result.name;
            if (!result.detail.empty()) out << " — " << result.detail;
            out << "\n";
        }
    }
    out << passed << "/" << results.size() << " tests passed\n";
    return out.str();
}

std::string report(const std::vector<DiffReport>& reports) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-28s %14s %14s %8s\n", "File",
                  "Original size", "Obf size", "Diff");
    out << line;
    for (const auto& rep : reports) {
        if (rep.failed) {
            std::snprintf(line, sizeof(line), "%-28s %14s %14s %8s  (%s)\n",
                          rep.file.c_str(), "-", "-", "Error",
                          rep.detail.c_str());
        } else {
            std::snprintf(line, sizeof(line), "%-28s %14zu %14zu %7.1f%%\n",
                          rep.file.c_str(), rep.original_size_chars,
                          rep.obf_size_chars, rep.diff_pct);
        }
        out << line;
    }
    return out.str();
}

std::string to_csv(const std::vector<DiffReport>& reports) {
    std::ostringstream out;
    out << "file,original_size,obf_size,added,removed,diff_pct\n";
    for (const auto& rep : reports) {
        if (rep.failed) {
            out << rep.file << ",,,,,error\n";
            continue;
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", rep.diff_pct);
        out << rep.file << "," << rep.original_size_chars << ","
            << rep.obf_size_chars << "," << rep.added_chars << ","
            << rep.removed_chars << "," << buf << "\n";
    }
    return out.str();
}

}  // namespace obf
