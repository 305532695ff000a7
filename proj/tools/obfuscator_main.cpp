#include "obfuscator/harness.hpp"
#include "obfuscator/lexer.hpp"
#include "obfuscator/pipeline.hpp"
#include "obfuscator/prettify.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace obf;

namespace {

constexpr const char* kUsage = R"(usage:
  obfuscator <file>.c [flags]        obfuscate one file
  obfuscator test <corpus_dir>       compile-run-compare every corpus file
  obfuscator eval <file>...          prettify/obfuscate/diff evaluation
  obfuscator fmt <file>              print the prettified file to stdout

obfuscation flags:
  -o:<path>        output path (default: <file>.obf.c next to the input)
  --rename         rename identifiers (off by default)
  --seed:<n>       RNG seed, default 0
  --keep:<name>    never rename <name> (repeatable)
  -I:<path>        include search path (repeatable; reserved)
  --no-int-split   keep integer literals whole
  --no-bool-noise  keep conditions unchanged
  --no-xor-eq      keep == and != unchanged
  --dump-ast       print the parsed AST to stdout

test/eval flags:
  --cc:<template>    compiler command, default: cc -std=c99 {in} -o {out}
  --fmt:<template>   formatter command printing to stdout, default: built-in
  --obf:<template>   obfuscator command, default: this binary
  --config:<file>    key=value file with cc/fmt/obf/timeout entries
  --csv:<path>       where eval writes its CSV (default eval.csv)
  plus any obfuscation flags, which are forwarded to the default obfuscator
)";

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n" << kUsage;
    return 2;
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) return false;
    std::ostringstream buf;
    buf << stream.rdbuf();
    out = buf.str();
    return true;
}

std::string self_path(const char* argv0) {
    std::error_code ec;
    fs::path exe = fs::canonical("/proc/self/exe", ec);
    if (!ec) return exe.string();
    return argv0;
}

// The paper's flag shape: the value rides in the same argument after a
// colon, as in -o:out.c or --seed:42.
bool split_flag(const std::string& arg, const std::string& prefix,
                std::string& value) {
    if (arg.rfind(prefix, 0) != 0) return false;
    value = arg.substr(prefix.size());
    return true;
}

struct CliOptions {
    ObfuscationConfig config;
    std::vector<std::string> inputs;
    std::vector<std::string> obf_flags;  // forwarded to the default obfuscator
    std::string cc_template;
    std::string fmt_template;
    std::string obf_template;
    std::string config_file;
    std::string csv_path = "eval.csv";
    std::string error;
};

CliOptions parse_flags(const std::vector<std::string>& args) {
    CliOptions opts;
    for (const std::string& arg : args) {
        std::string value;
        if (arg == "--rename") {
            opts.config.rename = true;
            opts.obf_flags.push_back(arg);
        } else if (arg == "--no-int-split") {
            opts.config.enable_int_split = false;
            opts.obf_flags.push_back(arg);
        } else if (arg == "--no-bool-noise") {
            opts.config.enable_bool_noise = false;
            opts.obf_flags.push_back(arg);
        } else if (arg == "--no-xor-eq") {
            opts.config.enable_xor_eq = false;
            opts.obf_flags.push_back(arg);
        } else if (arg == "--dump-ast") {
            opts.config.dump_ast = true;
        } else if (split_flag(arg, "--seed:", value)) {
            opts.config.seed = std::strtoull(value.c_str(), nullptr, 10);
            opts.obf_flags.push_back(arg);
        } else if (split_flag(arg, "--keep:", value)) {
            opts.config.keep_list.insert(value);
            opts.obf_flags.push_back(arg);
        } else if (split_flag(arg, "-o:", value)) {
            opts.config.output_path = value;
        } else if (split_flag(arg, "-I:", value)) {
            opts.config.include_paths.push_back(value);
        } else if (split_flag(arg, "--cc:", value)) {
            opts.cc_template = value;
        } else if (split_flag(arg, "--fmt:", value)) {
            opts.fmt_template = value;
        } else if (split_flag(arg, "--obf:", value)) {
            opts.obf_template = value;
        } else if (split_flag(arg, "--config:", value)) {
            opts.config_file = value;
        } else if (split_flag(arg, "--csv:", value)) {
            opts.csv_path = value;
        } else if (!arg.empty() && arg[0] == '-') {
            opts.error = "unknown flag '" + arg + "'";
            return opts;
        } else {
            opts.inputs.push_back(arg);
        }
    }
    return opts;
}

bool load_tool_config(const std::string& path, ToolConfig& tools,
                      std::string& error) {
    std::ifstream stream(path);
    if (!stream) {
        error = "cannot open config file '" + path + "'";
        return false;
    }
    std::string line;
    while (std::getline(stream, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (key == "cc") tools.compiler_cmd = value;
        else if (key == "fmt") tools.formatter_cmd = value;
        else if (key == "obf") tools.obfuscator_cmd = value;
        else if (key == "timeout") tools.timeout_seconds = std::atof(value.c_str());
    }
    return true;
}

ToolConfig make_tool_config(const CliOptions& opts, const std::string& self,
                            std::string& error) {
    ToolConfig tools;
    tools.formatter_cmd = "\"" + self + "\" fmt \"{in}\"";
    std::string forwarded;
    for (const std::string& flag : opts.obf_flags) forwarded += flag + " ";
    tools.obfuscator_cmd =
        "\"" + self + "\" " + forwarded + "\"{in}\" -o:\"{out}\"";
    if (!opts.config_file.empty() &&
        !load_tool_config(opts.config_file, tools, error))
        return tools;
    if (!opts.cc_template.empty()) tools.compiler_cmd = opts.cc_template;
    if (!opts.fmt_template.empty()) tools.formatter_cmd = opts.fmt_template;
    if (!opts.obf_template.empty()) tools.obfuscator_cmd = opts.obf_template;
    std::string problems = tools.validate();
    if (!problems.empty()) error = problems;
    return tools;
}

int run_obfuscate(const CliOptions& opts) {
    const std::string& input = opts.inputs.front();
    fs::path input_path(input);
    if (input_path.extension() == ".cpp" || input_path.extension() == ".cc" ||
        input_path.extension() == ".cxx")
        return usage_error("C++ is not supported in this implementation");
    if (input_path.extension() != ".c")
        return usage_error("expected a .c input file, got '" + input + "'");

    std::string source;
    if (!read_file(input, source)) {
        std::cerr << input << ": error: cannot read file\n";
        return 1;
    }

    try {
        PipelineResult result =
            obfuscate_source(source, input_path.filename().string(), opts.config);
        for (const auto& diag : result.diagnostics) {
            const char* severity =
                diag.severity == ParseDiagnostic::Severity::Error ? "error"
                                                                  : "warning";
            std::cerr << input << ":" << diag.line << ": " << severity << ": "
                      << diag.message << "\n";
        }
        if (opts.config.dump_ast) std::cout << result.ast_dump << "\n";

        std::string out_path = opts.config.output_path.value_or(
            (input_path.parent_path() /
             (input_path.stem().string() + ".obf.c"))
                .string());
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << out_path << ": error: cannot write file\n";
            return 1;
        }
        out << result.output;
        return 0;
    } catch (const LexError& e) {
        std::cerr << input << ":" << e.line() << ": error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << input << ":" << e.line() << ": error: " << e.what() << "\n";
        return 1;
    }
}

int run_fmt(const CliOptions& opts) {
    std::string source;
    if (!read_file(opts.inputs[1], source)) {
        std::cerr << opts.inputs[1] << ": error: cannot read file\n";
        return 1;
    }
    try {
        std::cout << prettify(source);
    } catch (const LexError& e) {
        std::cerr << opts.inputs[1] << ":" << e.line() << ": error: " << e.what()
                  << "\n";
        return 1;
    }
    return 0;
}

int run_test(const CliOptions& opts, const std::string& self) {
    if (opts.inputs.size() != 2)
        return usage_error("test needs exactly one corpus directory");
    std::string error;
    ToolConfig tools = make_tool_config(opts, self, error);
    if (!error.empty()) return usage_error(error);

    auto results = run_unit_tests(opts.inputs[1], tools);
    if (results.empty()) {
        std::cerr << "error: no .c files in '" << opts.inputs[1] << "'\n";
        return 1;
    }
    std::cout << report(results);
    bool all_ok = true;
    for (const auto& result : results)
        all_ok = all_ok && result.status == TestStatus::Ok;
    return all_ok ? 0 : 1;
}

int run_eval(const CliOptions& opts, const std::string& self) {
    if (opts.inputs.size() < 2)
        return usage_error("eval needs at least one file");
    std::string error;
    ToolConfig tools = make_tool_config(opts, self, error);
    if (!error.empty()) return usage_error(error);

    std::vector<DiffReport> reports;
    for (std::size_t i = 1; i < opts.inputs.size(); ++i)
        reports.push_back(evaluate(opts.inputs[i], tools));

    std::cout << report(reports);
    std::ofstream csv(opts.csv_path, std::ios::binary);
    if (csv) {
        csv << to_csv(reports);
        std::cout << "wrote " << opts.csv_path << "\n";
    } else {
        std::cerr << opts.csv_path << ": error: cannot write CSV\n";
        return 1;
    }
    for (const auto& rep : reports)
        if (rep.failed) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    CliOptions opts = parse_flags(args);
    if (!opts.error.empty()) return usage_error(opts.error);
    if (opts.inputs.empty()) return usage_error("no input file");

    std::string self = self_path(argv[0]);
    const std::string& mode = opts.inputs.front();
    if (mode == "test") return run_test(opts, self);
    if (mode == "eval") return run_eval(opts, self);
    if (mode == "fmt") {
        if (opts.inputs.size() != 2) return usage_error("fmt needs one file");
        return run_fmt(opts);
    }
    if (opts.inputs.size() != 1)
        return usage_error("exactly one input file per invocation");
    return run_obfuscate(opts);
}
