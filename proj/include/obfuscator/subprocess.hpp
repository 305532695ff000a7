#pragma once

#include <string>

namespace obf {

struct CommandResult {
    bool started = false;
    bool timed_out = false;
    int exit_code = -1;
    std::string out;
    std::string err;

    bool ok() const { return started && !timed_out && exit_code == 0; }
    /// /bin/sh reports a missing command with exit code 127.
    bool command_not_found() const { return started && exit_code == 127; }
};

/// Runs `command` under /bin/sh -c with stdin connected to /dev/null,
/// capturing stdout and stderr separately. The whole process group is
/// killed when the timeout elapses.
CommandResult run_command(const std::string& command, double timeout_seconds);

}  // namespace obf
