#include "obfuscator/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

namespace obf {

namespace {

using Clock = std::chrono::steady_clock;

void drain(int fd, std::string& sink) {
    char buf[4096];
    for (;;) {
        ssize_t n = read(fd, buf, sizeof(buf));
        if (n > 0) {
            sink.append(buf, static_cast<std::size_t>(n));
            continue;
        }
        break;
    }
}

}  // namespace

CommandResult run_command(const std::string& command, double timeout_seconds) {
    CommandResult result;

    int out_pipe[2];
    int err_pipe[2];
    if (pipe(out_pipe) != 0) return result;
    if (pipe(err_pipe) != 0) {
        close(out_pipe[0]);
        close(out_pipe[1]);
        return result;
    }

    pid_t pid = fork();
    if (pid < 0) {
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        return result;
    }
    if (pid == 0) {
        setpgid(0, 0);
        int devnull = open("/dev/null", O_RDONLY);
        if (devnull >= 0) dup2(devnull, STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
        _exit(127);
    }

    close(out_pipe[1]);
    close(err_pipe[1]);
    result.started = true;

    auto deadline = Clock::now() +
                    std::chrono::milliseconds(
                        static_cast<long>(timeout_seconds * 1000.0));
    struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
    bool open_fds[2] = {true, true};

    while (open_fds[0] || open_fds[1]) {
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                             deadline - Clock::now())
                             .count();
        if (remaining <= 0) {
            result.timed_out = true;
            kill(-pid, SIGKILL);
            break;
        }
        fds[0].fd = open_fds[0] ? out_pipe[0] : -1;
        fds[1].fd = open_fds[1] ? err_pipe[0] : -1;
        int ready = poll(fds, 2, static_cast<int>(remaining));
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (ready == 0) continue;  // re-check deadline
        for (int i = 0; i < 2; ++i) {
            if (fds[i].revents == 0) continue;
            char buf[4096];
            ssize_t n = read(i == 0 ? out_pipe[0] : err_pipe[0], buf, sizeof(buf));
            if (n > 0) {
                (i == 0 ? result.out : result.err)
                    .append(buf, static_cast<std::size_t>(n));
            } else {
                open_fds[i] = false;
            }
        }
    }

    // Pick up whatever arrived between the last poll and the kill.
    drain(out_pipe[0], result.out);
    drain(err_pipe[0], result.err);
    close(out_pipe[0]);
    close(err_pipe[0]);

    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
    return result;
}

}  // namespace obf
