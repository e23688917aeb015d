#pragma once

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <mutex>
#include <string>
#include <string_view>

#include "corpus_forge/error.hpp"

namespace corpus_forge {

// A child process (`/bin/sh -c command`) spoken to one line at a time:
// write a request line, read exactly one reply line. Calls are serialized.
class LineProcess {
public:
    explicit LineProcess(const std::string& command) : command_(command) {
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0) throw IoError("pipe() failed");
        if (pipe(from_child) != 0) {
            close(to_child[0]);
            close(to_child[1]);
            throw IoError("pipe() failed");
        }
        signal(SIGPIPE, SIG_IGN);
        pid_ = fork();
        if (pid_ < 0) throw IoError("fork() failed");
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        to_ = fdopen(to_child[1], "w");
        from_ = fdopen(from_child[0], "r");
        if (to_ == nullptr || from_ == nullptr) throw IoError("fdopen() failed");
    }

    LineProcess(const LineProcess&) = delete;
    LineProcess& operator=(const LineProcess&) = delete;

    ~LineProcess() {
        if (to_ != nullptr) fclose(to_);
        if (from_ != nullptr) fclose(from_);
        if (pid_ > 0) {
            int status = 0;
            waitpid(pid_, &status, 0);
        }
    }

    // `line` must not contain '\n'.
    std::string request(std::string_view line) const {
        std::lock_guard lock(mutex_);
        if (fwrite(line.data(), 1, line.size(), to_) != line.size() || fputc('\n', to_) == EOF || fflush(to_) != 0) {
            throw IoError("'" + command_ + "' closed its input");
        }
        std::string reply;
        int c = fgetc(from_);
        if (c == EOF) throw IoError("'" + command_ + "' exited without replying");
        for (; c != EOF && c != '\n'; c = fgetc(from_)) reply.push_back(static_cast<char>(c));
        if (!reply.empty() && reply.back() == '\r') reply.pop_back();
        return reply;
    }

    const std::string& command() const noexcept { return command_; }

private:
    std::string command_;
    pid_t pid_ = -1;
    FILE* to_ = nullptr;
    FILE* from_ = nullptr;
    mutable std::mutex mutex_;
};

}  // namespace corpus_forge
