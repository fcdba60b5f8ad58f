#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nl2asp {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    std::string err;
    bool timed_out = false;
};

class ProcessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Runs argv[0] (searched in PATH) with `input` on stdin. The child is killed
// when the timeout expires; a zero timeout waits forever.
ProcessResult run_process(std::vector<std::string> const &argv, std::string const &input = {},
                          std::chrono::milliseconds timeout = std::chrono::milliseconds{0});

// Absolute path of an executable, searching PATH when `name` has no slash.
std::optional<std::string> find_executable(std::string const &name);

} // namespace nl2asp
