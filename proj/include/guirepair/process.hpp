#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "guirepair/util.hpp"

namespace guirepair {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string out;
  std::string err;
};

/// Runs argv[0] (resolved on PATH when it has no '/') with the given stdin, capturing both
/// output streams. The child is killed once `timeout` elapses. Throws IoError when the
/// program cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, const fs::path& cwd,
                          const std::string& input, std::chrono::milliseconds timeout);

/// `/bin/sh -c command` in `cwd`.
ProcessResult run_shell(const std::string& command, const fs::path& cwd,
                        std::chrono::milliseconds timeout);

}  // namespace guirepair
