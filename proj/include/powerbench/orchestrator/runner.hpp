#pragma once

#include <map>
#include <string>

namespace powerbench::orchestrator {

enum class RunnerKind { kLocalProcess, kRemoteShell };

/// Where workload commands execute. A remote shell wraps the command in a
/// configured template (default: non-interactive ssh); credentials must be
/// provisioned outside this tool.
struct RemoteRunner {
  RunnerKind kind = RunnerKind::kLocalProcess;
  std::string host;
  std::string shell_template = "ssh -o BatchMode=yes {host} {command}";
  double timeout = 600.0;
};

struct CommandResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;  // stdout and stderr interleaved
};

/// Replaces every "{key}" with vars[key]; unknown placeholders are left alone.
std::string substitute(const std::string& text, const std::map<std::string, std::string>& vars);

/// Single-quotes `text` for /bin/sh.
std::string shell_quote(const std::string& text);

/// Runs through /bin/sh -c, killing the whole process group on timeout.
CommandResult run_command(const RemoteRunner& runner, const std::string& command);

}  // namespace powerbench::orchestrator
