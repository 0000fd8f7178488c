#pragma once

#include <string>
#include <vector>

#include "problem.hpp"

namespace crdeg {

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_input = 2, exit_hypothesis = 3, exit_internal = 4 };

int exit_code_for(Errc e);

struct Report {
  std::string command;
  int exit_code = exit_ok;
  json body;
  std::string render(bool as_json) const;
};

const std::vector<std::string>& command_names();
bool known_command(const std::string& cmd);

// p2 is the second problem of `jets`
Report run_command(const std::string& cmd, const ProblemFile& p, const ProblemFile* p2 = nullptr);
// parse the files, run, and turn every failure into an error report
Report run_files(const std::string& cmd, const std::vector<std::string>& paths, const Overrides& ov);
Report error_report(const std::string& cmd, int code, const std::string& message, const json& inputs = json::array());

}  // namespace crdeg
