#pragma once

// Bridges grid search to an arbitrary generator process. The command template
// may reference {param:NAME} for any grid parameter and must reference {out},
// the path where the process writes its ACTB activations.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <string>
#include <string_view>

#include <sys/wait.h>
#include <unistd.h>

#include "genmetric/actb.hpp"
#include "genmetric/errors.hpp"
#include "genmetric/lfid.hpp"
#include "genmetric/tuning.hpp"

namespace genmetric {

/// Replace {param:NAME} and {out} placeholders. Unknown names are an error.
inline std::string expand_command(std::string_view tmpl, const ParamSet& params, std::string_view out_path) {
  if (tmpl.find("{out}") == std::string_view::npos) {
    throw ValidationError("command template lacks the {out} placeholder");
  }
  std::string cmd;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find('{', pos);
    if (open == std::string_view::npos) {
      cmd.append(tmpl.substr(pos));
      break;
    }
    cmd.append(tmpl.substr(pos, open - pos));
    const auto close = tmpl.find('}', open);
    if (close == std::string_view::npos) throw ValidationError("unterminated placeholder in command template");
    const auto key = tmpl.substr(open + 1, close - open - 1);
    if (key == "out") {
      cmd.append(out_path);
    } else if (key.starts_with("param:")) {
      const auto name = key.substr(6);
      bool found = false;
      for (const auto& [k, v] : params) {
        if (k == name) {
          cmd.append(v);
          found = true;
          break;
        }
      }
      if (!found) throw ValidationError("template references unknown parameter '" + std::string(name) + "'");
    } else {
      throw ValidationError("unknown placeholder {" + std::string(key) + "}");
    }
    pos = close + 1;
  }
  return cmd;
}

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

/// Run through /bin/sh with stderr folded into the captured output.
inline CommandResult run_command(const std::string& cmd) {
  const std::string full = cmd + " 2>&1";
  FILE* pipe = ::popen(full.c_str(), "r");
  if (!pipe) throw ExternalError("could not start: " + cmd);
  CommandResult res;
  char buf[4096];
  while (const auto n = std::fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, n);
  const int status = ::pclose(pipe);
  if (status == -1) throw ExternalError("could not reap: " + cmd);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return res;
}

inline std::filesystem::path scratch_path(std::string_view stem) {
  static std::atomic<unsigned long> counter{0};
  return std::filesystem::temp_directory_path() /
         (std::string(stem) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".actb");
}

/// Run the external generator for one parameter point and score its output
/// against the real activations.
inline double run_external_evaluation(std::string_view command_template, const ParamSet& params,
                                      const ActivationSet& real, const SelectionSpec& spec) {
  const auto out = scratch_path("genmetric-eval");
  const auto cmd = expand_command(command_template, params, out.string());
  const auto res = run_command(cmd);
  struct Cleanup {
    std::filesystem::path p;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  } cleanup{out};
  if (res.exit_code != 0) {
    throw ExternalError("command exited with " + std::to_string(res.exit_code) + ": " + cmd + "\n" + res.output);
  }
  if (!std::filesystem::exists(out)) throw FormatError("command produced no output file: " + cmd);
  return lfid_score(real, load_activations(out), spec).value;
}

inline double run_external_evaluation(std::string_view command_template, const ParamSet& params,
                                      const std::filesystem::path& real_acts, const SelectionSpec& spec) {
  return run_external_evaluation(command_template, params, load_activations(real_acts), spec);
}

}  // namespace genmetric
