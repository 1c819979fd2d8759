// Command-line front end. Links only against the C interface of libsrsp.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srsp/srsp.h"

namespace {

int exit_code(srsp_status status) {
  switch (status) {
    case SRSP_OK: return 0;
    case SRSP_E_INVALID_ARGUMENT: return 2;
    case SRSP_E_PARSE:
    case SRSP_E_CONSTRAINT: return 3;
    case SRSP_E_IO:
    case SRSP_E_FORMAT:
    case SRSP_E_DIMENSION:
    case SRSP_E_RANGE: return 4;
    case SRSP_E_BLOWUP: return 5;
    case SRSP_E_VERIFICATION: return 6;
    case SRSP_E_INTERNAL: return 10;
  }
  return 10;
}

int report(srsp_status status) {
  if (status != SRSP_OK) std::fprintf(stderr, "%s: %s\n", srsp_status_name(status), srsp_last_error());
  return exit_code(status);
}

void print_line(const char* line, void*) { std::printf("%s\n", line); }

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::size_t trials = 0;
};

int dispatch(const std::string& command, const Options& opt) {
  srsp_config* cfg = nullptr;
  srsp_status st = srsp_config_load(opt.config.c_str(), &cfg);
  if (st != SRSP_OK) return report(st);
  std::vector<std::string> overrides = opt.overrides;
  if (opt.trials > 0) overrides.push_back("verify.trials=" + std::to_string(opt.trials));
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "SRSP_E_USAGE: --set expects section.key=value, got '%s'\n", o.c_str());
      srsp_config_free(cfg);
      return 2;
    }
    st = srsp_config_set(cfg, o.substr(0, eq).c_str(), o.substr(eq + 1).c_str());
    if (st != SRSP_OK) {
      srsp_config_free(cfg);
      return report(st);
    }
  }
  if (command == "run") st = srsp_command_run(cfg, print_line, nullptr);
  else if (command == "verify") st = srsp_command_verify(cfg, print_line, nullptr);
  else st = srsp_command_converge(cfg, print_line, nullptr);
  std::fflush(stdout);
  srsp_config_free(cfg);
  return report(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-relativistic Schroedinger-Poisson ensemble simulator"};
  app.set_version_flag("--version", std::string(srsp_version()));
  app.require_subcommand(1);

  Options opt;
  std::string chosen;
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", opt.config, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-s,--set", opt.overrides, "override as section.key=value (repeatable)");
    sub->callback([&chosen, name] { chosen = name; });
    return sub;
  };
  add("run", "integrate the ensemble and write diagnostics.csv");
  auto* verify = add("verify", "run the norm, kinetic, Lipschitz, transform and Poisson probes");
  verify->add_option("--trials", opt.trials, "number of random trials per probe")->check(CLI::PositiveNumber);
  add("converge", "dt-halving and mode-refinement ladders; writes convergence.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "SRSP_E_USAGE: %s\n", e.what());
    return 2;
  }
  return dispatch(chosen, opt);
}
