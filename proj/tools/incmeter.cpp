#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "incmeter/incmeter.hpp"

namespace {

void add_input_options(CLI::App* cmd, incmeter::CliOptions& options) {
  cmd->add_option("instance", options.instance_path, "facts file")->required();
  cmd->add_option("constraints", options.constraints_path, "constraints file")->required();
  cmd->add_option("--format", options.format, "json|text (default json)")
      ->check(CLI::IsMember({"json", "text"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"repair-based inconsistency degree for relational instances"};
  app.require_subcommand(1);

  incmeter::CliOptions options;
  std::string semantics = "c";
  std::string normalizer = "full";

  CLI::App* check = app.add_subcommand("check", "report constraint violations");
  add_input_options(check, options);

  CLI::App* measure = app.add_subcommand("measure", "compute the inconsistency degree");
  add_input_options(measure, options);
  measure->add_option("--semantics", semantics, "s|c|c-endo (default c)")
      ->check(CLI::IsMember({"s", "c", "c-endo"}));
  measure->add_option("--normalizer", normalizer, "full|endo (default full)")
      ->check(CLI::IsMember({"full", "endo"}));
  measure->add_option("--witnesses", options.witnesses, "witness repairs in the report");
  measure->add_option("--cap", options.cap, "repair enumeration cap");

  CLI::App* repairs = app.add_subcommand("repairs", "enumerate repairs");
  add_input_options(repairs, options);
  repairs->add_option("--semantics", semantics, "s|c|c-endo (default c)")
      ->check(CLI::IsMember({"s", "c", "c-endo"}));
  repairs->add_option("--cap", options.cap, "repair enumeration cap");

  CLI::App* emit = app.add_subcommand("emit-asp", "write the disjunctive repair program");
  add_input_options(emit, options);
  emit->add_option("--out", options.out_path, "program output path")->required();
  emit->add_flag("--solve", options.solve, "run an external solver and cross-check");
  emit->add_option("--solver-cmd", options.solver_cmd,
                   "solver command template; {file} is replaced by the program path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? incmeter::kExitSuccess : incmeter::kExitInputError;
  }

  options.semantics = *incmeter::detail::semantics_from(semantics);
  options.normalizer = *incmeter::detail::normalizer_from(normalizer);
  if (options.solve && options.solver_cmd.empty()) {
    const char* env = std::getenv("INCMETER_SOLVER_CMD");
    if (env) options.solver_cmd = env;
  }

  if (check->parsed()) return incmeter::cmd_check(options, std::cout, std::cerr);
  if (measure->parsed()) return incmeter::cmd_measure(options, std::cout, std::cerr);
  if (repairs->parsed()) return incmeter::cmd_repairs(options, std::cout, std::cerr);
  return incmeter::cmd_emit_asp(options, std::cout, std::cerr);
}
