#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace poplotto::cli;

  CLI::App app{"Population Lotto equilibrium solver and analyzer"};
  std::string command;
  std::string format = "json";
  RunConfig config;
  app.add_option("command", command, "solve | verify | analyze | dice | rewire | export")
      ->required()
      ->check(CLI::IsMember({"solve", "verify", "analyze", "dice", "rewire", "export"}));
  app.add_option("input", config.input, "input JSON file")->required();
  app.add_option("--out", config.output, "write machine output here; summary goes to stdout");
  app.add_option("--tol", config.tol, "verification tolerance")->capture_default_str();
  app.add_option("--format", format, "json | csv | dot")
      ->check(CLI::IsMember({"json", "csv", "dot"}))
      ->capture_default_str();
  app.add_option("--seed", config.seed, "seed for rewire")->capture_default_str();
  app.add_option("--league", config.league, "1-based league for rewire")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidInput;
  }
  config.command = parse_command(command);
  config.format = parse_format(format);
  return run(config, std::cout, std::cerr);
}
