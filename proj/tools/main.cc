#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.h"
#include "common.h"
#include "stance/types.h"

int main(int argc, char** argv) {
  CLI::App app{"Stance classification and retweet-network triage"};
  app.require_subcommand(1);
  stance::cli::register_model_commands(app);
  stance::cli::register_graph_commands(app);
  stance::cli::register_triage_commands(app);
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = stance::cli::expand_config(std::move(args));
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const stance::Error& e) {
    std::cerr << "stance: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "stance: unexpected error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
