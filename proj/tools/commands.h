#pragma once

#include "CLI11.hpp"

namespace stance::cli {

void register_model_commands(CLI::App& app);
void register_graph_commands(CLI::App& app);
void register_triage_commands(CLI::App& app);

}  // namespace stance::cli
