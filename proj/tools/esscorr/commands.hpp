#pragma once

#include <functional>
#include <memory>

#include <CLI/CLI.hpp>

#include "context.hpp"

namespace cli {

/// Work selected by the parsed subcommand; runs once the globals are known.
using Action = std::function<void(const Context&)>;

void add_mgf_commands(CLI::App& app, Action& action);
void add_criteria_commands(CLI::App& app, Action& action);
void add_clicks_command(CLI::App& app, Action& action);
void add_reconstruct_command(CLI::App& app, Action& action);

}  // namespace cli
