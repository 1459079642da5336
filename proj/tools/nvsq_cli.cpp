// Copyright 2026 The nvsqueeze Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nvsq/commands.hpp"
#include "nvsq/config.hpp"
#include "nvsq/errors.hpp"
#include "nvsq/sweep.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> engine;
  std::optional<std::string> model;
  std::optional<std::string> format;
  std::optional<long long> seed;
};

nvsq::RunConfig resolve(const Flags& f) {
  nvsq::RunConfig cfg = nvsq::load_config(f.config);
  if (f.out) cfg.output.directory = *f.out;
  if (f.engine) cfg.run.engine = nvsq::parse_engine(*f.engine);
  if (f.model) cfg.run.model = nvsq::parse_model(*f.model);
  if (f.format) {
    cfg.output.csv = *f.format == "csv";
    cfg.output.json = *f.format == "json";
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-mode squeezing of NV-center ensembles coupled through mechanical modes"};
  app.set_version_flag("--version", std::string(nvsq::cli::version()));
  app.require_subcommand(1);

  using Command = std::function<int(const nvsq::RunConfig&, std::ostream&)>;
  const std::map<std::string, std::pair<std::string, Command>> commands = {
      {"simulate", {"Simulate one parameter point and write the squeezing trace", nvsq::cli::cmd_simulate}},
      {"compare", {"Compare the full and the effective model on a shared grid", nvsq::cli::cmd_compare}},
      {"sweep", {"Evaluate a grid of parameter points", nvsq::cli::cmd_sweep}},
      {"optimize", {"Search the HP-valid minimum over detuning ratio and Zeeman offset", nvsq::cli::cmd_optimize}},
      {"device", {"Derive coupling, frequency, damping and thermal occupation from the beam", nvsq::cli::cmd_device}},
      {"oracle", {"Run the truncated Fock reference engine", nvsq::cli::cmd_oracle}},
  };

  Flags flags;
  std::string engine, model, format, out;
  long long seed = 0;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", flags.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory (overrides output.directory)");
    sub->add_option("--engine", engine, "gaussian | fock")->check(CLI::IsMember({"gaussian", "fock"}));
    sub->add_option("--model", model, "full | effective | squeeze-special")
        ->check(CLI::IsMember({"full", "effective", "squeeze-special"}));
    sub->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "Reserved; every algorithm is deterministic");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nvsq::cli::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--out")) flags.out = out;
  if (sub->count("--engine")) flags.engine = engine;
  if (sub->count("--model")) flags.model = model;
  if (sub->count("--format")) flags.format = format;
  if (sub->count("--seed")) flags.seed = seed;

  try {
    const nvsq::RunConfig cfg = resolve(flags);
    return commands.at(sub->get_name()).second(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "nvsq " << sub->get_name() << ": " << e.what() << "\n";
    return nvsq::cli::exit_code(e);
  }
}
