// Copyright 2026 The asrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asrec_cli/cli.h"

#include <iostream>

#include "asrec/error.h"
#include "session.h"

namespace asrec::cli {

namespace {

std::string CommandPath(const CLI::App* app) {
  std::string path;
  for (const CLI::App* a = app; a != nullptr && a->get_parent() != nullptr; a = a->get_parent()) {
    path = path.empty() ? a->get_name() : a->get_name() + " " + path;
  }
  return path;
}

// Values of the options that shaped this run: globals plus those of the
// chosen subcommand and its parents.
nlohmann::json ConfigSnapshot(const CLI::App* chosen) {
  nlohmann::json snap = nlohmann::json::object();
  for (const CLI::App* a = chosen; a != nullptr; a = a->get_parent()) {
    const std::string prefix = CommandPath(a);
    for (const CLI::Option* opt : a->get_options()) {
      if (opt->get_lnames().empty() || opt->get_lnames().front() == "help" ||
          opt->get_lnames().front() == "config" || opt->get_lnames().front() == "version") {
        continue;
      }
      const std::string key =
          prefix.empty() ? opt->get_lnames().front() : prefix + "." + opt->get_lnames().front();
      if (opt->get_type_size_max() == 0) {
        snap[key] = opt->count() > 0;
      } else if (opt->count() > 0) {
        const auto& r = opt->results();
        snap[key] = r.size() == 1 ? nlohmann::json(r.front()) : nlohmann::json(r);
      } else {
        snap[key] = opt->get_default_str();
      }
    }
  }
  return snap;
}

std::string OutputOption(const CLI::App* chosen) {
  for (const CLI::App* a = chosen; a != nullptr; a = a->get_parent()) {
    if (const CLI::Option* opt = a->get_option_no_throw("--out"); opt != nullptr && opt->count() > 0) {
      const std::string out = opt->as<std::string>();
      if (!out.empty() && out != "-") return out;
    }
  }
  return {};
}

int ExitCodeFor(std::exception_ptr ex, std::string& message) {
  try {
    std::rethrow_exception(ex);
  } catch (const InvalidArgument& e) {
    message = e.what();
    return kExitUsage;
  } catch (const ScorerError& e) {
    message = e.what();
    return kExitScorer;
  } catch (const ParseError& e) {
    message = e.what();
    return kExitScorer;
  } catch (const std::exception& e) {
    // DataError, malformed JSON, file system trouble.
    message = e.what();
    return kExitData;
  }
}

}  // namespace

int Run(int argc, const char* const* argv) {
  CLI::App app{"ASR N-best error correction and evaluation toolkit", "asrec"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "TOML file with option defaults; command line flags win");
  app.set_version_flag("--version", ASREC_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Session session;
  app.add_option("--jobs", session.jobs, "Worker threads for per-utterance work")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", session.seed, "Seed for every random choice and retry jitter");
  app.add_option("--manifest", session.manifest_path,
                 "Run manifest path (default: <first output>.manifest.json)");

  std::vector<Command> commands;
  AddTextCommands(app, commands);
  AddLatticeCommands(app, commands);
  AddCorrectCommands(app, commands);
  AddCombineCommands(app, commands);
  AddPromptCommands(app, commands);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed()) chosen = &c;
  }
  if (chosen == nullptr) {
    std::cerr << app.help();
    return kExitUsage;
  }
  session.command = CommandPath(chosen->app);
  session.config_snapshot = ConfigSnapshot(chosen->app);
  if (session.manifest_path.empty()) {
    const std::string out = OutputOption(chosen->app);
    if (!out.empty()) session.manifest_path = out + ".manifest.json";
  }
  std::vector<std::string> args(argv + 1, argv + argc);
  session.Record("argv", args);

  int rc = kExitOk;
  std::string message;
  try {
    chosen->run(session);
  } catch (...) {
    rc = ExitCodeFor(std::current_exception(), message);
    std::cerr << "asrec " << session.command << ": error: " << message << "\n";
  }
  session.WriteManifest(rc, message);
  return rc;
}

}  // namespace asrec::cli
