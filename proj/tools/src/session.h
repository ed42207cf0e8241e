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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "asrec/chat_client.h"
#include "asrec/dataset.h"
#include "asrec/http_client.h"
#include "asrec/metrics.h"
#include "asrec/scorer.h"

namespace asrec::cli {

// State shared by one invocation: global flags plus everything the run
// manifest needs to record.
class Session {
 public:
  int jobs = 1;
  uint64_t seed = 0;
  std::string manifest_path;  // empty: "<--out>.manifest.json" or asrec.manifest.json
  std::string command;
  nlohmann::json config_snapshot;

  // Reads a dataset and records its digest.
  Dataset LoadData(const std::string& path, const LoadOptions& options = {});
  // Reads a whole input file ("-" is stdin) and records its digest.
  std::string ReadInput(const std::string& path);
  void NoteInput(const std::string& path);
  // Writes `content` to `path` ("-" or empty is stdout) and records it.
  void WriteOutput(const std::string& path, const std::string& content);

  // Adds a key to the manifest's "run" section.
  void Record(const std::string& key, nlohmann::json value);
  // Sources of retry counters for the manifest.
  void WatchClient(std::string role, std::function<HttpStats()> stats);

  nlohmann::json Manifest(int exit_code, const std::string& error) const;
  void WriteManifest(int exit_code, const std::string& error) const;

 private:
  std::vector<nlohmann::json> inputs_;
  std::vector<std::string> outputs_;
  nlohmann::json run_ = nlohmann::json::object();
  std::vector<std::pair<std::string, std::function<HttpStats()>>> clients_;
};

std::string Sha256Hex(std::string_view data);

// Options for reaching an HTTP backend, shared by scorer and chat commands.
struct EndpointFlags {
  int max_attempts = 4;
  int timeout_ms = 30000;
  int initial_backoff_ms = 200;
  int max_in_flight = 4;

  void Add(CLI::App* app);
  HttpClientOptions Options(const std::string& url, uint64_t seed) const;
};

// Built-in toy scorer when `url` is empty, otherwise the HTTP scorer.
std::unique_ptr<Scorer> MakeScorer(const std::string& url, const EndpointFlags& flags,
                                   Session& session);
// Chat endpoint; the bearer token comes from ASREC_API_KEY.
std::unique_ptr<HttpChatClient> MakeChatClient(const std::string& url,
                                               const EndpointFlags& flags,
                                               Session& session);

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The exception of the
// lowest failing index is rethrown.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

// One line of a hypothesis file: JSONL {"id", "text", ...} or plain text.
struct HypLine {
  std::optional<std::string> id;
  std::string text;
};
std::vector<HypLine> ParseHypFile(const std::string& content);
// Hypotheses for `utts`, matched by id when the file carries ids and by
// line order otherwise. Throws DataError on a missing id or count mismatch.
std::vector<std::string> MatchHyps(const std::vector<HypLine>& lines,
                                   const std::vector<Utterance>& utts);

std::string ToJsonl(const std::vector<nlohmann::json>& records);

nlohmann::json CountsJson(const AlignmentCounts& c);
// Report percentages carry two decimals, rounded half away from zero.
double Pct2(double value);

// Registered subcommand: parsed options live inside `run`.
struct Command {
  CLI::App* app = nullptr;
  std::function<void(Session&)> run;
};

void AddTextCommands(CLI::App& root, std::vector<Command>& out);
void AddLatticeCommands(CLI::App& root, std::vector<Command>& out);
void AddCorrectCommands(CLI::App& root, std::vector<Command>& out);
void AddCombineCommands(CLI::App& root, std::vector<Command>& out);
void AddPromptCommands(CLI::App& root, std::vector<Command>& out);

}  // namespace asrec::cli
