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

#include <unordered_map>

#include <fmt/format.h>

#include "asrec/combine.h"
#include "asrec/dataset.h"
#include "asrec/error.h"
#include "asrec/textnorm.h"
#include "session.h"

namespace asrec::cli {

namespace {

void AddRover(CLI::App* parent, std::vector<Command>& out) {
  struct Opts {
    std::vector<std::string> inputs;
    std::vector<double> weights;
    bool normalize = false;
    std::string out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* app = parent->add_subcommand("rover", "Word-level voting over several systems' outputs");
  app->add_option("--inputs", o->inputs,
                  "Hypothesis files, JSONL {id, text} or plain text, one per system")
      ->required()
      ->expected(1, -1);
  app->add_option("--weights", o->weights, "Comma-separated system weights (default: all 1)")
      ->delimiter(',');
  app->add_flag("--normalize", o->normalize, "Normalize texts before voting");
  app->add_option("--out", o->out, "Output JSONL {id, text, strategy}");
  out.push_back({app, [o](Session& s) {
                   const size_t k = o->inputs.size();
                   std::vector<double> weights = o->weights;
                   if (weights.empty()) weights.assign(k, 1.0);
                   if (weights.size() != k) {
                     throw InvalidArgument(fmt::format("{} weights for {} inputs", weights.size(), k));
                   }
                   std::vector<std::vector<HypLine>> files;
                   for (const auto& path : o->inputs) files.push_back(ParseHypFile(s.ReadInput(path)));
                   // Utterance order and ids come from the first system.
                   std::vector<std::string> ids;
                   const bool by_id = !files[0].empty() && files[0][0].id.has_value();
                   for (size_t i = 0; i < files[0].size(); ++i) {
                     ids.push_back(by_id ? *files[0][i].id : std::to_string(i + 1));
                   }
                   std::vector<std::vector<std::string>> texts(k);
                   for (size_t f = 0; f < k; ++f) {
                     if (!by_id) {
                       if (files[f].size() != ids.size()) {
                         throw DataError(fmt::format("'{}' has {} lines, expected {}", o->inputs[f],
                                                     files[f].size(), ids.size()));
                       }
                       for (const auto& l : files[f]) texts[f].push_back(l.text);
                       continue;
                     }
                     std::unordered_map<std::string, std::string> byid;
                     for (const auto& l : files[f]) {
                       if (!l.id) throw DataError(fmt::format("'{}' mixes plain and JSON lines", o->inputs[f]));
                       byid[*l.id] = l.text;
                     }
                     for (const auto& id : ids) {
                       auto it = byid.find(id);
                       if (it == byid.end()) {
                         throw DataError(fmt::format("'{}' has no hypothesis for '{}'", o->inputs[f], id));
                       }
                       texts[f].push_back(it->second);
                     }
                   }
                   std::vector<nlohmann::json> records(ids.size());
                   ParallelFor(ids.size(), s.jobs, [&](size_t i) {
                     std::vector<SystemOutput> systems;
                     for (size_t f = 0; f < k; ++f) {
                       const std::string& t = texts[f][i];
                       systems.push_back({o->normalize ? NormalizeEval(t) : t, weights[f]});
                     }
                     records[i] = {{"id", ids[i]}, {"text", Rover(systems)}, {"strategy", "rover"}};
                   });
                   s.WriteOutput(o->out, ToJsonl(records));
                 }});
}

void AddNBest(CLI::App* parent, std::vector<Command>& out) {
  struct Opts {
    std::string pattern;
    std::string a;
    std::string b;
    std::string out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* app = parent->add_subcommand(
      "nbest", "Pool two systems' N-best lists in a fixed pattern such as E1E2T1T2T3");
  app->add_option("--pattern", o->pattern,
                  "Tag+rank pairs; the first tag to appear reads --a, the second --b")
      ->required();
  app->add_option("--a", o->a, "Dataset JSONL of the first system")->required();
  app->add_option("--b", o->b, "Dataset JSONL of the second system");
  app->add_option("--out", o->out, "Output dataset JSONL");
  out.push_back({app, [o](Session& s) {
                   const auto pairs = ParseListPattern(o->pattern);
                   std::vector<std::string> tags;
                   for (const auto& [tag, rank] : pairs) {
                     if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(tag);
                   }
                   if (tags.size() > 2) throw InvalidArgument("pattern names more than two systems");
                   if (tags.size() == 2 && o->b.empty()) {
                     throw InvalidArgument(fmt::format("pattern uses '{}' but --b is missing", tags[1]));
                   }
                   const Dataset a = s.LoadData(o->a);
                   std::unordered_map<std::string, const Utterance*> b_index;
                   Dataset b;
                   if (tags.size() == 2) {
                     b = s.LoadData(o->b);
                     for (const auto& u : b.utterances) b_index[u.id] = &u;
                   }
                   std::vector<nlohmann::json> records;
                   for (const auto& ua : a.utterances) {
                     std::map<std::string, const NBestList*> sources{{tags[0], &ua.nbest}};
                     const Utterance* ub = nullptr;
                     if (tags.size() == 2) {
                       auto it = b_index.find(ua.id);
                       if (it == b_index.end()) {
                         throw DataError(fmt::format("'{}' missing from '{}'", ua.id, o->b));
                       }
                       ub = it->second;
                       sources[tags[1]] = &ub->nbest;
                     }
                     NBestList pooled = [&] {
                       try {
                         return BuildMultiNBest(sources, o->pattern);
                       } catch (const InvalidArgument& ex) {
                         throw DataError(fmt::format("utterance '{}': {}", ua.id, ex.what()));
                       }
                     }();
                     auto ref = ua.reference;
                     if (!ref && ub) ref = ub->reference;
                     records.push_back(UtteranceToJson(Utterance{ua.id, ref, std::move(pooled), {}}));
                   }
                   s.WriteOutput(o->out, ToJsonl(records));
                 }});
}

}  // namespace

void AddCombineCommands(CLI::App& root, std::vector<Command>& out) {
  auto* app = root.add_subcommand("combine", "System combination");
  app->require_subcommand(1);
  AddRover(app, out);
  AddNBest(app, out);
}

}  // namespace asrec::cli
