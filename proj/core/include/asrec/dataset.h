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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asrec/types.h"

namespace asrec {

enum class ScoreDomain {
  kLog,     // scores are natural-log probabilities (stored as is)
  kLinear,  // scores are probabilities; converted with std::log on ingestion
};

struct LoadOptions {
  ScoreDomain score_domain = ScoreDomain::kLog;
};

struct Dataset {
  std::vector<Utterance> utterances;
  // Non-fatal issues, e.g. N-best lists that had to be re-sorted.
  std::vector<std::string> warnings;
};

// JSONL, one record per line:
//   {"id": str, "ref": str|null,
//    "nbest": [{"text": str, "score": float, "source"?: str}...],
//    "scores_comparable"?: bool, "lattice"?: <lattice JSON>}
// Blank lines are skipped. Errors carry the 1-based line number.
Dataset ParseDataset(std::istream& in, const LoadOptions& options = {});
Dataset LoadDataset(const std::filesystem::path& path,
                    const LoadOptions& options = {});

Utterance UtteranceFromJson(const nlohmann::json& record,
                            const LoadOptions& options = {});
nlohmann::json UtteranceToJson(const Utterance& utt);

void WriteDataset(std::ostream& out, std::span<const Utterance> utterances);
void SaveDataset(const std::filesystem::path& path,
                 std::span<const Utterance> utterances);

}  // namespace asrec
