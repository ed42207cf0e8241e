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

#include "asrec/dataset.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "asrec/error.h"

namespace asrec {

namespace {

double ConvertScore(double s, ScoreDomain domain) {
  if (domain == ScoreDomain::kLinear) {
    if (!(s >= 0.0)) {
      throw DataError(fmt::format("linear-domain score {} is negative", s));
    }
    return std::log(s);
  }
  return s;
}

}  // namespace

namespace {

Utterance ParseRecord(const nlohmann::json& record, const LoadOptions& options,
                      bool* reordered) {
  if (!record.is_object()) throw DataError("record is not a JSON object");
  Utterance utt{.id = {}, .reference = {},
                .nbest = NBestList::FromOrdered({{"", 0.0, 1, ""}}),
                .lattice = {}};
  try {
    utt.id = record.at("id").get<std::string>();
    if (utt.id.empty()) throw DataError("empty utterance id");
    if (auto it = record.find("ref"); it != record.end() && !it->is_null()) {
      utt.reference = it->get<std::string>();
    }
    const auto& nbest = record.at("nbest");
    if (!nbest.is_array() || nbest.empty()) {
      throw DataError(fmt::format("utterance '{}' has an empty nbest", utt.id));
    }
    std::vector<Hypothesis> hyps;
    for (const auto& h : nbest) {
      Hypothesis hyp;
      hyp.text = h.at("text").get<std::string>();
      hyp.asr_logscore = ConvertScore(h.at("score").get<double>(),
                                      options.score_domain);
      if (auto s = h.find("source"); s != h.end()) {
        hyp.source = s->get<std::string>();
      }
      hyps.push_back(std::move(hyp));
    }
    const bool comparable = record.value("scores_comparable", true);
    utt.nbest = comparable ? NBestList::FromUnsorted(std::move(hyps), reordered)
                           : NBestList::FromOrdered(std::move(hyps), false);
    if (auto it = record.find("lattice"); it != record.end() && !it->is_null()) {
      utt.lattice = LatticeFromJson(*it);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(ex.what());
  } catch (const InvalidArgument& ex) {
    throw DataError(ex.what());
  }
  return utt;
}

}  // namespace

Utterance UtteranceFromJson(const nlohmann::json& record,
                            const LoadOptions& options) {
  return ParseRecord(record, options, nullptr);
}

nlohmann::json UtteranceToJson(const Utterance& utt) {
  nlohmann::json nbest = nlohmann::json::array();
  for (const auto& h : utt.nbest) {
    nlohmann::json j = {{"text", h.text}, {"score", h.asr_logscore}};
    if (!h.source.empty()) j["source"] = h.source;
    nbest.push_back(std::move(j));
  }
  nlohmann::json out = {{"id", utt.id}};
  out["ref"] = utt.reference ? nlohmann::json(*utt.reference) : nlohmann::json();
  out["nbest"] = std::move(nbest);
  if (!utt.nbest.scores_comparable()) out["scores_comparable"] = false;
  if (utt.lattice) out["lattice"] = LatticeToJson(*utt.lattice);
  return out;
}

Dataset ParseDataset(std::istream& in, const LoadOptions& options) {
  Dataset ds;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      bool reordered = false;
      Utterance utt = ParseRecord(record, options, &reordered);
      if (!seen.insert(utt.id).second) {
        throw DataError(fmt::format("duplicate utterance id '{}'", utt.id));
      }
      if (reordered) {
        ds.warnings.push_back(fmt::format(
            "line {}: N-best for '{}' was not sorted by score; re-sorted",
            line_no, utt.id));
      }
      ds.utterances.push_back(std::move(utt));
    } catch (const nlohmann::json::exception& ex) {
      throw DataError(fmt::format("line {}: {}", line_no, ex.what()));
    } catch (const DataError& ex) {
      throw DataError(fmt::format("line {}: {}", line_no, ex.what()));
    }
  }
  return ds;
}

Dataset LoadDataset(const std::filesystem::path& path,
                    const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  return ParseDataset(in, options);
}

void WriteDataset(std::ostream& out, std::span<const Utterance> utterances) {
  for (const auto& utt : utterances) out << UtteranceToJson(utt).dump() << '\n';
}

void SaveDataset(const std::filesystem::path& path,
                 std::span<const Utterance> utterances) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  WriteDataset(out, utterances);
}

}  // namespace asrec
