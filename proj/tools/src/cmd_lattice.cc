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

#include <algorithm>

#include <fmt/format.h>

#include "asrec/dataset.h"
#include "asrec/decode.h"
#include "asrec/error.h"
#include "asrec/lattice_convert.h"
#include "asrec/textnorm.h"
#include "asrec/tokenizer.h"
#include "session.h"

namespace asrec::cli {

namespace {

int ClampN(int n, const Utterance& u) {
  return std::min<int>(n, static_cast<int>(u.nbest.size()));
}

void AddConvert(CLI::App* parent, std::vector<Command>& out) {
  struct Opts {
    std::string in;
    std::string out = "-";
    std::string to;
    std::string markers = "suffix";
    std::string tokenizer = "identity";
    int n = 10;
  };
  auto o = std::make_shared<Opts>();
  auto* app = parent->add_subcommand(
      "convert", "Rewrite dataset lattices (N-best lists when absent) as word or LM-token lattices");
  app->add_option("--in", o->in, "Dataset JSONL")->required();
  app->add_option("--out", o->out, "Output dataset JSONL");
  app->add_option("--to", o->to, "word: merge subword pieces; lm-tokens: split words")
      ->required()
      ->check(CLI::IsMember({"word", "lm-tokens"}));
  app->add_option("--markers", o->markers, "Subword marker convention of the input lattices")
      ->check(CLI::IsMember({"none", "suffix", "prefix"}));
  app->add_option("--tokenizer", o->tokenizer,
                  "identity | char:suffix | char:prefix | vocab:<suffix|prefix>:<file>");
  app->add_option("--n", o->n, "Hypotheses used when building a lattice from an N-best list")
      ->check(CLI::PositiveNumber);
  out.push_back({app, [o](Session& s) {
                   Dataset data = s.LoadData(o->in);
                   const MarkerConvention markers = ParseMarkerConvention(o->markers);
                   std::unique_ptr<TokenizerAdapter> tok;
                   if (o->to == "lm-tokens") {
                     tok = MakeTokenizer(o->tokenizer);
                     const std::string_view spec = o->tokenizer;
                     if (spec.starts_with("vocab:")) {
                       s.NoteInput(std::string(spec.substr(spec.find(':', 6) + 1)));
                     }
                   }
                   std::vector<nlohmann::json> records(data.utterances.size());
                   ParallelFor(records.size(), s.jobs, [&](size_t i) {
                     Utterance& u = data.utterances[i];
                     Lattice lat = DecodingLattice(u, ClampN(o->n, u));
                     try {
                       lat = o->to == "word" ? WordLatticeFromSubword(lat, markers)
                                             : RetokenizeLattice(lat, *tok);
                     } catch (const DataError& ex) {
                       throw DataError(fmt::format("utterance '{}': {}", u.id, ex.what()));
                     }
                     u.lattice = std::move(lat);
                     records[i] = UtteranceToJson(u);
                   });
                   s.WriteOutput(o->out, ToJsonl(records));
                 }});
}

// N-best oracle errors and lattice oracle counts on NormalizeEval tokens.
struct OracleRow {
  std::string id;
  AlignmentCounts lattice;
  AlignmentCounts nbest;
};

OracleRow OracleFor(const Utterance& u, int n, MarkerConvention markers) {
  if (!u.reference) throw DataError(fmt::format("utterance '{}' has no reference", u.id));
  const auto ref = NormalizedWords(*u.reference, NormMode::kEval);
  OracleRow row{u.id, {}, {}};
  const int k = ClampN(n, u);

  bool have_nbest = false;
  bool has_empty = false;
  std::vector<Hypothesis> normalized;
  for (const auto& h : u.nbest.top(k)) {
    const auto words = NormalizedWords(h.text, NormMode::kEval);
    const auto counts = Align(ref, words).counts;
    if (!have_nbest || counts.errors() < row.nbest.errors()) row.nbest = counts;
    have_nbest = true;
    if (words.empty()) {
      has_empty = true;
    } else {
      normalized.push_back({JoinWords(words), h.asr_logscore, h.rank, h.source});
    }
  }

  AlignmentCounts best;
  bool have_lattice = false;
  if (u.lattice) {
    Lattice lat = markers == MarkerConvention::kNone ? *u.lattice
                                                     : WordLatticeFromSubword(*u.lattice, markers);
    best = LatticeOracle(lat, ref);
    have_lattice = true;
  } else if (!normalized.empty()) {
    best = LatticeOracle(LatticeFromNBest(NBestList::FromOrdered(normalized, false)), ref);
    have_lattice = true;
  }
  // Hypotheses that normalize to nothing are not lattice paths; an empty
  // output deletes every reference word.
  if (has_empty && (!have_lattice || best.errors() > static_cast<int64_t>(ref.size()))) {
    best = AlignmentCounts{0, 0, static_cast<int64_t>(ref.size()), 0, static_cast<int64_t>(ref.size())};
  }
  row.lattice = best;
  return row;
}

void AddOracle(CLI::App* parent, std::vector<Command>& out) {
  struct Opts {
    std::string in;
    std::string lattice;
    std::string ref;
    std::string markers = "none";
    int n = 10;
    std::string out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* app = parent->add_subcommand(
      "oracle", "Lowest achievable WER over lattice paths, next to the N-best oracle");
  auto* in = app->add_option("--in", o->in,
                             "Dataset JSONL; utterances without a lattice use one built "
                             "from their normalized N-best list");
  auto* lat = app->add_option("--lattice", o->lattice, "Single lattice JSON file");
  auto* ref = app->add_option("--ref", o->ref, "Reference text for --lattice");
  in->excludes(lat);
  lat->needs(ref);
  app->add_option("--markers", o->markers,
                  "Subword markers of supplied lattices (collapsed to words first)")
      ->check(CLI::IsMember({"none", "suffix", "prefix"}));
  app->add_option("--n", o->n, "N-best depth")->check(CLI::PositiveNumber);
  app->add_option("--out", o->out, "Report JSON");
  out.push_back({app, [o](Session& s) {
                   const MarkerConvention markers = ParseMarkerConvention(o->markers);
                   if (!o->lattice.empty()) {
                     Lattice l = LatticeFromJson(nlohmann::json::parse(s.ReadInput(o->lattice)));
                     if (markers != MarkerConvention::kNone) l = WordLatticeFromSubword(l, markers);
                     const auto c = LatticeOracle(l, NormalizedWords(o->ref, NormMode::kEval));
                     nlohmann::json j = {{"counts", CountsJson(c)}, {"paths", CountPaths(l)}};
                     if (auto w = c.wer()) j["wer"] = Pct2(100.0 * *w);
                     s.WriteOutput(o->out, j.dump(2) + "\n");
                     return;
                   }
                   if (o->in.empty()) throw InvalidArgument("need --in or --lattice");
                   const Dataset data = s.LoadData(o->in);
                   std::vector<OracleRow> rows(data.utterances.size());
                   ParallelFor(rows.size(), s.jobs, [&](size_t i) {
                     rows[i] = OracleFor(data.utterances[i], o->n, markers);
                   });
                   AlignmentCounts lat_total, nbest_total;
                   nlohmann::json utts = nlohmann::json::array();
                   for (const auto& r : rows) {
                     lat_total += r.lattice;
                     nbest_total += r.nbest;
                     utts.push_back({{"id", r.id},
                                     {"lattice_errors", r.lattice.errors()},
                                     {"nbest_errors", r.nbest.errors()},
                                     {"ref_len", r.lattice.ref_len}});
                   }
                   auto pct = [](const AlignmentCounts& c) {
                     return Pct2(c.ref_len > 0 ? 100.0 * static_cast<double>(c.errors()) /
                                                     static_cast<double>(c.ref_len)
                                               : 0.0);
                   };
                   nlohmann::json j = {
                       {"n", o->n},
                       {"lattice_oracle", {{"wer", pct(lat_total)}, {"counts", CountsJson(lat_total)}}},
                       {"nbest_oracle", {{"wer", pct(nbest_total)}, {"counts", CountsJson(nbest_total)}}},
                       {"utterances", utts}};
                   s.WriteOutput(o->out, j.dump(2) + "\n");
                 }});
}

}  // namespace

void AddLatticeCommands(CLI::App& root, std::vector<Command>& out) {
  auto* app = root.add_subcommand("lattice", "Lattice conversion and oracle");
  app->require_subcommand(1);
  AddConvert(app, out);
  AddOracle(app, out);
}

}  // namespace asrec::cli
