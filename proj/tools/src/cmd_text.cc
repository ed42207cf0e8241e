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

#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "asrec/error.h"
#include "asrec/metrics.h"
#include "asrec/textnorm.h"
#include "session.h"

namespace asrec::cli {

namespace {

std::string TableRow(std::string_view label, const CorpusReport& r) {
  const auto& c = r.totals;
  return fmt::format("{:<14} {:>8.2f} {:>8} {:>8} {:>8} {:>8} {:>8}\n", label,
                     Pct2(r.wer_percent), c.cor, c.sub, c.del, c.ins, c.ref_len);
}

std::string TableHeader() {
  return fmt::format("{:<14} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}\n", "", "WER%", "Cor",
                     "Sub", "Del", "Ins", "RefLen");
}

nlohmann::json ReportJson(const CorpusReport& r, bool with_ranks) {
  nlohmann::json utts = nlohmann::json::array();
  for (const auto& u : r.utterances) {
    nlohmann::json j = CountsJson(u.counts);
    j["id"] = u.id;
    if (with_ranks) j["rank"] = u.selected_rank;
    utts.push_back(std::move(j));
  }
  return {{"wer", Pct2(r.wer_percent)}, {"counts", CountsJson(r.totals)}, {"utterances", utts}};
}

nlohmann::json CrossJson(const CrossWer& x) {
  return {{"all", RoundHalfAway(x.all_pct(), 1)},
          {"sub", RoundHalfAway(x.sub_pct(), 1)},
          {"del", RoundHalfAway(x.del_pct(), 1)},
          {"ins", RoundHalfAway(x.ins_pct(), 1)},
          {"row", x.FormatRow()},
          {"counts", CountsJson(x.counts)}};
}

std::vector<NBestList> Lists(const std::vector<Utterance>& utts) {
  std::vector<NBestList> lists;
  lists.reserve(utts.size());
  for (const auto& u : utts) lists.push_back(u.nbest);
  return lists;
}

void AddNormalize(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string mode = "eval";
    std::string in = "-";
    std::string out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("normalize", "Normalize text, one utterance per line");
  app->add_option("--mode", o->mode, "eval (WER scoring) or stats (list statistics)")
      ->check(CLI::IsMember({"eval", "stats"}));
  app->add_option("--in", o->in, "Input text file, - for stdin");
  app->add_option("--out", o->out, "Output text file, - for stdout");
  out.push_back({app, [o](Session& s) {
                   const NormMode mode = o->mode == "eval" ? NormMode::kEval : NormMode::kStats;
                   std::istringstream in(s.ReadInput(o->in));
                   std::string result;
                   for (std::string line; std::getline(in, line);) {
                     result += Normalize(line, mode);
                     result += '\n';
                   }
                   s.WriteOutput(o->out, result);
                 }});
}

void AddScore(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string refs;
    std::string hyps;
    int oracle = 0;
    bool cross_wer = false;
    bool uniq = false;
    std::string out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("score", "Corpus WER and list statistics");
  app->add_option("--refs", o->refs, "Dataset JSONL with references")->required();
  app->add_option("--hyps", o->hyps,
                  "Hypotheses: JSONL {id, text} or plain text in dataset order "
                  "(default: rank-1 hypotheses)");
  app->add_option("--oracle", o->oracle, "Also report the N-best oracle WER over the top N")
      ->check(CLI::NonNegativeNumber);
  app->add_flag("--cross-wer", o->cross_wer, "Also report pairwise WER within each list");
  app->add_flag("--uniq", o->uniq, "Also report unique hypotheses per list");
  app->add_option("--out", o->out, "Report JSON path; the table then goes to stdout");
  out.push_back({app, [o](Session& s) {
                   const Dataset data = s.LoadData(o->refs);
                   const auto& utts = data.utterances;
                   std::vector<std::string> texts;
                   if (o->hyps.empty()) {
                     for (const auto& u : utts) texts.push_back(u.nbest[0].text);
                   } else {
                     texts = MatchHyps(ParseHypFile(s.ReadInput(o->hyps)), utts);
                   }
                   const CorpusReport report = CorpusWer(utts, texts);
                   nlohmann::json j = ReportJson(report, false);
                   std::string table = TableHeader() + TableRow("system", report);
                   if (o->oracle > 0) {
                     const CorpusReport oracle = OracleWer(utts, o->oracle);
                     j["oracle"] = ReportJson(oracle, true);
                     j["oracle"]["n"] = o->oracle;
                     table += TableRow(fmt::format("oracle@{}", o->oracle), oracle);
                   }
                   if (o->cross_wer || o->uniq) {
                     const auto lists = Lists(utts);
                     if (o->cross_wer) {
                       const CrossWer x = CorpusCrossWer(lists);
                       j["cross_wer"] = CrossJson(x);
                       table += fmt::format("cross-WER (All / Sub / Del / Ins): {}\n", x.FormatRow());
                     }
                     if (o->uniq) {
                       j["uniq"] = Pct2(Uniq(lists));
                       table += fmt::format("Uniq: {:.2f}\n", Pct2(Uniq(lists)));
                     }
                   }
                   s.WriteOutput(o->out, j.dump(2) + "\n");
                   (o->out == "-" ? std::cerr : std::cout) << table;
                 }});
}

void AddStats(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string in;
    std::vector<int> oracle{1, 5, 10};
    std::string out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("stats", "N-best list statistics: Uniq, cross-WER, oracles");
  app->add_option("--in", o->in, "Dataset JSONL")->required();
  app->add_option("--oracle", o->oracle, "Oracle depths (when references are present)")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", o->out, "Output JSON, - for stdout");
  out.push_back({app, [o](Session& s) {
                   const Dataset data = s.LoadData(o->in);
                   const auto& utts = data.utterances;
                   if (utts.empty()) throw DataError("dataset is empty");
                   const auto lists = Lists(utts);
                   size_t longest = 0;
                   for (const auto& l : lists) longest = std::max(longest, l.size());
                   nlohmann::json j = {{"utterances", utts.size()},
                                       {"max_list_size", longest},
                                       {"uniq", Pct2(Uniq(lists))},
                                       {"cross_wer", CrossJson(CorpusCrossWer(lists))}};
                   const bool have_refs = std::all_of(
                       utts.begin(), utts.end(), [](const Utterance& u) { return u.reference.has_value(); });
                   if (have_refs) {
                     nlohmann::json oracle = nlohmann::json::object();
                     for (int n : o->oracle) {
                       oracle[std::to_string(n)] = Pct2(OracleWer(utts, n).wer_percent);
                     }
                     j["oracle_wer"] = oracle;
                   }
                   s.WriteOutput(o->out, j.dump(2) + "\n");
                 }});
}

}  // namespace

void AddTextCommands(CLI::App& root, std::vector<Command>& out) {
  AddNormalize(root, out);
  AddScore(root, out);
  AddStats(root, out);
}

}  // namespace asrec::cli
