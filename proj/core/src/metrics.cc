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

#include "asrec/metrics.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "asrec/error.h"
#include "asrec/textnorm.h"

namespace asrec {

std::optional<double> AlignmentCounts::wer() const {
  if (ref_len == 0) return std::nullopt;
  return static_cast<double>(errors()) / static_cast<double>(ref_len);
}

AlignmentCounts& AlignmentCounts::operator+=(const AlignmentCounts& o) {
  cor += o.cor;
  sub += o.sub;
  del += o.del;
  ins += o.ins;
  ref_len += o.ref_len;
  return *this;
}

Alignment Align(std::span<const std::string> ref,
                std::span<const std::string> hyp) {
  const size_t m = ref.size();
  const size_t n = hyp.size();
  const size_t w = n + 1;
  std::vector<int32_t> cost((m + 1) * w);
  for (size_t j = 0; j <= n; ++j) cost[j] = static_cast<int32_t>(j);
  for (size_t i = 1; i <= m; ++i) {
    cost[i * w] = static_cast<int32_t>(i);
    for (size_t j = 1; j <= n; ++j) {
      const int32_t diag =
          cost[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const int32_t del = cost[(i - 1) * w + j] + 1;
      const int32_t ins = cost[i * w + j - 1] + 1;
      cost[i * w + j] = std::min({diag, del, ins});
    }
  }

  Alignment out;
  out.counts.ref_len = static_cast<int64_t>(m);
  size_t i = m, j = n;
  while (i > 0 || j > 0) {
    const int32_t here = cost[i * w + j];
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (cost[(i - 1) * w + j - 1] + (same ? 0 : 1) == here) {
        out.path.push_back({same ? EditOp::kCorrect : EditOp::kSubstitution,
                            static_cast<int>(i - 1), static_cast<int>(j - 1)});
        (same ? out.counts.cor : out.counts.sub) += 1;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cost[(i - 1) * w + j] + 1 == here) {
      out.path.push_back({EditOp::kDeletion, static_cast<int>(i - 1), -1});
      ++out.counts.del;
      --i;
      continue;
    }
    out.path.push_back({EditOp::kInsertion, -1, static_cast<int>(j - 1)});
    ++out.counts.ins;
    --j;
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

int64_t EditDistance(std::span<const std::string> a,
                     std::span<const std::string> b) {
  std::vector<int64_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<int64_t>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    int64_t diag = row[0];
    row[0] = static_cast<int64_t>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int64_t up = row[j];
      row[j] = std::min({diag + (a[i - 1] == b[j - 1] ? 0 : 1), up + 1,
                         row[j - 1] + 1});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

const std::string& RequireReference(const Utterance& utt) {
  if (!utt.reference) {
    throw DataError(fmt::format("utterance '{}' has no reference", utt.id));
  }
  return *utt.reference;
}

void Finish(CorpusReport& report) {
  for (const auto& u : report.utterances) report.totals += u.counts;
  const auto wer = report.totals.wer();
  report.wer_percent = wer ? *wer * 100.0 : 0.0;
}

}  // namespace

CorpusReport CorpusWer(std::span<const Utterance> utterances,
                       std::span<const std::string> texts) {
  if (utterances.size() != texts.size()) {
    throw InvalidArgument(fmt::format("{} hypotheses for {} utterances",
                                      texts.size(), utterances.size()));
  }
  CorpusReport report;
  report.utterances.reserve(utterances.size());
  for (size_t k = 0; k < utterances.size(); ++k) {
    const auto ref = NormalizedWords(RequireReference(utterances[k]), NormMode::kEval);
    const auto hyp = NormalizedWords(texts[k], NormMode::kEval);
    report.utterances.push_back({utterances[k].id, Align(ref, hyp).counts, 0});
  }
  Finish(report);
  return report;
}

CorpusReport OracleWer(std::span<const Utterance> utterances, int n) {
  if (n < 1) throw InvalidArgument(fmt::format("oracle depth {} < 1", n));
  CorpusReport report;
  report.utterances.reserve(utterances.size());
  for (const auto& utt : utterances) {
    const auto ref = NormalizedWords(RequireReference(utt), NormMode::kEval);
    const int depth = std::min<int>(n, static_cast<int>(utt.nbest.size()));
    UtteranceScore best{utt.id, {}, 0};
    for (const auto& h : utt.nbest.top(depth)) {
      const auto counts =
          Align(ref, NormalizedWords(h.text, NormMode::kEval)).counts;
      if (best.selected_rank == 0 || counts.errors() < best.counts.errors()) {
        best.counts = counts;
        best.selected_rank = h.rank;
      }
    }
    report.utterances.push_back(std::move(best));
  }
  Finish(report);
  return report;
}

namespace {
double Pct(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

double CrossWer::all_pct() const { return Pct(counts.errors(), counts.ref_len); }
double CrossWer::sub_pct() const { return Pct(counts.sub, counts.ref_len); }
double CrossWer::del_pct() const { return Pct(counts.del, counts.ref_len); }
double CrossWer::ins_pct() const { return Pct(counts.ins, counts.ref_len); }

std::string CrossWer::FormatRow() const {
  return fmt::format("{:.1f} / {:.1f} / {:.1f} / {:.1f}",
                     RoundHalfAway(all_pct(), 1), RoundHalfAway(sub_pct(), 1),
                     RoundHalfAway(del_pct(), 1), RoundHalfAway(ins_pct(), 1));
}

CrossWer& CrossWer::operator+=(const CrossWer& o) {
  counts += o.counts;
  unique += o.unique;
  return *this;
}

namespace {

std::vector<std::vector<std::string>> UniqueStatsTexts(const NBestList& nbest) {
  std::vector<std::string> seen;
  std::vector<std::vector<std::string>> out;
  for (const auto& h : nbest) {
    std::string norm = NormalizeStats(h.text);
    if (std::find(seen.begin(), seen.end(), norm) != seen.end()) continue;
    out.push_back(SplitWords(norm));
    seen.push_back(std::move(norm));
  }
  return out;
}

}  // namespace

CrossWer ListCrossWer(const NBestList& nbest) {
  const auto uniq = UniqueStatsTexts(nbest);
  CrossWer out;
  out.unique = static_cast<int>(uniq.size());
  for (size_t i = 0; i < uniq.size(); ++i) {
    for (size_t j = 0; j < uniq.size(); ++j) {
      if (i != j) out.counts += Align(uniq[i], uniq[j]).counts;
    }
  }
  return out;
}

CrossWer CorpusCrossWer(std::span<const NBestList> lists) {
  CrossWer total;
  for (const auto& l : lists) total += ListCrossWer(l);
  return total;
}

double Uniq(std::span<const NBestList> lists) {
  if (lists.empty()) throw InvalidArgument("Uniq over zero lists");
  size_t sum = 0;
  for (const auto& l : lists) {
    std::set<std::string> distinct;
    for (const auto& h : l) distinct.insert(NormalizeStats(h.text));
    sum += distinct.size();
  }
  return static_cast<double>(sum) / static_cast<double>(lists.size());
}

double Werr(double baseline_wer, double system_wer) {
  if (!(baseline_wer > 0.0)) {
    throw InvalidArgument(
        fmt::format("WERR needs a positive baseline, got {}", baseline_wer));
  }
  return 100.0 * (baseline_wer - system_wer) / baseline_wer;
}

double RoundHalfAway(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // Nudge by a few ulps so values like 33.335 stored as 33.33499.. round up.
  const double scaled = value * scale;
  const double nudged = scaled + std::copysign(1e-9 * std::max(1.0, std::fabs(scaled)), scaled);
  return std::round(nudged) / scale;
}

}  // namespace asrec
