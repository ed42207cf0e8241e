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

#include "asrec/decode.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "asrec/error.h"
#include "asrec/lattice_convert.h"
#include "asrec/metrics.h"
#include "asrec/textnorm.h"

namespace asrec {

Strategy ParseStrategy(std::string_view name) {
  if (name == "uncon") return Strategy::kUncon;
  if (name == "constr") return Strategy::kConstr;
  if (name == "closest") return Strategy::kClosest;
  if (name == "lattice") return Strategy::kLattice;
  throw InvalidArgument(
      fmt::format("unknown strategy '{}' (uncon|constr|closest|lattice)", name));
}

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kUncon: return "uncon";
    case Strategy::kConstr: return "constr";
    case Strategy::kClosest: return "closest";
    case Strategy::kLattice: return "lattice";
  }
  return "uncon";
}

namespace {

std::string_view Trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool StripQuotes(std::string_view& s) {
  static constexpr std::pair<std::string_view, std::string_view> kPairs[] = {
      {"\"", "\""}, {"'", "'"}, {"`", "`"},
      {"\xE2\x80\x9C", "\xE2\x80\x9D"},  // “ ”
      {"\xE2\x80\x98", "\xE2\x80\x99"},  // ‘ ’
  };
  for (const auto& [open, close] : kPairs) {
    if (s.size() >= open.size() + close.size() && s.starts_with(open) &&
        s.ends_with(close)) {
      s.remove_prefix(open.size());
      s.remove_suffix(close.size());
      return true;
    }
  }
  return false;
}

bool StripTag(std::string_view& s) {
  if (!s.starts_with('<')) return false;
  const size_t gt = s.find('>');
  if (gt == std::string_view::npos || gt < 2) return false;
  const std::string_view name = s.substr(1, gt - 1);
  if (name.find_first_of("</> ") != std::string_view::npos) return false;
  const std::string closing = fmt::format("</{}>", name);
  if (!s.ends_with(closing) || s.size() < gt + 1 + closing.size()) return false;
  s = s.substr(gt + 1, s.size() - gt - 1 - closing.size());
  return true;
}

}  // namespace

std::string StripWrapping(std::string_view text) {
  std::string_view s = Trim(text);
  while (StripQuotes(s) || StripTag(s)) s = Trim(s);
  return std::string(s);
}

UnconResult CorrectUnconstrained(const Utterance& utt, Scorer& scorer,
                                 const EcConfig& cfg) {
  cfg.Validate();
  const auto ctx = ScorerContext::FromNBest(utt.nbest, cfg.n_input);
  UnconResult out{StripWrapping(scorer.Generate(ctx)), {}};
  const size_t words = SplitWords(out.text).size();
  const size_t rank1 = SplitWords(utt.nbest[0].text).size();
  if (2 * words < rank1) out.flags.emplace_back(kFlagTruncation);
  return out;
}

size_t InterpolatedArgmax(std::span<const Hypothesis> candidates,
                          std::span<const double> ec_scores, double lambda) {
  size_t best = 0;
  double best_score = 0.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const double ec = lambda == 0.0 ? 0.0 : ec_scores[i];
    const double s = (1.0 - lambda) * candidates[i].asr_logscore + lambda * ec;
    if (i == 0 || s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

ConstrainedResult SelectConstrained(const Utterance& utt, Scorer& scorer,
                                    const EcConfig& cfg) {
  cfg.Validate();
  const auto candidates = utt.nbest.top(cfg.n_input);
  for (const auto& h : candidates) {
    if (!std::isfinite(h.asr_logscore)) {
      throw InvalidArgument(fmt::format("utterance '{}': rank {} has a non-finite score",
                                        utt.id, h.rank));
    }
  }
  ConstrainedResult out;
  if (cfg.lambda != 0.0) {
    const auto ctx = ScorerContext::FromNBest(utt.nbest, cfg.n_input);
    std::vector<std::string> texts;
    for (const auto& h : candidates) texts.push_back(h.text);
    out.ec_scores = scorer.ScoreSequences(ctx, texts);
    if (cfg.length_normalize) {
      for (size_t i = 0; i < texts.size(); ++i) {
        out.ec_scores[i] /= static_cast<double>(SplitWords(texts[i]).size() + 1);
      }
    }
  }
  const size_t k = InterpolatedArgmax(candidates, out.ec_scores, cfg.lambda);
  out.hypothesis = candidates[k];
  out.score = (1.0 - cfg.lambda) * candidates[k].asr_logscore +
              (cfg.lambda == 0.0 ? 0.0 : cfg.lambda * out.ec_scores[k]);
  return out;
}

ClosestResult ClosestMap(std::string_view uncon_output, const NBestList& nbest, int n) {
  const auto target = NormalizedWords(uncon_output, NormMode::kEval);
  ClosestResult out;
  size_t best = 0;
  const auto candidates = nbest.top(n);
  for (size_t i = 0; i < candidates.size(); ++i) {
    const int64_t d =
        EditDistance(target, NormalizedWords(candidates[i].text, NormMode::kEval));
    out.distances.push_back(d);
    if (d < out.distances[best]) best = i;
  }
  out.hypothesis = candidates[best];
  out.distance = out.distances[best];
  return out;
}

namespace {

struct BeamItem {
  std::vector<std::string> history;
  double score;
  uint64_t seq;
};

// True when a ranks below b: lower score, or same score and inserted later.
bool RanksBelow(const BeamItem& a, const BeamItem& b) {
  if (a.score != b.score) return a.score < b.score;
  return a.seq > b.seq;
}

class Beam {
 public:
  explicit Beam(size_t capacity) : capacity_(capacity) {}

  void Offer(BeamItem item) {
    if (items_.size() >= capacity_) {
      auto lowest = std::min_element(items_.begin(), items_.end(), RanksBelow);
      if (lowest->score < item.score) items_.erase(lowest);
    }
    if (items_.size() < capacity_) items_.push_back(std::move(item));
  }

  // Insertion order.
  std::vector<BeamItem>& items() { return items_; }

 private:
  size_t capacity_;
  std::vector<BeamItem> items_;
};

}  // namespace

LatticeResult LatticeDecode(const Lattice& lattice, Scorer& scorer,
                            const ScorerContext& ctx, const EcConfig& cfg) {
  cfg.Validate();
  const double lambda = cfg.lambda;
  const size_t width = static_cast<size_t>(cfg.beam_width);
  std::unordered_map<int, Beam> beams;
  beams.emplace(lattice.start(), Beam(width));
  beams.at(lattice.start()).Offer({{}, 0.0, 0});
  uint64_t seq = 1;
  LatticeResult out;

  for (int v : lattice.topological_order()) {
    if (v == lattice.end()) break;
    auto it = beams.find(v);
    if (it == beams.end()) continue;
    const auto edges = lattice.out_edges(v);

    // Distinct successor tokens, first-seen order.
    std::vector<std::string> candidates;
    std::vector<size_t> slot(edges.size());
    for (size_t k = 0; k < edges.size(); ++k) {
      const std::string tok = edges[k].to == lattice.end()
                                  ? std::string(kEndOfSequence)
                                  : lattice.token(edges[k].to);
      auto pos = std::find(candidates.begin(), candidates.end(), tok);
      slot[k] = static_cast<size_t>(pos - candidates.begin());
      if (pos == candidates.end()) candidates.push_back(tok);
    }

    for (auto& item : it->second.items()) {
      std::vector<std::string> history = std::move(item.history);
      if (!lattice.is_sentinel(v)) history.push_back(lattice.token(v));
      std::vector<double> step(candidates.size(), 0.0);
      if (lambda != 0.0) {
        step = scorer.DecoderStep(ctx, history, candidates);
        ++out.decoder_calls;
      }
      for (size_t k = 0; k < edges.size(); ++k) {
        const double gain = lambda * step[slot[k]] + (1.0 - lambda) * edges[k].score;
        auto [target, _] = beams.try_emplace(edges[k].to, width);
        target->second.Offer({history, item.score + gain, seq++});
      }
    }
    beams.erase(v);
  }

  auto end_it = beams.find(lattice.end());
  if (end_it == beams.end() || end_it->second.items().empty()) {
    throw Error("lattice decode: no hypothesis reached the end node");
  }
  const auto& finals = end_it->second.items();
  const BeamItem* best = &finals.front();
  for (const auto& f : finals) {
    if (f.score > best->score || (f.score == best->score && f.history < best->history)) {
      best = &f;
    }
  }
  out.tokens = best->history;
  out.score = best->score;
  return out;
}

std::vector<double> LambdaGrid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw InvalidArgument(fmt::format("bad grid [{}, {}] step {}", lo, hi, step));
  }
  const auto count = static_cast<int64_t>(std::llround((hi - lo) / step));
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(count) + 1);
  for (int64_t i = 0; i <= count; ++i) {
    grid.push_back(std::min(hi, lo + static_cast<double>(i) * step));
  }
  return grid;
}

Lattice DecodingLattice(const Utterance& utt, int n) {
  if (utt.lattice) return *utt.lattice;
  const auto top = utt.nbest.top(n);
  return LatticeFromNBest(NBestList::FromOrdered(
      std::vector<Hypothesis>(top.begin(), top.end()), false));
}

GridResult GridSearchLambda(std::span<const Utterance> dev, Scorer& scorer,
                            Strategy strategy, const EcConfig& base,
                            const GridOptions& options) {
  if (dev.empty()) throw InvalidArgument("lambda search needs a non-empty dev set");
  if (strategy != Strategy::kConstr && strategy != Strategy::kLattice) {
    throw InvalidArgument(fmt::format("cannot tune lambda for strategy '{}'",
                                      StrategyName(strategy)));
  }
  base.Validate();
  const auto grid = LambdaGrid(options.lo, options.hi, options.step);

  // The correction-model scores do not depend on lambda; fetch them once.
  std::vector<std::vector<double>> ec(dev.size());
  std::vector<Lattice> lattices;
  if (strategy == Strategy::kConstr) {
    for (size_t u = 0; u < dev.size(); ++u) {
      EcConfig probe = base;
      probe.lambda = 1.0;
      ec[u] = SelectConstrained(dev[u], scorer, probe).ec_scores;
    }
  } else {
    for (const auto& utt : dev) lattices.push_back(DecodingLattice(utt, base.n_input));
  }

  GridResult result;
  for (size_t g = 0; g < grid.size(); ++g) {
    EcConfig cfg = base;
    cfg.lambda = grid[g];
    std::vector<std::string> texts;
    texts.reserve(dev.size());
    for (size_t u = 0; u < dev.size(); ++u) {
      if (strategy == Strategy::kConstr) {
        const auto cands = dev[u].nbest.top(cfg.n_input);
        texts.push_back(cands[InterpolatedArgmax(cands, ec[u], cfg.lambda)].text);
      } else {
        const auto ctx = ScorerContext::FromNBest(dev[u].nbest, cfg.n_input);
        const auto r = LatticeDecode(lattices[u], scorer, ctx, cfg);
        texts.push_back(JoinWords(PiecesToWords(r.tokens, options.markers)));
      }
    }
    const double wer = CorpusWer(dev, texts).wer_percent;
    result.curve.push_back({grid[g], wer});
    if (g == 0 || wer < result.best_wer) {
      result.best_lambda = grid[g];
      result.best_wer = wer;
    }
  }
  return result;
}

}  // namespace asrec
