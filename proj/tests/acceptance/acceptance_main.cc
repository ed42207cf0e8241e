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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "asrec/combine.h"
#include "asrec/decode.h"
#include "asrec/lattice_convert.h"
#include "asrec/metrics.h"
#include "asrec/prompts.h"
#include "asrec/textnorm.h"
#include "asrec/toy_scorer.h"
#include "generators.h"
#include "oracles.h"

namespace asrec {
namespace {

using Clock = std::chrono::steady_clock;
using Words = std::vector<std::string>;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;  // 0: none
  std::function<Outcome()> check;
};

// --- 1 ---------------------------------------------------------------------

Outcome EditDistanceOracle() {
  std::vector<Words> seqs{{}};
  for (size_t begin = 0, len = 0; len < 6; ++len) {
    const size_t end = seqs.size();
    for (size_t i = begin; i < end; ++i) {
      for (const char* t : {"a", "b", "c"}) {
        Words w = seqs[i];
        w.push_back(t);
        seqs.push_back(std::move(w));
      }
    }
    begin = end;
  }
  int64_t pairs = 0, agree = 0;
  for (const auto& r : seqs) {
    for (const auto& h : seqs) {
      ++pairs;
      const auto c = Align(r, h).counts;
      if (c.errors() == testing::RecursiveEditDistance(r, h) && c.ref_len == static_cast<int64_t>(r.size()) &&
          c.cor + c.sub + c.ins == static_cast<int64_t>(h.size())) {
        ++agree;
      }
    }
  }
  return {agree == pairs, fmt::format("{}/{} pairs agree ({} sequences)", agree, pairs, seqs.size())};
}

// --- 2 ---------------------------------------------------------------------

Outcome ClosestExample() {
  const std::string base =
      "the gut and the gullet being cut across between these {} the stomach may be removed "
      "entire without spinning its contents";
  std::vector<Hypothesis> hs;
  double s = -1.0;
  for (const char* w : {"ligatches", "ligatures", "ligages"}) {
    hs.push_back({fmt::format(fmt::runtime(base), w), s, 0, ""});
    s -= 0.5;
  }
  const auto nb = NBestList::FromOrdered(std::move(hs));
  const std::string corrected =
      "The gut and the gullet being cut across between these ligatures the stomach may be "
      "removed entire without spinning its contents.";
  const auto r = ClosestMap(corrected, nb, 3);
  const bool ok = r.distances == std::vector<int64_t>{1, 0, 1} && r.hypothesis.rank == 2;
  return {ok, fmt::format("distances ({}) -> hypothesis {}", fmt::join(r.distances, ", "),
                          r.hypothesis.rank)};
}

// --- 3 ---------------------------------------------------------------------

Outcome DegenerateLambdas() {
  testing::Rng rng(2024);
  const std::vector<std::string> vocab{"the", "gut", "gullet", "and", "cut", "ligatures", "its"};
  ToyScorer toy;
  int ok0 = 0, ok1 = 0;
  constexpr int kUtts = 50;
  for (int u = 0; u < kUtts; ++u) {
    const auto nb = testing::RandomNBest(rng, vocab, 5, 5, 2, 8);
    const Utterance utt{fmt::format("u{}", u), std::nullopt, nb, std::nullopt};
    EcConfig cfg;
    cfg.n_input = 5;
    cfg.lambda = 0.0;
    if (SelectConstrained(utt, toy, cfg).hypothesis.rank == 1) ++ok0;

    const std::string ctx = SepConcat(nb, 5);
    int want = 1;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& h : nb) {
      const double lp = testing::ToyReferenceLogProb(ctx, h.text);
      if (lp > best) {
        best = lp;
        want = h.rank;
      }
    }
    cfg.lambda = 1.0;
    if (SelectConstrained(utt, toy, cfg).hypothesis.rank == want) ++ok1;
  }
  return {ok0 == kUtts && ok1 == kUtts,
          fmt::format("lambda=0 rank-1 {}/{}, lambda=1 scorer argmax {}/{}", ok0, kUtts, ok1, kUtts)};
}

// --- 4 ---------------------------------------------------------------------

Outcome LatticeDecodeOracle() {
  testing::Rng rng(4242);
  const std::vector<std::string> vocab{"the", "gut", "gullet", "cut", "a", "and"};
  ToyScorer toy;
  int cases = 0, match = 0;
  double worst = 0.0;
  size_t max_paths = 0;
  for (int i = 0; i < 100; ++i) {
    const auto lat = testing::RandomLattice(rng, vocab);
    const size_t paths = CountPaths(lat);
    max_paths = std::max(max_paths, paths);
    const auto nb = testing::RandomNBest(rng, vocab, 1, 5, 1, 6);
    const auto ctx = ScorerContext::FromNBest(nb, static_cast<int>(nb.size()));
    for (double lambda : {0.0, 0.25, 0.5, 1.0}) {
      EcConfig cfg;
      cfg.lambda = lambda;
      cfg.n_input = 1;
      cfg.beam_width = static_cast<int>(paths);
      const auto got = LatticeDecode(lat, toy, ctx, cfg);
      const auto want = testing::BruteForceLatticeArgmax(lat, toy, ctx, lambda);
      const double diff = std::abs(got.score - want.score);
      worst = std::max(worst, diff);
      ++cases;
      if (got.tokens == want.tokens && diff <= 1e-6) ++match;
    }
  }
  return {match == cases, fmt::format("{}/{} exact winners, max |score diff| {:.2e}, max paths {}",
                                      match, cases, worst, max_paths)};
}

// --- 5 ---------------------------------------------------------------------

// Confusion-network lattice from an aligned N-best: one node per distinct
// word in each slot, null arcs become skip edges.
Lattice ConfusionLattice(const NBestList& nb) {
  WordTransitionNetwork wtn(SplitWords(nb[0].text), 1.0);
  for (size_t k = 1; k < nb.size(); ++k) wtn.Add(SplitWords(nb[k].text), 1.0);
  std::vector<LatticeNode> nodes{{0, ""}};
  std::vector<LatticeEdge> edges;
  std::vector<int> frontier{0};
  int next = 1;
  for (const auto& slot : wtn.slots()) {
    std::set<std::string> words;
    bool has_null = false;
    for (const auto& a : slot.arcs) {
      if (a.word) {
        words.insert(*a.word);
      } else {
        has_null = true;
      }
    }
    std::vector<int> here;
    for (const auto& w : words) {
      nodes.push_back({next, w});
      for (int p : frontier) edges.push_back({p, next, 0.0});
      here.push_back(next++);
    }
    if (has_null) here.insert(here.end(), frontier.begin(), frontier.end());
    frontier = std::move(here);
  }
  nodes.push_back({next, ""});
  for (int p : frontier) edges.push_back({p, next, 0.0});
  return Lattice(std::move(nodes), std::move(edges), 0, next);
}

Outcome LatticeOracleOrdering() {
  testing::Rng rng(5150);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  int trials = 0, ok = 0, strictly = 0;
  int64_t lat_total = 0, nb_total = 0;
  while (trials < 200) {
    const auto nb = testing::RandomNBest(rng, vocab, 2, 10, 1, 7);
    const auto ref = testing::RandomWords(rng, vocab, 1, 7);
    int64_t nbest_err = std::numeric_limits<int64_t>::max();
    for (const auto& h : nb) nbest_err = std::min(nbest_err, EditDistance(ref, SplitWords(h.text)));
    const Lattice lat = trials % 2 == 0 ? LatticeFromNBest(nb) : ConfusionLattice(nb);
    const int64_t lat_err = LatticeOracle(lat, ref).errors();
    ++trials;
    if (lat_err <= nbest_err) ++ok;
    if (lat_err < nbest_err) ++strictly;
    lat_total += lat_err;
    nb_total += nbest_err;
  }
  return {ok == trials,
          fmt::format("{}/{} satisfy <= ({} strictly lower; errors {} vs {})", ok, trials, strictly,
                      lat_total, nb_total)};
}

// --- 6 ---------------------------------------------------------------------

Outcome CrossWerDelIns() {
  testing::Rng rng(6006);
  const std::vector<std::string> vocab{"the", "gut", "and", "gullet", "cut", "a", "it's", "its"};
  CrossWer total;
  int per_list = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = ListCrossWer(testing::RandomNBest(rng, vocab, 1, 10, 0, 12));
    if (x.counts.del == x.counts.ins) ++per_list;
    total += x;
  }
  return {total.counts.del == total.counts.ins && per_list == 1000,
          fmt::format("aggregate del {} ins {}; per-list equal {}/1000; row {}", total.counts.del,
                      total.counts.ins, per_list, total.FormatRow())};
}

// --- 7 ---------------------------------------------------------------------

Outcome GridSearch() {
  const auto grid = LambdaGrid(0.0, 1.0, 0.05);
  testing::Rng rng(7007);
  const std::vector<std::string> vocab{"the", "cat", "sat", "sad", "on", "mat", "a"};
  std::vector<Utterance> dev;
  for (int u = 0; u < 30; ++u) {
    const auto ref = testing::RandomWords(rng, vocab, 2, 6);
    // Perturbed copies of the reference, best ASR score not always on it.
    std::vector<Hypothesis> hs;
    for (int k = 0; k < 5; ++k) {
      auto w = ref;
      const int edits = static_cast<int>(rng() % 3);
      for (int e = 0; e < edits; ++e) w[rng() % w.size()] = vocab[rng() % vocab.size()];
      hs.push_back({JoinWords(w), -static_cast<double>(rng() % 1000) / 100.0, 0, ""});
    }
    dev.push_back({fmt::format("d{}", u), JoinWords(ref), NBestList::FromUnsorted(std::move(hs)), std::nullopt});
  }
  ToyScorer toy;
  EcConfig base;
  base.n_input = 5;
  base.beam_width = 2;
  bool ok = grid.size() == 21;
  std::string detail = fmt::format("{} candidates", grid.size());
  for (Strategy s : {Strategy::kConstr, Strategy::kLattice}) {
    const auto r = GridSearchLambda(dev, toy, s, base);
    const double w0 = r.curve.front().wer_percent, w1 = r.curve.back().wer_percent;
    ok = ok && r.curve.size() == 21 && r.best_wer <= std::min(w0, w1);
    detail += fmt::format("; {}: lambda*={:.2f} WER {:.2f} (0: {:.2f}, 1: {:.2f})", StrategyName(s),
                          r.best_lambda, r.best_wer, w0, w1);
  }
  return {ok, detail};
}

// --- 8 ---------------------------------------------------------------------

Outcome WerrArithmetic() {
  const double a = RoundHalfAway(Werr(7.37, 6.67), 1);
  const double b = Werr(6.90, 4.72);
  return {a == 9.5 && std::abs(b - 32.0) <= 0.5,
          fmt::format("(7.37, 6.67) -> {:.1f}%; (6.90, 4.72) -> {:.2f}%", a, b)};
}

// --- 9 ---------------------------------------------------------------------

Outcome RoverChecks() {
  const std::vector<SystemOutput> toy{{"a b c", 1}, {"a x c", 1}, {"a b c", 1}};
  const std::string majority = Rover(toy);
  testing::Rng rng(9009);
  const std::vector<std::string> vocab{"a", "b", "c", "d"};
  int idem = 0, dup = 0;
  for (int i = 0; i < 500; ++i) {
    std::vector<SystemOutput> outs;
    for (int s = 0; s < 3; ++s) {
      outs.push_back({JoinWords(testing::RandomWords(rng, vocab, 0, 7)), 1.0 + static_cast<double>(rng() % 3)});
    }
    const std::vector<SystemOutput> same{{outs[0].text, 1}, {outs[0].text, 2}, {outs[0].text, 1}};
    if (Rover(same) == JoinWords(SplitWords(outs[0].text))) ++idem;
    auto doubled = outs;
    doubled.insert(doubled.end(), outs.begin(), outs.end());
    if (Rover(doubled) == Rover(outs)) ++dup;
  }
  return {majority == "a b c" && idem == 500 && dup == 500,
          fmt::format("majority \"{}\"; idempotent {}/500; duplication-invariant {}/500", majority, idem, dup)};
}

// --- 10 --------------------------------------------------------------------

Outcome ConversionRoundTrip() {
  testing::Rng rng(1010);
  const std::vector<std::string> vocab{"gut", "gullet", "ligatures", "spinning", "the", "a"};
  const CharacterTokenizer suffix(MarkerConvention::kContinuationSuffix);
  const CharacterTokenizer prefix(MarkerConvention::kWordStartPrefix);
  const VocabTokenizer pieces({"gul", "let", "lig", "at", "ures", "spin", "ning", "th"},
                              MarkerConvention::kContinuationSuffix);
  const TokenizerAdapter* toks[] = {&suffix, &prefix, &pieces};
  int ok = 0;
  size_t max_paths = 0;
  for (int i = 0; i < 100; ++i) {
    const auto words = testing::RandomLattice(rng, vocab);
    max_paths = std::max(max_paths, CountPaths(words));
    const auto& tok = *toks[i % 3];
    const auto sub = RetokenizeLattice(words, tok);
    const auto back = WordLatticeFromSubword(sub, tok.convention());
    const auto again = RetokenizeLattice(back, tok);
    if (testing::PathStrings(back) == testing::PathStrings(words) &&
        testing::PathStrings(again) == testing::PathStrings(sub)) {
      ++ok;
    }
  }
  return {ok == 100, fmt::format("{}/100 lattices preserve path strings (max paths {})", ok, max_paths)};
}

// --- 11 --------------------------------------------------------------------

Outcome QuizRule() {
  const std::vector<std::pair<std::string, std::string>> items{
      {"the gut and the gullet being cut across", "the bowel and the throat being cut across"},
      {"he hoped there would be stew for dinner", "he wished there would be stew for supper"},
      {"stuff it into you his belly counselled him", "stuff it into yourself his stomach advised him"},
      {"after early nightfall the yellow lamps would light up", "after early dusk the yellow lamps would turn on"}};
  auto run = [&](const std::function<std::string(const std::string& prompt, const std::string& ref)>& model) {
    std::vector<QuizAnswers> answers;
    for (const auto& [ref, para] : items) {
      QuizAnswers a{ref, std::nullopt, std::nullopt};
      a.original_first = ParseQuizChoice(model(BuildQuiz(ref, para, QuizOrder::kOriginalFirst), ref));
      a.paraphrase_first = ParseQuizChoice(model(BuildQuiz(ref, para, QuizOrder::kParaphraseFirst), ref));
      answers.push_back(a);
    }
    return ScoreQuiz(answers, ContaminationRule::kBothOrders);
  };
  const double biased = run([](const std::string&, const std::string&) { return std::string("A"); });
  const double memorizing = run([](const std::string& prompt, const std::string& ref) {
    return prompt.find("A) " + ref + "\n") != std::string::npos ? std::string("A) " + ref)
                                                                : std::string("B) " + ref);
  });
  return {biased == 0.0 && memorizing == 1.0,
          fmt::format("position-A responder {:.2f}; memorizing responder {:.2f}", biased, memorizing)};
}

}  // namespace
}  // namespace asrec

int main() {
  using namespace asrec;
  const std::vector<Criterion> criteria{
      {"edit-distance-oracle", 60, EditDistanceOracle},
      {"closest-mapping-example", 0, ClosestExample},
      {"constrained-degenerate-lambdas", 0, DegenerateLambdas},
      {"lattice-decode-oracle", 120, LatticeDecodeOracle},
      {"lattice-oracle-ordering", 0, LatticeOracleOrdering},
      {"cross-wer-del-equals-ins", 0, CrossWerDelIns},
      {"lambda-grid-search", 0, GridSearch},
      {"werr-arithmetic", 0, WerrArithmetic},
      {"rover-voting", 0, RoverChecks},
      {"lattice-conversion-round-trip", 0, ConversionRoundTrip},
      {"quiz-both-orders-rule", 0, QuizRule},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& ex) {
      o = {false, fmt::format("exception: {}", ex.what())};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += fmt::format(" [over the {:.0f} s limit]", c.time_limit_s);
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
