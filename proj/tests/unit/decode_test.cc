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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "asrec/decode.h"
#include "asrec/error.h"
#include "asrec/lattice_convert.h"
#include "asrec/metrics.h"
#include "asrec/toy_scorer.h"
#include "generators.h"
#include "oracles.h"

namespace asrec {
namespace {

// Sequence scores from a table; steps are not supported.
class TableScorer : public Scorer {
 public:
  explicit TableScorer(std::map<std::string, double> table, std::string generated = "")
      : table_(std::move(table)), generated_(std::move(generated)) {}
  ScorerInfo Info() override { return {"table", "whitespace"}; }
  int calls = 0;

 protected:
  std::vector<double> DoScore(const ScorerContext&, std::span<const std::string> c) override {
    ++calls;
    std::vector<double> out;
    for (const auto& s : c) out.push_back(table_.count(s) ? table_.at(s) : -100.0);
    return out;
  }
  std::vector<double> DoStep(const ScorerContext&, std::span<const std::string>,
                             std::span<const std::string> c) override {
    ++calls;
    return std::vector<double>(c.size(), -1.0);
  }
  std::string DoGenerate(const ScorerContext&) override {
    ++calls;
    return generated_;
  }

 private:
  std::map<std::string, double> table_;
  std::string generated_;
};

class ThrowingScorer : public Scorer {
 public:
  ScorerInfo Info() override { throw ScorerError("down", true); }

 protected:
  std::vector<double> DoScore(const ScorerContext&, std::span<const std::string>) override {
    throw ScorerError("down", true);
  }
  std::vector<double> DoStep(const ScorerContext&, std::span<const std::string>,
                             std::span<const std::string>) override {
    throw ScorerError("down", true);
  }
  std::string DoGenerate(const ScorerContext&) override { throw ScorerError("down", true); }
};

Utterance Make(std::vector<std::pair<std::string, double>> hyps,
               std::optional<std::string> ref = std::nullopt) {
  std::vector<Hypothesis> hs;
  for (auto& [t, s] : hyps) hs.push_back({t, s, 0, ""});
  return {"u", std::move(ref), NBestList::FromOrdered(std::move(hs)), std::nullopt};
}

EcConfig Cfg(double lambda, int n, int beam = 1) {
  EcConfig c;
  c.lambda = lambda;
  c.n_input = n;
  c.beam_width = beam;
  return c;
}

const char* const kRef =
    "the gut and the gullet being cut across between these ligatures the stomach may be "
    "removed entire without spilling its contents";

Utterance GutGullet() {
  return Make({{"the gut and the gullet being cut across between these ligatches the stomach "
                "may be removed entire without spinning its contents",
                -1.0},
               {"the gut and the gullet being cut across between these ligatures the stomach "
                "may be removed entire without spinning its contents",
                -1.5},
               {"the gut and the gullet being cut across between these ligages the stomach "
                "may be removed entire without spinning its contents",
                -2.0},
               {"the gut and the gullet being cut across between these ligatches the stomach "
                "may be removed entire without spinning as contents",
                -2.5},
               {"the gut and the gullet being cut across between these ligatches the stomach "
                "may be removed entire without spinning his contents",
                -3.0}},
              kRef);
}

TEST(StripWrapping, Cases) {
  EXPECT_EQ(StripWrapping("  \"hello world\" "), "hello world");
  EXPECT_EQ(StripWrapping("<option2> a b </option2>"), "a b");
  EXPECT_EQ(StripWrapping("\xE2\x80\x9C" "quoted" "\xE2\x80\x9D"), "quoted");
  EXPECT_EQ(StripWrapping("'<answer>\"x\"</answer>'"), "x");
  EXPECT_EQ(StripWrapping("it's fine"), "it's fine");
  EXPECT_EQ(StripWrapping("<a>mismatch</b>"), "<a>mismatch</b>");
  EXPECT_EQ(StripWrapping("\""), "\"");
}

TEST(Uncon, ToyScorerReturnsAListText) {
  ToyScorer toy;
  const auto u = GutGullet();
  const auto r = CorrectUnconstrained(u, toy, Cfg(0.5, 5));
  std::set<std::string> texts;
  for (const auto& h : u.nbest) texts.insert(h.text);
  EXPECT_TRUE(texts.count(r.text));
  EXPECT_TRUE(r.flags.empty());
}

TEST(Uncon, TruncationFlag) {
  const auto u = GutGullet();  // 21 words at rank 1
  ASSERT_EQ(SplitWords(u.nbest[0].text).size(), 21u);
  TableScorer cut({}, "\"The gut and\"");
  const auto r = CorrectUnconstrained(u, cut, Cfg(0.5, 5));
  EXPECT_EQ(r.text, "The gut and");
  EXPECT_EQ(r.flags, std::vector<std::string>{std::string(kFlagTruncation)});
  // 11 of 21 words is not flagged, 10 is.
  TableScorer half({}, "a b c d e f g h i j k");
  EXPECT_TRUE(CorrectUnconstrained(u, half, Cfg(0.5, 5)).flags.empty());
  TableScorer under({}, "a b c d e f g h i j");
  EXPECT_FALSE(CorrectUnconstrained(u, under, Cfg(0.5, 5)).flags.empty());
}

TEST(Uncon, TooFewHypotheses) {
  ToyScorer toy;
  EXPECT_THROW(CorrectUnconstrained(GutGullet(), toy, Cfg(0.5, 6)), InvalidArgument);
}

TEST(Constr, LambdaZeroIgnoresScorer) {
  ThrowingScorer down;
  const auto r = SelectConstrained(GutGullet(), down, Cfg(0.0, 5));
  EXPECT_EQ(r.hypothesis.rank, 1);
  EXPECT_TRUE(r.ec_scores.empty());
}

TEST(Constr, LambdaOneIgnoresAsrScores) {
  const auto u = Make({{"a", -1.0}, {"b", -5.0}, {"c", -9.0}});
  TableScorer t({{"a", -3.0}, {"b", -2.0}, {"c", -2.5}});
  EXPECT_EQ(SelectConstrained(u, t, Cfg(1.0, 3)).hypothesis.text, "b");
}

TEST(Constr, HandComputedInterpolation) {
  // 0.5 * (asr + ec): a -> -3.0, b -> -2.75, c -> -3.5
  const auto u = Make({{"a", -1.0}, {"b", -2.0}, {"c", -3.0}});
  TableScorer t({{"a", -5.0}, {"b", -3.5}, {"c", -4.0}});
  const auto r = SelectConstrained(u, t, Cfg(0.5, 3));
  EXPECT_EQ(r.hypothesis.text, "b");
  EXPECT_DOUBLE_EQ(r.score, -2.75);
  EXPECT_EQ(t.calls, 1);
  // n_input 2 restricts the candidates.
  TableScorer t2({{"a", -5.0}, {"b", -3.5}, {"c", 0.0}});
  EXPECT_EQ(SelectConstrained(u, t2, Cfg(0.5, 2)).hypothesis.text, "b");
}

TEST(Constr, TiesGoToLowestRank) {
  const std::vector<Hypothesis> c{{"a", -1.0, 1, ""}, {"b", -2.0, 2, ""}, {"c", -3.0, 3, ""}};
  const std::vector<double> ec{-3.0, -2.0, -1.0};
  EXPECT_EQ(InterpolatedArgmax(c, ec, 0.5), 0u);
  const std::vector<double> ec2{-3.0, -1.0, -1.0};
  EXPECT_EQ(InterpolatedArgmax(c, ec2, 1.0), 1u);
}

TEST(Constr, LengthNormalization) {
  const auto u = Make({{"a b c", -1.0}, {"a", -1.0}});
  TableScorer t({{"a b c", -4.0}, {"a", -3.0}});
  auto cfg = Cfg(1.0, 2);
  EXPECT_EQ(SelectConstrained(u, t, cfg).hypothesis.text, "a");
  cfg.length_normalize = true;
  const auto r = SelectConstrained(u, t, cfg);
  EXPECT_EQ(r.hypothesis.text, "a b c");  // -4/4 beats -3/2
  EXPECT_DOUBLE_EQ(r.score, -1.0);
}

TEST(Constr, NonFiniteScoreRejected) {
  const auto u = Make({{"a", -1.0}, {"b", -INFINITY}});
  ToyScorer toy;
  EXPECT_THROW(SelectConstrained(u, toy, Cfg(0.5, 2)), InvalidArgument);
}

TEST(Constr, OutputAlwaysInTopN) {
  testing::Rng rng(41);
  ToyScorer toy;
  for (int i = 0; i < 200; ++i) {
    const auto nb = testing::RandomNBest(rng, {"a", "b", "the", "cat"}, 1, 8, 1, 4);
    const Utterance u{"u", std::nullopt, nb, std::nullopt};
    const int n = 1 + static_cast<int>(rng() % nb.size());
    const double lambda = static_cast<double>(rng() % 21) / 20.0;
    const auto r = SelectConstrained(u, toy, Cfg(lambda, n));
    EXPECT_LE(r.hypothesis.rank, n);
    EXPECT_EQ(r.hypothesis, nb.at_rank(r.hypothesis.rank));
  }
}

TEST(Closest, PublishedExample) {
  const auto u = GutGullet();
  const std::string gpt35 =
      "The gut and the gullet being cut across between these ligatures the stomach may be "
      "removed entire without spinning its contents.";
  const auto r = ClosestMap(gpt35, u.nbest, 3);
  EXPECT_EQ(r.distances, (std::vector<int64_t>{1, 0, 1}));
  EXPECT_EQ(r.hypothesis.rank, 2);
  EXPECT_EQ(r.distance, 0);
}

TEST(Closest, VerbatimAndTies) {
  const auto u = Make({{"a b c", -1.0}, {"a b d", -2.0}, {"x b c", -3.0}});
  EXPECT_EQ(ClosestMap("a b d", u.nbest, 3).hypothesis.rank, 2);
  // "z b c" is one edit from ranks 1 and 3.
  const auto r = ClosestMap("z b c", u.nbest, 3);
  EXPECT_EQ(r.distances, (std::vector<int64_t>{1, 2, 1}));
  EXPECT_EQ(r.hypothesis.rank, 1);
  EXPECT_THROW(ClosestMap("a", u.nbest, 4), InvalidArgument);
}

TEST(Closest, InvariantUnderNormalization) {
  const auto u = GutGullet();
  const auto a = ClosestMap("the gut and the gullet ligatures", u.nbest, 5);
  const auto b = ClosestMap("  THE Gut, and the gullet... Ligatures!", u.nbest, 5);
  EXPECT_EQ(a.distances, b.distances);
  EXPECT_EQ(a.hypothesis, b.hypothesis);
}

TEST(LatticeDecode, LinearChain) {
  const Lattice l({{0, ""}, {1, "a"}, {2, "b"}, {3, ""}}, {{0, 1, -1.0}, {1, 2, -2.0}, {2, 3, -0.5}},
                  0, 3);
  ToyScorer toy;
  const ScorerContext ctx{"a b[SEP]a c", 2};
  const auto r = LatticeDecode(l, toy, ctx, Cfg(0.3, 2));
  EXPECT_EQ(r.tokens, (std::vector<std::string>{"a", "b"}));
  EXPECT_NEAR(r.score, 0.3 * toy.ScoreSequence(ctx, "a b") + 0.7 * -3.5, 1e-9);
  EXPECT_EQ(r.decoder_calls, 3);
}

TEST(LatticeDecode, LambdaZeroIsViterbi) {
  testing::Rng rng(42);
  ThrowingScorer down;
  for (int i = 0; i < 200; ++i) {
    const auto l = testing::RandomLattice(rng, {"a", "b", "c"});
    const auto r = LatticeDecode(l, down, {"", 1}, Cfg(0.0, 1, 1));
    double best = -INFINITY;
    for (const auto& p : testing::EnumeratePaths(l)) best = std::max(best, p.edge_sum);
    EXPECT_NEAR(r.score, best, 1e-9);
    EXPECT_EQ(r.decoder_calls, 0);
  }
}

TEST(LatticeDecode, WideBeamEqualsBruteForce) {
  testing::Rng rng(43);
  ToyScorer toy;
  const std::vector<std::string> vocab{"the", "gut", "gullet", "a", "and"};
  for (int i = 0; i < 150; ++i) {
    const auto l = testing::RandomLattice(rng, vocab);
    const auto paths = CountPaths(l);
    const auto nb = testing::RandomNBest(rng, vocab, 1, 4, 1, 4);
    const auto ctx = ScorerContext::FromNBest(nb, static_cast<int>(nb.size()));
    const double lambda = static_cast<double>(rng() % 21) / 20.0;
    const auto r = LatticeDecode(l, toy, ctx, Cfg(lambda, 1, static_cast<int>(paths)));
    const auto want = testing::BruteForceLatticeArgmax(l, toy, ctx, lambda);
    EXPECT_EQ(r.tokens, want.tokens);
    EXPECT_NEAR(r.score, want.score, 1e-9);
  }
}

TEST(LatticeDecode, NBestLatticeLambdaOneMatchesSequenceScore) {
  testing::Rng rng(44);
  ToyScorer toy;
  const std::vector<std::string> vocab{"spin", "spinning", "its", "his", "contents"};
  for (int i = 0; i < 100; ++i) {
    const auto nb = testing::RandomNBest(rng, vocab, 1, 6, 1, 5);
    const auto ctx = ScorerContext::FromNBest(nb, static_cast<int>(nb.size()));
    const Utterance u{"u", std::nullopt, nb, std::nullopt};
    const auto l = DecodingLattice(u, static_cast<int>(nb.size()));
    const auto r = LatticeDecode(l, toy, ctx, Cfg(1.0, 1, 3));
    EXPECT_NEAR(r.score, toy.ScoreSequence(ctx, JoinWords(r.tokens)), 1e-6);
  }
}

TEST(LatticeDecode, DeterministicTies) {
  // Two paths with identical scores and a constant step scorer.
  const Lattice l({{0, ""}, {1, "b"}, {2, "a"}, {3, ""}}, {{0, 1, -1.0}, {0, 2, -1.0}, {1, 3, 0}, {2, 3, 0}},
                  0, 3);
  TableScorer flat({});
  const auto r = LatticeDecode(l, flat, {"", 1}, Cfg(0.5, 1, 2));
  EXPECT_EQ(r.tokens, std::vector<std::string>{"a"});
  // Beam 1: the first-inserted item survives at the end node.
  const auto r1 = LatticeDecode(l, flat, {"", 1}, Cfg(0.5, 1, 1));
  EXPECT_EQ(r1.tokens, std::vector<std::string>{"b"});
}

TEST(LambdaGrid, TwentyOnePoints) {
  const auto g = LambdaGrid();
  ASSERT_EQ(g.size(), 21u);
  EXPECT_DOUBLE_EQ(g.front(), 0.0);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
  EXPECT_NEAR(g[7], 0.35, 1e-12);
  EXPECT_EQ(LambdaGrid(0.0, 1.0, 0.1).size(), 11u);
  EXPECT_THROW(LambdaGrid(0.0, 1.0, 0.0), InvalidArgument);
  EXPECT_THROW(LambdaGrid(1.0, 0.0, 0.1), InvalidArgument);
}

TEST(GridSearch, ConstantScorerGivesFlatCurve) {
  std::vector<Utterance> dev{Make({{"a b", -1.0}, {"a c", -2.0}}, "a c"),
                             Make({{"x", -1.0}, {"y", -2.0}}, "y")};
  TableScorer flat({});
  const auto r = GridSearchLambda(dev, flat, Strategy::kConstr, Cfg(0.5, 2));
  ASSERT_EQ(r.curve.size(), 21u);
  for (const auto& p : r.curve) EXPECT_DOUBLE_EQ(p.wer_percent, r.curve[0].wer_percent);
  EXPECT_DOUBLE_EQ(r.best_lambda, 0.0);
}

// Rank 2 is correct everywhere, and the toy scorer prefers it because the
// rank-2 text dominates the context.
std::vector<Utterance> RankTwoSet() {
  std::vector<Utterance> dev;
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"the cat sad", "the cat sat"}, {"a dog ran", "a dog run"}, {"big red box", "big red fox"},
      {"we sing now", "we sing low"}, {"it is hot", "it is not"}};
  for (const auto& [wrong, right] : pairs) {
    dev.push_back(Make({{wrong, -1.0}, {right, -1.2}, {right, -1.3}, {right, -1.4}, {right, -1.5}},
                       right));
  }
  return dev;
}

TEST(GridSearch, PrefersCorrectionModelWhenItHelps) {
  const auto dev = RankTwoSet();
  ToyScorer toy;
  for (Strategy s : {Strategy::kConstr, Strategy::kLattice}) {
    const auto r = GridSearchLambda(dev, toy, s, Cfg(0.5, 5, 2));
    ASSERT_EQ(r.curve.size(), 21u);
    EXPECT_GT(r.best_lambda, 0.0) << StrategyName(s);
    EXPECT_DOUBLE_EQ(r.curve.front().lambda, 0.0);
    EXPECT_NEAR(r.curve.front().wer_percent, 100.0 / 3.0 * 5.0 / 5.0, 1e-9);
    EXPECT_DOUBLE_EQ(r.best_wer, 0.0);
    EXPECT_LE(r.best_wer, r.curve.front().wer_percent);
    EXPECT_LE(r.best_wer, r.curve.back().wer_percent);
    for (const auto& p : r.curve) EXPECT_GE(p.wer_percent, r.best_wer);
  }
}

TEST(GridSearch, Errors) {
  ToyScorer toy;
  EXPECT_THROW(GridSearchLambda({}, toy, Strategy::kConstr, Cfg(0.5, 1)), InvalidArgument);
  const auto dev = RankTwoSet();
  EXPECT_THROW(GridSearchLambda(dev, toy, Strategy::kClosest, Cfg(0.5, 1)), InvalidArgument);
  std::vector<Utterance> noref{Make({{"a", -1.0}})};
  EXPECT_THROW(GridSearchLambda(noref, toy, Strategy::kConstr, Cfg(0.5, 1)), DataError);
}

TEST(Strategy, Names) {
  for (auto s : {Strategy::kUncon, Strategy::kConstr, Strategy::kClosest, Strategy::kLattice}) {
    EXPECT_EQ(ParseStrategy(StrategyName(s)), s);
  }
  EXPECT_THROW(ParseStrategy("beam"), InvalidArgument);
}

}  // namespace
}  // namespace asrec
