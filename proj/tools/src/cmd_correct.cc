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

#include <fmt/format.h>

#include "asrec/decode.h"
#include "asrec/error.h"
#include "asrec/toy_scorer.h"
#include "session.h"

namespace asrec::cli {

namespace {

inline constexpr std::string_view kFlagNonComparable = "non-comparable-asr-scores";
inline constexpr std::string_view kFlagLengthNormalized = "ec-length-normalized";

struct CorrectOpts {
  std::string strategy;
  double lambda = 0.5;
  int beam = 1;
  int n = 5;
  bool length_normalize = false;
  std::string scorer_url;
  std::string in;
  std::string out = "-";
  std::string markers = "none";
  std::string tune;
  double grid_step = 0.05;
  EndpointFlags endpoint;
};

nlohmann::json CorrectOne(const Utterance& u, Strategy strategy, Scorer& scorer,
                          const EcConfig& cfg, MarkerConvention markers) {
  nlohmann::json rec = {{"id", u.id}, {"strategy", StrategyName(strategy)}};
  std::vector<std::string> flags;
  const bool interpolates = strategy == Strategy::kConstr || strategy == Strategy::kLattice;
  if (interpolates && !u.nbest.scores_comparable() && cfg.lambda < 1.0) {
    flags.emplace_back(kFlagNonComparable);
  }
  switch (strategy) {
    case Strategy::kUncon: {
      auto r = CorrectUnconstrained(u, scorer, cfg);
      rec["text"] = r.text;
      rec["score"] = nullptr;
      flags.insert(flags.end(), r.flags.begin(), r.flags.end());
      break;
    }
    case Strategy::kClosest: {
      auto uncon = CorrectUnconstrained(u, scorer, cfg);
      auto r = ClosestMap(uncon.text, u.nbest, cfg.n_input);
      rec["text"] = r.hypothesis.text;
      rec["rank"] = r.hypothesis.rank;
      rec["score"] = nullptr;
      rec["distance"] = r.distance;
      rec["uncon"] = uncon.text;
      flags.insert(flags.end(), uncon.flags.begin(), uncon.flags.end());
      break;
    }
    case Strategy::kConstr: {
      auto r = SelectConstrained(u, scorer, cfg);
      rec["text"] = r.hypothesis.text;
      rec["rank"] = r.hypothesis.rank;
      rec["score"] = r.score;
      if (cfg.length_normalize) flags.emplace_back(kFlagLengthNormalized);
      break;
    }
    case Strategy::kLattice: {
      const int n = cfg.n_input;
      const Lattice lat = DecodingLattice(u, n);
      auto r = LatticeDecode(lat, scorer, ScorerContext::FromNBest(u.nbest, n), cfg);
      rec["text"] = JoinWords(PiecesToWords(r.tokens, markers));
      rec["score"] = r.score;
      rec["decoder_calls"] = r.decoder_calls;
      break;
    }
  }
  rec["flags"] = flags;
  return rec;
}

void AddCorrect(CLI::App& root, std::vector<Command>& out) {
  auto o = std::make_shared<CorrectOpts>();
  auto* app = root.add_subcommand("correct", "Error-correct N-best lists with one strategy");
  app->add_option("--strategy", o->strategy, "uncon | constr | closest | lattice")
      ->required()
      ->check(CLI::IsMember({"uncon", "constr", "closest", "lattice"}));
  app->add_option("--lambda", o->lambda, "Weight of the correction model score")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--beam", o->beam, "Beam width for lattice decoding")->check(CLI::PositiveNumber);
  app->add_option("--n", o->n, "Hypotheses given to the correction model")
      ->check(CLI::PositiveNumber);
  app->add_flag("--length-normalize", o->length_normalize,
                "Divide sequence scores by token count (constr)");
  app->add_option("--scorer-url", o->scorer_url, "Scorer service base URL (default: built-in toy)");
  app->add_option("--in", o->in, "Dataset JSONL")->required();
  app->add_option("--out", o->out, "Output JSONL {id, text, strategy, score, flags}");
  app->add_option("--markers", o->markers, "Marker convention of lattice tokens")
      ->check(CLI::IsMember({"none", "suffix", "prefix"}));
  app->add_option("--tune", o->tune, "Dev dataset; pick lambda by grid search on it first");
  app->add_option("--grid-step", o->grid_step, "Grid spacing on [0, 1]")
      ->check(CLI::Range(1e-6, 1.0));
  o->endpoint.Add(app);
  out.push_back({app, [o](Session& s) {
                   const Strategy strategy = ParseStrategy(o->strategy);
                   EcConfig cfg;
                   cfg.lambda = o->lambda;
                   cfg.beam_width = o->beam;
                   cfg.n_input = o->n;
                   cfg.length_normalize = o->length_normalize;
                   cfg.Validate();
                   const MarkerConvention markers = ParseMarkerConvention(o->markers);
                   Dataset data = s.LoadData(o->in);
                   auto scorer = MakeScorer(o->scorer_url, o->endpoint, s);

                   if (!o->tune.empty()) {
                     const Dataset dev = s.LoadData(o->tune);
                     GridOptions grid;
                     grid.step = o->grid_step;
                     grid.markers = markers;
                     const GridResult g = GridSearchLambda(dev.utterances, *scorer, strategy, cfg, grid);
                     nlohmann::json curve = nlohmann::json::array();
                     for (const auto& p : g.curve) {
                       curve.push_back({{"lambda", p.lambda}, {"wer", Pct2(p.wer_percent)}});
                     }
                     s.Record("lambda_search", {{"best_lambda", g.best_lambda},
                                                {"best_wer", Pct2(g.best_wer)},
                                                {"curve", curve}});
                     std::cerr << fmt::format("tuned lambda = {:.2f} (dev WER {:.2f})\n",
                                              g.best_lambda, Pct2(g.best_wer));
                     cfg.lambda = g.best_lambda;
                   }
                   s.Record("ec_config", {{"lambda", cfg.lambda},
                                          {"beam_width", cfg.beam_width},
                                          {"n_input", cfg.n_input},
                                          {"length_normalize", cfg.length_normalize}});

                   std::vector<nlohmann::json> records(data.utterances.size());
                   ParallelFor(records.size(), s.jobs, [&](size_t i) {
                     records[i] = CorrectOne(data.utterances[i], strategy, *scorer, cfg, markers);
                   });
                   s.WriteOutput(o->out, ToJsonl(records));
                 }});
}

// Fixed inputs for the cross-implementation conformance file: every
// backend claiming to be the toy scorer must reproduce these values.
struct VectorCase {
  std::string_view context;
  std::string_view candidate;
};
constexpr VectorCase kVectorCases[] = {
    {"the cat sat", "the cat sat"},
    {"the cat sat", "the cat"},
    {"the cat sat[SEP]the cat sad", "the cat sad"},
    {"the cat sat[SEP]the cat sad", "a dog"},
    {"the gut and the gullet[SEP]the gut in the gullet[SEP]a gut and the gullet",
     "the gut and the gullet"},
    {"the gut and the gullet[SEP]the gut in the gullet[SEP]a gut and the gullet",
     "the gut in the gullet"},
    {"the gut and the gullet[SEP]the gut in the gullet[SEP]a gut and the gullet", "zzz"},
    {"a b c", "a b c"},
    {"a b c", "c b a"},
    {"a b c[SEP]a b d", "a"},
    {"hello world[SEP]hello word", "hello world"},
    {"hello world[SEP]hello word", "hello word"},
    {"hello world[SEP]hello word", "HELLO"},
    {"it's a test[SEP]its a test", "it's a test"},
    {"it's a test[SEP]its a test", "its a test"},
    {"spinning wheels[SEP]spinning wheel[SEP]spin in wheels", "spinning wheels"},
    {"spinning wheels[SEP]spinning wheel[SEP]spin in wheels", "spin in wheels"},
    {"caf\xC3\xA9 au lait[SEP]cafe au lait", "caf\xC3\xA9 au lait"},
    {"x", "x"},
    {"x", "y"},
};

void AddScorer(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string scorer_url;
    std::string context;
    std::vector<std::string> candidates;
    std::string out = "-";
    EndpointFlags endpoint;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("scorer", "Query a scorer backend or emit conformance vectors");
  app->require_subcommand(1);
  app->add_option("--scorer-url", o->scorer_url, "Scorer service base URL (default: built-in toy)");
  app->add_option("--out", o->out, "Output path");
  o->endpoint.Add(app);

  auto* info = app->add_subcommand("info", "Backend name and tokenizer");
  out.push_back({info, [o](Session& s) {
                   auto scorer = MakeScorer(o->scorer_url, o->endpoint, s);
                   const ScorerInfo i = scorer->Info();
                   s.WriteOutput(o->out, nlohmann::json{{"name", i.name}, {"tokenizer", i.tokenizer}}
                                                 .dump() + "\n");
                 }});

  auto* score = app->add_subcommand("score", "Sequence log-probabilities given a context");
  score->add_option("--context", o->context, "Context string (N-best joined with [SEP])")
      ->required();
  score->add_option("--candidate", o->candidates, "Candidate sequence (repeatable)")->required();
  out.push_back({score, [o](Session& s) {
                   auto scorer = MakeScorer(o->scorer_url, o->endpoint, s);
                   const ScorerContext ctx{o->context, 1};
                   const auto lp = scorer->ScoreSequences(ctx, o->candidates);
                   std::vector<nlohmann::json> rows;
                   for (size_t i = 0; i < lp.size(); ++i) {
                     rows.push_back({{"candidate", o->candidates[i]}, {"logprob", lp[i]}});
                   }
                   s.WriteOutput(o->out, ToJsonl(rows));
                 }});

  auto* vectors = app->add_subcommand(
      "vectors", "Conformance vectors {context, candidate, logprob} from the built-in toy scorer");
  out.push_back({vectors, [o](Session& s) {
                   ToyScorer toy;
                   std::vector<nlohmann::json> rows;
                   for (const auto& c : kVectorCases) {
                     const ScorerContext ctx{std::string(c.context), 1};
                     rows.push_back({{"context", c.context},
                                     {"candidate", c.candidate},
                                     {"logprob", toy.ScoreSequence(ctx, c.candidate)}});
                   }
                   s.WriteOutput(o->out, ToJsonl(rows));
                 }});
}

}  // namespace

void AddCorrectCommands(CLI::App& root, std::vector<Command>& out) {
  AddCorrect(root, out);
  AddScorer(root, out);
}

}  // namespace asrec::cli
