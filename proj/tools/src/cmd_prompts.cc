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
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "asrec/decode.h"
#include "asrec/error.h"
#include "asrec/prompts.h"
#include "asrec/textnorm.h"
#include "session.h"

namespace asrec::cli {

namespace {

std::string Ask(ChatClient& chat, const std::string& prompt) {
  const ChatMessage msg{"user", prompt};
  return chat.Complete(std::span<const ChatMessage>(&msg, 1));
}

PromptTemplates LoadTemplates(const std::string& dir, Session& s) {
  PromptTemplates t = dir.empty() ? PromptTemplates::Builtin() : PromptTemplates::FromDirectory(dir);
  nlohmann::json versions;
  for (const char* name : {"uncon", "constr", "paraphrase", "quiz"}) versions[name] = t.Version(name);
  s.Record("templates", {{"dir", dir.empty() ? "builtin" : dir}, {"versions", versions}});
  return t;
}

void AddZeroshot(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string mode;
    std::string in;
    std::string out = "-";
    int n = 5;
    std::string endpoint;
    std::string templates;
    bool dry_run = false;
    bool no_fallback = false;
    EndpointFlags flags;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("zeroshot", "Zero-shot correction through a chat endpoint");
  app->add_option("--mode", o->mode, "uncon (free rewrite, closest-mapped too) or constr (pick one)")
      ->required()
      ->check(CLI::IsMember({"uncon", "constr"}));
  app->add_option("--in", o->in, "Dataset JSONL")->required();
  app->add_option("--out", o->out, "Output JSONL");
  app->add_option("--n", o->n, "Hypotheses shown to the model")->check(CLI::PositiveNumber);
  app->add_option("--endpoint", o->endpoint,
                  "Chat endpoint URL: POST {messages} -> {text}; token from ASREC_API_KEY");
  app->add_option("--templates", o->templates, "Directory overriding the builtin templates");
  app->add_flag("--dry-run", o->dry_run, "Write the prompts instead of sending them");
  app->add_flag("--no-fallback", o->no_fallback,
                "constr: fail on replies without a valid <optionK> block");
  o->flags.Add(app);
  out.push_back({app, [o](Session& s) {
                   const Dataset data = s.LoadData(o->in);
                   const PromptTemplates tpl = LoadTemplates(o->templates, s);
                   const bool uncon = o->mode == "uncon";
                   std::vector<std::string> prompts;
                   for (const auto& u : data.utterances) {
                     prompts.push_back(uncon ? BuildUnconPrompt(u.nbest, o->n, tpl)
                                             : BuildConstrPrompt(u.nbest, o->n, tpl));
                   }
                   std::vector<nlohmann::json> records(prompts.size());
                   if (o->dry_run) {
                     for (size_t i = 0; i < prompts.size(); ++i) {
                       records[i] = {{"id", data.utterances[i].id}, {"prompt", prompts[i]}};
                     }
                     s.WriteOutput(o->out, ToJsonl(records));
                     return;
                   }
                   if (o->endpoint.empty()) throw InvalidArgument("--endpoint is required unless --dry-run");
                   auto chat = MakeChatClient(o->endpoint, o->flags, s);
                   ParallelFor(prompts.size(), s.jobs, [&](size_t i) {
                     const Utterance& u = data.utterances[i];
                     const std::string reply = Ask(*chat, prompts[i]);
                     nlohmann::json rec = {{"id", u.id}, {"strategy", o->mode}, {"reply", reply}};
                     std::vector<std::string> flags;
                     if (uncon) {
                       const std::string text = StripWrapping(reply);
                       const size_t rank1 = SplitWords(u.nbest[0].text).size();
                       if (2 * SplitWords(text).size() < rank1) flags.emplace_back(kFlagTruncation);
                       const ClosestResult c = ClosestMap(text, u.nbest, o->n);
                       rec["text"] = text;
                       rec["closest"] = {{"rank", c.hypothesis.rank},
                                         {"text", c.hypothesis.text},
                                         {"distance", c.distance}};
                     } else {
                       const SelectionParse p =
                           ParseSelection(reply, u.nbest.top(o->n), !o->no_fallback);
                       rec["rank"] = p.rank;
                       rec["text"] = u.nbest.at_rank(p.rank).text;
                       if (p.fallback) flags.emplace_back(kFlagFallback);
                     }
                     rec["flags"] = flags;
                     records[i] = std::move(rec);
                   });
                   s.WriteOutput(o->out, ToJsonl(records));
                 }});
}

char Letter(QuizChoice c) { return c == QuizChoice::kA ? 'A' : c == QuizChoice::kB ? 'B' : 'C'; }

std::optional<QuizChoice> ChoiceFromJson(const nlohmann::json& rec, const char* key) {
  if (!rec.contains(key) || rec[key].is_null()) return std::nullopt;
  return ParseQuizChoice(rec[key].get<std::string>());
}

struct QuizItem {
  std::string id;
  std::string reference;
  std::string paraphrase;
};

std::vector<QuizItem> LoadQuizItems(const std::string& content, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<QuizItem> items;
  std::istringstream in(content);
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    QuizItem item;
    std::vector<std::string> candidates;
    try {
      const auto j = nlohmann::json::parse(line);
      item.id = j.at("id").get<std::string>();
      item.reference = j.at("ref").get<std::string>();
      const std::string norm_ref = NormalizeEval(item.reference);
      for (const auto& p : j.at("paraphrases")) {
        auto text = p.get<std::string>();
        if (NormalizeEval(text) != norm_ref) candidates.push_back(std::move(text));
      }
    } catch (const nlohmann::json::exception& ex) {
      throw DataError(fmt::format("line {}: {}", lineno, ex.what()));
    }
    if (candidates.empty()) {
      throw DataError(fmt::format("line {}: '{}' has no paraphrase that differs from the reference",
                                  lineno, item.id));
    }
    item.paraphrase = candidates[rng() % candidates.size()];
    items.push_back(std::move(item));
  }
  return items;
}

void AddQuiz(CLI::App& root, std::vector<Command>& out) {
  struct Opts {
    std::string paraphrases;
    std::string answers;
    std::string endpoint;
    std::string rule = "both";
    std::string templates;
    bool dry_run = false;
    bool generate = false;
    std::string in;
    int count = 5;
    std::string out = "-";
    EndpointFlags flags;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand(
      "quiz", "Contamination quiz: can the model tell test sentences from paraphrases?");
  app->add_option("--paraphrases", o->paraphrases, "JSONL {id, ref, paraphrases: [str]}");
  app->add_option("--answers", o->answers,
                  "Score collected answers, JSONL {id, original_first, paraphrase_first}");
  app->add_option("--endpoint", o->endpoint, "Chat endpoint URL; token from ASREC_API_KEY");
  app->add_option("--rule", o->rule,
                  "both: original picked in both orders; average: mean over the orders")
      ->check(CLI::IsMember({"both", "average"}));
  app->add_option("--templates", o->templates, "Directory overriding the builtin templates");
  app->add_flag("--dry-run", o->dry_run, "Write the quiz prompts instead of sending them");
  app->add_flag("--generate", o->generate,
                "Ask the endpoint for paraphrases of each reference in --in instead");
  app->add_option("--in", o->in, "Dataset JSONL for --generate");
  app->add_option("--count", o->count, "Paraphrases requested per reference")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", o->out, "Output JSONL");
  o->flags.Add(app);
  out.push_back({app, [o](Session& s) {
                   const PromptTemplates tpl = LoadTemplates(o->templates, s);
                   const ContaminationRule rule =
                       o->rule == "both" ? ContaminationRule::kBothOrders : ContaminationRule::kAverage;

                   if (o->generate) {
                     if (o->in.empty() || o->endpoint.empty()) {
                       throw InvalidArgument("--generate needs --in and --endpoint");
                     }
                     const Dataset data = s.LoadData(o->in);
                     auto chat = MakeChatClient(o->endpoint, o->flags, s);
                     std::vector<nlohmann::json> records(data.utterances.size());
                     ParallelFor(records.size(), s.jobs, [&](size_t i) {
                       const Utterance& u = data.utterances[i];
                       if (!u.reference) throw DataError(fmt::format("'{}' has no reference", u.id));
                       const auto paras =
                           ParseParaphrases(Ask(*chat, BuildParaphrasePrompt(*u.reference, o->count, tpl)));
                       records[i] = {{"id", u.id}, {"ref", *u.reference}, {"paraphrases", paras}};
                     });
                     s.WriteOutput(o->out, ToJsonl(records));
                     return;
                   }

                   std::vector<QuizAnswers> answers;
                   std::vector<nlohmann::json> records;
                   if (!o->answers.empty()) {
                     std::istringstream in(s.ReadInput(o->answers));
                     int lineno = 0;
                     for (std::string line; std::getline(in, line);) {
                       ++lineno;
                       if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                       try {
                         const auto j = nlohmann::json::parse(line);
                         answers.push_back({j.at("id").get<std::string>(),
                                            ChoiceFromJson(j, "original_first"),
                                            ChoiceFromJson(j, "paraphrase_first")});
                       } catch (const nlohmann::json::exception& ex) {
                         throw DataError(fmt::format("line {}: {}", lineno, ex.what()));
                       }
                     }
                   } else {
                     if (o->paraphrases.empty()) {
                       throw InvalidArgument("need --paraphrases, --answers or --generate");
                     }
                     const auto items = LoadQuizItems(s.ReadInput(o->paraphrases), s.seed);
                     records.resize(items.size());
                     if (o->dry_run) {
                       for (size_t i = 0; i < items.size(); ++i) {
                         const auto& it = items[i];
                         records[i] = {
                             {"id", it.id},
                             {"paraphrase", it.paraphrase},
                             {"original_first", BuildQuiz(it.reference, it.paraphrase,
                                                          QuizOrder::kOriginalFirst, tpl)},
                             {"paraphrase_first", BuildQuiz(it.reference, it.paraphrase,
                                                            QuizOrder::kParaphraseFirst, tpl)}};
                       }
                       s.WriteOutput(o->out, ToJsonl(records));
                       return;
                     }
                     if (o->endpoint.empty()) {
                       throw InvalidArgument("--endpoint is required unless --dry-run or --answers");
                     }
                     auto chat = MakeChatClient(o->endpoint, o->flags, s);
                     answers.resize(items.size());
                     ParallelFor(items.size(), s.jobs, [&](size_t i) {
                       const auto& it = items[i];
                       auto ask = [&](QuizOrder order) {
                         const std::string reply =
                             Ask(*chat, BuildQuiz(it.reference, it.paraphrase, order, tpl));
                         auto c = ParseQuizChoice(reply);
                         if (!c) throw ParseError(fmt::format("'{}': no A/B/C in reply: {}", it.id, reply));
                         return *c;
                       };
                       const QuizChoice first = ask(QuizOrder::kOriginalFirst);
                       const QuizChoice second = ask(QuizOrder::kParaphraseFirst);
                       answers[i] = {it.id, first, second};
                       records[i] = {{"id", it.id},
                                     {"paraphrase", it.paraphrase},
                                     {"original_first", std::string(1, Letter(first))},
                                     {"paraphrase_first", std::string(1, Letter(second))}};
                     });
                   }

                   const double rate = ScoreQuiz(answers, rule);
                   const nlohmann::json summary = {
                       {"rule", o->rule}, {"utterances", answers.size()}, {"contamination", rate}};
                   s.Record("quiz", summary);
                   if (records.empty()) {
                     s.WriteOutput(o->out, summary.dump(2) + "\n");
                   } else {
                     s.WriteOutput(o->out, ToJsonl(records));
                     std::cerr << summary.dump() << "\n";
                   }
                 }});
}

}  // namespace

void AddPromptCommands(CLI::App& root, std::vector<Command>& out) {
  AddZeroshot(root, out);
  AddQuiz(root, out);
}

}  // namespace asrec::cli
