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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asrec/types.h"

namespace asrec {

// Named prompt templates ("uncon", "constr", "paraphrase", "quiz"). Bodies
// use {{name}} placeholders; leading "##" lines are metadata (the first
// one carries the version) and are not part of the prompt.
class PromptTemplates {
 public:
  static const PromptTemplates& Builtin();
  // Reads <name>.txt files from `dir`; names missing there use the builtin.
  static PromptTemplates FromDirectory(const std::filesystem::path& dir);

  // Throws InvalidArgument on an unknown template or unfilled placeholder.
  std::string Render(std::string_view name,
                     const std::map<std::string, std::string>& values) const;
  // Metadata header line, e.g. "asrec prompt template: quiz, version 1".
  std::string Version(std::string_view name) const;

 private:
  std::map<std::string, std::string, std::less<>> raw_;
};

// Hypotheses wrapped as "<hypothesisK> text </hypothesisK>", K = 1..n.
std::string BuildUnconPrompt(const NBestList& nbest, int n,
                             const PromptTemplates& t = PromptTemplates::Builtin());
// Options wrapped as "<optionK> text </optionK>" plus the reply format.
std::string BuildConstrPrompt(const NBestList& nbest, int n,
                              const PromptTemplates& t = PromptTemplates::Builtin());

// The reply a model following the constr format gives for option k.
std::string RenderOptionReply(int k, std::string_view text);

inline constexpr std::string_view kFlagFallback = "fallback";

struct SelectionParse {
  int rank = 0;
  bool fallback = false;
};

// Rank from the first well-formed <optionK>...</optionK> block with
// 1 <= K <= options.size(). Otherwise, when allowed, the closest option to
// the raw reply (ClosestMap) flagged as fallback; when not, ParseError.
SelectionParse ParseSelection(std::string_view response,
                              std::span<const Hypothesis> options,
                              bool allow_fallback = true);

std::string BuildParaphrasePrompt(std::string_view reference, int count = 5,
                                  const PromptTemplates& t = PromptTemplates::Builtin());
// One candidate per non-empty line; list markers ("1.", "-", "*") removed.
std::vector<std::string> ParseParaphrases(std::string_view reply);

enum class QuizOrder { kOriginalFirst, kParaphraseFirst };
enum class QuizChoice { kA, kB, kC };

// Three-way quiz; A/B hold the reference and paraphrase in `order`, C means
// neither. Throws InvalidArgument if the two sentences are equal.
std::string BuildQuiz(std::string_view reference, std::string_view paraphrase,
                      QuizOrder order,
                      const PromptTemplates& t = PromptTemplates::Builtin());

// First standalone A/B/C letter in the reply ("B", "B)", "(B)", "Answer: B").
std::optional<QuizChoice> ParseQuizChoice(std::string_view reply);

bool PicksOriginal(QuizChoice choice, QuizOrder order);

struct QuizAnswers {
  std::string id;
  std::optional<QuizChoice> original_first;
  std::optional<QuizChoice> paraphrase_first;
};

enum class ContaminationRule {
  kBothOrders,  // contaminated only if the original is picked in both orders
  kAverage,     // mean pick-the-original rate over the two orders
};

// Fraction of utterances judged contaminated. Throws DataError naming the
// utterance when either order's answer is missing.
double ScoreQuiz(std::span<const QuizAnswers> answers,
                 ContaminationRule rule = ContaminationRule::kBothOrders);

}  // namespace asrec
