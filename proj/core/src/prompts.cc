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

#include "asrec/prompts.h"

#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "asrec/decode.h"
#include "asrec/error.h"
#include "builtin_templates.h"

namespace asrec {

namespace {

// Splits off leading "##" metadata lines.
std::pair<std::string, std::string> SplitHeader(std::string_view raw) {
  std::string header;
  while (raw.starts_with("##")) {
    const size_t nl = raw.find('\n');
    std::string_view line = raw.substr(2, nl == std::string_view::npos ? raw.npos : nl - 2);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (header.empty()) header = std::string(line);
    raw = nl == std::string_view::npos ? std::string_view{} : raw.substr(nl + 1);
  }
  std::string body(raw);
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
  return {header, body};
}

}  // namespace

const PromptTemplates& PromptTemplates::Builtin() {
  static const PromptTemplates builtin = [] {
    PromptTemplates t;
    for (const auto& [name, body] : internal::kBuiltinTemplates) {
      t.raw_.emplace(std::string(name), std::string(body));
    }
    return t;
  }();
  return builtin;
}

PromptTemplates PromptTemplates::FromDirectory(const std::filesystem::path& dir) {
  PromptTemplates t = Builtin();
  for (auto& [name, body] : t.raw_) {
    const auto file = dir / (name + ".txt");
    std::ifstream in(file);
    if (!in) continue;
    std::ostringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  return t;
}

std::string PromptTemplates::Render(
    std::string_view name, const std::map<std::string, std::string>& values) const {
  auto it = raw_.find(name);
  if (it == raw_.end()) throw InvalidArgument(fmt::format("no template '{}'", name));
  const std::string body = SplitHeader(it->second).second;
  std::string out;
  size_t pos = 0;
  while (true) {
    const size_t open = body.find("{{", pos);
    if (open == std::string::npos) {
      out.append(body, pos);
      break;
    }
    const size_t close = body.find("}}", open);
    if (close == std::string::npos) {
      throw InvalidArgument(fmt::format("template '{}': unterminated placeholder", name));
    }
    out.append(body, pos, open - pos);
    const std::string key = body.substr(open + 2, close - open - 2);
    auto v = values.find(key);
    if (v == values.end()) {
      throw InvalidArgument(fmt::format("template '{}': no value for '{}'", name, key));
    }
    out += v->second;
    pos = close + 2;
  }
  return out;
}

std::string PromptTemplates::Version(std::string_view name) const {
  auto it = raw_.find(name);
  if (it == raw_.end()) throw InvalidArgument(fmt::format("no template '{}'", name));
  return SplitHeader(it->second).first;
}

namespace {

std::string Tagged(std::string_view tag, int k, std::string_view text) {
  return fmt::format("<{0}{1}> {2} </{0}{1}>", tag, k, text);
}

std::string TaggedList(const NBestList& nbest, int n, std::string_view tag) {
  std::string out;
  for (const auto& h : nbest.top(n)) {
    if (!out.empty()) out += '\n';
    out += Tagged(tag, h.rank, h.text);
  }
  return out;
}

}  // namespace

std::string BuildUnconPrompt(const NBestList& nbest, int n, const PromptTemplates& t) {
  return t.Render("uncon", {{"n", std::to_string(n)},
                            {"hypotheses", TaggedList(nbest, n, "hypothesis")}});
}

std::string BuildConstrPrompt(const NBestList& nbest, int n, const PromptTemplates& t) {
  return t.Render("constr", {{"n", std::to_string(n)},
                             {"options", TaggedList(nbest, n, "option")}});
}

std::string RenderOptionReply(int k, std::string_view text) {
  return Tagged("option", k, text);
}

SelectionParse ParseSelection(std::string_view response,
                              std::span<const Hypothesis> options,
                              bool allow_fallback) {
  if (options.empty()) throw InvalidArgument("no options to select from");
  static const std::regex kBlock(R"(<option(\d+)>([\s\S]*?)</option\1>)");
  const std::string text(response);
  if (std::smatch m; std::regex_search(text, m, kBlock)) {
    const std::string digits = m[1].str();
    if (digits.size() <= 6) {
      const int k = std::stoi(digits);
      if (k >= 1 && static_cast<size_t>(k) <= options.size()) return {k, false};
    }
  }
  if (!allow_fallback) {
    throw ParseError(fmt::format("no valid <optionK> block in reply: {}", response));
  }
  const auto list = NBestList::FromOrdered(
      std::vector<Hypothesis>(options.begin(), options.end()), false);
  const auto closest = ClosestMap(response, list, static_cast<int>(options.size()));
  return {closest.hypothesis.rank, true};
}

std::string BuildParaphrasePrompt(std::string_view reference, int count,
                                  const PromptTemplates& t) {
  if (count < 1) throw InvalidArgument("paraphrase count must be >= 1");
  return t.Render("paraphrase", {{"count", std::to_string(count)},
                                 {"reference", std::string(reference)}});
}

std::vector<std::string> ParseParaphrases(std::string_view reply) {
  static const std::regex kMarker(R"(^\s*(?:\d+[.)]|[-*•])\s*)");
  std::vector<std::string> out;
  std::istringstream in{std::string(reply)};
  for (std::string line; std::getline(in, line);) {
    line = std::regex_replace(line, kMarker, "");
    line = StripWrapping(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::string BuildQuiz(std::string_view reference, std::string_view paraphrase,
                      QuizOrder order, const PromptTemplates& t) {
  if (reference == paraphrase) {
    throw InvalidArgument("quiz needs a paraphrase different from the reference");
  }
  const bool orig_first = order == QuizOrder::kOriginalFirst;
  return t.Render("quiz",
                  {{"option_a", std::string(orig_first ? reference : paraphrase)},
                   {"option_b", std::string(orig_first ? paraphrase : reference)}});
}

std::optional<QuizChoice> ParseQuizChoice(std::string_view reply) {
  for (size_t i = 0; i < reply.size(); ++i) {
    const char c = reply[i];
    if (c != 'A' && c != 'B' && c != 'C') continue;
    const bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(reply[i - 1]));
    const bool right_ok =
        i + 1 == reply.size() || !std::isalnum(static_cast<unsigned char>(reply[i + 1]));
    if (!left_ok || !right_ok) continue;
    return c == 'A' ? QuizChoice::kA : c == 'B' ? QuizChoice::kB : QuizChoice::kC;
  }
  return std::nullopt;
}

bool PicksOriginal(QuizChoice choice, QuizOrder order) {
  return order == QuizOrder::kOriginalFirst ? choice == QuizChoice::kA
                                            : choice == QuizChoice::kB;
}

double ScoreQuiz(std::span<const QuizAnswers> answers, ContaminationRule rule) {
  if (answers.empty()) return 0.0;
  double hits = 0.0;
  for (const auto& a : answers) {
    if (!a.original_first || !a.paraphrase_first) {
      throw DataError(fmt::format("utterance '{}' lacks an answer for one order", a.id));
    }
    const bool first = PicksOriginal(*a.original_first, QuizOrder::kOriginalFirst);
    const bool second = PicksOriginal(*a.paraphrase_first, QuizOrder::kParaphraseFirst);
    if (rule == ContaminationRule::kBothOrders) {
      hits += (first && second) ? 1.0 : 0.0;
    } else {
      hits += (static_cast<double>(first) + static_cast<double>(second)) / 2.0;
    }
  }
  return hits / static_cast<double>(answers.size());
}

}  // namespace asrec
