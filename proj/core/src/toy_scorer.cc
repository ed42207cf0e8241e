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

#include "asrec/toy_scorer.h"

#include <cmath>
#include <map>
#include <set>

#include "asrec/utf8.h"

namespace asrec {

namespace {

constexpr char32_t kBoundary = 0x110000;

class BigramModel {
 public:
  explicit BigramModel(std::string_view context) {
    std::vector<std::u32string> segments;
    for (const auto& s : SplitContext(context)) segments.push_back(utf8::Decode(s));
    for (const auto& seg : segments) alphabet_.insert(seg.begin(), seg.end());
    vocab_size_ = static_cast<double>(alphabet_.size() + 1);
    for (const auto& seg : segments) {
      char32_t prev = kBoundary;
      for (char32_t c : seg) {
        Count(prev, c);
        prev = c;
      }
      Count(prev, kBoundary);
    }
  }

  double LogProb(char32_t prev, char32_t next) const {
    auto pair_it = pairs_.find({prev, next});
    auto left_it = left_.find(prev);
    const double num = (pair_it == pairs_.end() ? 0.0 : pair_it->second) + 1.0;
    const double den = (left_it == left_.end() ? 0.0 : left_it->second) + vocab_size_;
    return std::log(num / den);
  }

  // Scores `text` continuing after `prev`; returns the sum and updates prev.
  double Continue(char32_t& prev, std::u32string_view text) const {
    double sum = 0.0;
    for (char32_t c : text) {
      sum += LogProb(prev, c);
      prev = c;
    }
    return sum;
  }

 private:
  void Count(char32_t a, char32_t b) {
    pairs_[{a, b}] += 1.0;
    left_[a] += 1.0;
  }

  std::set<char32_t> alphabet_;
  double vocab_size_ = 1.0;
  std::map<std::pair<char32_t, char32_t>, double> pairs_;
  std::map<char32_t, double> left_;
};

double ScoreWith(const BigramModel& model, std::string_view candidate) {
  const std::u32string text = utf8::Decode(JoinWords(SplitWords(candidate)));
  char32_t prev = kBoundary;
  double sum = model.Continue(prev, text);
  return sum + model.LogProb(prev, kBoundary);
}

}  // namespace

std::vector<std::string> SplitContext(std::string_view context) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    const size_t next = context.find(kSep, pos);
    out.emplace_back(context.substr(pos, next == std::string_view::npos
                                             ? std::string_view::npos
                                             : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + kSep.size();
  }
  return out;
}

std::vector<double> ToyScorer::DoScore(const ScorerContext& ctx,
                                       std::span<const std::string> candidates) {
  const BigramModel model(ctx.text);
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(ScoreWith(model, c));
  return out;
}

std::vector<double> ToyScorer::DoStep(const ScorerContext& ctx,
                                      std::span<const std::string> history,
                                      std::span<const std::string> candidates) {
  const BigramModel model(ctx.text);
  const std::u32string joined = utf8::Decode(JoinWords(history));
  const char32_t last = joined.empty() ? kBoundary : joined.back();
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const auto& cand : candidates) {
    char32_t prev = last;
    if (cand == kEndOfSequence) {
      out.push_back(model.LogProb(prev, kBoundary));
      continue;
    }
    std::u32string piece = utf8::Decode(cand);
    if (!joined.empty()) piece.insert(piece.begin(), U' ');
    out.push_back(model.Continue(prev, piece));
  }
  return out;
}

std::string ToyScorer::DoGenerate(const ScorerContext& ctx) {
  const BigramModel model(ctx.text);
  std::string best;
  double best_score = -INFINITY;
  bool found = false;
  for (const auto& seg : SplitContext(ctx.text)) {
    if (SplitWords(seg).empty()) continue;
    const double s = ScoreWith(model, seg);
    if (!found || s > best_score) {
      best = seg;
      best_score = s;
      found = true;
    }
  }
  return best;
}

}  // namespace asrec
