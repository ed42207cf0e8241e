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

#include "asrec/tokenizer.h"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "asrec/error.h"
#include "asrec/utf8.h"

namespace asrec {

MarkerConvention ParseMarkerConvention(std::string_view name) {
  if (name == "none") return MarkerConvention::kNone;
  if (name == "suffix") return MarkerConvention::kContinuationSuffix;
  if (name == "prefix") return MarkerConvention::kWordStartPrefix;
  throw InvalidArgument(fmt::format(
      "unknown marker convention '{}' (none|suffix|prefix)", name));
}

std::string_view MarkerConventionName(MarkerConvention c) {
  switch (c) {
    case MarkerConvention::kNone: return "none";
    case MarkerConvention::kContinuationSuffix: return "suffix";
    case MarkerConvention::kWordStartPrefix: return "prefix";
  }
  return "none";
}

bool ContinuesWord(std::string_view piece, MarkerConvention c) {
  return c == MarkerConvention::kContinuationSuffix &&
         piece.size() >= kContinuationMarker.size() &&
         piece.ends_with(kContinuationMarker);
}

bool StartsWord(std::string_view piece, MarkerConvention c) {
  return c == MarkerConvention::kWordStartPrefix &&
         piece.starts_with(kWordStartMarker);
}

std::string_view StripMarker(std::string_view piece, MarkerConvention c) {
  if (ContinuesWord(piece, c)) {
    piece.remove_suffix(kContinuationMarker.size());
  } else if (StartsWord(piece, c)) {
    piece.remove_prefix(kWordStartMarker.size());
  }
  return piece;
}

std::vector<std::string> PiecesToWords(std::span<const std::string> pieces,
                                       MarkerConvention c) {
  std::vector<std::string> words;
  bool open = false;
  for (size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    const bool new_word = c == MarkerConvention::kNone || i == 0 ||
                          (c == MarkerConvention::kContinuationSuffix && !open) ||
                          StartsWord(p, c);
    if (new_word) {
      if (!words.empty() && words.back().empty()) {
        throw LatticeError("empty word in piece sequence");
      }
      words.emplace_back();
    }
    words.back() += StripMarker(p, c);
    open = ContinuesWord(p, c);
  }
  if (open) {
    throw LatticeError(fmt::format("piece '{}' continues past the end",
                                   pieces.back()));
  }
  if (!words.empty() && words.back().empty()) {
    throw LatticeError("empty word in piece sequence");
  }
  return words;
}

std::vector<std::string> IdentityTokenizer::Segment(std::string_view word) const {
  return {std::string(word)};
}

namespace {

// Applies the convention's markers to unmarked pieces of one word.
std::vector<std::string> Mark(std::vector<std::string> pieces, MarkerConvention c) {
  if (c == MarkerConvention::kContinuationSuffix) {
    for (size_t i = 0; i + 1 < pieces.size(); ++i) pieces[i] += kContinuationMarker;
  } else if (c == MarkerConvention::kWordStartPrefix && !pieces.empty()) {
    pieces.front().insert(0, kWordStartMarker);
  } else if (c == MarkerConvention::kNone && pieces.size() > 1) {
    std::string joined;
    for (auto& p : pieces) joined += p;
    pieces = {std::move(joined)};
  }
  return pieces;
}

}  // namespace

CharacterTokenizer::CharacterTokenizer(MarkerConvention c) : convention_(c) {}

std::string CharacterTokenizer::name() const {
  return fmt::format("char:{}", MarkerConventionName(convention_));
}

std::vector<std::string> CharacterTokenizer::Segment(std::string_view word) const {
  std::vector<std::string> pieces;
  for (char32_t cp : utf8::Decode(word)) pieces.push_back(utf8::Encode(cp));
  return Mark(std::move(pieces), convention_);
}

VocabTokenizer::VocabTokenizer(std::vector<std::string> vocab, MarkerConvention c)
    : vocab_(std::move(vocab)), convention_(c) {
  std::erase_if(vocab_, [](const std::string& p) { return p.empty(); });
  std::stable_sort(vocab_.begin(), vocab_.end(), [](const auto& a, const auto& b) {
    return a.size() > b.size();
  });
}

std::string VocabTokenizer::name() const {
  return fmt::format("vocab:{}:{}", MarkerConventionName(convention_), vocab_.size());
}

std::vector<std::string> VocabTokenizer::Segment(std::string_view word) const {
  std::vector<std::string> pieces;
  size_t pos = 0;
  while (pos < word.size()) {
    const std::string_view rest = word.substr(pos);
    auto it = std::find_if(vocab_.begin(), vocab_.end(),
                           [&](const std::string& p) { return rest.starts_with(p); });
    if (it != vocab_.end()) {
      pieces.push_back(*it);
      pos += it->size();
      continue;
    }
    // One code point.
    size_t len = 1;
    while (pos + len < word.size() &&
           (static_cast<unsigned char>(word[pos + len]) & 0xC0) == 0x80) {
      ++len;
    }
    pieces.emplace_back(word.substr(pos, len));
    pos += len;
  }
  return Mark(std::move(pieces), convention_);
}

std::unique_ptr<TokenizerAdapter> MakeTokenizer(std::string_view spec) {
  if (spec == "identity") return std::make_unique<IdentityTokenizer>();
  if (spec.starts_with("char:")) {
    return std::make_unique<CharacterTokenizer>(
        ParseMarkerConvention(spec.substr(5)));
  }
  if (spec.starts_with("vocab:")) {
    const auto rest = spec.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw InvalidArgument("vocab tokenizer spec is vocab:<convention>:<file>");
    }
    const std::string path(rest.substr(colon + 1));
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open vocabulary {}", path));
    std::vector<std::string> vocab;
    for (std::string line; std::getline(in, line);) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (!line.empty()) vocab.push_back(line);
    }
    return std::make_unique<VocabTokenizer>(
        std::move(vocab), ParseMarkerConvention(rest.substr(0, colon)));
  }
  throw InvalidArgument(fmt::format("unknown tokenizer '{}'", spec));
}

}  // namespace asrec
