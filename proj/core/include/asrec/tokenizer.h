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

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asrec {

// How subword pieces mark word boundaries.
enum class MarkerConvention {
  kNone,                // every piece is a whole word
  kContinuationSuffix,  // "lig@@ atures": trailing "@@" means the word goes on
  kWordStartPrefix,     // "▁lig atures": leading U+2581 starts a word
};

inline constexpr std::string_view kContinuationMarker = "@@";
inline constexpr std::string_view kWordStartMarker = "\xE2\x96\x81";  // U+2581

MarkerConvention ParseMarkerConvention(std::string_view name);
std::string_view MarkerConventionName(MarkerConvention c);

// Piece text with its boundary marker removed.
std::string_view StripMarker(std::string_view piece, MarkerConvention c);
bool ContinuesWord(std::string_view piece, MarkerConvention c);
bool StartsWord(std::string_view piece, MarkerConvention c);

// Reassembles words from a piece sequence. The first piece always opens a
// word. Throws LatticeError if the sequence ends inside a word or a word
// comes out empty.
std::vector<std::string> PiecesToWords(std::span<const std::string> pieces,
                                       MarkerConvention c);

// Splits words into the token inventory of some language model.
class TokenizerAdapter {
 public:
  virtual ~TokenizerAdapter() = default;
  virtual std::string name() const = 0;
  virtual MarkerConvention convention() const = 0;
  // Marked pieces for one word; PiecesToWords(Segment(w)) must give {w}.
  virtual std::vector<std::string> Segment(std::string_view word) const = 0;
};

class IdentityTokenizer final : public TokenizerAdapter {
 public:
  std::string name() const override { return "identity"; }
  MarkerConvention convention() const override { return MarkerConvention::kNone; }
  std::vector<std::string> Segment(std::string_view word) const override;
};

// One piece per UTF-8 code point.
class CharacterTokenizer final : public TokenizerAdapter {
 public:
  explicit CharacterTokenizer(MarkerConvention c);
  std::string name() const override;
  MarkerConvention convention() const override { return convention_; }
  std::vector<std::string> Segment(std::string_view word) const override;

 private:
  MarkerConvention convention_;
};

// Greedy longest-match over a fixed piece inventory, falling back to single
// code points for anything the inventory does not cover.
class VocabTokenizer final : public TokenizerAdapter {
 public:
  VocabTokenizer(std::vector<std::string> vocab, MarkerConvention c);
  std::string name() const override;
  MarkerConvention convention() const override { return convention_; }
  std::vector<std::string> Segment(std::string_view word) const override;

 private:
  std::vector<std::string> vocab_;  // sorted by descending length
  MarkerConvention convention_;
};

// "identity", "char:suffix", "char:prefix", "vocab:suffix:<file>",
// "vocab:prefix:<file>" (one piece per line, unmarked).
std::unique_ptr<TokenizerAdapter> MakeTokenizer(std::string_view spec);

}  // namespace asrec
