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

#include "asrec/textnorm.h"

#include "asrec/types.h"
#include "asrec/utf8.h"

namespace asrec {

namespace {

enum class CharClass { kWord, kApostrophe, kSeparator, kDrop };

bool IsAsciiAlnum(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
         (c >= U'0' && c <= U'9');
}

bool IsSeparator(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
    case U'-': case 0x00A0: case 0x2010: case 0x2011: case 0x2012:
    case 0x2013: case 0x2014: case 0x2015: case 0x2212: case 0x3000:
    case 0x202F: case 0x205F: case 0xFEFF:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200B;
  }
}

bool IsApostrophe(char32_t c) {
  return c == U'\'' || c == 0x2018 || c == 0x2019 || c == 0x02BC;
}

bool IsPunctuationOrSymbol(char32_t c) {
  if (c < 0x80) return !IsAsciiAlnum(c);
  if (c >= 0x00A1 && c <= 0x00BF) return true;
  if (c == 0x00D7 || c == 0x00F7) return true;
  if (c >= 0x2000 && c <= 0x206F) return true;  // general punctuation
  if (c >= 0x20A0 && c <= 0x20CF) return true;  // currency
  if (c >= 0x3000 && c <= 0x303F) return true;  // CJK symbols and punctuation
  if (c >= 0xFF01 && c <= 0xFF0F) return true;  // fullwidth punctuation
  if (c >= 0xFF1A && c <= 0xFF20) return true;
  if (c >= 0xFF3B && c <= 0xFF40) return true;
  if (c >= 0xFF5B && c <= 0xFF65) return true;
  return false;
}

char32_t Lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0x00C0 && c <= 0x00DE && c != 0x00D7) return c + 32;
  return c;
}

CharClass ClassifyEval(char32_t c) {
  if (IsSeparator(c)) return CharClass::kSeparator;
  if (IsApostrophe(c)) return CharClass::kApostrophe;
  if (IsPunctuationOrSymbol(c)) return CharClass::kDrop;
  return CharClass::kWord;
}

CharClass ClassifyStats(char32_t c) {
  if (IsSeparator(c)) return CharClass::kSeparator;
  if (IsAsciiAlnum(c)) return CharClass::kWord;
  return CharClass::kDrop;
}

template <typename Classify>
std::string Run(std::string_view text, Classify classify) {
  const std::u32string in = utf8::Decode(text);
  // Pass 1: drop deleted characters so apostrophe context sees real
  // neighbours.
  std::u32string kept;
  std::vector<CharClass> cls;
  kept.reserve(in.size());
  for (char32_t c : in) {
    const CharClass k = classify(c);
    if (k == CharClass::kDrop) continue;
    kept.push_back(k == CharClass::kWord ? Lower(c) : c);
    cls.push_back(k);
  }
  // Pass 2: apostrophes and whitespace.
  std::u32string out;
  out.reserve(kept.size());
  bool pending_space = false;
  for (size_t i = 0; i < kept.size(); ++i) {
    switch (cls[i]) {
      case CharClass::kSeparator:
        pending_space = !out.empty();
        break;
      case CharClass::kApostrophe: {
        const bool prev_word = !out.empty() && !pending_space &&
                               out.back() != U'\'' && out.back() != U' ';
        const bool next_word =
            i + 1 < kept.size() && cls[i + 1] == CharClass::kWord;
        if (prev_word && next_word) out.push_back(U'\'');
        break;
      }
      case CharClass::kWord:
        if (pending_space) {
          out.push_back(U' ');
          pending_space = false;
        }
        out.push_back(kept[i]);
        break;
      case CharClass::kDrop:
        break;
    }
  }
  return utf8::Encode(out);
}

}  // namespace

std::string NormalizeEval(std::string_view text) {
  return Run(text, ClassifyEval);
}

std::string NormalizeStats(std::string_view text) {
  return Run(text, ClassifyStats);
}

std::string Normalize(std::string_view text, NormMode mode) {
  return mode == NormMode::kEval ? NormalizeEval(text) : NormalizeStats(text);
}

std::vector<std::string> NormalizedWords(std::string_view text, NormMode mode) {
  return SplitWords(Normalize(text, mode));
}

}  // namespace asrec
