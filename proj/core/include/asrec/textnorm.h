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

#include <string>
#include <string_view>
#include <vector>

namespace asrec {

enum class NormMode { kEval, kStats };

// Normalization applied to references and hypotheses before WER:
//   - ASCII and Latin-1 letters lowercased;
//   - hyphens/dashes and all whitespace act as word separators;
//   - ASCII punctuation and symbols, general punctuation, CJK and fullwidth
//     punctuation are deleted;
//   - an apostrophe survives only between two word characters ("it's");
//     typographic apostrophes count as apostrophes;
//   - whitespace collapsed to single spaces and trimmed.
// Numerals are kept verbatim; other scripts pass through unchanged.
std::string NormalizeEval(std::string_view text);

// Normalization for list statistics (Uniq, cross-WER): lowercase, hyphens
// and whitespace separate words, every other character outside [a-z0-9]
// is deleted, whitespace collapsed.
std::string NormalizeStats(std::string_view text);

std::string Normalize(std::string_view text, NormMode mode);

// Normalize then split on spaces.
std::vector<std::string> NormalizedWords(std::string_view text, NormMode mode);

}  // namespace asrec
