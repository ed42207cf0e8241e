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

namespace asrec::utf8 {

// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD.
std::u32string Decode(std::string_view text);

std::string Encode(char32_t cp);
std::string Encode(std::u32string_view cps);

}  // namespace asrec::utf8
