// Copyright 2026 The DSR Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSR_TEXT_H_
#define DSR_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace dsr {

// Lowercases ASCII, drops apostrophes inside words, turns every other ASCII
// punctuation character into a word boundary and splits on whitespace.
// Bytes outside ASCII are kept as word characters.
//   "Chiquito Restaurant Bar!" -> [chiquito, restaurant, bar]
std::vector<std::string> Normalize(std::string_view text);

// Canonical form used for name uniqueness and value comparison: lowercase,
// internal whitespace collapsed to one space, leading and trailing
// punctuation stripped.
std::string NormalizeName(std::string_view text);

std::string Join(const std::vector<std::string> &parts, std::string_view sep);

// Splits on runs of ASCII whitespace.
std::vector<std::string> SplitWhitespace(std::string_view text);

std::string ToLower(std::string_view text);

// True for function words and generic entity-type nouns that carry no
// identifying power inside an entity name ("the", "of", "restaurant", ...).
bool IsStopword(std::string_view token);

// True if `needle` occurs as a contiguous run inside `haystack`.
bool ContainsWindow(const std::vector<std::string> &haystack,
                    const std::vector<std::string> &needle);

// Start offsets of every occurrence of `needle` in `haystack`.
std::vector<size_t> FindWindows(const std::vector<std::string> &haystack,
                                const std::vector<std::string> &needle);

}  // namespace dsr

#endif  // DSR_TEXT_H_
