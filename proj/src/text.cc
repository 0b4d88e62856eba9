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

#include "dsr/text.h"

#include <algorithm>
#include <cctype>

namespace dsr {
namespace {

bool IsAsciiSpace(unsigned char c) { return c < 0x80 && std::isspace(c); }
bool IsAsciiPunct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

constexpr std::string_view kStopwords[] = {
    "a",          "an",         "the",       "of",         "in",
    "on",         "at",         "to",        "for",        "and",
    "or",         "with",       "by",        "from",       "near",
    "one",        "ones",       "option",    "s",          "de",
    "la",         "le",         "el",        "restaurant", "restaurants",
    "hotel",      "hotels",     "attraction", "attractions", "event",
    "events",     "home",       "homes",     "property",   "movie",
    "movies",     "film",       "song",      "songs",      "track",
    "music",      "salon",      "stylist",   "dentist",    "doctor",
    "therapist",  "contact",    "place",     "show",       "title",
    "bar",        "cafe",       "house",     "guesthouse", "museum",
    "park",       "gallery",    "church",    "apartment",  "apartments",
};

}  // namespace

std::vector<std::string> Normalize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (unsigned char c : text) {
    if (IsAsciiSpace(c)) {
      flush();
    } else if (c == '\'') {
      // "you're" -> "youre"; apostrophes never split words.
    } else if (IsAsciiPunct(c)) {
      flush();
    } else if (c < 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      current.push_back(static_cast<char>(c));
    }
  }
  flush();
  return tokens;
}

std::string NormalizeName(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : text) {
    if (IsAsciiSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c))
                           : static_cast<char>(c));
  }
  size_t begin = 0;
  size_t end = out.size();
  while (begin < end && (IsAsciiPunct(out[begin]) || out[begin] == ' ')) ++begin;
  while (end > begin && (IsAsciiPunct(out[end - 1]) || out[end - 1] == ' ')) --end;
  return out.substr(begin, end - begin);
}

std::string Join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (unsigned char c : text) {
    if (IsAsciiSpace(c)) {
      if (!current.empty()) parts.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(static_cast<char>(c));
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

std::string ToLower(std::string_view text) {
  std::string out(text);
  for (char &c : out) {
    if (static_cast<unsigned char>(c) < 0x80) c = std::tolower(c);
  }
  return out;
}

bool IsStopword(std::string_view token) {
  return std::find(std::begin(kStopwords), std::end(kStopwords), token) !=
         std::end(kStopwords);
}

std::vector<size_t> FindWindows(const std::vector<std::string> &haystack,
                                const std::vector<std::string> &needle) {
  std::vector<size_t> hits;
  if (needle.empty() || needle.size() > haystack.size()) return hits;
  for (size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + i)) {
      hits.push_back(i);
    }
  }
  return hits;
}

bool ContainsWindow(const std::vector<std::string> &haystack,
                    const std::vector<std::string> &needle) {
  return !FindWindows(haystack, needle).empty();
}

}  // namespace dsr
