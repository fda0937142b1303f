// Copyright 2026 The PhyloAdapt Authors
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

#include "phyloadapt/preprocess.h"

#include <stdexcept>
#include <utility>

#include "phyloadapt/unicode.h"

namespace phyloadapt {
namespace {

using unicode::IsEmoji;
using unicode::IsLetter;
using unicode::IsPunctuation;
using unicode::IsWhitespace;
using unicode::IsWordChar;

bool HasPrefixAt(const std::u32string& s, std::size_t pos,
                 std::u32string_view prefix) {
  return s.compare(pos, prefix.size(), prefix) == 0;
}

std::u32string RemoveMentions(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == U'@' && i + 1 < s.size() && IsWordChar(s[i + 1])) {
      i += 2;
      while (i < s.size() && IsWordChar(s[i])) ++i;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::u32string RemoveRetweetMarkers(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (IsWhitespace(s[i])) {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < s.size() && !IsWhitespace(s[end])) ++end;
    if (!(end - i == 2 && s[i] == U'R' && s[i + 1] == U'T')) {
      out.append(s, i, end - i);
    }
    i = end;
  }
  return out;
}

std::u32string RemoveUrls(const std::u32string& s) {
  static constexpr std::u32string_view kPrefixes[] = {U"https://", U"http://",
                                                      U"www."};
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    bool matched = false;
    for (const auto prefix : kPrefixes) {
      if (HasPrefixAt(s, i, prefix)) {
        i += prefix.size();
        while (i < s.size() && !IsWhitespace(s[i]) && !IsEmoji(s[i])) ++i;
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back(s[i++]);
  }
  return out;
}

template <typename Pred>
std::u32string CollapseRuns(const std::u32string& s, int keep, Pred pred) {
  std::u32string out;
  out.reserve(s.size());
  int run = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && s[i] == s[i - 1]) {
      ++run;
    } else {
      run = 1;
    }
    if (pred(s[i]) && run > keep) continue;
    out.push_back(s[i]);
  }
  return out;
}

std::u32string CollapseWhitespace(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (const char32_t c : s) {
    if (IsWhitespace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::u32string CleanOnce(const std::u32string& s, const CleanConfig& cfg) {
  std::u32string t = RemoveMentions(s);
  if (cfg.remove_rt) t = RemoveRetweetMarkers(t);
  t = RemoveUrls(t);
  t = CollapseRuns(t, cfg.collapse_punct_run_to, IsPunctuation);
  t = CollapseRuns(t, cfg.collapse_char_run_to, IsLetter);
  return CollapseWhitespace(t);
}

}  // namespace

void CleanConfig::Validate() const {
  if (collapse_char_run_to < 1 || collapse_punct_run_to < 1) {
    throw std::invalid_argument("collapse targets must be at least 1");
  }
}

std::string CleanText(std::string_view raw, const CleanConfig& cfg) {
  cfg.Validate();
  std::u32string current = unicode::DecodeUtf8(raw);
  // Every rule only deletes characters, so a changed pass is strictly
  // shorter and the loop terminates.
  while (true) {
    std::u32string next = CleanOnce(current, cfg);
    if (next == current) break;
    current = std::move(next);
  }
  return unicode::EncodeUtf8(current);
}

Dataset CleanDataset(const Dataset& ds, const CleanConfig& cfg) {
  if (ds.tagged()) {
    throw DataError("cannot clean a tagged dataset; tag after cleaning");
  }
  std::vector<Example> kept;
  kept.reserve(ds.size());
  for (const Example& ex : ds.examples()) {
    Example cleaned = ex;
    cleaned.text = CleanText(ex.text, cfg);
    if (!cleaned.text.empty()) kept.push_back(std::move(cleaned));
  }
  return Dataset(std::move(kept), ds.variant(), false);
}

}  // namespace phyloadapt
