// Copyright 2026 The acceptlens Authors.
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

// Gestalt pattern matching (Ratcliff/Obershelp) over arbitrary element
// sequences. Every element is significant: there is no junk filter and no
// popularity heuristic, so results depend only on element equality.

#ifndef ACCEPTLENS_GESTALT_DIFF_HPP
#define ACCEPTLENS_GESTALT_DIFF_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acceptlens {

/// A[a_start, a_start + length) == B[b_start, b_start + length).
struct MatchingBlock {
  std::size_t a_start = 0;
  std::size_t b_start = 0;
  std::size_t length = 0;

  friend bool operator==(const MatchingBlock&, const MatchingBlock&) = default;
};

/// Half-open index interval.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
};

struct SimilarityRatio {
  double value = 1.0;
  std::size_t matched_total = 0;    // M: sum of block lengths
  std::size_t combined_length = 0;  // T: |A| + |B|
};

/// Longest common contiguous block inside the given ranges. Ties go to the
/// lowest a_start, then the lowest b_start. Returns nullopt when the ranges
/// share no element.
template <class T>
std::optional<MatchingBlock> find_longest_match(std::span<const T> a, std::span<const T> b, IndexRange a_range,
                                                IndexRange b_range) {
  if (a_range.size() == 0 || b_range.size() == 0) return std::nullopt;
  // run[j + 1] = length of the common run ending at (i, b_range.begin + j).
  std::vector<std::size_t> prev(b_range.size() + 1, 0), cur(b_range.size() + 1, 0);
  MatchingBlock best;
  for (std::size_t i = a_range.begin; i < a_range.end; ++i) {
    for (std::size_t j = 0; j < b_range.size(); ++j) {
      if (a[i] == b[b_range.begin + j]) {
        const std::size_t k = prev[j] + 1;
        cur[j + 1] = k;
        // Strict comparison: the first run of a given length found in
        // row-major order has the lowest (a_start, b_start).
        if (k > best.length) {
          best = {i + 1 - k, b_range.begin + j + 1 - k, k};
        }
      } else {
        cur[j + 1] = 0;
      }
    }
    std::swap(prev, cur);
  }
  if (best.length == 0) return std::nullopt;
  return best;
}

/// All matching blocks, ordered by a_start. The longest block of the full
/// ranges is taken first, then the procedure recurses on the regions to its
/// left and to its right.
template <class T>
std::vector<MatchingBlock> matching_blocks(std::span<const T> a, std::span<const T> b) {
  std::vector<MatchingBlock> blocks;
  std::vector<std::pair<IndexRange, IndexRange>> pending{{{0, a.size()}, {0, b.size()}}};
  while (!pending.empty()) {
    const auto [ar, br] = pending.back();
    pending.pop_back();
    const auto m = find_longest_match(a, b, ar, br);
    if (!m) continue;
    blocks.push_back(*m);
    if (ar.begin < m->a_start && br.begin < m->b_start) {
      pending.push_back({{ar.begin, m->a_start}, {br.begin, m->b_start}});
    }
    const std::size_t a_after = m->a_start + m->length;
    const std::size_t b_after = m->b_start + m->length;
    if (a_after < ar.end && b_after < br.end) {
      pending.push_back({{a_after, ar.end}, {b_after, br.end}});
    }
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const MatchingBlock& x, const MatchingBlock& y) { return x.a_start < y.a_start; });
  return blocks;
}

/// 2M / T, with two empty sequences defined as identical.
template <class T>
SimilarityRatio similarity_ratio(std::span<const T> a, std::span<const T> b) {
  SimilarityRatio r;
  r.combined_length = a.size() + b.size();
  for (const auto& blk : matching_blocks(a, b)) r.matched_total += blk.length;
  r.value = r.combined_length == 0
                ? 1.0
                : 2.0 * static_cast<double>(r.matched_total) / static_cast<double>(r.combined_length);
  return r;
}

template <class T>
double edit_fraction(std::span<const T> a, std::span<const T> b) {
  return 1.0 - similarity_ratio(a, b).value;
}

// Convenience overloads for contiguous containers (vectors, strings, ...).

template <std::ranges::contiguous_range R>
std::vector<MatchingBlock> matching_blocks(const R& a, const R& b) {
  using T = std::ranges::range_value_t<R>;
  return matching_blocks(std::span<const T>(std::ranges::data(a), std::ranges::size(a)),
                         std::span<const T>(std::ranges::data(b), std::ranges::size(b)));
}

template <std::ranges::contiguous_range R>
std::optional<MatchingBlock> find_longest_match(const R& a, const R& b) {
  using T = std::ranges::range_value_t<R>;
  return find_longest_match(std::span<const T>(std::ranges::data(a), std::ranges::size(a)),
                            std::span<const T>(std::ranges::data(b), std::ranges::size(b)),
                            IndexRange{0, std::ranges::size(a)}, IndexRange{0, std::ranges::size(b)});
}

template <std::ranges::contiguous_range R>
SimilarityRatio similarity_ratio(const R& a, const R& b) {
  using T = std::ranges::range_value_t<R>;
  return similarity_ratio(std::span<const T>(std::ranges::data(a), std::ranges::size(a)),
                          std::span<const T>(std::ranges::data(b), std::ranges::size(b)));
}

template <std::ranges::contiguous_range R>
double edit_fraction(const R& a, const R& b) {
  return 1.0 - similarity_ratio(a, b).value;
}

inline std::string_view rtrim(std::string_view s) {
  const auto end = s.find_last_not_of(" \t\r\f\v");
  return end == std::string_view::npos ? std::string_view{} : s.substr(0, end + 1);
}

/// Splits text into diff elements: one per line, trailing whitespace
/// removed, leading indentation kept. A trailing newline adds no element.
inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    lines.emplace_back(rtrim(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  return lines;
}

}  // namespace acceptlens

#endif  // ACCEPTLENS_GESTALT_DIFF_HPP
