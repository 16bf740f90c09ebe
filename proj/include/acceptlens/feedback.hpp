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

#ifndef ACCEPTLENS_FEEDBACK_HPP
#define ACCEPTLENS_FEEDBACK_HPP

#include <array>
#include <map>
#include <span>
#include <string>

#include "acceptlens/event_model.hpp"

namespace acceptlens {

enum class Polarity { Negative, Positive };

struct StarSummary {
  /// star_histogram[k - 1] counts k-star ratings.
  std::array<std::size_t, 5> star_histogram{};
  std::size_t total = 0;
  double satisfied_share = 0.0;     // 4-5 stars
  double neutral_share = 0.0;       // 3 stars
  double dissatisfied_share = 0.0;  // 1-2 stars
};

struct LabelDistribution {
  Polarity polarity = Polarity::Negative;
  std::map<std::string, std::size_t> counts;
  std::map<std::string, double> shares;
  std::size_t labeled = 0;
  /// Comments of this polarity that carry no label.
  std::size_t unlabeled = 0;
};

struct FeedbackSummary {
  StarSummary stars;
  LabelDistribution negative;
  LabelDistribution positive;
};

inline StarSummary summarize_stars(std::span<const RawEvent> events) {
  StarSummary s;
  for (const auto& e : events) {
    if (e.kind() != EventKind::Feedback) continue;
    ++s.star_histogram[static_cast<std::size_t>(e.as<FeedbackPayload>().stars - 1)];
    ++s.total;
  }
  if (s.total > 0) {
    const auto& h = s.star_histogram;
    const double n = static_cast<double>(s.total);
    s.satisfied_share = static_cast<double>(h[3] + h[4]) / n;
    s.neutral_share = static_cast<double>(h[2]) / n;
    s.dissatisfied_share = static_cast<double>(h[0] + h[1]) / n;
  }
  return s;
}

/// Distribution of pre-assigned comment labels among 1-2 star (negative) or
/// 4-5 star (positive) feedback. Three-star feedback belongs to neither.
inline LabelDistribution label_distribution(std::span<const RawEvent> events, Polarity polarity) {
  LabelDistribution d;
  d.polarity = polarity;
  for (const auto& e : events) {
    if (e.kind() != EventKind::Feedback) continue;
    const auto& f = e.as<FeedbackPayload>();
    const bool match = polarity == Polarity::Negative ? f.stars <= 2 : f.stars >= 4;
    if (!match) continue;
    if (!f.sentiment_label || f.sentiment_label->empty()) {
      ++d.unlabeled;
      continue;
    }
    ++d.counts[*f.sentiment_label];
    ++d.labeled;
  }
  for (const auto& [label, n] : d.counts) {
    d.shares[label] = static_cast<double>(n) / static_cast<double>(d.labeled);
  }
  return d;
}

inline FeedbackSummary summarize_feedback(std::span<const RawEvent> events) {
  return {summarize_stars(events), label_distribution(events, Polarity::Negative),
          label_distribution(events, Polarity::Positive)};
}

}  // namespace acceptlens

#endif  // ACCEPTLENS_FEEDBACK_HPP
