// Copyright 2026 The Tradeoff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Pictogram preview: confusion counts apportioned into a fixed number of
// icons. Color encodes the predicted class (blue = flagged good, red =
// flagged damaging); shape encodes the true class (circle = good, triangle =
// damaging).

#ifndef TRADEOFF_PREVIEW_HPP_
#define TRADEOFF_PREVIEW_HPP_

#include <array>
#include <cstdint>
#include <string_view>

#include "tradeoff/metrics.hpp"

namespace tradeoff {

/// Order here is the remainder tie-break order.
enum class PreviewCategory { kTN = 0, kFP = 1, kTP = 2, kFN = 3 };

inline constexpr std::array<PreviewCategory, 4> kAllCategories = {
    PreviewCategory::kTN, PreviewCategory::kFP, PreviewCategory::kTP,
    PreviewCategory::kFN};

enum class IconColor { kBlue, kRed };
enum class IconShape { kCircle, kTriangle };

struct LegendEntry {
  IconColor color;
  IconShape shape;
  std::string_view caption;
};

std::string_view CategoryName(PreviewCategory c);  // "TN", "FP", ...
std::string_view ColorName(IconColor c);
std::string_view ShapeName(IconShape s);

/// Fixed encoding, e.g. FN -> (blue, triangle, "wrongly detected as good").
const LegendEntry& Legend(PreviewCategory c);

std::uint64_t CountOf(const ConfusionCounts& counts, PreviewCategory c);

struct PreviewGrid {
  std::uint64_t n_icons = 0;
  std::array<std::uint64_t, 4> allocation{};  // indexed by PreviewCategory
  std::array<double, 4> fractions{};

  std::uint64_t icons(PreviewCategory c) const {
    return allocation[static_cast<int>(c)];
  }
  double fraction(PreviewCategory c) const {
    return fractions[static_cast<int>(c)];
  }
};

inline constexpr std::uint64_t kDefaultIcons = 100;

/// Largest-remainder (Hamilton) apportionment. Every category gets the floor
/// of its quota; the leftover icons go to the largest fractional remainders,
/// ties in TN, FP, TP, FN order. Remainders are compared exactly.
/// Throws DomainError(empty_dataset) for zero counts and
/// DomainError(bad_icons) for n_icons == 0.
PreviewGrid AllocateIcons(const ConfusionCounts& counts,
                          std::uint64_t n_icons = kDefaultIcons);

}  // namespace tradeoff

#endif  // TRADEOFF_PREVIEW_HPP_
