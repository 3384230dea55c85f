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

#include "tradeoff/preview.hpp"

#include <algorithm>

#include "tradeoff/errors.hpp"

namespace tradeoff {

namespace {

constexpr std::array<LegendEntry, 4> kLegend = {{
    {IconColor::kBlue, IconShape::kCircle, "correctly detected as good"},
    {IconColor::kRed, IconShape::kCircle, "wrongly detected as damaging"},
    {IconColor::kRed, IconShape::kTriangle, "correctly detected as damaging"},
    {IconColor::kBlue, IconShape::kTriangle, "wrongly detected as good"},
}};

using Wide = unsigned __int128;

}  // namespace

std::string_view CategoryName(PreviewCategory c) {
  switch (c) {
    case PreviewCategory::kTN:
      return "TN";
    case PreviewCategory::kFP:
      return "FP";
    case PreviewCategory::kTP:
      return "TP";
    case PreviewCategory::kFN:
      return "FN";
  }
  return "?";
}

std::string_view ColorName(IconColor c) {
  return c == IconColor::kBlue ? "blue" : "red";
}

std::string_view ShapeName(IconShape s) {
  return s == IconShape::kCircle ? "circle" : "triangle";
}

const LegendEntry& Legend(PreviewCategory c) {
  return kLegend[static_cast<int>(c)];
}

std::uint64_t CountOf(const ConfusionCounts& counts, PreviewCategory c) {
  switch (c) {
    case PreviewCategory::kTN:
      return counts.tn;
    case PreviewCategory::kFP:
      return counts.fp;
    case PreviewCategory::kTP:
      return counts.tp;
    case PreviewCategory::kFN:
      return counts.fn;
  }
  return 0;
}

PreviewGrid AllocateIcons(const ConfusionCounts& counts,
                          std::uint64_t n_icons) {
  const std::uint64_t total = counts.total();
  if (total == 0) {
    throw DomainError(error_code::kEmptyDataset,
                      "cannot apportion icons for zero examples");
  }
  if (n_icons == 0) {
    throw DomainError(error_code::kBadIcons, "icon count must be positive");
  }

  PreviewGrid grid;
  grid.n_icons = n_icons;
  // quota = n_icons * count / total = floor + remainder / total.
  std::array<Wide, 4> remainder{};
  std::uint64_t assigned = 0;
  for (auto c : kAllCategories) {
    const int i = static_cast<int>(c);
    const Wide scaled = Wide{n_icons} * CountOf(counts, c);
    grid.allocation[i] = static_cast<std::uint64_t>(scaled / total);
    remainder[i] = scaled % total;
    grid.fractions[i] = static_cast<double>(CountOf(counts, c)) /
                        static_cast<double>(total);
    assigned += grid.allocation[i];
  }

  std::array<int, 4> order = {0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return remainder[a] > remainder[b];
  });
  // At most three leftover icons, each to a distinct non-zero remainder.
  for (std::uint64_t k = 0; assigned + k < n_icons; ++k) {
    ++grid.allocation[order[k]];
  }
  return grid;
}

}  // namespace tradeoff
