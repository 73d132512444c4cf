// Copyright 2026 The vecnbt Authors
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

#ifndef VECNBT_PLOT_H_
#define VECNBT_PLOT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vecnbt/pipeline.h"

namespace vecnbt {

// Line chart of sweep results: one panel per distinct value of `panel`
// (a single panel when empty), x = `x`, CCR in red on a [1/K, 1] left axis
// and NMI in blue on a [0, 1] right axis. The "BT" arm is drawn solid, every
// other arm dashed. Each point is the mean over trials with a +-1 standard
// deviation band.
struct PlotSpec {
  std::string x = "c";
  std::string panel = "n";
  std::string title;
};

// fig1: x = c by n; fig2: x = n by c; fig3: x = c by l; fig4: x = c by k.
PlotSpec FigurePreset(std::string_view name);

// Throws std::invalid_argument for columns other than n, k, c, lambda, l, r,
// w and FormatError when there are no rows.
std::string RenderSvg(const std::vector<ResultRow>& rows, const PlotSpec& spec);

// Reads `csv`, renders and writes `svg`. Nothing is written on error.
void EmitPlot(const std::filesystem::path& csv, const PlotSpec& spec,
              const std::filesystem::path& svg);

}  // namespace vecnbt

#endif  // VECNBT_PLOT_H_
