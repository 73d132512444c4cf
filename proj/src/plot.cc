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

#include "vecnbt/plot.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "vecnbt/io.h"

namespace vecnbt {

namespace {

constexpr double kPanelWidth = 460;
constexpr double kPanelHeight = 320;
constexpr double kMarginLeft = 60;
constexpr double kMarginRight = 60;
constexpr double kMarginTop = 40;
constexpr double kMarginBottom = 50;
constexpr const char* kCcrColor = "#d62728";
constexpr const char* kNmiColor = "#1f77b4";

double Column(const ResultRow& row, const std::string& name) {
  if (name == "n") return row.n;
  if (name == "k") return row.k;
  if (name == "c") return row.c;
  if (name == "lambda") return row.lambda;
  if (name == "l") return row.l;
  if (name == "r") return row.r;
  if (name == "w") return row.w;
  throw std::invalid_argument("unknown plot column '" + name + "'");
}

struct Stat {
  double mean = 0;
  double sd = 0;
};

Stat Summarize(const std::vector<double>& v) {
  Stat s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

std::string Num(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

struct Series {
  std::vector<double> x;
  std::vector<Stat> ccr, nmi;
};

class PanelWriter {
 public:
  PanelWriter(std::ostringstream& out, double ox, double oy, double xmin,
              double xmax, double ccr_min)
      : out_(out), ox_(ox), oy_(oy), xmin_(xmin), xmax_(xmax),
        ccr_min_(ccr_min) {
    if (xmax_ <= xmin_) {
      xmin_ -= 1;
      xmax_ += 1;
    }
  }

  double X(double x) const {
    return ox_ + kMarginLeft +
           (x - xmin_) / (xmax_ - xmin_) *
               (kPanelWidth - kMarginLeft - kMarginRight);
  }
  // Fraction of the plot height, 0 at the bottom.
  double Y(double frac) const {
    return oy_ + kMarginTop +
           (1 - frac) * (kPanelHeight - kMarginTop - kMarginBottom);
  }
  double CcrY(double v) const { return Y((v - ccr_min_) / (1 - ccr_min_)); }
  double NmiY(double v) const { return Y(v); }

  void Axes(const std::string& title, const std::string& xlabel,
            const std::vector<double>& xticks) {
    const double left = X(xmin_), right = X(xmax_);
    out_ << "<text x=\"" << Num(ox_ + kPanelWidth / 2) << "\" y=\""
         << Num(oy_ + 22) << "\" text-anchor=\"middle\" font-size=\"14\">"
         << title << "</text>\n";
    out_ << "<rect x=\"" << Num(left) << "\" y=\"" << Num(Y(1))
         << "\" width=\"" << Num(right - left) << "\" height=\""
         << Num(Y(0) - Y(1)) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (double t : xticks) {
      out_ << "<text x=\"" << Num(X(t)) << "\" y=\"" << Num(Y(0) + 16)
           << "\" text-anchor=\"middle\" font-size=\"10\">" << Num(t)
           << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
      const double f = i / 4.0;
      out_ << "<line x1=\"" << Num(left) << "\" x2=\"" << Num(right)
           << "\" y1=\"" << Num(Y(f)) << "\" y2=\"" << Num(Y(f))
           << "\" stroke=\"#ddd\"/>\n";
      out_ << "<text x=\"" << Num(left - 6) << "\" y=\"" << Num(Y(f) + 3)
           << "\" text-anchor=\"end\" font-size=\"10\" fill=\"" << kCcrColor
           << "\">" << Num(100 * (ccr_min_ + f * (1 - ccr_min_)))
           << "%</text>\n";
      out_ << "<text x=\"" << Num(right + 6) << "\" y=\"" << Num(Y(f) + 3)
           << "\" font-size=\"10\" fill=\"" << kNmiColor << "\">" << Num(f)
           << "</text>\n";
    }
    out_ << "<text x=\"" << Num((left + right) / 2) << "\" y=\""
         << Num(Y(0) + 34) << "\" text-anchor=\"middle\" font-size=\"12\">"
         << xlabel << "</text>\n";
    out_ << "<text x=\"" << Num(left - 44) << "\" y=\"" << Num((Y(0) + Y(1)) / 2)
         << "\" font-size=\"12\" fill=\"" << kCcrColor
         << "\" transform=\"rotate(-90 " << Num(left - 44) << ' '
         << Num((Y(0) + Y(1)) / 2) << ")\" text-anchor=\"middle\">CCR</text>\n";
    out_ << "<text x=\"" << Num(right + 44) << "\" y=\""
         << Num((Y(0) + Y(1)) / 2) << "\" font-size=\"12\" fill=\"" << kNmiColor
         << "\" transform=\"rotate(90 " << Num(right + 44) << ' '
         << Num((Y(0) + Y(1)) / 2) << ")\" text-anchor=\"middle\">NMI</text>\n";
  }

  template <typename ToY>
  void Curve(const std::vector<double>& xs, const std::vector<Stat>& ys,
             ToY to_y, const char* color, bool dashed) {
    // Band: upper edge forward, lower edge backward.
    out_ << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" "
         << "stroke=\"none\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
      out_ << Num(X(xs[i])) << ',' << Num(to_y(ys[i].mean + ys[i].sd)) << ' ';
    }
    for (size_t i = xs.size(); i-- > 0;) {
      out_ << Num(X(xs[i])) << ',' << Num(to_y(ys[i].mean - ys[i].sd)) << ' ';
    }
    out_ << "\"/>\n";
    out_ << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.8\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "")
         << " points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
      out_ << Num(X(xs[i])) << ',' << Num(to_y(ys[i].mean)) << ' ';
    }
    out_ << "\"/>\n";
    for (size_t i = 0; i < xs.size(); ++i) {
      out_ << "<circle cx=\"" << Num(X(xs[i])) << "\" cy=\""
           << Num(to_y(ys[i].mean)) << "\" r=\"2.5\" fill=\"" << color
           << "\"/>\n";
    }
  }

 private:
  std::ostringstream& out_;
  double ox_, oy_, xmin_, xmax_, ccr_min_;
};

}  // namespace

PlotSpec FigurePreset(std::string_view name) {
  if (name == "fig1") return {"c", "n", "Performance vs. sparsity"};
  if (name == "fig2") return {"n", "c", "Performance vs. number of nodes"};
  if (name == "fig3") return {"c", "l", "Performance vs. walk length"};
  if (name == "fig4") return {"c", "k", "Performance vs. number of clusters"};
  throw std::invalid_argument("unknown figure preset '" + std::string(name) +
                              "'");
}

std::string RenderSvg(const std::vector<ResultRow>& rows,
                      const PlotSpec& spec) {
  // Validate column names before anything else.
  const ResultRow probe;
  Column(probe, spec.x);
  if (!spec.panel.empty()) Column(probe, spec.panel);
  if (rows.empty()) throw FormatError("no result rows to plot");

  // panel -> arm -> x -> samples
  std::map<double, std::map<std::string, std::map<double, std::pair<
      std::vector<double>, std::vector<double>>>>> groups;
  std::map<double, int> panel_k;
  double xmin = Column(rows[0], spec.x), xmax = xmin;
  for (const ResultRow& row : rows) {
    const double p = spec.panel.empty() ? 0.0 : Column(row, spec.panel);
    const double x = Column(row, spec.x);
    auto& cell = groups[p][row.arm][x];
    cell.first.push_back(row.ccr);
    cell.second.push_back(row.nmi);
    panel_k[p] = std::max(panel_k[p], row.k);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }

  const int columns = groups.size() == 1 ? 1 : 2;
  const int panel_rows = static_cast<int>((groups.size() + columns - 1) / columns);
  const double legend = 30;
  const double width = columns * kPanelWidth;
  const double height = panel_rows * kPanelHeight + legend + 10;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Num(width)
      << "\" height=\"" << Num(height) << "\" viewBox=\"0 0 " << Num(width)
      << ' ' << Num(height) << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!spec.title.empty()) {
    out << "<title>" << spec.title << "</title>\n";
  }

  int index = 0;
  std::vector<std::string> arm_names;
  for (const auto& [panel_value, arms] : groups) {
    const double ox = (index % columns) * kPanelWidth;
    const double oy = (index / columns) * kPanelHeight;
    ++index;
    out << "<g class=\"panel\">\n";
    const int k = std::max(1, panel_k[panel_value]);
    PanelWriter panel(out, ox, oy, xmin, xmax, k > 1 ? 1.0 / k : 0.0);

    std::set<double> xs;
    for (const auto& [arm, by_x] : arms) {
      for (const auto& entry : by_x) xs.insert(entry.first);
    }
    std::vector<double> ticks(xs.begin(), xs.end());
    if (ticks.size() > 12) {
      std::vector<double> sparse;
      for (int i = 0; i <= 5; ++i) sparse.push_back(xmin + (xmax - xmin) * i / 5);
      ticks = sparse;
    }
    const std::string title =
        spec.panel.empty() ? spec.title
                           : spec.panel + " = " + Num(panel_value);
    panel.Axes(title, spec.x, ticks);

    for (const auto& [arm, by_x] : arms) {
      if (std::find(arm_names.begin(), arm_names.end(), arm) ==
          arm_names.end()) {
        arm_names.push_back(arm);
      }
      Series s;
      for (const auto& [x, samples] : by_x) {
        s.x.push_back(x);
        s.ccr.push_back(Summarize(samples.first));
        s.nmi.push_back(Summarize(samples.second));
      }
      const bool dashed = arm != "BT";
      panel.Curve(s.x, s.ccr, [&](double v) { return panel.CcrY(v); },
                  kCcrColor, dashed);
      panel.Curve(s.x, s.nmi, [&](double v) { return panel.NmiY(v); },
                  kNmiColor, dashed);
    }
    out << "</g>\n";
  }

  // Legend.
  double lx = 20;
  const double ly = panel_rows * kPanelHeight + 20;
  for (const std::string& arm : arm_names) {
    const bool dashed = arm != "BT";
    out << "<line x1=\"" << Num(lx) << "\" x2=\"" << Num(lx + 30) << "\" y1=\""
        << Num(ly) << "\" y2=\"" << Num(ly) << "\" stroke=\"#333\""
        << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    out << "<text x=\"" << Num(lx + 36) << "\" y=\"" << Num(ly + 4)
        << "\" font-size=\"12\">" << arm << "</text>\n";
    lx += 110;
  }
  out << "<text x=\"" << Num(lx) << "\" y=\"" << Num(ly + 4)
      << "\" font-size=\"12\" fill=\"" << kCcrColor << "\">CCR</text>\n";
  out << "<text x=\"" << Num(lx + 50) << "\" y=\"" << Num(ly + 4)
      << "\" font-size=\"12\" fill=\"" << kNmiColor << "\">NMI</text>\n";
  out << "</svg>\n";
  return out.str();
}

void EmitPlot(const std::filesystem::path& csv, const PlotSpec& spec,
              const std::filesystem::path& svg) {
  const std::string document = RenderSvg(ReadResultRowsFile(csv), spec);
  std::ofstream out(svg);
  if (!out) throw FormatError("cannot open " + svg.string());
  out << document;
  if (!out) throw FormatError("write to " + svg.string() + " failed");
}

}  // namespace vecnbt
