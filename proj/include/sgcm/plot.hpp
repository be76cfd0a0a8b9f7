#pragma once

#include <fstream>

#include "sgcm/episode.hpp"
#include "sgcm/lp.hpp"

namespace sgcm {

// Self-contained SVG of stage-wise utility vs round, one polyline per report.
// Rounds where the follower deviated are marked with circles. The underlying
// numbers are written next to the SVG as <path>.csv.
inline void emit_utility_plot(const std::vector<std::pair<std::string, EpisodeReport>>& reports,
                              const std::string& path) {
  if (reports.empty()) throw ValidationError("plot: no reports given");
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  int max_round = 1;
  double lo = kInf, hi = -kInf;
  for (const auto& [name, r] : reports)
    for (const auto& rec : r.rounds) {
      max_round = std::max(max_round, rec.round);
      lo = std::min(lo, rec.utility_a);
      hi = std::max(hi, rec.utility_a);
    }
  if (!std::isfinite(lo)) { lo = 0.0; hi = 1.0; }
  if (hi - lo < 1e-9) { hi += 1.0; lo -= 1.0; }
  const double w = 640, h = 400, ml = 60, mr = 20, mt = 20, mb = 60;
  auto px = [&](double round) { return ml + (round - 1) / std::max(1, max_round - 1) * (w - ml - mr); };
  auto py = [&](double u) { return h - mb - (u - lo) / (hi - lo) * (h - mt - mb); };

  std::string svg;
  char buf[256];
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\">\n<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                ml, h - mb, w - mr, h - mb);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                ml, mt, ml, h - mb);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">round</text>\n", w / 2, h - 20.0);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"15\" y=\"%.1f\" font-size=\"12\" transform=\"rotate(-90 15 %.1f)\">"
                "stage utility</text>\n", h / 2, h / 2);
  svg += buf;
  for (int r = 1; r <= max_round; ++r) {
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"middle\">%d</text>\n",
                  px(r), h - mb + 15, r);
    svg += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"end\">%.6g</text>\n"
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"end\">%.6g</text>\n",
                ml - 5, py(lo) + 4, lo, ml - 5, py(hi) + 4, hi);
  svg += buf;

  std::size_t ci = 0;
  double legend_y = mt + 10;
  for (const auto& [name, r] : reports) {
    const char* color = kColors[ci++ % 8];
    std::string points;
    for (const auto& rec : r.rounds) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(rec.round), py(rec.utility_a));
      points += buf;
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" +
           points + "\"/>\n";
    for (const auto& rec : r.rounds) {
      if (!rec.follower_deviated) continue;
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"none\" stroke=\"%s\" "
                    "stroke-width=\"2\"/>\n", px(rec.round), py(rec.utility_a), color);
      svg += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" fill=\"%s\">%s</text>\n",
                  w - mr - 160, legend_y, color, name.c_str());
    svg += buf;
    legend_y += 15;
  }
  svg += "</svg>\n";

  {
    std::ofstream out(path);
    if (!out) throw ValidationError("plot: cannot write " + path);
    out << svg;
  }
  {
    std::ofstream out(path + ".csv");
    if (!out) throw ValidationError("plot: cannot write " + path + ".csv");
    out << "report,round,utility,deviated\n";
    for (const auto& [name, r] : reports)
      for (const auto& rec : r.rounds)
        out << name << "," << rec.round << "," << detail::fmt_double(rec.utility_a) << ","
            << (rec.follower_deviated ? 1 : 0) << "\n";
  }
}

}  // namespace sgcm
