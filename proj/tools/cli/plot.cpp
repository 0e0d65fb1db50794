#include "cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "grfkit/error.hpp"

namespace grfkit::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string color_for(Coupling c) { return c == Coupling::iid ? "#d62728" : "#2ca02c"; }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void render_chart(std::ostringstream& svg, const std::vector<const SummaryRow*>& rows,
                  double y_offset) {
  std::vector<std::size_t> walkers;
  std::vector<Coupling> couplings;
  double y_max = 0.0;
  for (const auto* r : rows) {
    walkers.push_back(r->num_walkers);
    if (std::find(couplings.begin(), couplings.end(), r->coupling) == couplings.end()) {
      couplings.push_back(r->coupling);
    }
    y_max = std::max(y_max, r->mean + r->stddev);
  }
  std::sort(walkers.begin(), walkers.end());
  walkers.erase(std::unique(walkers.begin(), walkers.end()), walkers.end());
  if (!(y_max > 0.0)) y_max = 1.0;
  y_max *= 1.05;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double lo = std::log2(static_cast<double>(walkers.front()));
  const double hi = std::log2(static_cast<double>(walkers.back()));
  auto x_of = [&](std::size_t m) {
    if (hi == lo) return kLeft + plot_w / 2.0;
    return kLeft + plot_w * (std::log2(static_cast<double>(m)) - lo) / (hi - lo);
  };
  auto y_of = [&](double e) { return y_offset + kTop + plot_h * (1.0 - e / y_max); };

  const auto& first = *rows.front();
  svg << "<g>\n<text x=\"" << num(kLeft) << "\" y=\"" << num(y_offset + 24)
      << "\" font-size=\"14\">" << escape(first.kernel + " on " + first.family + " (N=" +
                                          std::to_string(first.n) + ", graph " + first.graph_id + ")")
      << "</text>\n";
  svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y_of(0)) << "\" x2=\"" << num(kLeft + plot_w)
      << "\" y2=\"" << num(y_of(0)) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y_of(0)) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(y_of(y_max)) << "\" stroke=\"black\"/>\n";
  for (auto m : walkers) {
    svg << "<text x=\"" << num(x_of(m)) << "\" y=\"" << num(y_of(0) + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << m << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double e = y_max * t / 4.0;
    char label[32];
    std::snprintf(label, sizeof label, "%.3g", e);
    svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y_of(e) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << label << "</text>\n";
  }
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(y_offset + kHeight - 10)
      << "\" font-size=\"12\" text-anchor=\"middle\">number of walkers</text>\n";
  svg << "<text x=\"16\" y=\"" << num(y_offset + kTop + plot_h / 2)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(y_offset + kTop + plot_h / 2) << ")\">relative Frobenius error</text>\n";

  std::size_t legend_row = 0;
  for (auto coupling : couplings) {
    std::vector<const SummaryRow*> series;
    for (const auto* r : rows) {
      if (r->coupling == coupling) series.push_back(r);
    }
    std::sort(series.begin(), series.end(),
              [](const SummaryRow* a, const SummaryRow* b) { return a->num_walkers < b->num_walkers; });
    const auto color = color_for(coupling);

    svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (const auto* r : series) svg << num(x_of(r->num_walkers)) << ',' << num(y_of(r->mean + r->stddev)) << ' ';
    for (auto it = series.rbegin(); it != series.rend(); ++it) {
      svg << num(x_of((*it)->num_walkers)) << ',' << num(y_of(std::max(0.0, (*it)->mean - (*it)->stddev))) << ' ';
    }
    svg << "\"/>\n";

    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto* r : series) svg << num(x_of(r->num_walkers)) << ',' << num(y_of(r->mean)) << ' ';
    svg << "\"/>\n";

    for (const auto* r : series) {
      const double x = x_of(r->num_walkers);
      const double y = y_of(r->mean);
      if (coupling == Coupling::iid) {
        svg << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
      } else {
        svg << "<path d=\"M" << num(x - 4) << ',' << num(y - 4) << " L" << num(x + 4) << ',' << num(y + 4)
            << " M" << num(x - 4) << ',' << num(y + 4) << " L" << num(x + 4) << ',' << num(y - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      }
    }
    const double ly = y_offset + kTop + 16.0 * static_cast<double>(legend_row++);
    svg << "<text x=\"" << num(kLeft + plot_w + 14) << "\" y=\"" << num(ly) << "\" font-size=\"12\" fill=\""
        << color << "\">" << (coupling == Coupling::iid ? "GRF (iid)" : "q-GRF (antithetic)") << "</text>\n";
  }
  svg << "</g>\n";
}

}  // namespace

std::string render_svg(const ExperimentReport& report) {
  if (report.summaries.empty()) throw Error("cannot plot an empty report");
  std::vector<std::string> graph_ids;
  for (const auto& s : report.summaries) {
    if (std::find(graph_ids.begin(), graph_ids.end(), s.graph_id) == graph_ids.end()) {
      graph_ids.push_back(s.graph_id);
    }
  }
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth)
      << "\" height=\"" << num(kHeight * static_cast<double>(graph_ids.size())) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t g = 0; g < graph_ids.size(); ++g) {
    std::vector<const SummaryRow*> rows;
    for (const auto& s : report.summaries) {
      if (s.graph_id == graph_ids[g]) rows.push_back(&s);
    }
    render_chart(svg, rows, kHeight * static_cast<double>(g));
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const ExperimentReport& report, const std::filesystem::path& path) {
  const auto text = render_svg(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write plot to '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing plot to '" + path.string() + "'");
}

}  // namespace grfkit::cli
