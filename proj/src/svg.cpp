#include "screening/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "screening/report.hpp"

namespace screening::svg {

namespace {

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::line(double x1, double y1, double x2, double y2, const std::string& stroke, double width,
                    const std::string& dash) {
  body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
        << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\"";
  if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
  body_ << "/>\n";
}

void Document::rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke) {
  body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
        << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
}

void Document::circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke) {
  body_ << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r) << "\" fill=\"" << fill
        << "\" stroke=\"" << stroke << "\"/>\n";
}

void Document::polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke,
                        double width) {
  body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) body_ << ' ';
    body_ << num(points[i].first) << ',' << num(points[i].second);
  }
  body_ << "\"/>\n";
}

void Document::text(double x, double y, const std::string& content, double size, const std::string& anchor,
                    const std::string& extra) {
  body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << num(size)
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\"";
  if (!extra.empty()) body_ << ' ' << extra;
  body_ << ">" << escape(content) << "</text>\n";
}

std::string Document::str() const {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
      << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(width_) << "\" height=\"" << num(height_)
      << "\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

std::string sweep_svg(const SweepCurve& curve, std::optional<double> highlight_prior) {
  const double width = 720, height = 460;
  const double left = 70, right = 30, top = 40, bottom = 70;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  std::vector<const SweepPoint*> usable;
  for (const auto& p : curve.points) {
    if (p.prior > 0.0) usable.push_back(&p);
  }
  Document doc(width, height);
  doc.text(width / 2, 24, "Posterior probability of a positive and a negative test", 15, "middle");
  if (usable.empty()) {
    doc.text(width / 2, height / 2, "no positive priors to plot", 13, "middle");
    return doc.str();
  }

  double lo = std::floor(std::log10(usable.front()->prior));
  double hi = std::ceil(std::log10(usable.back()->prior));
  if (hi <= lo) hi = lo + 1;
  auto x_of = [&](double prior) { return left + (std::log10(prior) - lo) / (hi - lo) * plot_w; };
  auto y_of = [&](double v) { return top + (1.0 - v) * plot_h; };

  // Axes, grid and ticks.
  for (int i = 0; i <= 10; i += 2) {
    const double v = i / 10.0;
    doc.line(left, y_of(v), left + plot_w, y_of(v), "#dddddd");
    doc.text(left - 8, y_of(v) + 4, report::fixed(v * 100, 0) + "%", 11, "end");
  }
  for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); ++e) {
    const double x = left + (e - lo) / (hi - lo) * plot_w;
    doc.line(x, top, x, top + plot_h, "#eeeeee");
    doc.text(x, top + plot_h + 18, "1e" + std::to_string(e), 11, "middle");
  }
  doc.line(left, top + plot_h, left + plot_w, top + plot_h, "black");
  doc.line(left, top, left, top + plot_h, "black");
  doc.text(left + plot_w / 2, height - 24, "Prior probability of deception (log scale)", 13, "middle");
  doc.text(18, top + plot_h / 2, "Posterior probability", 13, "middle",
           "transform=\"rotate(-90 18 " + num(top + plot_h / 2) + ")\"");

  std::vector<std::pair<double, double>> ppv, npv;
  for (const auto* p : usable) {
    if (p->ppv) ppv.emplace_back(x_of(p->prior), y_of(*p->ppv));
    if (p->npv) npv.emplace_back(x_of(p->prior), y_of(*p->npv));
  }
  doc.polyline(ppv, "#c0392b", 2);
  doc.polyline(npv, "#2471a3", 2);

  // Legend.
  doc.line(left + 12, top + 14, left + 36, top + 14, "#c0392b", 2);
  doc.text(left + 42, top + 18, "PPV  P(Lie | +)", 12);
  doc.line(left + 12, top + 32, left + 36, top + 32, "#2471a3", 2);
  doc.text(left + 42, top + 36, "NPV  P(No-lie | -)", 12);

  if (highlight_prior && *highlight_prior > 0.0) {
    const double hp = *highlight_prior;
    // Nearest grid point to the highlighted prior.
    const auto* best = usable.front();
    for (const auto* p : usable) {
      if (std::abs(std::log10(p->prior) - std::log10(hp)) < std::abs(std::log10(best->prior) - std::log10(hp))) {
        best = p;
      }
    }
    const double x = x_of(best->prior);
    doc.line(x, top, x, top + plot_h, "#7f8c8d", 1, "4,3");
    if (best->ppv) {
      doc.circle(x, y_of(*best->ppv), 5, "#c0392b", "black");
      doc.text(x + 8, y_of(*best->ppv) - 6, "PPV " + report::percent(best->ppv), 12, "start", "font-weight=\"bold\"");
    }
    if (best->npv) {
      doc.circle(x, y_of(*best->npv), 5, "#2471a3", "black");
      doc.text(x + 8, y_of(*best->npv) + 16, "NPV " + report::percent(best->npv), 12, "start",
               "font-weight=\"bold\"");
    }
    doc.text(x, top + plot_h + 34, "prior " + report::percent(best->prior), 11, "middle");
  }
  return doc.str();
}

std::string event_tree_svg(const EventTree& tree, int decimals) {
  if (decimals < 0) decimals = tree.population_size < 10.0 ? 4 : 2;
  const double width = 860, height = 420;
  Document doc(width, height);
  doc.text(width / 2, 26, "Event tree of screening outcomes", 15, "middle");

  const double root_x = 90, root_y = height / 2;
  const double branch_x = 360, leaf_x = 630;
  auto box = [&](double x, double y, const std::vector<std::string>& lines, const std::string& fill) {
    const double h = 18.0 * static_cast<double>(lines.size()) + 10;
    doc.rect(x - 80, y - h / 2, 200, h, fill, "#555555");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      doc.text(x + 20, y - h / 2 + 20 + 18.0 * static_cast<double>(i), lines[i], 12, "middle");
    }
  };

  box(root_x, root_y, {tree.root.label, "n = " + report::fixed(tree.root.expected_count, decimals)}, "#f4f6f7");

  std::vector<const EventNode*> shown;
  for (const auto& b : tree.root.children) {
    if (b.probability > 0.0) shown.push_back(&b);
  }
  const double band = (height - 60) / static_cast<double>(std::max<std::size_t>(shown.size(), 1));
  for (std::size_t i = 0; i < shown.size(); ++i) {
    const auto& b = *shown[i];
    const double by = 50 + band * (static_cast<double>(i) + 0.5);
    doc.line(root_x + 120, root_y, branch_x - 80, by, "#555555");
    doc.text((root_x + branch_x) / 2 + 20, (root_y + by) / 2 - 6, "p = " + report::fixed(b.probability, 4), 11,
             "middle");
    box(branch_x, by, {b.label, "n = " + report::fixed(b.expected_count, decimals)}, "#fdfefe");

    for (std::size_t k = 0; k < b.children.size(); ++k) {
      const auto& leaf = b.children[k];
      const double ly = by + (k == 0 ? -band / 4 : band / 4);
      doc.line(branch_x + 120, by, leaf_x - 80, ly, "#555555");
      doc.text((branch_x + leaf_x) / 2 + 20, (by + ly) / 2 - 6, "p = " + report::fixed(leaf.probability, 4), 11,
               "middle");
      const bool correct = leaf.outcome == Outcome::TruePositive || leaf.outcome == Outcome::TrueNegative;
      box(leaf_x, ly,
          {std::string("test ") + leaf.label + " (" + outcome_name(*leaf.outcome) + ")",
           "n = " + report::fixed(leaf.expected_count, decimals), "posterior " + report::percent(leaf.posterior)},
          correct ? "#e9f7ef" : "#fdedec");
    }
  }
  return doc.str();
}

}  // namespace screening::svg
