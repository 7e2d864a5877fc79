#pragma once

// Static SVG figures assembled as plain markup.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "screening/bayes.hpp"

namespace screening::svg {

/// Minimal SVG document writer; coordinates in user units, origin top-left.
class Document {
 public:
  Document(double width, double height);

  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0,
            const std::string& dash = "");
  void rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke);
  void circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke);
  void polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke, double width);
  void text(double x, double y, const std::string& content, double size = 12.0,
            const std::string& anchor = "start", const std::string& extra = "");

  std::string str() const;

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

std::string escape(const std::string& text);

/// PPV and NPV against a log10 prior axis. Zero priors and undefined
/// posteriors are skipped. A marker is drawn at `highlight_prior` if given.
std::string sweep_svg(const SweepCurve& curve, std::optional<double> highlight_prior = 0.05);

/// Two-level event tree with expected counts and leaf posteriors.
/// Zero-probability branches are omitted.
std::string event_tree_svg(const EventTree& tree, int decimals = -1);

}  // namespace screening::svg
