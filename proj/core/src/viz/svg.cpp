#include "rxnemb/viz/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "rxnemb/common/error.hpp"
#include "rxnemb/viz/colormap.hpp"

namespace rxnemb::viz {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fill(const Rgb& c) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)", c[0], c[1], c[2]);
  return buf;
}

std::string svg_open(double width, double height) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
  return out.str();
}

std::string escape_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

RenderOutput render_heatmap_svg(const cluster::DistanceMatrix& dm, const std::vector<int>& order,
                                const std::vector<std::string>& labels) {
  const int n = dm.n;
  if (static_cast<int>(order.size()) != n || static_cast<int>(labels.size()) != n) {
    throw Error(ErrorCode::LengthMismatch, "order/labels must cover all items");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int idx : order) {
    if (idx < 0 || idx >= n || seen[static_cast<std::size_t>(idx)]) {
      throw Error(ErrorCode::IndexOutOfRange, "order is not a permutation");
    }
    seen[static_cast<std::size_t>(idx)] = 1;
  }

  double max_dist = 0.0;
  for (double v : dm.values) max_dist = std::max(max_dist, v);
  const double denom = max_dist > 0.0 ? max_dist : 1.0;

  constexpr double kCell = 14.0;
  constexpr double kMargin = 70.0;
  const double size = kMargin + kCell * n + 10.0;

  std::ostringstream svg;
  svg << svg_open(size, size);
  json cells = json::array();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double d = dm.at(order[static_cast<std::size_t>(r)], order[static_cast<std::size_t>(c)]);
      const Rgb color = distance_map().at(d / denom);
      svg << "<rect x=\"" << fmt(kMargin + kCell * c) << "\" y=\"" << fmt(kMargin + kCell * r)
          << "\" width=\"" << fmt(kCell) << "\" height=\"" << fmt(kCell) << "\" fill=\""
          << fill(color) << "\"/>\n";
    }
  }
  for (int r = 0; r < n; ++r) {
    const std::string& label = labels[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
    svg << "<text x=\"" << fmt(kMargin - 4.0) << "\" y=\"" << fmt(kMargin + kCell * r + kCell * 0.75)
        << "\" font-size=\"9\" text-anchor=\"end\" font-family=\"monospace\">"
        << escape_text(label) << "</text>\n";
    svg << "<text x=\"" << fmt(kMargin + kCell * r + kCell * 0.5) << "\" y=\"" << fmt(kMargin - 6.0)
        << "\" font-size=\"9\" text-anchor=\"start\" font-family=\"monospace\" transform=\"rotate(-60 "
        << fmt(kMargin + kCell * r + kCell * 0.5) << " " << fmt(kMargin - 6.0) << ")\">"
        << escape_text(label) << "</text>\n";
  }
  svg << "</svg>\n";

  json sidecar;
  sidecar["order"] = order;
  json ordered_labels = json::array();
  json values = json::array();
  for (int r = 0; r < n; ++r) {
    ordered_labels.push_back(labels[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])]);
    json row = json::array();
    for (int c = 0; c < n; ++c) {
      row.push_back(dm.at(order[static_cast<std::size_t>(r)], order[static_cast<std::size_t>(c)]));
    }
    values.push_back(std::move(row));
  }
  sidecar["labels"] = std::move(ordered_labels);
  sidecar["values"] = std::move(values);
  sidecar["max_distance"] = max_dist;
  return {svg.str(), sidecar.dump(2) + "\n"};
}

RenderOutput render_attention_svg(const chem::Reaction& rxn,
                                  const std::vector<std::vector<float>>& intensities) {
  std::vector<const chem::MolecularGraph*> molecules;
  for (const auto& m : rxn.reactant_components) molecules.push_back(&m);
  for (const auto& m : rxn.product_components) molecules.push_back(&m);
  if (molecules.size() != intensities.size()) {
    throw Error(ErrorCode::CountMismatch, "one intensity list per molecule required");
  }
  std::size_t max_atoms = 0;
  for (std::size_t m = 0; m < molecules.size(); ++m) {
    if (intensities[m].size() != molecules[m]->atoms.size()) {
      throw Error(ErrorCode::CountMismatch,
                  "molecule " + std::to_string(m) + " intensity count != atom count");
    }
    max_atoms = std::max(max_atoms, molecules[m]->atoms.size());
  }

  constexpr double kSpacing = 36.0;
  constexpr double kRow = 46.0;
  constexpr double kRadius = 13.0;
  constexpr double kLeft = 90.0;
  const double width = kLeft + kSpacing * static_cast<double>(max_atoms) + 20.0;
  const double height = kRow * static_cast<double>(molecules.size()) + 30.0;

  std::ostringstream svg;
  svg << svg_open(width, height);
  json mols = json::array();
  const std::size_t reactant_count = rxn.reactant_components.size();
  for (std::size_t m = 0; m < molecules.size(); ++m) {
    const double cy = 30.0 + kRow * static_cast<double>(m);
    const bool is_reactant = m < reactant_count;
    const std::string role =
        is_reactant ? "rct. " + std::to_string(m + 1)
                    : "pdt. " + std::to_string(m - reactant_count + 1);
    svg << "<text x=\"8\" y=\"" << fmt(cy + 4.0)
        << "\" font-size=\"11\" font-family=\"monospace\">" << role << "</text>\n";
    json atoms = json::array();
    for (std::size_t a = 0; a < molecules[m]->atoms.size(); ++a) {
      const chem::Atom& atom = molecules[m]->atoms[a];
      const double cx = kLeft + kSpacing * static_cast<double>(a);
      const Rgb color = red_scale(intensities[m][a]);
      svg << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(kRadius)
          << "\" fill=\"" << fill(color) << "\" stroke=\"black\" stroke-width=\"0.6\"/>\n";
      svg << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy + 3.5)
          << "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"monospace\">"
          << escape_text(atom.symbol) << "</text>\n";
      svg << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy + kRadius + 9.0)
          << "\" font-size=\"7\" text-anchor=\"middle\" font-family=\"monospace\">" << a
          << "</text>\n";
      atoms.push_back({{"index", a},
                       {"symbol", atom.symbol},
                       {"intensity", intensities[m][a]}});
    }
    mols.push_back({{"role", role}, {"atoms", std::move(atoms)}});
  }
  svg << "</svg>\n";

  json sidecar;
  sidecar["reaction_id"] = rxn.id;
  sidecar["molecules"] = std::move(mols);
  return {svg.str(), sidecar.dump(2) + "\n"};
}

RenderOutput render_scatter_svg(const std::vector<ScatterPoint>& points,
                                const std::vector<std::string>& tag_names) {
  constexpr std::size_t kMaxTags = 8;
  static const char* kPalette[kMaxTags] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  if (tag_names.empty() || tag_names.size() > kMaxTags) {
    throw Error(ErrorCode::UnknownTag, "between 1 and 8 dataset tags required");
  }
  for (const ScatterPoint& p : points) {
    if (p.tag < 0 || p.tag >= static_cast<int>(tag_names.size())) {
      throw Error(ErrorCode::UnknownTag, "point tag " + std::to_string(p.tag) +
                                             " is not in the declared palette");
    }
  }

  double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
  if (!points.empty()) {
    min_x = max_x = points[0].x;
    min_y = max_y = points[0].y;
    for (const ScatterPoint& p : points) {
      min_x = std::min(min_x, static_cast<double>(p.x));
      max_x = std::max(max_x, static_cast<double>(p.x));
      min_y = std::min(min_y, static_cast<double>(p.y));
      max_y = std::max(max_y, static_cast<double>(p.y));
    }
  }
  const double span_x = max_x - min_x > 0.0 ? max_x - min_x : 1.0;
  const double span_y = max_y - min_y > 0.0 ? max_y - min_y : 1.0;
  min_x -= 0.05 * span_x;
  max_x += 0.05 * span_x;
  min_y -= 0.05 * span_y;
  max_y += 0.05 * span_y;

  constexpr double kPlot = 480.0;
  constexpr double kLegendWidth = 150.0;
  const double width = kPlot + kLegendWidth;
  const double height = kPlot;

  auto sx = [&](double x) { return kPlot * (x - min_x) / (max_x - min_x); };
  auto sy = [&](double y) { return kPlot * (1.0 - (y - min_y) / (max_y - min_y)); };

  std::ostringstream svg;
  svg << svg_open(width, height);
  svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(kPlot) << "\" height=\"" << fmt(kPlot)
      << "\" fill=\"white\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
  for (const ScatterPoint& p : points) {
    svg << "<circle cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y))
        << "\" r=\"2.2\" fill=\"" << kPalette[static_cast<std::size_t>(p.tag)]
        << "\" fill-opacity=\"0.75\"/>\n";
  }
  for (std::size_t t = 0; t < tag_names.size(); ++t) {
    const double ly = 20.0 + 18.0 * static_cast<double>(t);
    svg << "<circle cx=\"" << fmt(kPlot + 16.0) << "\" cy=\"" << fmt(ly) << "\" r=\"4\" fill=\""
        << kPalette[t] << "\"/>\n";
    svg << "<text x=\"" << fmt(kPlot + 26.0) << "\" y=\"" << fmt(ly + 3.5)
        << "\" font-size=\"11\" font-family=\"monospace\">" << escape_text(tag_names[t])
        << "</text>\n";
  }
  svg << "</svg>\n";

  json sidecar;
  sidecar["tags"] = tag_names;
  json rows = json::array();
  for (const ScatterPoint& p : points) {
    rows.push_back({{"x", p.x}, {"y", p.y}, {"tag", p.tag}});
  }
  sidecar["points"] = std::move(rows);
  return {svg.str(), sidecar.dump(2) + "\n"};
}

}  // namespace rxnemb::viz
