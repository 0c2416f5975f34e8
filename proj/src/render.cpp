#include "gifsdim/render.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace gifsdim {

void ImageSpec::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image: width and height must be positive");
  if (!(x1 > x0)) throw std::invalid_argument("image: real range must satisfy x1 > x0");
  if (base < 0) throw std::invalid_argument("image: negative embedding base");
}

namespace {

struct PixelRect {
  int x0, x1, y0, y1;  // half-open
};

Rgb color_for(const Layer& layer, std::size_t vertex) {
  if (layer.colors.empty()) return kBoundary;
  return layer.colors.size() == 1 ? layer.colors.front() : layer.colors.at(vertex);
}

void check_layers(const std::vector<Layer>& layers) {
  for (const auto& l : layers) {
    if (!l.cover) throw std::invalid_argument("render: layer without a cover");
    for (const auto& boxes : l.cover->boxes)
      for (const auto& b : boxes)
        if (b.reals.size() != 1 || !b.complexes.empty() || b.padics.size() != 1)
          throw std::invalid_argument("render: only R x Q_p covers can be drawn");
  }
}

// Ball c + p^e Z_p lands in [y, y + (p-1)/(b-1) * b^-e] under the embedding.
PixelRect pixels(const Box& box, const ImageSpec& spec) {
  const PadicBall& ball = box.padics.front();
  const std::int64_t p = ball.center.prime();
  const std::int64_t base = spec.base == 0 ? p : spec.base;
  if (ball.exponent < 0) throw std::invalid_argument("render: p-adic ball larger than Z_p");
  const double y = cantor_embed(ball.center.truncated(ball.exponent), base);
  const double h = static_cast<double>(p - 1) / static_cast<double>(base - 1) *
                   std::pow(static_cast<double>(base), -ball.exponent);
  const Interval& iv = box.reals.front();
  const double sx = spec.width / (spec.x1 - spec.x0);
  PixelRect r;
  r.x0 = static_cast<int>(std::floor((iv.lo - spec.x0) * sx));
  r.x1 = std::max(r.x0 + 1, static_cast<int>(std::ceil((iv.hi - spec.x0) * sx)));
  r.y0 = static_cast<int>(std::floor(y * spec.height));
  r.y1 = std::max(r.y0 + 1, static_cast<int>(std::ceil((y + h) * spec.height)));
  r.x0 = std::clamp(r.x0, 0, spec.width);
  r.x1 = std::clamp(r.x1, 0, spec.width);
  r.y0 = std::clamp(r.y0, 0, spec.height);
  r.y1 = std::clamp(r.y1, 0, spec.height);
  return r;
}

}  // namespace

std::string render_cover(const std::vector<Layer>& layers, const ImageSpec& spec) {
  spec.validate();
  check_layers(layers);
  const auto w = static_cast<std::size_t>(spec.width);
  std::vector<Rgb> img(w * static_cast<std::size_t>(spec.height), spec.background);
  for (const auto& layer : layers)
    for (std::size_t v = 0; v < layer.cover->boxes.size(); ++v) {
      const Rgb c = color_for(layer, v);
      for (const auto& b : layer.cover->boxes[v]) {
        const PixelRect r = pixels(b, spec);
        for (int y = r.y0; y < r.y1; ++y)
          std::fill_n(img.begin() + static_cast<std::ptrdiff_t>(y * w + r.x0), r.x1 - r.x0, c);
      }
    }
  std::string out = "P6\n" + std::to_string(spec.width) + " " + std::to_string(spec.height) + "\n255\n";
  out.reserve(out.size() + img.size() * 3);
  for (const auto& px : img) {
    out.push_back(static_cast<char>(px.r));
    out.push_back(static_cast<char>(px.g));
    out.push_back(static_cast<char>(px.b));
  }
  return out;
}

std::string render_svg(const std::vector<Layer>& layers, const ImageSpec& spec) {
  spec.validate();
  check_layers(layers);
  std::ostringstream os;
  auto hex = [](Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return std::string(buf);
  };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"" << hex(spec.background) << "\"/>\n";
  for (const auto& layer : layers)
    for (std::size_t v = 0; v < layer.cover->boxes.size(); ++v)
      for (const auto& b : layer.cover->boxes[v]) {
        const PixelRect r = pixels(b, spec);
        if (r.x1 <= r.x0 || r.y1 <= r.y0) continue;
        os << "<rect x=\"" << r.x0 << "\" y=\"" << r.y0 << "\" width=\"" << r.x1 - r.x0 << "\" height=\""
           << r.y1 - r.y0 << "\" fill=\"" << hex(color_for(layer, v)) << "\"/>\n";
      }
  os << "</svg>\n";
  return os.str();
}

double pixel_share(const std::string& ppm, Rgb color) {
  int w = 0, h = 0, maxval = 0, consumed = 0;
  if (std::sscanf(ppm.c_str(), "P6 %d %d %d%n", &w, &h, &maxval, &consumed) != 3 || w <= 0 || h <= 0)
    throw std::invalid_argument("pixel_share: not a P6 image");
  const std::size_t start = static_cast<std::size_t>(consumed) + 1;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (ppm.size() < start + 3 * n) throw std::invalid_argument("pixel_share: truncated image");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto* px = reinterpret_cast<const unsigned char*>(ppm.data() + start + 3 * i);
    if (px[0] == color.r && px[1] == color.g && px[2] == color.b) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

void fit_real_range(const std::vector<Layer>& layers, ImageSpec& spec) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& l : layers)
    for (const auto& boxes : l.cover->boxes)
      for (const auto& b : boxes)
        if (!b.reals.empty()) {
          lo = std::min(lo, b.reals.front().lo);
          hi = std::max(hi, b.reals.front().hi);
        }
  if (!(hi > lo)) return;
  const double pad = 0.02 * (hi - lo);
  spec.x0 = lo - pad;
  spec.x1 = hi + pad;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string emit_dot(const GifsGraph& g) {
  std::ostringstream os;
  os << "digraph gifs {\n";
  for (const auto& v : g.vertices()) os << "  " << quoted(v) << ";\n";
  std::vector<int> order(g.edges().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.edges()[a].label < g.edges()[b].label; });
  for (int e : order) {
    const auto& edge = g.edges()[e];
    os << "  " << quoted(g.vertices()[edge.from]) << " -> " << quoted(g.vertices()[edge.to])
       << " [label=" << quoted(edge.name) << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string emit_graph_json(const GifsGraph& g) {
  nlohmann::ordered_json j;
  j["vertices"] = g.vertices();
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges())
    j["edges"].push_back({{"from", g.vertices()[e.from]},
                          {"to", g.vertices()[e.to]},
                          {"label", e.label},
                          {"name", e.name}});
  return j.dump(2) + "\n";
}

}  // namespace gifsdim
