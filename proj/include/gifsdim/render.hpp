#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gifsdim/attractor.hpp"
#include "gifsdim/gifs.hpp"

namespace gifsdim {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kOmegaA{96, 96, 96};
inline constexpr Rgb kOmegaB{192, 192, 192};
inline constexpr Rgb kBoundary{0, 0, 0};
inline constexpr Rgb kWhite{255, 255, 255};

// Picture of R x Q_p: x is the real coordinate, y the Cantor embedding of
// the p-adic one (top of the image is 0).
struct ImageSpec {
  int width = 512;
  int height = 512;
  double x0 = -2.0;
  double x1 = 2.0;
  std::int64_t base = 0;  // 0: the prime itself
  Rgb background = kWhite;

  void validate() const;
};

// A cover drawn with one color per vertex (a single color applies to all).
struct Layer {
  const BoxCover* cover = nullptr;
  std::vector<Rgb> colors;
};

// Binary PPM (P6). Layers are painted in order, so later ones stay on top.
// Throws std::invalid_argument unless the space is R x Q_p.
std::string render_cover(const std::vector<Layer>& layers, const ImageSpec& spec);
// Same rectangles as SVG.
std::string render_svg(const std::vector<Layer>& layers, const ImageSpec& spec);

// Share of pixels of a P6 image having the given color.
double pixel_share(const std::string& ppm, Rgb color);

// Real-axis hull of the covers, padded by 2% on both sides.
void fit_real_range(const std::vector<Layer>& layers, ImageSpec& spec);

// One node per vertex and one edge per map, labelled with the map's name.
std::string emit_dot(const GifsGraph& g);
// Vertices, edges and map names as JSON.
std::string emit_graph_json(const GifsGraph& g);

}  // namespace gifsdim
