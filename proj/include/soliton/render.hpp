#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "soliton/io.hpp"

namespace soliton {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  std::array<std::uint8_t, 3> pixel(int x, int y) const {
    const auto* p = &rgb[std::size_t(3 * (y * width + x))];
    return {p[0], p[1], p[2]};
  }
};

struct View {
  double azimuth = 0.7;    // about the z axis
  double elevation = 0.45;  // tilt towards the viewer
  int width = 800;
  int height = 800;
  std::array<std::uint8_t, 3> background{255, 255, 255};
};

// orthographic, z-buffered, vertex colors with two-sided Lambert shading
Image render_meshes(const std::vector<Mesh>& meshes, const View& view = {});

struct Polyline {
  std::vector<cplx> points;
  std::array<std::uint8_t, 3> color{0, 0, 0};
};

// equal-aspect plot of planar curves with coordinate axes
Image render_curves(const std::vector<Polyline>& curves, int width = 800, int height = 800);

void write_png(const std::string& path, const Image& image);

}  // namespace soliton
