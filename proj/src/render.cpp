#include "soliton/render.hpp"

#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>

#include <png.h>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

Image blank(int w, int h, std::array<std::uint8_t, 3> bg) {
  if (w < 8 || h < 8) throw Error(ErrorCode::Precondition, "image too small");
  Image img;
  img.width = w;
  img.height = h;
  img.rgb.resize(std::size_t(3 * w * h));
  for (std::size_t k = 0; k < img.rgb.size(); k += 3) {
    img.rgb[k] = bg[0];
    img.rgb[k + 1] = bg[1];
    img.rgb[k + 2] = bg[2];
  }
  return img;
}

void set(Image& img, int x, int y, std::array<std::uint8_t, 3> c) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  auto* p = &img.rgb[std::size_t(3 * (y * img.width + x))];
  p[0] = c[0];
  p[1] = c[1];
  p[2] = c[2];
}

}  // namespace

Image render_meshes(const std::vector<Mesh>& meshes, const View& view) {
  Image img = blank(view.width, view.height, view.background);
  Eigen::Matrix3d Rz = Eigen::AngleAxisd(view.azimuth, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  Eigen::Matrix3d Rx = Eigen::AngleAxisd(-(0.5 * pi - view.elevation), Eigen::Vector3d::UnitX()).toRotationMatrix();
  Eigen::Matrix3d R = Rx * Rz;

  std::vector<Eigen::MatrixX3d> cam;
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(1e300), hi = Eigen::Vector3d::Constant(-1e300);
  for (const auto& m : meshes) {
    Eigen::MatrixX3d v = m.vertices * R.transpose();
    for (Index k = 0; k < v.rows(); ++k) {
      if (!v.row(k).allFinite()) continue;
      lo = lo.cwiseMin(v.row(k).transpose());
      hi = hi.cwiseMax(v.row(k).transpose());
    }
    cam.push_back(std::move(v));
  }
  if (cam.empty() || lo(0) > hi(0)) return img;
  double span = std::max({hi(0) - lo(0), hi(1) - lo(1), 1e-12});
  double scale = 0.9 * std::min(view.width, view.height) / span;
  double cx = 0.5 * (lo(0) + hi(0)), cy = 0.5 * (lo(1) + hi(1));
  auto sx = [&](double x) { return 0.5 * view.width + scale * (x - cx); };
  auto sy = [&](double y) { return 0.5 * view.height - scale * (y - cy); };

  std::vector<double> depth(std::size_t(view.width * view.height), -std::numeric_limits<double>::infinity());
  for (std::size_t mi = 0; mi < meshes.size(); ++mi) {
    const auto& mesh = meshes[mi];
    const auto& v = cam[mi];
    for (Index f = 0; f < mesh.face_count(); ++f) {
      int ia = mesh.faces(f, 0), ib = mesh.faces(f, 1), ic = mesh.faces(f, 2);
      Eigen::Vector3d A = v.row(ia), B = v.row(ib), C = v.row(ic);
      if (!A.allFinite() || !B.allFinite() || !C.allFinite()) continue;
      Eigen::Vector3d n = (B - A).cross(C - A);
      double nn = n.norm();
      double shade = nn > 0 ? 0.35 + 0.65 * std::abs(n(2)) / nn : 0.35;
      double ax = sx(A(0)), ay = sy(A(1)), bx = sx(B(0)), by = sy(B(1)), cxp = sx(C(0)), cyp = sy(C(1));
      double area = (bx - ax) * (cyp - ay) - (cxp - ax) * (by - ay);
      if (std::abs(area) < 1e-12) continue;
      int x0 = std::max(0, int(std::floor(std::min({ax, bx, cxp}))));
      int x1 = std::min(view.width - 1, int(std::ceil(std::max({ax, bx, cxp}))));
      int y0 = std::max(0, int(std::floor(std::min({ay, by, cyp}))));
      int y1 = std::min(view.height - 1, int(std::ceil(std::max({ay, by, cyp}))));
      const auto &ca = mesh.colors[std::size_t(ia)], &cb = mesh.colors[std::size_t(ib)],
                 &cc = mesh.colors[std::size_t(ic)];
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
          double px = x + 0.5, py = y + 0.5;
          double w0 = ((bx - px) * (cyp - py) - (cxp - px) * (by - py)) / area;
          double w1 = ((cxp - px) * (ay - py) - (ax - px) * (cyp - py)) / area;
          double w2 = 1.0 - w0 - w1;
          if (w0 < 0 || w1 < 0 || w2 < 0) continue;
          double z = w0 * A(2) + w1 * B(2) + w2 * C(2);
          double& d = depth[std::size_t(y * view.width + x)];
          if (z <= d) continue;
          d = z;
          std::array<std::uint8_t, 3> c;
          for (int k = 0; k < 3; ++k)
            c[std::size_t(k)] = std::uint8_t(std::lround(shade * (w0 * ca[std::size_t(k)] + w1 * cb[std::size_t(k)] +
                                                                    w2 * cc[std::size_t(k)])));
          set(img, x, y, c);
        }
    }
  }
  return img;
}

Image render_curves(const std::vector<Polyline>& curves, int width, int height) {
  Image img = blank(width, height, {255, 255, 255});
  double lox = 1e300, hix = -1e300, loy = 1e300, hiy = -1e300;
  for (const auto& c : curves)
    for (cplx p : c.points) {
      if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) continue;
      lox = std::min(lox, p.real());
      hix = std::max(hix, p.real());
      loy = std::min(loy, p.imag());
      hiy = std::max(hiy, p.imag());
    }
  if (lox > hix) return img;
  lox = std::min(lox, 0.0);
  hix = std::max(hix, 0.0);
  loy = std::min(loy, 0.0);
  hiy = std::max(hiy, 0.0);
  double span = std::max({hix - lox, hiy - loy, 1e-12});
  double scale = 0.9 * std::min(width, height) / span;
  double cx = 0.5 * (lox + hix), cy = 0.5 * (loy + hiy);
  auto sx = [&](double x) { return 0.5 * width + scale * (x - cx); };
  auto sy = [&](double y) { return 0.5 * height - scale * (y - cy); };

  const std::array<std::uint8_t, 3> grey{170, 170, 170};
  int ox = int(std::lround(sx(0.0))), oy = int(std::lround(sy(0.0)));
  for (int x = 0; x < width; ++x) set(img, x, oy, grey);
  for (int y = 0; y < height; ++y) set(img, ox, y, grey);

  auto dot = [&](double x, double y, std::array<std::uint8_t, 3> c) {
    int xi = int(std::lround(x)), yi = int(std::lround(y));
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (dx * dx + dy * dy <= 1) set(img, xi + dx, yi + dy, c);
  };
  for (const auto& c : curves)
    for (std::size_t k = 0; k + 1 < c.points.size(); ++k) {
      double x0 = sx(c.points[k].real()), y0 = sy(c.points[k].imag());
      double x1 = sx(c.points[k + 1].real()), y1 = sy(c.points[k + 1].imag());
      if (!std::isfinite(x0 + y0 + x1 + y1)) continue;
      int steps = std::max(1, int(std::ceil(2.0 * std::hypot(x1 - x0, y1 - y0))));
      steps = std::min(steps, 100000);
      for (int s = 0; s <= steps; ++s) {
        double t = double(s) / steps;
        dot(x0 + t * (x1 - x0), y0 + t * (y1 - y0), c.color);
      }
    }
  return img;
}

void write_png(const std::string& path, const Image& image) {
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw Error(ErrorCode::Io, "cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::Io, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::Io, "libpng write failed for " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, png_uint_32(image.width), png_uint_32(image.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y)
    png_write_row(png, const_cast<png_bytep>(&image.rgb[std::size_t(3 * y * image.width)]));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace soliton
