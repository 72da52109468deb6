#include "soliton/io.hpp"

#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "soliton/errors.hpp"

namespace soliton {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::array<std::uint8_t, 3> hue_color(double hue) {
  double h = std::fmod(hue, 2.0 * pi);
  if (h < 0) h += 2.0 * pi;
  double s = h / (pi / 3.0);
  int sector = std::min(5, int(s));
  double f = s - sector;
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = 1; g = f; break;
    case 1: r = 1 - f; g = 1; break;
    case 2: g = 1; b = f; break;
    case 3: g = 1 - f; b = 1; break;
    case 4: r = f; b = 1; break;
    default: r = 1; b = 1 - f; break;
  }
  auto q = [](double x) { return std::uint8_t(std::lround(255.0 * std::clamp(x, 0.0, 1.0))); };
  return {q(r), q(g), q(b)};
}

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

template <typename T>
void put(std::ofstream& out, T v) {
  // PLY binary_little_endian; hosts here are little endian
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

}  // namespace

std::string curve_spec_json(const CurveSpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  j["m"] = spec.m;
  j["a"] = spec.a;
  j["phase"] = spec.phase;
  j["scale"] = spec.scale;
  if (spec.alpha) j["alpha"] = *spec.alpha;
  if (spec.winding) j["winding"] = {spec.winding->p, spec.winding->q};
  return j.dump(2);
}

CurveSpec curve_spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  CurveSpec s;
  try {
    s.kind = curve_kind_from_string(j.at("kind").get<std::string>());
    s.m = j.value("m", 3);
    s.a = j.value("a", 0.0);
    s.phase = j.value("phase", 0.0);
    s.scale = j.value("scale", 1.0);
    if (j.contains("alpha")) s.alpha = j["alpha"].get<double>();
    if (j.contains("winding")) s.winding = Winding{j["winding"].at(0).get<int>(), j["winding"].at(1).get<int>()};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  s.validate();
  return s;
}

void write_curve_csv(const std::string& path, const SampledCurve& c) {
  auto out = open_out(path);
  out << "s,x,y,tangent_angle,polar_angle,beta,beta_tilde\n";
  for (Index i = 0; i < c.size(); ++i)
    out << format_double(c.params(i)) << ',' << format_double(c.points(i).real()) << ','
        << format_double(c.points(i).imag()) << ',' << format_double(c.tangent_angle(i)) << ','
        << format_double(c.polar_angle(i)) << ',' << format_double(c.beta(i)) << ','
        << format_double(c.beta_tilde(i)) << '\n';
  finish(out, path);
}

void write_surface_csv(const std::string& path, const ProfileSurface& s) {
  auto out = open_out(path);
  out << "i,j,x,y,re_z1,im_z1,re_z2,im_z2,angle,arg_z1,psi\n";
  for (Index j = 0; j < s.cols(); ++j)
    for (Index i = 0; i < s.rows(); ++i)
      out << i << ',' << j << ',' << format_double(s.x(i)) << ',' << format_double(s.y(j)) << ','
          << format_double(s.z1(i, j).real()) << ',' << format_double(s.z1(i, j).imag()) << ','
          << format_double(s.z2(i, j).real()) << ',' << format_double(s.z2(i, j).imag()) << ','
          << format_double(s.angle(i, j)) << ',' << format_double(s.arg_z1(i, j)) << ','
          << format_double(s.primitive(i, j)) << '\n';
  finish(out, path);
}

Mesh grid_mesh(const Eigen::MatrixXcd& points, Index rows, Index cols, const Eigen::VectorXd& scalar,
               const Projection& projection) {
  if (points.cols() != rows * cols || scalar.size() != rows * cols)
    throw Error(ErrorCode::Precondition, "grid size mismatch");
  if (rows < 2 || cols < 2) throw Error(ErrorCode::Precondition, "mesh grid needs at least 2 x 2 points");
  for (int a : projection.axes)
    if (a < 0 || a >= 2 * points.rows()) throw Error(ErrorCode::Precondition, "projection axis out of range");
  Mesh mesh;
  const Index n = rows * cols;
  mesh.vertices.resize(n, 3);
  mesh.scalar = scalar;
  mesh.colors.resize(std::size_t(n));
  for (Index v = 0; v < n; ++v) {
    for (int d = 0; d < 3; ++d) {
      int a = projection.axes[std::size_t(d)];
      cplx w = points(a / 2, v);
      mesh.vertices(v, d) = a % 2 == 0 ? w.real() : w.imag();
    }
    mesh.colors[std::size_t(v)] = hue_color(scalar(v));
  }
  mesh.faces.resize(2 * (rows - 1) * (cols - 1), 3);
  Index f = 0;
  for (Index j = 0; j + 1 < cols; ++j)
    for (Index i = 0; i + 1 < rows; ++i) {
      int v00 = int(i + rows * j), v10 = int(i + 1 + rows * j);
      int v01 = int(i + rows * (j + 1)), v11 = int(i + 1 + rows * (j + 1));
      mesh.faces.row(f++) << v00, v10, v11;
      mesh.faces.row(f++) << v00, v11, v01;
    }
  return mesh;
}

Mesh surface_mesh(const ProfileSurface& s, const Projection& projection) {
  const Index rows = s.rows(), cols = s.cols();
  Eigen::MatrixXcd pts(2, rows * cols);
  Eigen::VectorXd arg(rows * cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      pts(0, i + rows * j) = s.z1(i, j);
      pts(1, i + rows * j) = s.z2(i, j);
      arg(i + rows * j) = std::arg(s.z1(i, j));
    }
  return grid_mesh(pts, rows, cols, arg, projection);
}

Mesh orbit_mesh(const OrbitSampleSet& orbit, std::size_t element, const Projection& projection) {
  const auto& pts = orbit.points.at(element);
  Eigen::VectorXd arg(pts.cols());
  for (Index v = 0; v < pts.cols(); ++v) arg(v) = std::arg(pts(0, v));
  return grid_mesh(pts, orbit.surface.rows(), orbit.surface.cols(), arg, projection);
}

void write_obj(const std::string& path, const Mesh& mesh) {
  auto out = open_out(path);
  out << "# vertices " << mesh.vertex_count() << " faces " << mesh.face_count() << '\n';
  for (Index v = 0; v < mesh.vertex_count(); ++v) {
    const auto& c = mesh.colors[std::size_t(v)];
    out << "v " << format_double(mesh.vertices(v, 0)) << ' ' << format_double(mesh.vertices(v, 1)) << ' '
        << format_double(mesh.vertices(v, 2)) << ' ' << format_double(c[0] / 255.0) << ' '
        << format_double(c[1] / 255.0) << ' ' << format_double(c[2] / 255.0) << '\n';
  }
  for (Index f = 0; f < mesh.face_count(); ++f)
    out << "f " << mesh.faces(f, 0) + 1 << ' ' << mesh.faces(f, 1) + 1 << ' ' << mesh.faces(f, 2) + 1 << '\n';
  finish(out, path);
}

void write_ply(const std::string& path, const Mesh& mesh, bool binary) {
  auto out = open_out(path, binary);
  out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n"
      << "element vertex " << mesh.vertex_count() << '\n'
      << "property double x\nproperty double y\nproperty double z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "property double " << mesh.scalar_name << '\n'
      << "element face " << mesh.face_count() << '\n'
      << "property list uchar int vertex_indices\nend_header\n";
  for (Index v = 0; v < mesh.vertex_count(); ++v) {
    const auto& c = mesh.colors[std::size_t(v)];
    if (binary) {
      for (int d = 0; d < 3; ++d) put(out, mesh.vertices(v, d));
      for (auto ch : c) put(out, ch);
      put(out, mesh.scalar(v));
    } else {
      out << format_double(mesh.vertices(v, 0)) << ' ' << format_double(mesh.vertices(v, 1)) << ' '
          << format_double(mesh.vertices(v, 2)) << ' ' << int(c[0]) << ' ' << int(c[1]) << ' ' << int(c[2])
          << ' ' << format_double(mesh.scalar(v)) << '\n';
    }
  }
  for (Index f = 0; f < mesh.face_count(); ++f) {
    if (binary) {
      put(out, std::uint8_t(3));
      for (int d = 0; d < 3; ++d) put(out, std::int32_t(mesh.faces(f, d)));
    } else {
      out << "3 " << mesh.faces(f, 0) << ' ' << mesh.faces(f, 1) << ' ' << mesh.faces(f, 2) << '\n';
    }
  }
  finish(out, path);
}

void write_point_cloud_ply(const std::string& path, const Eigen::MatrixX3d& points, const Eigen::VectorXd& scalar,
                           const std::string& scalar_name, bool binary) {
  if (scalar.size() != points.rows()) throw Error(ErrorCode::Precondition, "scalar size mismatch");
  auto out = open_out(path, binary);
  out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n"
      << "element vertex " << points.rows() << '\n'
      << "property double x\nproperty double y\nproperty double z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "property double " << scalar_name << "\nend_header\n";
  for (Index v = 0; v < points.rows(); ++v) {
    auto c = hue_color(scalar(v));
    if (binary) {
      for (int d = 0; d < 3; ++d) put(out, points(v, d));
      for (auto ch : c) put(out, ch);
      put(out, scalar(v));
    } else {
      out << format_double(points(v, 0)) << ' ' << format_double(points(v, 1)) << ' ' << format_double(points(v, 2))
          << ' ' << int(c[0]) << ' ' << int(c[1]) << ' ' << int(c[2]) << ' ' << format_double(scalar(v)) << '\n';
    }
  }
  finish(out, path);
}

void write_fiber_csv(const std::string& path, const AffineFiber& f) {
  auto out = open_out(path);
  out << "r1,phi1,phi2,re_z1,im_z1,re_z2,im_z2,re_z3,im_z3,theta\n";
  for (std::size_t n = 0; n < f.samples.size(); ++n) {
    const auto& z = f.samples[n];
    for (int d = 0; d < 3; ++d) out << format_double(f.base_grid(Index(n), d)) << ',';
    for (int d = 0; d < 3; ++d) out << format_double(z(d).real()) << ',' << format_double(z(d).imag()) << ',';
    out << format_double(f.angle[n]) << '\n';
  }
  finish(out, path);
}

void write_fiber_ply(const std::string& path, const AffineFiber& f, bool binary) {
  Eigen::MatrixX3d pts(Index(f.samples.size()), 3);
  Eigen::VectorXd theta(Index(f.samples.size()));
  for (std::size_t n = 0; n < f.samples.size(); ++n) {
    const auto& z = f.samples[n];
    pts.row(Index(n)) << z(0).real(), z(1).real(), z(2).imag();
    theta(Index(n)) = f.angle[n];
  }
  write_point_cloud_ply(path, pts, theta, "theta", binary);
}

void write_orbit_csv(const std::string& path, const OrbitSampleSet& orbit) {
  auto out = open_out(path);
  const int m = orbit.group.m;
  out << "element,i,j";
  for (int k = 1; k <= m; ++k) out << ",re_z" << k << ",im_z" << k;
  out << '\n';
  for (std::size_t e = 0; e < orbit.elements.size(); ++e)
    for (Index j = 0; j < orbit.surface.cols(); ++j)
      for (Index i = 0; i < orbit.surface.rows(); ++i) {
        Eigen::VectorXcd z = orbit.point(e, i, j);
        out << e << ',' << i << ',' << j;
        for (int k = 0; k < m; ++k) out << ',' << format_double(z(k).real()) << ',' << format_double(z(k).imag());
        out << '\n';
      }
  finish(out, path);
}

std::string checks_json(const std::vector<CheckResult>& checks, const std::map<std::string, double>& info) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"check_name", c.check_name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    all = all && c.pass;
  }
  json j{{"checks", arr}, {"all_pass", all}};
  if (!info.empty()) j["info"] = info;
  return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

}  // namespace soliton
