#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <tuple>
#include <unordered_map>

#include "soliton/errors.hpp"
#include "soliton/parallel.hpp"
#include "soliton/verify.hpp"

namespace soliton {

namespace {

using Vec4 = Eigen::Vector4d;

Vec4 real4(const Eigen::Vector2cd& z) { return {z(0).real(), z(0).imag(), z(1).real(), z(1).imag()}; }

struct GridRef {
  int image;
  double i;  // fractional grid coordinates
  double j;
};

struct ScanContext {
  const std::vector<ProfileSurface>& images;
  Index rows, cols;
  int k;
  ScanOptions opts;
  double x0, dx, y0, dy;

  // cell distance between two grid locations, through the identification when it applies
  double separation(const GridRef& a, const GridRef& b) const {
    double best = 1e300;
    if (a.image == b.image) best = std::max(std::abs(a.i - b.i), std::abs(a.j - b.j));
    if (opts.identification != Identification::None) {
      GridRef c = identify(b);
      if (c.image == a.image) best = std::min(best, std::max(std::abs(a.i - c.i), std::abs(a.j - c.j)));
    }
    return best;
  }

  GridRef identify(const GridRef& r) const {
    GridRef out = r;
    out.image = (r.image + k / 2) % k;
    if (opts.identification == Identification::ReflectX) out.i = double(rows - 1) - r.i;
    if (opts.identification == Identification::ReflectY) out.j = double(cols - 1) - r.j;
    return out;
  }

  GridRef locate(int image, double x, double y) const { return {image, (x - x0) / dx, (y - y0) / dy}; }
};

struct CellKey {
  std::array<std::int64_t, 4> c;
  bool operator==(const CellKey& o) const { return c == o.c; }
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : k.c) h = (h ^ std::uint64_t(v)) * 1099511628211ull;
    return std::size_t(h);
  }
};

struct Candidate {
  Index a, b;
  double distance;
};

// Levenberg-Marquardt on F_a(x1, y1) - F_b(x2, y2) = 0
std::pair<Eigen::Vector4d, double> refine(const ProfileSurface& sa, const ProfileSurface& sb,
                                          Eigen::Vector4d u, int iterations, double target) {
  auto clamp = [&](Eigen::Vector4d v) {
    v(0) = std::clamp(v(0), sa.gamma.s_min(), sa.gamma.s_max());
    v(1) = std::clamp(v(1), sa.xi.s_min(), sa.xi.s_max());
    v(2) = std::clamp(v(2), sb.gamma.s_min(), sb.gamma.s_max());
    v(3) = std::clamp(v(3), sb.xi.s_min(), sb.xi.s_max());
    return v;
  };
  auto eval = [&](const Eigen::Vector4d& v, Eigen::Matrix4d* jac) {
    ProfilePoint pa = evaluate(sa, v(0), v(1));
    ProfilePoint pb = evaluate(sb, v(2), v(3));
    if (jac) {
      jac->col(0) = real4(pa.dx);
      jac->col(1) = real4(pa.dy);
      jac->col(2) = -real4(pb.dx);
      jac->col(3) = -real4(pb.dy);
    }
    return Vec4(real4(pa.z) - real4(pb.z));
  };
  Eigen::Matrix4d J;
  Vec4 r = eval(u, &J);
  double lambda = 1e-3;
  for (int it = 0; it < iterations && r.norm() > target; ++it) {
    Eigen::Matrix4d A = J.transpose() * J;
    Vec4 g = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 12 && !improved; ++tries) {
      Eigen::Matrix4d D = A;
      D.diagonal() += lambda * (A.diagonal().array() + 1e-12).matrix();
      Vec4 step = D.ldlt().solve(-g);
      Eigen::Vector4d trial = clamp(u + step);
      Eigen::Matrix4d Jt;
      Vec4 rt = eval(trial, &Jt);
      if (rt.norm() < r.norm()) {
        u = trial;
        r = rt;
        J = Jt;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved) break;
  }
  return {u, r.norm()};
}

}  // namespace

CollisionReport self_intersection_scan(const std::vector<ProfileSurface>& images, const ScanOptions& options) {
  if (images.empty()) throw Error(ErrorCode::Precondition, "no surfaces to scan");
  const Index rows = images[0].rows(), cols = images[0].cols();
  for (const auto& s : images)
    if (s.rows() != rows || s.cols() != cols) throw Error(ErrorCode::Precondition, "images must share a grid");
  const int k = int(images.size());
  if (options.identification != Identification::None && k % 2 != 0)
    throw Error(ErrorCode::Precondition, "reflection identification needs an even number of copies");

  const auto& g = images[0].gamma.params;
  const auto& h = images[0].xi.params;
  ScanContext ctx{images, rows, cols, k, options, g(0), (g(rows - 1) - g(0)) / double(rows - 1),
                  h(0), (h(cols - 1) - h(0)) / double(cols - 1)};

  const Index per = rows * cols;
  const Index n = per * k;
  std::vector<Vec4> pts(n);
  std::vector<double> spacing(n, 0.0);
  auto id = [&](int e, Index i, Index j) { return e * per + i + rows * j; };
  for (int e = 0; e < k; ++e)
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) pts[id(e, i, j)] = real4(images[e].point(i, j));
  Vec4 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  for (int e = 0; e < k; ++e)
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) {
        double& sp = spacing[id(e, i, j)];
        const Vec4& p = pts[id(e, i, j)];
        if (i > 0) sp = std::max(sp, (p - pts[id(e, i - 1, j)]).norm());
        if (i + 1 < rows) sp = std::max(sp, (p - pts[id(e, i + 1, j)]).norm());
        if (j > 0) sp = std::max(sp, (p - pts[id(e, i, j - 1)]).norm());
        if (j + 1 < cols) sp = std::max(sp, (p - pts[id(e, i, j + 1)]).norm());
      }

  CollisionReport report;
  report.rows = rows;
  report.cols = cols;
  report.images = k;
  report.tolerance = options.tolerance_factor * (hi - lo).norm();

  const double cell = 2.0 * *std::max_element(spacing.begin(), spacing.end());
  std::unordered_map<CellKey, std::vector<Index>, CellHash> grid;
  auto key_of = [&](const Vec4& p) {
    CellKey key;
    for (int d = 0; d < 4; ++d) key.c[d] = std::int64_t(std::floor((p(d) - lo(d)) / cell));
    return key;
  };
  for (Index a = 0; a < n; ++a) grid[key_of(pts[a])].push_back(a);

  auto ref_of = [&](Index a) {
    int e = int(a / per);
    Index r = a % per;
    return GridRef{e, double(r % rows), double(r / rows)};
  };

  // candidates, one representative per pair of 4x4 parameter blocks
  std::map<std::tuple<int, Index, Index, int, Index, Index>, Candidate> blocks;
  for (Index a = 0; a < n; ++a) {
    CellKey base = key_of(pts[a]);
    GridRef ra = ref_of(a);
    for (int c = 0; c < 81; ++c) {
      CellKey kk = base;
      int t = c;
      for (int d = 0; d < 4; ++d) {
        kk.c[d] += t % 3 - 1;
        t /= 3;
      }
      auto it = grid.find(kk);
      if (it == grid.end()) continue;
      for (Index b : it->second) {
        if (b <= a) continue;
        double dist = (pts[a] - pts[b]).norm();
        if (dist >= spacing[a] + spacing[b]) continue;
        GridRef rb = ref_of(b);
        if (ctx.separation(ra, rb) <= options.dedup_cells) continue;
        ++report.candidates;
        auto bk = std::make_tuple(ra.image, Index(ra.i) / 4, Index(ra.j) / 4, rb.image, Index(rb.i) / 4,
                                  Index(rb.j) / 4);
        auto found = blocks.find(bk);
        if (found == blocks.end() || dist < found->second.distance) blocks[bk] = {a, b, dist};
      }
    }
  }

  std::vector<Candidate> todo;
  for (const auto& kv : blocks) todo.push_back(kv.second);
  report.refined = todo.size();
  std::vector<std::optional<Collision>> found(todo.size());
  parallel_for(Index(todo.size()), [&](Index t) {
    GridRef ra = ref_of(todo[t].a), rb = ref_of(todo[t].b);
    const auto& sa = images[ra.image];
    const auto& sb = images[rb.image];
    Eigen::Vector4d u(sa.x(Index(ra.i)), sa.y(Index(ra.j)), sb.x(Index(rb.i)), sb.y(Index(rb.j)));
    auto [v, dist] = refine(sa, sb, u, options.max_iterations, 1e-3 * report.tolerance);
    if (dist >= report.tolerance) return;
    GridRef fa = ctx.locate(ra.image, v(0), v(1)), fb = ctx.locate(rb.image, v(2), v(3));
    if (ctx.separation(fa, fb) <= options.dedup_cells) return;
    Collision c{ra.image, v(0), v(1), rb.image, v(2), v(3), dist};
    if (std::tie(c.image_b, c.x_b, c.y_b) < std::tie(c.image_a, c.x_a, c.y_a)) {
      std::swap(c.image_a, c.image_b);
      std::swap(c.x_a, c.x_b);
      std::swap(c.y_a, c.y_b);
    }
    found[t] = c;
  });

  for (const auto& f : found) {
    if (!f) continue;
    bool dup = false;
    for (const auto& c : report.pairs) {
      GridRef a1 = ctx.locate(c.image_a, c.x_a, c.y_a), a2 = ctx.locate(f->image_a, f->x_a, f->y_a);
      GridRef b1 = ctx.locate(c.image_b, c.x_b, c.y_b), b2 = ctx.locate(f->image_b, f->x_b, f->y_b);
      if (ctx.separation(a1, a2) <= options.dedup_cells && ctx.separation(b1, b2) <= options.dedup_cells) {
        dup = true;
        break;
      }
    }
    if (!dup) report.pairs.push_back(*f);
  }
  std::sort(report.pairs.begin(), report.pairs.end(), [](const Collision& p, const Collision& q) {
    return std::tie(p.image_a, p.x_a, p.y_a, p.image_b, p.x_b, p.y_b) <
           std::tie(q.image_a, q.x_a, q.y_a, q.image_b, q.x_b, q.y_b);
  });
  return report;
}

}  // namespace soliton
