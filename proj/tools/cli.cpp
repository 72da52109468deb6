#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "soliton/affine.hpp"
#include "soliton/errors.hpp"
#include "soliton/groups.hpp"
#include "soliton/io.hpp"
#include "soliton/profile.hpp"
#include "soliton/render.hpp"
#include "soliton/verify.hpp"

namespace soliton::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands{"curve", "profile", "orbit", "affine", "verify", "export", "plot"};
const std::vector<std::string> kFigures{"d", "b", "e", "c", "curves"};

template <typename T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

std::vector<std::string> string_list(const json& j) {
  if (j.is_string()) return {j.get<std::string>()};
  return j.get<std::vector<std::string>>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
  static const std::vector<std::string> known{
      "command", "output_dir", "seed", "tolerances", "kind", "family", "group", "m", "alpha", "scale",
      "mu", "phase", "p", "q", "periods", "nx", "ny", "resolution", "count", "line_extent", "elements",
      "samples", "isometric", "scan", "scan_resolution", "suite", "a", "b", "c", "radial", "angular", "r1_max", "sheet",
      "batch", "export", "plot", "figures", "projection"};
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw Error(ErrorCode::Config, "unknown config key '" + item.key() + "'");

  RunConfig c;
  try {
    read(j, "command", c.command);
    read(j, "output_dir", c.output_dir);
    read(j, "seed", c.seed);
    if (j.contains("tolerances")) c.tolerances = j["tolerances"].get<std::map<std::string, double>>();
    read(j, "kind", c.kind);
    read(j, "family", c.family);
    read(j, "group", c.group);
    read(j, "m", c.m);
    read(j, "alpha", c.alpha);
    read(j, "scale", c.scale);
    read(j, "mu", c.mu);
    read(j, "phase", c.phase);
    read(j, "p", c.p);
    read(j, "q", c.q);
    if (j.contains("periods")) c.periods = j["periods"].get<int>();
    read(j, "nx", c.nx);
    read(j, "ny", c.ny);
    if (j.contains("resolution")) {
      const auto& r = j["resolution"];
      if (r.is_number_integer()) {
        c.nx = c.ny = r.get<Eigen::Index>();
      } else {
        read(r, "nx", c.nx);
        read(r, "ny", c.ny);
      }
    }
    read(j, "count", c.count);
    read(j, "line_extent", c.line_extent);
    read(j, "elements", c.elements);
    read(j, "samples", c.samples);
    read(j, "isometric", c.isometric);
    read(j, "scan", c.scan);
    read(j, "scan_resolution", c.scan_resolution);
    read(j, "suite", c.suite);
    read(j, "a", c.a);
    read(j, "b", c.b);
    read(j, "c", c.c);
    read(j, "radial", c.radial);
    read(j, "angular", c.angular);
    read(j, "r1_max", c.r1_max);
    read(j, "sheet", c.sheet);
    read(j, "batch", c.batch);
    if (j.contains("export")) c.exports = string_list(j["export"]);
    read(j, "plot", c.plot);
    if (j.contains("figures")) c.figures = string_list(j["figures"]);
    read(j, "projection", c.projection);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  for (const auto& [name, tol] : c.tolerances)
    if (!(tol > 0.0)) throw Error(ErrorCode::Config, "tolerance '" + name + "' must be positive");
  return c;
}

namespace {

struct Context {
  const RunConfig& cfg;
  std::ostream& out;

  std::string path(const std::string& name) const { return (std::filesystem::path(cfg.output_dir) / name).string(); }

  double tol(const std::string& name, double fallback) const {
    auto it = cfg.tolerances.find(name);
    return it == cfg.tolerances.end() ? fallback : it->second;
  }

  void wrote(const std::string& p) const { out << "wrote " << p << '\n'; }
};

FamilyParams family_params(const RunConfig& c) {
  FamilyParams fp;
  fp.m = c.m;
  fp.phase = c.phase;
  fp.mu = fp.mu1 = fp.mu2 = c.mu;
  fp.alpha = c.alpha;
  fp.soliton_scale = c.scale;
  fp.winding = {c.p, c.q};
  fp.periods = c.periods;
  fp.nx = c.nx;
  fp.ny = c.ny;
  fp.line_extent = c.line_extent;
  return fp;
}

SampledCurve build_curve(const RunConfig& c, CurveKind kind) {
  switch (kind) {
    case CurveKind::Line:
      return make_line(c.m, 0.0, c.phase, {-c.line_extent, c.line_extent}, c.count);
    case CurveKind::Lawlor: {
      Sampling s;
      s.count = c.count;
      return make_lawlor(c.m, c.mu, c.phase, s);
    }
    case CurveKind::Expander:
      return rotated(find_expander_profile(c.scale, c.alpha, c.m, 1e-12, full_sampling(c.count)), c.phase);
    case CurveKind::Shrinker: {
      Sampling s;
      s.count = c.count;
      s.periods = c.periods;
      return rotated(find_shrinker_profile(c.scale, c.p, c.q, c.m, 1e-10, s), c.phase);
    }
  }
  throw Error(ErrorCode::Config, "unknown curve kind");
}

Polyline polyline(const SampledCurve& curve, std::array<std::uint8_t, 3> color) {
  Polyline p;
  p.points.assign(curve.points.data(), curve.points.data() + curve.points.size());
  p.color = color;
  return p;
}

Projection projection(const RunConfig& c) { return Projection{c.projection}; }

void export_mesh(const Context& ctx, const Mesh& mesh, const std::string& stem, const std::string& format) {
  if (format == "obj") {
    write_obj(ctx.path(stem + ".obj"), mesh);
    ctx.wrote(ctx.path(stem + ".obj"));
  } else if (format == "ply" || format == "plyb") {
    std::string p = ctx.path(stem + (format == "plyb" ? ".bin.ply" : ".ply"));
    write_ply(p, mesh, format == "plyb");
    ctx.wrote(p);
  } else {
    throw Error(ErrorCode::Config, "unknown mesh format '" + format + "' (expected obj, ply, plyb or csv)");
  }
}

void export_surface(const Context& ctx, const ProfileSurface& s, const std::string& stem,
                    const std::vector<std::string>& formats) {
  Mesh mesh;
  bool have_mesh = false;
  for (const auto& f : formats) {
    if (f == "csv") {
      write_surface_csv(ctx.path(stem + ".csv"), s);
      ctx.wrote(ctx.path(stem + ".csv"));
      continue;
    }
    if (!have_mesh) {
      mesh = surface_mesh(s, projection(ctx.cfg));
      have_mesh = true;
    }
    export_mesh(ctx, mesh, stem, f);
  }
}

int cmd_curve(const Context& ctx) {
  const auto& c = ctx.cfg;
  CurveKind kind = curve_kind_from_string(c.kind);
  SampledCurve curve = build_curve(c, kind);
  std::string stem = std::string("curve_") + to_string(kind);
  write_curve_csv(ctx.path(stem + ".csv"), curve);
  ctx.wrote(ctx.path(stem + ".csv"));
  write_text(ctx.path(stem + ".json"), curve_spec_json(curve.spec) + "\n");
  ctx.wrote(ctx.path(stem + ".json"));
  if (c.plot) {
    write_png(ctx.path(stem + ".png"), render_curves({polyline(curve, {20, 60, 200})}));
    ctx.wrote(ctx.path(stem + ".png"));
  }
  ctx.out << "samples " << curve.size() << " s in [" << format_double(curve.s_min()) << ", "
          << format_double(curve.s_max()) << "]\n";
  ctx.out << "beta range " << format_double(beta_range(curve)) << '\n';
  ctx.out << "first integral spread " << format_double(first_integral_deviation(curve, 1.0)) << '\n';
  if (curve.shooting_radius > 0.0) ctx.out << "shooting radius " << format_double(curve.shooting_radius) << '\n';
  return Ok;
}

int cmd_profile(const Context& ctx) {
  const auto& c = ctx.cfg;
  FamilyTag tag = family_from_string(c.family);
  ProfileSurface s = make_family(tag, family_params(c));
  std::string stem = std::string("profile_") + to_string(tag);
  export_surface(ctx, s, stem, c.exports.empty() ? std::vector<std::string>{"obj"} : c.exports);
  if (c.plot) {
    write_png(ctx.path(stem + ".png"), render_meshes({surface_mesh(s, projection(c))}));
    ctx.wrote(ctx.path(stem + ".png"));
  }
  ctx.out << "grid " << s.rows() << " x " << s.cols() << '\n';
  ctx.out << "lagrangian residual " << format_double(check_lagrangian(s)) << '\n';
  return Ok;
}

OrbitSampleSet make_orbit(const RunConfig& c, const ProfileSurface& s) {
  auto group = GroupActionSpec::make(group_kind_from_string(c.group), c.m, c.isometric);
  return lift_orbit(s, group, sample_group(group, c.elements, c.seed));
}

int cmd_orbit(const Context& ctx) {
  const auto& c = ctx.cfg;
  FamilyTag tag = family_from_string(c.family);
  ProfileSurface s = make_family(tag, family_params(c));
  OrbitSampleSet orbit = make_orbit(c, s);
  std::string stem = std::string("orbit_") + to_string(tag) + "_" + to_string(orbit.group.kind);
  for (const auto& f : c.exports.empty() ? std::vector<std::string>{"csv"} : c.exports) {
    if (f == "csv") {
      write_orbit_csv(ctx.path(stem + ".csv"), orbit);
      ctx.wrote(ctx.path(stem + ".csv"));
      continue;
    }
    for (std::size_t e = 0; e < orbit.elements.size(); ++e)
      export_mesh(ctx, orbit_mesh(orbit, e, projection(c)), stem + "_" + std::to_string(e), f);
  }
  ctx.out << "elements " << orbit.elements.size() << " moment residual " << format_double(orbit.moment_residual)
          << '\n';
  return Ok;
}

std::vector<CheckResult> affine_checks(const Context& ctx, std::map<std::string, double>& info, bool write) {
  const auto& c = ctx.cfg;
  FiberGrid grid;
  grid.radial = c.radial;
  grid.angular = c.angular;
  grid.r1_max = c.r1_max;
  grid.sheet = c.sheet;
  AffineFiber fiber = sample_fiber(c.a, c.b, c.c, grid);
  if (write) {
    for (const auto& f : c.exports.empty() ? std::vector<std::string>{"csv", "ply"} : c.exports) {
      if (f == "csv") {
        write_fiber_csv(ctx.path("fiber.csv"), fiber);
        ctx.wrote(ctx.path("fiber.csv"));
      } else if (f == "ply" || f == "plyb") {
        std::string p = ctx.path(f == "plyb" ? "fiber.bin.ply" : "fiber.ply");
        write_fiber_ply(p, fiber, f == "plyb");
        ctx.wrote(p);
      } else {
        throw Error(ErrorCode::Config, "unknown fiber format '" + f + "' (expected csv, ply or plyb)");
      }
    }
  }
  AffineBatchReport batch = affine_batch(c.batch, c.seed);
  FiberAngleReport angle = check_fiber_translator(fiber);
  info["points"] = double(batch.points);
  info["det_M_expanded_relative_error"] = batch.det_expanded_error;
  info["det_M_matrix_angle_defect"] = batch.matrix_angle;
  info["fiber_samples"] = double(fiber.size());
  info["fiber_discarded"] = double(fiber.discarded);
  info["fiber_constant_mod_pi"] = angle.constant;
  info["fiber_spread_mod_pi"] = angle.spread;
  return {make_check("poisson_brackets", batch.bracket, ctx.tol("poisson_brackets", 1e-10)),
          make_check("det_M_closed_form", batch.det_relative_error, ctx.tol("det_M_closed_form", 1e-10)),
          make_check("closed_form_angle", batch.closed_form_angle, ctx.tol("closed_form_angle", 1e-12)),
          make_check("fiber_translator_angle", angle.deviation, ctx.tol("fiber_translator_angle", 1e-5)),
          make_check("action_invariance", batch.invariance, ctx.tol("action_invariance", 1e-12)),
          make_check("fiber_levels", fiber.level_residual, ctx.tol("fiber_levels", 1e-10))};
}

void print_checks(const Context& ctx, const std::vector<CheckResult>& checks) {
  for (const auto& ch : checks)
    ctx.out << (ch.pass ? "pass " : "FAIL ") << ch.check_name << " residual " << format_double(ch.residual)
            << " tol " << format_double(ch.tolerance) << '\n';
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& r) { return r.pass; });
}

int cmd_affine(const Context& ctx) {
  std::map<std::string, double> info;
  auto checks = affine_checks(ctx, info, true);
  write_text(ctx.path("affine_report.json"), checks_json(checks, info));
  ctx.wrote(ctx.path("affine_report.json"));
  print_checks(ctx, checks);
  return Ok;
}

std::vector<CheckResult> profile_checks(const Context& ctx, std::map<std::string, double>& info) {
  const auto& c = ctx.cfg;
  FamilyTag tag = family_from_string(c.family);
  ProfileSurface s = make_family(tag, family_params(c));
  const bool translator = is_translator_family(tag);
  std::vector<CheckResult> checks;
  checks.push_back(make_check("lagrangian", check_lagrangian(s), ctx.tol("lagrangian", 1e-8)));
  checks.push_back(make_check("first_integral_gamma", first_integral_deviation(s.gamma, 1.0),
                              ctx.tol("first_integral_gamma", 1e-6)));
  checks.push_back(make_check("first_integral_xi", first_integral_deviation(s.xi, 1.0),
                              ctx.tol("first_integral_xi", 1e-6)));
  checks.push_back(make_check("angle_formula", check_angle_formula(s), ctx.tol("angle_formula", 1e-6)));
  auto eq = profile_equation_constant(s, translator ? ProfileEquation::Translator : ProfileEquation::SpecialLagrangian);
  checks.push_back(make_check(translator ? "translator_equation" : "special_lagrangian_equation", eq.deviation,
                              ctx.tol("profile_equation", 1e-6)));
  info["profile_constant"] = eq.constant;
  checks.push_back(make_check("exactness", check_exactness(s, 1e-3), ctx.tol("exactness", 1e-6)));

  if (c.m >= 3) {
    OrbitSampleSet orbit = make_orbit(c, s);
    auto samples = random_relation_samples(s, orbit.elements.size(), c.samples, c.seed);
    checks.push_back(make_check("angle_relation",
                                check_angle_relation(s, orbit.group, orbit.elements, samples, FrameMode::Analytic),
                                ctx.tol("angle_relation", 1e-6)));
    checks.push_back(
        make_check("angle_relation_fd",
                   check_angle_relation(s, orbit.group, orbit.elements, samples, FrameMode::FiniteDifference),
                   ctx.tol("angle_relation_fd", 1e-6)));
    checks.push_back(make_check("moment_map", orbit.moment_residual, ctx.tol("moment_map", 1e-10)));
    double omega = 0.0;
    for (const auto& r : samples)
      omega = std::max(omega, immersion_sample(s, orbit.group, orbit.elements[r.element], r.x, r.y).omega_residual);
    info["lifted_omega_defect"] = omega;
    if (translator) {
      auto t = check_translator_identity(orbit);
      checks.push_back(make_check("translator_identity", t.deviation, ctx.tol("translator_identity", 1e-6)));
      info["translator_constant"] = t.constant;
      auto cal = almost_calibrated_check(orbit);
      info["theta_range"] = cal.theta_range;
      info["almost_calibrated"] = cal.almost_calibrated ? 1.0 : 0.0;
    } else {
      auto t = check_special_lagrangian_angle(orbit);
      checks.push_back(make_check("special_lagrangian_angle", t.deviation, ctx.tol("special_lagrangian_angle", 1e-6)));
      info["lagrangian_angle"] = t.constant;
    }
    if (c.scan) {
      FamilyParams fp = family_params(c);
      fp.nx = fp.ny = c.scan_resolution;
      ProfileSurface fine = make_family(tag, fp);
      ScanOptions opts;
      if (tag == FamilyTag::D_line_shrinker) opts.identification = Identification::ReflectY;
      auto report = self_intersection_scan(cyclic_orbit(fine, orbit.group), opts);
      checks.push_back(make_check("self_intersections", double(report.pairs.size()), 0.5));
      info["scan_candidates"] = double(report.candidates);
      info["scan_refined"] = double(report.refined);
    }
  }
  return checks;
}

int cmd_verify(const Context& ctx) {
  const auto& c = ctx.cfg;
  std::map<std::string, double> info;
  std::vector<CheckResult> checks;
  std::string name;
  if (c.suite == "affine") {
    checks = affine_checks(ctx, info, false);
    name = "verify_affine.json";
  } else if (c.suite == "profile") {
    checks = profile_checks(ctx, info);
    name = "verify_" + c.family + "_" + c.group + "_m" + std::to_string(c.m) + ".json";
  } else {
    throw Error(ErrorCode::Config, "unknown suite '" + c.suite + "' (expected profile or affine)");
  }
  write_text(ctx.path(name), checks_json(checks, info));
  ctx.wrote(ctx.path(name));
  print_checks(ctx, checks);
  return all_pass(checks) ? Ok : ChecksFailed;
}

int cmd_export(const Context& ctx) {
  const auto& c = ctx.cfg;
  FamilyTag tag = family_from_string(c.family);
  ProfileSurface s = make_family(tag, family_params(c));
  export_surface(ctx, s, std::string("export_") + to_string(tag),
                 c.exports.empty() ? std::vector<std::string>{"obj"} : c.exports);
  return Ok;
}

int cmd_plot(const Context& ctx) {
  const auto& c = ctx.cfg;
  std::vector<std::string> figures = c.figures.empty() ? kFigures : c.figures;
  for (const auto& f : figures) {
    if (std::find(kFigures.begin(), kFigures.end(), f) == kFigures.end())
      throw Error(ErrorCode::Config, "unknown figure '" + f + "' (expected d, b, e, c or curves)");
    if (f == "curves") {
      RunConfig cc = c;
      cc.count = std::max<Eigen::Index>(c.count, 400);
      const std::pair<CurveKind, const char*> kinds[] = {
          {CurveKind::Shrinker, "shrinker"}, {CurveKind::Expander, "expander"}, {CurveKind::Lawlor, "lawlor"}};
      for (const auto& [kind, name] : kinds) {
        SampledCurve curve = build_curve(cc, kind);
        std::string stem = std::string("fig_curves_") + name;
        write_png(ctx.path(stem + ".png"), render_curves({polyline(curve, {20, 60, 200})}));
        ctx.wrote(ctx.path(stem + ".png"));
        write_curve_csv(ctx.path(stem + ".csv"), curve);
        ctx.wrote(ctx.path(stem + ".csv"));
      }
      continue;
    }
    FamilyTag tag = family_from_string(f);
    ProfileSurface s = make_family(tag, family_params(c));
    Mesh mesh = surface_mesh(s, projection(c));
    std::string stem = "fig_" + f;
    write_ply(ctx.path(stem + ".ply"), mesh);
    ctx.wrote(ctx.path(stem + ".ply"));
    if (tag == FamilyTag::D_line_shrinker) {
      View v1, v2;
      v2.azimuth = v1.azimuth + 0.5 * pi;
      v2.elevation = 0.15;
      write_png(ctx.path(stem + "1.png"), render_meshes({mesh}, v1));
      ctx.wrote(ctx.path(stem + "1.png"));
      write_png(ctx.path(stem + "2.png"), render_meshes({mesh}, v2));
      ctx.wrote(ctx.path(stem + "2.png"));
    } else {
      write_png(ctx.path(stem + ".png"), render_meshes({mesh}));
      ctx.wrote(ctx.path(stem + ".png"));
    }
  }
  return Ok;
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.command.empty()) {
    err << "usage error: no command given (expected one of curve, profile, orbit, affine, verify, export, plot)\n";
    return Usage;
  }
  Context ctx{config, out};
  try {
    if (config.command == "curve") return cmd_curve(ctx);
    if (config.command == "profile") return cmd_profile(ctx);
    if (config.command == "orbit") return cmd_orbit(ctx);
    if (config.command == "affine") return cmd_affine(ctx);
    if (config.command == "verify") return cmd_verify(ctx);
    if (config.command == "export") return cmd_export(ctx);
    if (config.command == "plot") return cmd_plot(ctx);
    err << "usage error: unknown command '" << config.command << "'\n";
    return Usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Config ? Usage : Failure;
  }
}

namespace {

// flag values stay in holders until parsing is done, then override the config file
class Overrides {
public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& flag, T RunConfig::*field, const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *holder, help);
    apply_.push_back([=](RunConfig& c) {
      if (opt->count() > 0) c.*field = *holder;
    });
    return opt;
  }

  CLI::Option* add(CLI::App* app, const std::string& flag, std::optional<int> RunConfig::*field,
                   const std::string& help) {
    auto holder = std::make_shared<int>();
    CLI::Option* opt = app->add_option(flag, *holder, help);
    apply_.push_back([=](RunConfig& c) {
      if (opt->count() > 0) c.*field = *holder;
    });
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& flag, bool RunConfig::*field, const std::string& help) {
    CLI::Option* opt = app->add_flag(flag, help);
    apply_.push_back([=](RunConfig& c) {
      if (opt->count() > 0) c.*field = true;
    });
    return opt;
  }

  void apply(RunConfig& c) const {
    for (const auto& f : apply_) f(c);
  }

private:
  std::vector<std::function<void(RunConfig&)>> apply_;
};

void add_shape(Overrides& o, CLI::App* app) {
  o.add(app, "--m", &RunConfig::m, "ambient complex dimension");
  o.add(app, "--alpha", &RunConfig::alpha, "expander opening angle");
  o.add(app, "--scale", &RunConfig::scale, "soliton scale |a|");
  o.add(app, "--mu", &RunConfig::mu, "Lawlor neck scale");
  o.add(app, "--phase", &RunConfig::phase, "rotation of the first curve");
  o.add(app, "--p", &RunConfig::p, "shrinker winding numerator");
  o.add(app, "--q", &RunConfig::q, "shrinker winding denominator");
  o.add(app, "--periods", &RunConfig::periods, "shrinker radius periods sampled");
  o.add(app, "--line-extent", &RunConfig::line_extent, "half length of line profiles");
}

void add_family(Overrides& o, CLI::App* app) {
  o.add(app, "--family", &RunConfig::family, "example family a..f");
  o.add(app, "--nx", &RunConfig::nx, "samples along the first curve");
  o.add(app, "--ny", &RunConfig::ny, "samples along the second curve");
  o.add(app, "--projection", &RunConfig::projection, "three real axes of (Re w1, Im w1, Re w2, ...)");
  add_shape(o, app);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cohomogeneity-two Lagrangian translators and special Lagrangians", "soliton_lab"};
  app.fallthrough();
  Overrides o;
  std::string config_path;
  std::vector<std::string> tolerances;
  app.add_option("--config", config_path, "JSON run configuration");
  o.add(&app, "-o,--output-dir", &RunConfig::output_dir, "output directory");
  o.add(&app, "--seed", &RunConfig::seed, "random seed");
  app.add_option("--tol", tolerances, "check tolerance override, name=value");

  auto* curve = app.add_subcommand("curve", "sample a profile curve");
  o.add(curve, "--kind", &RunConfig::kind, "line, lawlor, shrinker or expander");
  o.add(curve, "--count", &RunConfig::count, "number of samples");
  o.flag(curve, "--plot", &RunConfig::plot, "also write a PNG");
  add_shape(o, curve);

  auto* profile = app.add_subcommand("profile", "build a profile surface");
  add_family(o, profile);
  o.add(profile, "--export", &RunConfig::exports, "obj, ply, plyb or csv");
  o.flag(profile, "--plot", &RunConfig::plot, "also write a PNG");

  auto* orbit = app.add_subcommand("orbit", "lift a profile surface along the group");
  add_family(o, orbit);
  o.add(orbit, "--group", &RunConfig::group, "so or torus");
  o.add(orbit, "--elements", &RunConfig::elements, "number of group elements");
  o.flag(orbit, "--isometric", &RunConfig::isometric, "scale the torus embedding by 1/sqrt(m-1)");
  o.add(orbit, "--export", &RunConfig::exports, "csv, obj, ply or plyb");

  auto* affine = app.add_subcommand("affine", "sample an affine fiber and check it");
  o.add(affine, "--a", &RunConfig::a, "level of mu1");
  o.add(affine, "--b", &RunConfig::b, "level of mu2");
  o.add(affine, "--c", &RunConfig::c, "level of mu3");
  o.add(affine, "--radial", &RunConfig::radial, "radial grid size");
  o.add(affine, "--angular", &RunConfig::angular, "angular grid size per angle");
  o.add(affine, "--r1-max", &RunConfig::r1_max, "largest |z1|");
  o.add(affine, "--sheet", &RunConfig::sheet, "branch of the angle");
  o.add(affine, "--batch", &RunConfig::batch, "random points for bracket and determinant checks");
  o.add(affine, "--export", &RunConfig::exports, "csv, ply or plyb");

  auto* verify = app.add_subcommand("verify", "run a verification suite and write a JSON report");
  add_family(o, verify);
  o.add(verify, "--group", &RunConfig::group, "so or torus");
  o.add(verify, "--elements", &RunConfig::elements, "number of group elements");
  o.flag(verify, "--isometric", &RunConfig::isometric, "scale the torus embedding by 1/sqrt(m-1)");
  o.add(verify, "--samples", &RunConfig::samples, "random samples for the angle relation");
  o.add(verify, "--suite", &RunConfig::suite, "profile or affine");
  o.flag(verify, "--scan", &RunConfig::scan, "include the self-intersection scan");
  o.add(verify, "--scan-resolution", &RunConfig::scan_resolution, "grid size of the scan");
  o.add(verify, "--a", &RunConfig::a, "affine level of mu1");
  o.add(verify, "--b", &RunConfig::b, "affine level of mu2");
  o.add(verify, "--c", &RunConfig::c, "affine level of mu3");
  o.add(verify, "--batch", &RunConfig::batch, "random affine points");

  auto* exp = app.add_subcommand("export", "export a profile surface");
  add_family(o, exp);
  o.add(exp, "--format", &RunConfig::exports, "obj, ply, plyb or csv");

  auto* plot = app.add_subcommand("plot", "render the example figures");
  o.add(plot, "--figure", &RunConfig::figures, "d, b, e, c or curves (default all)");
  add_family(o, plot);
  o.add(plot, "--count", &RunConfig::count, "samples per plotted curve");

  app.require_subcommand(0, 1);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("soliton_lab");
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Ok : Usage;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorCode::Config, "cannot read config " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = parse_config(ss.str());
    }
    for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    o.apply(cfg);
    for (const auto& t : tolerances) {
      auto eq = t.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::Config, "tolerance must be name=value: " + t);
      double v = 0.0;
      try {
        v = std::stod(t.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::Config, "bad tolerance value: " + t);
      }
      if (!(v > 0.0)) throw Error(ErrorCode::Config, "tolerance must be positive: " + t);
      cfg.tolerances[t.substr(0, eq)] = v;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return Usage;
  }
  if (cfg.command.empty()) {
    err << app.help();
    err << "usage error: no command given\n";
    return Usage;
  }
  return execute(cfg, out, err);
}

}  // namespace soliton::cli
