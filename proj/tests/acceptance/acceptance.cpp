// Acceptance checks, one line per criterion. Usage: soliton_acceptance [n]
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "soliton/affine.hpp"
#include "soliton/curves.hpp"
#include "soliton/errors.hpp"
#include "soliton/groups.hpp"
#include "soliton/profile.hpp"
#include "soliton/verify.hpp"

using namespace soliton;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::vector<std::string> notes;

  void note(const std::string& what, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", value);
    notes.push_back(what + " = " + buf);
  }
  void count(const std::string& what, std::size_t n) { notes.push_back(what + " = " + std::to_string(n)); }
  void text(const std::string& what) { notes.push_back(what); }
};

constexpr FamilyTag kAll[] = {FamilyTag::A_plane,         FamilyTag::B_lawlor_line,   FamilyTag::C_lawlor_lawlor,
                              FamilyTag::D_line_shrinker, FamilyTag::E_expander_line, FamilyTag::F_expander_shrinker};
constexpr GroupKind kGroups[] = {GroupKind::SpecialOrthogonal, GroupKind::MaximalTorus};

ProfileSurface family(FamilyTag tag) { return make_family(tag, FamilyParams{}); }

Outcome lawlor_oracle() {
  Outcome o;
  const double S = lawlor_arc_length(0.9 * pi / 4, 3, 1.0);
  auto c = integrate_curve_ode(0.0, 3, 1.0, I, {-S, S}, 1e-12, 2001);
  double worst = 0.0;
  for (Index i = 0; i < c.size(); ++i)
    worst = std::max(worst, std::abs(c.points(i) - eval_lawlor(std::arg(c.points(i)), 3, 1.0)));
  o.note("max |gamma - closed form|", worst);
  o.note("polar extent", std::abs(std::arg(c.points(0))));
  o.pass = worst < 1e-8;
  return o;
}

std::vector<std::pair<std::string, SampledCurve>> generated_curves() {
  std::vector<std::pair<std::string, SampledCurve>> out;
  out.emplace_back("lawlor", make_lawlor(3, 1.0, 0.0));
  for (double a : {0.5, 1.0, 2.0})
    for (double alpha : {0.3, 0.7, 1.1})
      out.emplace_back("expander a=" + std::to_string(a) + " alpha=" + std::to_string(alpha),
                       find_expander_profile(a, alpha, 3));
  out.emplace_back("shrinker (1,3)", find_shrinker_profile(1.0, 1, 3, 3));
  for (auto tag : kAll) {
    auto s = family(tag);
    out.emplace_back(std::string("family ") + to_string(tag) + " gamma", s.gamma);
    out.emplace_back(std::string("family ") + to_string(tag) + " xi", s.xi);
  }
  return out;
}

Outcome first_integral() {
  Outcome o;
  double minus = 0.0, plus = 0.0;
  std::string worst;
  for (const auto& [name, c] : generated_curves()) {
    double d = first_integral_deviation(c, -1.0);
    if (d > minus) {
      minus = d;
      worst = name;
    }
    plus = std::max(plus, first_integral_deviation(c, 1.0));
  }
  o.note("max deviation with -a beta", minus);
  o.text("worst curve: " + worst);
  o.note("max deviation with +a beta", plus);
  o.pass = minus < 1e-6;
  return o;
}

Outcome expander_range() {
  Outcome o;
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0})
    for (double alpha : {0.3, 0.7, 1.1}) {
      auto e = find_expander_profile(a, alpha, 3);
      worst = std::max(worst, std::abs(beta_range(e) - (pi - 2 * alpha) / a));
    }
  o.note("max |range(beta) - (pi - 2 alpha)/a|", worst);
  o.pass = worst < 1e-4;
  return o;
}

Outcome lagrangian() {
  Outcome o;
  double worst = 0.0;
  for (auto tag : kAll) worst = std::max(worst, check_lagrangian(family(tag)));
  o.note("max omega_0 pullback", worst);
  o.pass = worst < 1e-8;
  return o;
}

Outcome profile_equations() {
  Outcome o;
  double sl = 0.0, tr = 0.0;
  for (auto tag : {FamilyTag::B_lawlor_line, FamilyTag::C_lawlor_lawlor})
    sl = std::max(sl, profile_equation_constant(family(tag), ProfileEquation::SpecialLagrangian).deviation);
  for (auto tag : {FamilyTag::D_line_shrinker, FamilyTag::E_expander_line, FamilyTag::F_expander_shrinker})
    tr = std::max(tr, profile_equation_constant(family(tag), ProfileEquation::Translator).deviation);
  o.note("special Lagrangian deviation (b, c)", sl);
  o.note("translator deviation (d, e, f)", tr);
  o.pass = sl < 1e-6 && tr < 1e-6;
  return o;
}

Outcome exactness() {
  Outcome o;
  double worst = 0.0;
  for (auto tag : kAll)
    if (tag != FamilyTag::A_plane) worst = std::max(worst, check_exactness(family(tag), 1e-3));
  o.note("max |F*lambda - d psi|", worst);
  o.pass = worst < 1e-6;
  return o;
}

Outcome angle_relation() {
  Outcome o;
  double worst = 0.0;
  std::size_t total = 0;
  for (auto tag : {FamilyTag::B_lawlor_line, FamilyTag::C_lawlor_lawlor, FamilyTag::E_expander_line}) {
    auto s = family(tag);
    for (auto kind : kGroups) {
      auto g = GroupActionSpec::make(kind, 3);
      auto els = sample_group(g, 8, 11);
      auto samples = random_relation_samples(s, els.size(), 200, 5);
      total += samples.size();
      worst = std::max(worst, check_angle_relation(s, g, els, samples));
      worst = std::max(worst, check_angle_relation(s, g, els, samples, FrameMode::FiniteDifference));
    }
  }
  o.note("max mod-pi deviation", worst);
  o.count("samples per (family, group)", total / 6);
  o.pass = worst < 1e-6 && total >= 600;
  return o;
}

Outcome translator_identity() {
  Outcome o;
  double worst = 0.0;
  for (auto tag : {FamilyTag::D_line_shrinker, FamilyTag::E_expander_line, FamilyTag::F_expander_shrinker})
    for (auto kind : kGroups) {
      auto g = GroupActionSpec::make(kind, 3);
      worst = std::max(worst, check_translator_identity(lift_orbit(family(tag), g, sample_group(g, 6, 3))).deviation);
    }
  auto g = GroupActionSpec::make(GroupKind::SpecialOrthogonal, 3);
  auto e = almost_calibrated_check(lift_orbit(family(FamilyTag::E_expander_line), g, sample_group(g, 4, 3)));
  FamilyParams p;
  p.periods = 3;
  auto d = almost_calibrated_check(lift_orbit(make_family(FamilyTag::D_line_shrinker, p), g, sample_group(g, 4, 3)));
  o.note("max deviation of theta + Im F_m", worst);
  o.note("theta range (e)", e.theta_range);
  o.note("theta range (d), 3 periods", d.theta_range);
  o.pass = worst < 1e-6 && e.almost_calibrated && !d.almost_calibrated;
  return o;
}

Outcome moment_map() {
  Outcome o;
  double worst = 0.0;
  for (auto tag : kAll)
    for (auto kind : kGroups) {
      auto g = GroupActionSpec::make(kind, 3);
      worst = std::max(worst, lift_orbit(family(tag), g, sample_group(g, 6, 9)).moment_residual);
    }
  o.note("max |mu(z')|", worst);
  o.pass = worst < 1e-10;
  return o;
}

Outcome embeddedness() {
  Outcome o;
  FamilyParams p;
  p.nx = p.ny = 400;
  auto g = GroupActionSpec::make(GroupKind::SpecialOrthogonal, 3);
  auto c = self_intersection_scan(cyclic_orbit(make_family(FamilyTag::C_lawlor_lawlor, p), g));
  ScanOptions opts;
  opts.identification = Identification::ReflectY;
  auto d = self_intersection_scan(cyclic_orbit(make_family(FamilyTag::D_line_shrinker, p), 2), opts);
  o.count("(c) collisions", c.pairs.size());
  o.count("(c) candidates refined", c.refined);
  o.count("(d) collisions", d.pairs.size());
  o.count("(d) candidates refined", d.refined);
  o.pass = c.empty() && d.empty();
  return o;
}

Outcome affine_suite() {
  Outcome o;
  auto batch = affine_batch(10000, 7);
  auto fiber = sample_fiber(-0.5, -0.5, 0.3);
  auto fd = check_fiber_translator(fiber);
  o.note("poisson brackets", batch.bracket);
  o.note("det M matrix vs closed form, relative", batch.det_relative_error);
  o.note("det M matrix vs closed form without 1/(8i), relative", batch.det_expanded_error);
  o.note("closed-form arg det M + Im z3 + pi/2", batch.closed_form_angle);
  o.note("finite-difference fiber angle vs -pi/2", fd.deviation);
  o.note("finite-difference fiber constant mod pi", fd.constant);
  o.note("finite-difference fiber spread mod pi", fd.spread);
  o.note("invariance", batch.invariance);
  o.pass = batch.bracket < 1e-10 && batch.det_relative_error < 1e-10 && batch.closed_form_angle < 1e-12 &&
           fd.deviation < 1e-5 && batch.invariance < 1e-12;
  return o;
}

Outcome figures() {
  Outcome o;
  fs::path dir = fs::path(SOLITON_TEST_TMP) / "plot";
  fs::remove_all(dir);
  std::ostringstream out, err;
  int code = cli::run({"soliton_acceptance", "-o", dir.string(), "plot"}, out, err);
  o.count("plot exit code", std::size_t(code));
  bool ok = code == 0;
  const char* expected[] = {"fig_d.ply", "fig_d1.png", "fig_d2.png", "fig_b.ply", "fig_b.png", "fig_e.ply",
                            "fig_e.png", "fig_c.ply", "fig_c.png", "fig_curves_shrinker.png",
                            "fig_curves_expander.png", "fig_curves_lawlor.png"};
  for (const char* name : expected) {
    fs::path p = dir / name;
    if (!fs::exists(p) || fs::file_size(p) == 0) {
      o.text(std::string("missing or empty: ") + name);
      ok = false;
    }
  }
  const std::string want = "element vertex " + std::to_string(200 * 200);
  for (const char* name : {"fig_d.ply", "fig_b.ply", "fig_e.ply", "fig_c.ply"}) {
    std::ifstream in(dir / name);
    std::string line;
    bool found = false;
    while (std::getline(in, line) && line != "end_header")
      if (line == want) found = true;
    if (!found) {
      o.text(std::string("vertex count mismatch in ") + name);
      ok = false;
    }
  }
  o.pass = ok;
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"Lawlor curve matches the closed form", lawlor_oracle},
      {"first integral arg(gamma') + (m-2) arg(gamma) - a beta is constant", first_integral},
      {"expander beta range", expander_range},
      {"Lagrangian condition on families (a)-(f)", lagrangian},
      {"special Lagrangian and translator profile equations", profile_equations},
      {"exactness of the Liouville pullback", exactness},
      {"Lagrangian angle relation upstairs", angle_relation},
      {"translator identity and almost-calibrated verdicts", translator_identity},
      {"moment map membership", moment_map},
      {"self-intersection scans of (c) and (d)", embeddedness},
      {"affine suite", affine_suite},
      {"figure reproduction", figures},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc > 1) {
    which.push_back(std::atoi(argv[1]));
    if (which[0] < 1 || which[0] > int(criteria().size())) {
      std::cerr << "criterion must be 1.." << criteria().size() << '\n';
      return 2;
    }
  } else {
    for (int n = 1; n <= int(criteria().size()); ++n) which.push_back(n);
  }
  bool all = true;
  for (int n : which) {
    const auto& c = criteria()[std::size_t(n - 1)];
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.text(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << n << ". " << c.title << '\n';
    for (const auto& note : o.notes) std::cout << "       " << note << '\n';
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
