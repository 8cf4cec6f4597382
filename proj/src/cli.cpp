#include "gearforge/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "gearforge/acircular.hpp"
#include "gearforge/alien.hpp"
#include "gearforge/meshcheck.hpp"
#include "gearforge/solidify.hpp"
#include "gearforge/spec.hpp"
#include "gearforge/toothing.hpp"
#include "gearforge/trochoid.hpp"

namespace gearforge {
namespace {

constexpr double kLayoutSpacing = 5.0;  // mm between laid out entities
constexpr std::size_t kPitchSamples = 4096;

struct Options {
  std::string spec;
  std::string svg;
  std::string stl;
  std::string report;
  int steps = 360;
  std::optional<double> penetration_tol;
  std::optional<double> gap_tol;
};

// Module error with the offending entity named.
class EntityError : public GearError {
 public:
  EntityError(const Entity& e, const std::string& what)
      : GearError(e.kind + " " + e.name + ": " + what) {}
};

template <typename F>
auto for_entity(const Entity& e, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const EntityError&) {
    throw;
  } catch (const SpecError&) {
    throw;
  } catch (const GearError& err) {
    throw EntityError(e, err.what());
  }
}

double number_or(const Entity& e, std::string_view key, double fallback) {
  const Attribute* a = e.find(key);
  return a ? a->value.number : fallback;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// ------------------------------------------------------------- builders

struct Acircular {
  PitchPair pitch;
  std::optional<CutPair> gears;  // present when the document gives teeth
  double module = 0.0;
};

double acircular_module(const Entity& e) {
  return e.find("teeth") ? number_or(e, "module", 1.0) : 0.0;
}

PitchPair acircular_pitch(const Entity& e) {
  if (!e.find("radius")) {
    const double amp = number_or(e, "law_amplitude", 0.0);
    const double k = number_or(e, "law_lobes", 1);
    const auto law =
        MotionLaw::sample([&](double t) { return t + amp * std::sin(k * t) / k; }, kPitchSamples);
    return pitch_from_motion(law, number_or(e, "center_distance", 1.0));
  }
  const double r0 = number_or(e, "radius", 1.0);
  const double amp = number_or(e, "amplitude", 0.0);
  const double lobes = number_or(e, "lobes", 1);
  auto r1 = PolarCurve::sample([&](double t) { return r0 + amp * std::cos(lobes * t); },
                               kPitchSamples);
  // Tooth count fixes the pitch perimeter.
  if (e.find("teeth"))
    r1 = r1.scaled(number_or(e, "teeth", 0) * kPi * acircular_module(e) / r1.perimeter());
  const int p = static_cast<int>(number_or(e, "turns_driving", 1));
  const int q = static_cast<int>(number_or(e, "turns_driven", 1));
  return driven_motion(r1, solve_center_distance(r1, p, q));
}

Acircular build_acircular(const Entity& e) {
  Acircular out{acircular_pitch(e), std::nullopt, acircular_module(e)};
  if (e.find("teeth")) {
    RackSpec rack;
    rack.module = out.module;
    out.gears = cut_pitch_pair(out.pitch, rack);
  }
  return out;
}

// Smooth pitch curves placed the same way as cut gears.
std::pair<ClosedPolygon, ClosedPolygon> placed_pitch_rings(const PitchPair& pitch) {
  Ring driver;
  for (const auto& p : pitch.r1.to_ring()) driver.emplace_back(p.x(), -p.y());
  const ClosedPolygon driven = transformed(
      make_polygon(pitch.r2.to_ring()),
      RigidPose{kPi, Point2::Zero(), Point2(pitch.center_distance, 0.0)});
  return {make_polygon(std::move(driver)), driven};
}

GearProfile build_gear(const Entity& gear) {
  return for_entity(gear, [&] { return make_spur_profile(gear_spec_of(gear), profile_options_of(gear)); });
}

GearAssembly build_pair(const Entity& pair, const TrainSpec& spec) {
  const Entity& drive = *spec.find(pair.find("drive")->value.text);
  const Entity& driven = *spec.find(pair.find("driven")->value.text);
  return for_entity(pair, [&] {
    GearAssembly out = assemble_pair(gear_spec_of(drive), gear_spec_of(driven));
    out.gear1 = build_gear(drive);
    out.gear2 = build_gear(driven);
    if (const Attribute* a = pair.find("center_distance")) out.center_distance = a->value.number;
    return out;
  });
}

struct Alien {
  ClosedPolygon s1, s2;
  double center_distance = 0.0;
  double ratio = 1.0;
};

Alien build_alien(const Entity& e, const TrainSpec& spec) {
  Alien out;
  out.center_distance = number_or(e, "center_distance", 1.0);
  out.ratio = number_or(e, "ratio", 1.0);
  if (const Attribute* d = e.find("driver"))
    out.s1 = build_gear(*spec.find(d->value.text)).boundary;
  else
    out.s1 = make_polygon(circle_ring(Point2::Zero(), number_or(e, "disk_radius", 1.0), 256));
  CarveOptions options;
  options.n_samples = static_cast<int>(number_or(e, "samples", kDefaultAlienPoses));
  out.s2 = for_entity(e, [&] {
    return carve_conjugate(out.s1, Point2::Zero(), Point2(out.center_distance, 0.0), out.ratio,
                           options);
  });
  return out;
}

ClosedPolygon rack_band(const RackSpec& rack) {
  const Polyline profile = make_rack_profile(rack);
  const auto& pts = profile.points();
  Ring ring(pts.begin(), pts.end());
  const double floor = -(rack.dedendum_coef + 1.0) * rack.module;
  ring.emplace_back(pts.back().x(), floor);
  ring.emplace_back(pts.front().x(), floor);
  return make_polygon(std::move(ring));
}

// ---------------------------------------------------------------- gen

struct Solid {
  GearProfile profile;
  double thickness = 0.0;
  ExtrudeStyle style;
};

struct Part {
  ClosedPolygon polygon;
  RigidPose pose;  // local placement inside the entity
  SvgStyle style;
  std::optional<Solid> solid;
};

SvgStyle style_of(const Entity& e) {
  SvgStyle s;
  if (const Attribute* c = e.find("color")) s.fill = c->value.text;
  return s;
}

std::optional<Solid> solid_of(const Entity& gear, const GearProfile& profile) {
  const double t = thickness_of(gear);
  if (t <= 0.0) return std::nullopt;
  return Solid{profile, t, extrude_style_of(gear)};
}

std::vector<Part> parts_of(const Entity& e, const TrainSpec& spec) {
  std::vector<Part> parts;
  const SvgStyle style = style_of(e);
  if (e.kind == "gear") {
    const GearProfile g = build_gear(e);
    parts.push_back({g.boundary, {}, style, solid_of(e, g)});
  } else if (e.kind == "rack") {
    parts.push_back({for_entity(e, [&] { return rack_band(rack_spec_of(e)); }), {}, style, {}});
  } else if (e.kind == "pair") {
    const GearAssembly a = build_pair(e, spec);
    const Entity& drive = *spec.find(e.find("drive")->value.text);
    const Entity& driven = *spec.find(e.find("driven")->value.text);
    const RigidPose place2{a.phase2, Point2::Zero(), Point2(a.center_distance, 0.0)};
    parts.push_back({a.gear1.boundary, {}, style_of(drive), solid_of(drive, a.gear1)});
    parts.push_back({a.gear2.boundary, place2, style_of(driven), solid_of(driven, a.gear2)});
  } else if (e.kind == "acircular_pair") {
    const Acircular ac = for_entity(e, [&] { return build_acircular(e); });
    if (ac.gears) {
      parts.push_back({ac.gears->driver_placed, {}, style, {}});
      parts.push_back({ac.gears->driven_placed, {}, style, {}});
    } else {
      auto [r1, r2] = placed_pitch_rings(ac.pitch);
      parts.push_back({std::move(r1), {}, style, {}});
      parts.push_back({std::move(r2), {}, style, {}});
    }
  } else if (e.kind == "alien") {
    const Alien al = build_alien(e, spec);
    parts.push_back({al.s1, {}, style, {}});
    parts.push_back({al.s2, {}, style, {}});
  } else if (e.kind == "trochoid") {
    const double R = number_or(e, "fixed_radius", 1.0);
    const double r = number_or(e, "rolling_radius", 1.0);
    const double d = number_or(e, "arm", 0.0);
    const int n = static_cast<int>(number_or(e, "samples", 1024));
    Ring ring = for_entity(e, [&] { return epitrochoid_ring(R, r, d, n); });
    if (const Attribute* peg = e.find("peg_radius")) {
      ring.push_back(ring.front());
      const ClosedPolygon band =
          for_entity(e, [&] { return groove_band(Polyline(std::move(ring)), peg->value.number); });
      parts.push_back({band, {}, style, {}});
    } else {
      SvgStyle outline = style;
      if (!e.find("color")) outline.fill = "none";
      parts.push_back({make_polygon(std::move(ring)), {}, outline, {}});
    }
  }
  return parts;
}

// Gears that appear inside a pair or alien are drawn there, not on their own.
bool drawn_elsewhere(const Entity& gear, const TrainSpec& spec) {
  for (const auto& e : spec.entities)
    for (const auto& a : e.attributes)
      if (a.value.kind == Value::Kind::Identifier && a.value.text == gear.name &&
          (a.key == "drive" || a.key == "driven" || a.key == "driver"))
        return true;
  return false;
}

void append(SolidMesh& into, const SolidMesh& mesh, const RigidPose& pose) {
  const Eigen::Isometry2d iso = pose.isometry();
  const auto base = static_cast<std::uint32_t>(into.vertices.size());
  for (const auto& v : mesh.vertices) {
    const Point2 p = iso * Point2(v.x(), v.y());
    into.vertices.emplace_back(p.x(), p.y(), v.z());
  }
  for (const auto& t : mesh.triangles) into.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
}

int run_gen(const TrainSpec& spec, const Options& opt, std::ostream& out) {
  std::vector<SvgItem> items;
  SolidMesh merged;
  std::size_t solids = 0;
  double cursor = 0.0;
  for (const auto& e : spec.entities) {
    if (e.kind == "gear" && drawn_elsewhere(e, spec)) continue;
    const std::vector<Part> parts = parts_of(e, spec);
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    for (const auto& part : parts)
      for (const auto& p : part.polygon.outer) {
        const double x = part.pose(p).x();
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
      }
    if (parts.empty()) continue;
    const Point2 shift(cursor - xmin, 0.0);
    cursor += xmax - xmin + kLayoutSpacing;
    for (const auto& part : parts) {
      const RigidPose pose{part.pose.rotation, part.pose.pivot, part.pose.translation + shift};
      items.push_back({part.polygon, pose, part.style});
      if (part.solid && !opt.stl.empty()) {
        const SolidMesh mesh = for_entity(
            e, [&] { return extrude(part.solid->profile, part.solid->thickness, part.solid->style); });
        append(merged, mesh, pose);
        ++solids;
      }
    }
  }
  if (!opt.svg.empty()) {
    write_svg(items, opt.svg);
    out << "svg=" << opt.svg << "\nsvg_paths=" << items.size() << '\n';
  }
  if (!opt.stl.empty()) {
    if (solids == 0) throw InvalidInput("gen --stl: no gear in the document has a thickness");
    const std::size_t bytes = write_stl(merged, opt.stl);
    out << "stl=" << opt.stl << "\nstl_triangles=" << merged.triangles.size()
        << "\nstl_bytes=" << bytes << '\n';
  }
  return kExitOk;
}

// -------------------------------------------------------------- check

struct Checked {
  std::string name;
  std::string kind;
  MeshReport report;
  std::optional<double> line_of_action;
};

std::optional<Checked> check_entity(const Entity& e, const TrainSpec& spec, int steps) {
  Checked c{e.name, e.kind, {}, {}};
  if (e.kind == "pair") {
    const GearAssembly a = build_pair(e, spec);
    c.report = for_entity(e, [&] { return simulate_assembly(a, steps); });
    try {
      c.line_of_action = line_of_action_error(a, c.report);
    } catch (const InvalidInput&) {
      // nothing touched; reported as missing
    }
  } else if (e.kind == "acircular_pair") {
    const Acircular ac = for_entity(e, [&] { return build_acircular(e); });
    c.report = for_entity(e, [&] {
      if (ac.gears) {
        MeshOptions options;
        options.contact_tolerance = 0.02 * ac.module;
        return simulate_pair(ac.gears->driver_placed, ac.gears->driven_placed,
                             ac.pitch.center_distance, ac.pitch.law, steps, options);
      }
      const auto [r1, r2] = placed_pitch_rings(ac.pitch);
      return simulate_pair(r1, r2, ac.pitch.center_distance, ac.pitch.law, steps);
    });
  } else if (e.kind == "alien") {
    const Alien al = build_alien(e, spec);
    c.report = for_entity(e, [&] {
      return simulate_pair(al.s1, al.s2, al.center_distance, MotionLaw::linear(al.ratio), steps);
    });
  } else {
    return std::nullopt;
  }
  return c;
}

// One TSV for every checked entity: the per-entity report with a leading
// entity column.
void write_combined_report(const std::vector<Checked>& checked, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("check: cannot open report " + path);
  bool header = false;
  for (const auto& c : checked) {
    std::ostringstream block;
    write_report(c.report, block);
    std::istringstream lines(block.str());
    std::string line;
    std::getline(lines, line);
    if (!header) file << "entity\t" << line << '\n';
    header = true;
    while (std::getline(lines, line)) file << c.name << '\t' << line << '\n';
  }
  if (!header) {
    std::ostringstream empty;
    write_report(MeshReport{}, empty);
    file << "entity\t" << empty.str();
  }
  if (!file) throw IoError("check: failed writing report " + path);
}

int run_check(const TrainSpec& spec, const Options& opt, std::ostream& out) {
  std::vector<Checked> checked;
  for (const auto& e : spec.entities)
    if (auto c = check_entity(e, spec, opt.steps)) checked.push_back(std::move(*c));
  if (!opt.report.empty()) write_combined_report(checked, opt.report);

  bool exceeded = false;
  for (const auto& c : checked) {
    const MeshSummary s = c.report.summary();
    const bool bad = (opt.penetration_tol && s.max_penetration_depth > *opt.penetration_tol) ||
                     (opt.gap_tol && s.max_min_gap > *opt.gap_tol);
    exceeded = exceeded || bad;
    out << "entity=" << c.name << "\nkind=" << c.kind << "\nsteps=" << c.report.steps.size()
        << "\nmax_penetration_depth=" << fmt(s.max_penetration_depth)
        << "\nmax_min_gap=" << fmt(s.max_min_gap)
        << "\nmax_overlap_area=" << fmt(s.max_overlap_area)
        << "\nsteps_without_contact=" << s.steps_without_contact << '\n';
    if (c.kind == "pair")
      out << "line_of_action_error="
          << (c.line_of_action ? fmt(*c.line_of_action) : std::string("none")) << '\n';
    out << "status=" << (bad ? "exceeded" : "ok") << '\n';
  }
  out << "checked=" << checked.size() << '\n';
  return exceeded ? kExitThreshold : kExitOk;
}

// -------------------------------------------------------------- solve

void solve_entity(const Entity& e, const TrainSpec& spec, std::ostream& out) {
  auto line = [&](const char* key, double v) { out << key << '=' << fmt(v) << '\n'; };
  out << "entity=" << e.name << '\n';
  if (e.kind == "gear") {
    const GearSpec g = gear_spec_of(e);
    line("pitch_radius", g.pitch_radius());
    line("base_radius", g.base_radius());
    line("addendum_radius", g.addendum_radius());
    line("root_radius", g.root_radius());
  } else if (e.kind == "rack") {
    line("pitch", rack_spec_of(e).pitch());
  } else if (e.kind == "pair") {
    const GearAssembly a = build_pair(e, spec);
    line("a", a.center_distance);
    line("ratio", a.ratio);
  } else if (e.kind == "acircular_pair") {
    const PitchPair pitch = for_entity(e, [&] { return acircular_pitch(e); });
    line("a", pitch.center_distance);
    line("theta2_turn", pitch.law.turn_advance());
    line("r1_min", pitch.r1.min_radius());
    line("r1_max", pitch.r1.max_radius());
    line("r2_min", pitch.r2.min_radius());
    line("r2_max", pitch.r2.max_radius());
  } else if (e.kind == "alien") {
    const TurnRatio r = for_entity(e, [&] { return TurnRatio::from(number_or(e, "ratio", 1.0)); });
    line("ratio", r.value());
    out << "cycle_driving_turns=" << r.den << "\ncycle_driven_turns=" << r.num << '\n';
  } else if (e.kind == "trochoid") {
    line("period", for_entity(e, [&] {
           return epitrochoid_period(number_or(e, "fixed_radius", 1.0),
                                     number_or(e, "rolling_radius", 1.0));
         }));
  }
}

int run_solve(const TrainSpec& spec, std::ostream& out) {
  for (const auto& e : spec.entities) solve_entity(e, spec, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gear profile generation, mesh checking and pitch-curve solving", "gearforge"};
  app.require_subcommand(1, 1);
  Options opt;

  auto* gen = app.add_subcommand("gen", "write profiles to SVG and solids to STL");
  auto* check = app.add_subcommand("check", "simulate meshing and report contact quality");
  auto* solve = app.add_subcommand("solve", "print center distances and derived radii");
  for (auto* sub : {gen, check, solve})
    sub->add_option("--spec", opt.spec, "gear train document")->required();
  gen->add_option("--svg", opt.svg, "SVG output path");
  gen->add_option("--stl", opt.stl, "binary STL output path");
  check->add_option("--report", opt.report, "TSV report path");
  check->add_option("--steps", opt.steps, "rotation steps per turn")
      ->check(CLI::PositiveNumber);
  check->add_option("--penetration-tol", opt.penetration_tol, "max allowed penetration, mm")
      ->check(CLI::NonNegativeNumber);
  check->add_option("--gap-tol", opt.gap_tol, "max allowed per-step gap, mm")
      ->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }
  if (gen->parsed() && opt.svg.empty() && opt.stl.empty()) {
    err << "gearforge gen: give --svg and/or --stl\n";
    return kExitError;
  }

  try {
    const TrainSpec spec = load_spec(opt.spec);
    if (gen->parsed()) return run_gen(spec, opt, out);
    if (check->parsed()) return run_check(spec, opt, out);
    return run_solve(spec, out);
  } catch (const SpecError& e) {
    err << opt.spec << ": " << e.what() << '\n';
  } catch (const GearError& e) {
    err << "gearforge: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace gearforge
