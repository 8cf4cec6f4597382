#include "gearforge/solidify.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <ostream>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "gearforge/errors.hpp"

namespace gearforge {
namespace {

constexpr double kMinTriangleArea = 1e-12;
constexpr double kWeldDistance = 1e-6;
constexpr double kFlatTurn = 1e-8;

// Drop near-duplicate and collinear vertices so cap ears keep some area.
Ring clean_ring(const Ring& ring) {
  Ring out;
  out.reserve(ring.size());
  for (const auto& p : ring)
    if (out.empty() || (out.back() - p).norm() > kWeldDistance) out.push_back(p);
  while (out.size() > 3 && (out.front() - out.back()).norm() <= kWeldDistance) out.pop_back();
  return remove_collinear(out, kFlatTurn);
}

double slice_angle(const ExtrudeStyle& style, double z, double thickness) {
  switch (style.kind) {
    case ExtrudeStyle::Kind::Helical:
      return style.twist * z / thickness;
    case ExtrudeStyle::Kind::Herringbone:
      return style.twist * std::min(z, thickness - z) / thickness;
    default:
      return 0.0;
  }
}

double slice_scale(const ExtrudeStyle& style, double z) {
  if (style.kind != ExtrudeStyle::Kind::Bevel) return 1.0;
  return (style.apex_height - z) / style.apex_height;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f32(std::ostream& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("read_stl: truncated file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

float get_f32(std::istream& in) { return std::bit_cast<float>(get_u32(in)); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

}  // namespace

int slice_count(const ExtrudeStyle& style) {
  switch (style.kind) {
    case ExtrudeStyle::Kind::Spur:
      return 1;
    case ExtrudeStyle::Kind::Bevel:
      return 2;
    case ExtrudeStyle::Kind::Helical:
    case ExtrudeStyle::Kind::Herringbone: {
      if (style.twist == 0.0) return 1;
      const double degrees = std::abs(style.twist) * 180.0 / kPi;
      int s = std::max(2, static_cast<int>(std::ceil(4.0 * degrees)));
      if (style.kind == ExtrudeStyle::Kind::Herringbone && s % 2) ++s;
      return s;
    }
  }
  return 1;
}

SolidMesh extrude(const ClosedPolygon& profile, double thickness,
                  const ExtrudeStyle& style) {
  if (!(thickness > 0.0)) throw InvalidInput("extrude: thickness must be > 0");
  if (style.kind == ExtrudeStyle::Kind::Bevel && !(style.apex_height > thickness))
    throw InvalidInput("extrude: bevel apex must lie above the solid");
  if (!is_simple(profile)) throw InvalidInput("extrude: profile is not simple");

  ClosedPolygon clean;
  clean.outer = clean_ring(profile.outer);
  for (const auto& h : profile.holes) clean.holes.push_back(clean_ring(h));
  clean = make_polygon(std::move(clean.outer), std::move(clean.holes));

  std::vector<const Ring*> rings{&clean.outer};
  for (const auto& h : clean.holes) rings.push_back(&h);
  std::vector<Point2> flat;
  for (const Ring* r : rings) flat.insert(flat.end(), r->begin(), r->end());
  const auto per_level = static_cast<std::uint32_t>(flat.size());

  const int slices = slice_count(style);
  SolidMesh mesh;
  mesh.vertices.reserve(flat.size() * static_cast<std::size_t>(slices + 1));
  for (int j = 0; j <= slices; ++j) {
    const double z = thickness * j / slices;
    const Eigen::Rotation2Dd rot(slice_angle(style, z, thickness));
    const double s = slice_scale(style, z);
    for (const auto& p : flat) {
      const Point2 q = s * (rot * p);
      mesh.vertices.emplace_back(q.x(), q.y(), z);
    }
  }

  // Side walls.
  std::uint32_t base = 0;
  for (const Ring* r : rings) {
    const auto count = static_cast<std::uint32_t>(r->size());
    for (int j = 0; j < slices; ++j) {
      const std::uint32_t lo = static_cast<std::uint32_t>(j) * per_level + base;
      const std::uint32_t hi = lo + per_level;
      for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t k = (i + 1) % count;
        mesh.triangles.push_back({lo + i, lo + k, hi + k});
        mesh.triangles.push_back({lo + i, hi + k, hi + i});
      }
    }
    base += count;
  }

  // Caps: top keeps the profile winding, bottom is reversed.
  const auto cap = triangulate(clean);
  const std::uint32_t top = static_cast<std::uint32_t>(slices) * per_level;
  for (const auto& t : cap) {
    mesh.triangles.push_back({t[0], t[2], t[1]});
    mesh.triangles.push_back({top + t[0], top + t[1], top + t[2]});
  }
  return mesh;
}

SolidMesh extrude(const GearProfile& profile, double thickness,
                  const ExtrudeStyle& style) {
  return extrude(profile.boundary, thickness, style);
}

double volume(const SolidMesh& mesh) {
  double sum = 0.0;
  for (const auto& t : mesh.triangles) {
    const Point3& a = mesh.vertices[t[0]];
    const Point3& b = mesh.vertices[t[1]];
    const Point3& c = mesh.vertices[t[2]];
    sum += a.dot(b.cross(c));
  }
  return sum / 6.0;
}

void validate(const SolidMesh& mesh) {
  if (mesh.triangles.empty()) throw InvalidInput("mesh: no triangles");
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(mesh.triangles.size() * 3);
  auto key = [](std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  for (const auto& t : mesh.triangles) {
    for (auto i : t)
      if (i >= mesh.vertices.size()) throw InvalidInput("mesh: vertex index out of range");
    const Point3& a = mesh.vertices[t[0]];
    const Point3& b = mesh.vertices[t[1]];
    const Point3& c = mesh.vertices[t[2]];
    if (0.5 * (b - a).cross(c - a).norm() <= kMinTriangleArea)
      throw InvalidInput("mesh: degenerate triangle");
    for (int e = 0; e < 3; ++e)
      if (++directed[key(t[e], t[(e + 1) % 3])] > 1)
        throw InvalidInput("mesh: directed edge used twice (inconsistent winding)");
  }
  for (const auto& [k, count] : directed) {
    const auto a = static_cast<std::uint32_t>(k >> 32);
    const auto b = static_cast<std::uint32_t>(k & 0xffffffffu);
    if (!directed.count(key(b, a))) throw InvalidInput("mesh: open edge");
  }
  if (!(volume(mesh) > 0.0)) throw InvalidInput("mesh: non-positive volume");
}

bool is_watertight(const SolidMesh& mesh) {
  try {
    validate(mesh);
    return true;
  } catch (const InvalidInput&) {
    return false;
  }
}

std::size_t write_stl(const SolidMesh& mesh, std::ostream& out) {
  validate(mesh);
  char header[80] = {};
  std::snprintf(header, sizeof header, "gearforge binary STL");
  out.write(header, sizeof header);
  put_u32(out, static_cast<std::uint32_t>(mesh.triangles.size()));
  for (const auto& t : mesh.triangles) {
    const Point3& a = mesh.vertices[t[0]];
    const Point3& b = mesh.vertices[t[1]];
    const Point3& c = mesh.vertices[t[2]];
    const Point3 n = (b - a).cross(c - a).normalized();
    for (int i = 0; i < 3; ++i) put_f32(out, static_cast<float>(n[i]));
    for (const Point3* v : {&a, &b, &c})
      for (int i = 0; i < 3; ++i) put_f32(out, static_cast<float>((*v)[i]));
    out.put(0);
    out.put(0);
  }
  if (!out) throw IoError("write_stl: write failed");
  return 84 + 50 * mesh.triangles.size();
}

std::size_t write_stl(const SolidMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_stl: cannot open " + path);
  return write_stl(mesh, out);
}

SolidMesh read_stl(std::istream& in) {
  char header[80];
  if (!in.read(header, sizeof header)) throw IoError("read_stl: truncated header");
  const std::uint32_t count = get_u32(in);
  SolidMesh mesh;
  std::map<std::array<std::uint32_t, 3>, std::uint32_t> index;
  for (std::uint32_t t = 0; t < count; ++t) {
    for (int i = 0; i < 3; ++i) get_f32(in);  // normal
    Triangle tri{};
    for (int v = 0; v < 3; ++v) {
      std::array<std::uint32_t, 3> bits{};
      for (int i = 0; i < 3; ++i) bits[static_cast<std::size_t>(i)] = get_u32(in);
      auto [it, fresh] = index.emplace(bits, static_cast<std::uint32_t>(mesh.vertices.size()));
      if (fresh)
        mesh.vertices.emplace_back(std::bit_cast<float>(bits[0]), std::bit_cast<float>(bits[1]),
                                   std::bit_cast<float>(bits[2]));
      tri[static_cast<std::size_t>(v)] = it->second;
    }
    char attr[2];
    if (!in.read(attr, 2)) throw IoError("read_stl: truncated triangle");
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

std::size_t write_svg(std::span<const SvgItem> items, std::ostream& out) {
  std::vector<ClosedPolygon> placed;
  placed.reserve(items.size());
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const auto& item : items) {
    placed.push_back(transformed(item.polygon, item.pose));
    auto grow = [&](const Ring& ring) {
      for (const auto& p : ring) {
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
        ymin = std::min(ymin, -p.y());
        ymax = std::max(ymax, -p.y());
      }
    };
    grow(placed.back().outer);
    for (const auto& h : placed.back().holes) grow(h);
  }
  if (placed.empty()) xmin = ymin = xmax = ymax = 0.0;
  const double mx = 0.05 * std::max(xmax - xmin, 1e-9);
  const double my = 0.05 * std::max(ymax - ymin, 1e-9);
  const double x0 = xmin - mx, y0 = ymin - my;
  const double w = xmax - xmin + 2 * mx, h = ymax - ymin + 2 * my;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(w)
      << "mm\" height=\"" << fmt(h) << "mm\" viewBox=\"" << fmt(x0) << ' ' << fmt(y0) << ' '
      << fmt(w) << ' ' << fmt(h) << "\">\n";
  for (std::size_t i = 0; i < placed.size(); ++i) {
    std::string d;
    auto ring_path = [&](const Ring& ring) {
      for (std::size_t k = 0; k < ring.size(); ++k) {
        if (!d.empty()) d += ' ';
        d += (k == 0) ? "M " : "L ";
        d += fmt(ring[k].x()) + ' ' + fmt(-ring[k].y());
      }
      d += " Z";
    };
    ring_path(placed[i].outer);
    for (const auto& hole : placed[i].holes) ring_path(hole);
    const SvgStyle& st = items[i].style;
    svg << "  <path d=\"" << d << "\" fill=\"" << st.fill << "\" fill-rule=\"evenodd\" stroke=\""
        << st.stroke << "\" stroke-width=\"" << fmt(st.stroke_width) << "\"/>\n";
  }
  svg << "</svg>\n";
  const std::string text = svg.str();
  out << text;
  if (!out) throw IoError("write_svg: write failed");
  return text.size();
}

std::size_t write_svg(std::span<const SvgItem> items, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_svg: cannot open " + path);
  return write_svg(items, out);
}

}  // namespace gearforge
