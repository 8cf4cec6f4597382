#include "gearforge/spec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace gearforge {
namespace {

std::string located(SourceLocation where, const std::string& message) {
  std::ostringstream out;
  out << "line " << where.line << ", column " << where.column << ": " << message;
  return out.str();
}

// ---------------------------------------------------------------- lexer

enum class Tok { Identifier, Number, String, LBrace, RBrace, Equals, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  SourceLocation where;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blank();
    Token t;
    t.where = {line_, column_};
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];
    if (c == '{' || c == '}' || c == '=') {
      t.kind = (c == '{') ? Tok::LBrace : (c == '}') ? Tok::RBrace : Tok::Equals;
      t.text = std::string(1, c);
      advance();
      return t;
    }
    if (ident_start(c)) {
      t.kind = Tok::Identifier;
      while (pos_ < text_.size() && ident_char(text_[pos_])) t.text += advance();
      return t;
    }
    if (digit(c) || c == '-' || c == '+' || c == '.') return number(t);
    if (c == '"') return string(t);
    throw SpecError(t.where, std::string("unexpected character '") + c + "'");
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token number(Token t) {
    const std::size_t start = pos_;
    if (text_[pos_] == '-' || text_[pos_] == '+') advance();
    std::size_t digits = 0;
    while (pos_ < text_.size() && digit(text_[pos_])) advance(), ++digits;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      advance();
      while (pos_ < text_.size() && digit(text_[pos_])) advance(), ++digits;
    }
    if (digits > 0 && pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) advance();
      std::size_t exp_digits = 0;
      while (pos_ < text_.size() && digit(text_[pos_])) advance(), ++exp_digits;
      if (exp_digits == 0) throw SpecError(t.where, "malformed number exponent");
    }
    if (digits == 0) throw SpecError(t.where, "malformed number");
    if (pos_ < text_.size() && ident_char(text_[pos_]))
      throw SpecError(t.where, "malformed number");
    t.text = std::string(text_.substr(start, pos_ - start));
    const char* first = t.text.data() + (t.text[0] == '+' ? 1 : 0);
    const auto [end, ec] = std::from_chars(first, t.text.data() + t.text.size(), t.number);
    if (ec != std::errc() || end != t.text.data() + t.text.size())
      throw SpecError(t.where, "number out of range: " + t.text);
    t.kind = Tok::Number;
    return t;
  }

  Token string(Token t) {
    advance();  // opening quote
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n')
        throw SpecError(t.where, "unterminated string");
      const char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) throw SpecError(t.where, "unterminated string");
        const char e = advance();
        if (e != '"' && e != '\\') throw SpecError(t.where, "unknown escape in string");
        t.text += e;
      } else {
        t.text += c;
      }
    }
    t.kind = Tok::String;
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::Identifier: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Equals: return "'='";
    case Tok::End: return "end of input";
  }
  return "token";
}

// --------------------------------------------------------------- schema

enum class Type { Number, Integer, Identifier, String, Reference };

struct KeySpec {
  const char* key;
  Type type;
  bool required = false;
  const char* refers_to = nullptr;  // entity kind for references
};

const std::map<std::string, std::vector<KeySpec>>& schema() {
  static const std::map<std::string, std::vector<KeySpec>> table = {
      {"gear",
       {{"teeth", Type::Integer, true},
        {"module", Type::Number, true},
        {"pressure_angle_deg", Type::Number},
        {"addendum", Type::Number},
        {"dedendum", Type::Number},
        {"cutout", Type::Number},
        {"flank_samples", Type::Integer},
        {"thickness", Type::Number},
        {"style", Type::Identifier},
        {"twist_deg", Type::Number},
        {"apex_height", Type::Number},
        {"color", Type::String}}},
      {"rack",
       {{"module", Type::Number, true},
        {"pressure_angle_deg", Type::Number},
        {"teeth", Type::Integer},
        {"addendum", Type::Number},
        {"dedendum", Type::Number},
        {"color", Type::String}}},
      {"pair",
       {{"drive", Type::Reference, true, "gear"},
        {"driven", Type::Reference, true, "gear"},
        {"center_distance", Type::Number},
        {"color", Type::String}}},
      {"acircular_pair",
       {{"radius", Type::Number},
        {"amplitude", Type::Number},
        {"lobes", Type::Integer},
        {"turns_driving", Type::Integer},
        {"turns_driven", Type::Integer},
        {"module", Type::Number},
        {"teeth", Type::Integer},
        {"center_distance", Type::Number},
        {"law_amplitude", Type::Number},
        {"law_lobes", Type::Integer},
        {"color", Type::String}}},
      {"alien",
       {{"center_distance", Type::Number, true},
        {"ratio", Type::Number},
        {"samples", Type::Integer},
        {"driver", Type::Reference, false, "gear"},
        {"disk_radius", Type::Number},
        {"color", Type::String}}},
      {"trochoid",
       {{"fixed_radius", Type::Number, true},
        {"rolling_radius", Type::Number, true},
        {"arm", Type::Number, true},
        {"samples", Type::Integer},
        {"peg_radius", Type::Number},
        {"color", Type::String}}},
  };
  return table;
}

double number_or(const Entity& e, std::string_view key, double fallback) {
  const Attribute* a = e.find(key);
  return a ? a->value.number : fallback;
}

double radians(double degrees) { return degrees * kPi / 180.0; }

[[noreturn]] void fail(const Entity& e, std::string_view key, const std::string& message) {
  const Attribute* a = e.find(key);
  throw SpecError(a ? a->location : e.location, e.kind + " " + e.name + ": " + message);
}

void require(bool ok, const Entity& e, std::string_view key, const std::string& message) {
  if (!ok) fail(e, key, message);
}

// Runs a module-level precondition check and re-raises its message at the
// entity.
template <typename F>
void check_module(const Entity& e, F&& f) {
  try {
    f();
  } catch (const GearError& err) {
    throw SpecError(e.location, e.kind + " " + e.name + ": " + err.what());
  }
}

void check_ranges(const Entity& e, const TrainSpec& spec) {
  if (e.kind == "gear") {
    check_module(e, [&] { gear_spec_of(e).validate(); });
    require(number_or(e, "flank_samples", 64) >= 4, e, "flank_samples", "flank_samples must be >= 4");
    require(number_or(e, "thickness", 0.0) >= 0.0, e, "thickness", "thickness must be >= 0");
    if (const Attribute* s = e.find("style")) {
      const std::string& v = s->value.text;
      require(v == "spur" || v == "helical" || v == "herringbone" || v == "bevel", e, "style",
              "style must be spur, helical, herringbone or bevel");
      require(e.find("thickness") != nullptr, e, "style", "style needs a thickness");
      if (v == "bevel")
        require(number_or(e, "apex_height", 0.0) > number_or(e, "thickness", 0.0), e,
                "apex_height", "bevel needs apex_height > thickness");
    }
  } else if (e.kind == "rack") {
    check_module(e, [&] { rack_spec_of(e).validate(); });
  } else if (e.kind == "pair") {
    const GearSpec a = gear_spec_of(*spec.find(e.find("drive")->value.text));
    const GearSpec b = gear_spec_of(*spec.find(e.find("driven")->value.text));
    require(a.module == b.module && a.pressure_angle == b.pressure_angle, e, "driven",
            "drive and driven gears must share module and pressure angle");
    require(number_or(e, "center_distance", 1.0) > 0.0, e, "center_distance",
            "center_distance must be > 0");
  } else if (e.kind == "acircular_pair") {
    const bool curve = e.find("radius") != nullptr;
    const bool motion = e.find("law_amplitude") != nullptr || e.find("center_distance");
    require(curve != motion, e, "radius",
            "give either a pitch curve (radius, amplitude, lobes) or a motion law "
            "(center_distance, law_amplitude, law_lobes)");
    if (curve) {
      for (const char* k : {"center_distance", "law_amplitude", "law_lobes"})
        require(!e.find(k), e, k, std::string(k) + " belongs to the motion-law form");
      const double r = number_or(e, "radius", 1.0);
      require(r > 0.0, e, "radius", "radius must be > 0");
      require(std::abs(number_or(e, "amplitude", 0.0)) < r, e, "amplitude",
              "|amplitude| must be below the radius");
      require(number_or(e, "lobes", 1) >= 1, e, "lobes", "lobes must be >= 1");
      require(number_or(e, "turns_driving", 1) >= 1, e, "turns_driving", "turns must be >= 1");
      require(number_or(e, "turns_driven", 1) >= 1, e, "turns_driven", "turns must be >= 1");
      require((e.find("teeth") == nullptr) == (e.find("module") == nullptr), e, "teeth",
              "teeth and module go together");
      if (e.find("teeth")) {
        require(number_or(e, "teeth", 0) >= 4, e, "teeth", "teeth must be >= 4");
        require(number_or(e, "module", 0.0) > 0.0, e, "module", "module must be > 0");
      }
    } else {
      for (const char* k : {"amplitude", "lobes", "turns_driving", "turns_driven", "teeth", "module"})
        require(!e.find(k), e, k, std::string(k) + " belongs to the pitch-curve form");
      require(e.find("center_distance") && e.find("law_amplitude"), e, "center_distance",
              "motion-law form needs center_distance and law_amplitude");
      require(number_or(e, "center_distance", 0.0) > 0.0, e, "center_distance",
              "center_distance must be > 0");
      require(std::abs(number_or(e, "law_amplitude", 0.0)) < 1.0, e, "law_amplitude",
              "|law_amplitude| must be < 1 so the driven gear keeps turning forward");
      require(number_or(e, "law_lobes", 1) >= 1, e, "law_lobes", "law_lobes must be >= 1");
    }
  } else if (e.kind == "alien") {
    require(number_or(e, "center_distance", 0.0) > 0.0, e, "center_distance",
            "center_distance must be > 0");
    require(number_or(e, "ratio", 1.0) > 0.0, e, "ratio", "ratio must be > 0");
    require(number_or(e, "samples", 720) >= 8, e, "samples", "samples must be >= 8");
    require((e.find("driver") == nullptr) != (e.find("disk_radius") == nullptr), e, "driver",
            "give exactly one of driver or disk_radius");
    if (e.find("disk_radius"))
      require(number_or(e, "disk_radius", 0.0) > 0.0, e, "disk_radius", "disk_radius must be > 0");
  } else if (e.kind == "trochoid") {
    require(number_or(e, "fixed_radius", 0.0) > 0.0, e, "fixed_radius", "fixed_radius must be > 0");
    require(number_or(e, "rolling_radius", 0.0) > 0.0, e, "rolling_radius",
            "rolling_radius must be > 0");
    require(number_or(e, "arm", 0.0) >= 0.0, e, "arm", "arm must be >= 0");
    require(number_or(e, "samples", 1024) >= 16, e, "samples", "samples must be >= 16");
    if (e.find("peg_radius"))
      require(number_or(e, "peg_radius", 0.0) > 0.0, e, "peg_radius", "peg_radius must be > 0");
  }
  if (const Attribute* c = e.find("color"))
    require(!c->value.text.empty(), e, "color", "color must not be empty");
}

void check(const TrainSpec& spec) {
  std::map<std::string, const Entity*> seen;
  for (const auto& e : spec.entities) {
    const auto it = schema().find(e.kind);
    if (it == schema().end())
      throw SpecError(e.location, "unknown entity kind '" + e.kind +
                                      "' (expected gear, rack, pair, acircular_pair, alien "
                                      "or trochoid)");
    if (const auto [prev, fresh] = seen.emplace(e.name, &e); !fresh)
      throw SpecError(e.location, "duplicate name '" + e.name + "' (first defined on line " +
                                      std::to_string(prev->second->location.line) + ")");
    const auto& keys = it->second;
    for (std::size_t i = 0; i < e.attributes.size(); ++i) {
      const Attribute& a = e.attributes[i];
      for (std::size_t j = 0; j < i; ++j)
        if (e.attributes[j].key == a.key)
          throw SpecError(a.location, "duplicate attribute '" + a.key + "' in " + e.name);
      const auto k = std::find_if(keys.begin(), keys.end(),
                                  [&](const KeySpec& s) { return a.key == s.key; });
      if (k == keys.end())
        throw SpecError(a.location, "unknown attribute '" + a.key + "' for " + e.kind);
      const Value::Kind got = a.value.kind;
      bool ok = false;
      switch (k->type) {
        case Type::Number: ok = got == Value::Kind::Number; break;
        case Type::Integer:
          ok = got == Value::Kind::Number && std::floor(a.value.number) == a.value.number &&
               std::abs(a.value.number) < 1e9;
          break;
        case Type::Identifier:
        case Type::Reference: ok = got == Value::Kind::Identifier; break;
        case Type::String: ok = got == Value::Kind::String; break;
      }
      if (!ok) {
        static const char* names[] = {"a number", "an integer", "an identifier", "a quoted string",
                                      "an entity name"};
        throw SpecError(a.location,
                        "'" + a.key + "' expects " + names[static_cast<int>(k->type)]);
      }
    }
    for (const auto& k : keys)
      if (k.required && !e.find(k.key))
        throw SpecError(e.location, e.kind + " " + e.name + ": missing '" + k.key + "'");
  }
  // References after all names are known, so order in the file is free.
  for (const auto& e : spec.entities)
    for (const auto& k : schema().at(e.kind)) {
      if (k.type != Type::Reference) continue;
      const Attribute* a = e.find(k.key);
      if (!a) continue;
      const Entity* target = spec.find(a->value.text);
      if (!target)
        throw SpecError(a->location, "unresolved reference '" + a->value.text + "' in " +
                                         e.kind + " " + e.name);
      if (target->kind != k.refers_to)
        throw SpecError(a->location, "'" + a->value.text + "' is a " + target->kind +
                                         ", expected a " + k.refers_to);
    }
  for (const auto& e : spec.entities) check_ranges(e, spec);
}

void format_value(std::ostream& out, const Value& v) {
  switch (v.kind) {
    case Value::Kind::Number: {
      char buf[64];
      const auto r = std::to_chars(buf, buf + sizeof buf, v.number);
      out << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf));
      break;
    }
    case Value::Kind::Identifier: out << v.text; break;
    case Value::Kind::String:
      out << '"';
      for (char c : v.text) {
        if (c == '"' || c == '\\') out << '\\';
        out << c;
      }
      out << '"';
      break;
  }
}

}  // namespace

SpecError::SpecError(SourceLocation where, const std::string& message)
    : InvalidInput(located(where, message)), where_(where) {}

Value Value::of_number(double x) { return Value{Kind::Number, x, {}}; }
Value Value::of_string(std::string s) { return Value{Kind::String, 0.0, std::move(s)}; }
Value Value::of_identifier(std::string s) { return Value{Kind::Identifier, 0.0, std::move(s)}; }

bool Value::operator==(const Value& other) const {
  if (kind != other.kind) return false;
  return kind == Kind::Number ? number == other.number : text == other.text;
}

const Attribute* Entity::find(std::string_view key) const {
  for (const auto& a : attributes)
    if (a.key == key) return &a;
  return nullptr;
}

const Entity* TrainSpec::find(std::string_view name) const {
  for (const auto& e : entities)
    if (e.name == name) return &e;
  return nullptr;
}

TrainSpec parse_spec(std::string_view text) {
  Lexer lex(text);
  TrainSpec spec;
  Token t = lex.next();
  auto expect = [&](Tok kind, const char* what) {
    if (t.kind != kind)
      throw SpecError(t.where, std::string("expected ") + what + ", found " + describe(t.kind));
  };
  while (t.kind != Tok::End) {
    Entity e;
    expect(Tok::Identifier, "entity kind");
    e.kind = t.text;
    e.location = t.where;
    t = lex.next();
    expect(Tok::Identifier, "entity name");
    e.name = t.text;
    t = lex.next();
    expect(Tok::LBrace, "'{' after entity name");
    t = lex.next();
    while (t.kind != Tok::RBrace) {
      Attribute a;
      expect(Tok::Identifier, "attribute name or '}'");
      a.key = t.text;
      a.location = t.where;
      t = lex.next();
      expect(Tok::Equals, "'=' after attribute name");
      t = lex.next();
      switch (t.kind) {
        case Tok::Number: a.value = Value::of_number(t.number); break;
        case Tok::String: a.value = Value::of_string(t.text); break;
        case Tok::Identifier: a.value = Value::of_identifier(t.text); break;
        default:
          throw SpecError(t.where, std::string("expected a value, found ") + describe(t.kind));
      }
      e.attributes.push_back(std::move(a));
      t = lex.next();
    }
    spec.entities.push_back(std::move(e));
    t = lex.next();
  }
  check(spec);
  return spec;
}

TrainSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open spec file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_spec(text.str());
}

std::string format_spec(const TrainSpec& spec) {
  std::ostringstream out;
  for (std::size_t i = 0; i < spec.entities.size(); ++i) {
    const Entity& e = spec.entities[i];
    if (i) out << '\n';
    out << e.kind << ' ' << e.name << " {\n";
    for (const auto& a : e.attributes) {
      out << "  " << a.key << " = ";
      format_value(out, a.value);
      out << '\n';
    }
    out << "}\n";
  }
  return out.str();
}

GearSpec gear_spec_of(const Entity& gear) {
  GearSpec s;
  s.teeth = static_cast<int>(number_or(gear, "teeth", s.teeth));
  s.module = number_or(gear, "module", s.module);
  s.pressure_angle = radians(number_or(gear, "pressure_angle_deg", 20.0));
  s.addendum_coef = number_or(gear, "addendum", s.addendum_coef);
  s.dedendum_coef = number_or(gear, "dedendum", s.dedendum_coef);
  s.cutout_coef = number_or(gear, "cutout", s.cutout_coef);
  return s;
}

RackSpec rack_spec_of(const Entity& rack) {
  RackSpec s;
  s.module = number_or(rack, "module", s.module);
  s.pressure_angle = radians(number_or(rack, "pressure_angle_deg", 20.0));
  s.tooth_count = static_cast<int>(number_or(rack, "teeth", s.tooth_count));
  s.addendum_coef = number_or(rack, "addendum", s.addendum_coef);
  s.dedendum_coef = number_or(rack, "dedendum", s.dedendum_coef);
  return s;
}

double thickness_of(const Entity& gear) { return number_or(gear, "thickness", 0.0); }

ExtrudeStyle extrude_style_of(const Entity& gear) {
  const Attribute* s = gear.find("style");
  const std::string style = s ? s->value.text : "spur";
  const double twist = radians(number_or(gear, "twist_deg", 0.0));
  if (style == "helical") return ExtrudeStyle::helical(twist);
  if (style == "herringbone") return ExtrudeStyle::herringbone(twist);
  if (style == "bevel") return ExtrudeStyle::bevel(number_or(gear, "apex_height", 0.0));
  return ExtrudeStyle::spur();
}

ProfileOptions profile_options_of(const Entity& gear) {
  ProfileOptions o;
  o.flank_samples = static_cast<int>(number_or(gear, "flank_samples", o.flank_samples));
  return o;
}

}  // namespace gearforge
