#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gearforge/errors.hpp"
#include "gearforge/involute.hpp"
#include "gearforge/solidify.hpp"

namespace gearforge {

// Gear train documents:
//
//   # comment
//   gear g1 { teeth = 20  module = 2.0  pressure_angle_deg = 20 }
//   pair p { drive = g1  driven = g2 }
//
// Keys ending in _deg hold degrees; typed views convert them to radians.

struct SourceLocation {
  int line = 0;
  int column = 0;
};

// Syntax or semantic error at a position in the document.
class SpecError : public InvalidInput {
 public:
  SpecError(SourceLocation where, const std::string& message);
  SourceLocation location() const { return where_; }

 private:
  SourceLocation where_;
};

struct Value {
  enum class Kind { Number, String, Identifier };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string text;

  static Value of_number(double x);
  static Value of_string(std::string s);
  static Value of_identifier(std::string s);

  bool operator==(const Value& other) const;
};

struct Attribute {
  std::string key;
  Value value;
  SourceLocation location;

  bool operator==(const Attribute& other) const {
    return key == other.key && value == other.value;
  }
};

struct Entity {
  std::string kind;
  std::string name;
  std::vector<Attribute> attributes;
  SourceLocation location;

  const Attribute* find(std::string_view key) const;
  bool operator==(const Entity& other) const {
    return kind == other.kind && name == other.name && attributes == other.attributes;
  }
};

struct TrainSpec {
  std::vector<Entity> entities;

  const Entity* find(std::string_view name) const;
  bool operator==(const TrainSpec& other) const { return entities == other.entities; }
};

// Parses and checks names, references, keys, value kinds and ranges.
TrainSpec parse_spec(std::string_view text);
TrainSpec load_spec(const std::filesystem::path& path);
std::string format_spec(const TrainSpec& spec);

// Typed views of checked entities.
GearSpec gear_spec_of(const Entity& gear);
RackSpec rack_spec_of(const Entity& rack);
double thickness_of(const Entity& gear);  // 0 when the gear has no solid
ExtrudeStyle extrude_style_of(const Entity& gear);
ProfileOptions profile_options_of(const Entity& gear);

}  // namespace gearforge
