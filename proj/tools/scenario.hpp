#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gpt/decisions.hpp"

namespace gptcast {

/// Bad input: scenario schema, rationals, or a space that fails validation.
/// Carries the offending line (0 when not tied to one) and field.
class InputError : public std::runtime_error {
 public:
  InputError(std::size_t line, std::string field, const std::string& message);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

struct StateSpec {
  enum class Kind { coordinates, vertex, centroid };
  Kind kind = Kind::coordinates;
  gpt::Vec coords;
  std::size_t vertex = 0;
  std::size_t line = 0;
};

/// builtin family name and size, e.g. {"polygon", 5}; size is unused for square and custom
struct SpaceSpec {
  std::string family = "square";
  std::size_t size = 0;
};

SpaceSpec parse_space_spec(std::string_view text, std::size_t line = 0);
std::string to_string(const SpaceSpec& s);

struct Scenario {
  std::string name;
  SpaceSpec space;
  // custom spaces: unit plus a V-rep or an H-rep
  gpt::Vec unit;
  std::vector<gpt::Vec> vertices;
  gpt::HRep hrep;
  gpt::TensorVariant composite = gpt::TensorVariant::max;
  // custom composites
  gpt::HRep joint;
  std::vector<StateSpec> states;
  std::string task = "analyze";
  std::uint64_t seed = 1;
  std::size_t trials = 0;
  /// sweep set size; 0 draws 1 to 3 states per trial
  std::size_t size = 2;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Reads joint-inequality / joint-equality lines into s.joint and marks the composite custom.
void load_composite_file(const std::string& path, Scenario& s);

/// Canonical text: fixed key order, reduced rationals, no comments.
/// parse_scenario(format_scenario(s)) formats back to the same text.
std::string format_scenario(const Scenario& s);

gpt::SpacePtr build_space(const Scenario& s);
gpt::CompositePtr build_composite(const Scenario& s, const gpt::SpacePtr& space);
gpt::StateSet build_states(const Scenario& s, const gpt::SpacePtr& space);

std::string read_file(const std::string& path);

}  // namespace gptcast
