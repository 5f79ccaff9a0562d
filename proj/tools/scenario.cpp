#include "scenario.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace gptcast {

namespace {

std::string where(std::size_t line, const std::string& field) {
  return line > 0 ? "line " + std::to_string(line) + ", field '" + field + "'" : "field '" + field + "'";
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

gpt::Scalar scalar(const std::string& text, std::size_t line, const std::string& field) {
  try {
    return gpt::parse_scalar(text);
  } catch (const gpt::ParseError& e) {
    throw InputError(line, field, e.what());
  }
}

gpt::Vec scalars(std::string_view text, std::size_t line, const std::string& field) {
  gpt::Vec out;
  for (const auto& w : words(text)) out.push_back(scalar(w, line, field));
  if (out.empty()) throw InputError(line, field, "expected at least one rational");
  return out;
}

std::size_t count(std::string_view text, std::size_t line, const std::string& field) {
  const auto t = trim(text);
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || end != t.data() + t.size()) {
    throw InputError(line, field, "expected a nonnegative integer, got '" + std::string(t) + "'");
  }
  return static_cast<std::size_t>(v);
}

// "a1 ... an <= b" or "a1 ... an = b"
std::pair<gpt::Vec, gpt::Scalar> row(std::string_view text, std::string_view op, std::size_t line,
                                     const std::string& field) {
  const auto at = text.find(op);
  if (at == std::string_view::npos || (op == "=" && at > 0 && (text[at - 1] == '<' || text[at - 1] == '>'))) {
    throw InputError(line, field, "expected 'coefficients " + std::string(op) + " bound'");
  }
  const auto rhs = words(text.substr(at + op.size()));
  if (rhs.size() != 1) throw InputError(line, field, "expected a single rational after '" + std::string(op) + "'");
  return {scalars(text.substr(0, at), line, field), scalar(rhs[0], line, field)};
}

std::string join(const gpt::Vec& v) {
  std::string out;
  for (const auto& x : v) out += (out.empty() ? "" : " ") + gpt::to_string(x);
  return out;
}

gpt::TensorVariant parse_variant(std::string_view text, std::size_t line) {
  const auto t = trim(text);
  if (t == "min") return gpt::TensorVariant::min;
  if (t == "max") return gpt::TensorVariant::max;
  if (t == "custom") return gpt::TensorVariant::custom;
  throw InputError(line, "composite", "expected min, max or custom, got '" + std::string(t) + "'");
}

const std::set<std::string> kTasks{"distinguish", "clone", "broadcast", "analyze", "sweep"};

void check_widths(const gpt::HRep& h, std::size_t dim, const std::string& field) {
  for (const auto& r : h.inequalities) {
    if (r.normal.size() != dim) throw InputError(0, field, "row has " + std::to_string(r.normal.size()) +
                                                               " coefficients, expected " + std::to_string(dim));
  }
  for (const auto& r : h.equalities) {
    if (r.normal.size() != dim) throw InputError(0, field, "row has " + std::to_string(r.normal.size()) +
                                                               " coefficients, expected " + std::to_string(dim));
  }
}

}  // namespace

InputError::InputError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error(where(line, field) + ": " + message), line_(line), field_(std::move(field)) {}

SpaceSpec parse_space_spec(std::string_view text, std::size_t line) {
  std::string flat(text);
  for (auto& c : flat) {
    if (c == ':') c = ' ';
  }
  const auto w = words(flat);
  if (w.empty()) throw InputError(line, "space", "missing space name");
  SpaceSpec s{w[0], 0};
  if (s.family == "square" || s.family == "custom") {
    if (w.size() != 1) throw InputError(line, "space", "'" + s.family + "' takes no parameter");
    return s;
  }
  if (s.family != "classical" && s.family != "polygon") {
    throw InputError(line, "space", "unknown space '" + s.family + "' (classical n, square, polygon n, custom)");
  }
  if (w.size() != 2) throw InputError(line, "space", "'" + s.family + "' needs one integer parameter");
  s.size = count(w[1], line, "space");
  if (s.family == "classical" && s.size < 1) throw InputError(line, "space", "classical needs n >= 1");
  if (s.family == "polygon" && s.size < 3) throw InputError(line, "space", "polygon needs n >= 3");
  return s;
}

std::string to_string(const SpaceSpec& s) {
  return s.family == "classical" || s.family == "polygon" ? s.family + " " + std::to_string(s.size) : s.family;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::set<std::string> seen;
  const std::set<std::string> single{"name", "space", "unit", "composite", "task", "seed", "trials", "size"};
  std::size_t lineno = 0;
  std::size_t space_line = 0, composite_line = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw InputError(lineno, "?", "expected 'key: value'");
    const std::string key(trim(line.substr(0, colon)));
    const std::string_view value = trim(line.substr(colon + 1));
    if (single.count(key) && !seen.insert(key).second) throw InputError(lineno, key, "given more than once");

    if (key == "name") {
      s.name = value;
    } else if (key == "space") {
      s.space = parse_space_spec(value, lineno);
      space_line = lineno;
    } else if (key == "unit") {
      s.unit = scalars(value, lineno, key);
    } else if (key == "vertex") {
      s.vertices.push_back(scalars(value, lineno, key));
    } else if (key == "inequality") {
      auto [a, b] = row(value, "<=", lineno, key);
      s.hrep.inequalities.push_back({std::move(a), std::move(b)});
    } else if (key == "equality") {
      auto [a, b] = row(value, "=", lineno, key);
      s.hrep.equalities.push_back({std::move(a), std::move(b)});
    } else if (key == "composite") {
      s.composite = parse_variant(value, lineno);
      composite_line = lineno;
    } else if (key == "joint-inequality") {
      auto [a, b] = row(value, "<=", lineno, key);
      s.joint.inequalities.push_back({std::move(a), std::move(b)});
    } else if (key == "joint-equality") {
      auto [a, b] = row(value, "=", lineno, key);
      s.joint.equalities.push_back({std::move(a), std::move(b)});
    } else if (key == "state") {
      StateSpec st;
      st.line = lineno;
      const auto w = words(value);
      if (w.size() == 1 && w[0] == "centroid") {
        st.kind = StateSpec::Kind::centroid;
      } else if (!w.empty() && w[0] == "vertex") {
        if (w.size() != 2) throw InputError(lineno, key, "expected 'vertex <index>'");
        st.kind = StateSpec::Kind::vertex;
        st.vertex = count(w[1], lineno, key);
      } else {
        st.coords = scalars(value, lineno, key);
      }
      s.states.push_back(std::move(st));
    } else if (key == "task") {
      s.task = value;
      if (!kTasks.count(s.task)) {
        throw InputError(lineno, key, "unknown task '" + s.task + "' (distinguish, clone, broadcast, analyze, sweep)");
      }
    } else if (key == "seed") {
      s.seed = count(value, lineno, key);
    } else if (key == "trials") {
      s.trials = count(value, lineno, key);
    } else if (key == "size") {
      s.size = count(value, lineno, key);
    } else {
      throw InputError(lineno, key, "unknown key");
    }
  }

  const bool custom = s.space.family == "custom";
  const bool shape = !s.unit.empty() || !s.vertices.empty() || !s.hrep.inequalities.empty() ||
                     !s.hrep.equalities.empty();
  if (!custom && shape) throw InputError(space_line, "space", "unit/vertex/inequality lines need 'space: custom'");
  if (custom) {
    if (s.unit.empty()) throw InputError(space_line, "unit", "custom space needs a unit line");
    const bool hrep = !s.hrep.inequalities.empty() || !s.hrep.equalities.empty();
    if (s.vertices.empty() == !hrep) {
      throw InputError(space_line, "space", "custom space needs either vertex lines or inequality lines, not both");
    }
    for (const auto& v : s.vertices) {
      if (v.size() != s.unit.size()) throw InputError(0, "vertex", "vertex " + join(v) + " does not match the unit's length");
    }
    s.hrep.dim = s.unit.size();
    check_widths(s.hrep, s.unit.size(), "inequality");
  }
  const bool joint_rows = !s.joint.inequalities.empty() || !s.joint.equalities.empty();
  if (s.composite == gpt::TensorVariant::custom && !joint_rows) {
    throw InputError(composite_line, "composite", "custom composite needs joint-inequality lines");
  }
  if (s.composite != gpt::TensorVariant::custom && joint_rows) {
    throw InputError(composite_line, "composite", "joint rows need 'composite: custom'");
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(0, "path", "cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

void load_composite_file(const std::string& path, Scenario& s) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  gpt::HRep joint;
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    const std::string key(trim(line.substr(0, colon)));
    if (colon == std::string_view::npos || (key != "joint-inequality" && key != "joint-equality")) {
      throw InputError(lineno, key, "composite files hold only joint-inequality and joint-equality lines");
    }
    const auto value = trim(line.substr(colon + 1));
    if (key == "joint-inequality") {
      auto [a, b] = row(value, "<=", lineno, key);
      joint.inequalities.push_back({std::move(a), std::move(b)});
    } else {
      auto [a, b] = row(value, "=", lineno, key);
      joint.equalities.push_back({std::move(a), std::move(b)});
    }
  }
  if (joint.inequalities.empty()) throw InputError(0, "composite", "'" + path + "' has no joint-inequality lines");
  s.joint = std::move(joint);
  s.composite = gpt::TensorVariant::custom;
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  if (!s.name.empty()) out << "name: " << s.name << "\n";
  out << "space: " << to_string(s.space) << "\n";
  if (s.space.family == "custom") {
    out << "unit: " << join(s.unit) << "\n";
    for (const auto& v : s.vertices) out << "vertex: " << join(v) << "\n";
    for (const auto& h : s.hrep.inequalities) out << "inequality: " << join(h.normal) << " <= " << gpt::to_string(h.offset) << "\n";
    for (const auto& h : s.hrep.equalities) out << "equality: " << join(h.normal) << " = " << gpt::to_string(h.offset) << "\n";
  }
  out << "composite: " << gpt::to_string(s.composite) << "\n";
  for (const auto& h : s.joint.inequalities) out << "joint-inequality: " << join(h.normal) << " <= " << gpt::to_string(h.offset) << "\n";
  for (const auto& h : s.joint.equalities) out << "joint-equality: " << join(h.normal) << " = " << gpt::to_string(h.offset) << "\n";
  for (const auto& st : s.states) {
    switch (st.kind) {
      case StateSpec::Kind::coordinates: out << "state: " << join(st.coords) << "\n"; break;
      case StateSpec::Kind::vertex: out << "state: vertex " << st.vertex << "\n"; break;
      case StateSpec::Kind::centroid: out << "state: centroid\n"; break;
    }
  }
  out << "task: " << s.task << "\n";
  out << "seed: " << s.seed << "\n";
  if (s.task == "sweep") {
    out << "trials: " << s.trials << "\n";
    out << "size: " << s.size << "\n";
  }
  return out.str();
}

gpt::SpacePtr build_space(const Scenario& s) {
  const auto& f = s.space.family;
  if (f == "classical") return gpt::make_classical(s.space.size);
  if (f == "square") return gpt::make_square_gbit();
  if (f == "polygon") return gpt::make_polygon(s.space.size);
  try {
    gpt::Polytope omega = s.vertices.empty() ? gpt::Polytope::from_halfspaces(s.hrep)
                                             : gpt::Polytope::from_vertices(s.unit.size(), s.vertices);
    if (omega.is_empty()) throw InputError(0, "space", "the inequalities have no solution");
    return gpt::make_custom_space(s.name.empty() ? "custom" : s.name, std::move(omega), s.unit);
  } catch (const gpt::UnboundedError& e) {
    throw InputError(0, "space", std::string("inequalities do not bound a polytope: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(0, "space", e.what());
  }
}

gpt::CompositePtr build_composite(const Scenario& s, const gpt::SpacePtr& space) {
  if (s.composite != gpt::TensorVariant::custom) return gpt::make_tensor(space, space, s.composite);
  gpt::HRep joint = s.joint;
  joint.dim = space->dim() * space->dim();
  check_widths(joint, joint.dim, "joint-inequality");
  try {
    return gpt::custom_tensor(space, space, std::move(joint));
  } catch (const gpt::UnboundedError& e) {
    throw InputError(0, "composite", std::string("joint rows do not bound a polytope: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(0, "composite", e.what());
  }
}

gpt::StateSet build_states(const Scenario& s, const gpt::SpacePtr& space) {
  std::vector<gpt::Vec> states;
  for (const auto& st : s.states) {
    switch (st.kind) {
      case StateSpec::Kind::centroid: states.push_back(space->centroid()); break;
      case StateSpec::Kind::vertex:
        if (st.vertex >= space->vertices().size()) {
          throw InputError(st.line, "state", "vertex " + std::to_string(st.vertex) + " out of range (" +
                                                 std::to_string(space->vertices().size()) + " vertices)");
        }
        states.push_back(space->vertices()[st.vertex]);
        break;
      case StateSpec::Kind::coordinates:
        if (st.coords.size() != space->dim()) {
          throw InputError(st.line, "state", "expected " + std::to_string(space->dim()) + " coordinates, got " +
                                                 std::to_string(st.coords.size()));
        }
        if (gpt::dot(space->unit(), st.coords) != 1) {
          throw InputError(st.line, "state", "u(x) = " + gpt::to_string(gpt::dot(space->unit(), st.coords)) + ", not 1");
        }
        if (!space->contains(st.coords)) throw InputError(st.line, "state", join(st.coords) + " lies outside the state space");
        states.push_back(st.coords);
        break;
    }
  }
  return gpt::make_state_set(space, std::move(states));
}

}  // namespace gptcast
