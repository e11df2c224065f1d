#include "rgrip/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace rgrip {

std::string format_diagnostic(const std::string& source, const Diagnostic& d) {
  std::ostringstream out;
  out << source << ":" << d.line << ":" << d.column << ": " << d.message;
  return out.str();
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "\n";
    out += format_diagnostic("scenario", d);
  }
  return out;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

SceneObject ObjectSpec::build() const {
  SceneObject o;
  o.kind = kind;
  o.name = name;
  switch (kind) {
    case ShapeKind::None: break;
    case ShapeKind::Circle: o = make_circle(diameter, {center_x, center_y}); break;
    case ShapeKind::Rectangle:
      o = make_rectangle(width, height, {center_x, center_y}, deg_to_rad(rotation_deg));
      break;
    case ShapeKind::Slab:
      o = make_slab(width, thickness, surface_y);
      o.center.x = center_x;
      o.on_surface = on_surface;
      break;
  }
  o.name = name;
  return o;
}

GripperConfig Scenario::config() const {
  GripperConfig c;
  for (const auto& [key, value] : overrides) {
    const ConfigField* f = find_config_field(key);
    if (!f) throw std::invalid_argument("unknown gripper key " + key);
    set_field(*f, c, value);
  }
  return c;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(out);
}

enum class Section { None, Gripper, Object, Commands };

struct Entry {
  std::string value;
  int line{0};
  int column{0};
};

// Keys a shape accepts, with the ones it requires.
struct ShapeKeys {
  std::vector<std::string> allowed;
  std::vector<std::string> required;
};

ShapeKeys keys_for(ShapeKind k) {
  switch (k) {
    case ShapeKind::None: return {{"shape", "name"}, {}};
    case ShapeKind::Circle: return {{"shape", "name", "diameter", "center_x", "center_y"}, {"diameter"}};
    case ShapeKind::Rectangle:
      return {{"shape", "name", "width", "height", "center_x", "center_y", "rotation"}, {"width", "height"}};
    case ShapeKind::Slab:
      return {{"shape", "name", "width", "thickness", "center_x", "surface_y", "on_surface"}, {"width", "thickness"}};
  }
  return {};
}

const std::vector<std::string>& object_keys() {
  static const std::vector<std::string> keys{"shape",    "name",     "diameter", "width",     "height",    "thickness",
                                             "center_x", "center_y", "rotation", "surface_y", "on_surface"};
  return keys;
}

bool parse_verb(std::string_view s, Verb& v) {
  static const std::pair<const char*, Verb> verbs[] = {{"close", Verb::Close},
                                                       {"open", Verb::Open},
                                                       {"reconfigure", Verb::Reconfigure},
                                                       {"release-reconfigure", Verb::ReleaseReconfigure},
                                                       {"pick-thin", Verb::PickThin}};
  for (const auto& [name, verb] : verbs) {
    if (s == name) {
      v = verb;
      return true;
    }
  }
  return false;
}

// Zero is meaningful for these lengths.
bool zero_allowed(const std::string& key) {
  return key == "base_travel" || key == "lock_offset" || key == "palm_height";
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::vector<Diagnostic> diags;
  Section section = Section::None;
  int gripper_line = 0;
  std::map<std::string, double> overrides;
  std::map<std::string, Entry> object;
  std::map<std::string, int> seen_sections;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const int indent = static_cast<int>(line.find_first_not_of(" \t")) + 1;

    if (body.front() == '[') {
      if (body.back() != ']') {
        diags.push_back({line_no, indent, "unterminated section header"});
        continue;
      }
      const std::string name(trim(body.substr(1, body.size() - 2)));
      if (seen_sections.count(name)) {
        diags.push_back({line_no, indent, "duplicate section [" + name + "]"});
      }
      seen_sections[name] = line_no;
      if (name == "gripper") {
        section = Section::Gripper;
        gripper_line = line_no;
      } else if (name == "object") {
        section = Section::Object;
      } else if (name == "commands") {
        section = Section::Commands;
      } else {
        diags.push_back({line_no, indent, "unknown section [" + name + "]"});
        section = Section::None;
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      diags.push_back({line_no, indent, "expected 'key = value'"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value_raw = line.substr(eq + 1);
    const std::string value(trim(value_raw));
    const auto value_off = value_raw.find_first_not_of(" \t");
    const int value_col = static_cast<int>(eq) + 2 + (value_off == std::string_view::npos ? 0 : static_cast<int>(value_off));
    if (key.empty()) {
      diags.push_back({line_no, indent, "missing key before '='"});
      continue;
    }
    if (value.empty()) {
      diags.push_back({line_no, value_col, "missing value for '" + key + "'"});
      continue;
    }

    switch (section) {
      case Section::None:
        diags.push_back({line_no, indent, "key '" + key + "' outside of a section"});
        break;
      case Section::Gripper: {
        const ConfigField* f = find_config_field(key);
        if (!f) {
          diags.push_back({line_no, indent, "unknown key '" + key + "' in [gripper]"});
          break;
        }
        if (overrides.count(key)) {
          diags.push_back({line_no, indent, "duplicate key '" + key + "'"});
          break;
        }
        double v = 0.0;
        if (!parse_double(value, v)) {
          diags.push_back({line_no, value_col, "expected a number for '" + key + "'"});
          break;
        }
        if (f->unit == FieldUnit::Length && (zero_allowed(key) ? v < 0.0 : v <= 0.0)) {
          diags.push_back({line_no, value_col, "'" + key + "' must be " + (zero_allowed(key) ? "non-negative" : "positive")});
          break;
        }
        overrides[key] = v;
        break;
      }
      case Section::Object: {
        if (std::find(object_keys().begin(), object_keys().end(), key) == object_keys().end()) {
          diags.push_back({line_no, indent, "unknown key '" + key + "' in [object]"});
          break;
        }
        if (object.count(key)) {
          diags.push_back({line_no, indent, "duplicate key '" + key + "'"});
          break;
        }
        object[key] = {value, line_no, value_col};
        break;
      }
      case Section::Commands: {
        Verb verb;
        if (!parse_verb(key, verb)) {
          diags.push_back({line_no, indent, "unknown command '" + key + "'"});
          break;
        }
        if (value == "all") {
          sc.commands.push_back({verb, std::nullopt});
          break;
        }
        int n = 0;
        const auto r = std::from_chars(value.data(), value.data() + value.size(), n);
        if (r.ec != std::errc() || r.ptr != value.data() + value.size() || n <= 0) {
          diags.push_back({line_no, value_col, "step count must be a positive integer or 'all'"});
          break;
        }
        sc.commands.push_back({verb, n});
        break;
      }
    }
  }

  // Object section.
  ObjectSpec& desc = sc.object_spec;
  if (auto it = object.find("shape"); it != object.end()) {
    const std::string& v = it->second.value;
    if (v == "circle") {
      desc.kind = ShapeKind::Circle;
    } else if (v == "rectangle") {
      desc.kind = ShapeKind::Rectangle;
    } else if (v == "slab") {
      desc.kind = ShapeKind::Slab;
    } else if (v == "none") {
      desc.kind = ShapeKind::None;
    } else {
      diags.push_back({it->second.line, it->second.column, "unknown shape '" + v + "'"});
    }
  } else if (!object.empty()) {
    const auto& first = object.begin()->second;
    diags.push_back({first.line, 1, "[object] needs a 'shape'"});
  }
  const ShapeKeys sk = keys_for(desc.kind);
  for (const auto& [key, e] : object) {
    if (!object.count("shape")) break;
    if (std::find(sk.allowed.begin(), sk.allowed.end(), key) == sk.allowed.end()) {
      diags.push_back({e.line, 1, "'" + key + "' does not apply to shape " + std::string(to_string(desc.kind))});
      continue;
    }
    if (key == "shape") continue;
    if (key == "name") {
      desc.name = e.value;
      continue;
    }
    if (key == "on_surface") {
      if (e.value == "true") {
        desc.on_surface = true;
      } else if (e.value == "false") {
        desc.on_surface = false;
      } else {
        diags.push_back({e.line, e.column, "on_surface must be true or false"});
      }
      continue;
    }
    double v = 0.0;
    if (!parse_double(e.value, v)) {
      diags.push_back({e.line, e.column, "expected a number for '" + key + "'"});
      continue;
    }
    const bool size_key = key == "diameter" || key == "width" || key == "height";
    if (size_key && v <= 0.0) {
      diags.push_back({e.line, e.column, "'" + key + "' must be positive"});
      continue;
    }
    if (key == "thickness" && v < 0.0) {
      diags.push_back({e.line, e.column, "'thickness' must be non-negative"});
      continue;
    }
    if (key == "diameter") desc.diameter = v;
    if (key == "width") desc.width = v;
    if (key == "height") desc.height = v;
    if (key == "thickness") desc.thickness = v;
    if (key == "center_x") desc.center_x = v;
    if (key == "center_y") desc.center_y = v;
    if (key == "rotation") desc.rotation_deg = v;
    if (key == "surface_y") desc.surface_y = v;
  }
  for (const auto& req : sk.required) {
    if (!object.count(req)) {
      const int at = object.count("shape") ? object.at("shape").line : line_no;
      diags.push_back({at, 1, "shape " + std::string(to_string(desc.kind)) + " needs '" + req + "'"});
    }
  }

  for (const auto& f : config_fields()) {
    if (auto it = overrides.find(f.name); it != overrides.end()) sc.overrides.emplace_back(f.name, it->second);
  }
  if (diags.empty()) {
    try {
      sc.config().validate();
    } catch (const std::invalid_argument& e) {
      diags.push_back({gripper_line, 1, std::string("invalid gripper configuration: ") + e.what()});
    }
  }
  if (sc.commands.empty()) sc.commands.push_back({Verb::Close, std::nullopt});
  if (!diags.empty()) {
    std::stable_sort(diags.begin(), diags.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    throw ScenarioError(std::move(diags));
  }
  return sc;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  if (!s.overrides.empty()) {
    out += "[gripper]\n";
    for (const auto& [k, v] : s.overrides) out += k + " = " + num(v) + "\n";
    out += "\n";
  }
  const ObjectSpec& o = s.object_spec;
  out += "[object]\n";
  out += "shape = " + std::string(to_string(o.kind)) + "\n";
  if (!o.name.empty()) out += "name = " + o.name + "\n";
  switch (o.kind) {
    case ShapeKind::None: break;
    case ShapeKind::Circle:
      out += "diameter = " + num(o.diameter) + "\n";
      out += "center_x = " + num(o.center_x) + "\n";
      out += "center_y = " + num(o.center_y) + "\n";
      break;
    case ShapeKind::Rectangle:
      out += "width = " + num(o.width) + "\n";
      out += "height = " + num(o.height) + "\n";
      out += "center_x = " + num(o.center_x) + "\n";
      out += "center_y = " + num(o.center_y) + "\n";
      out += "rotation = " + num(o.rotation_deg) + "\n";
      break;
    case ShapeKind::Slab:
      out += "width = " + num(o.width) + "\n";
      out += "thickness = " + num(o.thickness) + "\n";
      out += "center_x = " + num(o.center_x) + "\n";
      out += "surface_y = " + num(o.surface_y) + "\n";
      out += std::string("on_surface = ") + (o.on_surface ? "true" : "false") + "\n";
      break;
  }
  out += "\n[commands]\n";
  for (const auto& c : s.commands) {
    out += std::string(to_string(c.verb)) + " = " + (c.steps ? std::to_string(*c.steps) : std::string("all")) + "\n";
  }
  return out;
}

}  // namespace rgrip
