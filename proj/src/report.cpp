#include "rgrip/report.hpp"

#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <system_error>

#include "rgrip/assembly.hpp"

namespace rgrip {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  // Avoid "-0.000000" so sign noise cannot change the bytes.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

// Pretty-printing JSON emitter; keys come out in call order.
class Json {
 public:
  void begin_object(std::string_view key = {}) { open(key, '{'); }
  void end_object() { close('}'); }
  void begin_array(std::string_view key = {}) { open(key, '['); }
  void end_array() { close(']'); }

  void number(std::string_view key, double v) { raw(key, fixed(v, 6)); }
  void integer(std::string_view key, long long v) { raw(key, std::to_string(v)); }
  void boolean(std::string_view key, bool v) { raw(key, v ? "true" : "false"); }
  void string(std::string_view key, std::string_view v) { raw(key, "\"" + escape(v) + "\""); }
  void null(std::string_view key) { raw(key, "null"); }
  void optional(std::string_view key, const std::optional<double>& v) {
    if (v) {
      number(key, *v);
    } else {
      null(key);
    }
  }
  void point(std::string_view key, PlanarPoint p) { raw(key, "[" + fixed(p.x, 6) + ", " + fixed(p.y, 6) + "]"); }

  std::string str() const { return out_ + "\n"; }

 private:
  void prefix(std::string_view key) {
    if (!first_.empty()) {
      if (!first_.back()) out_ += ",";
      first_.back() = false;
      out_ += "\n" + std::string(2 * first_.size(), ' ');
    }
    if (!key.empty()) out_ += "\"" + escape(key) + "\": ";
  }
  void open(std::string_view key, char bracket) {
    prefix(key);
    out_ += bracket;
    first_.push_back(true);
  }
  void close(char bracket) {
    const bool empty = first_.back();
    first_.pop_back();
    if (!empty) out_ += "\n" + std::string(2 * first_.size(), ' ');
    out_ += bracket;
  }
  void raw(std::string_view key, const std::string& v) {
    prefix(key);
    out_ += v;
  }

  std::string out_;
  std::vector<bool> first_;
};

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

void write_transmission(Json& j, const GripperConfig& cfg, const TransmissionState& t) {
  j.begin_object("transmission");
  j.number("motor_angle_deg", rad_to_deg(t.motor_angle));
  j.number("d1_deg", rad_to_deg(t.d1));
  j.number("base_translation", t.base);
  j.number("rack_position", rack_position(cfg, t));
  j.string("lock_stage", to_string(t.lock.stage));
  j.number("lock_spring_compression", t.lock.spring_compression);
  j.number("tension_spring_extension", t.tension_spring_extension());
  j.end_object();
}

void write_finger_state(Json& j, const FingerState& s) {
  j.string("behavior", to_string(s.behavior));
  j.number("drive_deg", rad_to_deg(s.drive));
  j.number("theta1_deg", rad_to_deg(s.theta1));
  j.number("theta2_deg", rad_to_deg(s.theta2));
  j.number("theta3_deg", rad_to_deg(s.theta3));
  j.number("L1", s.L1);
  j.number("L2", s.L2);
  j.number("L3", s.L3);
  j.begin_array("contact_fixed");
  for (Phalanx p : {Phalanx::Proximal, Phalanx::Middle, Phalanx::Distal}) {
    if (s.contact_fixed.contains(p)) j.string({}, to_string(p));
  }
  j.end_array();
  j.boolean("saturated", s.saturated);
  j.boolean("blocked", s.blocked);
}

void write_contacts(Json& j, const std::vector<DetectedContact>& contacts) {
  j.begin_array("contacts");
  for (const auto& c : contacts) {
    j.begin_object();
    j.integer("finger", c.finger);
    j.string("phalanx", to_string(c.phalanx));
    j.point("point", c.point);
    j.end_object();
  }
  j.end_array();
}

void write_object(Json& j, const SceneObject& o) {
  j.begin_object("object");
  j.string("shape", to_string(o.kind));
  j.string("name", o.name);
  switch (o.kind) {
    case ShapeKind::None: break;
    case ShapeKind::Circle:
      j.number("diameter", o.diameter);
      j.point("center", o.center);
      break;
    case ShapeKind::Rectangle:
      j.number("width", o.width);
      j.number("height", o.height);
      j.point("center", o.center);
      j.number("rotation_deg", rad_to_deg(o.rotation));
      break;
    case ShapeKind::Slab:
      j.number("width", o.width);
      j.number("thickness", o.thickness);
      j.number("surface_y", surface_height(o));
      j.number("center_x", o.center.x);
      j.boolean("on_surface", o.on_surface);
      break;
  }
  j.end_object();
}

}  // namespace

std::string report_json(const GraspReport& r, const GripperConfig& cfg, const SceneObject& obj,
                        const std::string& scenario_name) {
  Json j;
  j.begin_object();

  j.begin_object("provenance");
  j.string("tool", kToolName);
  j.string("version", kToolVersion);
  j.string("scenario", scenario_name);
  j.string("config_hash", hex(config_hash(cfg)));
  j.number("step_deg", rad_to_deg(cfg.step));
  j.end_object();

  write_object(j, obj);

  j.begin_object("result");
  j.integer("mode", r.mode);
  j.boolean("success", r.success);
  j.string("termination", r.termination);
  j.optional("aperture_first_contact", r.aperture_first_contact);
  j.number("aperture", r.aperture);
  j.integer("steps", r.steps);
  j.string("rack_segment", to_string(r.segment));
  write_transmission(j, cfg, r.transmission);
  j.optional("max_surface_gap", r.max_surface_gap);
  j.begin_array("warnings");
  for (const auto& w : r.warnings) j.string({}, w);
  j.end_array();
  j.end_object();

  j.begin_array("fingers");
  for (std::size_t i = 0; i < r.fingers.size(); ++i) {
    const FingerSummary& f = r.fingers[i];
    j.begin_object();
    j.integer("index", static_cast<long long>(i));
    write_finger_state(j, f.state);
    j.begin_object("contact_lengths");
    j.begin_array("S");
    for (double s : f.lengths.S) j.number({}, s);
    j.end_array();
    j.begin_array("R");
    for (double s : f.lengths.R) j.number({}, s);
    j.end_array();
    j.number("total", f.lengths.total);
    j.number("R_total", f.lengths.R_total);
    j.end_object();
    j.begin_object("spring_forces");
    j.number("mcp", f.forces.mcp);
    j.number("pip", f.forces.pip);
    j.number("dip", f.forces.dip);
    j.end_object();
    j.end_object();
  }
  j.end_array();

  j.begin_array("trace");
  for (const TraceFrame& t : r.trace) {
    j.begin_object();
    j.integer("step", t.step);
    j.string("event", t.event);
    j.number("aperture", t.aperture);
    j.number("d1_deg", rad_to_deg(t.transmission.d1));
    j.number("base_translation", t.transmission.base);
    j.string("lock_stage", to_string(t.transmission.lock.stage));
    j.begin_array("fingers");
    for (const FingerState& s : t.fingers) {
      j.begin_object();
      write_finger_state(j, s);
      j.end_object();
    }
    j.end_array();
    write_contacts(j, t.contacts);
    j.end_object();
  }
  j.end_array();

  j.end_object();
  return j.str();
}

namespace {

std::string n3(double v) { return fixed(v, 3); }

// World y grows away from the palm; SVG y grows downwards.
std::string xy(PlanarPoint p) { return n3(p.x) + "," + n3(-p.y); }

std::string polyline(const std::vector<PlanarPoint>& pts, const char* cls) {
  std::string s = "  <polyline class=\"";
  s += cls;
  s += "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += " ";
    s += xy(pts[i]);
  }
  return s + "\"/>\n";
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string frame_svg(const GripperConfig& cfg, const SceneObject& obj, const TraceFrame& frame,
                      const std::string& title) {
  GripperAssembly a{cfg, frame.fingers, frame.transmission};
  const double half = cfg.palm_half_width + cfg.finger.geometry.D1 + cfg.transmission.base_travel / 2.0 +
                      cfg.finger.geometry.L1_rest + 40.0;
  const double top = cfg.palm_height + cfg.finger.geometry.L1_rest + cfg.finger.geometry.L2_rest +
                     cfg.finger.geometry.L3_rest + 60.0;
  const double bottom = -20.0;

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + n3(2 * half) + "mm\" height=\"" + n3(top - bottom) +
       "mm\" viewBox=\"" + n3(-half) + " " + n3(-top) + " " + n3(2 * half) + " " + n3(top - bottom) + "\">\n";
  s += "  <title>" + xml_escape(title) + "</title>\n";
  s += "  <style>polyline{fill:none;stroke-width:2;stroke-linejoin:round}"
       ".proximal{stroke:#1f5fa8}.middle{stroke:#2f9e44}.distal{stroke:#c2410c}"
       ".object{fill:#e5e7eb;stroke:#374151;stroke-width:0.8}.palm{stroke:#111;stroke-width:3}"
       ".surface{stroke:#6b7280;stroke-width:1;stroke-dasharray:4 2}.contact{stroke:#dc2626;stroke-width:1}"
       "text{font:6px sans-serif}</style>\n";
  s += "  <line class=\"palm\" x1=\"" + n3(-half) + "\" y1=\"" + n3(-cfg.palm_height) + "\" x2=\"" + n3(half) +
       "\" y2=\"" + n3(-cfg.palm_height) + "\"/>\n";

  switch (obj.kind) {
    case ShapeKind::None: break;
    case ShapeKind::Circle:
      s += "  <circle class=\"object\" cx=\"" + n3(obj.center.x) + "\" cy=\"" + n3(-obj.center.y) + "\" r=\"" +
           n3(obj.diameter / 2.0) + "\"/>\n";
      break;
    case ShapeKind::Rectangle:
    case ShapeKind::Slab: {
      if (obj.kind == ShapeKind::Slab) {
        const double h = surface_height(obj);
        s += "  <line class=\"surface\" x1=\"" + n3(-half) + "\" y1=\"" + n3(-h) + "\" x2=\"" + n3(half) +
             "\" y2=\"" + n3(-h) + "\"/>\n";
      }
      s += "  <polygon class=\"object\" points=\"";
      const auto c = corners(obj);
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += " ";
        s += xy(c[i]);
      }
      s += "\"/>\n";
      break;
    }
  }

  for (int f = 0; f < 3; ++f) {
    s += polyline(phalanx_polyline(a, f, Phalanx::Proximal), "proximal");
    s += polyline(phalanx_polyline(a, f, Phalanx::Middle), "middle");
    s += polyline(phalanx_polyline(a, f, Phalanx::Distal), "distal");
  }

  for (const DetectedContact& c : frame.contacts) {
    const double r = 2.5;
    s += "  <path class=\"contact\" d=\"M" + xy(c.point + PlanarPoint{-r, -r}) + " L" + xy(c.point + PlanarPoint{r, r}) +
         " M" + xy(c.point + PlanarPoint{-r, r}) + " L" + xy(c.point + PlanarPoint{r, -r}) + "\"/>\n";
  }

  s += "  <text x=\"" + n3(-half + 4) + "\" y=\"" + n3(-top + 8) + "\">step " + std::to_string(frame.step) +
       (frame.event.empty() ? std::string() : " " + xml_escape(frame.event)) + " aperture " + fixed(frame.aperture, 2) + " mm</text>\n";
  s += "</svg>\n";
  return s;
}

TraceFrame summary_frame(const GraspReport& r, const GripperConfig& cfg, const SceneObject& obj) {
  TraceFrame t;
  t.step = r.steps;
  t.event = "summary";
  t.aperture = r.aperture;
  t.transmission = r.transmission;
  for (std::size_t i = 0; i < r.fingers.size(); ++i) t.fingers[i] = r.fingers[i].state;
  t.contacts = contact_detect(GripperAssembly{cfg, t.fingers, t.transmission}, obj);
  return t;
}

std::vector<std::pair<std::string, std::string>> svg_frames(const GraspReport& r, const GripperConfig& cfg,
                                                            const SceneObject& obj, const std::string& scenario_name) {
  std::vector<std::pair<std::string, std::string>> out;
  char name[32];
  int index = 0;
  const auto emit = [&](const TraceFrame& t) {
    std::snprintf(name, sizeof name, "frame_%05d.svg", index++);
    out.emplace_back(name, frame_svg(cfg, obj, t, scenario_name));
  };
  for (const TraceFrame& t : r.trace) emit(t);
  emit(summary_frame(r, cfg, obj));
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + ": " + std::strerror(errno));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("cannot write " + tmp.string() + ": " + std::strerror(errno));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    const std::string msg = ec.message();
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename to " + path.string() + ": " + msg);
  }
}

}  // namespace rgrip
