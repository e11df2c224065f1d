// Command-line front end: run scenarios, sweep mode ranges, calibrate.
#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rgrip/calibration.hpp"
#include "rgrip/report.hpp"
#include "rgrip/scenario.hpp"

namespace fs = std::filesystem;
using namespace rgrip;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

struct Failure {
  int code;
  std::string message;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string() + ": " + std::strerror(errno));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Scenario load_scenario(const fs::path& p) {
  const std::string text = read_file(p);
  try {
    return parse_scenario(text);
  } catch (const ScenarioError& e) {
    std::string msg;
    for (const auto& d : e.diagnostics()) {
      if (!msg.empty()) msg += "\n";
      msg += format_diagnostic(p.string(), d);
    }
    throw Failure{kExitInvalid, msg};
  }
}

struct JobResult {
  std::string report;
  int code{kExitOk};
  std::string error;
};

JobResult run_job(const fs::path& file, const std::optional<fs::path>& out, const std::optional<fs::path>& svg_dir) {
  JobResult res;
  try {
    const Scenario sc = load_scenario(file);
    const GripperConfig cfg = sc.config();
    const SceneObject obj = sc.object();
    const std::string name = file.stem().string();
    GraspReport r;
    try {
      r = run_commands(cfg, obj, sc.commands);
    } catch (const std::exception& e) {
      throw Failure{kExitInvalid, file.string() + ": simulation rejected the scenario: " + e.what()};
    }
    res.report = report_json(r, cfg, obj, name);
    if (out) write_file_atomic(*out, res.report);
    if (svg_dir) {
      std::error_code ec;
      fs::create_directories(*svg_dir, ec);
      if (ec) throw IoError("cannot create " + svg_dir->string() + ": " + ec.message());
      for (const auto& [fname, content] : svg_frames(r, cfg, obj, name)) write_file_atomic(*svg_dir / fname, content);
    }
  } catch (const Failure& f) {
    res.code = f.code;
    res.error = f.message;
  } catch (const IoError& e) {
    res.code = kExitIo;
    res.error = e.what();
  } catch (const std::invalid_argument& e) {
    res.code = kExitInvalid;
    res.error = file.string() + ": " + e.what();
  }
  return res;
}

int cmd_run(const std::vector<std::string>& files, const std::string& out, const std::string& svg) {
  const bool many = files.size() > 1;
  if (many && !out.empty()) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
      std::cerr << "cannot create " << out << ": " << ec.message() << "\n";
      return kExitIo;
    }
  }
  std::vector<std::future<JobResult>> jobs;
  for (const auto& f : files) {
    const fs::path file(f);
    std::optional<fs::path> out_path;
    std::optional<fs::path> svg_path;
    if (!out.empty()) out_path = many ? fs::path(out) / (file.stem().string() + ".json") : fs::path(out);
    if (!svg.empty()) svg_path = many ? fs::path(svg) / file.stem() : fs::path(svg);
    jobs.push_back(std::async(std::launch::async, run_job, file, out_path, svg_path));
  }
  int code = kExitOk;
  for (auto& j : jobs) {
    const JobResult r = j.get();
    if (r.code != kExitOk) {
      std::cerr << r.error << "\n";
      code = std::max(code, r.code);
    } else if (out.empty()) {
      std::cout << r.report;
    }
  }
  return code;
}

GripperConfig load_config(const std::string& path) {
  if (path.empty()) return GripperConfig{};
  return load_scenario(path).config();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int cmd_sweep(const std::string& config, bool json) {
  const GripperConfig cfg = load_config(config);
  const auto ranges = sweep_ranges(cfg);
  if (json) {
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, config_hash(cfg));
    std::cout << "{\n  \"config_hash\": \"" << hash << "\",\n";
    std::cout << "  \"modes\": [\n";
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      const ModeRange& m = ranges[i];
      std::cout << "    {\"mode\": " << m.mode << ", \"reachable\": " << (m.reachable ? "true" : "false");
      if (m.reachable) std::cout << ", \"min\": " << fmt("%.6f", m.min) << ", \"max\": " << fmt("%.6f", m.max);
      std::cout << "}" << (i + 1 < ranges.size() ? "," : "") << "\n";
    }
    std::cout << "  ]\n}\n";
    return kExitOk;
  }
  std::cout << "mode  min_mm   max_mm\n";
  for (const ModeRange& m : ranges) {
    if (m.reachable) {
      std::cout << "   " << m.mode << "  " << fmt("%7.2f", m.min) << "  " << fmt("%7.2f", m.max) << "\n";
    } else {
      std::cout << "   " << m.mode << "  unreachable\n";
    }
  }
  return kExitOk;
}

int cmd_modes() {
  std::cout << "1  parallel grasp, fingers not reconfigured: phalanges keep their rest length and the\n"
               "   fingertips translate towards each other\n"
               "2  proximal enveloping grasp: a proximal contact stops the MCP and the retractable\n"
               "   phalanges shorten around the object\n"
               "3  translational grasp: the finger bases slide inward along the rail while the\n"
               "   fingers stay upright, so the fingertips move horizontally\n"
               "4  remote parallel grasp: reconfigured to the locked outer position, then closed\n"
               "   as in mode 1\n"
               "5  remote enveloping grasp: reconfigured, then enveloping as in mode 2\n";
  return kExitOk;
}

int cmd_calibrate(const std::string& config) {
  const GripperConfig cfg = load_config(config);
  const CalibrationResult r = calibrate(cfg);
  std::cout << "# calibrated constants (mm, deg)\n[gripper]\n";
  for (const char* key : {"L2c", "kappa", "dip_flex_limit", "pip_flex_limit", "mcp_rest", "palm_height",
                          "palm_half_width", "drive_limit"}) {
    const ConfigField* f = find_config_field(key);
    std::cout << key << " = " << fmt("%.9f", get_field(*f, r.config)) << "\n";
  }
  std::cout << "# L2 minimum " << fmt("%.3f", r.middle.L2_min) << " mm, L1 workspace minimum "
            << fmt("%.3f", r.L1_workspace_min) << " mm\n";
  std::cout << "# hollow diameters " << fmt("%.3f", r.base.hollow_proximal) << " / "
            << fmt("%.3f", r.base.hollow_remote) << " mm after " << r.base.iterations << " iterations\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-static simulator of a three-finger gripper with retractable phalanges"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string out;
  std::string svg;
  auto* run = app.add_subcommand("run", "Run scenario files and write JSON reports");
  run->add_option("files", files, "Scenario files")->required();
  run->add_option("--out", out, "Report path, or a directory when several files are given");
  run->add_option("--svg", svg, "Directory for SVG frames (one subdirectory per file when several are given)");

  std::string config;
  bool json = false;
  auto* sweep = app.add_subcommand("sweep", "Aperture range of each grasp mode");
  sweep->add_option("--config", config, "Scenario file whose [gripper] section is used");
  sweep->add_flag("--json", json, "Structured output");

  auto* modes = app.add_subcommand("modes", "Describe the five grasp modes");

  auto* cal = app.add_subcommand("calibrate", "Search the unpublished constants and print them");
  cal->add_option("--config", config, "Scenario file whose [gripper] section is used");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run) return cmd_run(files, out, svg);
    if (*sweep) return cmd_sweep(config, json);
    if (*modes) return cmd_modes();
    if (*cal) return cmd_calibrate(config);
  } catch (const Failure& f) {
    std::cerr << f.message << "\n";
    return f.code;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
