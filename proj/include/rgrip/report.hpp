#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rgrip/gripper_sim.hpp"

namespace rgrip {

inline constexpr std::string_view kToolName = "rgrip";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Fixed-order JSON document for one run. Numbers are printed with six
/// decimals so identical inputs give identical bytes.
std::string report_json(const GraspReport& r, const GripperConfig& cfg, const SceneObject& obj,
                        const std::string& scenario_name);

/// One SVG frame in world millimetres (y flipped so the palm is at the bottom).
std::string frame_svg(const GripperConfig& cfg, const SceneObject& obj, const TraceFrame& frame,
                      const std::string& title);

/// Final state of a run as a trace frame, with contacts re-detected.
TraceFrame summary_frame(const GraspReport& r, const GripperConfig& cfg, const SceneObject& obj);

/// File name and content of every trace frame followed by the summary frame.
std::vector<std::pair<std::string, std::string>> svg_frames(const GraspReport& r, const GripperConfig& cfg,
                                                            const SceneObject& obj, const std::string& scenario_name);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes through a temporary file in the same directory and renames it
/// into place. Throws IoError with the system message.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rgrip
