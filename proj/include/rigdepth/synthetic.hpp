#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rigdepth/sample.hpp"

namespace rigdepth {

// Geometry of the outward-looking camera ring.
struct RigSpec {
  int camera_count = 6;
  int width = 96;
  int height = 64;
  double hfov_degrees = 76.0;   // horizontal field of view
  double radius = 1.0;          // ring radius, metres from rig center
  double mount_height = 1.45;   // metres above the ground plane
  double pitch_down = 0.12;     // radians each camera tilts toward the ground
};

// Camera ring: index 0 faces forward, then alternating left/right pairs and
// the rear camera last.
std::vector<CameraModel> build_rig(const RigSpec& spec);

// Procedural world and rig trajectory for one three-frame snippet.
struct SceneSpec {
  std::uint64_t seed = 7;
  int box_count = 14;
  double far_plane = 500.0;     // hits beyond this count as sky
  double speed = 0.8;           // metres travelled per frame
  double yaw_rate = 0.015;      // radians turned per frame
  double body_fraction = 0.10;  // ego-body band height, fraction of image
};

// Renders a fully consistent multi-camera snippet: every frame is a ray-cast
// view of one static textured world (ground plane plus boxes) from a rig
// moving on a gentle arc.  Ground truth holds the middle frame's z-depth;
// sky and ego-body pixels are marked invalid.
MultiCamSample make_sample(const RigSpec& rig_spec, const SceneSpec& scene);

// The standard six-camera sample used by examples and round-trip tests.
MultiCamSample default_sample();

// Directory layout: rig.json, trajectory.json, and per camera
// cam<i>/{image_prev,image_curr,image_next}.png plus gt_depth.pfm,
// gt_valid.png and self_occlusion.png for the middle frame.
void save_sample(const MultiCamSample& sample, const std::string& dir);
MultiCamSample load_sample(const std::string& dir);

}  // namespace rigdepth
