#pragma once

#include <array>
#include <vector>

#include "rigdepth/geometry.hpp"
#include "rigdepth/image.hpp"

namespace rigdepth {

// Frame indices within a three-frame snippet.
inline constexpr int kPrev = 0;
inline constexpr int kCurr = 1;
inline constexpr int kNext = 2;

// One multi-camera optimization sample: a synchronized rig, three frames per
// camera, and ground truth for the middle frame.
struct MultiCamSample {
  std::vector<CameraModel> rig;
  // images[cam][kPrev | kCurr | kNext]
  std::vector<std::array<ImagePlane, 3>> images;
  // ground truth at the current frame
  std::vector<DepthField> gt_depth;
  std::vector<BinaryMask> gt_valid;      // 0 where depth is undefined (sky)
  std::vector<BinaryMask> self_occlusion;  // 0 where the ego body blocks view
  // rig-to-world poses at the three frames
  std::array<RigidTransform, 3> trajectory;

  int camera_count() const { return static_cast<int>(rig.size()); }

  // Ground-truth ego-motion of one camera: maps current-frame camera points
  // into the context frame (direction 0 = previous, 1 = next).  Derived from
  // the trajectory: X_cam^-1 * W_context^-1 * W_current * X_cam.
  RigidTransform gt_ego(int cam, int direction) const {
    const RigidTransform& x = rig[cam].extrinsics;
    const RigidTransform& w_cur = trajectory[kCurr];
    const RigidTransform& w_ctx = trajectory[direction == 0 ? kPrev : kNext];
    return compose(compose(inverse(x), compose(inverse(w_ctx), w_cur)), x);
  }
};

}  // namespace rigdepth
