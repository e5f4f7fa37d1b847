#pragma once

#include <array>
#include <vector>

#include "rigdepth/geometry.hpp"
#include "rigdepth/image.hpp"
#include "rigdepth/losses.hpp"
#include "rigdepth/sample.hpp"

namespace rigdepth {

// Six-parameter camera motion: translation plus intrinsic Z-Y-X Euler
// angles.  This is the representation the optimizer steps in; to_rigid()
// produces the transform the warps consume.
struct PoseParams {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  EulerAngles euler{0.0, 0.0, 0.0};

  RigidTransform to_rigid() const {
    RigidTransform t;
    t.rotation = euler_to_rotation(euler);
    t.translation = translation;
    return t;
  }

  // Euler angles are extracted with the usual pitch = +-pi/2 degeneracy;
  // callers converting arbitrary rotations should check near_gimbal first.
  static PoseParams from_rigid(const RigidTransform& t) {
    PoseParams p;
    p.translation = t.translation;
    p.euler = rotation_to_euler(t.rotation).angles;
    return p;
  }
};

struct PoseGradient {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Vector3d euler = Eigen::Vector3d::Zero();  // d/droll, d/dpitch, d/dyaw
};

// Gradient of the total objective with respect to every free parameter.
struct GradientBundle {
  // log_depth[camera][pixel], same layout as DepthField::log_depth
  std::vector<std::vector<double>> log_depth;
  // poses[camera][direction], direction 0 = previous, 1 = next
  std::vector<std::array<PoseGradient, 2>> poses;

  void reset(const std::vector<DepthField>& depths) {
    log_depth.resize(depths.size());
    for (std::size_t i = 0; i < depths.size(); ++i) {
      log_depth[i].assign(depths[i].pixel_count(), 0.0);
    }
    poses.assign(depths.size(), {PoseGradient{}, PoseGradient{}});
  }
};

// Evaluates the objective together with its exact gradient.  The returned
// breakdown is bit-identical to total_loss on the same inputs (with poses
// converted through to_rigid).  Masks and term counts are treated as
// constants of the current configuration.
LossBreakdown objective_with_gradients(
    const MultiCamSample& sample, const std::vector<DepthField>& depths,
    const std::vector<std::array<PoseParams, 2>>& poses,
    const LossWeights& weights, const ObjectiveToggles& toggles,
    GradientBundle& grad);

}  // namespace rigdepth
