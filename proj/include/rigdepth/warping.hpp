#pragma once

#include <cstdint>
#include <vector>

#include "rigdepth/geometry.hpp"
#include "rigdepth/image.hpp"

namespace rigdepth {

// Coordinates within this distance outside the image boundary are clamped
// onto it and kept valid; identity warps would otherwise lose their border
// pixels to pure floating-point rounding.
inline constexpr double kEdgeTol = 1e-9;

// Per-target-pixel source coordinates (continuous pixels) plus a validity
// bit.  Valid means: the unprojected point landed in front of the source
// camera and the coordinate stays inside [0, W-1] x [0, H-1] (after the
// kEdgeTol boundary clamp), so all four bilinear neighbors exist.
struct WarpField {
  int width = 0;   // target (camera i) dimensions
  int height = 0;
  int source_width = 0;  // source (camera j) dimensions the coords live in
  int source_height = 0;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<std::uint8_t> valid;

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }
};

// Shared core: unproject every target pixel of cam_i with its depth, move it
// by `transform` (camera-i frame to source-camera frame), project into
// cam_j.  The three public warps below differ only in the transform they
// pass, which is what makes their reduction identities exact.
WarpField warp_with_transform(const DepthField& depth,
                              const RigidTransform& transform,
                              const CameraModel& cam_i,
                              const CameraModel& cam_j);

// Same camera, different timestep: transform = predicted ego-motion.
WarpField warp_temporal(const DepthField& depth, const RigidTransform& ego,
                        const CameraModel& cam);

// Different camera, same timestep: transform = relative extrinsics.
WarpField warp_spatial(const DepthField& depth_i, const CameraModel& cam_i,
                       const CameraModel& cam_j);

// Different camera, different timestep: relative extrinsics composed with
// the target camera's own predicted ego-motion.  With ego = identity this
// equals warp_spatial bit for bit; with cam_j = cam_i it equals
// warp_temporal bit for bit.
WarpField warp_spatiotemporal(const DepthField& depth_i,
                              const RigidTransform& ego_i,
                              const CameraModel& cam_i,
                              const CameraModel& cam_j);

struct SynthesisResult {
  ImagePlane image;
  BinaryMask mask;
};

// Bilinear sampling of `source` at the warp coordinates.  Invalid pixels
// come back as 0 with a 0 mask bit.
SynthesisResult synthesize(const ImagePlane& source, const WarpField& warp);

// Non-overlap mask: 1 iff the warp is valid and a nearest-neighbor sample of
// a constant-one source lands inside the image.  Recomputed from current
// predictions on every evaluation.
BinaryMask non_overlap_mask(const WarpField& warp);

}  // namespace rigdepth
