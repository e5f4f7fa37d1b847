#pragma once

#include <array>
#include <string>
#include <vector>

#include "rigdepth/geometry.hpp"
#include "rigdepth/image.hpp"
#include "rigdepth/sample.hpp"

namespace rigdepth {

// SSIM stabilizing constants for a [0,1] intensity range.
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

struct LossWeights {
  double alpha = 0.85;     // SSIM share of the photometric loss
  double alpha_t = 0.1;    // pose-consistency translation weight
  double alpha_r = 0.1;    // pose-consistency rotation weight
  double lambda_s = 0.1;   // cross-camera (spatial + spatio-temporal) weight
  double lambda_t = 1.0;   // same-camera temporal weight
  double lambda_d = 0.001;  // smoothness weight
};

// Which objective components participate.  Cross-camera photometric terms
// and pose consistency can be switched off independently; self-occlusion
// masks apply to every photometric term when enabled.
struct ObjectiveToggles {
  bool use_spatial = true;
  bool use_spatiotemporal = true;
  bool use_pose_consistency = true;
  bool use_self_occlusion_masks = true;
};

// ---------------------------------------------------------------------------
// per-pixel losses
// ---------------------------------------------------------------------------

// Per-pixel SSIM between a and b over a 3x3 box window restricted to the
// mask (population statistics over the valid pixels inside each cropped
// window; channels averaged).  Zero at masked-out centers.
ImagePlane ssim(const ImagePlane& a, const ImagePlane& b,
                const BinaryMask& mask);

// alpha * (1 - SSIM)/2 + (1-alpha) * L1 per pixel (L1 averaged over
// channels), zeroed where the mask is 0.
ImagePlane photometric_loss(const ImagePlane& target, const ImagePlane& synth,
                            const BinaryMask& mask, double alpha);

struct MaskedMean {
  double value = 0.0;  // 0 when count == 0
  long count = 0;
};

// Mean of the loss map over pixels passing both masks.
MaskedMean masked_photometric_loss(const ImagePlane& loss_map,
                                   const BinaryMask& m_no,
                                   const BinaryMask& m_so);

// Edge-aware first-order smoothness on mean-normalized depth:
//   mean |dx(d/mu)| * exp(-|dx I|) + mean |dy(d/mu)| * exp(-|dy I|)
// with image gradients averaged over channels.
double smoothness_loss(const DepthField& depth, const ImagePlane& image);

// ---------------------------------------------------------------------------
// pose consistency
// ---------------------------------------------------------------------------

struct PoseConsistencyResult {
  double t_loss = 0.0;   // sum over non-canonical cameras of |t_1 - t~_j|^2
  double r_loss = 0.0;   // sum of squared per-axis Euler differences
  double weighted = 0.0;  // alpha_t * t_loss + alpha_r * r_loss
  bool near_gimbal = false;
};

// Converts every camera's predicted motion into the frame of the canonical
// camera (index 0) and penalizes disagreement with the canonical camera's
// own prediction.
PoseConsistencyResult pose_consistency_loss(
    const std::vector<RigidTransform>& poses,
    const std::vector<CameraModel>& rig, const LossWeights& weights);

// ---------------------------------------------------------------------------
// full objective
// ---------------------------------------------------------------------------

enum class TermKind { kTemporal, kSpatial, kSpatioTemporal };

// One photometric term: target camera warped toward one source view.
struct TermRecord {
  TermKind kind = TermKind::kTemporal;
  int target_camera = 0;
  int source_camera = 0;
  int direction = -1;  // 0 = previous, 1 = next, -1 = same timestep
  long valid_count = 0;
  double mean = 0.0;
};

struct LossBreakdown {
  // category values: average of the per-term masked means over the non-empty
  // terms of that category (temporal vs cross-camera), smoothness averaged
  // over cameras, pose consistency summed over both directions
  double photometric_temporal = 0.0;
  double photometric_spatial = 0.0;
  double smoothness = 0.0;
  double pcc_translation = 0.0;
  double pcc_rotation = 0.0;
  double total = 0.0;
  std::vector<TermRecord> terms;
  bool near_gimbal = false;

  std::string to_json() const;
};

// Evaluate the full objective.  poses[cam][direction] maps current-frame
// camera points into the context frame.  The breakdown's total always equals
// lambda_t * photometric_temporal + lambda_s * photometric_spatial +
// lambda_d * smoothness + alpha_t * pcc_translation + alpha_r * pcc_rotation,
// computed exactly in that order.
LossBreakdown total_loss(const MultiCamSample& sample,
                         const std::vector<DepthField>& depths,
                         const std::vector<std::array<RigidTransform, 2>>& poses,
                         const LossWeights& weights,
                         const ObjectiveToggles& toggles = {});

}  // namespace rigdepth
