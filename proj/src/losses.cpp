#include "rigdepth/losses.hpp"

#include <cmath>
#include <cstddef>
#include <nlohmann/json.hpp>
#include <vector>

#include "rigdepth/errors.hpp"
#include "ssim_common.hpp"

namespace rigdepth {

namespace {

void check_pair(const ImagePlane& a, const ImagePlane& b,
                const BinaryMask& mask, const char* op) {
  if (!a.same_shape(b)) {
    throw DataError(std::string(op) + ": image shapes differ");
  }
  if (mask.width != a.width || mask.height != a.height) {
    throw DataError(std::string(op) + ": mask shape differs from images");
  }
}

}  // namespace

ImagePlane ssim(const ImagePlane& a, const ImagePlane& b,
                const BinaryMask& mask) {
  check_pair(a, b, mask, "ssim");
  const std::size_t size = a.pixel_count();
  ImagePlane out = ImagePlane::zeros(a.width, a.height, 1);
  detail::SsimMoments m;
  for (int c = 0; c < a.channels; ++c) {
    detail::ssim_moments(a, b, mask, c, m);
    for (std::size_t i = 0; i < size; ++i) {
      if (!mask.bits[i]) continue;
      detail::SsimTerms t;
      if (detail::ssim_at(m, i, t)) out.data[i] += t.value;
    }
  }
  const double inv_c = 1.0 / a.channels;
  for (std::size_t i = 0; i < size; ++i) {
    if (mask.bits[i]) out.data[i] *= inv_c;
  }
  return out;
}

ImagePlane photometric_loss(const ImagePlane& target, const ImagePlane& synth,
                            const BinaryMask& mask, double alpha) {
  check_pair(target, synth, mask, "photometric_loss");
  return detail::photometric_forward(target, synth, mask, alpha, nullptr);
}

MaskedMean masked_photometric_loss(const ImagePlane& loss_map,
                                   const BinaryMask& m_no,
                                   const BinaryMask& m_so) {
  if (loss_map.channels != 1) {
    throw DataError("masked_photometric_loss: loss map must be one channel");
  }
  if (m_no.width != loss_map.width || m_no.height != loss_map.height ||
      m_so.width != loss_map.width || m_so.height != loss_map.height) {
    throw DataError("masked_photometric_loss: mask shape differs from map");
  }
  MaskedMean result;
  double sum = 0.0;
  const std::size_t size = loss_map.pixel_count();
  for (std::size_t i = 0; i < size; ++i) {
    if (m_no.bits[i] && m_so.bits[i]) {
      sum += loss_map.data[i];
      ++result.count;
    }
  }
  if (result.count > 0) result.value = sum / static_cast<double>(result.count);
  return result;
}

double smoothness_loss(const DepthField& depth, const ImagePlane& image) {
  const int w = depth.width;
  const int h = depth.height;
  if (image.width != w || image.height != h) {
    throw DataError("smoothness_loss: image shape differs from depth");
  }
  const std::size_t size = depth.pixel_count();
  std::vector<double> d(size);
  double mean = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    d[i] = std::exp(depth.log_depth[i]);
    mean += d[i];
  }
  mean /= static_cast<double>(size);
  const double inv_mu = 1.0 / mean;
  const double inv_c = 1.0 / image.channels;
  const int channels = image.channels;

  double term_x = 0.0;
  if (w > 1) {
    double acc = 0.0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x + 1 < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        double grad_i = 0.0;
        for (int c = 0; c < channels; ++c) {
          grad_i += std::abs(image.data[(i + 1) * channels + c] -
                             image.data[i * channels + c]);
        }
        acc += std::abs(d[i + 1] - d[i]) * inv_mu *
               std::exp(-grad_i * inv_c);
      }
    }
    term_x = acc / (static_cast<double>(w - 1) * h);
  }

  double term_y = 0.0;
  if (h > 1) {
    double acc = 0.0;
    for (int y = 0; y + 1 < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const std::size_t below = i + static_cast<std::size_t>(w);
        double grad_i = 0.0;
        for (int c = 0; c < channels; ++c) {
          grad_i += std::abs(image.data[below * channels + c] -
                             image.data[i * channels + c]);
        }
        acc += std::abs(d[below] - d[i]) * inv_mu *
               std::exp(-grad_i * inv_c);
      }
    }
    term_y = acc / (static_cast<double>(w) * (h - 1));
  }
  return term_x + term_y;
}

PoseConsistencyResult pose_consistency_loss(
    const std::vector<RigidTransform>& poses,
    const std::vector<CameraModel>& rig, const LossWeights& weights) {
  if (poses.size() != rig.size()) {
    throw DataError("pose_consistency_loss: pose count differs from rig");
  }
  PoseConsistencyResult result;
  if (poses.empty()) return result;
  const EulerExtraction canonical = rotation_to_euler(poses[0].rotation);
  result.near_gimbal = canonical.near_gimbal;
  for (std::size_t j = 1; j < poses.size(); ++j) {
    const RigidTransform converted =
        to_canonical(poses[j], rig[j].extrinsics, rig[0].extrinsics);
    result.t_loss +=
        (poses[0].translation - converted.translation).squaredNorm();
    const EulerExtraction e = rotation_to_euler(converted.rotation);
    result.near_gimbal = result.near_gimbal || e.near_gimbal;
    const double droll = canonical.angles.roll - e.angles.roll;
    const double dpitch = canonical.angles.pitch - e.angles.pitch;
    const double dyaw = canonical.angles.yaw - e.angles.yaw;
    result.r_loss += droll * droll + dpitch * dpitch + dyaw * dyaw;
  }
  result.weighted =
      weights.alpha_t * result.t_loss + weights.alpha_r * result.r_loss;
  return result;
}

std::string LossBreakdown::to_json() const {
  nlohmann::json j;
  j["photometric_temporal"] = photometric_temporal;
  j["photometric_spatial"] = photometric_spatial;
  j["smoothness"] = smoothness;
  j["pcc_translation"] = pcc_translation;
  j["pcc_rotation"] = pcc_rotation;
  j["total"] = total;
  j["near_gimbal"] = near_gimbal;
  nlohmann::json term_list = nlohmann::json::array();
  for (const TermRecord& term : terms) {
    const char* kind = term.kind == TermKind::kTemporal ? "temporal"
                       : term.kind == TermKind::kSpatial
                           ? "spatial"
                           : "spatiotemporal";
    term_list.push_back({{"kind", kind},
                         {"target_camera", term.target_camera},
                         {"source_camera", term.source_camera},
                         {"direction", term.direction},
                         {"valid_count", term.valid_count},
                         {"mean", term.mean}});
  }
  j["terms"] = term_list;
  return j.dump(2);
}

}  // namespace rigdepth
