#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rigdepth/errors.hpp"
#include "rigdepth/gradients.hpp"
#include "rigdepth/losses.hpp"
#include "rigdepth/sample.hpp"
#include "rigdepth/warping.hpp"
#include "ssim_common.hpp"

namespace rigdepth {

namespace {

void validate_inputs(const MultiCamSample& sample,
                     const std::vector<DepthField>& depths,
                     const std::vector<std::array<RigidTransform, 2>>& poses) {
  const std::size_t n = sample.rig.size();
  if (n == 0) throw DataError("total_loss: empty rig");
  if (sample.images.size() != n || sample.self_occlusion.size() != n) {
    throw DataError("total_loss: sample arrays disagree with rig size");
  }
  if (depths.size() != n || poses.size() != n) {
    throw DataError("total_loss: depth/pose count differs from rig size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const CameraModel& cam = sample.rig[i];
    if (depths[i].width != cam.width || depths[i].height != cam.height) {
      throw DataError("total_loss: depth shape differs from camera " +
                      cam.name);
    }
    for (const ImagePlane& image : sample.images[i]) {
      if (image.width != cam.width || image.height != cam.height) {
        throw DataError("total_loss: image shape differs from camera " +
                        cam.name);
      }
    }
    if (sample.self_occlusion[i].width != cam.width ||
        sample.self_occlusion[i].height != cam.height) {
      throw DataError(
          "total_loss: self-occlusion mask shape differs from camera " +
          cam.name);
    }
  }
}

struct CategoryAccum {
  double sum = 0.0;
  int active_terms = 0;

  void add(const MaskedMean& mm) {
    if (mm.count > 0) {
      sum += mm.value;
      ++active_terms;
    }
  }
  double mean() const {
    return active_terms > 0 ? sum / static_cast<double>(active_terms) : 0.0;
  }
};

// Unscaled gradient accumulators for one photometric category.  Each term
// contributes the gradient of its own masked mean; the category weight and
// the 1/(active term count) normalization are applied once at the end.
struct CategoryGrads {
  std::vector<std::vector<double>> d_log;
  std::vector<std::array<Eigen::Vector3d, 2>> d_t;
  std::vector<std::array<Eigen::Matrix3d, 2>> d_rot;

  void reset(const std::vector<DepthField>& depths) {
    d_log.resize(depths.size());
    for (std::size_t i = 0; i < depths.size(); ++i) {
      d_log[i].assign(depths[i].pixel_count(), 0.0);
    }
    d_t.assign(depths.size(),
               {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()});
    d_rot.assign(depths.size(),
                 {Eigen::Matrix3d::Zero(), Eigen::Matrix3d::Zero()});
  }
};

// How one term's warp was assembled, for the backward pass.
struct TermGeometry {
  const CameraModel* target_cam = nullptr;
  const CameraModel* source_cam = nullptr;
  RigidTransform total;          // the transform the warp applied
  Eigen::Matrix3d rel_rotation;  // cross-camera rotation (identity if none)
  bool has_pose_grad = false;    // false for fixed same-timestep transforms
};

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Adjoint of rotation_to_euler away from the gimbal degeneracy: distributes
// per-angle adjoints (roll, pitch, yaw) onto the rotation matrix entries the
// extraction reads.
Eigen::Matrix3d euler_extraction_adjoint(const Eigen::Matrix3d& r,
                                         const Eigen::Vector3d& a) {
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  const double s = -r(2, 0);
  const double denom = std::sqrt(std::max(1.0 - s * s, 1e-300));
  g(2, 0) += a(1) * (-1.0 / denom);
  const double den_yaw = r(0, 0) * r(0, 0) + r(1, 0) * r(1, 0);
  g(1, 0) += a(2) * r(0, 0) / den_yaw;
  g(0, 0) += a(2) * -r(1, 0) / den_yaw;
  const double den_roll = r(2, 1) * r(2, 1) + r(2, 2) * r(2, 2);
  g(2, 1) += a(0) * r(2, 2) / den_roll;
  g(2, 2) += a(0) * -r(2, 1) / den_roll;
  return g;
}

// Gradient of one photometric term's masked mean with respect to the target
// camera's log-depth and (when the warp involves a predicted motion) that
// motion's translation and rotation matrix.
void backward_photometric_term(
    const ImagePlane& target, const ImagePlane& source, const WarpField& warp,
    const ImagePlane& synth, const BinaryMask& term_mask, long count,
    const std::vector<detail::SsimMoments>& moments, double alpha,
    const TermGeometry& geo, const DepthField& depth,
    std::vector<double>& d_log_cam, Eigen::Vector3d* d_t,
    Eigen::Matrix3d* d_rot) {
  const int w = target.width, h = target.height;
  const int channels = target.channels;
  const std::size_t size = target.pixel_count();
  const double inv_count = 1.0 / static_cast<double>(count);
  const double inv_c = 1.0 / channels;

  static thread_local std::vector<double> gsynth, c1, c2, c3, b1, b2, b3, tmp;
  gsynth.assign(size * static_cast<std::size_t>(channels), 0.0);

  // L1 part: d|t - s|/ds = sign(s - t), averaged over channels
  for (std::size_t i = 0; i < size; ++i) {
    if (!term_mask.bits[i]) continue;
    for (int c = 0; c < channels; ++c) {
      const std::size_t k = i * channels + c;
      gsynth[k] = (1.0 - alpha) * inv_c * inv_count *
                  sgn(synth.data[k] - target.data[k]);
    }
  }

  // SSIM part, channel by channel.  For each window the adjoint of the
  // synthesized pixel b_q is
  //   BOX(c1) + b_q * BOX(c2) + a_q * BOX(c3)
  // with coefficient maps built from the forward window statistics; the 3x3
  // box sum is its own transpose.
  const double g_center = -(alpha * 0.5) * inv_c * inv_count;
  for (int c = 0; c < channels; ++c) {
    const detail::SsimMoments& m = moments[static_cast<std::size_t>(c)];
    c1.assign(size, 0.0);
    c2.assign(size, 0.0);
    c3.assign(size, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
      if (!term_mask.bits[i]) continue;
      detail::SsimTerms t;
      if (!detail::ssim_at(m, i, t)) continue;
      const double b1b2 = t.b1 * t.b2;
      const double dmu_b =
          2.0 * t.mu_a * t.a2 / b1b2 - t.value * 2.0 * t.mu_b / t.b1;
      const double dvar_b = -t.value / t.b2;
      const double dcov = 2.0 * t.a1 / b1b2;
      const double scale = g_center / t.n;
      c1[i] = scale * (dmu_b - 2.0 * t.mu_b * dvar_b - t.mu_a * dcov);
      c2[i] = scale * 2.0 * dvar_b;
      c3[i] = scale * dcov;
    }
    detail::box3(c1, w, h, tmp, b1);
    detail::box3(c2, w, h, tmp, b2);
    detail::box3(c3, w, h, tmp, b3);
    for (std::size_t i = 0; i < size; ++i) {
      if (!term_mask.bits[i]) continue;
      const std::size_t k = i * channels + c;
      gsynth[k] += b1[i] + synth.data[k] * b2[i] + target.data[k] * b3[i];
    }
  }

  // chain through the bilinear sample, the projection, and the transform
  const CameraModel& cam_i = *geo.target_cam;
  const CameraModel& cam_j = *geo.source_cam;
  const Eigen::Matrix3d& r_tot = geo.total.rotation;
  const Eigen::Vector3d& t_tot = geo.total.translation;
  const Eigen::Matrix3d rel_t = geo.rel_rotation.transpose();
  std::size_t idx = 0;
  for (int y = 0; y < h; ++y) {
    const double ry = (y - cam_i.cy) / cam_i.fy;
    for (int x = 0; x < w; ++x, ++idx) {
      if (!term_mask.bits[idx]) continue;
      const double su = warp.u[idx];
      const double sv = warp.v[idx];
      int x0 = static_cast<int>(std::floor(su));
      int y0 = static_cast<int>(std::floor(sv));
      if (x0 > source.width - 2) x0 = source.width - 2;
      if (y0 > source.height - 2) y0 = source.height - 2;
      if (x0 < 0) x0 = 0;
      if (y0 < 0) y0 = 0;
      const double wx = su - x0;
      const double wy = sv - y0;
      double du = 0.0, dv = 0.0;
      for (int c = 0; c < channels; ++c) {
        const double g = gsynth[idx * channels + c];
        if (g == 0.0) continue;
        const double s00 = source.at(x0, y0, c);
        const double s10 = source.at(x0 + 1, y0, c);
        const double s01 = source.at(x0, y0 + 1, c);
        const double s11 = source.at(x0 + 1, y0 + 1, c);
        du += g * ((1.0 - wy) * (s10 - s00) + wy * (s11 - s01));
        dv += g * ((1.0 - wx) * (s01 - s00) + wx * (s11 - s10));
      }
      if (du == 0.0 && dv == 0.0) continue;

      const double rx = (x - cam_i.cx) / cam_i.fx;
      const double d = std::exp(depth.log_depth[idx]);
      const Eigen::Vector3d p(d * rx, d * ry, d);
      const Eigen::Vector3d q = r_tot * p + t_tot;
      const double inv_qz = 1.0 / q(2);
      Eigen::Vector3d gq(du * cam_j.fx * inv_qz, dv * cam_j.fy * inv_qz,
                         -(du * cam_j.fx * q(0) + dv * cam_j.fy * q(1)) *
                             inv_qz * inv_qz);
      const Eigen::Vector3d gp = r_tot.transpose() * gq;
      const double gd = gp(0) * rx + gp(1) * ry + gp(2);
      d_log_cam[idx] += d * gd;
      if (geo.has_pose_grad) {
        const Eigen::Vector3d gy = rel_t * gq;
        *d_t += gy;
        *d_rot += gy * p.transpose();
      }
    }
  }
}

// Gradient of smoothness_loss (a single camera's term) times `upstream`,
// accumulated into d_log.  The mean normalization couples every pixel.
void smoothness_backward(const DepthField& depth, const ImagePlane& image,
                         double upstream, std::vector<double>& d_log) {
  const int w = depth.width, h = depth.height;
  const std::size_t size = depth.pixel_count();
  std::vector<double> d(size);
  double mu = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    d[i] = std::exp(depth.log_depth[i]);
    mu += d[i];
  }
  mu /= static_cast<double>(size);
  const double inv_c = 1.0 / image.channels;
  const int channels = image.channels;

  std::vector<double> a(size, 0.0);  // adjoint of mean-normalized depth
  if (w > 1) {
    const double norm = 1.0 / (static_cast<double>(w - 1) * h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x + 1 < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        double grad_i = 0.0;
        for (int c = 0; c < channels; ++c) {
          grad_i += std::abs(image.data[(i + 1) * channels + c] -
                             image.data[i * channels + c]);
        }
        const double wgt = std::exp(-grad_i * inv_c) * norm;
        const double s = sgn(d[i + 1] - d[i]);
        a[i + 1] += s * wgt;
        a[i] -= s * wgt;
      }
    }
  }
  if (h > 1) {
    const double norm = 1.0 / (static_cast<double>(w) * (h - 1));
    for (int y = 0; y + 1 < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const std::size_t below = i + static_cast<std::size_t>(w);
        double grad_i = 0.0;
        for (int c = 0; c < channels; ++c) {
          grad_i += std::abs(image.data[below * channels + c] -
                             image.data[i * channels + c]);
        }
        const double wgt = std::exp(-grad_i * inv_c) * norm;
        const double s = sgn(d[below] - d[i]);
        a[below] += s * wgt;
        a[i] -= s * wgt;
      }
    }
  }

  double coupled = 0.0;  // sum_q a_q * d_q, for the d(mu) path
  for (std::size_t i = 0; i < size; ++i) coupled += a[i] * d[i];
  const double mu2n = coupled / (static_cast<double>(size) * mu * mu);
  for (std::size_t i = 0; i < size; ++i) {
    const double dd = a[i] / mu - mu2n;
    d_log[i] += upstream * dd * d[i];
  }
}

// Gradient of (alpha_t * t_loss + alpha_r * r_loss) for one direction's
// poses, accumulated into the per-camera translation/rotation slots.
void pcc_backward(const std::vector<RigidTransform>& poses,
                  const std::vector<CameraModel>& rig, double wt, double wr,
                  int dir, std::vector<std::array<Eigen::Vector3d, 2>>& t_out,
                  std::vector<std::array<Eigen::Matrix3d, 2>>& r_out) {
  const EulerExtraction canonical = rotation_to_euler(poses[0].rotation);
  const Eigen::Vector3d e1(canonical.angles.roll, canonical.angles.pitch,
                           canonical.angles.yaw);
  Eigen::Vector3d canonical_adjoint = Eigen::Vector3d::Zero();
  for (std::size_t j = 1; j < poses.size(); ++j) {
    const RigidTransform b =
        compose(inverse(rig[0].extrinsics), rig[j].extrinsics);
    const Eigen::Matrix3d rb_t = b.rotation.transpose();
    const RigidTransform converted =
        to_canonical(poses[j], rig[j].extrinsics, rig[0].extrinsics);
    const Eigen::Vector3d err = poses[0].translation - converted.translation;

    t_out[0][dir] += wt * 2.0 * err;
    t_out[j][dir] += wt * -2.0 * (rb_t * err);
    r_out[j][dir] +=
        wt * 2.0 * (rb_t * err) * (rb_t * b.translation).transpose();

    const EulerExtraction ext = rotation_to_euler(converted.rotation);
    const Eigen::Vector3d ej(ext.angles.roll, ext.angles.pitch,
                             ext.angles.yaw);
    const Eigen::Vector3d diff = e1 - ej;
    canonical_adjoint += wr * 2.0 * diff;
    if (!ext.near_gimbal) {
      // the extraction's derivative is undefined at the degeneracy; the
      // forward pass flags near_gimbal so callers can react
      const Eigen::Matrix3d g_conv =
          euler_extraction_adjoint(converted.rotation, wr * -2.0 * diff);
      r_out[j][dir] += rb_t * g_conv * b.rotation;
    }
  }
  if (!canonical.near_gimbal) {
    r_out[0][dir] +=
        euler_extraction_adjoint(poses[0].rotation, canonical_adjoint);
  }
}

LossBreakdown evaluate(const MultiCamSample& sample,
                       const std::vector<DepthField>& depths,
                       const std::vector<std::array<RigidTransform, 2>>& rigid,
                       const LossWeights& weights,
                       const ObjectiveToggles& toggles,
                       const std::vector<std::array<PoseParams, 2>>* params,
                       GradientBundle* grad) {
  validate_inputs(sample, depths, rigid);
  const int n = sample.camera_count();
  const bool want_grad = grad != nullptr;

  LossBreakdown bd;
  CategoryAccum temporal;
  CategoryAccum cross;  // spatial + spatio-temporal share one weight
  CategoryGrads g_temporal, g_cross;
  if (want_grad) {
    g_temporal.reset(depths);
    g_cross.reset(depths);
  }

  auto eval_term = [&](TermKind kind, int target_cam, int source_cam,
                       int direction, const WarpField& warp,
                       const ImagePlane& source, const TermGeometry& geo) {
    const ImagePlane& target = sample.images[target_cam][kCurr];
    const BinaryMask m_no = non_overlap_mask(warp);
    const BinaryMask& m_so =
        sample.self_occlusion[static_cast<std::size_t>(target_cam)];
    BinaryMask term_mask = toggles.use_self_occlusion_masks
                               ? mask_and(m_no, m_so)
                               : m_no;

    TermRecord record;
    record.kind = kind;
    record.target_camera = target_cam;
    record.source_camera = source_cam;
    record.direction = direction;

    long mask_count = 0;
    for (std::uint8_t bit : term_mask.bits) mask_count += bit;
    if (mask_count == 0) {
      bd.terms.push_back(record);
      return;
    }

    const SynthesisResult synth = synthesize(source, warp);
    static thread_local std::vector<detail::SsimMoments> moments;
    const ImagePlane loss_map = detail::photometric_forward(
        target, synth.image, term_mask, weights.alpha,
        want_grad ? &moments : nullptr);
    const MaskedMean mm = masked_photometric_loss(loss_map, m_no, term_mask);
    record.valid_count = mm.count;
    record.mean = mm.value;
    bd.terms.push_back(record);
    const bool is_temporal = kind == TermKind::kTemporal;
    (is_temporal ? temporal : cross).add(mm);

    if (want_grad && mm.count > 0) {
      CategoryGrads& bucket = is_temporal ? g_temporal : g_cross;
      const int slot = geo.has_pose_grad ? direction : 0;
      backward_photometric_term(
          target, source, warp, synth.image, term_mask, mm.count, moments,
          weights.alpha, geo, depths[static_cast<std::size_t>(target_cam)],
          bucket.d_log[static_cast<std::size_t>(target_cam)],
          &bucket.d_t[static_cast<std::size_t>(target_cam)][slot],
          &bucket.d_rot[static_cast<std::size_t>(target_cam)][slot]);
    }
  };

  for (int i = 0; i < n; ++i) {
    const CameraModel& cam = sample.rig[i];
    const std::size_t ci = static_cast<std::size_t>(i);
    for (int dir = 0; dir < 2; ++dir) {
      const ImagePlane& source = sample.images[ci][dir == 0 ? kPrev : kNext];
      const WarpField warp = warp_temporal(depths[ci], rigid[ci][dir], cam);
      TermGeometry geo;
      geo.target_cam = &cam;
      geo.source_cam = &cam;
      geo.total = rigid[ci][dir];
      geo.rel_rotation = Eigen::Matrix3d::Identity();
      geo.has_pose_grad = true;
      eval_term(TermKind::kTemporal, i, i, dir, warp, source, geo);
    }
    if (toggles.use_spatial) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const WarpField warp = warp_spatial(depths[ci], cam, sample.rig[j]);
        TermGeometry geo;
        geo.target_cam = &cam;
        geo.source_cam = &sample.rig[j];
        geo.total = relative_extrinsics(cam, sample.rig[j]);
        geo.rel_rotation = geo.total.rotation;
        geo.has_pose_grad = false;
        eval_term(TermKind::kSpatial, i, j, -1, warp,
                  sample.images[static_cast<std::size_t>(j)][kCurr], geo);
      }
    }
    if (toggles.use_spatiotemporal) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const RigidTransform rel = relative_extrinsics(cam, sample.rig[j]);
        for (int dir = 0; dir < 2; ++dir) {
          const ImagePlane& source =
              sample.images[static_cast<std::size_t>(j)][dir == 0 ? kPrev
                                                                  : kNext];
          const WarpField warp =
              warp_spatiotemporal(depths[ci], rigid[ci][dir], cam,
                                  sample.rig[j]);
          TermGeometry geo;
          geo.target_cam = &cam;
          geo.source_cam = &sample.rig[j];
          geo.total = compose(rel, rigid[ci][dir]);
          geo.rel_rotation = rel.rotation;
          geo.has_pose_grad = true;
          eval_term(TermKind::kSpatioTemporal, i, j, dir, warp, source, geo);
        }
      }
    }
  }

  double smoothness_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    smoothness_sum += smoothness_loss(depths[static_cast<std::size_t>(i)],
                                      sample.images[static_cast<std::size_t>(i)][kCurr]);
  }

  if (toggles.use_pose_consistency && n > 1) {
    for (int dir = 0; dir < 2; ++dir) {
      std::vector<RigidTransform> dir_poses;
      dir_poses.reserve(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        dir_poses.push_back(rigid[static_cast<std::size_t>(i)]
                                 [static_cast<std::size_t>(dir)]);
      }
      const PoseConsistencyResult pcc =
          pose_consistency_loss(dir_poses, sample.rig, weights);
      bd.pcc_translation += pcc.t_loss;
      bd.pcc_rotation += pcc.r_loss;
      bd.near_gimbal = bd.near_gimbal || pcc.near_gimbal;
    }
  }

  bd.photometric_temporal = temporal.mean();
  bd.photometric_spatial = cross.mean();
  bd.smoothness = smoothness_sum / static_cast<double>(n);

  double total = weights.lambda_t * bd.photometric_temporal;
  total += weights.lambda_s * bd.photometric_spatial;
  total += weights.lambda_d * bd.smoothness;
  total += weights.alpha_t * bd.pcc_translation;
  total += weights.alpha_r * bd.pcc_rotation;
  bd.total = total;

  if (want_grad) {
    grad->reset(depths);
    const double scale_t =
        temporal.active_terms > 0
            ? weights.lambda_t / static_cast<double>(temporal.active_terms)
            : 0.0;
    const double scale_s =
        cross.active_terms > 0
            ? weights.lambda_s / static_cast<double>(cross.active_terms)
            : 0.0;
    const double scale_d = weights.lambda_d / static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
      const std::size_t ci = static_cast<std::size_t>(i);
      std::vector<double>& out = grad->log_depth[ci];
      const std::vector<double>& gt = g_temporal.d_log[ci];
      const std::vector<double>& gc = g_cross.d_log[ci];
      for (std::size_t q = 0; q < out.size(); ++q) {
        out[q] = scale_t * gt[q] + scale_s * gc[q];
      }
      smoothness_backward(depths[ci], sample.images[ci][kCurr], scale_d, out);
    }

    std::vector<std::array<Eigen::Vector3d, 2>> t_total(
        static_cast<std::size_t>(n),
        {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()});
    std::vector<std::array<Eigen::Matrix3d, 2>> r_total(
        static_cast<std::size_t>(n),
        {Eigen::Matrix3d::Zero(), Eigen::Matrix3d::Zero()});
    for (int i = 0; i < n; ++i) {
      const std::size_t ci = static_cast<std::size_t>(i);
      for (int dir = 0; dir < 2; ++dir) {
        t_total[ci][dir] = scale_t * g_temporal.d_t[ci][dir] +
                           scale_s * g_cross.d_t[ci][dir];
        r_total[ci][dir] = scale_t * g_temporal.d_rot[ci][dir] +
                           scale_s * g_cross.d_rot[ci][dir];
      }
    }
    if (toggles.use_pose_consistency && n > 1) {
      for (int dir = 0; dir < 2; ++dir) {
        std::vector<RigidTransform> dir_poses;
        dir_poses.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          dir_poses.push_back(rigid[static_cast<std::size_t>(i)]
                                   [static_cast<std::size_t>(dir)]);
        }
        pcc_backward(dir_poses, sample.rig, weights.alpha_t, weights.alpha_r,
                     dir, t_total, r_total);
      }
    }
    for (int i = 0; i < n; ++i) {
      const std::size_t ci = static_cast<std::size_t>(i);
      for (int dir = 0; dir < 2; ++dir) {
        PoseGradient& pg = grad->poses[ci][dir];
        pg.translation = t_total[ci][dir];
        const std::array<Eigen::Matrix3d, 3> derivs =
            euler_rotation_derivatives((*params)[ci][dir].euler);
        for (int k = 0; k < 3; ++k) {
          pg.euler(k) = r_total[ci][dir].cwiseProduct(derivs[k]).sum();
        }
      }
    }
  }
  return bd;
}

}  // namespace

LossBreakdown total_loss(const MultiCamSample& sample,
                         const std::vector<DepthField>& depths,
                         const std::vector<std::array<RigidTransform, 2>>& poses,
                         const LossWeights& weights,
                         const ObjectiveToggles& toggles) {
  return evaluate(sample, depths, poses, weights, toggles, nullptr, nullptr);
}

LossBreakdown objective_with_gradients(
    const MultiCamSample& sample, const std::vector<DepthField>& depths,
    const std::vector<std::array<PoseParams, 2>>& poses,
    const LossWeights& weights, const ObjectiveToggles& toggles,
    GradientBundle& grad) {
  std::vector<std::array<RigidTransform, 2>> rigid(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    rigid[i] = {poses[i][0].to_rigid(), poses[i][1].to_rigid()};
  }
  return evaluate(sample, depths, rigid, weights, toggles, &poses, &grad);
}

}  // namespace rigdepth
