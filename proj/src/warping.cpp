#include "rigdepth/warping.hpp"

#include <cassert>
#include <cmath>

namespace rigdepth {

WarpField warp_with_transform(const DepthField& depth,
                              const RigidTransform& transform,
                              const CameraModel& cam_i,
                              const CameraModel& cam_j) {
  assert(depth.width == cam_i.width && depth.height == cam_i.height);
  WarpField out;
  out.width = depth.width;
  out.height = depth.height;
  out.source_width = cam_j.width;
  out.source_height = cam_j.height;
  const std::size_t n = depth.pixel_count();
  out.u.assign(n, 0.0);
  out.v.assign(n, 0.0);
  out.valid.assign(n, 0);

  const Eigen::Matrix3d& r = transform.rotation;
  const Eigen::Vector3d& t = transform.translation;
  const double u_max = cam_j.width - 1.0;
  const double v_max = cam_j.height - 1.0;

  std::size_t idx = 0;
  for (int y = 0; y < depth.height; ++y) {
    const double ry = (y - cam_i.cy) / cam_i.fy;
    for (int x = 0; x < depth.width; ++x, ++idx) {
      const double rx = (x - cam_i.cx) / cam_i.fx;
      const double d = std::exp(depth.log_depth[idx]);
      // P = d * (rx, ry, 1) in camera i; Q = R*P + t in camera j
      const double px = d * rx, py = d * ry, pz = d;
      const double qz = r(2, 0) * px + r(2, 1) * py + r(2, 2) * pz + t(2);
      if (!(qz > kZMin)) continue;
      const double qx = r(0, 0) * px + r(0, 1) * py + r(0, 2) * pz + t(0);
      const double qy = r(1, 0) * px + r(1, 1) * py + r(1, 2) * pz + t(1);
      double su = cam_j.fx * (qx / qz) + cam_j.cx;
      double sv = cam_j.fy * (qy / qz) + cam_j.cy;
      // clamp guard-band coordinates onto the boundary (see kEdgeTol)
      if (su >= -kEdgeTol && su < 0.0) su = 0.0;
      if (su > u_max && su <= u_max + kEdgeTol) su = u_max;
      if (sv >= -kEdgeTol && sv < 0.0) sv = 0.0;
      if (sv > v_max && sv <= v_max + kEdgeTol) sv = v_max;
      if (su < 0.0 || su > u_max || sv < 0.0 || sv > v_max) continue;
      out.u[idx] = su;
      out.v[idx] = sv;
      out.valid[idx] = 1;
    }
  }
  return out;
}

WarpField warp_temporal(const DepthField& depth, const RigidTransform& ego,
                        const CameraModel& cam) {
  return warp_with_transform(depth, ego, cam, cam);
}

WarpField warp_spatial(const DepthField& depth_i, const CameraModel& cam_i,
                       const CameraModel& cam_j) {
  return warp_with_transform(depth_i, relative_extrinsics(cam_i, cam_j),
                             cam_i, cam_j);
}

WarpField warp_spatiotemporal(const DepthField& depth_i,
                              const RigidTransform& ego_i,
                              const CameraModel& cam_i,
                              const CameraModel& cam_j) {
  return warp_with_transform(
      depth_i, compose(relative_extrinsics(cam_i, cam_j), ego_i), cam_i,
      cam_j);
}

SynthesisResult synthesize(const ImagePlane& source, const WarpField& warp) {
  assert(source.width == warp.source_width &&
         source.height == warp.source_height);
  SynthesisResult out;
  out.image = ImagePlane::zeros(warp.width, warp.height, source.channels);
  out.mask = BinaryMask::zeros(warp.width, warp.height);

  const int ch = source.channels;
  std::size_t idx = 0;
  for (int y = 0; y < warp.height; ++y) {
    for (int x = 0; x < warp.width; ++x, ++idx) {
      if (!warp.valid[idx]) continue;
      const double su = warp.u[idx];
      const double sv = warp.v[idx];
      // validity guarantees su in [0, W-1]; the clamp only moves the foot at
      // the exact right/bottom border (weight then lands on the far corner)
      int x0 = static_cast<int>(std::floor(su));
      int y0 = static_cast<int>(std::floor(sv));
      if (x0 > source.width - 2) x0 = source.width - 2;
      if (y0 > source.height - 2) y0 = source.height - 2;
      if (x0 < 0) x0 = 0;
      if (y0 < 0) y0 = 0;
      const double wx = su - x0;
      const double wy = sv - y0;
      const double w00 = (1.0 - wx) * (1.0 - wy);
      const double w10 = wx * (1.0 - wy);
      const double w01 = (1.0 - wx) * wy;
      const double w11 = wx * wy;
      for (int c = 0; c < ch; ++c) {
        const double s00 = source.at(x0, y0, c);
        const double s10 = source.at(x0 + 1, y0, c);
        const double s01 = source.at(x0, y0 + 1, c);
        const double s11 = source.at(x0 + 1, y0 + 1, c);
        out.image.at(x, y, c) =
            w00 * s00 + w10 * s10 + w01 * s01 + w11 * s11;
      }
      out.mask.bits[idx] = 1;
    }
  }
  return out;
}

BinaryMask non_overlap_mask(const WarpField& warp) {
  BinaryMask mask = BinaryMask::zeros(warp.width, warp.height);
  std::size_t idx = 0;
  for (int y = 0; y < warp.height; ++y) {
    for (int x = 0; x < warp.width; ++x, ++idx) {
      if (!warp.valid[idx]) continue;
      // nearest-neighbor sample of a constant-one source
      const long nx = std::lround(warp.u[idx]);
      const long ny = std::lround(warp.v[idx]);
      if (nx < 0 || nx >= warp.source_width || ny < 0 ||
          ny >= warp.source_height) {
        continue;
      }
      mask.bits[idx] = 1;
    }
  }
  return mask;
}

}  // namespace rigdepth
