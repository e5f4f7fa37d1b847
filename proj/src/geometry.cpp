#include "rigdepth/geometry.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace rigdepth {

double rotation_drift(const Eigen::Matrix3d& r) {
  const Eigen::Matrix3d d =
      r.transpose() * r - Eigen::Matrix3d::Identity();
  return d.cwiseAbs().maxCoeff();
}

Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  return q.toRotationMatrix();
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  if (rotation_drift(out.rotation) > kDriftTol) {
    out.rotation = orthonormalized(out.rotation);
  }
  return out;
}

RigidTransform inverse(const RigidTransform& x) {
  RigidTransform out;
  out.rotation = x.rotation.transpose();
  out.translation = -(out.rotation * x.translation);
  return out;
}

Eigen::Matrix3d euler_to_rotation(const EulerAngles& e) {
  const double cr = std::cos(e.roll), sr = std::sin(e.roll);
  const double cp = std::cos(e.pitch), sp = std::sin(e.pitch);
  const double cy = std::cos(e.yaw), sy = std::sin(e.yaw);
  Eigen::Matrix3d rx, ry, rz;
  rx << 1, 0, 0, 0, cr, -sr, 0, sr, cr;
  ry << cp, 0, sp, 0, 1, 0, -sp, 0, cp;
  rz << cy, -sy, 0, sy, cy, 0, 0, 0, 1;
  return rz * ry * rx;
}

std::array<Eigen::Matrix3d, 3> euler_rotation_derivatives(
    const EulerAngles& e) {
  const double cr = std::cos(e.roll), sr = std::sin(e.roll);
  const double cp = std::cos(e.pitch), sp = std::sin(e.pitch);
  const double cy = std::cos(e.yaw), sy = std::sin(e.yaw);
  Eigen::Matrix3d rx, ry, rz, drx, dry, drz;
  rx << 1, 0, 0, 0, cr, -sr, 0, sr, cr;
  ry << cp, 0, sp, 0, 1, 0, -sp, 0, cp;
  rz << cy, -sy, 0, sy, cy, 0, 0, 0, 1;
  drx << 0, 0, 0, 0, -sr, -cr, 0, cr, -sr;
  dry << -sp, 0, cp, 0, 0, 0, -cp, 0, -sp;
  drz << -sy, -cy, 0, cy, -sy, 0, 0, 0, 0;
  return {rz * ry * drx, rz * dry * rx, drz * ry * rx};
}

EulerExtraction rotation_to_euler(const Eigen::Matrix3d& r) {
  EulerExtraction out;
  // R = Rz*Ry*Rx gives R(2,0) = -sin(pitch)
  const double s = std::min(1.0, std::max(-1.0, -r(2, 0)));
  out.angles.pitch = std::asin(s);
  out.near_gimbal = std::abs(s) > 1.0 - 1e-9;
  if (out.near_gimbal) {
    // roll and yaw are degenerate; put all the in-plane rotation in yaw
    out.angles.roll = 0.0;
    out.angles.yaw = std::atan2(-r(0, 1), r(1, 1));
  } else {
    out.angles.roll = std::atan2(r(2, 1), r(2, 2));
    out.angles.yaw = std::atan2(r(1, 0), r(0, 0));
  }
  return out;
}

Projection project(const Eigen::Vector3d& p_cam, const CameraModel& cam) {
  Projection out;
  if (!(p_cam.z() > kZMin)) {
    return out;  // behind (or numerically on) the image plane
  }
  out.in_front = true;
  out.u = cam.fx * (p_cam.x() / p_cam.z()) + cam.cx;
  out.v = cam.fy * (p_cam.y() / p_cam.z()) + cam.cy;
  return out;
}

Eigen::Vector3d unproject(double u, double v, double depth,
                          const CameraModel& cam) {
  if (!(depth > 0.0)) {
    throw std::domain_error("unproject: depth must be positive");
  }
  return {depth * (u - cam.cx) / cam.fx, depth * (v - cam.cy) / cam.fy, depth};
}

namespace {
bool bitwise_equal(const RigidTransform& a, const RigidTransform& b) {
  return std::memcmp(a.rotation.data(), b.rotation.data(),
                     9 * sizeof(double)) == 0 &&
         std::memcmp(a.translation.data(), b.translation.data(),
                     3 * sizeof(double)) == 0;
}
}  // namespace

RigidTransform relative_extrinsics(const CameraModel& cam_i,
                                   const CameraModel& cam_j) {
  if (bitwise_equal(cam_i.extrinsics, cam_j.extrinsics)) {
    return RigidTransform::identity();
  }
  return compose(inverse(cam_j.extrinsics), cam_i.extrinsics);
}

RigidTransform to_canonical(const RigidTransform& motion,
                            const RigidTransform& from_extrinsics,
                            const RigidTransform& canonical_extrinsics) {
  const RigidTransform b =
      compose(inverse(canonical_extrinsics), from_extrinsics);
  return compose(compose(b, motion), inverse(b));
}

}  // namespace rigdepth
