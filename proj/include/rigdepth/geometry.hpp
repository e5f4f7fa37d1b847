#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace rigdepth {

// Minimum forward distance for a point to count as "in front" of a camera.
inline constexpr double kZMin = 1e-6;

// Rotation drift threshold: compose() re-orthonormalizes its result only when
// max |R^T R - I| exceeds this, so well-conditioned products keep their bits.
inline constexpr double kDriftTol = 1e-12;

// ---------------------------------------------------------------------------
// Rigid transforms
// ---------------------------------------------------------------------------

struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidTransform identity() { return RigidTransform{}; }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }

  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
  }
};

// max-abs deviation of R^T R from the identity
double rotation_drift(const Eigen::Matrix3d& r);

// nearest rotation via quaternion round-trip (deterministic)
Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d& r);

// Composition that applies `b` first, then `a`.  Re-orthonormalizes the
// rotation only when numerical drift exceeds kDriftTol.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

RigidTransform inverse(const RigidTransform& x);

// ---------------------------------------------------------------------------
// Euler angles (intrinsic Z-Y-X: yaw about z, then pitch about y, then roll
// about x; R = Rz(yaw) * Ry(pitch) * Rx(roll))
// ---------------------------------------------------------------------------

struct EulerAngles {
  double roll = 0.0;   // about x
  double pitch = 0.0;  // about y
  double yaw = 0.0;    // about z
};

struct EulerExtraction {
  EulerAngles angles;
  // |pitch| within ~1e-9 of +-pi/2: roll/yaw become coupled and individually
  // meaningless, so consumers comparing per-axis angles should check this.
  bool near_gimbal = false;
};

Eigen::Matrix3d euler_to_rotation(const EulerAngles& e);
EulerExtraction rotation_to_euler(const Eigen::Matrix3d& r);

// Partial derivatives of euler_to_rotation with respect to roll, pitch, yaw
// (in that order).
std::array<Eigen::Matrix3d, 3> euler_rotation_derivatives(
    const EulerAngles& e);

// ---------------------------------------------------------------------------
// Cameras
// ---------------------------------------------------------------------------

struct CameraModel {
  std::string name;
  int width = 0;
  int height = 0;
  double fx = 1.0, fy = 1.0;
  double cx = 0.0, cy = 0.0;
  RigidTransform extrinsics;  // camera-to-rig

  Eigen::Matrix3d intrinsics() const {
    Eigen::Matrix3d k = Eigen::Matrix3d::Identity();
    k(0, 0) = fx;
    k(1, 1) = fy;
    k(0, 2) = cx;
    k(1, 2) = cy;
    return k;
  }
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  bool in_front = false;  // z > kZMin in the camera frame
};

// Pinhole projection of a camera-frame point; points at or behind the image
// plane come back with in_front=false and zeroed coordinates.
Projection project(const Eigen::Vector3d& p_cam, const CameraModel& cam);

// Inverse: pixel (u, v) at depth d (z-depth, metres) to a camera-frame point.
// Throws std::domain_error for non-positive depth.
Eigen::Vector3d unproject(double u, double v, double depth,
                          const CameraModel& cam);

// Transform taking camera-i coordinates to camera-j coordinates at a fixed
// time: X_j^-1 * X_i.  Returns an exact identity when both extrinsics are
// bitwise equal, so same-camera round trips lose nothing.
RigidTransform relative_extrinsics(const CameraModel& cam_i,
                                   const CameraModel& cam_j);

// Express a motion predicted in one camera's frame in the canonical camera's
// frame: B * motion * B^-1 with B = X_canonical^-1 * X_from.  If every camera
// on a rig observes the same rigid motion, all conversions agree with the
// canonical camera's own prediction.
RigidTransform to_canonical(const RigidTransform& motion,
                            const RigidTransform& from_extrinsics,
                            const RigidTransform& canonical_extrinsics);

}  // namespace rigdepth
