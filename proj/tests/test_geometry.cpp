#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "rigdepth/geometry.hpp"
#include "rigdepth/rng.hpp"

using namespace rigdepth;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_matrix(const Eigen::Matrix3d& r, const std::array<double, 9>& want,
                  double tol) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(r(i, j) - want[3 * i + j]) <= tol);
}

void check_vector(const Eigen::Vector3d& v, const std::array<double, 3>& want,
                  double tol) {
  for (int i = 0; i < 3; ++i) CHECK(std::abs(v(i) - want[i]) <= tol);
}

// Rig conventions used by the frozen fixtures (mirrors the NumPy oracle):
// rig x forward / y left / z up; camera x right / y down / z forward.
Eigen::Matrix3d base_orientation() {
  Eigen::Matrix3d r;
  r << 0, 0, 1, -1, 0, 0, 0, -1, 0;
  return r;
}

RigidTransform circle_camera(double yaw, double radius, double height,
                             double pitch_down) {
  const Eigen::Matrix3d rz = euler_to_rotation({0.0, 0.0, yaw});
  const Eigen::Matrix3d rx = euler_to_rotation({-pitch_down, 0.0, 0.0});
  RigidTransform x;
  x.rotation = rz * base_orientation() * rx;
  x.translation = {radius * std::cos(yaw), radius * std::sin(yaw), height};
  return x;
}

}  // namespace

TEST_CASE("rigid transform basics") {
  const RigidTransform id = RigidTransform::identity();
  CHECK(id.rotation == Eigen::Matrix3d::Identity());
  CHECK(id.translation == Eigen::Vector3d::Zero());

  RigidTransform a;
  a.rotation = euler_to_rotation({0.2, 0.1, -0.4});
  a.translation = {0.5, -1.0, 2.0};

  // identity is a two-sided unit for compose, bit for bit
  const RigidTransform left = compose(id, a);
  const RigidTransform right = compose(a, id);
  CHECK(left.rotation == a.rotation);
  CHECK(left.translation == a.translation);
  CHECK(right.rotation == a.rotation);
  CHECK(right.translation == a.translation);

  // inverse round trip
  const RigidTransform round = compose(inverse(a), a);
  CHECK(rotation_drift(round.rotation) <= 1e-15);
  check_matrix(round.rotation, {1, 0, 0, 0, 1, 0, 0, 0, 1}, 1e-15);
  check_vector(round.translation, {0, 0, 0}, 1e-15);

  // 4x4 embedding
  const Eigen::Matrix4d m = a.matrix();
  CHECK(m(3, 3) == 1.0);
  CHECK(m(3, 0) == 0.0);
  CHECK(m.topLeftCorner<3, 3>() == a.rotation);
}

TEST_CASE("euler angles: frozen fixture and round trips") {
  // frozen via tests/oracles/geometry_oracle.py (independent NumPy algebra)
  const Eigen::Matrix3d r1 = euler_to_rotation({0.1, -0.2, 0.3});
  check_matrix(r1,
               {0.93629336358419923, -0.31299182578546797,
                -0.15934507930797789, 0.28962947762551555,
                0.94470248599489426, -0.1537919979889642,
                0.19866933079506122, 0.09784339500725571,
                0.97517032720181596},
               1e-15);

  const EulerExtraction back = rotation_to_euler(r1);
  CHECK(!back.near_gimbal);
  CHECK(std::abs(back.angles.roll - 0.1) <= 1e-14);
  CHECK(std::abs(back.angles.pitch - (-0.2)) <= 1e-14);
  CHECK(std::abs(back.angles.yaw - 0.3) <= 1e-14);

  // property: round trip over the non-degenerate pitch range
  Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    EulerAngles e;
    e.roll = rng.uniform(-kPi, kPi);
    e.pitch = rng.uniform(-kPi / 2 + 0.05, kPi / 2 - 0.05);
    e.yaw = rng.uniform(-kPi, kPi);
    const EulerExtraction got = rotation_to_euler(euler_to_rotation(e));
    CHECK(!got.near_gimbal);
    CHECK(std::abs(got.angles.roll - e.roll) <= 1e-12);
    CHECK(std::abs(got.angles.pitch - e.pitch) <= 1e-12);
    CHECK(std::abs(got.angles.yaw - e.yaw) <= 1e-12);
  }
}

TEST_CASE("euler angles: gimbal lock is flagged") {
  const Eigen::Matrix3d r =
      euler_to_rotation({0.3, kPi / 2, 0.5});
  const EulerExtraction got = rotation_to_euler(r);
  CHECK(got.near_gimbal);
  CHECK(std::abs(got.angles.pitch - kPi / 2) <= 1e-7);

  CHECK(!rotation_to_euler(euler_to_rotation({0.3, 1.4, 0.5})).near_gimbal);
}

TEST_CASE("compose and inverse against frozen fixture") {
  RigidTransform a, b;
  a.rotation = euler_to_rotation({0.2, 0.1, -0.4});
  a.translation = {0.5, -1.0, 2.0};
  b.rotation = euler_to_rotation({-0.3, 0.25, 0.7});
  b.translation = {-2.0, 0.75, 0.1};

  const RigidTransform c = compose(a, b);
  check_matrix(c.rotation,
               {0.92562953060986375, -0.34554981118436118,
                0.15428966282099316, 0.32619200019752498,
                0.93523013371448271, 0.13763493742334706,
                -0.19185606862984877, -0.077070908797309115,
                0.9783922137604405},
               1e-15);
  check_vector(c.translation,
               {-1.0317005681650462, 0.42406996388923957, 2.4454414747544009},
               1e-15);

  const RigidTransform ia = inverse(a);
  check_matrix(ia.rotation,
               {0.91645952550798948, -0.38747287263277136,
                -0.099833416646828155, 0.39992407670841446,
                0.89497743603020419, 0.19767681165408388,
                0.012754253196218195, -0.22108858398956308,
                0.97517032720181596},
               1e-15);
  check_vector(ia.translation,
               {-0.64603580209310973, 0.2996617743678292,
                -2.1778063649913042},
               1e-15);

  // applying compose(a,b) equals applying b then a
  const Eigen::Vector3d p{0.3, -0.7, 1.9};
  CHECK((c.apply(p) - a.apply(b.apply(p))).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("compose re-orthonormalizes only on drift") {
  RigidTransform a;
  a.rotation = euler_to_rotation({0.2, 0.1, -0.4});

  // clean product: drift stays tiny, no renormalization kicks in
  RigidTransform b;
  b.rotation = euler_to_rotation({-0.3, 0.25, 0.7});
  CHECK(rotation_drift(compose(a, b).rotation) <= 1e-14);

  // poison one input with visible drift: output must come back orthonormal
  RigidTransform bad = a;
  bad.rotation(0, 0) += 1e-6;
  CHECK(rotation_drift(bad.rotation) > kDriftTol);
  const RigidTransform fixed = compose(bad, b);
  CHECK(rotation_drift(fixed.rotation) <= 1e-14);
}

TEST_CASE("projection round trips and edge cases") {
  CameraModel cam;
  cam.width = 96;
  cam.height = 64;
  cam.fx = 100.0;
  cam.fy = 110.0;
  cam.cx = 47.5;
  cam.cy = 31.5;

  // hand-computed pinhole example
  const Projection p = project({0.3, -0.2, 2.0}, cam);
  CHECK(p.in_front);
  CHECK(std::abs(p.u - 62.5) <= 1e-12);
  CHECK(std::abs(p.v - 20.5) <= 1e-12);

  // unproject . project is identity on the camera frame
  const Eigen::Vector3d q = unproject(p.u, p.v, 2.0, cam);
  CHECK((q - Eigen::Vector3d{0.3, -0.2, 2.0}).cwiseAbs().maxCoeff() <= 1e-12);

  // project . unproject is identity on pixels, across random draws
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const double u = rng.uniform(0.0, cam.width - 1.0);
    const double v = rng.uniform(0.0, cam.height - 1.0);
    const double d = std::exp(rng.uniform(std::log(0.5), std::log(200.0)));
    const Projection rp = project(unproject(u, v, d, cam), cam);
    CHECK(rp.in_front);
    CHECK(std::abs(rp.u - u) <= 1e-9);
    CHECK(std::abs(rp.v - v) <= 1e-9);
  }

  // behind-camera points are flagged, not extrapolated
  CHECK(!project({0.0, 0.0, -1.0}, cam).in_front);
  CHECK(!project({0.0, 0.0, 0.0}, cam).in_front);
  CHECK(!project({0.1, 0.1, kZMin}, cam).in_front);

  // non-positive depth is a domain error
  CHECK_THROWS_AS(unproject(10.0, 10.0, 0.0, cam), std::domain_error);
  CHECK_THROWS_AS(unproject(10.0, 10.0, -2.0, cam), std::domain_error);
}

TEST_CASE("relative extrinsics: frozen rig fixture and identity shortcut") {
  CameraModel front, left;
  front.extrinsics = circle_camera(0.0, 1.0, 1.5, 0.0);
  left.extrinsics = circle_camera(kPi / 2, 1.0, 1.5, 0.0);

  // left -> front, frozen via the NumPy oracle
  const RigidTransform rel = relative_extrinsics(left, front);
  check_matrix(rel.rotation,
               {6.123233995736766e-17, 0, -1, 0, 1, 0, 1, 0,
                6.123233995736766e-17},
               1e-15);
  check_vector(rel.translation, {-1, 0, -0.99999999999999989}, 1e-15);

  // same camera twice: exact identity, bit for bit
  const RigidTransform self = relative_extrinsics(front, front);
  CHECK(self.rotation == Eigen::Matrix3d::Identity());
  CHECK(self.translation == Eigen::Vector3d::Zero());

  // consistency: rel applied to a camera-frame point equals going through rig
  const Eigen::Vector3d p{0.2, 0.1, 3.0};
  const Eigen::Vector3d via_rig =
      inverse(front.extrinsics).apply(left.extrinsics.apply(p));
  CHECK((rel.apply(p) - via_rig).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("to_canonical: frozen conjugation fixtures") {
  const RigidTransform xf = circle_camera(0.0, 1.0, 1.5, 0.0);
  const RigidTransform xl = circle_camera(kPi / 2, 1.0, 1.5, 0.0);

  // left camera sliding along its own right axis looks like pure forward
  // motion to the front camera
  RigidTransform m_right;
  m_right.translation = {1.0, 0.0, 0.0};
  const RigidTransform ca = to_canonical(m_right, xl, xf);
  check_matrix(ca.rotation, {1, 0, 0, 0, 1, 0, 0, 0, 1}, 1e-15);
  check_vector(ca.translation, {1.1102230246251565e-16, 0, 1}, 1e-15);

  // left camera moving forward looks like leftward motion up front
  RigidTransform m_fwd;
  m_fwd.translation = {0.0, 0.0, 1.0};
  const RigidTransform cb = to_canonical(m_fwd, xl, xf);
  check_vector(cb.translation, {-1, 0, 1.1102230246251565e-16}, 1e-15);

  // full motion (rotation + translation), frozen in full
  RigidTransform m_full;
  m_full.rotation = euler_to_rotation({0.02, -0.01, 0.05});
  m_full.translation = {0.3, 0.05, -0.1};
  const RigidTransform cc = to_canonical(m_full, xl, xf);
  check_matrix(cc.rotation,
               {0.9997500170828264, -0.019997666768331167,
                -0.0099998333341666645, 0.020473356977064712,
                0.99854052200024024, 0.049976670333039382,
                0.0089858219979033222, -0.050168907176760445,
                0.99870032329809111},
               1e-14);
  check_vector(cc.translation,
               {0.089750183748659618, 0.1204500273101041,
                0.30768614529599447},
               1e-14);

  // conversion from the canonical camera itself is the identity map
  const RigidTransform self = to_canonical(m_full, xf, xf);
  CHECK((self.rotation - m_full.rotation).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((self.translation - m_full.translation).cwiseAbs().maxCoeff() <=
        1e-15);
}

TEST_CASE("to_canonical: a shared rig motion converts consistently") {
  // one rigid world motion seen by several cameras: every conversion to the
  // canonical frame must agree with the canonical camera's own motion
  RigidTransform world;
  world.rotation = euler_to_rotation({0.0, 0.0, 0.02});
  world.translation = {0.25, 0.01, 0.0};

  const RigidTransform xf = circle_camera(0.0, 1.0, 1.5, 0.15);
  auto ego_of = [&](const RigidTransform& x) {
    // motion observed in a camera: X^-1 * W * X (current frame to next)
    return compose(compose(inverse(x), world), x);
  };
  const RigidTransform ref = ego_of(xf);

  for (double yaw : {kPi / 3, -kPi / 3, 2 * kPi / 3, kPi}) {
    const RigidTransform xj = circle_camera(yaw, 1.0, 1.5, 0.15);
    const RigidTransform conv = to_canonical(ego_of(xj), xj, xf);
    CHECK((conv.rotation - ref.rotation).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((conv.translation - ref.translation).cwiseAbs().maxCoeff() <=
          1e-13);
  }
}

TEST_CASE("pitched circle camera matches frozen oracle") {
  const RigidTransform x = circle_camera(kPi / 3, 1.0, 1.5, 0.15);
  check_matrix(x.rotation,
               {0.8660254037844386, -0.074719066236799622,
                0.49438553896802123, -0.50000000000000011,
                -0.12941721901624118, 0.85630087201993554, 0,
                -0.98877107793604224, -0.14943813247359922},
               1e-15);
  check_vector(x.translation,
               {0.50000000000000011, 0.8660254037844386, 1.5}, 1e-15);
}
