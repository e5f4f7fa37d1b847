#!/usr/bin/env python3
"""Independent NumPy oracle for the geometry test fixtures.

Computes expected values with plain matrix algebra (no project code) so the
C++ tests can freeze them as constants.  Run: python3 geometry_oracle.py
"""
import numpy as np

np.set_printoptions(precision=17)


def rot_x(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


def rot_y(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def rot_z(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def euler_to_rot(roll, pitch, yaw):
    # intrinsic Z-Y-X: yaw about z, then pitch about y, then roll about x
    return rot_z(yaw) @ rot_y(pitch) @ rot_x(roll)


def fmt(name, arr):
    flat = np.asarray(arr).flatten()
    body = ", ".join("%.17g" % v for v in flat)
    print(f"{name} = {{{body}}}")


# --- fixture 1: euler -> rotation for (roll, pitch, yaw) = (0.1, -0.2, 0.3)
R1 = euler_to_rot(0.1, -0.2, 0.3)
fmt("euler_R1 (row-major)", R1)

# --- fixture 2: compose of two rigid transforms (applies b, then a)
Ra = euler_to_rot(0.2, 0.1, -0.4)
ta = np.array([0.5, -1.0, 2.0])
Rb = euler_to_rot(-0.3, 0.25, 0.7)
tb = np.array([-2.0, 0.75, 0.1])
Rc = Ra @ Rb
tc = Ra @ tb + ta
fmt("compose_R (row-major)", Rc)
fmt("compose_t", tc)
# inverse of (Ra, ta)
fmt("inv_Ra (row-major)", Ra.T)
fmt("inv_ta", -Ra.T @ ta)

# --- fixture 3: camera rig conventions --------------------------------------
# rig frame: x forward, y left, z up.  camera frame: x right, y down, z forward.
# base orientation (camera looking along rig +x): columns are the rig-frame
# directions of the camera axes (right, down, forward).
R_base = np.array([
    [0.0, 0.0, 1.0],
    [-1.0, 0.0, 0.0],
    [0.0, -1.0, 0.0],
])
assert np.isclose(np.linalg.det(R_base), 1.0)


def cam_extrinsics(yaw, radius, height, pitch_down):
    """camera-to-rig transform for a camera on the rig circle."""
    R = rot_z(yaw) @ R_base @ rot_x(-pitch_down)
    t = np.array([radius * np.cos(yaw), radius * np.sin(yaw), height])
    return R, t


def se3(R, t):
    M = np.eye(4)
    M[:3, :3] = R
    M[:3, 3] = t
    return M


# front camera (yaw 0) and left camera (yaw +90deg), radius 1, height 1.5.
Rf, tf = cam_extrinsics(0.0, 1.0, 1.5, 0.0)
Rl, tl = cam_extrinsics(np.pi / 2, 1.0, 1.5, 0.0)
Xf = se3(Rf, tf)
Xl = se3(Rl, tl)

# relative extrinsics left->front: X_front^-1 @ X_left
rel = np.linalg.inv(Xf) @ Xl
fmt("rel_left_to_front_R (row-major)", rel[:3, :3])
fmt("rel_left_to_front_t", rel[:3, 3])

# motion conjugation into the canonical (front) camera:
#   Xtilde = B @ Xhat @ B^-1   with B = X_canonical^-1 @ X_other
B = np.linalg.inv(Xf) @ Xl
# case A: left camera translates along its own right axis (1,0,0)
XhatA = se3(np.eye(3), np.array([1.0, 0.0, 0.0]))
XtA = B @ XhatA @ np.linalg.inv(B)
fmt("canonical_case_right_t", XtA[:3, 3])  # expect camera-forward (0,0,1)
# case B: left camera translates along its own forward axis (0,0,1)
XhatB = se3(np.eye(3), np.array([0.0, 0.0, 1.0]))
XtB = B @ XhatB @ np.linalg.inv(B)
fmt("canonical_case_forward_t", XtB[:3, 3])  # expect camera-left (-1,0,0)
# case C: rotation + translation motion, frozen in full
XhatC = se3(euler_to_rot(0.02, -0.01, 0.05), np.array([0.3, 0.05, -0.1]))
XtC = B @ XhatC @ np.linalg.inv(B)
fmt("canonical_case_full_R (row-major)", XtC[:3, :3])
fmt("canonical_case_full_t", XtC[:3, 3])

# --- fixture 4: pitched camera extrinsics (yaw 60deg, pitch 0.15 down) ------
Rp, tp = cam_extrinsics(np.pi / 3, 1.0, 1.5, 0.15)
fmt("pitched_R (row-major)", Rp)
fmt("pitched_t", tp)
