#include "rigdepth/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "rigdepth/errors.hpp"
#include "rigdepth/io.hpp"
#include "rigdepth/rng.hpp"

namespace rigdepth {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRayEps = 1e-4;  // minimum hit distance

// camera axes in rig axes: camera x -> rig -y (left), camera y -> rig -z
// (down)... i.e. camera z looks along rig x (forward)
Eigen::Matrix3d base_orientation() {
  Eigen::Matrix3d b;
  b << 0, 0, 1, -1, 0, 0, 0, -1, 0;
  return b;
}

RigidTransform ring_camera(double yaw, double radius, double height,
                           double pitch_down) {
  const Eigen::Matrix3d rz = euler_to_rotation({0.0, 0.0, yaw});
  const Eigen::Matrix3d rx = euler_to_rotation({-pitch_down, 0.0, 0.0});
  RigidTransform x;
  x.rotation = rz * base_orientation() * rx;
  x.translation =
      Eigen::Vector3d(radius * std::cos(yaw), radius * std::sin(yaw), height);
  return x;
}

// --- procedural texture --------------------------------------------------

double smooth_fade(double f) { return f * f * (3.0 - 2.0 * f); }

double lattice(std::uint64_t seed, long ix, long iy, long iz) {
  return bits_to_unit(hash_coords(seed, ix, iy, iz));
}

// trilinear value noise over a unit lattice, output in [0, 1)
double value_noise(std::uint64_t seed, const Eigen::Vector3d& p) {
  const double fx = std::floor(p.x()), fy = std::floor(p.y()),
               fz = std::floor(p.z());
  const long x0 = static_cast<long>(fx), y0 = static_cast<long>(fy),
             z0 = static_cast<long>(fz);
  const double ux = smooth_fade(p.x() - fx);
  const double uy = smooth_fade(p.y() - fy);
  const double uz = smooth_fade(p.z() - fz);
  double planes[2];
  for (int dz = 0; dz < 2; ++dz) {
    const double v00 = lattice(seed, x0, y0, z0 + dz);
    const double v10 = lattice(seed, x0 + 1, y0, z0 + dz);
    const double v01 = lattice(seed, x0, y0 + 1, z0 + dz);
    const double v11 = lattice(seed, x0 + 1, y0 + 1, z0 + dz);
    const double a = v00 + (v10 - v00) * ux;
    const double b = v01 + (v11 - v01) * ux;
    planes[dz] = a + (b - a) * uy;
  }
  return planes[0] + (planes[1] - planes[0]) * uz;
}

// a few octaves of value noise, output in [0, 1)
double fractal_noise(std::uint64_t seed, Eigen::Vector3d p, int octaves) {
  double sum = 0.0, amp = 0.5, norm = 0.0;
  for (int o = 0; o < octaves; ++o) {
    sum += amp * value_noise(seed + static_cast<std::uint64_t>(o), p);
    norm += amp;
    amp *= 0.5;
    p = p * 2.0 + Eigen::Vector3d(13.7, 7.3, 3.1);
  }
  return sum / norm;
}

// --- world ----------------------------------------------------------------

struct Box {
  Eigen::Vector3d lo, hi;
  Eigen::Vector3d base_color;
  std::uint64_t texture_seed = 0;
};

struct World {
  std::vector<Box> boxes;
  std::uint64_t ground_seed = 0;
  double far_plane = 500.0;
};

World make_world(const SceneSpec& scene) {
  World world;
  world.far_plane = scene.far_plane;
  world.ground_seed = scene.seed ^ 0xA11CE5ull;
  Rng rng(scene.seed);
  for (int k = 0; k < scene.box_count; ++k) {
    const double angle = rng.uniform(0.0, 2.0 * kPi);
    const double dist = rng.uniform(6.0, 25.0);
    const double hx = rng.uniform(0.8, 2.2);
    const double hy = rng.uniform(0.8, 2.2);
    const double height = rng.uniform(1.2, 4.0);
    Box box;
    const double cx = dist * std::cos(angle);
    const double cy = dist * std::sin(angle);
    box.lo = Eigen::Vector3d(cx - hx, cy - hy, 0.0);
    box.hi = Eigen::Vector3d(cx + hx, cy + hy, height);
    box.base_color = Eigen::Vector3d(rng.uniform(0.25, 0.85),
                                     rng.uniform(0.25, 0.85),
                                     rng.uniform(0.25, 0.85));
    box.texture_seed = hash_coords(scene.seed, 101, k);
    world.boxes.push_back(box);
  }
  return world;
}

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  int material = -1;  // -1 none, 0 ground, 1 + box index
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
};

// Ray parameter of the nearest surface along o + t*d.  d is deliberately not
// normalized: its camera-frame z component is 1, so t is the camera z-depth.
Hit intersect(const World& world, const Eigen::Vector3d& o,
              const Eigen::Vector3d& d) {
  Hit hit;
  if (d.z() < -1e-12) {
    const double t = -o.z() / d.z();
    if (t > kRayEps) {
      hit.t = t;
      hit.material = 0;
      hit.normal = Eigen::Vector3d::UnitZ();
    }
  }
  for (std::size_t k = 0; k < world.boxes.size(); ++k) {
    const Box& box = world.boxes[k];
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    int enter_axis = -1;
    bool miss = false;
    for (int axis = 0; axis < 3 && !miss; ++axis) {
      const double dv = d(axis), ov = o(axis);
      if (std::abs(dv) < 1e-12) {
        if (ov < box.lo(axis) || ov > box.hi(axis)) miss = true;
        continue;
      }
      double ta = (box.lo(axis) - ov) / dv;
      double tb = (box.hi(axis) - ov) / dv;
      if (ta > tb) std::swap(ta, tb);
      if (ta > t0) {
        t0 = ta;
        enter_axis = axis;
      }
      t1 = std::min(t1, tb);
      if (t0 > t1) miss = true;
    }
    if (miss || t1 < kRayEps) continue;
    const double t = t0 > kRayEps ? t0 : t1;
    if (t < hit.t && enter_axis >= 0) {
      hit.t = t;
      hit.material = 1 + static_cast<int>(k);
      hit.normal = Eigen::Vector3d::Zero();
      hit.normal(enter_axis) = d(enter_axis) > 0.0 ? -1.0 : 1.0;
    }
  }
  return hit;
}

Eigen::Vector3d shade(const World& world, const Hit& hit,
                      const Eigen::Vector3d& point) {
  static const Eigen::Vector3d light =
      Eigen::Vector3d(0.35, 0.2, 0.9).normalized();
  const double lambert = 0.3 + 0.7 * std::max(0.0, hit.normal.dot(light));
  // fade texture contrast with distance so distant surfaces stay band-limited
  // (their texture would otherwise alias below the pixel footprint)
  const double fade = 1.0 / (1.0 + hit.t / 35.0);
  Eigen::Vector3d albedo;
  if (hit.material == 0) {
    const double n = fractal_noise(world.ground_seed, point / 4.5, 2);
    albedo = Eigen::Vector3d(0.46, 0.42, 0.36) *
             (0.35 + 1.1 * (0.5 + (n - 0.5) * fade));
  } else {
    const Box& box = world.boxes[static_cast<std::size_t>(hit.material - 1)];
    const double n = fractal_noise(box.texture_seed, point / 3.0, 2);
    albedo = box.base_color * (0.55 + 0.9 * (0.5 + (n - 0.5) * fade));
  }
  Eigen::Vector3d c = albedo * lambert;
  return c.cwiseMax(0.0).cwiseMin(1.0);
}

Eigen::Vector3d sky_color(const Eigen::Vector3d& dir) {
  const double dz = std::max(0.0, dir.normalized().z());
  return (1.0 - dz) * Eigen::Vector3d(0.78, 0.84, 0.92) +
         dz * Eigen::Vector3d(0.38, 0.52, 0.78);
}

// ego-body band height at column x
int body_band(int x, int w, int h, double body_fraction) {
  if (body_fraction <= 0.0) return 0;
  const double cx = (w - 1) / 2.0;
  const double falloff = 1.0 - 0.55 * std::abs(x - cx) / cx;
  const int band =
      static_cast<int>(std::floor(body_fraction * h * falloff + 0.5));
  return std::min(band, h);
}

}  // namespace

std::vector<CameraModel> build_rig(const RigSpec& spec) {
  if (spec.camera_count <= 0 || spec.width < 2 || spec.height < 2) {
    throw DataError("build_rig: invalid rig dimensions");
  }
  const double half = 0.5 * spec.hfov_degrees * kPi / 180.0;
  const double fx = 0.5 * (spec.width - 1) / std::tan(half);
  std::vector<double> yaws;
  std::vector<std::string> names;
  if (spec.camera_count == 6) {
    yaws = {0.0, kPi / 3.0, -kPi / 3.0, 2.0 * kPi / 3.0, -2.0 * kPi / 3.0,
            kPi};
    names = {"Front", "F.Left", "F.Right", "B.Left", "B.Right", "Back"};
  } else {
    for (int i = 0; i < spec.camera_count; ++i) {
      yaws.push_back(2.0 * kPi * i / spec.camera_count);
      names.push_back("Cam" + std::to_string(i));
    }
  }
  std::vector<CameraModel> rig;
  for (int i = 0; i < spec.camera_count; ++i) {
    CameraModel cam;
    cam.name = names[static_cast<std::size_t>(i)];
    cam.width = spec.width;
    cam.height = spec.height;
    cam.fx = fx;
    cam.fy = fx;
    cam.cx = (spec.width - 1) / 2.0;
    cam.cy = (spec.height - 1) / 2.0;
    cam.extrinsics = ring_camera(yaws[static_cast<std::size_t>(i)],
                                 spec.radius, spec.mount_height,
                                 spec.pitch_down);
    rig.push_back(cam);
  }
  return rig;
}

MultiCamSample make_sample(const RigSpec& rig_spec, const SceneSpec& scene) {
  MultiCamSample sample;
  sample.rig = build_rig(rig_spec);
  const World world = make_world(scene);

  for (int f = 0; f < 3; ++f) {
    const double k = f - 1;
    RigidTransform pose;
    pose.rotation = euler_to_rotation({0.0, 0.0, k * scene.yaw_rate});
    pose.translation = Eigen::Vector3d(k * scene.speed, 0.0, 0.0);
    sample.trajectory[static_cast<std::size_t>(f)] = pose;
  }

  const int w = rig_spec.width, h = rig_spec.height;
  for (std::size_t i = 0; i < sample.rig.size(); ++i) {
    const CameraModel& cam = sample.rig[i];
    std::array<ImagePlane, 3> frames = {ImagePlane::zeros(w, h, 3),
                                        ImagePlane::zeros(w, h, 3),
                                        ImagePlane::zeros(w, h, 3)};
    DepthField gt = DepthField::constant(w, h, world.far_plane);
    BinaryMask valid = BinaryMask::zeros(w, h);

    for (int f = 0; f < 3; ++f) {
      const RigidTransform cam_to_world =
          compose(sample.trajectory[static_cast<std::size_t>(f)],
                  cam.extrinsics);
      const Eigen::Vector3d origin = cam_to_world.translation;
      const auto trace = [&](double px, double py) {
        const Eigen::Vector3d dir =
            cam_to_world.rotation * Eigen::Vector3d((px - cam.cx) / cam.fx,
                                                    (py - cam.cy) / cam.fy,
                                                    1.0);
        const Hit hit = intersect(world, origin, dir);
        if (hit.material < 0 || hit.t > world.far_plane) {
          return sky_color(dir);
        }
        return shade(world, hit, origin + hit.t * dir);
      };
      ImagePlane& img = frames[static_cast<std::size_t>(f)];
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          // 2x2 supersampling keeps the images band-limited enough that a
          // correctly warped neighbor frame reproduces them closely
          const Eigen::Vector3d color =
              0.25 * (trace(x - 0.25, y - 0.25) + trace(x + 0.25, y - 0.25) +
                      trace(x - 0.25, y + 0.25) + trace(x + 0.25, y + 0.25));
          for (int c = 0; c < 3; ++c) img.at(x, y, c) = color(c);
          if (f == kCurr) {
            const Eigen::Vector3d dir =
                cam_to_world.rotation *
                Eigen::Vector3d((x - cam.cx) / cam.fx, (y - cam.cy) / cam.fy,
                                1.0);
            const Hit hit = intersect(world, origin, dir);
            if (hit.material >= 0 && hit.t <= world.far_plane) {
              gt.log_at(x, y) = std::log(hit.t);
              valid.set(x, y, true);
            }
          }
        }
      }
    }

    // static ego body along the bottom rows: rendered identically in every
    // frame, excluded from ground truth, flagged for loss masking
    BinaryMask visible = BinaryMask::filled(w, h, true);
    for (int x = 0; x < w; ++x) {
      const int band = body_band(x, w, h, scene.body_fraction);
      for (int y = h - band; y < h; ++y) {
        const double g =
            0.15 + 0.05 * bits_to_unit(hash_coords(
                              0xB0D7ull, static_cast<std::int64_t>(i), x, y));
        for (int f = 0; f < 3; ++f) {
          frames[static_cast<std::size_t>(f)].at(x, y, 0) = g;
          frames[static_cast<std::size_t>(f)].at(x, y, 1) = g * 1.05;
          frames[static_cast<std::size_t>(f)].at(x, y, 2) = g * 1.1;
        }
        visible.set(x, y, false);
        valid.set(x, y, false);
        gt.log_at(x, y) = std::log(0.75);
      }
    }

    sample.images.push_back(std::move(frames));
    sample.gt_depth.push_back(std::move(gt));
    sample.gt_valid.push_back(std::move(valid));
    sample.self_occlusion.push_back(std::move(visible));
  }
  return sample;
}

MultiCamSample default_sample() { return make_sample(RigSpec{}, SceneSpec{}); }

void save_sample(const MultiCamSample& sample, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("save_sample: cannot create " + dir);
  write_text_file(dir + "/rig.json", rig_to_json(sample.rig));
  write_text_file(dir + "/trajectory.json",
                  trajectory_to_json(sample.trajectory));
  for (std::size_t i = 0; i < sample.rig.size(); ++i) {
    const std::string cam_dir = dir + "/cam" + std::to_string(i);
    fs::create_directories(cam_dir, ec);
    if (ec) throw DataError("save_sample: cannot create " + cam_dir);
    write_png(cam_dir + "/image_prev.png", sample.images[i][kPrev]);
    write_png(cam_dir + "/image_curr.png", sample.images[i][kCurr]);
    write_png(cam_dir + "/image_next.png", sample.images[i][kNext]);
    write_depth_pfm(cam_dir + "/gt_depth.pfm", sample.gt_depth[i]);
    write_mask_png(cam_dir + "/gt_valid.png", sample.gt_valid[i]);
    write_mask_png(cam_dir + "/self_occlusion.png", sample.self_occlusion[i]);
  }
}

MultiCamSample load_sample(const std::string& dir) {
  MultiCamSample sample;
  sample.rig = rig_from_json(read_text_file(dir + "/rig.json"));
  sample.trajectory =
      trajectory_from_json(read_text_file(dir + "/trajectory.json"));
  for (std::size_t i = 0; i < sample.rig.size(); ++i) {
    const CameraModel& cam = sample.rig[i];
    const std::string cam_dir = dir + "/cam" + std::to_string(i);
    std::array<ImagePlane, 3> frames = {
        read_png(cam_dir + "/image_prev.png"),
        read_png(cam_dir + "/image_curr.png"),
        read_png(cam_dir + "/image_next.png")};
    DepthField gt = read_depth_pfm(cam_dir + "/gt_depth.pfm");
    BinaryMask valid = read_mask_png(cam_dir + "/gt_valid.png");
    BinaryMask visible = read_mask_png(cam_dir + "/self_occlusion.png");
    for (const ImagePlane& img : frames) {
      if (img.width != cam.width || img.height != cam.height) {
        throw DataError("load_sample: image size differs from rig for " +
                        cam.name);
      }
    }
    if (gt.width != cam.width || gt.height != cam.height ||
        valid.width != cam.width || valid.height != cam.height ||
        visible.width != cam.width || visible.height != cam.height) {
      throw DataError("load_sample: ground-truth size differs from rig for " +
                      cam.name);
    }
    sample.images.push_back(std::move(frames));
    sample.gt_depth.push_back(std::move(gt));
    sample.gt_valid.push_back(std::move(valid));
    sample.self_occlusion.push_back(std::move(visible));
  }
  return sample;
}

}  // namespace rigdepth
