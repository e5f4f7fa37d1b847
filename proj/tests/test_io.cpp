#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>

#include "rigdepth/errors.hpp"
#include "rigdepth/geometry.hpp"
#include "rigdepth/image.hpp"
#include "rigdepth/io.hpp"
#include "rigdepth/rng.hpp"

using namespace rigdepth;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "rigdepth_io_test";
  fs::create_directories(dir);
  return dir;
}

ImagePlane random_image(int w, int h, int c, std::uint64_t seed) {
  ImagePlane img = ImagePlane::zeros(w, h, c);
  Rng rng(seed);
  for (double& v : img.data) v = rng.uniform01();
  return img;
}

}  // namespace

TEST_CASE("png: round trip within quantization error, deterministic bytes") {
  const fs::path dir = temp_dir();
  for (int channels : {1, 3}) {
    const ImagePlane img = random_image(33, 21, channels, 42 + channels);
    const std::string path =
        (dir / ("round_trip_" + std::to_string(channels) + ".png")).string();
    write_png(path, img);
    const ImagePlane back = read_png(path);
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    REQUIRE(back.channels == img.channels);
    double max_err = 0.0;
    for (std::size_t i = 0; i < img.data.size(); ++i) {
      max_err = std::max(max_err, std::abs(img.data[i] - back.data[i]));
    }
    // 8-bit quantization: worst case half a step
    CHECK(max_err <= 0.5 / 255.0 + 1e-12);

    // writing the same image again gives identical bytes
    const std::string path2 =
        (dir / ("round_trip_b" + std::to_string(channels) + ".png")).string();
    write_png(path2, img);
    CHECK(read_text_file(path) == read_text_file(path2));

    // second decode returns identical values
    const ImagePlane back2 = read_png(path);
    CHECK(back.data == back2.data);
  }
}

TEST_CASE("png: out-of-range values clamp") {
  const fs::path dir = temp_dir();
  ImagePlane img = ImagePlane::zeros(4, 3, 1);
  img.at(0, 0, 0) = -0.5;
  img.at(1, 0, 0) = 1.5;
  img.at(2, 0, 0) = 1.0;
  const std::string path = (dir / "clamp.png").string();
  write_png(path, img);
  const ImagePlane back = read_png(path);
  CHECK(back.at(0, 0, 0) == 0.0);
  CHECK(back.at(1, 0, 0) == 1.0);
  CHECK(back.at(2, 0, 0) == 1.0);
}

TEST_CASE("png: masks round trip exactly") {
  const fs::path dir = temp_dir();
  BinaryMask mask = BinaryMask::zeros(17, 9);
  Rng rng(5);
  for (auto& b : mask.bits) b = rng.uniform01() < 0.4 ? 1 : 0;
  const std::string path = (dir / "mask.png").string();
  write_mask_png(path, mask);
  const BinaryMask back = read_mask_png(path);
  REQUIRE(back.width == mask.width);
  REQUIRE(back.height == mask.height);
  CHECK(back.bits == mask.bits);
}

TEST_CASE("pfm: hand-built byte fixture pins the bottom-up layout") {
  // 2x2 map with top row (1, 2) and bottom row (3, 4).  PFM stores the
  // bottom row first, so the payload order is 3, 4, 1, 2.
  const fs::path dir = temp_dir();
  const std::string path = (dir / "fixture.pfm").string();
  std::string bytes = "Pf\n2 2\n-1.0\n";
  const float payload[4] = {3.0f, 4.0f, 1.0f, 2.0f};
  bytes.append(reinterpret_cast<const char*>(payload), sizeof(payload));
  write_text_file(path, bytes);

  const DepthField depth = read_depth_pfm(path);
  REQUIRE(depth.width == 2);
  REQUIRE(depth.height == 2);
  CHECK(depth.depth_at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(depth.depth_at(1, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(depth.depth_at(0, 1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(depth.depth_at(1, 1) == doctest::Approx(4.0).epsilon(1e-12));

  // and writing that field back reproduces the exact bytes
  const std::string path2 = (dir / "fixture_back.pfm").string();
  write_depth_pfm(path2, depth);
  CHECK(read_text_file(path2) == bytes);
}

TEST_CASE("pfm: depth round trip at float32 precision") {
  const fs::path dir = temp_dir();
  DepthField depth;
  depth.width = 13;
  depth.height = 7;
  depth.log_depth.resize(depth.pixel_count());
  Rng rng(99);
  for (double& v : depth.log_depth) {
    v = rng.uniform(std::log(0.5), std::log(200.0));
  }
  const std::string path = (dir / "depth.pfm").string();
  write_depth_pfm(path, depth);
  const DepthField back = read_depth_pfm(path);
  REQUIRE(back.width == depth.width);
  REQUIRE(back.height == depth.height);
  for (std::size_t i = 0; i < depth.log_depth.size(); ++i) {
    const double a = std::exp(depth.log_depth[i]);
    const double b = std::exp(back.log_depth[i]);
    CHECK(std::abs(a - b) <= 1e-6 * a);  // float32 mantissa
  }
}

TEST_CASE("pfm: three-channel variant round trips") {
  const fs::path dir = temp_dir();
  const int w = 5, h = 4;
  std::vector<float> values(static_cast<std::size_t>(w) * h * 3);
  Rng rng(123);
  for (float& v : values) v = static_cast<float>(rng.uniform(-10.0, 10.0));
  const std::string path = (dir / "triple.pfm").string();
  write_pfm(path, values, w, h, 3);
  int rw = 0, rh = 0, rc = 0;
  const std::vector<float> back = read_pfm(path, &rw, &rh, &rc);
  CHECK(rw == w);
  CHECK(rh == h);
  CHECK(rc == 3);
  CHECK(back == values);
}

TEST_CASE("pfm: malformed inputs raise data errors") {
  const fs::path dir = temp_dir();
  const std::string bad_magic = (dir / "bad_magic.pfm").string();
  write_text_file(bad_magic, "P6\n2 2\n-1.0\nxxxxxxxx");
  CHECK_THROWS_AS(read_depth_pfm(bad_magic), DataError);

  const std::string truncated = (dir / "truncated.pfm").string();
  write_text_file(truncated, "Pf\n4 4\n-1.0\nxx");
  CHECK_THROWS_AS(read_depth_pfm(truncated), DataError);

  const std::string big_endian = (dir / "big_endian.pfm").string();
  write_text_file(big_endian, "Pf\n1 1\n1.0\nxxxx");
  CHECK_THROWS_AS(read_depth_pfm(big_endian), DataError);

  CHECK_THROWS_AS(read_depth_pfm((dir / "does_not_exist.pfm").string()),
                  DataError);
}

TEST_CASE("ply: written file parses with an independent reader") {
  const fs::path dir = temp_dir();
  PointCloud cloud;
  Rng rng(7);
  for (int i = 0; i < 57; ++i) {
    cloud.points.push_back(
        {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(0.0, 10.0)});
    cloud.colors.push_back({static_cast<std::uint8_t>(rng.next_bits() & 0xff),
                            static_cast<std::uint8_t>(rng.next_bits() & 0xff),
                            static_cast<std::uint8_t>(rng.next_bits() & 0xff)});
  }
  const std::string path = (dir / "cloud.ply").string();
  write_ply(path, cloud);

  // independent minimal parser (no project code)
  const std::string bytes = read_text_file(path);
  const std::string marker = "end_header\n";
  const std::size_t header_end = bytes.find(marker);
  REQUIRE(header_end != std::string::npos);
  const std::string header = bytes.substr(0, header_end);
  CHECK(header.find("format binary_little_endian 1.0") != std::string::npos);
  CHECK(header.find("element vertex 57") != std::string::npos);
  CHECK(header.find("property float x") != std::string::npos);
  CHECK(header.find("property uchar red") != std::string::npos);

  const char* payload = bytes.data() + header_end + marker.size();
  const std::size_t payload_size = bytes.size() - header_end - marker.size();
  REQUIRE(payload_size == 57u * (3 * sizeof(float) + 3));
  for (int i = 0; i < 57; ++i) {
    float xyz[3];
    std::memcpy(xyz, payload + i * 15, sizeof(xyz));
    std::uint8_t rgb[3];
    std::memcpy(rgb, payload + i * 15 + 12, sizeof(rgb));
    for (int k = 0; k < 3; ++k) {
      CHECK(xyz[k] == static_cast<float>(cloud.points[i][k]));
      CHECK(rgb[k] == cloud.colors[i][k]);
    }
  }

  // determinism: rewrite is byte-identical
  const std::string path2 = (dir / "cloud2.ply").string();
  write_ply(path2, cloud);
  CHECK(read_text_file(path2) == bytes);
}

TEST_CASE("ply: empty cloud writes a header-only file") {
  const fs::path dir = temp_dir();
  const std::string path = (dir / "empty.ply").string();
  write_ply(path, PointCloud{});
  const std::string bytes = read_text_file(path);
  CHECK(bytes.find("element vertex 0") != std::string::npos);
  CHECK(bytes.substr(bytes.size() - 11) == "end_header\n");
}

TEST_CASE("json: rig round trips with exact doubles") {
  std::vector<CameraModel> rig;
  Rng rng(3);
  for (int i = 0; i < 4; ++i) {
    CameraModel cam;
    cam.name = "cam" + std::to_string(i);
    cam.width = 96;
    cam.height = 64;
    cam.fx = rng.uniform(50.0, 150.0);
    cam.fy = rng.uniform(50.0, 150.0);
    cam.cx = rng.uniform(40.0, 55.0);
    cam.cy = rng.uniform(25.0, 40.0);
    cam.extrinsics.rotation = euler_to_rotation(
        {rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-3.0, 3.0)});
    cam.extrinsics.translation = {rng.uniform(-2.0, 2.0),
                                  rng.uniform(-2.0, 2.0),
                                  rng.uniform(0.0, 2.0)};
    rig.push_back(cam);
  }

  const std::string text = rig_to_json(rig);
  const std::vector<CameraModel> back = rig_from_json(text);
  REQUIRE(back.size() == rig.size());
  for (std::size_t i = 0; i < rig.size(); ++i) {
    CHECK(back[i].name == rig[i].name);
    CHECK(back[i].width == rig[i].width);
    CHECK(back[i].height == rig[i].height);
    CHECK(back[i].fx == rig[i].fx);
    CHECK(back[i].fy == rig[i].fy);
    CHECK(back[i].cx == rig[i].cx);
    CHECK(back[i].cy == rig[i].cy);
    CHECK(back[i].extrinsics.rotation == rig[i].extrinsics.rotation);
    CHECK(back[i].extrinsics.translation == rig[i].extrinsics.translation);
  }

  // serialization itself is deterministic
  CHECK(rig_to_json(back) == text);
}

TEST_CASE("json: trajectory round trips and validates shape") {
  std::array<RigidTransform, 3> poses;
  for (int i = 0; i < 3; ++i) {
    poses[i].rotation = euler_to_rotation({0.0, 0.0, 0.1 * i});
    poses[i].translation = {0.5 * i, 0.0, 0.0};
  }
  const std::string text = trajectory_to_json(poses);
  const auto back = trajectory_from_json(text);
  for (int i = 0; i < 3; ++i) {
    CHECK(back[i].rotation == poses[i].rotation);
    CHECK(back[i].translation == poses[i].translation);
  }

  CHECK_THROWS_AS(trajectory_from_json("{\"poses\": []}"), DataError);
  CHECK_THROWS_AS(trajectory_from_json("not json"), DataError);
  CHECK_THROWS_AS(rig_from_json("{\"cameras\": []}"), DataError);
}
