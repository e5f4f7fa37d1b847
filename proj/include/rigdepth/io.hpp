#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rigdepth/geometry.hpp"
#include "rigdepth/image.hpp"

namespace rigdepth {

// ---------------------------------------------------------------------------
// PNG (8-bit grayscale or RGB).  Writes use fixed encoder settings so that
// identical inputs produce identical bytes.
// ---------------------------------------------------------------------------
void write_png(const std::string& path, const ImagePlane& img);
ImagePlane read_png(const std::string& path);

// masks as 0/255 grayscale PNG
void write_mask_png(const std::string& path, const BinaryMask& mask);
BinaryMask read_mask_png(const std::string& path);

// ---------------------------------------------------------------------------
// PFM (portable float map, float32, little-endian via negative scale,
// rows stored bottom-up).  1-channel "Pf" and 3-channel "PF" variants.
// ---------------------------------------------------------------------------
void write_pfm(const std::string& path, const std::vector<float>& values,
               int width, int height, int channels);
std::vector<float> read_pfm(const std::string& path, int* width, int* height,
                            int* channels);

// Depth maps are exchanged as linear metres in 1-channel PFM.
void write_depth_pfm(const std::string& path, const DepthField& depth);
DepthField read_depth_pfm(const std::string& path);

// Ground-truth depth maps additionally carry a validity mask: pixels without
// ground truth are stored as 0 (the conventional "no measurement" marker).
// Reading maps invalid pixels to depth 1 and a cleared mask bit.
void write_gt_depth_pfm(const std::string& path, const DepthField& depth,
                        const BinaryMask& valid);
void read_gt_depth_pfm(const std::string& path, DepthField* depth,
                       BinaryMask* valid);

// ---------------------------------------------------------------------------
// PLY point clouds (binary little-endian, float32 xyz + uint8 rgb)
// ---------------------------------------------------------------------------
struct PointCloud {
  std::vector<std::array<double, 3>> points;
  std::vector<std::array<std::uint8_t, 3>> colors;  // same length as points
};

void write_ply(const std::string& path, const PointCloud& cloud);

// ---------------------------------------------------------------------------
// JSON serialization of rigs and three-frame trajectories
// ---------------------------------------------------------------------------
std::string rig_to_json(const std::vector<CameraModel>& rig);
std::vector<CameraModel> rig_from_json(const std::string& text);

// rig-to-world poses at the previous, current, and next frame
std::string trajectory_to_json(const std::array<RigidTransform, 3>& poses);
std::array<RigidTransform, 3> trajectory_from_json(const std::string& text);

// small file helpers (throw DataError on failure)
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rigdepth
