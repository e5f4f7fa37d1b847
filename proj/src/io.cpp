#include "rigdepth/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rigdepth/errors.hpp"

namespace rigdepth {

namespace {

using json = nlohmann::json;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw DataError("cannot open file: " + path);
  return f;
}

std::uint8_t quantize8(double v) {
  const double scaled = std::lround(std::min(1.0, std::max(0.0, v)) * 255.0);
  return static_cast<std::uint8_t>(scaled);
}

}  // namespace

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

void write_png(const std::string& path, const ImagePlane& img) {
  if (img.width <= 0 || img.height <= 0 ||
      (img.channels != 1 && img.channels != 3)) {
    throw DataError("write_png: image must be non-empty with 1 or 3 channels");
  }
  FilePtr file = open_file(path, "wb");

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError("write_png: png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw DataError("write_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("write_png: encode failed for " + path);
  }

  png_init_io(png, file.get());
  // fixed settings keep output bytes reproducible
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_NONE);
  const int color_type =
      img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(png, info, img.width, img.height, 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<std::uint8_t> row(
      static_cast<std::size_t>(img.width) * img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        row[static_cast<std::size_t>(x) * img.channels + c] =
            quantize8(img.at(x, y, c));
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

ImagePlane read_png(const std::string& path) {
  FilePtr file = open_file(path, "rb");

  std::uint8_t header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 ||
      png_sig_cmp(header, 0, 8) != 0) {
    throw DataError("read_png: not a PNG file: " + path);
  }

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError("read_png: png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DataError("read_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("read_png: decode failed for " + path);
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  // normalize to 8-bit gray or RGB
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int channels = static_cast<int>(png_get_channels(png, info));
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("read_png: unsupported channel count in " + path);
  }

  ImagePlane img = ImagePlane::zeros(width, height, channels);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * channels);
  for (int y = 0; y < height; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        img.at(x, y, c) =
            row[static_cast<std::size_t>(x) * channels + c] / 255.0;
      }
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_mask_png(const std::string& path, const BinaryMask& mask) {
  ImagePlane img = ImagePlane::zeros(mask.width, mask.height, 1);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      img.at(x, y, 0) = mask.at(x, y) ? 1.0 : 0.0;
    }
  }
  write_png(path, img);
}

BinaryMask read_mask_png(const std::string& path) {
  const ImagePlane img = read_png(path);
  if (img.channels != 1) {
    throw DataError("read_mask_png: expected grayscale mask: " + path);
  }
  BinaryMask mask = BinaryMask::zeros(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      mask.set(x, y, img.at(x, y, 0) >= 0.5);
    }
  }
  return mask;
}

// ---------------------------------------------------------------------------
// PFM
// ---------------------------------------------------------------------------

void write_pfm(const std::string& path, const std::vector<float>& values,
               int width, int height, int channels) {
  if (channels != 1 && channels != 3) {
    throw DataError("write_pfm: channels must be 1 or 3");
  }
  if (values.size() !=
      static_cast<std::size_t>(width) * height * channels) {
    throw DataError("write_pfm: value count does not match dimensions");
  }
  FilePtr file = open_file(path, "wb");
  std::ostringstream header;
  header << (channels == 3 ? "PF" : "Pf") << "\n"
         << width << " " << height << "\n"
         << "-1.0\n";  // negative scale marks little-endian payload
  const std::string h = header.str();
  if (std::fwrite(h.data(), 1, h.size(), file.get()) != h.size()) {
    throw DataError("write_pfm: header write failed: " + path);
  }
  // rows are stored bottom-up
  const std::size_t row_elems = static_cast<std::size_t>(width) * channels;
  for (int y = height - 1; y >= 0; --y) {
    const float* row = values.data() + static_cast<std::size_t>(y) * row_elems;
    if (std::fwrite(row, sizeof(float), row_elems, file.get()) != row_elems) {
      throw DataError("write_pfm: payload write failed: " + path);
    }
  }
}

std::vector<float> read_pfm(const std::string& path, int* width, int* height,
                            int* channels) {
  FilePtr file = open_file(path, "rb");

  auto read_token = [&]() {
    std::string tok;
    int ch = 0;
    while ((ch = std::fgetc(file.get())) != EOF &&
           (ch == ' ' || ch == '\n' || ch == '\r' || ch == '\t')) {
    }
    while (ch != EOF && ch != ' ' && ch != '\n' && ch != '\r' && ch != '\t') {
      tok.push_back(static_cast<char>(ch));
      ch = std::fgetc(file.get());
    }
    if (tok.empty()) throw DataError("read_pfm: truncated header: " + path);
    return tok;
  };

  const std::string magic = read_token();
  int chans = 0;
  if (magic == "Pf") {
    chans = 1;
  } else if (magic == "PF") {
    chans = 3;
  } else {
    throw DataError("read_pfm: bad magic in " + path);
  }
  int w = 0, h = 0;
  double scale = 0.0;
  try {
    w = std::stoi(read_token());
    h = std::stoi(read_token());
    scale = std::stod(read_token());
  } catch (const std::exception&) {
    throw DataError("read_pfm: malformed header in " + path);
  }
  if (w <= 0 || h <= 0 || scale >= 0.0) {
    throw DataError("read_pfm: unsupported header in " + path +
                    " (need positive dims, little-endian scale)");
  }

  const std::size_t row_elems = static_cast<std::size_t>(w) * chans;
  std::vector<float> values(row_elems * h);
  for (int y = h - 1; y >= 0; --y) {
    float* row = values.data() + static_cast<std::size_t>(y) * row_elems;
    if (std::fread(row, sizeof(float), row_elems, file.get()) != row_elems) {
      throw DataError("read_pfm: truncated payload in " + path);
    }
  }
  if (width) *width = w;
  if (height) *height = h;
  if (channels) *channels = chans;
  return values;
}

void write_depth_pfm(const std::string& path, const DepthField& depth) {
  std::vector<float> linear(depth.pixel_count());
  for (std::size_t i = 0; i < linear.size(); ++i) {
    linear[i] = static_cast<float>(std::exp(depth.log_depth[i]));
  }
  write_pfm(path, linear, depth.width, depth.height, 1);
}

DepthField read_depth_pfm(const std::string& path) {
  int w = 0, h = 0, c = 0;
  const std::vector<float> linear = read_pfm(path, &w, &h, &c);
  if (c != 1) throw DataError("read_depth_pfm: expected 1 channel: " + path);
  DepthField depth;
  depth.width = w;
  depth.height = h;
  depth.log_depth.resize(linear.size());
  for (std::size_t i = 0; i < linear.size(); ++i) {
    const double d = static_cast<double>(linear[i]);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw DataError("read_depth_pfm: non-positive depth value in " + path);
    }
    depth.log_depth[i] = std::log(d);
  }
  return depth;
}

// ---------------------------------------------------------------------------
// PLY
// ---------------------------------------------------------------------------

void write_ply(const std::string& path, const PointCloud& cloud) {
  if (cloud.points.size() != cloud.colors.size()) {
    throw DataError("write_ply: points/colors size mismatch");
  }
  FilePtr file = open_file(path, "wb");
  std::ostringstream header;
  header << "ply\n"
         << "format binary_little_endian 1.0\n"
         << "element vertex " << cloud.points.size() << "\n"
         << "property float x\n"
         << "property float y\n"
         << "property float z\n"
         << "property uchar red\n"
         << "property uchar green\n"
         << "property uchar blue\n"
         << "end_header\n";
  const std::string h = header.str();
  if (std::fwrite(h.data(), 1, h.size(), file.get()) != h.size()) {
    throw DataError("write_ply: header write failed: " + path);
  }
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const float xyz[3] = {static_cast<float>(cloud.points[i][0]),
                          static_cast<float>(cloud.points[i][1]),
                          static_cast<float>(cloud.points[i][2])};
    if (std::fwrite(xyz, sizeof(float), 3, file.get()) != 3 ||
        std::fwrite(cloud.colors[i].data(), 1, 3, file.get()) != 3) {
      throw DataError("write_ply: payload write failed: " + path);
    }
  }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

json transform_to_json(const RigidTransform& x) {
  json rot = json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rot.push_back(x.rotation(i, j));
  json tr = json::array();
  for (int i = 0; i < 3; ++i) tr.push_back(x.translation(i));
  return json{{"rotation", rot}, {"translation", tr}};
}

RigidTransform transform_from_json(const json& j) {
  RigidTransform x;
  const auto& rot = j.at("rotation");
  const auto& tr = j.at("translation");
  if (rot.size() != 9 || tr.size() != 3) {
    throw DataError("transform_from_json: bad rotation/translation shape");
  }
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      x.rotation(i, k) = rot.at(3 * i + k).get<double>();
  for (int i = 0; i < 3; ++i) x.translation(i) = tr.at(i).get<double>();
  return x;
}

}  // namespace

std::string rig_to_json(const std::vector<CameraModel>& rig) {
  json cams = json::array();
  for (const CameraModel& cam : rig) {
    json c = transform_to_json(cam.extrinsics);
    c["name"] = cam.name;
    c["width"] = cam.width;
    c["height"] = cam.height;
    c["fx"] = cam.fx;
    c["fy"] = cam.fy;
    c["cx"] = cam.cx;
    c["cy"] = cam.cy;
    cams.push_back(std::move(c));
  }
  return json{{"cameras", std::move(cams)}}.dump(2) + "\n";
}

std::vector<CameraModel> rig_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("rig_from_json: parse error: ") + e.what());
  }
  std::vector<CameraModel> rig;
  try {
    for (const auto& c : j.at("cameras")) {
      CameraModel cam;
      cam.name = c.at("name").get<std::string>();
      cam.width = c.at("width").get<int>();
      cam.height = c.at("height").get<int>();
      cam.fx = c.at("fx").get<double>();
      cam.fy = c.at("fy").get<double>();
      cam.cx = c.at("cx").get<double>();
      cam.cy = c.at("cy").get<double>();
      cam.extrinsics = transform_from_json(c);
      if (cam.width <= 0 || cam.height <= 0 || cam.fx <= 0 || cam.fy <= 0) {
        throw DataError("rig_from_json: invalid camera dimensions/focals");
      }
      rig.push_back(std::move(cam));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("rig_from_json: schema error: ") + e.what());
  }
  if (rig.empty()) throw DataError("rig_from_json: no cameras");
  return rig;
}

std::string trajectory_to_json(const std::array<RigidTransform, 3>& poses) {
  json arr = json::array();
  for (const RigidTransform& p : poses) arr.push_back(transform_to_json(p));
  return json{{"poses", std::move(arr)}}.dump(2) + "\n";
}

std::array<RigidTransform, 3> trajectory_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("trajectory_from_json: parse error: ") +
                    e.what());
  }
  std::array<RigidTransform, 3> poses;
  try {
    const auto& arr = j.at("poses");
    if (arr.size() != 3) {
      throw DataError("trajectory_from_json: expected exactly 3 poses");
    }
    for (int i = 0; i < 3; ++i) poses[i] = transform_from_json(arr.at(i));
  } catch (const json::exception& e) {
    throw DataError(std::string("trajectory_from_json: schema error: ") +
                    e.what());
  }
  return poses;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace rigdepth
