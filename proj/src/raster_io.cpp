#include "articugeo/raster_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace articugeo {
namespace {

constexpr std::uint32_t kMaxDim = 1u << 16;

class Writer {
 public:
  explicit Writer(const char* magic) { buf_.append(magic, 4); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void f32(double v) {
    const float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    u32(bits);
  }
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path);
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    require(static_cast<bool>(out), ErrorCode::kIo, "short write to " + path);
  }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(const std::string& path, const char* magic) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
    buf_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    if (buf_.size() < 4 || std::memcmp(buf_.data(), magic, 4) != 0) {
      throw Error(ErrorCode::kParse, path + ": expected magic '" + std::string(magic, 4) + "'");
    }
    pos_ = 4;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f32() {
    const std::uint32_t bits = u32();
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf_[pos_++]);
  }
  std::uint32_t dim(const char* what) {
    const std::uint32_t v = u32();
    if (v == 0 || v > kMaxDim) throw Error(ErrorCode::kParse, path_ + ": implausible " + what);
    return v;
  }
  void finish() const {
    if (pos_ != buf_.size()) throw Error(ErrorCode::kParse, path_ + ": trailing bytes after payload");
  }
  const std::string& path() const { return path_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) throw Error(ErrorCode::kParse, path_ + ": truncated file");
  }
  std::string path_;
  std::string buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_depth(const std::string& path, const DepthMap& depth) {
  Writer w("DPTF");
  w.u32(static_cast<std::uint32_t>(depth.width()));
  w.u32(static_cast<std::uint32_t>(depth.height()));
  for (double v : depth.data()) w.f32(v);
  w.save(path);
}

DepthMap read_depth(const std::string& path) {
  Reader r(path, "DPTF");
  const int w = static_cast<int>(r.dim("width"));
  const int h = static_cast<int>(r.dim("height"));
  DepthMap out(w, h);
  for (auto& v : out.data()) {
    v = r.f32();
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::kParse, path + ": depth must be finite and >= 0");
  }
  r.finish();
  return out;
}

void write_image(const std::string& path, const ImageBuffer& image) {
  Writer w("IMGF");
  w.u32(static_cast<std::uint32_t>(image.width()));
  w.u32(static_cast<std::uint32_t>(image.height()));
  w.u32(static_cast<std::uint32_t>(image.channels()));
  for (double v : image.data()) w.f32(v);
  w.save(path);
}

ImageBuffer read_image(const std::string& path) {
  Reader r(path, "IMGF");
  const int w = static_cast<int>(r.dim("width"));
  const int h = static_cast<int>(r.dim("height"));
  const std::uint32_t c = r.u32();
  if (c != 1 && c != 3) throw Error(ErrorCode::kParse, path + ": channels must be 1 or 3");
  ImageBuffer out(w, h, static_cast<int>(c));
  for (auto& v : out.data()) {
    v = r.f32();
    if (!std::isfinite(v)) throw Error(ErrorCode::kParse, path + ": non-finite intensity");
  }
  r.finish();
  return out;
}

void write_mask(const std::string& path, const PixelMask& mask) {
  Writer w("MSK1");
  w.u32(static_cast<std::uint32_t>(mask.width()));
  w.u32(static_cast<std::uint32_t>(mask.height()));
  for (auto v : mask.data()) w.u8(v ? 1 : 0);
  w.save(path);
}

PixelMask read_mask(const std::string& path) {
  Reader r(path, "MSK1");
  const int w = static_cast<int>(r.dim("width"));
  const int h = static_cast<int>(r.dim("height"));
  PixelMask out(w, h);
  for (auto& v : out.data()) {
    v = r.u8();
    if (v > 1) throw Error(ErrorCode::kParse, path + ": mask bytes must be 0 or 1");
  }
  r.finish();
  return out;
}

void write_normals(const std::string& path, const NormalMap& normals) {
  Writer w("NRMF");
  w.u32(static_cast<std::uint32_t>(normals.width()));
  w.u32(static_cast<std::uint32_t>(normals.height()));
  for (const auto& n : normals.normals.data()) {
    w.f32(n.x());
    w.f32(n.y());
    w.f32(n.z());
  }
  w.save(path);
}

NormalMap read_normals(const std::string& path, const PixelMask& valid, NormalOrientation orientation) {
  Reader r(path, "NRMF");
  const int w = static_cast<int>(r.dim("width"));
  const int h = static_cast<int>(r.dim("height"));
  NormalMap out(w, h, orientation);
  for (auto& n : out.normals.data()) {
    const double x = r.f32();
    const double y = r.f32();
    const double z = r.f32();
    n = Point3(x, y, z);
    if (!n.allFinite()) throw Error(ErrorCode::kParse, path + ": non-finite normal");
  }
  r.finish();
  if (valid.empty()) {
    out.valid = PixelMask(w, h, 1);
  } else {
    require(valid.same_shape(out.normals), ErrorCode::kDimensionMismatch, path + ": validity mask size differs");
    out.valid = valid;
  }
  return out;
}

}  // namespace articugeo
