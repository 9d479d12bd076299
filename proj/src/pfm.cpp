#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "dnorm/io.hpp"

namespace dnorm {
namespace {

struct PfmData {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<float> samples;  // top row first, interleaved channels
};

std::uint32_t byteswap32(std::uint32_t x) {
  return (x >> 24) | ((x >> 8) & 0xFF00u) | ((x << 8) & 0xFF0000u) | (x << 24);
}

float to_little(float f) {
  if constexpr (std::endian::native == std::endian::little) return f;
  return std::bit_cast<float>(byteswap32(std::bit_cast<std::uint32_t>(f)));
}

void write_pfm_data(const std::filesystem::path& path, const PfmData& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << (d.channels == 3 ? "PF" : "Pf") << '\n' << d.width << ' ' << d.height << '\n' << "-1.0" << '\n';
  const std::size_t row = static_cast<std::size_t>(d.width) * static_cast<std::size_t>(d.channels);
  std::vector<float> buf(row);
  for (int v = d.height - 1; v >= 0; --v) {
    const float* src = d.samples.data() + static_cast<std::size_t>(v) * row;
    for (std::size_t i = 0; i < row; ++i) buf[i] = to_little(src[i]);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(row * sizeof(float)));
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

PfmData read_pfm_data(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::string name = path.string();
  std::string magic;
  PfmData d;
  double scale = 0.0;
  if (!(in >> magic) || (magic != "Pf" && magic != "PF")) throw IoError(name + ": not a PFM file");
  d.channels = magic == "PF" ? 3 : 1;
  if (!(in >> d.width >> d.height) || d.width <= 0 || d.height <= 0) throw IoError(name + ": bad PFM dimensions");
  if (!(in >> scale) || scale == 0.0 || !std::isfinite(scale)) throw IoError(name + ": bad PFM scale");
  if (!std::isspace(in.get())) throw IoError(name + ": malformed PFM header");

  const bool little = scale < 0.0;
  const std::size_t row = static_cast<std::size_t>(d.width) * static_cast<std::size_t>(d.channels);
  d.samples.resize(row * static_cast<std::size_t>(d.height));
  std::vector<std::uint32_t> buf(row);
  for (int v = d.height - 1; v >= 0; --v) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(row * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(row * sizeof(float))) throw IoError(name + ": truncated PFM payload");
    float* dst = d.samples.data() + static_cast<std::size_t>(v) * row;
    const bool swap = little != (std::endian::native == std::endian::little);
    for (std::size_t i = 0; i < row; ++i) dst[i] = std::bit_cast<float>(swap ? byteswap32(buf[i]) : buf[i]);
  }
  return d;
}

constexpr float kInvalid = std::numeric_limits<float>::quiet_NaN();

}  // namespace

void write_pfm(const std::filesystem::path& path, const ScalarField& field) {
  PfmData d{field.width(), field.height(), 1, std::vector<float>(field.size())};
  for (std::size_t i = 0; i < field.size(); ++i) {
    d.samples[i] = field.valid_at(i) ? static_cast<float>(field.values()[i]) : kInvalid;
  }
  write_pfm_data(path, d);
}

void write_pfm(const std::filesystem::path& path, const DepthImage& depth) { write_pfm(path, depth.field()); }

void write_pfm3(const std::filesystem::path& path, const NormalMap& normals) {
  PfmData d{normals.width(), normals.height(), 3, std::vector<float>(normals.size() * 3)};
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const Vec3& n = normals.values()[i];
    const bool ok = normals.valid_at(i);
    d.samples[3 * i] = ok ? static_cast<float>(n.x) : kInvalid;
    d.samples[3 * i + 1] = ok ? static_cast<float>(n.y) : kInvalid;
    d.samples[3 * i + 2] = ok ? static_cast<float>(n.z) : kInvalid;
  }
  write_pfm_data(path, d);
}

ScalarField read_pfm(const std::filesystem::path& path) {
  const PfmData d = read_pfm_data(path);
  if (d.channels != 1) throw IoError(path.string() + ": expected a single-channel PFM");
  ScalarField f(d.width, d.height);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::isfinite(d.samples[i])) f.set_at(i, d.samples[i]);
  }
  return f;
}

NormalMap read_pfm3(const std::filesystem::path& path) {
  const PfmData d = read_pfm_data(path);
  if (d.channels != 3) throw IoError(path.string() + ": expected a three-channel PFM");
  NormalMap n(d.width, d.height);
  for (std::size_t i = 0; i < n.size(); ++i) {
    const float x = d.samples[3 * i], y = d.samples[3 * i + 1], z = d.samples[3 * i + 2];
    if (std::isfinite(x) && std::isfinite(y) && std::isfinite(z)) n.set_at(i, Vec3{x, y, z});
  }
  return n;
}

DepthImage read_depth_pfm(const std::filesystem::path& path) {
  const ScalarField f = read_pfm(path);
  std::vector<double> z(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!f.valid_at(i)) z[i] = std::numeric_limits<double>::quiet_NaN();
  }
  return DepthImage::from_values(f.width(), f.height(), z);
}

}  // namespace dnorm
