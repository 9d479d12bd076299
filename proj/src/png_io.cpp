#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "dnorm/io.hpp"

namespace dnorm {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::uint8_t to_byte(double c) {
  const double x = std::floor(255.0 * (c + 1.0) / 2.0 + 0.5);
  return static_cast<std::uint8_t>(std::clamp(x, 0.0, 255.0));
}

void write_rgb(const std::filesystem::path& path, const RgbImage& img) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw IoError("cannot open '" + path.string() + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng: failed writing '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int v = 0; v < img.height; ++v) {
    png_write_row(png, img.pixels.data() + static_cast<std::size_t>(v) * img.width * 3);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

std::array<std::uint8_t, 3> normal_to_rgb(const Vec3& n) { return {to_byte(n.x), to_byte(n.y), to_byte(n.z)}; }

void write_normal_png(const std::filesystem::path& path, const NormalMap& normals) {
  RgbImage img{normals.width(), normals.height(), std::vector<std::uint8_t>(normals.size() * 3, 0)};
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (!normals.valid_at(i)) continue;
    const auto rgb = normal_to_rgb(normals.values()[i]);
    std::copy(rgb.begin(), rgb.end(), img.pixels.begin() + static_cast<std::ptrdiff_t>(3 * i));
  }
  write_rgb(path, img);
}

void write_scalar_png(const std::filesystem::path& path, const ScalarField& field, double max_value) {
  RgbImage img{field.width(), field.height(), std::vector<std::uint8_t>(field.size() * 3, 0)};
  const double scale = max_value > 0.0 ? 255.0 / max_value : 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!field.valid_at(i)) continue;
    const auto g = static_cast<std::uint8_t>(std::clamp(std::floor(field.values()[i] * scale + 0.5), 0.0, 255.0));
    img.pixels[3 * i] = img.pixels[3 * i + 1] = img.pixels[3 * i + 2] = g;
  }
  write_rgb(path, img);
}

RgbImage read_png_rgb(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw IoError("cannot read PNG '" + path.string() + "': " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  RgbImage out{static_cast<int>(image.width), static_cast<int>(image.height),
               std::vector<std::uint8_t>(PNG_IMAGE_SIZE(image))};
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG '" + path.string() + "': " + msg);
  }
  return out;
}

}  // namespace dnorm
