#include "core/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include <png.h>

#include "core/error.hpp"

namespace gsc {

namespace {

std::uint8_t quantize8(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

struct FileCloser {
  std::FILE* f = nullptr;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

void write_png_impl(const std::string& path, const std::vector<std::uint8_t>& bytes, int width,
                    int height, int color_type, int channels) {
  FileCloser fc;
  fc.f = std::fopen(path.c_str(), "wb");
  if (!fc.f) fail(ErrorCode::Io, "png: cannot open '" + path + "' for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(ErrorCode::Io, "png: writer allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(ErrorCode::Io, "png: info allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::Io, "png: write failed for '" + path + "'");
  }
  png_init_io(png, fc.f);
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(y) * width * channels);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png_rgb(const std::string& path, const std::vector<double>& rgb, int width,
                   int height) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3) {
    fail(ErrorCode::InvalidArgument, "png: rgb buffer size mismatch");
  }
  std::vector<std::uint8_t> bytes(rgb.size());
  for (std::size_t i = 0; i < rgb.size(); ++i) bytes[i] = quantize8(rgb[i]);
  write_png_impl(path, bytes, width, height, PNG_COLOR_TYPE_RGB, 3);
}

void write_png_gray(const std::string& path, const std::vector<double>& gray, int width,
                    int height) {
  if (gray.size() != static_cast<std::size_t>(width) * height) {
    fail(ErrorCode::InvalidArgument, "png: gray buffer size mismatch");
  }
  std::vector<std::uint8_t> bytes(gray.size());
  for (std::size_t i = 0; i < gray.size(); ++i) bytes[i] = quantize8(gray[i]);
  write_png_impl(path, bytes, width, height, PNG_COLOR_TYPE_GRAY, 1);
}

void write_png_mask(const std::string& path, const std::vector<std::uint8_t>& mask, int width,
                    int height) {
  if (mask.size() != static_cast<std::size_t>(width) * height) {
    fail(ErrorCode::InvalidArgument, "png: mask buffer size mismatch");
  }
  std::vector<std::uint8_t> bytes(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) bytes[i] = mask[i] ? 255 : 0;
  write_png_impl(path, bytes, width, height, PNG_COLOR_TYPE_GRAY, 1);
}

std::vector<double> read_png_rgb(const std::string& path, int* width, int* height) {
  FileCloser fc;
  fc.f = std::fopen(path.c_str(), "rb");
  if (!fc.f) fail(ErrorCode::Io, "png: cannot open '" + path + "'");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(ErrorCode::Io, "png: reader allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(ErrorCode::Io, "png: info allocation failed");
  }
  std::vector<std::uint8_t> bytes;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::Parse, "png: failed to decode '" + path + "'");
  }
  png_init_io(png, fc.f);
  png_read_info(png, info);

  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
      png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  if (rowbytes != static_cast<std::size_t>(w) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::Parse, "png: unexpected row layout in '" + path + "'");
  }
  bytes.resize(static_cast<std::size_t>(h) * rowbytes);
  rows.resize(h);
  for (int y = 0; y < h; ++y) rows[y] = bytes.data() + static_cast<std::size_t>(y) * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> rgb(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) rgb[i] = bytes[i] / 255.0;
  *width = w;
  *height = h;
  return rgb;
}

void write_pfm(const std::string& path, const std::vector<double>& gray, int width, int height) {
  if (gray.size() != static_cast<std::size_t>(width) * height) {
    fail(ErrorCode::InvalidArgument, "pfm: buffer size mismatch");
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail(ErrorCode::Io, "pfm: cannot open '" + path + "' for writing");
  std::fprintf(f, "Pf\n%d %d\n-1.0\n", width, height);
  std::vector<float> row(width);
  for (int y = height - 1; y >= 0; --y) {
    for (int x = 0; x < width; ++x) {
      const double v = gray[static_cast<std::size_t>(y) * width + x];
      row[x] = std::isfinite(v) ? static_cast<float>(v) : 0.0f;
    }
    std::fwrite(row.data(), sizeof(float), row.size(), f);
  }
  std::fclose(f);
}

std::vector<double> gaussian_blur_rgb(const std::vector<double>& rgb, int width, int height,
                                      double sigma_px) {
  if (sigma_px <= 0.0) return rgb;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_px)));
  std::vector<double> kernel(2 * radius + 1);
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * (k * k) / (sigma_px * sigma_px));
  }

  auto pass = [&](const std::vector<double>& src, bool horizontal) {
    std::vector<double> dst(src.size());
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        for (int c = 0; c < 3; ++c) {
          double acc = 0.0, wsum = 0.0;
          for (int k = -radius; k <= radius; ++k) {
            const int xx = horizontal ? x + k : x;
            const int yy = horizontal ? y : y + k;
            if (xx < 0 || xx >= width || yy < 0 || yy >= height) continue;
            const double w = kernel[k + radius];
            acc += w * src[(static_cast<std::size_t>(yy) * width + xx) * 3 + c];
            wsum += w;
          }
          dst[(static_cast<std::size_t>(y) * width + x) * 3 + c] = acc / wsum;
        }
      }
    }
    return dst;
  };
  return pass(pass(rgb, true), false);
}

}  // namespace gsc
