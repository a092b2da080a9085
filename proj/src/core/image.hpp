#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gsc {

// Planar rgb images are stored as 3*W*H doubles in [0, 1], indexed
// (y * width + x) * 3 + channel. Gray buffers are W*H doubles.

void write_png_rgb(const std::string& path, const std::vector<double>& rgb, int width,
                   int height);
void write_png_gray(const std::string& path, const std::vector<double>& gray, int width,
                    int height);
void write_png_mask(const std::string& path, const std::vector<std::uint8_t>& mask, int width,
                    int height);

// Reads an 8/16-bit PNG of any color type into an rgb buffer in [0, 1].
std::vector<double> read_png_rgb(const std::string& path, int* width, int* height);

// Grayscale PFM ("Pf"), float32 little-endian, bottom-up rows. Non-finite
// values are written as 0.
void write_pfm(const std::string& path, const std::vector<double>& gray, int width, int height);

std::vector<double> gaussian_blur_rgb(const std::vector<double>& rgb, int width, int height,
                                      double sigma_px);

}  // namespace gsc
