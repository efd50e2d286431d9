// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef TEXCANON_IMAGE_HPP
#define TEXCANON_IMAGE_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace texcanon {

class ImageError : public std::runtime_error {
 public:
  enum class Code { BadMagic, TruncatedPixelData, UnsupportedMaxval, FullyBlank, IoError };

  ImageError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// 8-bit grayscale raster, row-major, 0 = black, 255 = white.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
  std::uint8_t& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }

  bool operator==(const GrayImage&) const = default;
};

// Reads an ASCII (P2) or binary (P5) PGM file with maxval <= 255.
GrayImage load_pgm(const std::string& path);

// Writes binary (P5) PGM; load_pgm(save_pgm(img)) reproduces img exactly.
void save_pgm(const GrayImage& img, const std::string& path);

// True iff every pixel is >= white_threshold.
bool is_blank(const GrayImage& img, std::uint8_t white_threshold = 250);

// Half-open row interval [begin, end).
struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool operator==(const RowRange&) const = default;
};

// Projection-profile line segmentation. A row is blank iff all its pixels are
// >= white_threshold. Maximal blank runs of at least min_gap rows separate
// segments; shorter blank runs are absorbed. Segments shorter than
// min_segment merge into the nearer neighbor (tie: the earlier one). Returned
// ranges are disjoint, ordered, and cover every non-blank row; a blank image
// yields an empty list.
std::vector<RowRange> ycut(const GrayImage& img, std::uint8_t white_threshold = 250,
                           std::size_t min_gap = 20, std::size_t min_segment = 8);

// Crops away all-blank margin rows and columns; idempotent. Throws
// ImageError(FullyBlank) when no pixel is below the threshold.
GrayImage trim_border(const GrayImage& img, std::uint8_t white_threshold = 250);

}  // namespace texcanon

#endif  // TEXCANON_IMAGE_HPP
