// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#include "texcanon/image.hpp"

#include <cctype>
#include <fstream>
#include <limits>

namespace texcanon {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_header_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(char(c));
  }
  return tok;
}

std::size_t parse_header_number(std::istream& in, const std::string& path, const char* what) {
  std::string tok = next_header_token(in);
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw ImageError(ImageError::Code::BadMagic,
                     path + ": malformed PGM header (" + std::string(what) + ")");
  }
  return std::stoul(tok);
}

bool row_blank(const GrayImage& img, std::size_t row, std::uint8_t threshold) {
  for (std::size_t c = 0; c < img.width; ++c) {
    if (img.at(row, c) < threshold) return false;
  }
  return true;
}

bool col_blank(const GrayImage& img, std::size_t col, std::uint8_t threshold) {
  for (std::size_t r = 0; r < img.height; ++r) {
    if (img.at(r, col) < threshold) return false;
  }
  return true;
}

}  // namespace

GrayImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError(ImageError::Code::IoError, "cannot open image file: " + path);

  std::string magic = next_header_token(in);
  if (magic != "P2" && magic != "P5") {
    throw ImageError(ImageError::Code::BadMagic, path + ": not a PGM file (magic '" + magic + "')");
  }
  GrayImage img;
  img.width = parse_header_number(in, path, "width");
  img.height = parse_header_number(in, path, "height");
  std::size_t maxval = parse_header_number(in, path, "maxval");
  if (img.width == 0 || img.height == 0) {
    throw ImageError(ImageError::Code::BadMagic, path + ": zero image dimension");
  }
  if (maxval == 0 || maxval > 255) {
    throw ImageError(ImageError::Code::UnsupportedMaxval,
                     path + ": maxval " + std::to_string(maxval) + " unsupported (need 1..255)");
  }
  std::size_t count = img.width * img.height;
  img.pixels.reserve(count);

  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) {
      std::string tok = next_header_token(in);
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw ImageError(ImageError::Code::TruncatedPixelData,
                         path + ": pixel " + std::to_string(i) + " missing or malformed");
      }
      unsigned long v = std::stoul(tok);
      if (v > maxval) {
        throw ImageError(ImageError::Code::TruncatedPixelData,
                         path + ": pixel value " + tok + " exceeds maxval");
      }
      img.pixels.push_back(std::uint8_t(v));
    }
  } else {
    // One whitespace byte separates the header from binary data.
    img.pixels.resize(count);
    in.read(reinterpret_cast<char*>(img.pixels.data()), std::streamsize(count));
    if (std::size_t(in.gcount()) != count) {
      throw ImageError(ImageError::Code::TruncatedPixelData,
                       path + ": expected " + std::to_string(count) + " pixel bytes, got " +
                           std::to_string(in.gcount()));
    }
    for (std::uint8_t v : img.pixels) {
      if (v > maxval) {
        throw ImageError(ImageError::Code::TruncatedPixelData,
                         path + ": pixel value exceeds maxval");
      }
    }
  }
  return img;
}

void save_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageError(ImageError::Code::IoError, "cannot write image file: " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
  if (!out) throw ImageError(ImageError::Code::IoError, "short write: " + path);
}

bool is_blank(const GrayImage& img, std::uint8_t white_threshold) {
  for (std::uint8_t v : img.pixels) {
    if (v < white_threshold) return false;
  }
  return true;
}

std::vector<RowRange> ycut(const GrayImage& img, std::uint8_t white_threshold, std::size_t min_gap,
                           std::size_t min_segment) {
  // Maximal non-blank runs.
  std::vector<RowRange> runs;
  std::size_t r = 0;
  while (r < img.height) {
    if (row_blank(img, r, white_threshold)) {
      ++r;
      continue;
    }
    std::size_t start = r;
    while (r < img.height && !row_blank(img, r, white_threshold)) ++r;
    runs.push_back({start, r});
  }
  if (runs.empty()) return {};

  // Absorb blank gaps shorter than min_gap.
  std::vector<RowRange> segments;
  segments.push_back(runs[0]);
  for (std::size_t i = 1; i < runs.size(); ++i) {
    std::size_t gap = runs[i].begin - segments.back().end;
    if (gap < min_gap) {
      segments.back().end = runs[i].end;
    } else {
      segments.push_back(runs[i]);
    }
  }

  // Merge undersized segments into the nearer neighbor (tie: the earlier
  // one); a lone short segment stays.
  bool changed = true;
  while (changed && segments.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (segments[i].length() >= min_segment) continue;
      std::size_t target;
      if (i == 0) {
        target = 1;
      } else if (i + 1 == segments.size()) {
        target = i - 1;
      } else {
        std::size_t gap_prev = segments[i].begin - segments[i - 1].end;
        std::size_t gap_next = segments[i + 1].begin - segments[i].end;
        target = gap_prev <= gap_next ? i - 1 : i + 1;
      }
      std::size_t lo = std::min(i, target), hi = std::max(i, target);
      segments[lo].end = segments[hi].end;
      segments.erase(segments.begin() + std::ptrdiff_t(hi));
      changed = true;
      break;
    }
  }
  return segments;
}

GrayImage trim_border(const GrayImage& img, std::uint8_t white_threshold) {
  std::size_t top = 0;
  while (top < img.height && row_blank(img, top, white_threshold)) ++top;
  if (top == img.height) {
    throw ImageError(ImageError::Code::FullyBlank, "image has no pixel below the threshold");
  }
  std::size_t bottom = img.height;
  while (bottom > top && row_blank(img, bottom - 1, white_threshold)) --bottom;
  std::size_t left = 0;
  while (left < img.width && col_blank(img, left, white_threshold)) ++left;
  std::size_t right = img.width;
  while (right > left && col_blank(img, right - 1, white_threshold)) --right;

  GrayImage out;
  out.width = right - left;
  out.height = bottom - top;
  out.pixels.reserve(out.width * out.height);
  for (std::size_t r = top; r < bottom; ++r) {
    for (std::size_t c = left; c < right; ++c) {
      out.pixels.push_back(img.at(r, c));
    }
  }
  return out;
}

}  // namespace texcanon
