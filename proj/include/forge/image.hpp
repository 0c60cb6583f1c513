// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

class ImageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major float image, top row first, interleaved channels (1 or 3).
///
/// Used for HDR radiance, LDR tonemapped values and single-channel depth.
/// Depth maps may hold +inf for environment pixels; every other use keeps
/// values finite.
class Image {
public:
    Image() = default;
    Image(int width, int height, int channels, float fill = 0.0f);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
    bool empty() const { return data_.empty(); }

    float& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
    float at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }

    bool same_shape(const Image& o) const {
        return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

/// Per-pixel boolean mask, row-major, top row first.
class Mask {
public:
    Mask() = default;
    Mask(int width, int height, bool fill);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return bits_.size(); }

    bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
    bool all() const;
    std::size_t count() const;

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

// PFM: "PF" (3 channels) or "Pf" (1 channel), little-endian (scale -1.0).
// Scanlines are stored bottom-to-top on disk, per the format.
void write_pfm(const Image& img, const std::filesystem::path& path);
Image read_pfm(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_pfm(const Image& img);
Image decode_pfm(std::span<const std::uint8_t> bytes);

/// 8-bit grayscale PNG, 255 = true, 0 = false.
void write_mask_png(const Mask& mask, const std::filesystem::path& path);
Mask read_mask_png(const std::filesystem::path& path);

/// clamp(exposure * v, 0, 1)^(1/gamma) per component.
Image tonemap(const Image& hdr, double exposure, double gamma);

/// Every component clamped to [0, 1].
Image clamp01(const Image& img);

}  // namespace forge
