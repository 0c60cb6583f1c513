// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "forge/image.hpp"
#include "forge/math.hpp"
#include "forge/rng.hpp"

namespace forge {

class SignalError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kEncodingFrequencies = 5;
inline constexpr int kEncodedChannels = 1 + 2 * kEncodingFrequencies;  // 11

/// H x W x 11 planar stack: channel 0 is disparity, then (sin, cos) of
/// 2^k * pi * d for k = 0..4.
class EncodedDisparity {
public:
    EncodedDisparity() = default;
    EncodedDisparity(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    static constexpr int channels() { return kEncodedChannels; }

    float& at(int x, int y, int c) { return planes_[c].at(x, y); }
    float at(int x, int y, int c) const { return planes_[c].at(x, y); }
    const Image& plane(int c) const { return planes_[c]; }

    /// Single-channel image of height 11*H with plane k in rows [k*H, (k+1)*H).
    Image stacked() const;
    static EncodedDisparity from_stacked(const Image& stacked);

    friend bool operator==(const EncodedDisparity&, const EncodedDisparity&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::array<Image, kEncodedChannels> planes_;
};

/// d = min(1 / (4 * depth), 1); +inf maps to 0. Throws on depth <= 0 or NaN.
Image depth_to_disparity(const Image& depth);

/// Per-pixel frequency encoding. Throws if any value is outside [0, 1].
EncodedDisparity frequency_encode(const Image& disparity);
std::array<float, kEncodedChannels> frequency_encode(double d);

/// Mean over every pixel and channel of |m*pred - m*gt|.
double masked_l1(const Image& pred, const Image& gt, const Mask& mask);

/// 10 log10(1 / MSE), capped at 99 dB.
double psnr(const Image& a, const Image& b);
inline constexpr double kPsnrCap = 99.0;

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct AugmentConfig {
    Range exposure{3.0, 10.0};
    Range gamma{2.2, 5.0};
    Range disparity_scale{0.5, 2.0};  // f, drawn log-uniformly
    int crop = 384;

    /// Throws SignalError on a broken invariant.
    void validate() const;
};

/// Images and metadata of one rendered example.
struct ExampleData {
    Image input_hdr;
    Image reshaded_hdr;
    Image depth;
    Mask validity;
    Vec3 novel_offset;
};

struct TrainSample {
    Image input_ldr;
    EncodedDisparity encoded_disparity;
    Vec3 camera_vec;
    Image target_ldr;
    Mask mask;
    // Drawn parameters, kept for inspection.
    int crop_x = 0;
    int crop_y = 0;
    double exposure = 1.0;
    double gamma = 1.0;
    double scale = 1.0;
};

/// One random crop, one (exposure, gamma) applied to input and target, and
/// one disparity/camera scale f (disparity * f re-clamped, offset / f).
TrainSample augment_pair(const ExampleData& example, Rng& rng, const AugmentConfig& cfg);

}  // namespace forge
