// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/signal.hpp"

#include <cmath>
#include <string>

namespace forge {

EncodedDisparity::EncodedDisparity(int width, int height) : width_(width), height_(height) {
    for (auto& p : planes_) p = Image(width, height, 1);
}

Image EncodedDisparity::stacked() const {
    Image out(width_, height_ * kEncodedChannels, 1);
    for (int c = 0; c < kEncodedChannels; ++c) {
        for (int y = 0; y < height_; ++y) {
            for (int x = 0; x < width_; ++x) out.at(x, c * height_ + y) = planes_[c].at(x, y);
        }
    }
    return out;
}

EncodedDisparity EncodedDisparity::from_stacked(const Image& stacked) {
    if (stacked.channels() != 1 || stacked.height() % kEncodedChannels != 0) {
        throw SignalError("stacked encoding must be single-channel with height divisible by 11");
    }
    const int h = stacked.height() / kEncodedChannels;
    EncodedDisparity out(stacked.width(), h);
    for (int c = 0; c < kEncodedChannels; ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < stacked.width(); ++x) out.at(x, y, c) = stacked.at(x, c * h + y);
        }
    }
    return out;
}

Image depth_to_disparity(const Image& depth) {
    if (depth.channels() != 1) throw SignalError("depth map must have one channel");
    Image out(depth.width(), depth.height(), 1);
    const auto src = depth.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double z = src[i];
        if (!(z > 0.0)) throw SignalError("depth must be positive, got " + std::to_string(z));
        dst[i] = static_cast<float>(std::min(1.0 / (4.0 * z), 1.0));
    }
    return out;
}

std::array<float, kEncodedChannels> frequency_encode(double d) {
    if (!(d >= 0.0 && d <= 1.0)) throw SignalError("disparity outside [0, 1]: " + std::to_string(d));
    std::array<float, kEncodedChannels> out{};
    out[0] = static_cast<float>(d);
    double freq = kPi;
    for (int k = 0; k < kEncodingFrequencies; ++k, freq *= 2.0) {
        out[1 + 2 * k] = static_cast<float>(std::sin(freq * d));
        out[2 + 2 * k] = static_cast<float>(std::cos(freq * d));
    }
    return out;
}

EncodedDisparity frequency_encode(const Image& disparity) {
    if (disparity.channels() != 1) throw SignalError("disparity must have one channel");
    EncodedDisparity out(disparity.width(), disparity.height());
    for (int y = 0; y < disparity.height(); ++y) {
        for (int x = 0; x < disparity.width(); ++x) {
            const auto enc = frequency_encode(static_cast<double>(disparity.at(x, y)));
            for (int c = 0; c < kEncodedChannels; ++c) out.at(x, y, c) = enc[c];
        }
    }
    return out;
}

double masked_l1(const Image& pred, const Image& gt, const Mask& mask) {
    if (!pred.same_shape(gt)) throw SignalError("masked_l1: image shapes differ");
    if (mask.width() != pred.width() || mask.height() != pred.height()) {
        throw SignalError("masked_l1: mask shape differs from images");
    }
    if (pred.data().empty()) return 0.0;
    double sum = 0.0;
    for (int y = 0; y < pred.height(); ++y) {
        for (int x = 0; x < pred.width(); ++x) {
            const double m = mask.at(x, y) ? 1.0 : 0.0;
            for (int c = 0; c < pred.channels(); ++c) {
                sum += std::abs(m * pred.at(x, y, c) - m * gt.at(x, y, c));
            }
        }
    }
    return sum / static_cast<double>(pred.data().size());
}

double psnr(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw SignalError("psnr: image shapes differ");
    const auto da = a.data();
    const auto db = b.data();
    if (da.empty()) return kPsnrCap;
    double sse = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) sse += square(static_cast<double>(da[i]) - db[i]);
    const double mse = sse / static_cast<double>(da.size());
    if (mse == 0.0) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

void AugmentConfig::validate() const {
    auto check = [](const Range& r, const char* name) {
        if (!(r.lo > 0.0 && r.lo <= r.hi && std::isfinite(r.hi))) {
            throw SignalError(std::string("augment: invalid ") + name + " range");
        }
    };
    check(exposure, "exposure");
    check(gamma, "gamma");
    check(disparity_scale, "disparity scale");
    if (gamma.lo < 1.0) throw SignalError("augment: gamma must be >= 1");
    if (crop < 1) throw SignalError("augment: crop must be positive");
}

namespace {

Image crop_image(const Image& src, int x0, int y0, int size) {
    Image out(size, size, src.channels());
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            for (int c = 0; c < src.channels(); ++c) out.at(x, y, c) = src.at(x0 + x, y0 + y, c);
        }
    }
    return out;
}

double draw(Rng& rng, const Range& r) { return r.lo == r.hi ? r.lo : rng.uniform(r.lo, r.hi); }

double draw_log(Rng& rng, const Range& r) {
    return r.lo == r.hi ? r.lo : std::exp(rng.uniform(std::log(r.lo), std::log(r.hi)));
}

}  // namespace

TrainSample augment_pair(const ExampleData& example, Rng& rng, const AugmentConfig& cfg) {
    cfg.validate();
    const int w = example.input_hdr.width();
    const int h = example.input_hdr.height();
    if (!example.input_hdr.same_shape(example.reshaded_hdr) || example.depth.width() != w ||
        example.depth.height() != h || example.validity.width() != w || example.validity.height() != h) {
        throw SignalError("augment: example images have mismatched shapes");
    }
    if (w < cfg.crop || h < cfg.crop) {
        throw SignalError("augment: image " + std::to_string(w) + "x" + std::to_string(h) + " smaller than crop " +
                          std::to_string(cfg.crop));
    }

    TrainSample s;
    s.crop_x = static_cast<int>(rng.uniform_int(0, w - cfg.crop));
    s.crop_y = static_cast<int>(rng.uniform_int(0, h - cfg.crop));
    s.exposure = draw(rng, cfg.exposure);
    s.gamma = draw(rng, cfg.gamma);
    s.scale = draw_log(rng, cfg.disparity_scale);

    s.input_ldr = tonemap(crop_image(example.input_hdr, s.crop_x, s.crop_y, cfg.crop), s.exposure, s.gamma);
    s.target_ldr = tonemap(crop_image(example.reshaded_hdr, s.crop_x, s.crop_y, cfg.crop), s.exposure, s.gamma);

    Image disparity = depth_to_disparity(crop_image(example.depth, s.crop_x, s.crop_y, cfg.crop));
    for (float& d : disparity.data()) d = static_cast<float>(std::min(static_cast<double>(d) * s.scale, 1.0));
    s.encoded_disparity = frequency_encode(disparity);

    s.camera_vec = example.novel_offset / s.scale;

    s.mask = Mask(cfg.crop, cfg.crop, false);
    for (int y = 0; y < cfg.crop; ++y) {
        for (int x = 0; x < cfg.crop; ++x) s.mask.set(x, y, example.validity.at(s.crop_x + x, s.crop_y + y));
    }
    return s;
}

}  // namespace forge
