// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "forge/signal.hpp"

namespace forge {
namespace {

constexpr float kInf = std::numeric_limits<float>::infinity();

Image single(float v) { return Image(1, 1, 1, v); }

TEST(Disparity, ReferenceValues) {
    EXPECT_FLOAT_EQ(depth_to_disparity(single(0.25f)).at(0, 0), 1.0f);
    EXPECT_FLOAT_EQ(depth_to_disparity(single(kInf)).at(0, 0), 0.0f);
    EXPECT_FLOAT_EQ(depth_to_disparity(single(1.0f)).at(0, 0), 0.25f);
    EXPECT_FLOAT_EQ(depth_to_disparity(single(0.1f)).at(0, 0), 1.0f);  // clamped
}

TEST(Disparity, MonotoneAndInUnitRange) {
    Image depth(200, 1, 1);
    for (int i = 0; i < 200; ++i) depth.at(i, 0) = 0.01f * static_cast<float>(i + 1) * (i % 7 + 1);
    std::sort(depth.data().begin(), depth.data().end());
    const Image d = depth_to_disparity(depth);
    for (int i = 0; i < 200; ++i) {
        EXPECT_GE(d.at(i, 0), 0.0f);
        EXPECT_LE(d.at(i, 0), 1.0f);
        if (i > 0) EXPECT_LE(d.at(i, 0), d.at(i - 1, 0));
    }
}

TEST(Disparity, NonPositiveDepthRejected) {
    EXPECT_THROW(depth_to_disparity(single(0.0f)), SignalError);
    EXPECT_THROW(depth_to_disparity(single(-1.0f)), SignalError);
}

TEST(FrequencyEncode, AtZero) {
    const auto e = frequency_encode(0.0);
    const std::array<float, 11> expected{0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    for (int i = 0; i < 11; ++i) EXPECT_NEAR(e[i], expected[i], 1e-6) << i;
}

TEST(FrequencyEncode, AtOneHalf) {
    const auto e = frequency_encode(0.5);
    const std::array<float, 11> expected{0.5f, 1, 0, 0, -1, 0, 1, 0, 1, 0, 1};
    for (int i = 0; i < 11; ++i) EXPECT_NEAR(e[i], expected[i], 1e-6) << i;
}

TEST(FrequencyEncode, ElevenChannelsFirstIsInputAllBounded) {
    EXPECT_EQ(kEncodedChannels, 11);
    Image d(7, 5, 1);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 7; ++x) d.at(x, y) = static_cast<float>((x * 5 + y) / 34.0);
    }
    const auto enc = frequency_encode(d);
    EXPECT_EQ(enc.channels(), 11);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 7; ++x) {
            EXPECT_EQ(enc.at(x, y, 0), d.at(x, y));
            for (int c = 0; c < 11; ++c) EXPECT_LE(std::abs(enc.at(x, y, c)), 1.0f);
            // Independent evaluation of the basis.
            for (int k = 0; k < 5; ++k) {
                const double arg = std::ldexp(kPi, k) * d.at(x, y);
                EXPECT_NEAR(enc.at(x, y, 1 + 2 * k), std::sin(arg), 1e-6);
                EXPECT_NEAR(enc.at(x, y, 2 + 2 * k), std::cos(arg), 1e-6);
            }
        }
    }
}

TEST(FrequencyEncode, StackedRoundTrip) {
    Image d(4, 3, 1, 0.3f);
    d.at(1, 2) = 0.9f;
    const auto enc = frequency_encode(d);
    const Image stacked = enc.stacked();
    EXPECT_EQ(stacked.width(), 4);
    EXPECT_EQ(stacked.height(), 33);
    EXPECT_EQ(stacked.channels(), 1);
    EXPECT_EQ(stacked.at(1, 2), 0.9f);
    EXPECT_EQ(stacked.at(1, 2 + 3 * 4), enc.at(1, 2, 4));
    EXPECT_EQ(EncodedDisparity::from_stacked(stacked), enc);
    EXPECT_THROW(EncodedDisparity::from_stacked(Image(4, 10, 1)), SignalError);
}

TEST(FrequencyEncode, OutOfRangeRejected) {
    EXPECT_THROW(frequency_encode(1.5), SignalError);
    EXPECT_THROW(frequency_encode(-0.1), SignalError);
}

TEST(MaskedL1, ReferenceValues) {
    const Image pred(4, 4, 3, 0.5f), gt(4, 4, 3, 0.25f);
    EXPECT_EQ(masked_l1(pred, pred, Mask(4, 4, true)), 0.0);
    EXPECT_EQ(masked_l1(pred, gt, Mask(4, 4, false)), 0.0);
    EXPECT_NEAR(masked_l1(pred, gt, Mask(4, 4, true)), 0.25, 1e-6);
    // Normalized over all pixels, not just the valid ones.
    Mask half(4, 4, false);
    for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 2; ++y) half.set(x, y, true);
    }
    EXPECT_NEAR(masked_l1(pred, gt, half), 0.125, 1e-6);
}

TEST(MaskedL1, SymmetricAndZeroOnlyWhenAgreeingOnMask) {
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        Image a(6, 5, 3), b(6, 5, 3);
        for (float& v : a.data()) v = static_cast<float>(rng.uniform());
        for (float& v : b.data()) v = static_cast<float>(rng.uniform());
        Mask m(6, 5, false);
        for (int y = 0; y < 5; ++y) {
            for (int x = 0; x < 6; ++x) {
                m.set(x, y, rng.uniform() < 0.5);
                if (!m.at(x, y)) continue;
                if (trial % 2 == 0) {
                    for (int c = 0; c < 3; ++c) b.at(x, y, c) = a.at(x, y, c);
                }
            }
        }
        EXPECT_EQ(masked_l1(a, b, m), masked_l1(b, a, m));
        EXPECT_EQ(masked_l1(a, b, m) == 0.0, trial % 2 == 0 || m.count() == 0);
    }
}

TEST(Psnr, ReferenceValues) {
    const Image a(8, 8, 3, 0.0f);
    EXPECT_EQ(psnr(a, a), 99.0);
    EXPECT_NEAR(psnr(a, Image(8, 8, 3, 0.1f)), 20.0, 1e-6);
    EXPECT_NEAR(psnr(a, Image(8, 8, 3, 0.01f)), 40.0, 1e-6);
    EXPECT_NEAR(psnr(Image(8, 8, 3, 0.3f), Image(8, 8, 3, 0.4f)), 20.0, 1e-5);
    EXPECT_THROW(psnr(a, Image(8, 7, 3)), SignalError);
}

ExampleData make_example(int size, float hdr, float depth) {
    ExampleData ex;
    ex.input_hdr = Image(size, size, 3, hdr);
    ex.reshaded_hdr = Image(size, size, 3, hdr);
    ex.depth = Image(size, size, 1, depth);
    ex.validity = Mask(size, size, true);
    ex.novel_offset = {0.1, -0.2, 0.05};
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            ex.input_hdr.at(x, y, 0) = hdr * static_cast<float>(x + 1) / static_cast<float>(size);
            ex.reshaded_hdr.at(x, y, 1) = hdr * 3.0f * static_cast<float>(y + 1) / static_cast<float>(size);
            ex.depth.at(x, y) = depth + 0.1f * static_cast<float>(x + y);
        }
    }
    ex.validity.set(0, 0, false);
    return ex;
}

AugmentConfig fixed(double exposure, double gamma, double scale, int crop) {
    AugmentConfig cfg;
    cfg.exposure = {exposure, exposure};
    cfg.gamma = {gamma, gamma};
    cfg.disparity_scale = {scale, scale};
    cfg.crop = crop;
    return cfg;
}

TEST(Augment, IdentityParametersClampHdrAndKeepCamera) {
    const auto ex = make_example(16, 1.5f, 0.3f);
    Rng rng(1);
    const auto s = augment_pair(ex, rng, fixed(1.0, 1.0, 1.0, 16));
    EXPECT_EQ(s.crop_x, 0);
    EXPECT_EQ(s.crop_y, 0);
    EXPECT_EQ(s.input_ldr, clamp01(ex.input_hdr));
    EXPECT_EQ(s.target_ldr, clamp01(ex.reshaded_hdr));
    EXPECT_EQ(s.camera_vec, ex.novel_offset);
    EXPECT_EQ(s.mask, ex.validity);
    EXPECT_EQ(s.encoded_disparity, frequency_encode(depth_to_disparity(ex.depth)));
}

TEST(Augment, ScaleTwoHalvesCameraAndDoublesClampedDisparity) {
    const auto ex = make_example(12, 0.5f, 0.3f);
    Rng rng(2);
    const auto s = augment_pair(ex, rng, fixed(1.0, 1.0, 2.0, 12));
    EXPECT_EQ(s.camera_vec, ex.novel_offset / 2.0);
    const Image d = depth_to_disparity(ex.depth);
    for (int y = 0; y < 12; ++y) {
        for (int x = 0; x < 12; ++x) {
            EXPECT_FLOAT_EQ(s.encoded_disparity.at(x, y, 0), std::min(2.0f * d.at(x, y), 1.0f));
        }
    }
}

TEST(Augment, DeterministicInRngState) {
    const auto ex = make_example(24, 0.8f, 0.5f);
    AugmentConfig cfg;
    cfg.crop = 16;
    Rng a(99), b(99);
    const auto s1 = augment_pair(ex, a, cfg);
    const auto s2 = augment_pair(ex, b, cfg);
    EXPECT_EQ(s1.input_ldr, s2.input_ldr);
    EXPECT_EQ(s1.target_ldr, s2.target_ldr);
    EXPECT_EQ(s1.encoded_disparity, s2.encoded_disparity);
    EXPECT_EQ(s1.camera_vec, s2.camera_vec);
    EXPECT_EQ(s1.mask, s2.mask);
    EXPECT_EQ(a, b);
}

TEST(Augment, SamePhotometricParametersForInputAndTarget) {
    auto ex = make_example(20, 2.0f, 0.4f);
    ex.reshaded_hdr = ex.input_hdr;
    AugmentConfig cfg;
    cfg.crop = 8;
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const auto s = augment_pair(ex, rng, cfg);
        EXPECT_EQ(s.input_ldr, s.target_ldr);
        EXPECT_GE(s.exposure, 3.0);
        EXPECT_LE(s.exposure, 10.0);
        EXPECT_GE(s.gamma, 2.2);
        EXPECT_LE(s.gamma, 5.0);
        EXPECT_GE(s.scale, 0.5);
        EXPECT_LE(s.scale, 2.0);
        EXPECT_LE(s.crop_x, 12);
        EXPECT_LE(s.crop_y, 12);
    }
}

TEST(Augment, CropLargerThanImageRejected) {
    const auto ex = make_example(8, 1.0f, 0.5f);
    Rng rng(0);
    AugmentConfig cfg;
    EXPECT_THROW(augment_pair(ex, rng, cfg), SignalError);
    cfg.crop = 8;
    cfg.exposure = {2.0, 1.0};
    EXPECT_THROW(augment_pair(ex, rng, cfg), SignalError);
}

}  // namespace
}  // namespace forge
