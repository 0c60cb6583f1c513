// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <png.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "forge/image.hpp"
#include "forge/rng.hpp"

namespace forge {
namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "forge_image_io";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

void append_float(std::vector<std::uint8_t>& out, float v) {
    std::uint8_t raw[4];
    std::memcpy(raw, &v, 4);
    out.insert(out.end(), raw, raw + 4);
}

// Reads a PNG as 8-bit gray with libpng directly, independent of read_mask_png.
std::vector<std::uint8_t> raw_gray(const fs::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    EXPECT_TRUE(png_image_begin_read_from_file(&image, path.c_str()));
    image.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
    EXPECT_TRUE(png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr));
    return pixels;
}

TEST(Pfm, TwoByTwoConstantLayout) {
    const Image img(2, 2, 3, 0.5f);
    const auto bytes = encode_pfm(img);
    const std::string header = "PF\n2 2\n-1.0\n";
    ASSERT_EQ(header.size(), 12u);
    ASSERT_EQ(bytes.size(), 12u + 48u);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 12), header);
    for (std::size_t i = 12; i < bytes.size(); i += 4) {
        float v;
        std::memcpy(&v, bytes.data() + i, 4);
        EXPECT_EQ(v, 0.5f);
    }
    EXPECT_EQ(decode_pfm(bytes), img);
}

TEST(Pfm, DecodesSinglePixel) {
    auto bytes = bytes_of("PF\n1 1\n-1.0\n");
    for (int c = 0; c < 3; ++c) append_float(bytes, 1.0f);
    const Image img = decode_pfm(bytes);
    ASSERT_EQ(img.width(), 1);
    ASSERT_EQ(img.height(), 1);
    ASSERT_EQ(img.channels(), 3);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(img.at(0, 0, c), 1.0f);
}

TEST(Pfm, RowsAreStoredBottomToTop) {
    Image img(1, 2, 1);
    img.at(0, 0) = 1.0f;  // top
    img.at(0, 1) = 2.0f;  // bottom
    const auto bytes = encode_pfm(img);
    float first;
    std::memcpy(&first, bytes.data() + std::string("Pf\n1 2\n-1.0\n").size(), 4);
    EXPECT_EQ(first, 2.0f);
}

TEST(Pfm, TruncatedPayloadIsMalformed) {
    auto bytes = encode_pfm(Image(2, 2, 3, 0.5f));
    bytes.pop_back();
    try {
        decode_pfm(bytes);
        FAIL() << "expected a malformed-file error";
    } catch (const ImageError& e) {
        EXPECT_NE(std::string(e.what()).find("malformed"), std::string::npos) << e.what();
    }
}

TEST(Pfm, BadHeadersRejected) {
    auto payload = [](std::string header) {
        auto b = bytes_of(header);
        append_float(b, 1.0f);
        return b;
    };
    EXPECT_THROW(decode_pfm(payload("P6\n1 1\n-1.0\n")), ImageError);
    EXPECT_THROW(decode_pfm(payload("Pf\n-1 1\n-1.0\n")), ImageError);
    EXPECT_THROW(decode_pfm(payload("Pf\n1 1\n0.0\n")), ImageError);
    EXPECT_THROW(decode_pfm(payload("Pf\n1 1\n1.0\n")), ImageError);  // big-endian
    EXPECT_THROW(decode_pfm(payload("Pf\n1 1\n")), ImageError);
    EXPECT_NO_THROW(decode_pfm(payload("Pf\n1 1\n-1.0\n")));
}

TEST(Pfm, NanIsRefused) {
    Image img(2, 1, 1);
    img.at(1, 0) = std::numeric_limits<float>::quiet_NaN();
    EXPECT_THROW(encode_pfm(img), ImageError);
}

TEST(Pfm, RoundTripIsBitExactForArbitraryPayloads) {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const int w = static_cast<int>(rng.uniform_int(1, 17));
        const int h = static_cast<int>(rng.uniform_int(1, 13));
        Image img(w, h, rng.uniform() < 0.5 ? 1 : 3);
        for (float& v : img.data()) {
            float candidate;
            do {
                candidate = std::bit_cast<float>(rng.next_u32());
            } while (std::isnan(candidate));
            v = candidate;
        }
        const Image back = decode_pfm(encode_pfm(img));
        ASSERT_TRUE(back.same_shape(img));
        for (std::size_t i = 0; i < img.data().size(); ++i) {
            ASSERT_EQ(std::bit_cast<std::uint32_t>(back.data()[i]), std::bit_cast<std::uint32_t>(img.data()[i]));
        }
    }
}

TEST(Pfm, FileRoundTripIncludingInfinity) {
    Image depth(3, 2, 1, 1.5f);
    depth.at(2, 1) = std::numeric_limits<float>::infinity();
    const auto path = temp_file("depth.pfm");
    write_pfm(depth, path);
    EXPECT_EQ(read_pfm(path), depth);
    EXPECT_EQ(fs::file_size(path), std::string("Pf\n3 2\n-1.0\n").size() + 24u);
    EXPECT_THROW(read_pfm(temp_file("missing.pfm")), ImageError);
}

TEST(MaskPng, AllTrueIsAll255) {
    const auto path = temp_file("true.png");
    write_mask_png(Mask(4, 4, true), path);
    const auto px = raw_gray(path);
    ASSERT_EQ(px.size(), 16u);
    for (auto v : px) EXPECT_EQ(v, 255);
    EXPECT_EQ(read_mask_png(path), Mask(4, 4, true));
}

TEST(MaskPng, AllFalseIsAllZero) {
    const auto path = temp_file("false.png");
    write_mask_png(Mask(4, 4, false), path);
    for (auto v : raw_gray(path)) EXPECT_EQ(v, 0);
    EXPECT_EQ(read_mask_png(path), Mask(4, 4, false));
}

TEST(MaskPng, RandomMasksRoundTrip) {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Mask m(static_cast<int>(rng.uniform_int(1, 40)), static_cast<int>(rng.uniform_int(1, 40)), false);
        for (int y = 0; y < m.height(); ++y) {
            for (int x = 0; x < m.width(); ++x) m.set(x, y, rng.uniform() < 0.5);
        }
        const auto path = temp_file("random.png");
        write_mask_png(m, path);
        EXPECT_EQ(read_mask_png(path), m);
    }
}

TEST(Tonemap, ClampThenGamma) {
    EXPECT_FLOAT_EQ(tonemap(Image(1, 1, 1, 0.25f), 4.0, 2.0).at(0, 0), 1.0f);
    EXPECT_NEAR(tonemap(Image(1, 1, 1, 0.04f), 4.0, 2.0).at(0, 0), 0.4f, 1e-6);
    for (double e : {0.5, 3.0, 10.0}) {
        for (double g : {1.0, 2.2, 5.0}) EXPECT_EQ(tonemap(Image(1, 1, 3, 0.0f), e, g).at(0, 0, 1), 0.0f);
    }
}

TEST(Tonemap, MonotoneAndBounded) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const double e = rng.uniform(0.1, 10.0), g = rng.uniform(1.0, 5.0);
        Image ramp(256, 1, 1);
        for (int i = 0; i < 256; ++i) ramp.at(i, 0) = static_cast<float>(std::pow(i / 64.0, 3.0));
        const Image out = tonemap(ramp, e, g);
        for (int i = 0; i < 256; ++i) {
            EXPECT_GE(out.at(i, 0), 0.0f);
            EXPECT_LE(out.at(i, 0), 1.0f);
            if (i > 0) EXPECT_GE(out.at(i, 0), out.at(i - 1, 0));
        }
    }
}

TEST(Tonemap, RejectsBadParameters) {
    const Image img(1, 1, 1, 0.5f);
    EXPECT_THROW(tonemap(img, 0.0, 2.0), ImageError);
    EXPECT_THROW(tonemap(img, 1.0, 0.5), ImageError);
    EXPECT_THROW(tonemap(Image(1, 1, 1, std::numeric_limits<float>::infinity()), 1.0, 2.0), ImageError);
}

TEST(Image, ConstructorValidatesShape) {
    EXPECT_THROW(Image(2, 2, 2), ImageError);
    EXPECT_THROW(Image(-1, 2, 1), ImageError);
    const Image img(3, 2, 3, 0.25f);
    EXPECT_EQ(img.data().size(), 18u);
}

}  // namespace
}  // namespace forge
