// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/image.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace forge {

static_assert(std::endian::native == std::endian::little, "PFM I/O assumes a little-endian host");

Image::Image(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
    if (width < 0 || height < 0) throw ImageError("image dimensions must be non-negative");
    if (channels != 1 && channels != 3) throw ImageError("image must have 1 or 3 channels");
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Mask::Mask(int width, int height, bool fill)
    : width_(width), height_(height),
      bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {}

bool Mask::all() const {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

std::size_t Mask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::uint8_t> encode_pfm(const Image& img) {
    if (img.channels() != 1 && img.channels() != 3) throw ImageError("PFM needs 1 or 3 channels");
    for (float v : img.data()) {
        if (std::isnan(v)) throw ImageError("refusing to write NaN to PFM");
    }
    const std::string header = std::string(img.channels() == 3 ? "PF" : "Pf") + "\n" +
                               std::to_string(img.width()) + " " + std::to_string(img.height()) +
                               "\n-1.0\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const std::size_t row_floats = static_cast<std::size_t>(img.width()) * img.channels();
    const auto data = img.data();
    out.reserve(out.size() + data.size() * sizeof(float));
    for (int y = img.height() - 1; y >= 0; --y) {
        const auto* row = reinterpret_cast<const std::uint8_t*>(data.data() + y * row_floats);
        out.insert(out.end(), row, row + row_floats * sizeof(float));
    }
    return out;
}

namespace {

// Reads one whitespace-delimited header token; PFM headers are plain ASCII.
std::string next_token(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    std::string token;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) token.push_back(static_cast<char>(bytes[pos++]));
    if (token.empty()) throw ImageError("malformed PFM header: unexpected end of file");
    return token;
}

int parse_dimension(const std::string& token) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(token, &used);
    } catch (const std::exception&) {
        throw ImageError("malformed PFM header: bad dimension '" + token + "'");
    }
    if (used != token.size() || v <= 0 || v > (1 << 20)) {
        throw ImageError("malformed PFM header: bad dimension '" + token + "'");
    }
    return static_cast<int>(v);
}

}  // namespace

Image decode_pfm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    const std::string magic = next_token(bytes, pos);
    int channels = 0;
    if (magic == "PF") channels = 3;
    else if (magic == "Pf") channels = 1;
    else throw ImageError("malformed PFM header: bad magic '" + magic + "'");

    const int width = parse_dimension(next_token(bytes, pos));
    const int height = parse_dimension(next_token(bytes, pos));
    const std::string scale_token = next_token(bytes, pos);
    double scale = 0.0;
    try {
        scale = std::stod(scale_token);
    } catch (const std::exception&) {
        throw ImageError("malformed PFM header: bad scale '" + scale_token + "'");
    }
    if (scale == 0.0) throw ImageError("malformed PFM header: zero scale");
    if (scale > 0.0) throw ImageError("big-endian PFM is not supported");
    // Exactly one whitespace byte separates the header from the payload.
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw ImageError("malformed PFM header");
    ++pos;

    Image img(width, height, channels);
    const std::size_t row_bytes = static_cast<std::size_t>(width) * channels * sizeof(float);
    if (bytes.size() - pos != row_bytes * height) {
        throw ImageError("malformed PFM: payload is " + std::to_string(bytes.size() - pos) +
                         " bytes, expected " + std::to_string(row_bytes * height));
    }
    auto data = img.data();
    for (int y = 0; y < height; ++y) {
        const std::size_t src = pos + static_cast<std::size_t>(height - 1 - y) * row_bytes;
        std::memcpy(reinterpret_cast<std::uint8_t*>(data.data()) + y * row_bytes, bytes.data() + src,
                    row_bytes);
    }
    return img;
}

void write_pfm(const Image& img, const std::filesystem::path& path) {
    const auto bytes = encode_pfm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ImageError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ImageError("failed writing '" + path.string() + "'");
}

Image read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageError("cannot open '" + path.string() + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_pfm(bytes);
    } catch (const ImageError& e) {
        throw ImageError(path.string() + ": " + e.what());
    }
}

void write_mask_png(const Mask& mask, const std::filesystem::path& path) {
    std::vector<std::uint8_t> pixels(mask.pixel_count());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            pixels[static_cast<std::size_t>(y) * mask.width() + x] = mask.at(x, y) ? 255 : 0;
        }
    }
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(mask.width());
    image.height = static_cast<png_uint_32>(mask.height());
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw ImageError("cannot write PNG '" + path.string() + "': " + msg);
    }
}

Mask read_mask_png(const std::filesystem::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        throw ImageError("cannot read PNG '" + path.string() + "': " + image.message);
    }
    image.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw ImageError("cannot decode PNG '" + path.string() + "': " + msg);
    }
    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);
    Mask mask(w, h, false);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) mask.set(x, y, pixels[static_cast<std::size_t>(y) * w + x] >= 128);
    }
    return mask;
}

Image tonemap(const Image& hdr, double exposure, double gamma) {
    if (!(exposure > 0.0)) throw ImageError("tonemap: exposure must be positive");
    if (!(gamma >= 1.0)) throw ImageError("tonemap: gamma must be >= 1");
    Image out(hdr.width(), hdr.height(), hdr.channels());
    const auto src = hdr.data();
    auto dst = out.data();
    const double inv_gamma = 1.0 / gamma;
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (!std::isfinite(src[i])) throw ImageError("tonemap: non-finite input value");
        const double v = std::clamp(exposure * static_cast<double>(src[i]), 0.0, 1.0);
        dst[i] = static_cast<float>(gamma == 1.0 ? v : std::pow(v, inv_gamma));
    }
    return out;
}

Image clamp01(const Image& img) {
    Image out = img;
    for (float& v : out.data()) v = std::clamp(v, 0.0f, 1.0f);
    return out;
}

}  // namespace forge
