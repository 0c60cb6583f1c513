// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/warp.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace forge {

void CameraPair::validate() const {
    input.validate();
    novel.validate();
    if (input.width != novel.width || input.height != novel.height) {
        throw std::invalid_argument("camera pair: resolutions differ");
    }
}

namespace {

constexpr std::uint64_t kNoSource = std::numeric_limits<std::uint64_t>::max();

struct ZBuffer {
    std::vector<double> depth;
    std::vector<std::uint64_t> source;

    explicit ZBuffer(std::size_t n) : depth(n, kInfinity), source(n, kNoSource) {}

    // Lexicographic (depth, source index) keeps the result independent of splat order.
    void offer(std::size_t dst, double z, std::uint64_t src) {
        if (z < depth[dst] || (z == depth[dst] && src < source[dst])) {
            depth[dst] = z;
            source[dst] = src;
        }
    }
};

void splat_rows(const Image& depth, const CameraPair& pair, int y0, int y1, ZBuffer& zb) {
    const int w = pair.input.width;
    const int h = pair.input.height;
    for (int y = y0; y < y1; ++y) {
        for (int x = 0; x < w; ++x) {
            const double z = depth.at(x, y);
            if (!(z > 0.0)) continue;
            std::optional<PixelCoord> p;
            double novel_z = kInfinity;
            if (std::isfinite(z)) {
                const Vec3 world = unproject({x + 0.5, y + 0.5}, z, pair.input);
                p = project(world, pair.novel);
                novel_z = planar_depth(world, pair.novel);
            } else {
                // Points at infinity move with camera rotation only.
                const Vec3 dir = unproject({x + 0.5, y + 0.5}, 1.0, pair.input) - pair.input.position;
                p = project(pair.novel.position + dir, pair.novel);
            }
            if (!p) continue;
            const double fu = std::floor(p->u);
            const double fv = std::floor(p->v);
            if (fu < 0.0 || fv < 0.0 || fu >= w || fv >= h) continue;
            const auto dst = static_cast<std::size_t>(fv) * w + static_cast<std::size_t>(fu);
            zb.offer(dst, novel_z, static_cast<std::uint64_t>(y) * w + x);
        }
    }
}

void diffuse_fill(Image& img, Mask filled, int iterations) {
    const int w = img.width();
    const int h = img.height();
    const int channels = img.channels();
    for (int it = 0; it < iterations; ++it) {
        Mask next = filled;
        Image out = img;
        bool changed = false;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (filled.at(x, y)) continue;
                double sum[3] = {0.0, 0.0, 0.0};
                int count = 0;
                const int nx[4] = {x - 1, x + 1, x, x};
                const int ny[4] = {y, y, y - 1, y + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h || !filled.at(nx[k], ny[k])) continue;
                    for (int c = 0; c < channels; ++c) sum[c] += img.at(nx[k], ny[k], c);
                    ++count;
                }
                if (count == 0) continue;
                for (int c = 0; c < channels; ++c) out.at(x, y, c) = static_cast<float>(sum[c] / count);
                next.set(x, y, true);
                changed = true;
            }
        }
        img = std::move(out);
        filled = std::move(next);
        if (!changed) break;
    }
}

}  // namespace

WarpResult forward_warp(const Image& image, const Image& depth, const CameraPair& pair, const WarpOptions& options) {
    pair.validate();
    const int w = pair.input.width;
    const int h = pair.input.height;
    if (image.width() != w || image.height() != h) throw std::invalid_argument("warp: image size differs from cameras");
    if (depth.width() != w || depth.height() != h || depth.channels() != 1) {
        throw std::invalid_argument("warp: depth must be single-channel and match the cameras");
    }

    const std::size_t n = static_cast<std::size_t>(w) * h;
    unsigned threads = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(h));

    std::vector<ZBuffer> buffers(threads, ZBuffer(n));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            const int y0 = static_cast<int>(static_cast<long long>(h) * t / threads);
            const int y1 = static_cast<int>(static_cast<long long>(h) * (t + 1) / threads);
            if (threads == 1) splat_rows(depth, pair, y0, y1, buffers[t]);
            else pool.emplace_back([&, y0, y1, t] { splat_rows(depth, pair, y0, y1, buffers[t]); });
        }
    }
    ZBuffer& merged = buffers.front();
    for (unsigned t = 1; t < threads; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            if (buffers[t].source[i] != kNoSource) merged.offer(i, buffers[t].depth[i], buffers[t].source[i]);
        }
    }

    WarpResult result{Image(w, h, image.channels()), Mask(w, h, false)};
    Mask filled(w, h, false);
    for (std::size_t i = 0; i < n; ++i) {
        const int x = static_cast<int>(i % w);
        const int y = static_cast<int>(i / w);
        const std::uint64_t src = merged.source[i];
        if (src == kNoSource) {
            result.holes.set(x, y, true);
            continue;
        }
        filled.set(x, y, true);
        const int sx = static_cast<int>(src % w);
        const int sy = static_cast<int>(src / w);
        for (int c = 0; c < image.channels(); ++c) result.warped.at(x, y, c) = image.at(sx, sy, c);
    }
    if (options.fill) diffuse_fill(result.warped, std::move(filled), options.fill_iterations);
    return result;
}

}  // namespace forge
