// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "forge/camera.hpp"
#include "forge/image.hpp"
#include "forge/integrator.hpp"
#include "forge/scene.hpp"

namespace forge {

/// Per-sample RNG stream identifiers.
enum class Stream : std::uint64_t { camera = 0, shading = 1 };

struct RenderOptions {
    int spp = 16;
    std::uint64_t seed = 0;
    int max_depth = kDefaultMaxDepth;
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    int threads = 0;
    int tile_size = 16;
    /// Keep every sample's first hit (for validity cross-checks).
    bool record_first_hits = false;
};

/// First intersection of one primary sample, normal oriented toward the input camera.
struct FirstHitRecord {
    bool hit = false;
    Vec3 point;
    Vec3 normal;
};

struct RenderOutputs {
    Image input_hdr;     // 3 channels
    Image reshaded_hdr;  // 3 channels
    Image depth;         // 1 channel, planar z in meters; +inf where the center ray escapes
    Mask validity;
    /// Indexed [(y * width + x) * spp + sample] when recorded.
    std::vector<FirstHitRecord> first_hits;
};

/// Renders the input and reshaded AOVs for `camera` and a novel camera at
/// `novel_position` (world space). Both estimators share each sample's
/// primary ray and shading random stream, so a novel position equal to the
/// camera position reproduces the input image exactly. Output does not
/// depend on the thread count.
RenderOutputs render(const SceneDescription& scene, const PinholeCamera& camera, const Vec3& novel_position,
                     const RenderOptions& options);

/// RNG for one (pixel, sample, stream), derived statelessly from the seed.
Rng sample_rng(std::uint64_t seed, std::uint64_t pixel, std::uint64_t sample, Stream stream);

}  // namespace forge
