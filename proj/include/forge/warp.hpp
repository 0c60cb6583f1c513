// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "forge/camera.hpp"
#include "forge/image.hpp"

namespace forge {

struct CameraPair {
    PinholeCamera input;
    PinholeCamera novel;

    /// Throws std::invalid_argument when either camera is invalid or resolutions differ.
    void validate() const;
};

struct WarpOptions {
    /// Fill holes by 4-neighbor diffusion.
    bool fill = false;
    int fill_iterations = 32;
    /// Row-parallel workers; 0 picks std::thread::hardware_concurrency().
    int threads = 0;
};

struct WarpResult {
    Image warped;
    /// Destination pixels no source pixel landed on (before any filling).
    Mask holes;
};

/// Forward-warps `image` from the input to the novel camera using planar
/// `depth`, nearest-pixel splatting and a z-buffer (smaller novel-camera
/// depth wins; exact ties go to the lower source index). Source pixels with
/// non-finite or non-positive depth are skipped.
WarpResult forward_warp(const Image& image, const Image& depth, const CameraPair& pair, const WarpOptions& options = {});

}  // namespace forge
