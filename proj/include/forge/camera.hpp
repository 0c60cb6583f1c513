// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "forge/geometry.hpp"
#include "forge/math.hpp"

namespace forge {

/// Continuous pixel coordinates; (0,0) is the top-left corner of the image,
/// pixel (i, j) covers [i, i+1) x [j, j+1).
struct PixelCoord {
    double u = 0.0;
    double v = 0.0;
};

/// Camera-local axes: right, up, and forward (the view direction).
struct CameraBasis {
    Vec3 right;
    Vec3 up;
    Vec3 forward;
};

struct PinholeCamera {
    Vec3 position;
    Vec3 look_at{0, 0, -1};
    Vec3 up{0, 1, 0};
    double vertical_fov = kPi / 2.0;  // radians
    int width = 1;
    int height = 1;

    CameraBasis basis() const;
    /// Focal length in pixels.
    double focal_px() const;

    /// Ray through continuous pixel position `p`.
    Ray generate_ray(PixelCoord p) const;

    /// Coordinates of a world vector in (right, up, -forward) axes.
    Vec3 to_camera_axes(const Vec3& world) const;
    Vec3 from_camera_axes(const Vec3& local) const;

    /// Same intrinsics, translated by `offset` given in (right, up, -forward) axes.
    PinholeCamera translated(const Vec3& offset) const;

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;

    friend bool operator==(const PinholeCamera&, const PinholeCamera&) = default;
};

/// World-space point at planar depth `depth` along the ray through `pixel`.
Vec3 unproject(PixelCoord pixel, double depth, const PinholeCamera& cam);

/// Perspective projection; nullopt for points on or behind the image plane.
std::optional<PixelCoord> project(const Vec3& point, const PinholeCamera& cam);

/// Planar depth of `point` along the camera's forward axis.
double planar_depth(const Vec3& point, const PinholeCamera& cam);

}  // namespace forge
