// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>

#include "forge/math.hpp"
#include "forge/scene.hpp"

namespace forge {

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
    double t_min = 0.0;
    double t_max = kInfinity;

    Vec3 at(double t) const { return origin + direction * t; }
};

/// Nearest surface intersection. `normal` is the geometric normal of the
/// shape (sphere: outward, quad: edge_u x edge_v, plane: as authored); it is
/// not flipped toward the ray.
struct Hit {
    double t = kInfinity;
    Vec3 point;
    Vec3 normal;
    std::size_t primitive = 0;
    std::size_t material = 0;
    Rgb emitted;
};

std::optional<double> intersect_shape(const Shape& shape, const Ray& ray);
Vec3 shape_normal(const Shape& shape, const Vec3& point);

/// Closest hit with t in (t_min, t_max), by brute force over all primitives.
std::optional<Hit> intersect(const SceneDescription& scene, const Ray& ray);

/// True if anything blocks the open segment (t_min, t_max).
bool occluded(const SceneDescription& scene, const Ray& ray);

/// Ray origin nudged off a surface toward the side `dir` leaves through.
Vec3 offset_origin(const Vec3& point, const Vec3& normal, const Vec3& dir);

}  // namespace forge
