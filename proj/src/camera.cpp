// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/camera.hpp"

#include <stdexcept>

namespace forge {

CameraBasis PinholeCamera::basis() const {
    const Vec3 forward = normalize(look_at - position);
    const Vec3 right = normalize(cross(forward, up));
    return {right, cross(right, forward), forward};
}

double PinholeCamera::focal_px() const { return 0.5 * height / std::tan(0.5 * vertical_fov); }

Ray PinholeCamera::generate_ray(PixelCoord p) const {
    const CameraBasis b = basis();
    const double f = focal_px();
    const Vec3 dir = b.forward + b.right * ((p.u - 0.5 * width) / f) - b.up * ((p.v - 0.5 * height) / f);
    return {position, normalize(dir), 0.0, kInfinity};
}

Vec3 PinholeCamera::to_camera_axes(const Vec3& world) const {
    const CameraBasis b = basis();
    return {dot(world, b.right), dot(world, b.up), -dot(world, b.forward)};
}

Vec3 PinholeCamera::from_camera_axes(const Vec3& local) const {
    const CameraBasis b = basis();
    return b.right * local.x + b.up * local.y - b.forward * local.z;
}

PinholeCamera PinholeCamera::translated(const Vec3& offset) const {
    PinholeCamera moved = *this;
    const Vec3 delta = from_camera_axes(offset);
    moved.position = position + delta;
    moved.look_at = look_at + delta;
    return moved;
}

void PinholeCamera::validate() const {
    if (!is_finite(position) || !is_finite(look_at) || !is_finite(up)) {
        throw std::invalid_argument("camera: non-finite vector");
    }
    if (!(vertical_fov > 0.0 && vertical_fov < kPi)) throw std::invalid_argument("camera: fov must be in (0, pi)");
    if (width < 1 || height < 1) throw std::invalid_argument("camera: resolution must be at least 1x1");
    const Vec3 forward = look_at - position;
    if (length(forward) == 0.0) throw std::invalid_argument("camera: look_at equals position");
    if (length(cross(normalize(forward), up)) < 1e-9) throw std::invalid_argument("camera: up is parallel to view");
}

Vec3 unproject(PixelCoord pixel, double depth, const PinholeCamera& cam) {
    const CameraBasis b = cam.basis();
    const double f = cam.focal_px();
    const double x = (pixel.u - 0.5 * cam.width) / f;
    const double y = -(pixel.v - 0.5 * cam.height) / f;
    return cam.position + (b.forward + b.right * x + b.up * y) * depth;
}

std::optional<PixelCoord> project(const Vec3& point, const PinholeCamera& cam) {
    const CameraBasis b = cam.basis();
    const Vec3 rel = point - cam.position;
    const double z = dot(rel, b.forward);
    if (!(z > 0.0)) return std::nullopt;
    const double f = cam.focal_px();
    return PixelCoord{0.5 * cam.width + f * dot(rel, b.right) / z, 0.5 * cam.height - f * dot(rel, b.up) / z};
}

double planar_depth(const Vec3& point, const PinholeCamera& cam) {
    return dot(point - cam.position, cam.basis().forward);
}

}  // namespace forge
