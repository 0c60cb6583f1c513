// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/geometry.hpp"

namespace forge {

namespace {

constexpr double kOriginOffset = 1e-6;

std::optional<double> hit_sphere(const Sphere& s, const Ray& ray) {
    const Vec3 oc = ray.origin - s.center;
    const double half_b = dot(oc, ray.direction);
    const double c = dot(oc, oc) - s.radius * s.radius;
    const double disc = half_b * half_b - c;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    // Numerically stable pair of roots: q and c/q.
    const double q = half_b > 0.0 ? -half_b - root : -half_b + root;
    double t0 = q;
    double t1 = q != 0.0 ? c / q : -half_b;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > ray.t_min && t0 < ray.t_max) return t0;
    if (t1 > ray.t_min && t1 < ray.t_max) return t1;
    return std::nullopt;
}

std::optional<double> hit_quad(const Quad& q, const Ray& ray) {
    const Vec3 n = cross(q.edge_u, q.edge_v);
    const double denom = dot(n, ray.direction);
    if (denom == 0.0) return std::nullopt;
    const double t = dot(n, q.corner - ray.origin) / denom;
    if (!(t > ray.t_min && t < ray.t_max)) return std::nullopt;
    const Vec3 rel = ray.at(t) - q.corner;
    const double nn = dot(n, n);
    const double s = dot(cross(rel, q.edge_v), n) / nn;
    const double u = dot(cross(q.edge_u, rel), n) / nn;
    if (s < 0.0 || s > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return t;
}

std::optional<double> hit_plane(const Plane& p, const Ray& ray) {
    const double denom = dot(p.normal, ray.direction);
    if (denom == 0.0) return std::nullopt;
    const double t = dot(p.normal, p.point - ray.origin) / denom;
    if (!(t > ray.t_min && t < ray.t_max)) return std::nullopt;
    return t;
}

}  // namespace

std::optional<double> intersect_shape(const Shape& shape, const Ray& ray) {
    if (const auto* s = std::get_if<Sphere>(&shape)) return hit_sphere(*s, ray);
    if (const auto* q = std::get_if<Quad>(&shape)) return hit_quad(*q, ray);
    return hit_plane(std::get<Plane>(shape), ray);
}

Vec3 shape_normal(const Shape& shape, const Vec3& point) {
    if (const auto* s = std::get_if<Sphere>(&shape)) return (point - s->center) / s->radius;
    if (const auto* q = std::get_if<Quad>(&shape)) return normalize(cross(q->edge_u, q->edge_v));
    return std::get<Plane>(shape).normal;
}

std::optional<Hit> intersect(const SceneDescription& scene, const Ray& ray) {
    Ray probe = ray;
    std::optional<std::size_t> nearest;
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        if (const auto t = intersect_shape(scene.primitives[i].shape, probe)) {
            probe.t_max = *t;
            nearest = i;
        }
    }
    if (!nearest) return std::nullopt;
    const Primitive& prim = scene.primitives[*nearest];
    Hit hit;
    hit.t = probe.t_max;
    hit.point = ray.at(hit.t);
    hit.normal = normalize(shape_normal(prim.shape, hit.point));
    hit.primitive = *nearest;
    hit.material = prim.material;
    hit.emitted = prim.emission;
    return hit;
}

bool occluded(const SceneDescription& scene, const Ray& ray) {
    for (const auto& prim : scene.primitives) {
        if (intersect_shape(prim.shape, ray)) return true;
    }
    return false;
}

Vec3 offset_origin(const Vec3& point, const Vec3& normal, const Vec3& dir) {
    const double scale = kOriginOffset * std::max({1.0, std::abs(point.x), std::abs(point.y), std::abs(point.z)});
    return point + normal * (dot(normal, dir) >= 0.0 ? scale : -scale);
}

}  // namespace forge
