// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "forge/bsdf.hpp"
#include "forge/geometry.hpp"
#include "forge/rng.hpp"
#include "forge/scene.hpp"

namespace forge {

inline constexpr int kDefaultMaxDepth = 8;
/// Russian roulette starts at this bounce; survival clamped to [0.1, 0.95].
inline constexpr int kRouletteDepth = 3;

/// Direction sampled toward one light.
struct LightSample {
    Vec3 w_in;
    double distance = kInfinity;
    Rgb radiance;
    double pdf = 0.0;  // solid angle, excluding the light-selection probability
};

struct ReshadedSample {
    Rgb radiance;
    bool valid = true;
};

/// Unidirectional path tracer with next-event estimation toward one uniformly
/// chosen light (emissive primitives plus a non-black environment) and
/// balance-heuristic MIS against BSDF sampling.
///
/// Holds a reference to the scene, which must outlive the tracer.
class PathTracer {
public:
    explicit PathTracer(const SceneDescription& scene, int max_depth = kDefaultMaxDepth);

    const SceneDescription& scene() const { return scene_; }
    int max_depth() const { return max_depth_; }
    std::size_t light_count() const { return lights_.size(); }

    /// L_o toward -ray.direction.
    Rgb radiance(const Ray& ray, Rng& rng) const;

    /// Radiance at the first hit of `input_ray`, shaded as seen from
    /// `novel_position`. No visibility test toward the novel position.
    ReshadedSample reshaded(const Ray& input_ray, const Vec3& novel_position, Rng& rng) const;

    /// Shading normal at `hit`, flipped to face the origin of `ray`.
    static Vec3 oriented_normal(const Hit& hit, const Ray& ray);

    /// Outgoing direction used for reshading at `point`. When the novel
    /// position is the ray origin itself this is exactly -ray.direction.
    static Vec3 novel_direction(const Ray& input_ray, const Vec3& point, const Vec3& novel_position);

    /// Estimate of L_o(x, w_out) at a known first hit, with `normal` oriented
    /// toward the side being shaded from. Shared by both estimators.
    Rgb shade(const Hit& first, const Vec3& w_out, const Vec3& normal, Rng& rng) const;

    /// Radiance seen along a ray that escaped the scene.
    Rgb environment(const Vec3& dir) const { return scene_.environment.radiance(dir); }

    /// Samples light `light` (an index into the light list) from `point`.
    LightSample sample_light(std::size_t light, const Vec3& point, Sample2 u) const;
    /// Solid-angle density of sampling `dir` from `point` via light `light`.
    double light_pdf(std::size_t light, const Vec3& point, const Vec3& dir, const std::optional<Hit>& hit) const;

private:
    Rgb emitted(const Hit& hit, const Vec3& w_out) const;
    bool visible(std::size_t light, const Vec3& origin, const Vec3& dir) const;
    std::optional<std::size_t> light_of_primitive(std::size_t primitive) const;

    const SceneDescription& scene_;
    int max_depth_;
    std::vector<std::size_t> lights_;  // primitive indices; environment uses kEnvironment
    std::vector<std::ptrdiff_t> light_index_of_primitive_;
    std::optional<std::size_t> environment_light_;

    static constexpr std::size_t kEnvironment = static_cast<std::size_t>(-1);
};

Rgb estimate_radiance(const SceneDescription& scene, const Ray& ray, Rng& rng, int max_depth = kDefaultMaxDepth);

ReshadedSample estimate_reshaded(const SceneDescription& scene, const Ray& input_ray, const Vec3& novel_position,
                                 Rng& rng, int max_depth = kDefaultMaxDepth);

}  // namespace forge
