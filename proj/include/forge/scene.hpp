// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "forge/image.hpp"
#include "forge/math.hpp"

namespace forge {

/// Raised for malformed or invalid scene documents. Syntax errors carry a
/// 1-based line/column; semantic errors leave them at 0.
class SceneError : public std::runtime_error {
public:
    SceneError(const std::string& what, int line = 0, int column = 0);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Materials ------------------------------------------------------------------

/// World-space procedural texture; replaces the material's base color.
struct Texture {
    enum class Kind { checker, value_noise };
    Kind kind = Kind::checker;
    double scale = 4.0;  // cells per meter
    Rgb color_a{0.2};
    Rgb color_b{0.8};

    Rgb eval(const Vec3& p) const;
    friend bool operator==(const Texture&, const Texture&) = default;
};

struct Lambertian {
    Rgb albedo{0.5};
    friend bool operator==(const Lambertian&, const Lambertian&) = default;
};

struct Mirror {
    Rgb reflectance{1.0};
    friend bool operator==(const Mirror&, const Mirror&) = default;
};

/// GGX microfacet conductor with Schlick Fresnel (F0 = reflectance).
/// The distribution width is alpha = roughness^2.
struct GgxConductor {
    static constexpr double kMinRoughness = 0.01;
    static constexpr double kMaxRoughness = 1.0;

    Rgb reflectance{0.9};
    double roughness = 0.3;
    friend bool operator==(const GgxConductor&, const GgxConductor&) = default;
};

struct Material {
    std::string name;
    std::variant<Lambertian, Mirror, GgxConductor> model;
    std::optional<Texture> texture;

    /// Albedo or reflectance at world point `p`, after texturing.
    Rgb base_color(const Vec3& p) const;
    bool is_delta() const { return std::holds_alternative<Mirror>(model); }

    friend bool operator==(const Material&, const Material&) = default;
};

// Geometry -------------------------------------------------------------------

struct Sphere {
    Vec3 center;
    double radius = 1.0;
    friend bool operator==(const Sphere&, const Sphere&) = default;
};

/// Parallelogram corner + s*edge_u + t*edge_v, s,t in [0,1].
struct Quad {
    Vec3 corner;
    Vec3 edge_u{1, 0, 0};
    Vec3 edge_v{0, 1, 0};
    friend bool operator==(const Quad&, const Quad&) = default;
};

struct Plane {
    Vec3 point;
    Vec3 normal{0, 1, 0};
    friend bool operator==(const Plane&, const Plane&) = default;
};

using Shape = std::variant<Sphere, Quad, Plane>;

struct Primitive {
    Shape shape;
    std::size_t material = 0;
    Rgb emission;  // W sr^-1 m^-2; black for non-emitters

    bool is_emitter() const { return !emission.is_black(); }
    friend bool operator==(const Primitive&, const Primitive&) = default;
};

// Lighting -------------------------------------------------------------------

struct ConstantEnvironment {
    Rgb radiance;
    friend bool operator==(const ConstantEnvironment&, const ConstantEnvironment&) = default;
};

/// Equirectangular HDR map. +y is up; u = 0.5 looks down -z before rotation.
struct LatLongEnvironment {
    std::string image_path;  // as written in the document
    double rotation = 0.0;   // radians about +y
    std::shared_ptr<const Image> image;

    friend bool operator==(const LatLongEnvironment& a, const LatLongEnvironment& b) {
        return a.image_path == b.image_path && a.rotation == b.rotation;
    }
};

struct EnvironmentLight {
    std::variant<ConstantEnvironment, LatLongEnvironment> model;

    /// Radiance arriving from direction `dir` (unit, pointing away from the scene).
    Rgb radiance(const Vec3& dir) const;
    bool is_black() const;

    friend bool operator==(const EnvironmentLight&, const EnvironmentLight&) = default;
};

struct Bounds {
    Vec3 min{kInfinity, kInfinity, kInfinity};
    Vec3 max{-kInfinity, -kInfinity, -kInfinity};

    bool empty() const { return min.x > max.x || min.y > max.y || min.z > max.z; }
    void extend(const Vec3& p) { min = forge::min(min, p); max = forge::max(max, p); }
    Vec3 center() const { return 0.5 * (min + max); }
    double radius() const { return 0.5 * length(max - min); }
    bool contains(const Vec3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
    }
    friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct SceneDescription {
    std::vector<Material> materials;
    std::vector<Primitive> primitives;
    EnvironmentLight environment{ConstantEnvironment{}};
    /// Region where dataset generation may place input cameras.
    std::optional<Bounds> camera_box;

    std::vector<std::size_t> emitter_indices() const;

    friend bool operator==(const SceneDescription&, const SceneDescription&) = default;
};

/// Bounds of all finite primitives (planes excluded).
Bounds finite_bounds(const SceneDescription& scene);

/// Throws SceneError on any broken invariant.
void validate_scene(const SceneDescription& scene);

/// Parses and validates a scene document. Relative environment image paths
/// resolve against `base_dir`.
SceneDescription parse_scene(std::string_view text, const std::filesystem::path& base_dir = {});
SceneDescription load_scene(const std::filesystem::path& path);

/// Canonical JSON form; parse_scene(serialize_scene(s)) == s.
std::string serialize_scene(const SceneDescription& scene);

/// Re-draws every material not used by an emitter. Pure in (scene, seed).
SceneDescription randomize_materials(const SceneDescription& scene, std::uint64_t seed);

struct OrbCount {
    int lo = 0;
    int hi = 0;
};

/// Appends k ~ U{lo..hi} small emissive spheres inside the finite scene bounds.
SceneDescription add_random_orbs(const SceneDescription& scene, std::uint64_t seed, OrbCount count);

}  // namespace forge
