// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "forge/camera.hpp"
#include "forge/integrator.hpp"
#include "forge/rng.hpp"
#include "forge/scene.hpp"
#include "forge/signal.hpp"

namespace forge {

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GenConfig {
    int pairs_per_scene = 200;
    int width = 256;
    int height = 256;
    int spp = 256;
    Range offset_radius{0.1, 0.3};
    OrbCount orbs{1, 4};
    Range fov_deg{40.0, 70.0};
    std::uint64_t seed = 0;
    int max_depth = kDefaultMaxDepth;
    /// Debug: render with a zero novel offset.
    bool identity_offset = false;
    /// Parallel example workers; 0 picks std::thread::hardware_concurrency().
    /// Never affects the output bytes.
    int workers = 0;

    void validate() const;
};

inline constexpr int kMaxValidityRetries = 10;
inline constexpr int kMaxPlacementRetries = 16;

struct DatasetExample {
    std::string example_id;
    std::string scene_id;
    std::filesystem::path input;
    std::filesystem::path reshaded;
    std::filesystem::path depth;
    std::filesystem::path validity;
    std::filesystem::path meta;
    PinholeCamera camera;
    Vec3 novel_offset;  // c' - c in (right, up, -forward) axes of the input camera
    int spp = 0;
    std::uint64_t seed = 0;

    Vec3 novel_position() const { return camera.position + camera.from_camera_axes(novel_offset); }
    bool files_exist() const;

    friend bool operator==(const DatasetExample&, const DatasetExample&) = default;
};

/// Direction uniform on the sphere, radius uniform in `radius`.
Vec3 sample_novel_offset(Rng& rng, Range radius = {0.1, 0.3});

/// Position uniform in the scene's camera box, aimed at the centroid of a
/// uniformly chosen visible non-emissive primitive, fov uniform in `fov_deg`.
PinholeCamera sample_input_camera(const SceneDescription& scene, Rng& rng, int width, int height,
                                  Range fov_deg = {40.0, 70.0});

/// Randomizes, places cameras, renders, and writes the example to
/// `out_root / example_id`. Resamples (up to kMaxValidityRetries times) when
/// the validity mask has no valid pixel.
DatasetExample generate_example(const SceneDescription& scene, const std::string& scene_id, int pair_index,
                                const GenConfig& cfg, const std::filesystem::path& out_root, int render_threads = 1);

struct NamedScene {
    std::string id;
    SceneDescription scene;
};

/// Every *.json scene in `dir`, sorted by file name; the id is the file stem.
std::vector<NamedScene> load_scene_dir(const std::filesystem::path& dir);

struct DatasetSummary {
    std::vector<DatasetExample> examples;  // manifest order
    std::size_t generated = 0;
    std::size_t skipped = 0;
    std::vector<std::string> failed;  // "<example_id>: <reason>"
};

/// Generates every (scene, pair) example not already complete according to
/// `out_root/manifest.json`, then rewrites the manifest.
DatasetSummary generate_dataset(const std::vector<NamedScene>& scenes, const GenConfig& cfg,
                                const std::filesystem::path& out_root);

std::string example_id(const std::string& scene_id, int pair_index);

// meta.json / manifest.json records.
nlohmann::json camera_to_json(const PinholeCamera& camera);
PinholeCamera camera_from_json(const nlohmann::json& j);
nlohmann::json example_to_json(const DatasetExample& example);
/// File paths resolve inside `dir`.
DatasetExample example_from_json(const nlohmann::json& j, const std::filesystem::path& dir);
DatasetExample read_meta(const std::filesystem::path& example_dir);

/// Camera whose JSON round trip is exact (fov is stored in degrees).
PinholeCamera canonical_camera(const PinholeCamera& camera);

/// Images and novel offset of a generated example.
ExampleData load_example(const std::filesystem::path& example_dir);

/// Writes `text` to `path` through a temporary file and a rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace forge
