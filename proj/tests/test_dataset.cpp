// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>

#include "forge/dataset.hpp"
#include "forge/image.hpp"
#include "test_scenes.hpp"

namespace forge {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "forge_dataset_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

GenConfig small_config() {
    GenConfig cfg;
    cfg.pairs_per_scene = 1;
    cfg.width = cfg.height = 32;
    cfg.spp = 2;
    cfg.seed = 11;
    cfg.workers = 1;
    return cfg;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

TEST(NovelOffset, RadiusWithinRange) {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double r = length(sample_novel_offset(rng));
        EXPECT_GE(r, 0.1 - 1e-12);
        EXPECT_LE(r, 0.3 + 1e-12);
    }
}

TEST(NovelOffset, DeterministicInRngState) {
    Rng a(5), b(5);
    EXPECT_EQ(sample_novel_offset(a), sample_novel_offset(b));
}

TEST(NovelOffset, DirectionsAreIsotropic) {
    Rng rng(6);
    Vec3 mean;
    const int n = 100000;
    for (int i = 0; i < n; ++i) mean += normalize(sample_novel_offset(rng));
    EXPECT_LT(length(mean / n), 0.01);
}

TEST(InputCamera, ZeroExtentBoxPinsPosition) {
    auto scene = testing::diffuse_room();
    scene.camera_box = Bounds{{0.2, 1.0, 1.5}, {0.2, 1.0, 1.5}};
    Rng rng(3);
    EXPECT_EQ(sample_input_camera(scene, rng, 16, 16).position, Vec3(0.2, 1.0, 1.5));
}

TEST(InputCamera, DeterministicAndInsideBox) {
    const auto scene = testing::diffuse_room();
    Rng a(9), b(9);
    EXPECT_EQ(sample_input_camera(scene, a, 16, 16), sample_input_camera(scene, b, 16, 16));
    Rng rng(10);
    for (int i = 0; i < 1000; ++i) {
        const auto cam = sample_input_camera(scene, rng, 16, 16);
        EXPECT_TRUE(scene.camera_box->contains(cam.position));
        EXPECT_NO_THROW(cam.validate());
        EXPECT_GE(cam.vertical_fov, 40.0 * kPi / 180.0 - 1e-12);
        EXPECT_LE(cam.vertical_fov, 70.0 * kPi / 180.0 + 1e-12);
    }
}

TEST(InputCamera, AvoidsSphereInteriorsAndNeedsBox) {
    auto scene = testing::diffuse_room();
    scene.camera_box = Bounds{{-0.6, 0.3, -0.9}, {-0.4, 0.5, -0.7}};  // inside the red sphere
    Rng rng(1);
    EXPECT_THROW(sample_input_camera(scene, rng, 16, 16), DatasetError);
    scene.camera_box.reset();
    EXPECT_THROW(sample_input_camera(scene, rng, 16, 16), DatasetError);
}

TEST(CameraJson, RoundTripIsExactForCanonicalCameras) {
    Rng rng(4);
    const auto scene = testing::diffuse_room();
    for (int i = 0; i < 100; ++i) {
        const auto cam = sample_input_camera(scene, rng, 20, 10);
        EXPECT_EQ(camera_from_json(camera_to_json(cam)), cam);
    }
    EXPECT_THROW(camera_from_json(nlohmann::json{{"position", {0, 0}}}), DatasetError);
}

TEST(GenerateExample, WritesFilesAndMetaRoundTrips) {
    const auto dir = fresh_dir("example");
    GenConfig cfg = small_config();
    cfg.width = cfg.height = 64;
    cfg.spp = 4;
    const auto ex = generate_example(testing::diffuse_room(), "room", 0, cfg, dir);
    EXPECT_EQ(ex.example_id, "room_0000");
    EXPECT_TRUE(ex.files_exist());
    EXPECT_EQ(read_meta(dir / "room_0000"), ex);
    const double r = length(ex.novel_offset);
    EXPECT_GE(r, 0.1 - 1e-12);
    EXPECT_LE(r, 0.3 + 1e-12);

    const auto meta = read_json(ex.meta);
    for (const char* key : {"example_id", "scene_id", "camera", "novel_offset", "spp", "seed"}) {
        EXPECT_TRUE(meta.contains(key)) << key;
    }
    for (const char* key : {"position", "look_at", "up", "fov_deg", "width", "height"}) {
        EXPECT_TRUE(meta["camera"].contains(key)) << key;
    }
    const auto data = load_example(dir / "room_0000");
    EXPECT_EQ(data.input_hdr.width(), 64);
    EXPECT_EQ(data.input_hdr.channels(), 3);
    EXPECT_EQ(data.depth.channels(), 1);
    EXPECT_GT(data.validity.count(), 0u);
}

TEST(GenerateExample, SameSeedGivesSameBytes) {
    const auto a = fresh_dir("repeat_a"), b = fresh_dir("repeat_b");
    const auto cfg = small_config();
    const auto ea = generate_example(testing::diffuse_room(), "room", 3, cfg, a);
    const auto eb = generate_example(testing::diffuse_room(), "room", 3, cfg, b, 4);
    for (const char* f : {"input.pfm", "reshaded.pfm", "depth.pfm", "validity.png", "meta.json"}) {
        std::ifstream fa(a / "room_0003" / f, std::ios::binary), fb(b / "room_0003" / f, std::ios::binary);
        const std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
        EXPECT_EQ(sa, sb) << f;
    }
    EXPECT_EQ(ea.seed, eb.seed);
}

TEST(GenerateExample, IdentityOffsetRendersEqualImages) {
    const auto dir = fresh_dir("identity");
    auto cfg = small_config();
    cfg.identity_offset = true;
    const auto ex = generate_example(load_scene(testing::scenes_dir() / "glossy_spheres.json"), "glossy", 0, cfg, dir);
    EXPECT_EQ(ex.novel_offset, Vec3());
    EXPECT_EQ(read_pfm(ex.input), read_pfm(ex.reshaded));
    EXPECT_TRUE(read_mask_png(ex.validity).all());
}

TEST(GenerateDataset, CountsResumesAndWritesManifest) {
    const auto dir = fresh_dir("dataset");
    auto cfg = small_config();
    cfg.pairs_per_scene = 3;
    const std::vector<NamedScene> scenes{{"a", testing::diffuse_room()},
                                         {"b", load_scene(testing::scenes_dir() / "mirror_floor.json")}};
    const auto first = generate_dataset(scenes, cfg, dir);
    EXPECT_TRUE(first.failed.empty());
    EXPECT_EQ(first.generated, 6u);
    EXPECT_EQ(first.examples.size(), 6u);

    const auto manifest = read_json(dir / "manifest.json");
    ASSERT_TRUE(manifest.is_array());
    ASSERT_EQ(manifest.size(), 6u);
    EXPECT_EQ(manifest[0]["example_id"], "a_0000");
    EXPECT_EQ(manifest[5]["example_id"], "b_0002");
    for (const auto& rec : manifest) {
        const auto ex = example_from_json(rec, dir / rec["example_id"].get<std::string>());
        EXPECT_EQ(ex, read_meta(dir / ex.example_id));
        EXPECT_GT(read_mask_png(ex.validity).count(), 0u);
    }

    const auto before = fs::last_write_time(dir / "a_0001" / "input.pfm");
    fs::remove(dir / "b_0001" / "reshaded.pfm");
    const auto second = generate_dataset(scenes, cfg, dir);
    EXPECT_EQ(second.generated, 1u);
    EXPECT_EQ(second.skipped, 5u);
    EXPECT_TRUE(fs::exists(dir / "b_0001" / "reshaded.pfm"));
    EXPECT_EQ(fs::last_write_time(dir / "a_0001" / "input.pfm"), before);
    EXPECT_EQ(read_json(dir / "manifest.json"), manifest);
}

TEST(GenerateDataset, EmptySceneListGivesEmptyManifest) {
    const auto dir = fresh_dir("empty");
    const auto summary = generate_dataset({}, small_config(), dir);
    EXPECT_TRUE(summary.examples.empty());
    EXPECT_TRUE(summary.failed.empty());
    EXPECT_EQ(read_json(dir / "manifest.json"), nlohmann::json::array());
}

TEST(GenerateDataset, FailuresAreReportedPerExample) {
    const auto dir = fresh_dir("failing");
    auto no_box = testing::diffuse_room();
    no_box.camera_box.reset();
    auto cfg = small_config();
    cfg.pairs_per_scene = 2;
    const auto summary = generate_dataset({{"ok", testing::diffuse_room()}, {"bad", no_box}}, cfg, dir);
    EXPECT_EQ(summary.examples.size(), 2u);
    ASSERT_EQ(summary.failed.size(), 2u);
    EXPECT_EQ(summary.failed[0].rfind("bad_0000", 0), 0u);
    EXPECT_EQ(read_json(dir / "manifest.json").size(), 2u);
}

TEST(GenConfig, ValidateRejectsBadRanges) {
    auto cfg = small_config();
    EXPECT_NO_THROW(cfg.validate());
    cfg.offset_radius = {0.3, 0.1};
    EXPECT_THROW(cfg.validate(), DatasetError);
    cfg = small_config();
    cfg.spp = 0;
    EXPECT_THROW(cfg.validate(), DatasetError);
    cfg = small_config();
    cfg.orbs = {2, 1};
    EXPECT_THROW(cfg.validate(), DatasetError);
}

TEST(SceneDir, LoadsSortedByStem) {
    const auto scenes = load_scene_dir(testing::scenes_dir());
    ASSERT_EQ(scenes.size(), 3u);
    EXPECT_EQ(scenes[0].id, "diffuse_room");
    EXPECT_EQ(scenes[2].id, "mirror_floor");
}

}  // namespace
}  // namespace forge
