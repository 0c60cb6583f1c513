// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

// forge: render reshading datasets and inspect their AOVs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "forge/dataset.hpp"
#include "forge/image.hpp"
#include "forge/render.hpp"
#include "forge/scene.hpp"
#include "forge/signal.hpp"
#include "forge/warp.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::vector<double> parse_list(const std::string& text, char sep, std::size_t count, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "cannot parse '" + text + "'");
        }
    }
    if (values.size() != count) throw CLI::ValidationError(what, "expected " + std::to_string(count) + " values");
    return values;
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return json::parse(in);
}

int cmd_validate(const std::string& scene_path) {
    const auto scene = forge::load_scene(scene_path);
    std::cout << "ok: " << scene.materials.size() << " materials, " << scene.primitives.size() << " primitives, "
              << scene.emitter_indices().size() << " emitters\n";
    return 0;
}

struct RenderArgs {
    std::string scene, camera, novel = "0,0,0", out;
    int spp = 16;
    std::uint64_t seed = 0;
    int threads = 0;
    int max_depth = forge::kDefaultMaxDepth;
};

int cmd_render(const RenderArgs& a) {
    const auto scene = forge::load_scene(a.scene);
    const auto camera = forge::canonical_camera(forge::camera_from_json(read_json(a.camera)));
    const auto n = parse_list(a.novel, ',', 3, "--novel");

    forge::DatasetExample ex;
    ex.example_id = "render";
    ex.scene_id = fs::path(a.scene).stem().string();
    ex.camera = camera;
    ex.novel_offset = {n[0], n[1], n[2]};
    ex.spp = a.spp;
    ex.seed = a.seed;

    forge::RenderOptions options;
    options.spp = a.spp;
    options.seed = a.seed;
    options.threads = a.threads;
    options.max_depth = a.max_depth;
    const forge::Vec3 novel = ex.novel_offset == forge::Vec3{} ? camera.position : ex.novel_position();
    const auto out = forge::render(scene, camera, novel, options);

    fs::create_directories(a.out);
    ex = forge::example_from_json(forge::example_to_json(ex), a.out);
    forge::write_pfm(out.input_hdr, ex.input);
    forge::write_pfm(out.reshaded_hdr, ex.reshaded);
    forge::write_pfm(out.depth, ex.depth);
    forge::write_mask_png(out.validity, ex.validity);
    forge::write_text_atomic(ex.meta, forge::example_to_json(ex).dump(2) + "\n");
    std::cout << "wrote " << a.out << " (" << out.validity.count() << "/" << out.validity.pixel_count()
              << " valid pixels)\n";
    return 0;
}

struct DatasetArgs {
    std::string scenes, out, res = "256x256";
    int pairs = 200;
    int spp = 256;
    std::uint64_t seed = 0;
    double radius_min = 0.1, radius_max = 0.3;
    std::string orbs = "1,4";
    int workers = 0;
    bool identity = false;
};

int cmd_dataset(const DatasetArgs& a) {
    forge::GenConfig cfg;
    const auto res = parse_list(a.res, 'x', 2, "--res");
    const auto orbs = parse_list(a.orbs, ',', 2, "--orbs");
    cfg.pairs_per_scene = a.pairs;
    cfg.width = static_cast<int>(res[0]);
    cfg.height = static_cast<int>(res[1]);
    cfg.spp = a.spp;
    cfg.seed = a.seed;
    cfg.offset_radius = {a.radius_min, a.radius_max};
    cfg.orbs = {static_cast<int>(orbs[0]), static_cast<int>(orbs[1])};
    cfg.workers = a.workers;
    cfg.identity_offset = a.identity;

    const auto scenes = forge::load_scene_dir(a.scenes);
    const auto summary = forge::generate_dataset(scenes, cfg, a.out);
    std::cout << "examples: " << summary.examples.size() << " (generated " << summary.generated << ", skipped "
              << summary.skipped << ")\n";
    for (const auto& f : summary.failed) std::cerr << "failed: " << f << "\n";
    return summary.failed.empty() ? 0 : 1;
}

int cmd_encode(const std::string& depth_path, const std::string& out_path) {
    const auto depth = forge::read_pfm(depth_path);
    const auto encoded = forge::frequency_encode(forge::depth_to_disparity(depth));
    forge::write_pfm(encoded.stacked(), out_path);
    std::cout << "wrote " << out_path << " (" << encoded.width() << "x" << encoded.height() << "x"
              << forge::kEncodedChannels << ", planes stacked vertically)\n";
    return 0;
}

int cmd_metrics(const std::string& a_path, const std::string& b_path, const std::string& mask_path) {
    const auto a = forge::clamp01(forge::read_pfm(a_path));
    const auto b = forge::clamp01(forge::read_pfm(b_path));
    const auto mask = mask_path.empty() ? forge::Mask(a.width(), a.height(), true) : forge::read_mask_png(mask_path);
    const json result = {{"psnr", forge::psnr(a, b)}, {"masked_l1", forge::masked_l1(a, b, mask)}};
    std::cout << result.dump() << "\n";
    return 0;
}

forge::CameraPair read_pose(const fs::path& path) {
    const json pose = read_json(path);
    if (pose.contains("input") && pose.contains("novel")) {
        return {forge::camera_from_json(pose.at("input")), forge::camera_from_json(pose.at("novel"))};
    }
    if (pose.contains("camera") && pose.contains("novel_offset")) {
        const auto cam = forge::camera_from_json(pose.at("camera"));
        const auto& o = pose.at("novel_offset");
        return {cam, cam.translated({o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>()})};
    }
    throw std::runtime_error(path.string() + ": expected {input, novel} cameras or {camera, novel_offset}");
}

int cmd_warp(const std::string& image_path, const std::string& depth_path, const std::string& pose_path, bool fill,
             const std::string& out_dir) {
    const auto image = forge::read_pfm(image_path);
    const auto depth = forge::read_pfm(depth_path);
    const auto pair = read_pose(pose_path);
    forge::WarpOptions options;
    options.fill = fill;
    const auto result = forge::forward_warp(image, depth, pair, options);
    fs::create_directories(out_dir);
    forge::write_pfm(result.warped, fs::path(out_dir) / "warped.pfm");
    forge::write_mask_png(result.holes, fs::path(out_dir) / "holes.png");
    std::cout << "wrote " << out_dir << " (" << result.holes.count() << " hole pixels)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forge: reshading-aware path tracer and dataset tools"};
    app.require_subcommand(1);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Parse and validate a scene file");
    validate->add_option("scene", validate_path, "Scene JSON")->required();

    RenderArgs ra;
    auto* render = app.add_subcommand("render", "Render input/reshaded/depth/validity AOVs");
    render->add_option("--scene", ra.scene, "Scene JSON")->required();
    render->add_option("--camera", ra.camera, "Camera JSON {position, look_at, up, fov_deg, width, height}")
        ->required();
    render->add_option("--novel", ra.novel, "Novel camera offset dx,dy,dz in input-camera axes (right, up, back)");
    render->add_option("--spp", ra.spp, "Samples per pixel");
    render->add_option("--seed", ra.seed, "Seed");
    render->add_option("--threads", ra.threads, "Worker threads (0 = all cores)");
    render->add_option("--max-depth", ra.max_depth, "Maximum path depth");
    render->add_option("--out", ra.out, "Output directory")->required();

    DatasetArgs da;
    auto* dataset = app.add_subcommand("dataset", "Generate a dataset of reshading examples");
    dataset->add_option("--scenes", da.scenes, "Directory of scene JSON files")->required();
    dataset->add_option("--out", da.out, "Output directory")->required();
    dataset->add_option("--pairs", da.pairs, "Pairs per scene");
    dataset->add_option("--res", da.res, "Resolution WxH");
    dataset->add_option("--spp", da.spp, "Samples per pixel");
    dataset->add_option("--seed", da.seed, "Master seed");
    dataset->add_option("--radius-min", da.radius_min, "Minimum novel-camera offset radius");
    dataset->add_option("--radius-max", da.radius_max, "Maximum novel-camera offset radius");
    dataset->add_option("--orbs", da.orbs, "Random orb count range lo,hi");
    dataset->add_option("--workers", da.workers, "Parallel workers (0 = all cores)");
    dataset->add_flag("--identity-offset", da.identity, "Debug: zero novel offset");

    std::string encode_depth, encode_out;
    auto* encode = app.add_subcommand("encode", "Depth to frequency-encoded disparity (11 planes stacked in one PFM)");
    encode->add_option("--depth", encode_depth, "Depth PFM")->required();
    encode->add_option("--out", encode_out, "Output PFM")->required();

    std::string metric_a, metric_b, metric_mask;
    auto* metrics = app.add_subcommand("metrics", "PSNR and masked L1 between two images (clamped to [0,1])");
    metrics->add_option("--a", metric_a, "First PFM")->required();
    metrics->add_option("--b", metric_b, "Second PFM")->required();
    metrics->add_option("--mask", metric_mask, "Validity PNG");

    std::string warp_image, warp_depth, warp_pose, warp_out;
    bool warp_fill = false;
    auto* warp = app.add_subcommand("warp", "Forward-warp an image to a novel camera using depth");
    warp->add_option("--image", warp_image, "Image PFM")->required();
    warp->add_option("--depth", warp_depth, "Depth PFM")->required();
    warp->add_option("--pose", warp_pose, "Pose JSON: {input, novel} cameras or a meta.json")->required();
    warp->add_flag("--fill", warp_fill, "Fill holes by neighbor diffusion");
    warp->add_option("--out", warp_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return cmd_validate(validate_path);
        if (*render) return cmd_render(ra);
        if (*dataset) return cmd_dataset(da);
        if (*encode) return cmd_encode(encode_depth, encode_out);
        if (*metrics) return cmd_metrics(metric_a, metric_b, metric_mask);
        if (*warp) return cmd_warp(warp_image, warp_depth, warp_pose, warp_fill, warp_out);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
