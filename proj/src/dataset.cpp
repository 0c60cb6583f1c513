// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "forge/render.hpp"

namespace forge {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kInputFile = "input.pfm";
constexpr const char* kReshadedFile = "reshaded.pfm";
constexpr const char* kDepthFile = "depth.pfm";
constexpr const char* kValidityFile = "validity.png";
constexpr const char* kMetaFile = "meta.json";
constexpr const char* kManifestFile = "manifest.json";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number()) {
        throw DatasetError(std::string(what) + ": expected an array of 3 numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Vec3 centroid(const Shape& shape) {
    if (const auto* s = std::get_if<Sphere>(&shape)) return s->center;
    if (const auto* q = std::get_if<Quad>(&shape)) return q->corner + 0.5 * (q->edge_u + q->edge_v);
    return std::get<Plane>(shape).point;
}

bool inside_solid(const SceneDescription& scene, const Vec3& p) {
    return std::any_of(scene.primitives.begin(), scene.primitives.end(), [&](const Primitive& prim) {
        const auto* s = std::get_if<Sphere>(&prim.shape);
        return s && length(p - s->center) <= s->radius;
    });
}

}  // namespace

void GenConfig::validate() const {
    if (pairs_per_scene < 0) throw DatasetError("pairs per scene must be non-negative");
    if (width < 1 || height < 1) throw DatasetError("resolution must be positive");
    if (spp < 1) throw DatasetError("spp must be positive");
    if (!(offset_radius.lo > 0.0 && offset_radius.lo <= offset_radius.hi)) {
        throw DatasetError("offset radius range must satisfy 0 < lo <= hi");
    }
    if (orbs.lo < 0 || orbs.hi < orbs.lo) throw DatasetError("orb count range must satisfy 0 <= lo <= hi");
    if (!(fov_deg.lo > 0.0 && fov_deg.lo <= fov_deg.hi && fov_deg.hi < 180.0)) {
        throw DatasetError("fov range must lie in (0, 180) degrees");
    }
    if (max_depth < 1) throw DatasetError("max depth must be positive");
}

bool DatasetExample::files_exist() const {
    return fs::exists(input) && fs::exists(reshaded) && fs::exists(depth) && fs::exists(validity) && fs::exists(meta);
}

std::string example_id(const std::string& scene_id, int pair_index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d", pair_index);
    return scene_id + "_" + buf;
}

Vec3 sample_novel_offset(Rng& rng, Range radius) {
    const double z = 1.0 - 2.0 * rng.uniform();
    const double phi = 2.0 * kPi * rng.uniform();
    const double r_xy = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double r = radius.lo == radius.hi ? radius.lo : rng.uniform(radius.lo, radius.hi);
    return Vec3(r_xy * std::cos(phi), r_xy * std::sin(phi), z) * r;
}

PinholeCamera sample_input_camera(const SceneDescription& scene, Rng& rng, int width, int height, Range fov_deg) {
    if (!scene.camera_box) throw DatasetError("scene has no camera_box for camera placement");
    const Bounds& box = *scene.camera_box;

    auto draw = [&](double lo, double hi) { return lo == hi ? lo : rng.uniform(lo, hi); };
    Vec3 position;
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementRetries && !placed; ++attempt) {
        const double x = draw(box.min.x, box.max.x);
        const double y = draw(box.min.y, box.max.y);
        const double z = draw(box.min.z, box.max.z);
        position = {x, y, z};
        placed = !inside_solid(scene, position);
    }
    if (!placed) throw DatasetError("could not place a camera outside the scene geometry");

    std::vector<Vec3> visible, all;
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        const Primitive& prim = scene.primitives[i];
        if (prim.is_emitter()) continue;
        const Vec3 target = centroid(prim.shape);
        const Vec3 delta = target - position;
        const double dist = length(delta);
        if (!(dist > 1e-9)) continue;
        all.push_back(target);
        const auto hit = intersect(scene, Ray{position, delta / dist, 0.0, kInfinity});
        if (!hit || hit->primitive == i || hit->t >= dist * (1.0 - 1e-6)) visible.push_back(target);
    }
    const auto& pool = visible.empty() ? all : visible;

    PinholeCamera cam;
    cam.position = position;
    if (pool.empty()) {
        const Bounds b = finite_bounds(scene);
        cam.look_at = b.empty() ? position + Vec3(0, 0, -1) : b.center();
        if (cam.look_at == position) cam.look_at = position + Vec3(0, 0, -1);
    } else {
        cam.look_at = pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
    }
    const Vec3 forward = normalize(cam.look_at - cam.position);
    cam.up = std::abs(forward.y) > 0.999 ? Vec3(0, 0, 1) : Vec3(0, 1, 0);
    cam.vertical_fov = deg_to_rad(draw(fov_deg.lo, fov_deg.hi));
    cam.width = width;
    cam.height = height;
    return canonical_camera(cam);
}

// JSON records ---------------------------------------------------------------

json camera_to_json(const PinholeCamera& c) {
    return {{"position", vec_to_json(c.position)},
            {"look_at", vec_to_json(c.look_at)},
            {"up", vec_to_json(c.up)},
            {"fov_deg", rad_to_deg(c.vertical_fov)},
            {"width", c.width},
            {"height", c.height}};
}

PinholeCamera camera_from_json(const json& j) {
    if (!j.is_object()) throw DatasetError("camera: expected an object");
    try {
        PinholeCamera c;
        c.position = vec_from_json(j.at("position"), "camera.position");
        c.look_at = vec_from_json(j.at("look_at"), "camera.look_at");
        c.up = j.contains("up") ? vec_from_json(j.at("up"), "camera.up") : Vec3(0, 1, 0);
        c.vertical_fov = deg_to_rad(j.at("fov_deg").get<double>());
        c.width = j.at("width").get<int>();
        c.height = j.at("height").get<int>();
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw DatasetError(std::string("camera: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DatasetError(e.what());
    }
}

PinholeCamera canonical_camera(const PinholeCamera& camera) {
    PinholeCamera c = camera;
    for (int i = 0; i < 8; ++i) {
        const PinholeCamera next = camera_from_json(camera_to_json(c));
        if (next == c) break;
        c = next;
    }
    return c;
}

json example_to_json(const DatasetExample& e) {
    return {{"example_id", e.example_id},
            {"scene_id", e.scene_id},
            {"camera", camera_to_json(e.camera)},
            {"novel_offset", vec_to_json(e.novel_offset)},
            {"spp", e.spp},
            {"seed", e.seed}};
}

DatasetExample example_from_json(const json& j, const fs::path& dir) {
    try {
        DatasetExample e;
        e.example_id = j.at("example_id").get<std::string>();
        e.scene_id = j.at("scene_id").get<std::string>();
        e.camera = camera_from_json(j.at("camera"));
        e.novel_offset = vec_from_json(j.at("novel_offset"), "novel_offset");
        e.spp = j.at("spp").get<int>();
        e.seed = j.at("seed").get<std::uint64_t>();
        e.input = dir / kInputFile;
        e.reshaded = dir / kReshadedFile;
        e.depth = dir / kDepthFile;
        e.validity = dir / kValidityFile;
        e.meta = dir / kMetaFile;
        return e;
    } catch (const json::exception& ex) {
        throw DatasetError(std::string("meta record: ") + ex.what());
    }
}

DatasetExample read_meta(const fs::path& example_dir) {
    std::ifstream in(example_dir / kMetaFile);
    if (!in) throw DatasetError("cannot open " + (example_dir / kMetaFile).string());
    try {
        return example_from_json(json::parse(in), example_dir);
    } catch (const json::parse_error& e) {
        throw DatasetError((example_dir / kMetaFile).string() + ": " + e.what());
    }
}

ExampleData load_example(const fs::path& example_dir) {
    const DatasetExample meta = read_meta(example_dir);
    ExampleData data;
    data.input_hdr = read_pfm(meta.input);
    data.reshaded_hdr = read_pfm(meta.reshaded);
    data.depth = read_pfm(meta.depth);
    data.validity = read_mask_png(meta.validity);
    data.novel_offset = meta.novel_offset;
    return data;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DatasetError("cannot write " + tmp.string());
        out << text;
        if (!out) throw DatasetError("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

// Generation -----------------------------------------------------------------

DatasetExample generate_example(const SceneDescription& scene, const std::string& scene_id, int pair_index,
                                const GenConfig& cfg, const fs::path& out_root, int render_threads) {
    cfg.validate();
    const std::string id = example_id(scene_id, pair_index);
    const std::uint64_t example_seed =
        hash_seed({cfg.seed, fnv1a(scene_id), static_cast<std::uint64_t>(pair_index)});

    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= kMaxValidityRetries; ++attempt) {
        const std::uint64_t seed = hash_seed({example_seed, static_cast<std::uint64_t>(attempt)});
        try {
            const SceneDescription randomized =
                add_random_orbs(randomize_materials(scene, hash_seed({seed, 1})), hash_seed({seed, 2}), cfg.orbs);
            validate_scene(randomized);

            Rng rng(seed, 3);
            const PinholeCamera camera = sample_input_camera(randomized, rng, cfg.width, cfg.height, cfg.fov_deg);
            const Vec3 offset = cfg.identity_offset ? Vec3{} : sample_novel_offset(rng, cfg.offset_radius);

            DatasetExample ex;
            ex.example_id = id;
            ex.scene_id = scene_id;
            ex.camera = camera;
            ex.novel_offset = offset;
            ex.spp = cfg.spp;
            ex.seed = seed;

            RenderOptions options;
            options.spp = cfg.spp;
            options.seed = hash_seed({seed, 4});
            options.max_depth = cfg.max_depth;
            options.threads = render_threads;
            const Vec3 novel = cfg.identity_offset ? camera.position : ex.novel_position();
            const RenderOutputs out = render(randomized, camera, novel, options);
            if (out.validity.count() == 0) {
                last_error = "validity mask has no valid pixel";
                continue;
            }

            const fs::path dir = out_root / id;
            fs::create_directories(dir);
            ex = example_from_json(example_to_json(ex), dir);
            write_pfm(out.input_hdr, ex.input);
            write_pfm(out.reshaded_hdr, ex.reshaded);
            write_pfm(out.depth, ex.depth);
            write_mask_png(out.validity, ex.validity);
            write_text_atomic(ex.meta, example_to_json(ex).dump(2) + "\n");
            return ex;
        } catch (const DatasetError& e) {
            last_error = e.what();
        } catch (const SceneError& e) {
            last_error = e.what();
        }
    }
    throw DatasetError("gave up after " + std::to_string(kMaxValidityRetries + 1) + " attempts: " + last_error);
}

std::vector<NamedScene> load_scene_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DatasetError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<NamedScene> scenes;
    for (const auto& f : files) scenes.push_back({f.stem().string(), load_scene(f)});
    return scenes;
}

DatasetSummary generate_dataset(const std::vector<NamedScene>& scenes, const GenConfig& cfg, const fs::path& out_root) {
    cfg.validate();
    fs::create_directories(out_root);
    const fs::path manifest_path = out_root / kManifestFile;

    std::map<std::string, DatasetExample> previous;
    if (fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        try {
            const json manifest = json::parse(in);
            for (const auto& rec : manifest) {
                const std::string id = rec.at("example_id").get<std::string>();
                previous.emplace(id, example_from_json(rec, out_root / id));
            }
        } catch (const std::exception&) {
            previous.clear();  // unreadable manifest: regenerate everything
        }
    }

    struct Job {
        std::size_t scene;
        int pair;
        std::string id;
    };
    std::vector<Job> plan;
    for (std::size_t s = 0; s < scenes.size(); ++s) {
        for (int p = 0; p < cfg.pairs_per_scene; ++p) plan.push_back({s, p, example_id(scenes[s].id, p)});
    }

    DatasetSummary summary;
    std::vector<std::optional<DatasetExample>> results(plan.size());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto it = previous.find(plan[i].id);
        if (it != previous.end() && it->second.files_exist()) {
            results[i] = it->second;
            ++summary.skipped;
        } else {
            todo.push_back(i);
        }
    }

    const unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                             : std::max(1u, std::thread::hardware_concurrency());
    const unsigned pool_size = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(todo.size())));
    const int render_threads = static_cast<int>(std::max(1u, workers / pool_size));

    std::vector<std::string> errors(plan.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < todo.size(); k = next.fetch_add(1)) {
            const Job& job = plan[todo[k]];
            try {
                results[todo[k]] =
                    generate_example(scenes[job.scene].scene, scenes[job.scene].id, job.pair, cfg, out_root, render_threads);
            } catch (const std::exception& e) {
                errors[todo[k]] = e.what();
            }
        }
    };
    if (pool_size <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < pool_size; ++t) pool.emplace_back(worker);
    }

    json manifest = json::array();
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (results[i]) {
            summary.examples.push_back(*results[i]);
            manifest.push_back(example_to_json(*results[i]));
        } else if (!errors[i].empty()) {
            summary.failed.push_back(plan[i].id + ": " + errors[i]);
        }
    }
    summary.generated = todo.size() - summary.failed.size();
    write_text_atomic(manifest_path, manifest.dump(2) + "\n");
    return summary;
}

}  // namespace forge
