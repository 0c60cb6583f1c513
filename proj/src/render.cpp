// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/render.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace forge {

Rng sample_rng(std::uint64_t seed, std::uint64_t pixel, std::uint64_t sample, Stream stream) {
    const auto id = static_cast<std::uint64_t>(stream);
    return Rng(hash_seed({seed, pixel, sample, id}), id);
}

namespace {

struct Tile {
    int x0, y0, x1, y1;
};

Rgb finite_or_black(const Rgb& c) { return is_finite(c) ? c : Rgb{}; }

class TileRenderer {
public:
    TileRenderer(const SceneDescription& scene, const PinholeCamera& camera, const Vec3& novel,
                 const RenderOptions& options, RenderOutputs& out)
        : tracer_(scene, options.max_depth), camera_(camera), novel_(novel), options_(options), out_(out) {}

    void render_tile(const Tile& tile) const {
        const auto spp = static_cast<std::size_t>(options_.spp);
        const double inv_spp = 1.0 / static_cast<double>(options_.spp);
        for (int y = tile.y0; y < tile.y1; ++y) {
            for (int x = tile.x0; x < tile.x1; ++x) {
                const auto pixel = static_cast<std::uint64_t>(y) * camera_.width + x;
                Rgb input_sum, reshaded_sum;
                bool valid = true;
                for (std::size_t s = 0; s < spp; ++s) {
                    Rng camera_rng = sample_rng(options_.seed, pixel, s, Stream::camera);
                    const double jx = camera_rng.uniform();
                    const double jy = camera_rng.uniform();
                    const Ray ray = camera_.generate_ray({x + jx, y + jy});

                    const auto hit = intersect(tracer_.scene(), ray);
                    if (!hit) {
                        const Rgb env = finite_or_black(tracer_.environment(ray.direction));
                        input_sum += env;
                        reshaded_sum += env;
                        if (options_.record_first_hits) out_.first_hits[pixel * spp + s] = {};
                        continue;
                    }
                    const Vec3 n = PathTracer::oriented_normal(*hit, ray);
                    const Vec3 w_novel = PathTracer::novel_direction(ray, hit->point, novel_);

                    const Rng shading_rng = sample_rng(options_.seed, pixel, s, Stream::shading);
                    Rng input_rng = shading_rng;
                    Rng reshaded_rng = shading_rng;
                    input_sum += finite_or_black(tracer_.shade(*hit, -ray.direction, n, input_rng));
                    reshaded_sum += finite_or_black(tracer_.shade(*hit, w_novel, n, reshaded_rng));
                    valid = valid && dot(n, w_novel) > 0.0;
                    if (options_.record_first_hits) out_.first_hits[pixel * spp + s] = {true, hit->point, n};
                }
                for (int c = 0; c < 3; ++c) {
                    out_.input_hdr.at(x, y, c) = static_cast<float>(input_sum[c] * inv_spp);
                    out_.reshaded_hdr.at(x, y, c) = static_cast<float>(reshaded_sum[c] * inv_spp);
                }
                out_.validity.set(x, y, valid);

                const Ray center = camera_.generate_ray({x + 0.5, y + 0.5});
                const auto center_hit = intersect(tracer_.scene(), center);
                out_.depth.at(x, y) = center_hit ? static_cast<float>(planar_depth(center_hit->point, camera_))
                                                 : std::numeric_limits<float>::infinity();
            }
        }
    }

private:
    PathTracer tracer_;
    const PinholeCamera& camera_;
    Vec3 novel_;
    const RenderOptions& options_;
    RenderOutputs& out_;
};

}  // namespace

RenderOutputs render(const SceneDescription& scene, const PinholeCamera& camera, const Vec3& novel_position,
                     const RenderOptions& options) {
    camera.validate();
    if (options.spp < 1) throw std::invalid_argument("render: spp must be >= 1");
    if (options.tile_size < 1) throw std::invalid_argument("render: tile size must be >= 1");
    if (!is_finite(novel_position)) throw std::invalid_argument("render: novel position must be finite");

    RenderOutputs out;
    out.input_hdr = Image(camera.width, camera.height, 3);
    out.reshaded_hdr = Image(camera.width, camera.height, 3);
    out.depth = Image(camera.width, camera.height, 1);
    out.validity = Mask(camera.width, camera.height, true);
    if (options.record_first_hits) {
        out.first_hits.resize(static_cast<std::size_t>(camera.width) * camera.height * options.spp);
    }

    std::vector<Tile> tiles;
    for (int y = 0; y < camera.height; y += options.tile_size) {
        for (int x = 0; x < camera.width; x += options.tile_size) {
            tiles.push_back({x, y, std::min(x + options.tile_size, camera.width),
                             std::min(y + options.tile_size, camera.height)});
        }
    }

    const TileRenderer renderer(scene, camera, novel_position, options, out);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < tiles.size(); i = next.fetch_add(1)) renderer.render_tile(tiles[i]);
    };

    unsigned threads = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(tiles.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return out;
}

}  // namespace forge
