// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/integrator.hpp"

namespace forge {

namespace {

double balance(double a, double b) { return a / (a + b); }

// 1 - cos(theta_max) for a sphere of radius r seen from distance d > r,
// written to avoid cancellation for small spheres.
double one_minus_cos_cone(double r, double d) {
    const double s = (r * r) / (d * d);
    return s / (1.0 + std::sqrt(std::max(0.0, 1.0 - s)));
}

}  // namespace

PathTracer::PathTracer(const SceneDescription& scene, int max_depth)
    : scene_(scene), max_depth_(max_depth), light_index_of_primitive_(scene.primitives.size(), -1) {
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        if (!scene.primitives[i].is_emitter()) continue;
        light_index_of_primitive_[i] = static_cast<std::ptrdiff_t>(lights_.size());
        lights_.push_back(i);
    }
    if (!scene.environment.is_black()) {
        environment_light_ = lights_.size();
        lights_.push_back(kEnvironment);
    }
}

Vec3 PathTracer::oriented_normal(const Hit& hit, const Ray& ray) {
    return dot(hit.normal, ray.direction) > 0.0 ? -hit.normal : hit.normal;
}

Vec3 PathTracer::novel_direction(const Ray& input_ray, const Vec3& point, const Vec3& novel_position) {
    if (novel_position == input_ray.origin) return -input_ray.direction;
    const Vec3 to_novel = novel_position - point;
    const double len = length(to_novel);
    if (!(len > 0.0)) return -input_ray.direction;
    return to_novel / len;
}

std::optional<std::size_t> PathTracer::light_of_primitive(std::size_t primitive) const {
    const std::ptrdiff_t idx = light_index_of_primitive_[primitive];
    if (idx < 0) return std::nullopt;
    return static_cast<std::size_t>(idx);
}

Rgb PathTracer::emitted(const Hit& hit, const Vec3& w_out) const {
    if (hit.emitted.is_black()) return {};
    // Spheres emit from their outer surface only; quads from both sides.
    if (std::holds_alternative<Sphere>(scene_.primitives[hit.primitive].shape) && dot(hit.normal, w_out) <= 0.0) {
        return {};
    }
    return hit.emitted;
}

LightSample PathTracer::sample_light(std::size_t light, const Vec3& point, Sample2 u) const {
    LightSample ls;
    const std::size_t prim_index = lights_[light];
    if (prim_index == kEnvironment) {
        const double z = 1.0 - 2.0 * u.u0;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = 2.0 * kPi * u.u1;
        ls.w_in = {r * std::cos(phi), r * std::sin(phi), z};
        ls.radiance = environment(ls.w_in);
        ls.pdf = 1.0 / (4.0 * kPi);
        return ls;
    }

    const Primitive& prim = scene_.primitives[prim_index];
    if (const auto* s = std::get_if<Sphere>(&prim.shape)) {
        const Vec3 to_center = s->center - point;
        const double d = length(to_center);
        if (d <= s->radius) return ls;
        const double cone = one_minus_cos_cone(s->radius, d);
        const double cos_theta = 1.0 - u.u0 * cone;
        const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
        const double phi = 2.0 * kPi * u.u1;
        const Frame frame(to_center / d);
        ls.w_in = normalize(frame.to_world({sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta}));
        const Ray probe{point, ls.w_in, 0.0, kInfinity};
        // Grazing samples can miss by roundoff; fall back to the tangent distance.
        ls.distance = intersect_shape(prim.shape, probe).value_or(d * cos_theta);
        ls.radiance = prim.emission;
        ls.pdf = 1.0 / (2.0 * kPi * cone);
        return ls;
    }

    const auto& q = std::get<Quad>(prim.shape);
    const Vec3 target = q.corner + q.edge_u * u.u0 + q.edge_v * u.u1;
    const Vec3 delta = target - point;
    const double dist2 = dot(delta, delta);
    if (!(dist2 > 0.0)) return ls;
    ls.distance = std::sqrt(dist2);
    ls.w_in = delta / ls.distance;
    const Vec3 n = cross(q.edge_u, q.edge_v);
    const double area = length(n);
    const double cos_light = std::abs(dot(n, ls.w_in)) / area;
    if (cos_light <= 0.0) return ls;
    ls.radiance = prim.emission;
    ls.pdf = dist2 / (area * cos_light);
    return ls;
}

double PathTracer::light_pdf(std::size_t light, const Vec3& point, const Vec3& dir,
                             const std::optional<Hit>& hit) const {
    const std::size_t prim_index = lights_[light];
    if (prim_index == kEnvironment) return hit ? 0.0 : 1.0 / (4.0 * kPi);
    if (!hit || hit->primitive != prim_index) return 0.0;
    const Primitive& prim = scene_.primitives[prim_index];
    if (const auto* s = std::get_if<Sphere>(&prim.shape)) {
        const double d = length(s->center - point);
        if (d <= s->radius) return 0.0;
        return 1.0 / (2.0 * kPi * one_minus_cos_cone(s->radius, d));
    }
    const auto& q = std::get<Quad>(prim.shape);
    const Vec3 n = cross(q.edge_u, q.edge_v);
    const double area = length(n);
    const double cos_light = std::abs(dot(n, dir)) / area;
    if (cos_light <= 0.0) return 0.0;
    return hit->t * hit->t / (area * cos_light);
}

bool PathTracer::visible(std::size_t light, const Vec3& origin, const Vec3& dir) const {
    const Ray shadow{origin, dir, 0.0, kInfinity};
    if (lights_[light] == kEnvironment) return !occluded(scene_, shadow);
    // Compare identities rather than distances: near grazing angles the
    // sphere distance is too ill-conditioned for an epsilon test.
    const auto blocker = intersect(scene_, shadow);
    return blocker && blocker->primitive == lights_[light];
}

Rgb PathTracer::shade(const Hit& first, const Vec3& w_out, const Vec3& normal, Rng& rng) const {
    Rgb result;
    Rgb throughput(1.0);
    Hit hit = first;
    Vec3 wo = w_out;
    Vec3 n = normal;
    bool specular_bounce = true;  // camera vertex: emission is counted unweighted
    double prev_bsdf_pdf = 0.0;
    Vec3 prev_point;
    const double light_count = static_cast<double>(lights_.size());

    for (int depth = 0;; ++depth) {
        const Rgb le = emitted(hit, wo);
        if (!le.is_black()) {
            if (specular_bounce) {
                result += throughput * le;
            } else if (const auto light = light_of_primitive(hit.primitive)) {
                const double pl = light_pdf(*light, prev_point, -wo, hit) / light_count;
                result += throughput * le * balance(prev_bsdf_pdf, pl);
            }
        }
        if (depth >= max_depth_) break;
        if (dot(n, wo) <= 0.0) break;

        const Material& material = scene_.materials[hit.material];

        // Next-event estimation.
        if (!material.is_delta() && !lights_.empty()) {
            const double pick = rng.uniform();
            const Sample2 u{rng.uniform(), rng.uniform()};
            const auto light = std::min(static_cast<std::size_t>(pick * light_count), lights_.size() - 1);
            const LightSample ls = sample_light(light, hit.point, u);
            if (ls.pdf > 0.0 && !ls.radiance.is_black()) {
                const double cos_i = dot(n, ls.w_in);
                const Rgb f = eval_bsdf(material, wo, ls.w_in, n, hit.point);
                if (cos_i > 0.0 && !f.is_black()) {
                    if (visible(light, offset_origin(hit.point, n, ls.w_in), ls.w_in)) {
                        const double pl = ls.pdf / light_count;
                        const double pb = pdf_bsdf(material, wo, ls.w_in, n);
                        result += throughput * f * ls.radiance * (cos_i * balance(pl, pb) / pl);
                    }
                }
            }
        }

        // BSDF continuation.
        const Sample2 u{rng.uniform(), rng.uniform()};
        const auto bs = sample_bsdf(material, wo, n, u, hit.point);
        if (!bs) break;
        throughput *= bs->weight;
        if (throughput.is_black()) break;

        if (depth >= kRouletteDepth) {
            const double survive = std::clamp(throughput.max_component(), 0.1, 0.95);
            if (rng.uniform() >= survive) break;
            throughput *= 1.0 / survive;
        }

        const Ray next{offset_origin(hit.point, n, bs->w_in), bs->w_in, 0.0, kInfinity};
        const auto next_hit = intersect(scene_, next);
        if (!next_hit) {
            const Rgb env = environment(next.direction);
            if (bs->delta || !environment_light_) {
                result += throughput * env;
            } else {
                const double pl = light_pdf(*environment_light_, hit.point, next.direction, std::nullopt) / light_count;
                result += throughput * env * balance(bs->pdf, pl);
            }
            break;
        }

        specular_bounce = bs->delta;
        prev_bsdf_pdf = bs->pdf;
        prev_point = hit.point;
        hit = *next_hit;
        wo = -next.direction;
        n = oriented_normal(hit, next);
    }
    return result;
}

Rgb PathTracer::radiance(const Ray& ray, Rng& rng) const {
    const auto hit = intersect(scene_, ray);
    if (!hit) return environment(ray.direction);
    return shade(*hit, -ray.direction, oriented_normal(*hit, ray), rng);
}

ReshadedSample PathTracer::reshaded(const Ray& input_ray, const Vec3& novel_position, Rng& rng) const {
    const auto hit = intersect(scene_, input_ray);
    if (!hit) return {environment(input_ray.direction), true};
    const Vec3 n = oriented_normal(*hit, input_ray);
    const Vec3 w_novel = novel_direction(input_ray, hit->point, novel_position);
    return {shade(*hit, w_novel, n, rng), dot(n, w_novel) > 0.0};
}

Rgb estimate_radiance(const SceneDescription& scene, const Ray& ray, Rng& rng, int max_depth) {
    return PathTracer(scene, max_depth).radiance(ray, rng);
}

ReshadedSample estimate_reshaded(const SceneDescription& scene, const Ray& input_ray, const Vec3& novel_position,
                                 Rng& rng, int max_depth) {
    return PathTracer(scene, max_depth).reshaded(input_ray, novel_position, rng);
}

}  // namespace forge
