// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/bsdf.hpp"

namespace forge {

namespace ggx {

double distribution(const Vec3& h, double alpha) {
    if (h.z <= 0.0) return 0.0;
    const double a2 = alpha * alpha;
    const double denom = h.z * h.z * (a2 - 1.0) + 1.0;
    return a2 / (kPi * denom * denom);
}

double lambda(const Vec3& w, double alpha) {
    const double cos2 = w.z * w.z;
    if (cos2 <= 0.0) return kInfinity;
    const double tan2 = std::max(0.0, 1.0 - cos2) / cos2;
    return 0.5 * (-1.0 + std::sqrt(1.0 + alpha * alpha * tan2));
}

double smith_g1(const Vec3& w, double alpha) { return 1.0 / (1.0 + lambda(w, alpha)); }

double smith_g2(const Vec3& wo, const Vec3& wi, double alpha) {
    return 1.0 / (1.0 + lambda(wo, alpha) + lambda(wi, alpha));
}

Vec3 sample_visible_normal(const Vec3& wo, double alpha, Sample2 u) {
    // Stretch to the hemisphere configuration.
    const Vec3 vh = normalize(Vec3(alpha * wo.x, alpha * wo.y, wo.z));
    const double len2 = vh.x * vh.x + vh.y * vh.y;
    const Vec3 t1 = len2 > 0.0 ? Vec3(-vh.y, vh.x, 0.0) / std::sqrt(len2) : Vec3(1.0, 0.0, 0.0);
    const Vec3 t2 = cross(vh, t1);
    // Uniform point on the projected disk, warped toward the visible half.
    const double r = std::sqrt(u.u0);
    const double phi = 2.0 * kPi * u.u1;
    const double p1 = r * std::cos(phi);
    double p2 = r * std::sin(phi);
    const double s = 0.5 * (1.0 + vh.z);
    p2 = (1.0 - s) * std::sqrt(std::max(0.0, 1.0 - p1 * p1)) + s * p2;
    const Vec3 nh = t1 * p1 + t2 * p2 + vh * std::sqrt(std::max(0.0, 1.0 - p1 * p1 - p2 * p2));
    // Unstretch.
    return normalize(Vec3(alpha * nh.x, alpha * nh.y, std::max(0.0, nh.z)));
}

Rgb schlick_fresnel(const Rgb& f0, double cos_theta) {
    const double m = std::clamp(1.0 - cos_theta, 0.0, 1.0);
    const double m5 = (m * m) * (m * m) * m;
    return f0 + (Rgb(1.0) - f0) * m5;
}

}  // namespace ggx

double ggx_alpha(double roughness) {
    const double r = std::clamp(roughness, GgxConductor::kMinRoughness, GgxConductor::kMaxRoughness);
    return r * r;
}

Rgb eval_bsdf(const Material& material, const Vec3& w_out, const Vec3& w_in, const Vec3& normal, const Vec3& p) {
    const double cos_o = dot(w_out, normal);
    const double cos_i = dot(w_in, normal);
    if (cos_o <= 0.0 || cos_i <= 0.0) return {};

    if (std::holds_alternative<Lambertian>(material.model)) return material.base_color(p) * kInvPi;
    if (const auto* g = std::get_if<GgxConductor>(&material.model)) {
        const Frame frame(normal);
        const Vec3 wo = frame.to_local(w_out);
        const Vec3 wi = frame.to_local(w_in);
        const Vec3 h = normalize(wo + wi);
        const double alpha = ggx_alpha(g->roughness);
        const double d = ggx::distribution(h, alpha);
        const double g2 = ggx::smith_g2(wo, wi, alpha);
        const Rgb f = ggx::schlick_fresnel(material.base_color(p), dot(wi, h));
        return f * (d * g2 / (4.0 * wo.z * wi.z));
    }
    return {};
}

double pdf_bsdf(const Material& material, const Vec3& w_out, const Vec3& w_in, const Vec3& normal) {
    const double cos_o = dot(w_out, normal);
    const double cos_i = dot(w_in, normal);
    if (cos_o <= 0.0 || cos_i <= 0.0) return 0.0;

    if (std::holds_alternative<Lambertian>(material.model)) return cos_i * kInvPi;
    if (const auto* g = std::get_if<GgxConductor>(&material.model)) {
        const Frame frame(normal);
        const Vec3 wo = frame.to_local(w_out);
        const Vec3 wi = frame.to_local(w_in);
        const Vec3 h = normalize(wo + wi);
        const double alpha = ggx_alpha(g->roughness);
        return ggx::smith_g1(wo, alpha) * ggx::distribution(h, alpha) / (4.0 * wo.z);
    }
    return 0.0;
}

std::optional<BsdfSample> sample_bsdf(const Material& material, const Vec3& w_out, const Vec3& normal, Sample2 u,
                                      const Vec3& p) {
    if (dot(w_out, normal) <= 0.0) return std::nullopt;

    if (std::holds_alternative<Mirror>(material.model)) {
        return BsdfSample{reflect(w_out, normal), 0.0, material.base_color(p), true};
    }

    const Frame frame(normal);
    if (std::holds_alternative<Lambertian>(material.model)) {
        const double r = std::sqrt(u.u0);
        const double phi = 2.0 * kPi * u.u1;
        const double z = std::sqrt(std::max(0.0, 1.0 - u.u0));
        if (z <= 0.0) return std::nullopt;
        const Vec3 wi = frame.to_world({r * std::cos(phi), r * std::sin(phi), z});
        return BsdfSample{wi, z * kInvPi, material.base_color(p), false};
    }

    const auto& g = std::get<GgxConductor>(material.model);
    const double alpha = ggx_alpha(g.roughness);
    const Vec3 wo = frame.to_local(w_out);
    const Vec3 h = ggx::sample_visible_normal(wo, alpha, u);
    const Vec3 wi = reflect(wo, h);
    if (wi.z <= 0.0) return std::nullopt;
    const double g1 = ggx::smith_g1(wo, alpha);
    const double pdf = g1 * ggx::distribution(h, alpha) / (4.0 * wo.z);
    if (!(pdf > 0.0) || !std::isfinite(pdf)) return std::nullopt;
    const Rgb weight = ggx::schlick_fresnel(material.base_color(p), dot(wi, h)) * (ggx::smith_g2(wo, wi, alpha) / g1);
    return BsdfSample{frame.to_world(wi), pdf, weight, false};
}

}  // namespace forge
