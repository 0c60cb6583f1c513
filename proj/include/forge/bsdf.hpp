// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "forge/math.hpp"
#include "forge/scene.hpp"

namespace forge {

/// Two uniform variates in [0, 1).
struct Sample2 {
    double u0 = 0.0;
    double u1 = 0.0;
};

namespace ggx {

/// Normal distribution D(h) for a local-frame half vector.
double distribution(const Vec3& h_local, double alpha);
/// Smith Lambda(w).
double lambda(const Vec3& w_local, double alpha);
double smith_g1(const Vec3& w_local, double alpha);
/// Height-correlated masking-shadowing G2(wo, wi).
double smith_g2(const Vec3& wo_local, const Vec3& wi_local, double alpha);
/// Visible-normal sample (Heitz 2018) for a local-frame view direction.
Vec3 sample_visible_normal(const Vec3& wo_local, double alpha, Sample2 u);
Rgb schlick_fresnel(const Rgb& f0, double cos_theta);

}  // namespace ggx

/// Distribution width used by the GGX lobe for a material roughness.
double ggx_alpha(double roughness);

/// f_r(wo, wi) in sr^-1. Zero when either direction is below the hemisphere
/// around `normal` and for delta (mirror) materials. `p` drives texturing.
Rgb eval_bsdf(const Material& material, const Vec3& w_out, const Vec3& w_in, const Vec3& normal,
              const Vec3& p = {});

/// Solid-angle density with which sample_bsdf produces `w_in`; 0 for delta lobes.
double pdf_bsdf(const Material& material, const Vec3& w_out, const Vec3& w_in, const Vec3& normal);

struct BsdfSample {
    Vec3 w_in;
    double pdf = 0.0;  // solid-angle density; meaningless when `delta`
    Rgb weight;        // f_r cos / pdf, or the reflectance for delta lobes
    bool delta = false;
};

/// Importance-samples an incident direction. Nullopt when `w_out` is below
/// the hemisphere or the sampled direction leaves it.
std::optional<BsdfSample> sample_bsdf(const Material& material, const Vec3& w_out, const Vec3& normal, Sample2 u,
                                      const Vec3& p = {});

}  // namespace forge
