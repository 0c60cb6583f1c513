// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "forge/geometry.hpp"
#include "test_scenes.hpp"

namespace forge {
namespace {

SceneDescription one_sphere(Vec3 center) {
    SceneDescription s;
    s.materials.push_back(testing::lambertian(0.5));
    s.primitives.push_back(Primitive{Sphere{center, 1.0}, 0, {}});
    s.environment = EnvironmentLight{ConstantEnvironment{Rgb(1.0)}};
    return s;
}

const Ray kDownZ{{0, 0, 0}, {0, 0, -1}};

TEST(Intersect, SphereAheadHitsAtFour) {
    const auto hit = intersect(one_sphere({0, 0, -5}), kDownZ);
    ASSERT_TRUE(hit);
    EXPECT_DOUBLE_EQ(hit->t, 4.0);
    EXPECT_NEAR(hit->normal.x, 0.0, 1e-12);
    EXPECT_NEAR(hit->normal.y, 0.0, 1e-12);
    EXPECT_NEAR(hit->normal.z, 1.0, 1e-12);
    EXPECT_EQ(hit->material, 0u);
}

TEST(Intersect, SphereOffAxisMisses) { EXPECT_FALSE(intersect(one_sphere({0, 5, 0}), kDownZ)); }

TEST(Intersect, SphereBehindMisses) { EXPECT_FALSE(intersect(one_sphere({0, 0, 5}), kDownZ)); }

TEST(Intersect, FromInsideSphereHitsFarSide) {
    const auto hit = intersect(one_sphere({0, 0, 0}), kDownZ);
    ASSERT_TRUE(hit);
    EXPECT_DOUBLE_EQ(hit->t, 1.0);
    // Geometric normal is kept outward, not flipped toward the ray.
    EXPECT_NEAR(hit->normal.z, -1.0, 1e-12);
}

TEST(Intersect, RespectsRayInterval) {
    const auto scene = one_sphere({0, 0, -5});
    EXPECT_FALSE(intersect(scene, Ray{{0, 0, 0}, {0, 0, -1}, 0.0, 3.9}));
    const auto far = intersect(scene, Ray{{0, 0, 0}, {0, 0, -1}, 4.5, kInfinity});
    ASSERT_TRUE(far);
    EXPECT_DOUBLE_EQ(far->t, 6.0);
}

TEST(Intersect, QuadInsideAndOutsideEdges) {
    const Shape quad = Quad{{-1, -1, -2}, {2, 0, 0}, {0, 2, 0}};
    EXPECT_DOUBLE_EQ(intersect_shape(quad, kDownZ).value(), 2.0);
    EXPECT_FALSE(intersect_shape(quad, Ray{{1.5, 0, 0}, {0, 0, -1}}));
    EXPECT_FALSE(intersect_shape(quad, Ray{{0, 0, 0}, {1, 0, 0}}));  // parallel
}

TEST(Intersect, PlaneFromBothSides) {
    const Shape plane = Plane{{0, 0, -3}, {0, 0, 1}};
    EXPECT_DOUBLE_EQ(intersect_shape(plane, kDownZ).value(), 3.0);
    EXPECT_DOUBLE_EQ(intersect_shape(plane, Ray{{0, 0, -6}, {0, 0, 1}}).value(), 3.0);
    EXPECT_FALSE(intersect_shape(plane, Ray{{0, 0, 0}, {0, 0, 1}}));
}

TEST(Intersect, NearestOfSeveralPrimitives) {
    auto scene = one_sphere({0, 0, -5});
    scene.primitives.push_back(Primitive{Sphere{{0, 0, -3}, 0.5}, 0, Rgb(2.0)});
    const auto hit = intersect(scene, kDownZ);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->primitive, 1u);
    EXPECT_DOUBLE_EQ(hit->t, 2.5);
    EXPECT_EQ(hit->emitted, Rgb(2.0));
}

TEST(Intersect, HitsAreWithinIntervalAndOnSurface) {
    Rng rng(42);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto scene = testing::random_scene(seed);
        for (int i = 0; i < 200; ++i) {
            const double z = rng.uniform(-1, 1), phi = rng.uniform(0, 2 * kPi), r = std::sqrt(1 - z * z);
            const Ray ray{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 1)},
                          {r * std::cos(phi), r * std::sin(phi), z}};
            const auto hit = intersect(scene, ray);
            if (!hit) continue;
            EXPECT_GT(hit->t, ray.t_min);
            EXPECT_LT(hit->t, ray.t_max);
            EXPECT_NEAR(length(hit->normal), 1.0, 1e-9);
            EXPECT_NEAR(length(hit->point - ray.at(hit->t)), 0.0, 1e-9);
        }
    }
}

TEST(Occluded, ShadowRayStopsBeforeTarget) {
    const auto scene = one_sphere({0, 0, -5});
    EXPECT_TRUE(occluded(scene, Ray{{0, 0, 0}, {0, 0, -1}, 0.0, 10.0}));
    EXPECT_FALSE(occluded(scene, Ray{{0, 0, 0}, {0, 0, -1}, 0.0, 3.5}));
}

TEST(OffsetOrigin, MovesToTheSideOfTheDirection) {
    const Vec3 p{0, 0, -4}, n{0, 0, 1};
    EXPECT_GT(offset_origin(p, n, {0, 0, 1}).z, p.z);
    EXPECT_LT(offset_origin(p, n, {0, 0, -1}).z, p.z);
}

}  // namespace
}  // namespace forge
