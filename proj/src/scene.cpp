// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/scene.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "forge/rng.hpp"

namespace forge {

using json = nlohmann::json;

SceneError::SceneError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ")"
                                  : what),
      line_(line), column_(column) {}

// Texturing ------------------------------------------------------------------

namespace {

double lattice_value(std::int64_t x, std::int64_t y, std::int64_t z) {
    const std::uint64_t h = hash_seed({static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y),
                                       static_cast<std::uint64_t>(z)});
    return static_cast<double>(h >> 11u) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise(const Vec3& p) {
    const double fx = std::floor(p.x), fy = std::floor(p.y), fz = std::floor(p.z);
    const auto ix = static_cast<std::int64_t>(fx), iy = static_cast<std::int64_t>(fy),
               iz = static_cast<std::int64_t>(fz);
    const double tx = smooth(p.x - fx), ty = smooth(p.y - fy), tz = smooth(p.z - fz);
    double result = 0.0;
    for (int dz = 0; dz < 2; ++dz) {
        for (int dy = 0; dy < 2; ++dy) {
            for (int dx = 0; dx < 2; ++dx) {
                const double w = (dx ? tx : 1.0 - tx) * (dy ? ty : 1.0 - ty) * (dz ? tz : 1.0 - tz);
                result += w * lattice_value(ix + dx, iy + dy, iz + dz);
            }
        }
    }
    return result;
}

}  // namespace

Rgb Texture::eval(const Vec3& p) const {
    // The small offset keeps axis-aligned surfaces at integer coordinates off
    // the cell boundary, where roundoff would otherwise speckle.
    const Vec3 q = p * scale + Vec3(1e-4, 1e-4, 1e-4);
    if (kind == Kind::checker) {
        const auto parity = static_cast<std::int64_t>(std::floor(q.x) + std::floor(q.y) + std::floor(q.z));
        return (parity & 1) ? color_b : color_a;
    }
    const double t = value_noise(q);
    return color_a * (1.0 - t) + color_b * t;
}

Rgb Material::base_color(const Vec3& p) const {
    if (texture) return texture->eval(p);
    return std::visit(
        [](const auto& m) -> Rgb {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Lambertian>) return m.albedo;
            else return m.reflectance;
        },
        model);
}

Rgb EnvironmentLight::radiance(const Vec3& dir) const {
    if (const auto* c = std::get_if<ConstantEnvironment>(&model)) return c->radiance;
    const auto& ll = std::get<LatLongEnvironment>(model);
    if (!ll.image || ll.image->empty()) return {};
    const Image& img = *ll.image;
    double u = 0.5 + (std::atan2(dir.x, -dir.z) + ll.rotation) / (2.0 * kPi);
    u -= std::floor(u);
    const double v = std::acos(std::clamp(dir.y, -1.0, 1.0)) * kInvPi;
    const int px = std::clamp(static_cast<int>(u * img.width()), 0, img.width() - 1);
    const int py = std::clamp(static_cast<int>(v * img.height()), 0, img.height() - 1);
    if (img.channels() == 1) return Rgb(img.at(px, py));
    return {img.at(px, py, 0), img.at(px, py, 1), img.at(px, py, 2)};
}

bool EnvironmentLight::is_black() const {
    if (const auto* c = std::get_if<ConstantEnvironment>(&model)) return c->radiance.is_black();
    const auto& ll = std::get<LatLongEnvironment>(model);
    if (!ll.image) return true;
    const auto data = ll.image->data();
    return std::all_of(data.begin(), data.end(), [](float v) { return v == 0.0f; });
}

std::vector<std::size_t> SceneDescription::emitter_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < primitives.size(); ++i) {
        if (primitives[i].is_emitter()) out.push_back(i);
    }
    return out;
}

Bounds finite_bounds(const SceneDescription& scene) {
    Bounds b;
    for (const auto& prim : scene.primitives) {
        if (const auto* s = std::get_if<Sphere>(&prim.shape)) {
            const Vec3 r(s->radius, s->radius, s->radius);
            b.extend(s->center - r);
            b.extend(s->center + r);
        } else if (const auto* q = std::get_if<Quad>(&prim.shape)) {
            b.extend(q->corner);
            b.extend(q->corner + q->edge_u);
            b.extend(q->corner + q->edge_v);
            b.extend(q->corner + q->edge_u + q->edge_v);
        }
    }
    return b;
}

// Validation -----------------------------------------------------------------

namespace {

void check_color(const Rgb& c, const std::string& where, bool unit_range) {
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(c[i])) throw SceneError(where + ": non-finite value");
        if (c[i] < 0.0) throw SceneError(where + ": negative value");
        if (unit_range && c[i] > 1.0) throw SceneError(where + ": value above 1");
    }
}

void check_finite(const Vec3& v, const std::string& where) {
    if (!is_finite(v)) throw SceneError(where + ": non-finite value");
}

}  // namespace

void validate_scene(const SceneDescription& scene) {
    for (std::size_t i = 0; i < scene.materials.size(); ++i) {
        const auto& m = scene.materials[i];
        const std::string where = "materials[" + std::to_string(i) + "]";
        std::visit(
            [&](const auto& model) {
                using T = std::decay_t<decltype(model)>;
                if constexpr (std::is_same_v<T, Lambertian>) {
                    check_color(model.albedo, where + ".albedo", true);
                } else {
                    check_color(model.reflectance, where + ".reflectance", true);
                }
                if constexpr (std::is_same_v<T, GgxConductor>) {
                    if (!(model.roughness >= GgxConductor::kMinRoughness &&
                          model.roughness <= GgxConductor::kMaxRoughness)) {
                        throw SceneError(where + ".roughness: outside [0.01, 1]");
                    }
                }
            },
            m.model);
        if (m.texture) {
            if (!(std::isfinite(m.texture->scale) && m.texture->scale > 0.0)) {
                throw SceneError(where + ".texture.scale: must be positive");
            }
            check_color(m.texture->color_a, where + ".texture.color_a", true);
            check_color(m.texture->color_b, where + ".texture.color_b", true);
        }
    }

    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        const auto& p = scene.primitives[i];
        const std::string where = "primitives[" + std::to_string(i) + "]";
        if (p.material >= scene.materials.size()) {
            throw SceneError(where + ".material: index " + std::to_string(p.material) + " refers to one of " +
                             std::to_string(scene.materials.size()) + " materials");
        }
        check_color(p.emission, where + ".emission", false);
        if (const auto* s = std::get_if<Sphere>(&p.shape)) {
            check_finite(s->center, where + ".center");
            if (!(std::isfinite(s->radius) && s->radius > 0.0)) throw SceneError(where + ".radius: must be positive");
        } else if (const auto* q = std::get_if<Quad>(&p.shape)) {
            check_finite(q->corner, where + ".corner");
            check_finite(q->edge_u, where + ".edge_u");
            check_finite(q->edge_v, where + ".edge_v");
            const double area = length(cross(q->edge_u, q->edge_v));
            if (!(area > 1e-12 * length(q->edge_u) * length(q->edge_v)) || area == 0.0) {
                throw SceneError(where + ": edge vectors are linearly dependent");
            }
        } else {
            const auto& pl = std::get<Plane>(p.shape);
            check_finite(pl.point, where + ".point");
            check_finite(pl.normal, where + ".normal");
            if (std::abs(length(pl.normal) - 1.0) > 1e-6) throw SceneError(where + ".normal: not unit length");
            if (p.is_emitter()) throw SceneError(where + ": emissive planes are not supported");
        }
    }

    if (const auto* c = std::get_if<ConstantEnvironment>(&scene.environment.model)) {
        check_color(c->radiance, "environment.radiance", false);
    } else {
        const auto& ll = std::get<LatLongEnvironment>(scene.environment.model);
        if (!ll.image) throw SceneError("environment.image: not loaded");
        if (!std::isfinite(ll.rotation)) throw SceneError("environment.rotation: non-finite value");
        for (float v : ll.image->data()) {
            if (!std::isfinite(v) || v < 0.0f) throw SceneError("environment.image: values must be finite and >= 0");
        }
    }

    if (scene.emitter_indices().empty() && scene.environment.is_black()) {
        throw SceneError("scene has no light source (no emissive primitive and a black environment)");
    }

    if (scene.camera_box) {
        check_finite(scene.camera_box->min, "camera_box.min");
        check_finite(scene.camera_box->max, "camera_box.max");
        if (scene.camera_box->empty()) throw SceneError("camera_box: min exceeds max");
    }
}

// Parsing --------------------------------------------------------------------

namespace {

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1, column = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw SceneError(path_ + ": expected an object");
    }

    bool has(const char* key) const { return node_.contains(key); }

    const json& at(const char* key) const {
        const auto it = node_.find(key);
        if (it == node_.end()) throw SceneError(path_ + ": missing key '" + key + "'");
        return *it;
    }

    std::string sub(const char* key) const { return path_ + "." + key; }

    double number(const char* key) const { return to_number(at(key), sub(key)); }

    std::string string(const char* key) const {
        const json& v = at(key);
        if (!v.is_string()) throw SceneError(sub(key) + ": expected a string");
        return v.get<std::string>();
    }

    std::size_t index(const char* key) const {
        const json& v = at(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
            throw SceneError(sub(key) + ": expected a non-negative integer");
        }
        return v.get<std::size_t>();
    }

    Vec3 vec3(const char* key) const {
        const json& v = at(key);
        if (!v.is_array() || v.size() != 3) throw SceneError(sub(key) + ": expected an array of 3 numbers");
        return {to_number(v[0], sub(key)), to_number(v[1], sub(key)), to_number(v[2], sub(key))};
    }

    Rgb rgb(const char* key) const {
        const Vec3 v = vec3(key);
        return {v.x, v.y, v.z};
    }

    void expect_only(std::initializer_list<const char*> keys) const {
        for (const auto& [k, _] : node_.items()) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; })) {
                throw SceneError(path_ + ": unknown key '" + k + "'");
            }
        }
    }

    const std::string& path() const { return path_; }

private:
    static double to_number(const json& v, const std::string& where) {
        if (!v.is_number()) throw SceneError(where + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw SceneError(where + ": non-finite numeric literal");
        return d;
    }

    const json& node_;
    std::string path_;
};

Texture parse_texture(const Reader& r) {
    r.expect_only({"type", "scale", "color_a", "color_b"});
    Texture t;
    const std::string type = r.string("type");
    if (type == "checker") t.kind = Texture::Kind::checker;
    else if (type == "value_noise") t.kind = Texture::Kind::value_noise;
    else throw SceneError(r.sub("type") + ": unknown texture kind '" + type + "'");
    t.scale = r.number("scale");
    t.color_a = r.rgb("color_a");
    t.color_b = r.rgb("color_b");
    return t;
}

Material parse_material(const Reader& r) {
    Material m;
    const std::string type = r.string("type");
    if (r.has("name")) m.name = r.string("name");
    if (type == "lambertian") {
        r.expect_only({"type", "name", "albedo", "texture"});
        m.model = Lambertian{r.rgb("albedo")};
    } else if (type == "mirror") {
        r.expect_only({"type", "name", "reflectance", "texture"});
        m.model = Mirror{r.rgb("reflectance")};
    } else if (type == "ggx_conductor") {
        r.expect_only({"type", "name", "reflectance", "roughness", "texture"});
        const double roughness =
            std::clamp(r.number("roughness"), GgxConductor::kMinRoughness, GgxConductor::kMaxRoughness);
        m.model = GgxConductor{r.rgb("reflectance"), roughness};
    } else {
        throw SceneError(r.sub("type") + ": unknown material kind '" + type + "'");
    }
    if (r.has("texture")) m.texture = parse_texture(Reader(r.at("texture"), r.sub("texture")));
    return m;
}

Primitive parse_primitive(const Reader& r) {
    Primitive p;
    const std::string type = r.string("type");
    if (type == "sphere") {
        r.expect_only({"type", "center", "radius", "material", "emission"});
        p.shape = Sphere{r.vec3("center"), r.number("radius")};
    } else if (type == "quad") {
        r.expect_only({"type", "corner", "edge_u", "edge_v", "material", "emission"});
        p.shape = Quad{r.vec3("corner"), r.vec3("edge_u"), r.vec3("edge_v")};
    } else if (type == "plane") {
        r.expect_only({"type", "point", "normal", "material", "emission"});
        p.shape = Plane{r.vec3("point"), r.vec3("normal")};
    } else {
        throw SceneError(r.sub("type") + ": unknown primitive type '" + type + "'");
    }
    p.material = r.index("material");
    if (r.has("emission")) p.emission = r.rgb("emission");
    return p;
}

EnvironmentLight parse_environment(const Reader& r, const std::filesystem::path& base_dir) {
    const std::string type = r.string("type");
    if (type == "constant") {
        r.expect_only({"type", "radiance"});
        return {ConstantEnvironment{r.rgb("radiance")}};
    }
    if (type == "latlong") {
        r.expect_only({"type", "image", "rotation"});
        LatLongEnvironment ll;
        ll.image_path = r.string("image");
        if (r.has("rotation")) ll.rotation = r.number("rotation");
        std::filesystem::path p(ll.image_path);
        if (p.is_relative()) p = base_dir / p;
        try {
            ll.image = std::make_shared<const Image>(read_pfm(p));
        } catch (const ImageError& e) {
            throw SceneError(r.sub("image") + ": " + e.what());
        }
        return {std::move(ll)};
    }
    throw SceneError(r.sub("type") + ": unknown environment kind '" + type + "'");
}

}  // namespace

SceneDescription parse_scene(std::string_view text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte);
        // Drop the library's "[json.exception...] parse error at ...:" prefix.
        std::string msg = e.what();
        if (const auto col = msg.find("column"); col != std::string::npos) {
            if (const auto colon = msg.find(": ", col); colon != std::string::npos) msg = msg.substr(colon + 2);
        }
        throw SceneError(msg, line, column);
    } catch (const json::out_of_range&) {
        throw SceneError("non-finite numeric literal (number overflows a double)");
    }

    const Reader root(doc, "scene");
    root.expect_only({"materials", "primitives", "environment", "camera_box"});
    SceneDescription scene;

    const json& mats = root.at("materials");
    if (!mats.is_array()) throw SceneError("scene.materials: expected an array");
    for (std::size_t i = 0; i < mats.size(); ++i) {
        scene.materials.push_back(parse_material(Reader(mats[i], "materials[" + std::to_string(i) + "]")));
    }

    const json& prims = root.at("primitives");
    if (!prims.is_array()) throw SceneError("scene.primitives: expected an array");
    for (std::size_t i = 0; i < prims.size(); ++i) {
        scene.primitives.push_back(parse_primitive(Reader(prims[i], "primitives[" + std::to_string(i) + "]")));
    }

    scene.environment = parse_environment(Reader(root.at("environment"), "environment"), base_dir);

    if (root.has("camera_box")) {
        const Reader box(root.at("camera_box"), "camera_box");
        box.expect_only({"min", "max"});
        scene.camera_box = Bounds{box.vec3("min"), box.vec3("max")};
    }

    validate_scene(scene);
    return scene;
}

SceneDescription load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SceneError("cannot open scene '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_scene(buffer.str(), path.parent_path());
    } catch (const SceneError& e) {
        throw SceneError(path.string() + ": " + e.what());
    }
}

// Serialization --------------------------------------------------------------

namespace {

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json to_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }

json to_json(const Material& m) {
    json j;
    if (!m.name.empty()) j["name"] = m.name;
    std::visit(
        [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, Lambertian>) {
                j["type"] = "lambertian";
                j["albedo"] = to_json(model.albedo);
            } else if constexpr (std::is_same_v<T, Mirror>) {
                j["type"] = "mirror";
                j["reflectance"] = to_json(model.reflectance);
            } else {
                j["type"] = "ggx_conductor";
                j["reflectance"] = to_json(model.reflectance);
                j["roughness"] = model.roughness;
            }
        },
        m.model);
    if (m.texture) {
        j["texture"] = {{"type", m.texture->kind == Texture::Kind::checker ? "checker" : "value_noise"},
                        {"scale", m.texture->scale},
                        {"color_a", to_json(m.texture->color_a)},
                        {"color_b", to_json(m.texture->color_b)}};
    }
    return j;
}

json to_json(const Primitive& p) {
    json j;
    if (const auto* s = std::get_if<Sphere>(&p.shape)) {
        j = {{"type", "sphere"}, {"center", to_json(s->center)}, {"radius", s->radius}};
    } else if (const auto* q = std::get_if<Quad>(&p.shape)) {
        j = {{"type", "quad"}, {"corner", to_json(q->corner)}, {"edge_u", to_json(q->edge_u)},
             {"edge_v", to_json(q->edge_v)}};
    } else {
        const auto& pl = std::get<Plane>(p.shape);
        j = {{"type", "plane"}, {"point", to_json(pl.point)}, {"normal", to_json(pl.normal)}};
    }
    j["material"] = p.material;
    if (p.is_emitter()) j["emission"] = to_json(p.emission);
    return j;
}

}  // namespace

std::string serialize_scene(const SceneDescription& scene) {
    json doc;
    doc["materials"] = json::array();
    for (const auto& m : scene.materials) doc["materials"].push_back(to_json(m));
    doc["primitives"] = json::array();
    for (const auto& p : scene.primitives) doc["primitives"].push_back(to_json(p));
    if (const auto* c = std::get_if<ConstantEnvironment>(&scene.environment.model)) {
        doc["environment"] = {{"type", "constant"}, {"radiance", to_json(c->radiance)}};
    } else {
        const auto& ll = std::get<LatLongEnvironment>(scene.environment.model);
        doc["environment"] = {{"type", "latlong"}, {"image", ll.image_path}, {"rotation", ll.rotation}};
    }
    if (scene.camera_box) {
        doc["camera_box"] = {{"min", to_json(scene.camera_box->min)}, {"max", to_json(scene.camera_box->max)}};
    }
    return doc.dump(2) + "\n";
}

// Randomization --------------------------------------------------------------

namespace {

Rgb uniform_color(Rng& rng, double lo, double hi) {
    const double r = rng.uniform(lo, hi);
    const double g = rng.uniform(lo, hi);
    const double b = rng.uniform(lo, hi);
    return {r, g, b};
}

Rgb hsv_to_rgb(double h, double s, double v) {
    const double h6 = (h - std::floor(h)) * 6.0;
    const int sector = std::min(static_cast<int>(h6), 5);
    const double f = h6 - sector;
    const double p = v * (1.0 - s), q = v * (1.0 - s * f), t = v * (1.0 - s * (1.0 - f));
    switch (sector) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

constexpr double kColorLo = 0.05;
constexpr double kColorHi = 0.95;

}  // namespace

SceneDescription randomize_materials(const SceneDescription& scene, std::uint64_t seed) {
    SceneDescription out = scene;
    std::vector<bool> used_by_emitter(scene.materials.size(), false);
    for (const auto& p : scene.primitives) {
        if (p.is_emitter() && p.material < used_by_emitter.size()) used_by_emitter[p.material] = true;
    }

    for (std::size_t i = 0; i < out.materials.size(); ++i) {
        if (used_by_emitter[i]) continue;
        Rng rng(hash_seed({seed, i}), 0x6d6174);
        Material& m = out.materials[i];
        const double kind = rng.uniform();
        const Rgb color = uniform_color(rng, kColorLo, kColorHi);
        const double log_lo = std::log(GgxConductor::kMinRoughness);
        const double log_hi = std::log(GgxConductor::kMaxRoughness);
        const double roughness = std::clamp(std::exp(rng.uniform(log_lo, log_hi)), GgxConductor::kMinRoughness,
                                            GgxConductor::kMaxRoughness);
        if (kind < 0.50) m.model = Lambertian{color};
        else if (kind < 0.85) m.model = GgxConductor{color, roughness};
        else m.model = Mirror{color};

        const bool textured = rng.uniform() < 0.5;
        const bool checker = rng.uniform() < 0.5;
        const double scale = rng.uniform(2.0, 8.0);
        const Rgb a = uniform_color(rng, kColorLo, kColorHi);
        const Rgb b = uniform_color(rng, kColorLo, kColorHi);
        if (textured) {
            m.texture = Texture{checker ? Texture::Kind::checker : Texture::Kind::value_noise, scale, a, b};
        } else {
            m.texture.reset();
        }
    }
    return out;
}

SceneDescription add_random_orbs(const SceneDescription& scene, std::uint64_t seed, OrbCount count) {
    if (count.lo < 0 || count.hi < count.lo) throw SceneError("orb count range must satisfy 0 <= lo <= hi");
    SceneDescription out = scene;
    Rng rng(seed, 0x6f726273);
    const auto k = rng.uniform_int(count.lo, count.hi);
    if (k == 0) return out;

    Bounds box = finite_bounds(scene);
    if (box.empty()) box = scene.camera_box.value_or(Bounds{{-1, -1, -1}, {1, 1, 1}});
    const double scene_radius = box.radius() > 0.0 ? box.radius() : 1.0;

    const std::size_t orb_material = out.materials.size();
    out.materials.push_back(Material{"orb", Lambertian{Rgb(0.0)}, std::nullopt});

    for (std::int64_t i = 0; i < k; ++i) {
        const Vec3 center{rng.uniform(box.min.x, box.max.x), rng.uniform(box.min.y, box.max.y),
                          rng.uniform(box.min.z, box.max.z)};
        const double radius = rng.uniform(0.02, 0.10) * scene_radius;
        const double hue = rng.uniform();
        const double luminance = rng.uniform(5.0, 50.0);
        const Rgb tint = hsv_to_rgb(hue, 0.8, 1.0);
        out.primitives.push_back(Primitive{Sphere{center, radius}, orb_material, tint * (luminance / tint.luminance())});
    }
    return out;
}

}  // namespace forge
