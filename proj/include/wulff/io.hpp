#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wulff/body.hpp"
#include "wulff/lab.hpp"

namespace wulff {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {"dimension": n, "label": str, "vertices": [[x1, …, xn], …]}
inline Json body_to_json(const ConvexBody& K)
{
    Json j;
    j["dimension"] = K.dimension();
    j["label"] = K.label();
    Json verts = Json::array();
    for (const auto& v : K.vertices()) {
        Json row = Json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v(i));
        verts.push_back(std::move(row));
    }
    j["vertices"] = std::move(verts);
    return j;
}

/// Any structural problem, and any input that does not span a full-dimensional
/// body, is reported as MalformedBody.
inline ConvexBody body_from_json(const Json& j)
{
    if (!j.is_object()) throw MalformedBody("body must be a JSON object");
    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
        throw MalformedBody("body needs an integer \"dimension\"");
    if (!j.contains("vertices") || !j["vertices"].is_array()) throw MalformedBody("body needs a \"vertices\" array");
    const int n = j["dimension"].get<int>();
    if (n < 1 || n > 16) throw MalformedBody("dimension out of range");
    std::string label = "body";
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw MalformedBody("\"label\" must be a string");
        label = j["label"].get<std::string>();
    }
    std::vector<Vector> pts;
    for (const auto& row : j["vertices"]) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw MalformedBody("every vertex needs exactly " + std::to_string(n) + " coordinates");
        Vector p(n);
        for (int i = 0; i < n; ++i) {
            if (!row[static_cast<std::size_t>(i)].is_number()) throw MalformedBody("non-numeric coordinate");
            p(i) = row[static_cast<std::size_t>(i)].get<double>();
            if (!std::isfinite(p(i))) throw MalformedBody("non-finite coordinate");
        }
        pts.push_back(p);
    }
    try {
        return convex_hull(pts, label);
    } catch (const DegenerateInput& e) {
        throw MalformedBody(std::string("not a full-dimensional body: ") + e.what());
    }
}

inline ConvexBody read_body(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw MalformedBody("cannot open " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw MalformedBody(path.string() + ": " + e.what());
    }
    return body_from_json(j);
}

/// Writes next to the target and renames, so a failed run never leaves a
/// partial file behind.
inline void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

inline Json seed_to_json(RngSeed s) { return Json{{"seed", s.seed}, {"stream", s.stream}}; }

// Infinite ratios (no deficit to spend) are written as null.
inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json to_json(const InequalityReport& r)
{
    Json j;
    j["name"] = to_string(r.kind);
    if (!r.mode.empty()) j["mode"] = r.mode;
    j["lhs"] = finite_or_null(r.lhs);
    j["rhs"] = finite_or_null(r.rhs);
    j["ratio"] = finite_or_null(r.ratio);
    j["constant_used"] = r.constant_used;
    j["q_used"] = r.q_used;
    j["asymmetry"] = r.asymmetry;
    j["deficit"] = r.deficit;
    j["sigma"] = r.sigma;
    j["tolerance"] = r.tolerance;
    j["inputs"] = r.inputs;
    j["seed"] = seed_to_json(r.seed);
    j["pass"] = r.pass;
    return j;
}

inline Json to_json(const Quantiles& q)
{
    return Json{{"min", q.min}, {"q01", q.q01}, {"median", q.median}, {"q99", q.q99}, {"max", q.max}};
}

inline Json to_json(const SuiteViolation& v)
{
    return Json{{"index", v.index}, {"inequality", v.which}, {"residual", v.residual}, {"tuple", v.tuple}};
}

/// Pretty-printed with a trailing newline. Number formatting is the shortest
/// round-trip form, so equal values always print identically.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace wulff
