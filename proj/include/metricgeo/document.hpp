#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "metricgeo/divergence.hpp"
#include "metricgeo/errors.hpp"
#include "metricgeo/metric_graph.hpp"
#include "metricgeo/morse.hpp"
#include "metricgeo/projection.hpp"
#include "metricgeo/spaces.hpp"

namespace metricgeo {

inline constexpr int kFormatVersion = 1;

/// 9 significant digits; infinity spelled `inf`.
inline std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

using Json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown_keys(const Json& j, const std::set<std::string>& known,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw Error(errc::bad_input,
                        "unknown key '" + it.key() + "' in " + where);
}

} // namespace detail

inline Json space_to_json(const MarkedSpace& s) {
    Json j;
    j["format_version"] = kFormatVersion;
    j["resolution"] = s.graph.resolution();
    j["vertex_count"] = s.graph.vertex_count();
    Json edges = Json::array();
    // Emit the canonical CSR content: each undirected edge once, (u < v),
    // sorted. This makes emit deterministic regardless of construction order.
    for (VertexId u = 0; u < s.graph.vertex_count(); ++u)
        s.graph.for_each_neighbor(u, [&](VertexId v, Length w) {
            if (u < v) edges.push_back(Json::array({u, v, w}));
        });
    j["edges"] = std::move(edges);
    Json marks;
    marks["Y"] = s.Y;
    if (s.gamma) marks["gamma"] = s.gamma->points;
    j["marks"] = std::move(marks);
    Json lm;
    for (const auto& [name, v] : s.landmarks) lm[name] = v;
    j["landmarks"] = std::move(lm);
    Json meta;
    meta["family"] = s.meta.family;
    Json params;
    for (const auto& [k, v] : s.meta.params) params[k] = v;
    meta["params"] = std::move(params);
    Json fns;
    for (const auto& [k, v] : s.meta.fn_params) fns[k] = v;
    meta["fn_params"] = std::move(fns);
    meta["truncation_index"] = s.meta.truncation_index;
    meta["extent"] = s.meta.extent;
    meta["valid_radius"] = s.meta.valid_radius;
    Json rl = Json::array();
    for (const auto& [label, delta] : s.meta.rounding_log)
        rl.push_back(Json::array({label, delta}));
    meta["rounding_log"] = std::move(rl);
    j["meta"] = std::move(meta);
    return j;
}

inline MarkedSpace space_from_json(const Json& j) {
    detail::reject_unknown_keys(j,
                                {"format_version", "resolution", "vertex_count",
                                 "edges", "marks", "landmarks", "meta"},
                                "document root");
    if (!j.contains("format_version"))
        throw Error(errc::bad_input, "missing format_version");
    if (j.at("format_version").get<int>() != kFormatVersion)
        throw Error(errc::bad_input, "unsupported format_version");
    for (const char* key : {"resolution", "vertex_count", "edges", "marks",
                            "landmarks", "meta"})
        if (!j.contains(key))
            throw Error(errc::bad_input, std::string("missing key '") + key + "'");
    std::size_t n = j.at("vertex_count").get<std::size_t>();
    double resolution = j.at("resolution").get<double>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3)
            throw Error(errc::bad_input, "edge must be a [u, v, w] triple");
        edges.push_back({e[0].get<VertexId>(), e[1].get<VertexId>(),
                         e[2].get<double>()});
    }
    const Json& marks = j.at("marks");
    detail::reject_unknown_keys(marks, {"Y", "gamma"}, "marks");
    if (!marks.contains("Y")) throw Error(errc::bad_input, "missing marks.Y");
    MarkedSpace s{MetricGraph(n, edges, resolution), {}, std::nullopt, {}, {}};
    for (const auto& v : marks.at("Y")) {
        VertexId id = v.get<VertexId>();
        if (id >= n) throw Error(errc::bad_input, "Y vertex out of range");
        s.Y.push_back(id);
    }
    if (s.Y.empty()) throw Error(errc::bad_input, "marks.Y must be non-empty");
    if (marks.contains("gamma")) {
        std::vector<VertexId> gpts;
        for (const auto& v : marks.at("gamma")) {
            VertexId id = v.get<VertexId>();
            if (id >= n) throw Error(errc::bad_input, "gamma vertex out of range");
            gpts.push_back(id);
        }
        if (gpts != s.Y)
            throw Error(errc::bad_input, "gamma must traverse exactly Y in order");
        s.gamma = s.graph.make_path(gpts);
    }
    for (auto it = j.at("landmarks").begin(); it != j.at("landmarks").end(); ++it) {
        VertexId id = it.value().get<VertexId>();
        if (id >= n) throw Error(errc::bad_input, "landmark out of range");
        s.landmarks[it.key()] = id;
    }
    const Json& meta = j.at("meta");
    detail::reject_unknown_keys(meta,
                                {"family", "params", "fn_params",
                                 "truncation_index", "extent", "valid_radius",
                                 "rounding_log"},
                                "meta");
    s.meta.family = meta.at("family").get<std::string>();
    for (auto it = meta.at("params").begin(); it != meta.at("params").end(); ++it)
        s.meta.params[it.key()] = it.value().get<double>();
    for (auto it = meta.at("fn_params").begin(); it != meta.at("fn_params").end(); ++it)
        s.meta.fn_params[it.key()] = it.value().get<std::string>();
    s.meta.truncation_index = meta.at("truncation_index").get<std::size_t>();
    s.meta.extent = meta.at("extent").get<double>();
    s.meta.valid_radius = meta.at("valid_radius").get<double>();
    for (const auto& e : meta.at("rounding_log"))
        s.meta.rounding_log.emplace_back(e[0].get<std::string>(), e[1].get<double>());
    return s;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::bad_input, "cannot open '" + path + "' for writing");
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::bad_input, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void save_space(const MarkedSpace& s, const std::string& path) {
    write_text_file(path, space_to_json(s).dump(2) + "\n");
}

inline MarkedSpace load_space(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::bad_input, std::string("malformed document: ") + e.what());
    }
    return space_from_json(j);
}

/// CSV with header `r,value,witness_<name>...`; witness columns are the
/// sorted union of witness keys, blank where a sample lacks one.
inline std::string profile_to_csv(const Profile& prof) {
    std::set<std::string> keys;
    for (const ProfileSample& s : prof.samples)
        for (const auto& [k, v] : s.witness) keys.insert(k);
    std::ostringstream out;
    out << "r,value";
    for (const auto& k : keys) out << ",witness_" << k;
    out << "\n";
    for (const ProfileSample& s : prof.samples) {
        out << format_number(s.r) << "," << format_number(s.value);
        for (const auto& k : keys) {
            out << ",";
            auto it = s.witness.find(k);
            if (it != s.witness.end() && it->second != kNoVertex) out << it->second;
        }
        out << "\n";
    }
    return out.str();
}

inline std::string divergence_to_csv(const DivergenceProfile& prof) {
    std::ostringstream out;
    out << "r,value,witness_s,witness_center,witness_from,witness_to\n";
    for (const DivergenceSample& s : prof.samples) {
        out << format_number(s.r) << ","
            << (s.value ? format_number(*s.value) : "inf") << ","
            << format_number(s.witness_s) << "," << s.center << "," << s.from << ","
            << s.to << "\n";
    }
    return out.str();
}

inline std::string morse_to_csv(const MorseProfileResult& m) {
    std::ostringstream out;
    out << "L,r,value,witness_y1,witness_y2,witness_w\n";
    for (std::size_t li = 0; li < m.L_grid.size(); ++li)
        for (const ProfileSample& s : m.per_L[li].samples) {
            out << format_number(m.L_grid[li]) << "," << format_number(s.r) << ","
                << format_number(s.value);
            for (const char* k : {"y1", "y2", "w"}) {
                out << ",";
                auto it = s.witness.find(k);
                if (it != s.witness.end()) out << it->second;
            }
            out << "\n";
        }
    return out.str();
}

inline std::string geo_image_to_csv(const GeoImageProfile& g) {
    std::ostringstream out;
    out << "diam_proj,max_endpoint_dist,max_interior_dist,witness_x,witness_y\n";
    for (const GeoImageSample& s : g.samples)
        out << format_number(s.diam_proj) << ","
            << format_number(s.max_endpoint_dist) << ","
            << format_number(s.max_interior_dist) << "," << s.x << "," << s.y
            << "\n";
    return out.str();
}

/// Reproducibility block echoed into every report.
struct RunConfig {
    std::uint64_t seed = 12345;
    unsigned jobs = 1;
    double epsilon = 0.0;
    std::string out_dir = ".";

    Json to_json() const {
        Json j;
        j["seed"] = seed;
        j["jobs"] = jobs;
        j["epsilon"] = epsilon;
        j["out_dir"] = out_dir;
        return j;
    }
};

} // namespace metricgeo
