// JSON serialization for the pencil file format, Monte Carlo estimates, and
// singular-point count reports. Field names are part of the file format and
// must not change.

#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "spectra/estimate.hpp"
#include "spectra/pencil.hpp"
#include "spectra/singular.hpp"

namespace spectra {

inline nlohmann::json seed_to_json(const RngStream& s) {
    return nlohmann::json{{"master", s.master_seed}, {"stream", s.stream_id}};
}

inline RngStream seed_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("master") || !j.contains("stream"))
        throw std::invalid_argument("seed JSON must be {\"master\", \"stream\"}");
    return RngStream{j.at("master").get<std::uint64_t>(), j.at("stream").get<std::uint64_t>()};
}

inline nlohmann::json pencil_to_json(const Pencil& p) {
    nlohmann::json matrices = nlohmann::json::array();
    for (const auto& q : p.Q) matrices.push_back(q.triangle());
    nlohmann::json j{{"n", p.n}, {"ell", p.ell}, {"matrices", std::move(matrices)}};
    j["seed"] = p.seed_provenance ? seed_to_json(*p.seed_provenance) : nlohmann::json(nullptr);
    return j;
}

inline Pencil pencil_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("pencil JSON must be an object");
    for (const char* key : {"n", "ell", "matrices"}) {
        if (!j.contains(key))
            throw std::invalid_argument(std::string("pencil JSON missing field \"") + key + "\"");
    }
    const int n = j.at("n").get<int>();
    const int ell = j.at("ell").get<int>();
    if (n < 1 || ell < 1) throw std::invalid_argument("pencil JSON: need n >= 1 and ell >= 1");
    const auto& mats = j.at("matrices");
    if (!mats.is_array() || mats.size() != static_cast<std::size_t>(ell))
        throw std::invalid_argument("pencil JSON: \"matrices\" must hold exactly ell entries");
    std::vector<SymMatrix> q;
    q.reserve(static_cast<std::size_t>(ell));
    for (const auto& m : mats) {
        auto tri = m.get<std::vector<double>>();
        if (tri.size() != SymMatrix::triangle_size(n))
            throw std::invalid_argument("pencil JSON: matrix triangle has the wrong length");
        q.emplace_back(n, std::move(tri));
    }
    std::optional<RngStream> seed;
    if (j.contains("seed") && !j.at("seed").is_null()) seed = seed_from_json(j.at("seed"));
    return Pencil(n, ell, std::move(q), seed);
}

inline void save_pencil(const Pencil& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_pencil: cannot open " + path);
    out << pencil_to_json(p).dump(2) << "\n";
}

inline Pencil load_pencil(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_pencil: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return pencil_from_json(j);
}

inline nlohmann::json estimate_to_json(const Estimate& e) {
    return nlohmann::json{{"value", e.value},
                          {"std_error", e.std_error},
                          {"samples", e.samples},
                          {"ci95", {e.ci95[0], e.ci95[1]}},
                          {"seed", seed_to_json(e.seed)}};
}

inline nlohmann::json node_config_to_json(const NodeSearchConfig& cfg) {
    return nlohmann::json{{"lattice_points", cfg.lattice_points},
                          {"capture_factor", cfg.capture_factor},
                          {"cluster_radius", cfg.cluster_radius},
                          {"newton_switch_rel", cfg.newton_switch_rel},
                          {"target_gap_rel", cfg.target_gap_rel},
                          {"initial_reject_rel", cfg.initial_reject_rel},
                          {"max_descent_iters", cfg.max_descent_iters},
                          {"max_newton_iters", cfg.max_newton_iters}};
}

inline nlohmann::json count_report_to_json(const CountReport& r) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : r.records) {
        records.push_back(nlohmann::json{
            {"direction", {rec.direction[0], rec.direction[1], rec.direction[2]}},
            {"pair", rec.pair_index},
            {"gap", rec.refined_gap},
            {"s3_point", {rec.s3_point[0], rec.s3_point[1], rec.s3_point[2], rec.s3_point[3]}},
            {"on_boundary", rec.on_boundary}});
    }
    return nlohmann::json{{"rho", r.rho},
                          {"sigma", r.sigma},
                          {"records", std::move(records)},
                          {"flags", r.flags},
                          {"config", node_config_to_json(r.config)}};
}

} // namespace spectra
