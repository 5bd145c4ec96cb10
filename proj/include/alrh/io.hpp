#pragma once

// File formats:
//   field JSON     { "n_min": int, "q": [[re, im], ...], "t": real (optional) }
//   snapshot CSV   t,n,re,im
//   rgrid JSON     { "N": int, "t_ref": real, "r": [[re,im],...], "a": [[re,im],...], "c_minus_inf": real }
//   prediction JSON (every intermediate factor of the leading-order term)

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "alrh/asymptotics.hpp"
#include "alrh/errors.hpp"
#include "alrh/lattice.hpp"
#include "alrh/scattering.hpp"

namespace alrh::io {

using json = nlohmann::json;

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ConfigError("expected a complex number as [re, im]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline json complex_array(const std::vector<cplx>& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(complex_to_json(z));
    return a;
}

inline std::vector<cplx> complex_vector(const json& j) {
    if (!j.is_array()) throw ConfigError("expected an array of [re, im] pairs");
    std::vector<cplx> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(complex_from_json(e));
    return v;
}

/// Shortest round-trip decimal form; keeps CSV output bit-reproducible.
inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

inline void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

// Field

inline json field_to_json(const LatticeField& f) {
    return json{{"n_min", f.n_min}, {"q", complex_array(f.q)}, {"t", f.time}};
}

inline LatticeField field_from_json(const json& j) {
    try {
        LatticeField f;
        f.n_min = j.at("n_min").get<int>();
        f.q = complex_vector(j.at("q"));
        f.time = j.value("t", 0.0);
        if (f.q.empty()) throw ConfigError("field has no sites");
        detail::check_admissible(f.q, f.n_min, "field_from_json");
        return f;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed field JSON: ") + e.what());
    }
}

inline LatticeField read_field(const std::string& path) { return field_from_json(read_json_file(path)); }

inline void write_snapshots_csv(std::ostream& os, const std::vector<LatticeField>& snaps) {
    os << "t,n,re,im\n";
    for (const auto& s : snaps)
        for (int n = s.n_min; n <= s.n_max(); ++n) {
            const cplx q = s.at(n);
            os << fmt(s.time) << ',' << n << ',' << fmt(q.real()) << ',' << fmt(q.imag()) << '\n';
        }
}

// Reflection grid

inline json grid_to_json(const ReflectionGrid& g) {
    return json{{"N", g.size()},
                {"t_ref", g.t_ref},
                {"r", complex_array(g.r)},
                {"a", complex_array(g.a)},
                {"c_minus_inf", g.c_minus_inf}};
}

inline ReflectionGrid grid_from_json(const json& j) {
    try {
        ReflectionGrid g;
        const auto n = j.at("N").get<std::size_t>();
        g.r = complex_vector(j.at("r"));
        if (g.r.size() != n) throw ConfigError("rgrid: N does not match the length of r");
        if (!is_power_of_two(n) || n < 4) throw ConfigError("rgrid: N must be a power of two >= 4");
        if (j.contains("a")) {
            g.a = complex_vector(j.at("a"));
            if (g.a.size() != n) throw ConfigError("rgrid: a has the wrong length");
        }
        g.thetas = uniform_thetas(n);
        g.t_ref = j.value("t_ref", 0.0);
        g.c_minus_inf = j.value("c_minus_inf", 1.0);
        for (const auto& r : g.r)
            if (!(std::abs(r) < 1.0)) throw InconsistencyError("rgrid: |r| >= 1");
        return g;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed rgrid JSON: ") + e.what());
    }
}

inline ReflectionGrid read_grid(const std::string& path) { return grid_from_json(read_json_file(path)); }

// Prediction

inline json prediction_to_json(const ZMPrediction& p) {
    const auto& g = p.geometry;
    return json{
        {"n", p.n},
        {"t", p.t},
        {"xi", g.xi},
        {"S1", complex_to_json(g.S1)},
        {"S2", complex_to_json(g.S2)},
        {"r_S1", complex_to_json(g.r_S1)},
        {"r_S2", complex_to_json(g.r_S2)},
        {"nu1", g.nu1},
        {"nu2", g.nu2},
        {"phi_S1", g.phiS1},
        {"phi_S2", g.phiS2},
        {"beta1", complex_to_json(g.beta1)},
        {"beta2", complex_to_json(g.beta2)},
        {"beta1_reduced", complex_to_json(beta_reduced(g.xi, p.t, 1))},
        {"beta2_reduced", complex_to_json(beta_reduced(g.xi, p.t, 2))},
        {"delta0", complex_to_json(p.delta0)},
        {"delta0_inv", complex_to_json(p.delta0_inv)},
        {"alpha1", complex_to_json(p.alpha1)},
        {"alpha2", complex_to_json(p.alpha2)},
        {"delta10", complex_to_json(p.delta10)},
        {"delta20", complex_to_json(p.delta20)},
        {"m1_1", complex_to_json(p.m1_1)},
        {"m1_2", complex_to_json(p.m1_2)},
        {"prefactor", complex_to_json(p.prefactor)},
        {"q_pred", complex_to_json(p.q_pred)},
        {"abs_q_pred", std::abs(p.q_pred)},
        {"error_scale", p.error_scale},
        {"convention_dependent", p.convention_dependent},
    };
}

}  // namespace alrh::io
