#ifndef DBR_IO_HPP
#define DBR_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "kernel.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "space_spec.hpp"
#include "spectral.hpp"

namespace dbr {

using json = nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorKind::InvalidSpec, "expected a number or a [re, im] pair, got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const Poly& p) {
    json out = json::array();
    for (const cplx& c : p.coeffs()) out.push_back(to_json(c));
    return out;
}

inline Poly poly_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::InvalidSpec, "polynomial must be an array of [re, im] pairs");
    std::vector<cplx> c;
    for (const json& v : j) c.push_back(complex_from_json(v));
    return Poly(std::move(c));
}

inline json to_json(const RationalFn& f) { return {{"num", to_json(f.num())}, {"den", to_json(f.den())}}; }

inline RationalFn rational_from_json(const json& j) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        throw Error(ErrorKind::InvalidSpec, "rational function needs \"num\" and \"den\"");
    return RationalFn(poly_from_json(j.at("num")), poly_from_json(j.at("den")));
}

inline json to_json(const std::vector<RationalFn>& fs) {
    json out = json::array();
    for (const RationalFn& f : fs) out.push_back(to_json(f));
    return out;
}

inline std::vector<RationalFn> rationals_from_json(const json& j) {
    std::vector<RationalFn> out;
    for (const json& v : j) out.push_back(rational_from_json(v));
    return out;
}

inline json to_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

inline Matrix matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols)
            throw Error(ErrorKind::InvalidSpec, "ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
    return m;
}

inline json to_json(const SpaceSpec& spec) {
    json pts = json::array();
    for (const SpacePoint& p : spec.points()) {
        json w = json::array();
        for (const Poly& q : p.weights) w.push_back(to_json(q));
        pts.push_back({{"theta", p.theta}, {"m", p.m}, {"weights", std::move(w)}});
    }
    return {{"points", std::move(pts)}};
}

inline SpaceSpec spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("points") || !j.at("points").is_array())
        throw Error(ErrorKind::InvalidSpec, "spec must be an object with a \"points\" array");
    std::vector<SpacePoint> pts;
    for (const json& p : j.at("points")) {
        if (!p.is_object() || !p.contains("theta") || !p.contains("m") || !p.contains("weights"))
            throw Error(ErrorKind::InvalidSpec, "each point needs \"theta\", \"m\" and \"weights\"");
        if (!p.at("theta").is_number() || !p.at("m").is_number_integer() || !p.at("weights").is_array())
            throw Error(ErrorKind::InvalidSpec, "point fields have the wrong type: " + p.dump());
        SpacePoint sp{p.at("theta").get<double>(), p.at("m").get<int>(), {}};
        for (const json& w : p.at("weights")) sp.weights.push_back(poly_from_json(w));
        pts.push_back(std::move(sp));
    }
    return SpaceSpec(std::move(pts));
}

inline SpaceSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidSpec, "cannot open spec file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidSpec, "spec file " + path + " is not valid JSON: " + e.what());
    }
    return spec_from_json(j);
}

inline json to_json(const MateResult& m) {
    return {{"p_A", to_json(m.p_A)}, {"q", to_json(m.q)}, {"a", to_json(m.a)}, {"warnings", m.warnings}};
}

inline MateResult mate_from_json(const json& j) {
    MateResult m;
    m.p_A = poly_from_json(j.at("p_A"));
    m.q = poly_from_json(j.at("q"));
    m.a = rational_from_json(j.at("a"));
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    return m;
}

}  // namespace dbr

#endif  // DBR_IO_HPP
