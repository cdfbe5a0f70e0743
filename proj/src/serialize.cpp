#include "gse/serialize.hpp"

#include <stdexcept>

namespace gse {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(Eigen::Index(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j[size_t(i)].get<double>();
    return v;
}

// row-major nested arrays; an r x 0 matrix is stored as r empty rows
json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto r = j.at("rows").get<Eigen::Index>();
    const auto c = j.at("cols").get<Eigen::Index>();
    Eigen::MatrixXd m(r, c);
    const json& data = j.at("data");
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = data[size_t(i)][size_t(k)].get<double>();
    return m;
}

json to_json(const SetValue& s) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IntervalVector>) {
                return {{"type", "interval"},
                        {"fields", {{"lo", vector_to_json(v.lo)}, {"hi", vector_to_json(v.hi)}}}};
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                return {{"type", "ellipsoid"},
                        {"fields", {{"a", vector_to_json(v.a)}, {"P", matrix_to_json(v.P)}}}};
            } else if constexpr (std::is_same_v<T, Zonotope>) {
                return {{"type", "zonotope"},
                        {"fields", {{"c", vector_to_json(v.c)}, {"G", matrix_to_json(v.G)}}}};
            } else if constexpr (std::is_same_v<T, ConstrainedZonotope>) {
                return {{"type", "constrained_zonotope"},
                        {"fields",
                         {{"c", vector_to_json(v.c)},
                          {"G", matrix_to_json(v.G)},
                          {"A", matrix_to_json(v.A)},
                          {"b", vector_to_json(v.b)}}}};
            } else if constexpr (std::is_same_v<T, ZonotopeBundle>) {
                json members = json::array();
                for (const auto& z : v.members) members.push_back(to_json(SetValue{z}));
                return {{"type", "bundle"}, {"fields", {{"members", std::move(members)}}}};
            } else {
                static_assert(std::is_same_v<T, EmptySet>);
                return {{"type", "empty"}, {"fields", {{"dim", v.n}}}};
            }
        },
        s);
}

SetValue from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    const json& f = j.at("fields");
    if (type == "interval")
        return IntervalVector{vector_from_json(f.at("lo")), vector_from_json(f.at("hi"))};
    if (type == "ellipsoid")
        return Ellipsoid{vector_from_json(f.at("a")), matrix_from_json(f.at("P"))};
    if (type == "zonotope")
        return Zonotope{vector_from_json(f.at("c")), matrix_from_json(f.at("G"))};
    if (type == "constrained_zonotope")
        return ConstrainedZonotope{vector_from_json(f.at("c")), matrix_from_json(f.at("G")),
                                   matrix_from_json(f.at("A")), vector_from_json(f.at("b"))};
    if (type == "bundle") {
        std::vector<Zonotope> members;
        for (const auto& mj : f.at("members"))
            members.push_back(std::get<Zonotope>(from_json(mj)));
        return ZonotopeBundle{std::move(members)};
    }
    if (type == "empty") return EmptySet{f.at("dim").get<Eigen::Index>()};
    throw std::invalid_argument("from_json: unknown set type " + type);
}

}  // namespace gse
