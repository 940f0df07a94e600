#pragma once

// JSON constraint file:
//   {"n": 5, "m": 5, "constraints": [
//     {"name": "phi2",
//      "pre": [{"coeffs": [1,0,0,0,0], "op": ">=", "bound": 55947.691}],
//      "post": {"or": [{"lt": [1,0]}, {"lt": [2,0]}]}}]}
// {"lt": [i, j]} means y_i < y_j; "pre": [] means true.

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "scnet/constraints.hpp"
#include "scnet/errors.hpp"

namespace scnet {

namespace detail {

using json = nlohmann::json;

inline const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(ParseErrorKind::Schema, where, std::string("missing key '") + key + "'");
    }
    return *it;
}

inline std::size_t read_count(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw ParseError(ParseErrorKind::Schema, where, "expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

inline double read_real(const json& j, const std::string& where) {
    if (!j.is_number()) {
        throw ParseError(ParseErrorKind::Schema, where, "expected a number");
    }
    return j.get<double>();
}

inline CompareOp read_op(const json& j, const std::string& where) {
    if (!j.is_string()) {
        throw ParseError(ParseErrorKind::Schema, where, "op must be a string");
    }
    const auto s = j.get<std::string>();
    if (s == "<=") return CompareOp::Le;
    if (s == ">=") return CompareOp::Ge;
    if (s == "<") return CompareOp::Lt;
    if (s == ">") return CompareOp::Gt;
    throw ParseError(ParseErrorKind::UnknownOp, where, "unknown comparison '" + s + "'");
}

inline OrderingFormula read_formula(const json& j, std::size_t m, const std::string& where) {
    if (!j.is_object() || j.size() != 1) {
        throw ParseError(ParseErrorKind::Schema, where,
                         "formula must be an object with exactly one of lt/and/or");
    }
    const auto& [key, body] = *j.items().begin();
    const std::string here = where + "/" + key;
    if (key == "lt") {
        if (!body.is_array() || body.size() != 2) {
            throw ParseError(ParseErrorKind::Schema, here, "lt takes two indices");
        }
        const auto lesser = read_count(body[0], here + "/0");
        const auto greater = read_count(body[1], here + "/1");
        if (lesser >= m) {
            throw ParseError(ParseErrorKind::IndexOutOfRange, here + "/0",
                             "index " + std::to_string(lesser) + " >= m = " + std::to_string(m));
        }
        if (greater >= m) {
            throw ParseError(ParseErrorKind::IndexOutOfRange, here + "/1",
                             "index " + std::to_string(greater) + " >= m = " + std::to_string(m));
        }
        if (lesser == greater) {
            throw ParseError(ParseErrorKind::Schema, here, "literal compares an index with itself");
        }
        return OrderingFormula::literal(lesser, greater);
    }
    if (key == "and" || key == "or") {
        if (!body.is_array() || body.empty()) {
            throw ParseError(ParseErrorKind::Schema, here, key + " needs a non-empty array");
        }
        std::vector<OrderingFormula> children;
        children.reserve(body.size());
        for (std::size_t i = 0; i < body.size(); ++i) {
            children.push_back(read_formula(body[i], m, here + "/" + std::to_string(i)));
        }
        return key == "and" ? OrderingFormula::all_of(std::move(children))
                            : OrderingFormula::any_of(std::move(children));
    }
    throw ParseError(ParseErrorKind::UnknownOp, here, "unknown formula node '" + key + "'");
}

inline json write_formula(const OrderingFormula& f) {
    switch (f.kind()) {
    case OrderingFormula::Kind::Literal:
        return json{{"lt", json::array({f.lit().lesser, f.lit().greater})}};
    case OrderingFormula::Kind::And:
    case OrderingFormula::Kind::Or: {
        json children = json::array();
        for (const auto& c : f.children()) {
            children.push_back(write_formula(c));
        }
        return json{{f.kind() == OrderingFormula::Kind::And ? "and" : "or", std::move(children)}};
    }
    case OrderingFormula::Kind::Top: break;
    }
    throw ContractViolation("the true formula has no constraint-file encoding");
}

} // namespace detail

[[nodiscard]] inline ConstraintSet parse_constraints(std::string_view text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(ParseErrorKind::MalformedJson, "byte " + std::to_string(e.byte), e.what());
    }
    if (!doc.is_object()) {
        throw ParseError(ParseErrorKind::Schema, "", "top level must be an object");
    }
    ConstraintSet phi;
    phi.n = detail::read_count(detail::require(doc, "n", ""), "/n");
    phi.m = detail::read_count(detail::require(doc, "m", ""), "/m");
    if (phi.m == 0) {
        throw ParseError(ParseErrorKind::Schema, "/m", "m must be at least 1");
    }
    const auto& list = detail::require(doc, "constraints", "");
    if (!list.is_array()) {
        throw ParseError(ParseErrorKind::Schema, "/constraints", "expected an array");
    }
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string where = "/constraints/" + std::to_string(k);
        const auto& entry = list[k];
        if (!entry.is_object()) {
            throw ParseError(ParseErrorKind::Schema, where, "expected an object");
        }
        SafeOrderingConstraint c;
        if (auto it = entry.find("name"); it != entry.end()) {
            if (!it->is_string()) {
                throw ParseError(ParseErrorKind::Schema, where + "/name", "expected a string");
            }
            c.name = it->get<std::string>();
        } else {
            c.name = "c" + std::to_string(k);
        }
        const auto& pre = detail::require(entry, "pre", where);
        if (!pre.is_array()) {
            throw ParseError(ParseErrorKind::Schema, where + "/pre", "expected an array of atoms");
        }
        for (std::size_t a = 0; a < pre.size(); ++a) {
            const std::string at = where + "/pre/" + std::to_string(a);
            if (!pre[a].is_object()) {
                throw ParseError(ParseErrorKind::Schema, at, "expected an object");
            }
            LinearAtom atom;
            const auto& coeffs = detail::require(pre[a], "coeffs", at);
            if (!coeffs.is_array()) {
                throw ParseError(ParseErrorKind::Schema, at + "/coeffs", "expected an array");
            }
            if (coeffs.size() != phi.n) {
                throw ParseError(ParseErrorKind::CoeffLength, at + "/coeffs",
                                 "has " + std::to_string(coeffs.size()) + " entries, n = " +
                                     std::to_string(phi.n));
            }
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                atom.coeffs.push_back(
                    detail::read_real(coeffs[i], at + "/coeffs/" + std::to_string(i)));
            }
            atom.op = detail::read_op(detail::require(pre[a], "op", at), at + "/op");
            atom.bound = detail::read_real(detail::require(pre[a], "bound", at), at + "/bound");
            c.pre.atoms.push_back(std::move(atom));
        }
        c.post = detail::read_formula(detail::require(entry, "post", where), phi.m, where + "/post");
        phi.constraints.push_back(std::move(c));
    }
    return phi;
}

[[nodiscard]] inline std::string serialize_constraints(const ConstraintSet& phi, int indent = -1) {
    using detail::json;
    json list = json::array();
    for (const auto& c : phi.constraints) {
        json pre = json::array();
        for (const auto& a : c.pre.atoms) {
            pre.push_back(json{{"coeffs", a.coeffs}, {"op", to_string(a.op)}, {"bound", a.bound}});
        }
        list.push_back(json{{"name", c.name}, {"pre", std::move(pre)},
                            {"post", detail::write_formula(c.post)}});
    }
    json doc{{"n", phi.n}, {"m", phi.m}, {"constraints", std::move(list)}};
    return doc.dump(indent);
}

} // namespace scnet
