/**
 * @file algebra.hpp
 * @brief Selfinjective Nakayama algebras A(m, t) = K Q_m / rad^t.
 *
 * Q_m is the cyclic quiver with arrows i -> i+1 (mod m). Modules are right
 * modules, so paths act by right multiplication: the projective P_i = e_i A
 * has the paths starting at i as a basis, top S_i and socle S_{i+t-1}.
 */
#pragma once

#include <json.hpp>

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exactlin.hpp"

namespace nakayama {

/// A path of the cyclic quiver: `length` consecutive arrows leaving `start`.
struct Path {
    int start;
    int length;
};

class Algebra {
public:
    Algebra(int m, int t, FieldSpec field, int label_base = 0) : m_(m), t_(t), field_(field), label_base_(label_base) {
        if (m < 1) throw InvalidParameter("vertex count must be >= 1, got " + std::to_string(m));
        if (t < 1) throw InvalidParameter("radical length must be >= 1, got " + std::to_string(t));
        if (label_base != 0 && label_base != 1) throw InvalidParameter("label base must be 0 or 1");
        if (field.is_prime()) FieldSpec::prime(field.p);
    }

    int vertices() const { return m_; }
    int rad_length() const { return t_; }
    const FieldSpec& field() const { return field_; }
    /// Offset between internal 0-based vertices and the labels shown to users.
    int label_base() const { return label_base_; }

    int dimension() const { return m_ * t_; }

    int vertex(long long i) const {
        auto r = static_cast<int>(i % m_);
        return r < 0 ? r + m_ : r;
    }

    /// Basis of e_i A: the paths of length 0..t-1 leaving vertex i.
    std::vector<Path> path_basis(int i) const {
        std::vector<Path> out;
        for (int len = 0; len < t_; ++len) out.push_back({vertex(i), len});
        return out;
    }

    int path_end(const Path& p) const { return vertex(p.start + p.length); }

    bool is_semisimple() const { return t_ == 1; }

    friend bool operator==(const Algebra&, const Algebra&) = default;

private:
    int m_;
    int t_;
    FieldSpec field_;
    int label_base_;
};

inline Algebra build_nakayama(int m, int t, FieldSpec field = FieldSpec::prime(2), int label_base = 0) {
    return Algebra(m, t, field, label_base);
}

/// A bijection of {0, ..., m-1}.
class VertexPermutation {
public:
    explicit VertexPermutation(std::vector<int> images) : images_(std::move(images)) {
        std::vector<bool> seen(images_.size(), false);
        for (int v : images_) {
            if (v < 0 || static_cast<std::size_t>(v) >= images_.size() || seen[v]) {
                throw InvalidParameter("vertex map is not a bijection");
            }
            seen[v] = true;
        }
    }

    int operator()(int i) const { return images_.at(i); }
    std::size_t size() const { return images_.size(); }
    const std::vector<int>& images() const { return images_; }

    VertexPermutation inverse() const {
        std::vector<int> inv(images_.size());
        for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<int>(i);
        return VertexPermutation(std::move(inv));
    }

    /// Least k >= 1 with sigma^k = id.
    std::size_t order() const {
        std::size_t ord = 1;
        std::vector<bool> done(images_.size(), false);
        for (std::size_t i = 0; i < images_.size(); ++i) {
            if (done[i]) continue;
            std::size_t len = 0;
            for (std::size_t j = i; !done[j]; j = images_[j]) {
                done[j] = true;
                ++len;
            }
            ord = std::lcm(ord, len);
        }
        return ord;
    }

    friend bool operator==(const VertexPermutation&, const VertexPermutation&) = default;

private:
    std::vector<int> images_;
};

/// soc P_i = S_{nu(i)}: the end vertex of the unique basis path of e_i A that every arrow kills.
inline VertexPermutation nakayama_permutation(const Algebra& a) {
    std::vector<int> images;
    for (int i = 0; i < a.vertices(); ++i) {
        int soc = -1;
        for (const auto& p : a.path_basis(i)) {
            // p * arrow is a path of length p.length + 1, which vanishes exactly at length t.
            if (p.length + 1 >= a.rad_length()) soc = a.path_end(p);
        }
        images.push_back(soc);
    }
    return VertexPermutation(std::move(images));
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw ParseError(std::string("algebra spec: missing required field \"") + key + "\"", key);
    }
    return doc.at(key);
}

inline std::int64_t require_int(const nlohmann::json& doc, const char* key) {
    const auto& v = require(doc, key);
    if (!v.is_number_integer()) {
        throw ParseError(std::string("algebra spec: field \"") + key + "\" must be an integer", key);
    }
    return v.get<std::int64_t>();
}

}  // namespace detail

inline nlohmann::ordered_json algebra_to_json(const Algebra& a) {
    nlohmann::ordered_json doc;
    doc["kind"] = "nakayama_cyclic";
    doc["vertices"] = a.vertices();
    doc["rad_length"] = a.rad_length();
    if (a.field().is_prime()) {
        doc["field"] = {{"prime", a.field().p}};
    } else {
        doc["field"] = {{"rational", true}};
    }
    if (a.label_base() != 0) doc["label_base"] = a.label_base();
    return doc;
}

inline Algebra algebra_from_json(const nlohmann::json& doc) {
    const auto& kind = detail::require(doc, "kind");
    if (!kind.is_string() || kind.get<std::string>() != "nakayama_cyclic") {
        throw ParseError("algebra spec: field \"kind\" must be \"nakayama_cyclic\"", "kind");
    }
    auto m = detail::require_int(doc, "vertices");
    auto t = detail::require_int(doc, "rad_length");
    const auto& field = detail::require(doc, "field");
    FieldSpec spec;
    if (field.is_object() && field.contains("prime")) {
        if (!field["prime"].is_number_integer()) throw ParseError("algebra spec: field.prime must be an integer", "field");
        spec = FieldSpec::prime(field["prime"].get<std::int64_t>());
    } else if (field.is_object() && field.contains("rational") && field["rational"] == true) {
        spec = FieldSpec::rational();
    } else {
        throw ParseError("algebra spec: field must be {\"prime\": p} or {\"rational\": true}", "field");
    }
    int base = 0;
    if (doc.contains("label_base")) base = static_cast<int>(detail::require_int(doc, "label_base"));
    if (m > 1'000'000 || t > 1'000'000) throw InvalidParameter("algebra spec: parameters out of range");
    return Algebra(static_cast<int>(m), static_cast<int>(t), spec, base);
}

/// Parses an algebra spec document. Syntax errors report line and column.
inline Algebra load_algebra(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Recompute line/column from the byte offset nlohmann reports.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("algebra spec: syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what());
    }
    return algebra_from_json(doc);
}

inline std::string dump_algebra(const Algebra& a) { return algebra_to_json(a).dump(); }

}  // namespace nakayama
