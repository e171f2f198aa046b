/**
 * @file modrep.hpp
 * @brief Modules over A(m, t) as representations of the cyclic quiver.
 *
 * A module stores one vector space per vertex and one matrix per arrow
 * (arrow j maps the space at j to the space at j+1). Every indecomposable is
 * an interval module M[i, l]: uniserial with top S_i and composition factors
 * S_i, S_{i+1}, ..., S_{i+l-1}.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "exactlin.hpp"

namespace nakayama {

struct IntervalLabel {
    int top;
    int length;

    friend auto operator<=>(const IntervalLabel&, const IntervalLabel&) = default;
};

/// Sorted multiset of interval labels.
using CanonicalForm = std::vector<IntervalLabel>;

inline bool is_projective_label(const Algebra& a, const IntervalLabel& l) { return l.length == a.rad_length(); }

inline std::string format_label(const Algebra& a, const IntervalLabel& l) {
    int shown = l.top + a.label_base();
    if (l.length == a.rad_length()) return "P_" + std::to_string(shown);
    if (l.length == 1) return "S_" + std::to_string(shown);
    return "M[" + std::to_string(shown) + "," + std::to_string(l.length) + "]";
}

inline std::string format_labels(const Algebra& a, const std::vector<IntervalLabel>& labels,
                                 std::string_view sep = "+") {
    if (labels.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (k) out += sep;
        out += format_label(a, labels[k]);
    }
    return out;
}

namespace detail {

inline int parse_int(std::string_view s, std::string_view whole) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }) ||
        s.size() > 9) {
        throw ParseError("bad module literal \"" + std::string(whole) + "\"", "module");
    }
    return std::stoi(std::string(s));
}

inline std::string strip(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    }
    return out;
}

}  // namespace detail

/// Parses one of "S_i", "P_i", "M[i,l]" (user labels, offset by the algebra's label base).
inline IntervalLabel parse_label(const Algebra& a, std::string_view text) {
    std::string s = detail::strip(text);
    int vertex = 0, length = 0;
    if (s.size() > 2 && (s[0] == 'S' || s[0] == 'P') && s[1] == '_') {
        auto body = std::string_view(s).substr(2);
        if (body.size() > 2 && body.front() == '{' && body.back() == '}') body = body.substr(1, body.size() - 2);
        vertex = detail::parse_int(body, text);
        length = s[0] == 'S' ? 1 : a.rad_length();
    } else if (s.size() > 4 && s[0] == 'M' && s[1] == '[' && s.back() == ']') {
        auto body = std::string_view(s).substr(2, s.size() - 3);
        auto comma = body.find(',');
        if (comma == std::string_view::npos) throw ParseError("bad module literal \"" + std::string(text) + "\"", "module");
        vertex = detail::parse_int(body.substr(0, comma), text);
        length = detail::parse_int(body.substr(comma + 1), text);
    } else {
        throw ParseError("unknown module literal \"" + std::string(text) + "\"", "module");
    }
    int internal = vertex - a.label_base();
    if (internal < 0 || internal >= a.vertices()) {
        throw ParseError("vertex " + std::to_string(vertex) + " out of range in \"" + std::string(text) + "\"", "module");
    }
    if (length < 1 || length > a.rad_length()) {
        throw InvalidParameter("interval length " + std::to_string(length) + " outside [1, " +
                               std::to_string(a.rad_length()) + "]");
    }
    return {internal, length};
}

/// Parses a '+'-separated (or ','-separated outside brackets) list of labels; "0" is the empty sum.
inline std::vector<IntervalLabel> parse_labels(const Algebra& a, std::string_view text) {
    std::vector<IntervalLabel> out;
    std::string s = detail::strip(text);
    if (s == "0") return out;
    std::string token;
    int depth = 0;
    auto flush = [&] {
        if (token.empty()) throw ParseError("empty summand in module literal \"" + std::string(text) + "\"", "module");
        out.push_back(parse_label(a, token));
        token.clear();
    };
    for (char c : s) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if ((c == '+' || (c == ',' && depth == 0))) {
            flush();
        } else {
            token += c;
        }
    }
    flush();
    return out;
}

namespace detail {
struct ShapesOnly {};
inline constexpr ShapesOnly shapes_only{};
}  // namespace detail

/// A finite-dimensional right A-module as a representation of the cyclic quiver.
template <ExactField F>
class Module {
public:
    using matrix_type = Matrix<F>;

    Module(Algebra algebra, std::vector<std::size_t> dims, std::vector<matrix_type> arrows)
        : Module(std::move(algebra), std::move(dims), std::move(arrows), detail::shapes_only) {
        for (int i = 0; i < algebra_.vertices(); ++i) {
            if (!path_map(i, algebra_.rad_length()).is_zero()) {
                throw InvalidParameter("a path of length t acts nonzero: relation rad^t = 0 violated");
            }
        }
    }

    /// Skips the relation check; for constructions that preserve it, such as direct sums.
    Module(Algebra algebra, std::vector<std::size_t> dims, std::vector<matrix_type> arrows, detail::ShapesOnly)
        : algebra_(std::move(algebra)),
          field_(algebra_.field()),
          dims_(std::move(dims)),
          arrows_(std::make_shared<const std::vector<matrix_type>>(std::move(arrows))) {
        const auto m = static_cast<std::size_t>(algebra_.vertices());
        if (dims_.size() != m || arrows_->size() != m) {
            throw DimensionMismatch("module needs one space and one arrow per vertex");
        }
        for (std::size_t j = 0; j < m; ++j) {
            const auto& arr = (*arrows_)[j];
            arr.check_field(matrix_type(field_));
            if (arr.cols() != dims_[j] || arr.rows() != dims_[(j + 1) % m]) {
                throw DimensionMismatch("arrow " + std::to_string(j) + " has shape " + arr.shape());
            }
        }
    }

    static Module zero(const Algebra& a) {
        F f(a.field());
        std::vector<matrix_type> arrows(a.vertices(), matrix_type(f));
        return Module(a, std::vector<std::size_t>(a.vertices(), 0), std::move(arrows));
    }

    const Algebra& algebra() const { return algebra_; }
    const F& field() const { return field_; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t dim(int vertex) const { return dims_[algebra_.vertex(vertex)]; }
    std::size_t total_dim() const {
        std::size_t s = 0;
        for (auto d : dims_) s += d;
        return s;
    }
    bool is_zero() const { return total_dim() == 0; }

    /// Arrow leaving vertex j.
    const matrix_type& arrow(int j) const { return (*arrows_)[algebra_.vertex(j)]; }

    /// Action of the path of the given length leaving vertex i.
    matrix_type path_map(int i, int length) const {
        i = algebra_.vertex(i);
        if (length == 0) return matrix_type::identity(field_, dims_[i]);
        matrix_type acc = arrow(i);
        for (int k = 1; k < length; ++k) acc = arrow(i + k) * acc;
        return acc;
    }

    void check_same_algebra(const Module& other) const {
        if (!(algebra_ == other.algebra_)) throw AlgebraMismatch("modules over different algebras");
    }

    friend bool operator==(const Module& a, const Module& b) {
        if (!(a.algebra_ == b.algebra_) || a.dims_ != b.dims_) return false;
        return a.arrows_ == b.arrows_ || *a.arrows_ == *b.arrows_;
    }

private:
    Algebra algebra_;
    F field_;
    std::vector<std::size_t> dims_;
    // Immutable, so copies share it.
    std::shared_ptr<const std::vector<matrix_type>> arrows_;
};

/// Per-vertex linear maps intertwining the arrow actions.
template <ExactField F>
class Morphism {
public:
    using matrix_type = Matrix<F>;

    Morphism(Module<F> source, Module<F> target, std::vector<matrix_type> maps)
        : source_(std::move(source)), target_(std::move(target)), maps_(std::move(maps)) {
        source_.check_same_algebra(target_);
        const int m = source_.algebra().vertices();
        if (maps_.size() != static_cast<std::size_t>(m)) throw DimensionMismatch("morphism needs one map per vertex");
        for (int v = 0; v < m; ++v) {
            if (maps_[v].rows() != target_.dim(v) || maps_[v].cols() != source_.dim(v)) {
                throw DimensionMismatch("morphism block at vertex " + std::to_string(v) + " has shape " +
                                        maps_[v].shape());
            }
        }
    }

    static Morphism zero(const Module<F>& source, const Module<F>& target) {
        std::vector<matrix_type> maps;
        for (int v = 0; v < source.algebra().vertices(); ++v) {
            maps.emplace_back(source.field(), target.dim(v), source.dim(v));
        }
        return Morphism(source, target, std::move(maps));
    }

    static Morphism identity(const Module<F>& m) {
        std::vector<matrix_type> maps;
        for (int v = 0; v < m.algebra().vertices(); ++v) maps.push_back(matrix_type::identity(m.field(), m.dim(v)));
        return Morphism(m, m, std::move(maps));
    }

    const Module<F>& source() const { return source_; }
    const Module<F>& target() const { return target_; }
    const matrix_type& at(int vertex) const { return maps_[source_.algebra().vertex(vertex)]; }
    const std::vector<matrix_type>& maps() const { return maps_; }

    bool intertwines() const {
        for (int v = 0; v < source_.algebra().vertices(); ++v) {
            if (!(target_.arrow(v) * at(v) == at(v + 1) * source_.arrow(v))) return false;
        }
        return true;
    }

    bool is_zero() const {
        return std::all_of(maps_.begin(), maps_.end(), [](const auto& m) { return m.is_zero(); });
    }

    std::size_t rank() const {
        std::size_t r = 0;
        for (const auto& m : maps_) r += nakayama::rank(m);
        return r;
    }
    bool is_injective() const { return rank() == source_.total_dim(); }
    bool is_surjective() const { return rank() == target_.total_dim(); }

    /// this after other (other: X -> source, result: X -> target).
    Morphism after(const Morphism& other) const {
        if (!(other.target_ == source_)) throw DimensionMismatch("composition of non-composable morphisms");
        std::vector<matrix_type> maps;
        for (int v = 0; v < source_.algebra().vertices(); ++v) maps.push_back(at(v) * other.at(v));
        return Morphism(other.source_, target_, std::move(maps));
    }

    friend bool operator==(const Morphism&, const Morphism&) = default;

private:
    Module<F> source_;
    Module<F> target_;
    std::vector<matrix_type> maps_;
};

/// Uniserial module with top S_i and length l. Basis at each vertex ordered by depth below the top.
template <ExactField F>
Module<F> interval_module(const Algebra& a, int top, int length) {
    if (length < 1 || length > a.rad_length()) {
        throw InvalidParameter("interval length " + std::to_string(length) + " outside [1, " +
                               std::to_string(a.rad_length()) + "]");
    }
    F f(a.field());
    const int m = a.vertices();
    top = a.vertex(top);
    std::vector<std::size_t> dims(m, 0);
    // Position of depth o inside the space at vertex top+o.
    std::vector<std::size_t> slot(length);
    for (int o = 0; o < length; ++o) slot[o] = dims[a.vertex(top + o)]++;
    std::vector<Matrix<F>> arrows;
    for (int j = 0; j < m; ++j) arrows.emplace_back(f, dims[a.vertex(j + 1)], dims[j]);
    for (int o = 0; o + 1 < length; ++o) {
        int v = a.vertex(top + o);
        arrows[v](slot[o + 1], slot[o]) = f.one();
    }
    return Module<F>(a, std::move(dims), std::move(arrows));
}

template <ExactField F>
Module<F> interval_module(const Algebra& a, const IntervalLabel& l) {
    return interval_module<F>(a, l.top, l.length);
}

template <ExactField F>
Module<F> simple_module(const Algebra& a, int i) {
    return interval_module<F>(a, i, 1);
}

template <ExactField F>
Module<F> projective_module(const Algebra& a, int i) {
    return interval_module<F>(a, i, a.rad_length());
}

/// Block-diagonal direct sum. Needs the algebra for the empty sum.
template <ExactField F>
Module<F> direct_sum(const Algebra& a, const std::vector<Module<F>>& parts) {
    F f(a.field());
    const int m = a.vertices();
    std::vector<std::size_t> dims(m, 0);
    std::vector<Matrix<F>> arrows;
    for (const auto& p : parts) {
        if (!(p.algebra() == a)) throw AlgebraMismatch("direct sum of modules over different algebras");
        for (int v = 0; v < m; ++v) dims[v] += p.dim(v);
    }
    for (int j = 0; j < m; ++j) {
        std::vector<Matrix<F>> blocks;
        for (const auto& p : parts) blocks.push_back(p.arrow(j));
        arrows.push_back(block_diagonal(f, blocks));
    }
    return Module<F>(a, std::move(dims), std::move(arrows), detail::shapes_only);
}

template <ExactField F>
Module<F> direct_sum(const std::vector<Module<F>>& parts) {
    if (parts.empty()) throw InvalidParameter("empty direct sum needs an explicit algebra");
    return direct_sum(parts.front().algebra(), parts);
}

template <ExactField F>
Module<F> module_from_labels(const Algebra& a, const std::vector<IntervalLabel>& labels) {
    std::vector<Module<F>> parts;
    for (const auto& l : labels) parts.push_back(interval_module<F>(a, l));
    return direct_sum(a, parts);
}

/// Hom(M, N) as the null space of the intertwining equations. Basis columns are
/// morphisms flattened vertex by vertex, each block row-major.
template <ExactField F>
struct HomSpace {
    std::vector<std::size_t> offsets;
    Matrix<F> basis;

    std::size_t dim() const { return basis.cols(); }
};

namespace detail {

template <ExactField F>
std::vector<std::size_t> hom_offsets(const Module<F>& source, const Module<F>& target) {
    std::vector<std::size_t> off;
    std::size_t acc = 0;
    for (int v = 0; v < source.algebra().vertices(); ++v) {
        off.push_back(acc);
        acc += target.dim(v) * source.dim(v);
    }
    off.push_back(acc);
    return off;
}

}  // namespace detail

template <ExactField F>
HomSpace<F> hom_space(const Module<F>& source, const Module<F>& target) {
    source.check_same_algebra(target);
    const F& f = source.field();
    const int m = source.algebra().vertices();
    auto off = detail::hom_offsets(source, target);
    const std::size_t unknowns = off.back();

    std::size_t equations = 0;
    for (int v = 0; v < m; ++v) equations += target.dim(v + 1) * source.dim(v);
    Matrix<F> sys(f, equations, unknowns);

    // target.arrow(v) * f_v - f_{v+1} * source.arrow(v) = 0, entry (r, c).
    std::size_t row = 0;
    for (int v = 0; v < m; ++v) {
        const int w = source.algebra().vertex(v + 1);
        const auto& ta = target.arrow(v);
        const auto& sa = source.arrow(v);
        const std::size_t sv = source.dim(v), tv = target.dim(v), tw = target.dim(w), sw = source.dim(w);
        for (std::size_t r = 0; r < tw; ++r) {
            for (std::size_t c = 0; c < sv; ++c, ++row) {
                for (std::size_t k = 0; k < tv; ++k) {
                    if (!f.is_zero(ta(r, k))) {
                        auto& e = sys(row, off[v] + k * sv + c);
                        e = f.add(e, ta(r, k));
                    }
                }
                for (std::size_t k = 0; k < sw; ++k) {
                    if (!f.is_zero(sa(k, c))) {
                        auto& e = sys(row, off[w] + r * sw + k);
                        e = f.sub(e, sa(k, c));
                    }
                }
            }
        }
    }
    return {off, kernel_basis(sys)};
}

/// Unpacks column `col` of a flattened Hom basis (or any flattened morphism matrix).
template <ExactField F>
Morphism<F> unflatten(const Module<F>& source, const Module<F>& target, const Matrix<F>& flat, std::size_t col) {
    auto off = detail::hom_offsets(source, target);
    std::vector<Matrix<F>> maps;
    for (int v = 0; v < source.algebra().vertices(); ++v) {
        Matrix<F> block(source.field(), target.dim(v), source.dim(v));
        for (std::size_t r = 0; r < block.rows(); ++r)
            for (std::size_t c = 0; c < block.cols(); ++c) block(r, c) = flat(off[v] + r * block.cols() + c, col);
        maps.push_back(std::move(block));
    }
    return Morphism<F>(source, target, std::move(maps));
}

/// Flattens a morphism into a single column in the layout of `hom_space`.
template <ExactField F>
Matrix<F> flatten(const Morphism<F>& f) {
    auto off = detail::hom_offsets(f.source(), f.target());
    Matrix<F> out(f.source().field(), off.back(), 1);
    for (int v = 0; v < f.source().algebra().vertices(); ++v) {
        const auto& b = f.at(v);
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) out(off[v] + r * b.cols() + c, 0) = b(r, c);
    }
    return out;
}

template <ExactField F>
std::vector<Morphism<F>> hom_basis(const Module<F>& source, const Module<F>& target) {
    auto hs = hom_space(source, target);
    std::vector<Morphism<F>> out;
    for (std::size_t k = 0; k < hs.dim(); ++k) out.push_back(unflatten(source, target, hs.basis, k));
    return out;
}

/**
 * Multiplicity of each interval summand, read off from path ranks.
 *
 * For a direct sum of intervals, the image of the length-L path from vertex i,
 * modulo the image of the length-(L+1) path from vertex i-1, has dimension equal
 * to the number of summands with top i and length > L. Both images are
 * basis-independent, so differences of these ranks give the multiset.
 */
template <ExactField F>
CanonicalForm canonical_form(const Module<F>& mod) {
    const Algebra& a = mod.algebra();
    const int m = a.vertices(), t = a.rad_length();
    CanonicalForm out;
    for (int i = 0; i < m; ++i) {
        // longer[L] = #summands with top i and length > L
        std::vector<std::size_t> longer(t + 1, 0);
        auto here = mod.path_map(i, 0);
        for (int len = 0; len < t; ++len) {
            if (len > 0) here = mod.arrow(i + len - 1) * here;
            auto from_above = here * mod.arrow(i - 1);
            longer[len] = rank(hstack(from_above, here)) - rank(from_above);
        }
        for (int len = 1; len <= t; ++len) {
            if (longer[len - 1] < longer[len]) throw InvariantBreach("negative interval multiplicity");
            for (std::size_t k = longer[len]; k < longer[len - 1]; ++k) out.push_back({i, len});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <ExactField F>
bool is_isomorphic(const Module<F>& a, const Module<F>& b) {
    a.check_same_algebra(b);
    return a.dims() == b.dims() && canonical_form(a) == canonical_form(b);
}

/// M together with explicit mutually inverse isomorphisms to module_from_labels(labels).
template <ExactField F>
struct IntervalDecomposition {
    CanonicalForm labels;
    Module<F> normal;
    Morphism<F> to_normal;
    Morphism<F> from_normal;
};

/**
 * Graded Jordan basis. Tops of the length-j summands at vertex i span a complement
 * of ker p_{j-1} + a_{i-1}(ker p_{j+1}) inside ker p_j, where p_k is the length-k
 * path; the orbits of those tops under the arrows form a basis of M.
 */
template <ExactField F>
IntervalDecomposition<F> decompose(const Module<F>& mod) {
    const Algebra& a = mod.algebra();
    const F& f = mod.field();
    const int m = a.vertices(), t = a.rad_length();
    std::map<IntervalLabel, std::vector<Matrix<F>>> tops;
    for (int i = 0; i < m; ++i) {
        if (mod.dim(i) == 0) continue;
        // paths[k] is the length-k path from i.
        std::vector<Matrix<F>> paths{mod.path_map(i, 0)};
        for (int k = 1; k <= t; ++k) paths.push_back(mod.arrow(i + k - 1) * paths.back());
        for (int len = 1; len <= t; ++len) {
            auto here = kernel_basis(paths[len]);
            auto shorter = kernel_basis(paths[len - 1]);
            // The length-(len+1) path from i-1 factors through i.
            auto above = mod.arrow(i - 1) * kernel_basis(paths[len] * mod.arrow(i - 1));
            auto known = hstack(shorter, above);
            for (auto p : independent_columns(hstack(known, here))) {
                if (p >= known.cols()) tops[{i, len}].push_back(here.columns({p - known.cols()}));
            }
        }
    }
    CanonicalForm labels;
    for (const auto& [l, xs] : tops) labels.insert(labels.end(), xs.size(), l);
    if (labels != canonical_form(mod)) throw InvariantBreach("Jordan tops disagree with the rank profile");
    auto normal = module_from_labels<F>(a, labels);
    std::vector<Matrix<F>> from;
    std::vector<std::size_t> filled(m, 0);
    for (int v = 0; v < m; ++v) from.emplace_back(f, mod.dim(v), normal.dim(v));
    for (const auto& [l, xs] : tops) {
        for (const auto& x : xs) {
            Matrix<F> vec = x;
            for (int d = 0; d < l.length; ++d) {
                int v = a.vertex(l.top + d);
                from[v].set_block(0, filled[v]++, vec);
                vec = mod.arrow(v) * vec;
            }
        }
    }
    std::vector<Matrix<F>> to;
    for (const auto& b : from) to.push_back(inverse(b));
    return {std::move(labels), normal, Morphism<F>(mod, normal, std::move(to)),
            Morphism<F>(normal, mod, std::move(from))};
}

/// Basis (columns) of the socle at each vertex: vectors killed by the outgoing arrow.
template <ExactField F>
std::vector<Matrix<F>> socle_bases(const Module<F>& mod) {
    std::vector<Matrix<F>> out;
    for (int v = 0; v < mod.algebra().vertices(); ++v) out.push_back(kernel_basis(mod.arrow(v)));
    return out;
}

/// Vertices of the simple summands of soc(M), with multiplicity.
template <ExactField F>
std::vector<int> socle_vertices(const Module<F>& mod) {
    std::vector<int> out;
    auto bases = socle_bases(mod);
    for (int v = 0; v < mod.algebra().vertices(); ++v) out.insert(out.end(), bases[v].cols(), v);
    return out;
}

/// Vertices of the simple summands of top(M) = M / rad M.
template <ExactField F>
std::vector<int> top_vertices(const Module<F>& mod) {
    std::vector<int> out;
    for (int v = 0; v < mod.algebra().vertices(); ++v) {
        auto r = rank(mod.arrow(v - 1));
        out.insert(out.end(), mod.dim(v) - r, v);
    }
    return out;
}

}  // namespace nakayama
