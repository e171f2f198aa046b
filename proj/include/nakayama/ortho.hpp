/**
 * @file ortho.hpp
 * @brief Maximal n-orthogonal modules over A(m, t): membership test and exhaustive search.
 *
 * X is maximal n-orthogonal when, for every module M, Ext^{1..n}(M, X) = 0,
 * Ext^{1..n}(X, M) = 0 and M in add(X) are equivalent. All three conditions
 * are additive, so it suffices to test indecomposable M, and X is determined
 * by its set of indecomposable summand labels.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "exactlin.hpp"
#include "homology.hpp"
#include "modrep.hpp"

namespace nakayama {

template <ExactField F>
struct IndecSet {
    Algebra algebra;
    std::vector<IntervalLabel> labels;
    std::vector<Module<F>> modules;
    std::vector<bool> projective;

    std::size_t size() const { return labels.size(); }

    std::optional<std::size_t> index_of(const IntervalLabel& l) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), l);
        if (it == labels.end() || *it != l) return std::nullopt;
        return static_cast<std::size_t>(it - labels.begin());
    }
};

/// All m*t interval labels, sorted by (top, length).
inline std::vector<IntervalLabel> indecomposable_labels(const Algebra& a) {
    std::vector<IntervalLabel> out;
    for (int i = 0; i < a.vertices(); ++i)
        for (int len = 1; len <= a.rad_length(); ++len) out.push_back({i, len});
    return out;
}

template <ExactField F>
IndecSet<F> enumerate_indecomposables(const Algebra& a) {
    IndecSet<F> set{a, indecomposable_labels(a), {}, {}};
    for (const auto& l : set.labels) {
        set.modules.push_back(interval_module<F>(a, l));
        set.projective.push_back(is_projective_label(a, l));
    }
    return set;
}

/// dim Ext^k between all ordered pairs of indecomposables for k = 1..degree.
struct ExtTable {
    Algebra algebra;
    int degree = 0;
    std::vector<IntervalLabel> labels;
    std::vector<bool> projective;
    /// dims[k-1][row * size + col] = dim Ext^k(labels[row], labels[col]).
    std::vector<std::vector<std::size_t>> dims;

    std::size_t size() const { return labels.size(); }

    std::size_t ext(std::size_t row, std::size_t col, int k) const { return dims.at(k - 1)[row * size() + col]; }

    /// Ext^i(row, col) = 0 for all 1 <= i <= n (n <= degree).
    bool vanishes(std::size_t row, std::size_t col, int n) const {
        if (n < 1 || n > degree) throw InvalidParameter("table has degree " + std::to_string(degree));
        for (int k = 1; k <= n; ++k) {
            if (ext(row, col, k) != 0) return false;
        }
        return true;
    }
    bool vanishes(std::size_t row, std::size_t col) const { return vanishes(row, col, degree); }

    std::size_t require_index(const IntervalLabel& l) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), l);
        if (it == labels.end() || *it != l) {
            throw InvalidParameter("unknown label " + format_label(algebra, l));
        }
        return static_cast<std::size_t>(it - labels.begin());
    }
};

template <ExactField F>
ExtTable ext_vanishing_table(const IndecSet<F>& indec, int n, int jobs = 1) {
    if (n < 1) throw InvalidParameter("orthogonality degree n must be >= 1, got " + std::to_string(n));
    const std::size_t size = indec.size();
    ExtTable table{indec.algebra, n, indec.labels, indec.projective, {}};
    table.dims.assign(n, std::vector<std::size_t>(size * size, 0));

    std::vector<ProjectiveCover<F>> covers;
    for (const auto& mod : indec.modules) covers.push_back(projective_cover(mod));

    // Rows are independent; workers write disjoint slices of the frozen table.
    auto fill_row = [&](std::size_t row) {
        Module<F> shifted = indec.modules[row];
        for (int k = 1; k <= n; ++k) {
            shifted = syzygy(shifted);
            for (std::size_t col = 0; col < size; ++col) {
                table.dims[k - 1][row * size + col] = stable_hom_dim(shifted, indec.modules[col], covers[col]);
            }
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || size < 2) {
        for (std::size_t row = 0; row < size; ++row) fill_row(row);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, size); ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t row = w; row < size; row += workers) fill_row(row);
            });
        }
    }
    return table;
}

inline ExtTable ext_vanishing_table(const Algebra& a, int n, int jobs = 1) {
    return with_field(a.field(), [&](auto field) {
        using F = decltype(field);
        return ext_vanishing_table(enumerate_indecomposables<F>(a), n, jobs);
    });
}

/// Which implication of the defining equivalence a witness breaks.
enum class Condition {
    i_without_iii,   ///< Ext^{1..n}(M, X) = 0 but M not in add(X)
    ii_without_iii,  ///< Ext^{1..n}(X, M) = 0 but M not in add(X)
    iii_without_i,   ///< M in add(X) but Ext^i(M, X) != 0 for some i
    iii_without_ii,  ///< M in add(X) but Ext^i(X, M) != 0 for some i
};

inline std::string to_string(Condition c) {
    switch (c) {
        case Condition::i_without_iii: return "(i) holds but (iii) fails";
        case Condition::ii_without_iii: return "(ii) holds but (iii) fails";
        case Condition::iii_without_i: return "(iii) holds but (i) fails";
        case Condition::iii_without_ii: return "(iii) holds but (ii) fails";
    }
    return "?";
}

struct Violation {
    IntervalLabel witness;
    Condition condition;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// A multiplicity-free set of summand labels with its verification certificate.
struct OrthoSet {
    std::vector<IntervalLabel> labels;
    int degree = 0;
    bool verified = false;
    /// Every violating (indecomposable, condition) pair, in label order. Empty iff verified.
    std::vector<Violation> violations;

    friend bool operator==(const OrthoSet&, const OrthoSet&) = default;
};

inline std::string describe_certificate(const Algebra& a, const OrthoSet& s) {
    if (s.verified) return "verified";
    const auto& v = s.violations.front();
    return "refuted: witness " + format_label(a, v.witness) + ", " + to_string(v.condition);
}

namespace detail {

inline std::vector<IntervalLabel> normalized(std::vector<IntervalLabel> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

}  // namespace detail

/// Checks L = R = S where L = {M : Ext^{1..n}(M, S) = 0} and R = {M : Ext^{1..n}(S, M) = 0}.
inline OrthoSet is_maximal_n_orthogonal(const ExtTable& table, std::vector<IntervalLabel> labels, int n) {
    labels = detail::normalized(std::move(labels));
    std::vector<bool> in_s(table.size(), false);
    for (const auto& l : labels) in_s[table.require_index(l)] = true;

    OrthoSet out{labels, n, true, {}};
    for (std::size_t mi = 0; mi < table.size(); ++mi) {
        bool left = true, right = true;
        for (std::size_t si = 0; si < table.size(); ++si) {
            if (!in_s[si]) continue;
            left = left && table.vanishes(mi, si, n);
            right = right && table.vanishes(si, mi, n);
        }
        const auto& w = table.labels[mi];
        if (in_s[mi]) {
            if (!left) out.violations.push_back({w, Condition::iii_without_i});
            if (!right) out.violations.push_back({w, Condition::iii_without_ii});
        } else {
            if (left) out.violations.push_back({w, Condition::i_without_iii});
            if (right) out.violations.push_back({w, Condition::ii_without_iii});
        }
    }
    out.verified = out.violations.empty();
    return out;
}

inline OrthoSet is_maximal_n_orthogonal(const Algebra& a, const std::vector<IntervalLabel>& labels, int n) {
    for (const auto& l : labels) {
        if (l.top < 0 || l.top >= a.vertices() || l.length < 1 || l.length > a.rad_length()) {
            throw InvalidParameter("unknown label " + format_label(a, l));
        }
    }
    return is_maximal_n_orthogonal(ext_vanishing_table(a, n), labels, n);
}

namespace detail {

using Mask = std::uint64_t;

inline Mask bit(std::size_t i) { return Mask{1} << i; }

struct SearchGraph {
    std::size_t size = 0;
    Mask projective = 0;
    Mask candidates = 0;            // non-projective, no self-extensions
    std::vector<Mask> adjacent;     // mutual vanishing, candidates only
    std::vector<Mask> left_of;      // left_of[s] = {M : Ext(M, s) = 0}
    std::vector<Mask> right_of;     // right_of[s] = {M : Ext(s, M) = 0}
};

inline SearchGraph search_graph(const ExtTable& table, int n) {
    if (table.size() > 64) throw InvalidParameter("search supports at most 64 indecomposables");
    SearchGraph g;
    g.size = table.size();
    g.adjacent.assign(g.size, 0);
    g.left_of.assign(g.size, 0);
    g.right_of.assign(g.size, 0);
    for (std::size_t s = 0; s < g.size; ++s) {
        if (table.projective[s]) g.projective |= bit(s);
        for (std::size_t m = 0; m < g.size; ++m) {
            if (table.vanishes(m, s, n)) g.left_of[s] |= bit(m);
            if (table.vanishes(s, m, n)) g.right_of[s] |= bit(m);
        }
    }
    for (std::size_t s = 0; s < g.size; ++s) {
        if (!table.projective[s] && table.vanishes(s, s, n)) g.candidates |= bit(s);
    }
    for (std::size_t s = 0; s < g.size; ++s) {
        if (!(g.candidates & bit(s))) continue;
        g.adjacent[s] = g.left_of[s] & g.right_of[s] & g.candidates & ~bit(s);
    }
    return g;
}

inline bool fixed_point(const SearchGraph& g, Mask s) {
    Mask left = ~Mask{0}, right = ~Mask{0};
    for (std::size_t i = 0; i < g.size; ++i) {
        if (s & bit(i)) {
            left &= g.left_of[i];
            right &= g.right_of[i];
        }
    }
    Mask all = g.size == 64 ? ~Mask{0} : bit(g.size) - 1;
    return (left & all) == s && (right & all) == s;
}

/// Bron-Kerbosch with Tomita pivoting: reports every maximal clique.
template <class Report>
void bron_kerbosch(const SearchGraph& g, Mask r, Mask p, Mask x, Report& report) {
    if (p == 0 && x == 0) {
        report(r);
        return;
    }
    // Pivot maximizing |P & N(u)|.
    Mask px = p | x;
    std::size_t pivot = 0;
    int best = -1;
    for (std::size_t u = 0; u < g.size; ++u) {
        if (!(px & bit(u))) continue;
        int c = std::popcount(p & g.adjacent[u]);
        if (c > best) {
            best = c;
            pivot = u;
        }
    }
    Mask branch = p & ~g.adjacent[pivot];
    for (std::size_t v = 0; v < g.size; ++v) {
        if (!(branch & bit(v))) continue;
        bron_kerbosch(g, r | bit(v), p & g.adjacent[v], x & g.adjacent[v], report);
        p &= ~bit(v);
        x |= bit(v);
    }
}

inline OrthoSet certified(const ExtTable& table, Mask s, int n) {
    std::vector<IntervalLabel> labels;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (s & bit(i)) labels.push_back(table.labels[i]);
    }
    return OrthoSet{labels, n, true, {}};
}

inline void canonicalize(std::vector<OrthoSet>& sets) {
    std::sort(sets.begin(), sets.end(), [](const OrthoSet& a, const OrthoSet& b) { return a.labels < b.labels; });
}

}  // namespace detail

/**
 * Every verified set is the projective core plus a maximal clique of the
 * graph on self-orthogonal non-projectives with edges for two-sided Ext
 * vanishing, so enumerating maximal cliques and filtering by the fixed-point
 * test is complete.
 */
inline std::vector<OrthoSet> search_maximal_orthogonal(const ExtTable& table, int n) {
    auto g = detail::search_graph(table, n);
    std::vector<OrthoSet> out;
    auto report = [&](detail::Mask clique) {
        detail::Mask s = clique | g.projective;
        if (detail::fixed_point(g, s)) out.push_back(detail::certified(table, s, n));
    };
    detail::bron_kerbosch(g, 0, g.candidates, 0, report);
    detail::canonicalize(out);
    return out;
}

inline std::vector<OrthoSet> search_maximal_orthogonal(const Algebra& a, int n, int jobs = 1) {
    return search_maximal_orthogonal(ext_vanishing_table(a, n, jobs), n);
}

/// Exhaustive fixed-point test over every superset of the projectives. Reference oracle for the search.
inline std::vector<OrthoSet> search_maximal_orthogonal_brute_force(const ExtTable& table, int n) {
    auto g = detail::search_graph(table, n);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < g.size; ++i) {
        if (!(g.projective & detail::bit(i))) free.push_back(i);
    }
    if (free.size() > 24) throw InvalidParameter("brute-force search limited to 24 non-projective labels");
    std::vector<OrthoSet> out;
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << free.size()); ++sub) {
        detail::Mask s = g.projective;
        for (std::size_t k = 0; k < free.size(); ++k) {
            if (sub & (std::uint64_t{1} << k)) s |= detail::bit(free[k]);
        }
        if (detail::fixed_point(g, s)) out.push_back(detail::certified(table, s, n));
    }
    detail::canonicalize(out);
    return out;
}

struct ClosureReport {
    bool holds = false;
    /// Image of each non-projective summand under Omega^{n+2} nu, as a canonical form.
    std::vector<std::pair<IntervalLabel, CanonicalForm>> images;
    /// Orbit length of each non-projective summand (same order as images); empty unless holds.
    std::vector<std::size_t> orbit_lengths;
    /// Order of the induced permutation; 0 unless holds.
    std::size_t order = 0;
};

/// Applies Omega^{n+2} nu to every non-projective summand of a verified set.
template <ExactField F>
ClosureReport check_closure_theorem(const Algebra& a, const OrthoSet& s, int n) {
    if (!s.verified) throw NotVerified("closure check needs a verified set; " + describe_certificate(a, s));
    ClosureReport rep;
    std::vector<IntervalLabel> moving;
    for (const auto& l : s.labels) {
        if (!is_projective_label(a, l)) moving.push_back(l);
    }
    rep.holds = true;
    std::vector<std::size_t> next(moving.size(), 0);
    for (std::size_t k = 0; k < moving.size(); ++k) {
        auto img = canonical_form(omega_shift(nakayama_twist(interval_module<F>(a, moving[k])), n + 2));
        rep.images.emplace_back(moving[k], img);
        auto it = img.size() == 1 ? std::lower_bound(moving.begin(), moving.end(), img[0]) : moving.end();
        if (it == moving.end() || *it != img[0]) {
            rep.holds = false;
        } else {
            next[k] = static_cast<std::size_t>(it - moving.begin());
        }
    }
    if (!rep.holds) return rep;
    rep.order = 1;
    for (std::size_t k = 0; k < moving.size(); ++k) {
        std::size_t len = 1;
        for (std::size_t j = next[k]; j != k; j = next[j]) {
            if (len > moving.size()) throw InvariantBreach("Omega^{n+2} nu does not act as a permutation");
            ++len;
        }
        rep.orbit_lengths.push_back(len);
        rep.order = std::lcm(rep.order, len);
    }
    return rep;
}

/**
 * All T != Y such that replacing Y by T in a verified maximal 1-orthogonal set
 * gives another verified set. The exchange rule predicts at most one.
 */
inline std::vector<IntervalLabel> exchange_partners(const ExtTable& table, const OrthoSet& s, int n,
                                                    const IntervalLabel& y) {
    const Algebra& a = table.algebra;
    if (n != 1) throw InvalidParameter("exchange partners are defined for maximal 1-orthogonal sets");
    if (!s.verified) throw NotVerified("exchange needs a verified set; " + describe_certificate(a, s));
    if (!std::binary_search(s.labels.begin(), s.labels.end(), y)) {
        throw InvalidParameter(format_label(a, y) + " is not a summand of the set");
    }
    if (is_projective_label(a, y)) throw InvalidParameter(format_label(a, y) + " is projective and cannot be exchanged");
    std::vector<IntervalLabel> out;
    for (const auto& t : table.labels) {
        if (t == y || std::binary_search(s.labels.begin(), s.labels.end(), t)) continue;
        auto labels = s.labels;
        std::replace(labels.begin(), labels.end(), y, t);
        if (is_maximal_n_orthogonal(table, labels, n).verified) out.push_back(t);
    }
    return out;
}

/// Labels of Omega^shift(sum of S) together with all projectives.
template <ExactField F>
std::vector<IntervalLabel> shifted_set(const Algebra& a, const std::vector<IntervalLabel>& labels, int shift) {
    auto out = canonical_form(omega_shift(module_from_labels<F>(a, labels), shift));
    for (int i = 0; i < a.vertices(); ++i) out.push_back({i, a.rad_length()});
    return detail::normalized(std::move(out));
}

}  // namespace nakayama
