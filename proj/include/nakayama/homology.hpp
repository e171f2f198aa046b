/**
 * @file homology.hpp
 * @brief Syzygies, Nakayama twist, AR translate, stable Hom and Ext over A(m, t).
 *
 * Everything is computed from the representation by exact linear algebra:
 * covers and hulls are built from explicit top/socle bases, kernels and
 * cokernels are taken vertex by vertex, and Ext^k(M, N) is the stable Hom
 * space from Omega^k M to N.
 */
#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "exactlin.hpp"
#include "modrep.hpp"

namespace nakayama {

// ---------------------------------------------------------------------------
// Morphism plumbing

namespace detail {

template <ExactField F>
Morphism<F> block_diagonal_morphism(const Algebra& a, const std::vector<Morphism<F>>& parts) {
    std::vector<Module<F>> sources, targets;
    for (const auto& p : parts) {
        sources.push_back(p.source());
        targets.push_back(p.target());
    }
    F f(a.field());
    std::vector<Matrix<F>> maps;
    for (int v = 0; v < a.vertices(); ++v) {
        std::vector<Matrix<F>> blocks;
        for (const auto& p : parts) blocks.push_back(p.at(v));
        maps.push_back(block_diagonal(f, blocks));
    }
    return Morphism<F>(direct_sum(a, sources), direct_sum(a, targets), std::move(maps));
}

/// Canonical inclusion of the first summand and projection onto the second summand of L + R.
template <ExactField F>
std::pair<Morphism<F>, Morphism<F>> split_pair(const Module<F>& left, const Module<F>& right) {
    const Algebra& a = left.algebra();
    F f(a.field());
    auto middle = direct_sum(a, std::vector<Module<F>>{left, right});
    std::vector<Matrix<F>> inc, proj;
    for (int v = 0; v < a.vertices(); ++v) {
        inc.push_back(vstack(Matrix<F>::identity(f, left.dim(v)), Matrix<F>(f, right.dim(v), left.dim(v))));
        proj.push_back(hstack(Matrix<F>(f, right.dim(v), left.dim(v)), Matrix<F>::identity(f, right.dim(v))));
    }
    return {Morphism<F>(left, middle, std::move(inc)), Morphism<F>(middle, right, std::move(proj))};
}

/// Post-composes every flattened morphism (columns of `flat`, source -> mid) with `g: mid -> target`.
template <ExactField F>
Matrix<F> compose_flat(const Morphism<F>& g, const Module<F>& source, const Matrix<F>& flat) {
    const auto& mid = g.source();
    const auto& target = g.target();
    auto in_off = hom_offsets(source, mid);
    auto out_off = hom_offsets(source, target);
    const F& f = source.field();
    Matrix<F> out(f, out_off.back(), flat.cols());
    for (std::size_t col = 0; col < flat.cols(); ++col) {
        for (int v = 0; v < source.algebra().vertices(); ++v) {
            const auto& gv = g.at(v);
            const std::size_t sv = source.dim(v), mv = mid.dim(v), tv = target.dim(v);
            for (std::size_t r = 0; r < tv; ++r) {
                for (std::size_t k = 0; k < mv; ++k) {
                    if (f.is_zero(gv(r, k))) continue;
                    for (std::size_t c = 0; c < sv; ++c) {
                        const auto& x = flat(in_off[v] + k * sv + c, col);
                        if (f.is_zero(x)) continue;
                        auto& e = out(out_off[v] + r * sv + c, col);
                        e = f.add(e, f.mul(gv(r, k), x));
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace detail

template <ExactField F>
struct Submodule {
    Module<F> module;
    Morphism<F> inclusion;
};

/// Kernel of a morphism as a module with its inclusion into the source.
template <ExactField F>
Submodule<F> kernel_submodule(const Morphism<F>& f) {
    const auto& src = f.source();
    const Algebra& a = src.algebra();
    std::vector<Matrix<F>> bases;
    std::vector<std::size_t> dims;
    for (int v = 0; v < a.vertices(); ++v) {
        bases.push_back(kernel_basis(f.at(v)));
        dims.push_back(bases.back().cols());
    }
    std::vector<Matrix<F>> arrows;
    for (int v = 0; v < a.vertices(); ++v) {
        const auto& next = bases[a.vertex(v + 1)];
        auto sol = solve(next, src.arrow(v) * bases[v]);
        if (!sol) throw InvariantBreach("kernel is not closed under the arrow action");
        arrows.push_back(std::move(sol->particular));
    }
    Module<F> k(a, std::move(dims), std::move(arrows));
    return {k, Morphism<F>(k, src, std::move(bases))};
}

template <ExactField F>
struct Quotient {
    Module<F> module;
    Morphism<F> projection;
    /// Columns in the ambient space lifting the quotient basis, per vertex.
    std::vector<Matrix<F>> section;
};

/// Cokernel of a morphism X -> Y.
template <ExactField F>
Quotient<F> cokernel(const Morphism<F>& f) {
    const auto& y = f.target();
    const Algebra& a = y.algebra();
    const F& fld = y.field();
    std::vector<Matrix<F>> proj, section;
    std::vector<std::size_t> dims;
    for (int v = 0; v < a.vertices(); ++v) {
        const auto& img = f.at(v);
        auto indep = img.columns(independent_columns(img));
        auto comp = complement_columns(img);
        auto lift = Matrix<F>::identity(fld, y.dim(v)).columns(comp);
        auto basis_inv = inverse(hstack(indep, lift));
        proj.push_back(basis_inv.row_block(indep.cols(), comp.size()));
        section.push_back(std::move(lift));
        dims.push_back(comp.size());
    }
    std::vector<Matrix<F>> arrows;
    for (int v = 0; v < a.vertices(); ++v) arrows.push_back(proj[a.vertex(v + 1)] * y.arrow(v) * section[v]);
    Module<F> q(a, std::move(dims), std::move(arrows));
    return {q, Morphism<F>(y, q, std::move(proj)), std::move(section)};
}

/// The map Q -> Z induced by h: Y -> Z, assuming h vanishes on the image that Q quotients out.
template <ExactField F>
Morphism<F> induced_from_quotient(const Quotient<F>& q, const Morphism<F>& h) {
    std::vector<Matrix<F>> maps;
    for (int v = 0; v < q.module.algebra().vertices(); ++v) maps.push_back(h.at(v) * q.section[v]);
    Morphism<F> out(q.module, h.target(), std::move(maps));
    if (!out.intertwines()) throw InvariantBreach("induced map on a quotient is not a module map");
    return out;
}

// ---------------------------------------------------------------------------
// Covers, hulls, syzygies

template <ExactField F>
struct ProjectiveCover {
    Module<F> cover;
    Morphism<F> epi;
    /// Top vertex of each indecomposable summand of the cover, in summand order.
    std::vector<int> tops;
};

/// One P_i per top basis vector at vertex i; the epi sends the top of P_i to that vector.
template <ExactField F>
ProjectiveCover<F> projective_cover(const Module<F>& mod) {
    const Algebra& a = mod.algebra();
    const int t = a.rad_length();
    struct Gen {
        int vertex;
        std::size_t coord;
    };
    std::vector<Gen> gens;
    for (int i = 0; i < a.vertices(); ++i) {
        for (auto c : complement_columns(mod.arrow(i - 1))) gens.push_back({i, c});
    }
    std::vector<IntervalLabel> labels;
    std::vector<int> tops;
    for (const auto& g : gens) {
        labels.push_back({g.vertex, t});
        tops.push_back(g.vertex);
    }
    auto cover = module_from_labels<F>(a, labels);
    std::vector<Matrix<F>> maps;
    std::vector<std::size_t> filled(a.vertices(), 0);
    for (int v = 0; v < a.vertices(); ++v) maps.emplace_back(mod.field(), mod.dim(v), cover.dim(v));
    // Summands are laid out in generator order at every vertex, so walking each
    // generator down its path fills the blocks column by column.
    for (const auto& g : gens) {
        Matrix<F> image = Matrix<F>::identity(mod.field(), mod.dim(g.vertex)).columns({g.coord});
        for (int o = 0; o < t; ++o) {
            int v = a.vertex(g.vertex + o);
            maps[v].set_block(0, filled[v]++, image);
            image = mod.arrow(v) * image;
        }
    }
    Morphism<F> epi(cover, mod, std::move(maps));
    if (!epi.intertwines() || !epi.is_surjective()) throw InvariantBreach("projective cover construction failed");
    return {cover, epi, tops};
}

template <ExactField F>
struct InjectiveHull {
    Module<F> hull;
    Morphism<F> mono;
    /// Socle vertex of each indecomposable summand of the hull.
    std::vector<int> socles;
};

/**
 * Injective hull via selfinjectivity: the injective envelope of S_j is the
 * projective interval with socle S_j, i.e. top j - t + 1. A functional phi on
 * the space at j that is nonzero on the socle gives the map
 * x |-> sum_o phi(p_{t-1-o} x) b_o into that interval; one functional per
 * socle basis vector makes the sum of these maps injective on the socle,
 * hence injective.
 */
template <ExactField F>
InjectiveHull<F> injective_hull(const Module<F>& mod) {
    const Algebra& a = mod.algebra();
    const int t = a.rad_length();
    const F& fld = mod.field();
    struct Functional {
        int vertex;
        Matrix<F> row;
    };
    std::vector<Functional> funcs;
    for (int j = 0; j < a.vertices(); ++j) {
        auto soc = kernel_basis(mod.arrow(j));
        if (soc.cols() == 0) continue;
        auto comp = complement_columns(soc);
        auto basis = hstack(soc, Matrix<F>::identity(fld, mod.dim(j)).columns(comp));
        auto dual = inverse(basis);
        for (std::size_t k = 0; k < soc.cols(); ++k) funcs.push_back({j, dual.row_block(k, 1)});
    }
    std::vector<IntervalLabel> labels;
    std::vector<int> socles;
    for (const auto& fn : funcs) {
        labels.push_back({a.vertex(fn.vertex - t + 1), t});
        socles.push_back(fn.vertex);
    }
    auto hull = module_from_labels<F>(a, labels);
    std::vector<Matrix<F>> maps;
    std::vector<std::size_t> filled(a.vertices(), 0);
    for (int v = 0; v < a.vertices(); ++v) maps.emplace_back(fld, hull.dim(v), mod.dim(v));
    for (const auto& fn : funcs) {
        const int top = a.vertex(fn.vertex - t + 1);
        // rows[o] = phi composed with the path from depth o down to the socle.
        std::vector<Matrix<F>> rows(t, fn.row);
        for (int o = t - 2; o >= 0; --o) rows[o] = rows[o + 1] * mod.arrow(top + o);
        for (int o = 0; o < t; ++o) {
            int v = a.vertex(top + o);
            maps[v].set_block(filled[v]++, 0, rows[o]);
        }
    }
    Morphism<F> mono(mod, hull, std::move(maps));
    if (!mono.intertwines() || !mono.is_injective()) throw InvariantBreach("injective hull construction failed");
    return {hull, mono, socles};
}

template <ExactField F>
struct SyzygyData {
    ProjectiveCover<F> cover;
    Module<F> kernel;
    Morphism<F> inclusion;
};

/// 0 -> Omega M -> P(M) -> M -> 0 with all maps.
template <ExactField F>
SyzygyData<F> syzygy_data(const Module<F>& mod) {
    auto cov = projective_cover(mod);
    auto ker = kernel_submodule(cov.epi);
    return {std::move(cov), std::move(ker.module), std::move(ker.inclusion)};
}

/// Omega M: kernel of a minimal projective cover.
template <ExactField F>
Module<F> syzygy(const Module<F>& mod) {
    return kernel_submodule(projective_cover(mod).epi).module;
}

/// Omega^{-1} M: cokernel of an injective hull.
template <ExactField F>
Module<F> cosyzygy(const Module<F>& mod) {
    return cokernel(injective_hull(mod).mono).module;
}

/// Omega^s M for any integer s (negative s applies Omega^{-1}).
template <ExactField F>
Module<F> omega_shift(Module<F> mod, int s) {
    for (; s > 0; --s) mod = syzygy(mod);
    for (; s < 0; ++s) mod = cosyzygy(mod);
    return mod;
}

namespace detail {

template <ExactField F>
Module<F> relabel(const Module<F>& mod, const VertexPermutation& perm) {
    const Algebra& a = mod.algebra();
    std::vector<std::size_t> dims;
    std::vector<Matrix<F>> arrows;
    for (int j = 0; j < a.vertices(); ++j) {
        dims.push_back(mod.dim(perm(j)));
        arrows.push_back(mod.arrow(perm(j)));
    }
    return Module<F>(a, std::move(dims), std::move(arrows));
}

}  // namespace detail

/**
 * Nakayama functor: (nu M)_j = M_{pi(j)}, where soc P_i = S_{pi(i)}.
 *
 * It sends P_i to the injective envelope of S_i (the projective with socle
 * S_i), so on intervals nu M[i, l] = M[pi^{-1}(i), l].
 */
template <ExactField F>
Module<F> nakayama_twist(const Module<F>& mod) {
    return detail::relabel(mod, nakayama_permutation(mod.algebra()));
}

template <ExactField F>
Module<F> nakayama_twist_inverse(const Module<F>& mod) {
    return detail::relabel(mod, nakayama_permutation(mod.algebra()).inverse());
}

/// tau = Omega^2 nu.
template <ExactField F>
Module<F> ar_translate(const Module<F>& mod) {
    return syzygy(syzygy(nakayama_twist(mod)));
}

/// tau^{-1} = nu^{-1} Omega^{-2}.
template <ExactField F>
Module<F> inverse_ar_translate(const Module<F>& mod) {
    return nakayama_twist_inverse(cosyzygy(cosyzygy(mod)));
}

// ---------------------------------------------------------------------------
// Stable Hom and Ext

namespace detail {

/// Flattened images in Hom(M, N) of Hom(M, P(N)) under the cover epi.
template <ExactField F>
Matrix<F> projective_factoring(const Module<F>& source, const ProjectiveCover<F>& target_cover) {
    auto through = hom_space(source, target_cover.cover);
    return compose_flat(target_cover.epi, source, through.basis);
}

}  // namespace detail

namespace detail {

/// Above this many unknowns in the intertwining system, dimensions are summed over summands.
inline constexpr std::size_t direct_hom_limit = 100;

template <ExactField F>
std::size_t hom_unknowns(const Module<F>& source, const Module<F>& target) {
    std::size_t n = 0;
    for (int v = 0; v < source.algebra().vertices(); ++v) n += source.dim(v) * target.dim(v);
    return n;
}

template <ExactField F>
std::size_t stable_hom_dim_direct(const Module<F>& source, const Module<F>& target,
                                  const ProjectiveCover<F>& target_cover) {
    auto hs = hom_space(source, target);
    if (hs.dim() == 0) return 0;
    return hs.dim() - rank(projective_factoring(source, target_cover));
}

/// Process-wide memo of stable Hom dimensions between interval modules, keyed by
/// (field, m, t, source label, target label). Values come from the direct solve.
class IntervalPairMemo {
public:
    using Key = std::tuple<std::uint32_t, int, int, int, int, int, int>;

    static IntervalPairMemo& instance() {
        static IntervalPairMemo memo;
        return memo;
    }

    template <ExactField F>
    std::size_t get(const Algebra& a, const IntervalLabel& src, const IntervalLabel& tgt) {
        Key key{a.field().is_prime() ? a.field().p : 0, a.vertices(), a.rad_length(), src.top, src.length, tgt.top,
                tgt.length};
        {
            std::lock_guard lock(mutex_);
            if (auto it = table_.find(key); enabled_ && it != table_.end()) return it->second;
        }
        auto n = interval_module<F>(a, tgt);
        auto d = stable_hom_dim_direct(interval_module<F>(a, src), n, projective_cover(n));
        std::lock_guard lock(mutex_);
        if (enabled_) table_.emplace(key, d);
        return d;
    }

    /// Disabling clears the table; answers must not change.
    void set_enabled(bool on) {
        std::lock_guard lock(mutex_);
        enabled_ = on;
        if (!on) table_.clear();
    }

private:
    std::mutex mutex_;
    bool enabled_ = true;
    std::map<Key, std::size_t> table_;
};

template <ExactField F>
std::size_t stable_hom_dim_by_summands(const Module<F>& source, const Module<F>& target) {
    const Algebra& a = source.algebra();
    std::map<IntervalLabel, std::size_t> left, right;
    for (const auto& l : canonical_form(source)) {
        if (!is_projective_label(a, l)) ++left[l];
    }
    for (const auto& l : canonical_form(target)) {
        if (!is_projective_label(a, l)) ++right[l];
    }
    auto& memo = IntervalPairMemo::instance();
    std::size_t total = 0;
    for (const auto& [r, kr] : right) {
        for (const auto& [l, kl] : left) total += kl * kr * memo.get<F>(a, l, r);
    }
    return total;
}

}  // namespace detail

/// dim Hom(M, N) - dim PHom(M, N), with PHom the maps factoring through P(N) -> N.
/// Large pairs are split into interval summands; the dimension is additive in both arguments.
template <ExactField F>
std::size_t stable_hom_dim(const Module<F>& source, const Module<F>& target, const ProjectiveCover<F>& target_cover) {
    source.check_same_algebra(target);
    if (detail::hom_unknowns(source, target) > detail::direct_hom_limit) {
        return detail::stable_hom_dim_by_summands(source, target);
    }
    return detail::stable_hom_dim_direct(source, target, target_cover);
}

template <ExactField F>
std::size_t stable_hom_dim(const Module<F>& source, const Module<F>& target) {
    source.check_same_algebra(target);
    if (detail::hom_unknowns(source, target) > detail::direct_hom_limit) {
        return detail::stable_hom_dim_by_summands(source, target);
    }
    return detail::stable_hom_dim_direct(source, target, projective_cover(target));
}

/// Morphisms whose classes form a basis of the stable Hom space.
template <ExactField F>
std::vector<Morphism<F>> stable_hom_basis(const Module<F>& source, const Module<F>& target) {
    source.check_same_algebra(target);
    auto hs = hom_space(source, target);
    if (hs.dim() == 0) return {};
    auto phom = detail::projective_factoring(source, projective_cover(target));
    auto pivots = independent_columns(hstack(phom, hs.basis));
    std::vector<Morphism<F>> out;
    for (auto p : pivots) {
        if (p >= phom.cols()) out.push_back(unflatten(source, target, hs.basis, p - phom.cols()));
    }
    return out;
}

/// dim Ext^k(M, N) = dim stable Hom(Omega^k M, N), k >= 1.
template <ExactField F>
std::size_t ext_dim(const Module<F>& m, const Module<F>& n, int k) {
    if (k < 1) throw InvalidParameter("Ext degree must be >= 1, got " + std::to_string(k));
    m.check_same_algebra(n);
    return stable_hom_dim(omega_shift(m, k), n);
}

// ---------------------------------------------------------------------------
// Resolutions and complexity

struct ResolutionTerm {
    CanonicalForm cover;
    std::size_t dim;
};

struct Resolution {
    CanonicalForm base;
    /// P_0 .. P_steps.
    std::vector<ResolutionTerm> terms;
    /// Omega^0 M .. Omega^{steps+1} M.
    std::vector<CanonicalForm> syzygies;
    std::vector<std::size_t> syzygy_dims;
};

template <ExactField F>
Resolution min_projective_resolution(const Module<F>& mod, int steps) {
    if (steps < 0) throw InvalidParameter("resolution length must be >= 0");
    Resolution res;
    res.base = canonical_form(mod);
    Module<F> cur = mod;
    res.syzygies.push_back(res.base);
    res.syzygy_dims.push_back(cur.total_dim());
    for (int k = 0; k <= steps; ++k) {
        auto data = syzygy_data(cur);
        res.terms.push_back({canonical_form(data.cover.cover), data.cover.cover.total_dim()});
        cur = std::move(data.kernel);
        res.syzygies.push_back(canonical_form(cur));
        res.syzygy_dims.push_back(cur.total_dim());
        if (res.syzygy_dims[k + 1] + res.syzygy_dims[k] != res.terms[k].dim) {
            throw InvariantBreach("rank-nullity fails along the resolution");
        }
    }
    return res;
}

struct ComplexityReport {
    enum class Verdict { finite_projective_dimension, bounded, unbounded_evidence };

    Verdict verdict = Verdict::unbounded_evidence;
    int steps_examined = 0;
    /// Set for finite_projective_dimension (0 for projectives; -1 for the zero module).
    std::optional<int> projective_dimension;
    /// Omega^{preperiod + period} M ~ Omega^{preperiod} M, set for bounded.
    int preperiod = 0;
    int period = 0;
    /// Least p >= 1 with Omega^p M ~ nu^s M for some 0 <= s < ord(nu), as (p, s).
    std::optional<std::pair<int, int>> twisted_period;
    /// dim P_0, dim P_1, ... for the examined steps.
    std::vector<std::size_t> term_dims;

    /// Upper bound on cx(M) the report certifies, if any.
    std::optional<int> complexity_bound() const {
        if (verdict == Verdict::finite_projective_dimension) return 0;
        if (verdict == Verdict::bounded) return 1;
        return std::nullopt;
    }
};

inline std::string to_string(ComplexityReport::Verdict v) {
    switch (v) {
        case ComplexityReport::Verdict::finite_projective_dimension: return "finite_projective_dimension";
        case ComplexityReport::Verdict::bounded: return "bounded";
        case ComplexityReport::Verdict::unbounded_evidence: return "unbounded_evidence";
    }
    return "?";
}

inline int default_budget(const Algebra& a) { return 10 * a.vertices() * a.rad_length(); }

template <ExactField F>
ComplexityReport complexity_estimate(const Module<F>& mod, int budget) {
    if (budget < 1) throw InvalidParameter("complexity budget must be >= 1");
    ComplexityReport rep;
    if (mod.is_zero()) {
        rep.verdict = ComplexityReport::Verdict::finite_projective_dimension;
        rep.projective_dimension = -1;
        return rep;
    }
    std::map<CanonicalForm, int> seen;
    std::vector<CanonicalForm> forms;
    Module<F> cur = mod;
    forms.push_back(canonical_form(cur));
    seen.emplace(forms.back(), 0);
    for (int k = 0; k < budget; ++k) {
        auto data = syzygy_data(cur);
        rep.term_dims.push_back(data.cover.cover.total_dim());
        rep.steps_examined = k + 1;
        cur = std::move(data.kernel);
        if (cur.is_zero()) {
            rep.verdict = ComplexityReport::Verdict::finite_projective_dimension;
            rep.projective_dimension = k;
            return rep;
        }
        forms.push_back(canonical_form(cur));
        auto [it, fresh] = seen.emplace(forms.back(), k + 1);
        if (!fresh) {
            rep.verdict = ComplexityReport::Verdict::bounded;
            rep.preperiod = it->second;
            rep.period = k + 1 - it->second;
            break;
        }
    }
    if (rep.verdict != ComplexityReport::Verdict::bounded) return rep;

    // nu-twisted period: compare Omega^p M with the nu-orbit of M.
    const auto nu_order = static_cast<int>(nakayama_permutation(mod.algebra()).order());
    std::vector<CanonicalForm> twists;
    Module<F> tw = mod;
    for (int s = 0; s < nu_order; ++s) {
        twists.push_back(canonical_form(tw));
        tw = nakayama_twist(tw);
    }
    const int horizon = rep.preperiod + rep.period * nu_order;
    while (static_cast<int>(forms.size()) <= horizon) {
        cur = syzygy(cur);
        forms.push_back(canonical_form(cur));
    }
    for (int p = 1; p <= horizon && !rep.twisted_period; ++p) {
        for (int s = 0; s < nu_order; ++s) {
            if (forms[p] == twists[s]) {
                rep.twisted_period = std::pair{p, s};
                break;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Extensions

template <ExactField F>
struct ShortExactSequence {
    Module<F> left;
    Module<F> middle;
    Module<F> right;
    Morphism<F> inclusion;
    Morphism<F> projection;

    bool is_exact() const {
        if (!(inclusion.source() == left && inclusion.target() == middle)) return false;
        if (!(projection.source() == middle && projection.target() == right)) return false;
        if (!inclusion.intertwines() || !projection.intertwines()) return false;
        if (!inclusion.is_injective() || !projection.is_surjective()) return false;
        if (!projection.after(inclusion).is_zero()) return false;
        // im(inclusion) is inside ker(projection); equal dimensions force equality.
        return middle.total_dim() == left.total_dim() + right.total_dim();
    }

    void validate() const {
        if (!is_exact()) throw InvariantBreach("sequence is not short exact");
    }

    bool is_split() const { return is_isomorphic(middle, direct_sum(middle.algebra(), std::vector{left, right})); }
};

template <ExactField F>
ShortExactSequence<F> split_sequence(const Module<F>& left, const Module<F>& right) {
    auto [inc, proj] = detail::split_pair(left, right);
    auto middle = inc.target();
    return {left, middle, right, std::move(inc), std::move(proj)};
}

namespace detail {

/// Pushout of 0 -> K -> P -> X -> 0 along f: K -> V, giving 0 -> V -> U -> X -> 0.
template <ExactField F>
ShortExactSequence<F> pushout_extension(const Morphism<F>& iota, const Morphism<F>& epi, const Morphism<F>& f) {
    const Algebra& a = f.source().algebra();
    const F& fld = f.source().field();
    const auto& v_mod = f.target();
    const auto& p_mod = iota.target();
    auto w = direct_sum(a, std::vector<Module<F>>{v_mod, p_mod});
    std::vector<Matrix<F>> phi, from_v, to_x;
    for (int v = 0; v < a.vertices(); ++v) {
        phi.push_back(vstack(f.at(v), iota.at(v).scaled(fld.neg(fld.one()))));
        from_v.push_back(vstack(Matrix<F>::identity(fld, v_mod.dim(v)), Matrix<F>(fld, p_mod.dim(v), v_mod.dim(v))));
        to_x.push_back(hstack(Matrix<F>(fld, epi.target().dim(v), v_mod.dim(v)), epi.at(v)));
    }
    auto q = cokernel(Morphism<F>(f.source(), w, std::move(phi)));
    auto inc = q.projection.after(Morphism<F>(v_mod, w, std::move(from_v)));
    auto proj = induced_from_quotient(q, Morphism<F>(w, epi.target(), std::move(to_x)));
    ShortExactSequence<F> seq{v_mod, q.module, epi.target(), std::move(inc), std::move(proj)};
    seq.validate();
    return seq;
}

}  // namespace detail

/// Extension 0 -> V -> U -> X -> 0 whose class is the stable class of f: Omega X -> V.
template <ExactField F>
ShortExactSequence<F> extension_from_cocycle(const Module<F>& x, const Module<F>& v, const Morphism<F>& f) {
    x.check_same_algebra(v);
    auto sd = syzygy_data(x);
    if (!(f.source() == sd.kernel) || !(f.target() == v) || !f.intertwines()) {
        throw InvalidParameter("cocycle must be a module map from syzygy(X) to V");
    }
    return detail::pushout_extension(sd.inclusion, sd.cover.epi, f);
}

template <ExactField F>
struct UniversalExtension {
    Module<F> middle;
    std::size_t multiplicity;
    ShortExactSequence<F> sequence;
};

/**
 * 0 -> V -> U -> X^r -> 0 with r = dim Ext^1(X, V), whose restriction to the
 * k-th copy of X is the k-th basis class. Requires Ext^1(X, X) = 0; then
 * Ext^1(X, U) = 0.
 */
template <ExactField F>
UniversalExtension<F> universal_extension(const Module<F>& x, const Module<F>& v) {
    x.check_same_algebra(v);
    const Algebra& a = x.algebra();
    auto sd = syzygy_data(x);
    if (auto self = stable_hom_dim(sd.kernel, x); self != 0) {
        throw RigidityError("universal extension needs Ext^1(X, X) = 0, but dim Ext^1(X, X) = " +
                            std::to_string(self));
    }
    auto classes = stable_hom_basis(sd.kernel, v);
    const std::size_t r = classes.size();
    if (r == 0) {
        auto seq = split_sequence(v, Module<F>::zero(a));
        return {v, 0, std::move(seq)};
    }
    std::vector<Morphism<F>> iotas(r, sd.inclusion), epis(r, sd.cover.epi);
    auto iota_r = detail::block_diagonal_morphism(a, iotas);
    auto epi_r = detail::block_diagonal_morphism(a, epis);
    std::vector<Matrix<F>> joined;
    for (int vtx = 0; vtx < a.vertices(); ++vtx) {
        Matrix<F> row = classes[0].at(vtx);
        for (std::size_t k = 1; k < r; ++k) row = hstack(row, classes[k].at(vtx));
        joined.push_back(std::move(row));
    }
    Morphism<F> f(iota_r.source(), v, std::move(joined));
    auto seq = detail::pushout_extension(iota_r, epi_r, f);
    auto middle = seq.middle;
    return {std::move(middle), r, std::move(seq)};
}

template <ExactField F>
struct ChainStep {
    int index;
    /// Omega^{n-i} X.
    Module<F> shifted_x;
    std::size_t multiplicity;
    bool split;
    ShortExactSequence<F> sequence;
    /// U_i equals module_from_labels of these, in this order.
    std::vector<IntervalLabel> summands;
    /// (j, dim Ext^1(Omega^j X, U_i)) for n-i <= j <= n-1; all zero.
    std::vector<std::pair<int, std::size_t>> window;
};

namespace detail {

/// Replaces the middle term by its interval normal form and returns its labels.
template <ExactField F>
std::vector<IntervalLabel> normalize_middle(ShortExactSequence<F>& seq) {
    auto dec = decompose(seq.middle);
    seq.middle = dec.normal;
    seq.inclusion = dec.to_normal.after(seq.inclusion);
    seq.projection = seq.projection.after(dec.from_normal);
    return dec.labels;
}

}  // namespace detail

/**
 * Builds U_0 = V, U_1, ..., U_n with 0 -> U_{i-1} -> U_i -> (Omega^{n-i} X)^{r_i} -> 0
 * and Ext^1(Omega^j X, U_i) = 0 for n-i <= j <= n-1. When Ext^1(Omega^{n-i} X, U_{i-1})
 * already vanishes the step is the split sequence with r_i = 1.
 *
 * Every U_i (i >= 1) is a direct sum of interval modules. Ext^1 is additive in the
 * second argument, so the block sum of the universal extensions of the summands of
 * U_{i-1} is a universal extension of U_{i-1}; each step is assembled that way.
 * A builder keeps those pieces for its X across calls to run(); it is not thread-safe.
 */
template <ExactField F>
class ChainBuilder {
public:
    ChainBuilder(const Module<F>& x, int n) : n_(n), shifts_{x} {
        if (n < 1) throw InvalidParameter("chain length n must be >= 1");
        for (int j = 1; j <= n; ++j) shifts_.push_back(syzygy(shifts_.back()));
        for (int i = 1; i <= n; ++i) {
            if (auto d = stable_hom_dim(shifts_[i], x); d != 0) {
                throw RigidityError("chain needs Ext^i(X, X) = 0 for 1 <= i <= n, but dim Ext^" + std::to_string(i) +
                                    "(X, X) = " + std::to_string(d));
            }
        }
        ext_cache_.resize(n);
        parts_.resize(n + 1);
        shift_forms_.resize(n + 1);
    }

    std::vector<ChainStep<F>> run(const Module<F>& v) {
        const Module<F>& x = shifts_.front();
        x.check_same_algebra(v);
        const Algebra& a = x.algebra();
        auto entry = decompose(v);
        Module<F> u = entry.normal;
        std::vector<IntervalLabel> labels = entry.labels;
        std::vector<ChainStep<F>> steps;
        for (int i = 1; i <= n_; ++i) {
            const auto& y = shifts_[n_ - i];
            const bool split = ext_into(n_ - i, labels) == 0;
            std::vector<IntervalLabel> summands;
            std::size_t r = 0;
            auto sequence = [&]() -> ShortExactSequence<F> {
                if (split) {
                    const auto& dec_y = shift_form(n_ - i);
                    auto [inc, proj] = detail::split_pair(u, dec_y.normal);
                    summands = labels;
                    summands.insert(summands.end(), dec_y.labels.begin(), dec_y.labels.end());
                    r = 1;
                    return {u, inc.target(), y, inc, dec_y.from_normal.after(proj)};
                }
                std::vector<Morphism<F>> incs, projs;
                for (const auto& l : labels) {
                    const auto& part = extension_part(i, l);
                    incs.push_back(part.sequence.inclusion);
                    projs.push_back(part.sequence.projection);
                    summands.insert(summands.end(), part.labels.begin(), part.labels.end());
                    r += part.multiplicity;
                }
                // Rebuilt on shared modules: u is the sum of the parts' left terms, and the
                // middle is shared so that later equality checks are pointer comparisons.
                auto block_inc = detail::block_diagonal_morphism(a, incs);
                auto block_proj = detail::block_diagonal_morphism(a, projs);
                Morphism<F> inc(u, block_inc.target(), block_inc.maps());
                Morphism<F> proj(inc.target(), block_proj.target(), block_proj.maps());
                return {u, inc.target(), proj.target(), std::move(inc), std::move(proj)};
            }();
            ChainStep<F> step{i, y, r, split, std::move(sequence), std::move(summands), {}};
            if (i == 1) {
                // U_0 is V itself, not its normal form.
                step.sequence.left = v;
                step.sequence.inclusion = step.sequence.inclusion.after(entry.to_normal);
            }
            u = step.sequence.middle;
            labels = step.summands;
            for (int j = n_ - i; j <= n_ - 1; ++j) {
                auto d = ext_into(j, labels);
                step.window.emplace_back(j, d);
                if (d != 0) {
                    throw InvariantBreach("Ext^1(Omega^" + std::to_string(j) + " X, U_" + std::to_string(i) + ") != 0");
                }
            }
            steps.push_back(std::move(step));
        }
        return steps;
    }

private:
    struct Part {
        ShortExactSequence<F> sequence;
        std::vector<IntervalLabel> labels;
        std::size_t multiplicity;
    };

    /// dim Ext^1(Omega^j X, sum of the intervals), one summand at a time.
    std::size_t ext_into(int j, const std::vector<IntervalLabel>& labels) {
        const Algebra& a = shifts_.front().algebra();
        std::size_t total = 0;
        for (const auto& l : labels) {
            auto it = ext_cache_[j].find(l);
            if (it == ext_cache_[j].end()) {
                it = ext_cache_[j].emplace(l, stable_hom_dim(shifts_[j + 1], interval_module<F>(a, l))).first;
            }
            total += it->second;
        }
        return total;
    }

    const IntervalDecomposition<F>& shift_form(int j) {
        if (!shift_forms_[j]) shift_forms_[j].emplace(decompose(shifts_[j]));
        return *shift_forms_[j];
    }

    /// Universal extension of Omega^{n-i} X by the interval l, middle in normal form.
    const Part& extension_part(int i, const IntervalLabel& l) {
        auto it = parts_[i].find(l);
        if (it == parts_[i].end()) {
            auto ue = universal_extension(shifts_[n_ - i], interval_module<F>(shifts_.front().algebra(), l));
            auto part_labels = detail::normalize_middle(ue.sequence);
            it = parts_[i].emplace(l, Part{std::move(ue.sequence), std::move(part_labels), ue.multiplicity}).first;
        }
        return it->second;
    }

    int n_;
    std::vector<Module<F>> shifts_;
    std::vector<std::map<IntervalLabel, std::size_t>> ext_cache_;
    std::vector<std::map<IntervalLabel, Part>> parts_;
    std::vector<std::optional<IntervalDecomposition<F>>> shift_forms_;
};

template <ExactField F>
std::vector<ChainStep<F>> orthogonalization_chain(const Module<F>& x, const Module<F>& v, int n) {
    if (n < 1) throw InvalidParameter("chain length n must be >= 1");
    x.check_same_algebra(v);
    return ChainBuilder<F>(x, n).run(v);
}

}  // namespace nakayama
