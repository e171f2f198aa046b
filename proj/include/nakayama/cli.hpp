/**
 * @file cli.hpp
 * @brief The `syzygy` command-line front end.
 *
 * Each subcommand builds one JSON report; `--format data` prints it verbatim
 * and `--format text` renders the same document as tables.
 *
 * Exit codes: 0 computed, 1 refuted (or empty search with --expect-nonempty),
 * 2 usage error, 3 internal invariant breach.
 */
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "homology.hpp"
#include "modrep.hpp"
#include "ortho.hpp"

namespace nakayama::cli {

using json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_refuted = 1;
constexpr int exit_usage = 2;
constexpr int exit_internal = 3;

struct Caps {
    static constexpr int max_n = 6;
    static constexpr int max_vertices = 32;
    static constexpr int max_rad_length = 32;
    static constexpr int max_search_indecomposables = 64;
    static constexpr int max_sweep_m = 8;
    static constexpr int max_sweep_t = 5;
    static constexpr int max_steps = 10'000;
};

/// "nakayama:m,t[,p]" (p a prime, or q for the rationals) or a path to an algebra spec file.
inline Algebra parse_algebra_arg(const std::string& arg, std::optional<int> label_base) {
    Algebra a = [&] {
        const std::string prefix = "nakayama:";
        if (arg.rfind(prefix, 0) == 0) {
            std::vector<std::string> parts;
            std::stringstream ss(arg.substr(prefix.size()));
            for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
            if (parts.size() < 2 || parts.size() > 3) {
                throw ParseError("algebra shorthand must be nakayama:m,t[,p], got \"" + arg + "\"", "algebra");
            }
            auto to_int = [&](const std::string& s, const char* what) {
                try {
                    std::size_t used = 0;
                    int v = std::stoi(s, &used);
                    if (used != s.size()) throw std::invalid_argument(s);
                    return v;
                } catch (const std::exception&) {
                    throw ParseError(std::string("algebra shorthand: bad ") + what + " \"" + s + "\"", what);
                }
            };
            FieldSpec field = FieldSpec::prime(2);
            if (parts.size() == 3) {
                if (parts[2] == "q" || parts[2] == "Q" || parts[2] == "rational") {
                    field = FieldSpec::rational();
                } else {
                    field = FieldSpec::prime(to_int(parts[2], "prime"));
                }
            }
            return Algebra(to_int(parts[0], "vertices"), to_int(parts[1], "rad_length"), field);
        }
        std::ifstream in(arg);
        if (!in) throw ParseError("cannot read algebra spec \"" + arg + "\"", "algebra");
        std::stringstream buf;
        buf << in.rdbuf();
        return load_algebra(buf.str());
    }();
    if (label_base) a = Algebra(a.vertices(), a.rad_length(), a.field(), *label_base);
    if (a.vertices() > Caps::max_vertices || a.rad_length() > Caps::max_rad_length) {
        throw InvalidParameter("algebra exceeds the caps m <= " + std::to_string(Caps::max_vertices) +
                               ", t <= " + std::to_string(Caps::max_rad_length));
    }
    return a;
}

inline json label_list(const Algebra& a, const std::vector<IntervalLabel>& labels) {
    json out = json::array();
    for (const auto& l : labels) out.push_back(format_label(a, l));
    return out;
}

inline std::string joined(const json& list, const std::string& sep = "+") {
    if (list.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < list.size(); ++k) out += (k ? sep : "") + list[k].get<std::string>();
    return out;
}

inline std::string label_set(const json& list) { return "{" + joined(list, ", ") + "}"; }

// ---------------------------------------------------------------------------
// Report builders

inline json info_report(const Algebra& a) {
    auto nu = nakayama_permutation(a);
    json rep;
    rep["algebra"] = algebra_to_json(a);
    rep["field"] = a.field().name();
    rep["dimension"] = a.dimension();
    rep["indecomposables"] = a.vertices() * a.rad_length();
    json perm = json::array();
    for (int i = 0; i < a.vertices(); ++i) perm.push_back({i + a.label_base(), nu(i) + a.label_base()});
    rep["nakayama_permutation"] = perm;
    json socles = json::array();
    bool selfinjective = true;
    std::vector<int> hit(a.vertices(), 0);
    with_field(a.field(), [&](auto field) {
        using F = decltype(field);
        for (int i = 0; i < a.vertices(); ++i) {
            auto soc = socle_vertices(projective_module<F>(a, i));
            if (soc.size() != 1 || soc[0] != nu(i)) throw InvariantBreach("socle of a projective disagrees with nu");
            ++hit[soc[0]];
            socles.push_back({{"projective", format_label(a, {i, a.rad_length()})},
                              {"socle", format_label(a, {soc[0], 1})}});
        }
    });
    // Each simple is the socle of exactly one projective, so the projectives are the injective hulls of the simples.
    for (int h : hit) selfinjective = selfinjective && h == 1;
    rep["projective_socles"] = socles;
    rep["selfinjective"] = selfinjective;
    return rep;
}

inline json indec_report(const Algebra& a) {
    json rep;
    rep["algebra"] = algebra_to_json(a);
    json list = json::array();
    with_field(a.field(), [&](auto field) {
        using F = decltype(field);
        auto set = enumerate_indecomposables<F>(a);
        for (std::size_t k = 0; k < set.size(); ++k) {
            list.push_back({{"label", format_label(a, set.labels[k])},
                            {"dimension", set.modules[k].total_dim()},
                            {"dimension_vector", set.modules[k].dims()},
                            {"projective", static_cast<bool>(set.projective[k])}});
        }
    });
    rep["indecomposables"] = list;
    return rep;
}

inline json ext_table_report(const Algebra& a, int n, int jobs) {
    auto table = ext_vanishing_table(a, n, jobs);
    json rep;
    rep["algebra"] = algebra_to_json(a);
    rep["n"] = n;
    rep["labels"] = label_list(a, table.labels);
    json van = json::array();
    for (std::size_t r = 0; r < table.size(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < table.size(); ++c) row.push_back(table.vanishes(r, c));
        van.push_back(row);
    }
    rep["vanishing"] = van;
    json dims = json::array();
    for (int k = 1; k <= n; ++k) {
        json rows = json::array();
        for (std::size_t r = 0; r < table.size(); ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < table.size(); ++c) row.push_back(table.ext(r, c, k));
            rows.push_back(row);
        }
        dims.push_back({{"degree", k}, {"table", rows}});
    }
    rep["dims"] = dims;
    return rep;
}

inline json ext_report(const Algebra& a, const std::string& from, const std::string& to, int k) {
    auto m_labels = parse_labels(a, from);
    auto n_labels = parse_labels(a, to);
    json rep;
    rep["algebra"] = algebra_to_json(a);
    rep["from"] = label_list(a, m_labels);
    rep["to"] = label_list(a, n_labels);
    rep["degree"] = k;
    rep["dimension"] = with_field(a.field(), [&](auto field) {
        using F = decltype(field);
        return ext_dim(module_from_labels<F>(a, m_labels), module_from_labels<F>(a, n_labels), k);
    });
    return rep;
}

inline json resolve_report(const Algebra& a, const std::string& mod, int steps) {
    auto labels = parse_labels(a, mod);
    auto res = with_field(a.field(), [&](auto field) {
        using F = decltype(field);
        return min_projective_resolution(module_from_labels<F>(a, labels), steps);
    });
    json rep;
    rep["algebra"] = algebra_to_json(a);
    rep["module"] = label_list(a, labels);
    rep["steps"] = steps;
    json terms = json::array();
    for (std::size_t k = 0; k < res.terms.size(); ++k) {
        terms.push_back({{"k", k}, {"cover", label_list(a, res.terms[k].cover)}, {"dim", res.terms[k].dim}});
    }
    rep["terms"] = terms;
    json syz = json::array();
    for (std::size_t k = 0; k < res.syzygies.size(); ++k) {
        syz.push_back({{"k", k}, {"form", label_list(a, res.syzygies[k])}, {"dim", res.syzygy_dims[k]}});
    }
    rep["syzygies"] = syz;
    return rep;
}

inline json complexity_json(const ComplexityReport& r) {
    json rep;
    rep["verdict"] = to_string(r.verdict);
    if (auto b = r.complexity_bound()) {
        rep["complexity_bound"] = *b;
    } else {
        rep["complexity_bound"] = nullptr;
    }
    rep["steps_examined"] = r.steps_examined;
    if (r.projective_dimension) rep["projective_dimension"] = *r.projective_dimension;
    if (r.verdict == ComplexityReport::Verdict::bounded) {
        rep["preperiod"] = r.preperiod;
        rep["period"] = r.period;
        if (r.twisted_period) {
            rep["twisted_period"] = {{"period", r.twisted_period->first}, {"nu_power", r.twisted_period->second}};
        }
    }
    rep["term_dims"] = r.term_dims;
    return rep;
}

inline json complexity_report(const Algebra& a, const std::string& mod, int budget) {
    auto labels = parse_labels(a, mod);
    auto r = with_field(a.field(), [&](auto field) {
        using F = decltype(field);
        return complexity_estimate(module_from_labels<F>(a, labels), budget);
    });
    json rep;
    rep["algebra"] = algebra_to_json(a);
    rep["module"] = label_list(a, labels);
    rep["budget"] = budget;
    const json body = complexity_json(r);
    for (const auto& [k, v] : body.items()) rep[k] = v;
    return rep;
}

inline json verify_report(const Algebra& a, const std::string& set, int n) {
    auto labels = parse_labels(a, set);
    auto res = is_maximal_n_orthogonal(a, labels, n);
    json rep;
    rep["algebra"] = algebra_to_json(a);
    rep["n"] = n;
    rep["set"] = label_list(a, res.labels);
    rep["verified"] = res.verified;
    json viol = json::array();
    for (const auto& v : res.violations) {
        viol.push_back({{"witness", format_label(a, v.witness)}, {"condition", to_string(v.condition)}});
    }
    rep["violations"] = viol;
    return rep;
}

/// Search plus closure orbits and, for n = 1, exchange tables. `warnings` collects exchange-rule breaches.
inline json search_report(const Algebra& a, int n, int jobs, bool timing, std::vector<std::string>& warnings) {
    if (a.dimension() > Caps::max_search_indecomposables) {
        throw InvalidParameter("search is capped at m*t <= " + std::to_string(Caps::max_search_indecomposables));
    }
    auto start = std::chrono::steady_clock::now();
    auto table = ext_vanishing_table(a, n, jobs);
    auto sets = search_maximal_orthogonal(table, n);
    json rep;
    rep["algebra"] = algebra_to_json(a);
    rep["n"] = n;
    json list = json::array(), closure = json::array(), exchange = json::array();
    for (const auto& s : sets) {
        list.push_back(label_list(a, s.labels));
        auto cr = with_field(a.field(), [&](auto field) {
            using F = decltype(field);
            return check_closure_theorem<F>(a, s, n);
        });
        json images = json::array();
        for (std::size_t k = 0; k < cr.images.size(); ++k) {
            json entry{{"summand", format_label(a, cr.images[k].first)},
                       {"image", joined(label_list(a, cr.images[k].second))}};
            if (cr.holds) entry["orbit_length"] = cr.orbit_lengths[k];
            images.push_back(entry);
        }
        closure.push_back({{"set", label_list(a, s.labels)}, {"holds", cr.holds}, {"images", images}, {"order", cr.order}});
        if (n == 1) {
            json partners = json::array();
            for (const auto& y : s.labels) {
                if (is_projective_label(a, y)) continue;
                auto ts = exchange_partners(table, s, n, y);
                if (ts.size() > 1) {
                    warnings.push_back("exchange rule violated: " + format_label(a, y) + " in " +
                                       label_set(label_list(a, s.labels)) + " has " + std::to_string(ts.size()) +
                                       " partners");
                }
                partners.push_back({{"summand", format_label(a, y)}, {"partners", label_list(a, ts)}});
            }
            exchange.push_back({{"set", label_list(a, s.labels)}, {"partners", partners}});
        }
    }
    rep["sets"] = list;
    rep["closure"] = closure;
    if (n == 1) rep["exchange"] = exchange;
    rep["exchange_rule_violations"] = warnings;
    if (timing) {
        rep["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return rep;
}

inline json chain_report(const Algebra& a, const std::string& x_text, const std::string& v_text, int n) {
    auto x_labels = detail::normalized(parse_labels(a, x_text));
    auto v_labels = parse_labels(a, v_text);
    json rep;
    rep["algebra"] = algebra_to_json(a);
    rep["n"] = n;
    rep["x"] = label_list(a, x_labels);
    rep["v"] = label_list(a, v_labels);
    rep["x_verified"] = is_maximal_n_orthogonal(a, x_labels, n).verified;
    json steps = json::array();
    bool in_add = true;
    with_field(a.field(), [&](auto field) {
        using F = decltype(field);
        auto chain = orthogonalization_chain(module_from_labels<F>(a, x_labels), module_from_labels<F>(a, v_labels), n);
        for (const auto& st : chain) {
            json window = json::array();
            for (auto [j, d] : st.window) window.push_back({{"j", j}, {"ext1", d}});
            steps.push_back({{"i", st.index},
                             {"shifted_x", label_list(a, canonical_form(st.shifted_x))},
                             {"r", st.multiplicity},
                             {"split", st.split},
                             {"u", label_list(a, canonical_form(st.sequence.middle))},
                             {"u_dim", st.sequence.middle.total_dim()},
                             {"window", window}});
        }
        for (const auto& l : canonical_form(chain.back().sequence.middle)) {
            in_add = in_add && std::binary_search(x_labels.begin(), x_labels.end(), l);
        }
    });
    rep["steps"] = steps;
    rep["final_in_add_x"] = in_add;
    return rep;
}

inline json sweep_report(int m_min, int m_max, int t_min, int t_max, int n_max, FieldSpec field, int jobs) {
    struct Cell {
        int m, t;
        std::vector<std::vector<OrthoSet>> per_n;
    };
    std::vector<Cell> cells;
    for (int m = m_min; m <= m_max; ++m)
        for (int t = t_min; t <= t_max; ++t) cells.push_back({m, t, {}});
    auto work = [&](Cell& c) {
        Algebra a(c.m, c.t, field);
        auto table = ext_vanishing_table(a, n_max);
        for (int n = 1; n <= n_max; ++n) c.per_n.push_back(search_maximal_orthogonal(table, n));
    };
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, cells.size()); ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t k = w; k < cells.size(); k += workers) work(cells[k]);
            });
        }
    }
    json rows = json::array();
    for (const auto& c : cells) {
        Algebra a(c.m, c.t, field);
        for (int n = 1; n <= n_max; ++n) {
            json sets = json::array();
            for (const auto& s : c.per_n[n - 1]) sets.push_back(label_list(a, s.labels));
            rows.push_back({{"m", c.m}, {"t", c.t}, {"n", n}, {"count", sets.size()}, {"exists", !sets.empty()},
                            {"sets", sets}});
        }
    }
    json rep;
    rep["field"] = field.name();
    rep["rows"] = rows;
    return rep;
}

// ---------------------------------------------------------------------------
// Text rendering

inline std::string algebra_line(const json& spec) {
    std::string field = spec["field"].contains("prime") ? "GF(" + std::to_string(spec["field"]["prime"].get<int>()) + ")" : "Q";
    return "A(" + std::to_string(spec["vertices"].get<int>()) + "," + std::to_string(spec["rad_length"].get<int>()) +
           ") over " + field;
}

inline void render_text(const std::string& command, const json& rep, std::ostream& out) {
    if (rep.contains("algebra")) out << "algebra: " << algebra_line(rep["algebra"]) << '\n';
    if (command == "info") {
        out << "dimension: " << rep["dimension"] << "\nindecomposables: " << rep["indecomposables"] << '\n';
        out << "nakayama permutation:";
        for (const auto& p : rep["nakayama_permutation"]) out << ' ' << p[0] << "->" << p[1];
        out << "\nprojective socles:\n";
        for (const auto& s : rep["projective_socles"]) {
            out << "  soc " << s["projective"].get<std::string>() << " = " << s["socle"].get<std::string>() << '\n';
        }
        out << "selfinjective: " << (rep["selfinjective"].get<bool>() ? "yes" : "no") << '\n';
    } else if (command == "indec") {
        for (const auto& e : rep["indecomposables"]) {
            out << std::left << std::setw(10) << e["label"].get<std::string>() << " dim " << e["dimension"]
                << "  dimvec " << e["dimension_vector"].dump() << (e["projective"].get<bool>() ? "  projective" : "")
                << '\n';
        }
    } else if (command == "ext-table") {
        const auto& labels = rep["labels"];
        out << "n = " << rep["n"] << "   ('.' = Ext^{1..n}(row, col) vanishes, 'x' otherwise)\n";
        out << std::setw(10) << "";
        for (const auto& l : labels) out << std::setw(9) << l.get<std::string>();
        out << '\n';
        for (std::size_t r = 0; r < labels.size(); ++r) {
            out << std::left << std::setw(10) << labels[r].get<std::string>() << std::right;
            for (std::size_t c = 0; c < labels.size(); ++c) out << std::setw(9) << (rep["vanishing"][r][c].get<bool>() ? "." : "x");
            out << '\n';
        }
        for (const auto& d : rep["dims"]) {
            out << "dim Ext^" << d["degree"] << ":\n";
            for (std::size_t r = 0; r < labels.size(); ++r) {
                out << std::left << std::setw(10) << labels[r].get<std::string>() << std::right;
                for (const auto& v : d["table"][r]) out << std::setw(9) << v.get<std::size_t>();
                out << '\n';
            }
        }
    } else if (command == "ext") {
        out << "dim Ext^" << rep["degree"] << "(" << joined(rep["from"]) << ", " << joined(rep["to"])
            << ") = " << rep["dimension"] << '\n';
    } else if (command == "resolve") {
        out << "minimal projective resolution of " << joined(rep["module"]) << ":\n";
        for (const auto& t : rep["terms"]) {
            out << "  P_" << t["k"] << " = " << joined(t["cover"]) << "  (dim " << t["dim"] << ")\n";
        }
        for (const auto& s : rep["syzygies"]) {
            out << "  Omega^" << s["k"] << " = " << joined(s["form"]) << "  (dim " << s["dim"] << ")\n";
        }
    } else if (command == "complexity") {
        out << "module: " << joined(rep["module"]) << "\nverdict: " << rep["verdict"].get<std::string>();
        if (!rep["complexity_bound"].is_null()) out << " (cx <= " << rep["complexity_bound"] << ")";
        out << "\nsteps examined: " << rep["steps_examined"] << '\n';
        if (rep.contains("projective_dimension")) out << "projective dimension: " << rep["projective_dimension"] << '\n';
        if (rep.contains("period")) {
            out << "Omega-period: " << rep["period"] << " (after " << rep["preperiod"] << " steps)\n";
        }
        if (rep.contains("twisted_period")) {
            out << "twisted period: Omega^" << rep["twisted_period"]["period"] << " M = nu^"
                << rep["twisted_period"]["nu_power"] << " M\n";
        }
        out << "term dimensions: " << rep["term_dims"].dump() << '\n';
    } else if (command == "verify") {
        out << "n = " << rep["n"] << "  set " << label_set(rep["set"]) << ": "
            << (rep["verified"].get<bool>() ? "verified" : "refuted") << '\n';
        for (const auto& v : rep["violations"]) {
            out << "  witness " << v["witness"].get<std::string>() << ": " << v["condition"].get<std::string>() << '\n';
        }
    } else if (command == "search") {
        out << "n = " << rep["n"] << "  maximal n-orthogonal sets: " << rep["sets"].size() << '\n';
        for (std::size_t k = 0; k < rep["sets"].size(); ++k) {
            const auto& cl = rep["closure"][k];
            out << "  " << label_set(rep["sets"][k]) << '\n';
            out << "    Omega^(n+2) nu closure: " << (cl["holds"].get<bool>() ? "holds" : "FAILS") << ", order "
                << cl["order"] << '\n';
            for (const auto& im : cl["images"]) {
                out << "      " << im["summand"].get<std::string>() << " -> " << im["image"].get<std::string>();
                if (im.contains("orbit_length")) out << "  (orbit " << im["orbit_length"] << ")";
                out << '\n';
            }
            if (rep.contains("exchange")) {
                for (const auto& p : rep["exchange"][k]["partners"]) {
                    out << "    exchange " << p["summand"].get<std::string>() << " -> "
                        << (p["partners"].empty() ? "none" : joined(p["partners"], ", ")) << '\n';
                }
            }
        }
        for (const auto& w : rep["exchange_rule_violations"]) out << "  WARNING: " << w.get<std::string>() << '\n';
        if (rep.contains("timing_ms")) out << "time: " << rep["timing_ms"] << " ms\n";
    } else if (command == "chain") {
        out << "n = " << rep["n"] << "  X = " << label_set(rep["x"]) << (rep["x_verified"].get<bool>() ? " (verified)" : " (not verified)")
            << "  V = " << joined(rep["v"]) << '\n';
        for (const auto& s : rep["steps"]) {
            out << "  step " << s["i"] << ": " << (s["split"].get<bool>() ? "split" : "universal") << ", r = " << s["r"]
                << ", Omega^(n-i) X = " << joined(s["shifted_x"]) << '\n';
            out << "    U = " << joined(s["u"]) << "  (dim " << s["u_dim"] << ")\n";
            for (const auto& w : s["window"]) out << "    dim Ext^1(Omega^" << w["j"] << " X, U) = " << w["ext1"] << '\n';
        }
        out << "U_n in add(X): " << (rep["final_in_add_x"].get<bool>() ? "yes" : "no") << '\n';
    } else if (command == "sweep") {
        out << "field: " << rep["field"].get<std::string>() << '\n';
        out << "   m   t   n  count\n";
        for (const auto& r : rep["rows"]) {
            out << std::setw(4) << r["m"].get<int>() << std::setw(4) << r["t"].get<int>() << std::setw(4)
                << r["n"].get<int>() << std::setw(7) << r["count"].get<std::size_t>() << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Entry point

inline int default_jobs() {
    if (const char* env = std::getenv("SYZYGY_JOBS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
        }
    }
    return 1;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact homological algebra over selfinjective Nakayama algebras"};
    app.name("syzygy");
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string algebra_arg, format = "text";
    int jobs = default_jobs();
    std::optional<int> label_base;
    app.add_option("--algebra", algebra_arg, "Spec file or nakayama:m,t[,p]");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "data"}));
    app.add_option("--jobs", jobs, "Worker threads (default $SYZYGY_JOBS or 1)")->check(CLI::PositiveNumber);
    app.add_option("--label-base", label_base, "Show vertices as 0- or 1-based labels")->check(CLI::IsMember({0, 1}));

    int n = 1, deg = 1, steps = 0, budget = 0;
    std::string from, to, mod, set, x_text, v_text;
    bool expect_nonempty = false, timing = false;

    auto* info = app.add_subcommand("info", "Algebra summary");
    auto* indec = app.add_subcommand("indec", "List indecomposables");
    auto* ext_table = app.add_subcommand("ext-table", "Ext vanishing table");
    ext_table->add_option("--n", n, "Degree bound")->required();
    auto* ext = app.add_subcommand("ext", "dim Ext^k(M, N)");
    ext->add_option("--from", from)->required();
    ext->add_option("--to", to)->required();
    ext->add_option("--deg", deg)->required();
    auto* resolve = app.add_subcommand("resolve", "Minimal projective resolution");
    resolve->add_option("--module", mod)->required();
    resolve->add_option("--steps", steps)->required()->check(CLI::Range(0, Caps::max_steps));
    auto* complexity = app.add_subcommand("complexity", "Complexity estimate");
    complexity->add_option("--module", mod)->required();
    complexity->add_option("--budget", budget)->check(CLI::Range(1, Caps::max_steps));
    auto* search = app.add_subcommand("search", "Search maximal n-orthogonal modules");
    search->add_option("--n", n)->required();
    search->add_flag("--expect-nonempty", expect_nonempty, "Exit 1 when nothing is found");
    search->add_flag("--timing", timing, "Include wall time in the report");
    auto* verify = app.add_subcommand("verify", "Verify a maximal n-orthogonal set");
    verify->add_option("--set", set, "Labels joined by '+' or ','")->required();
    verify->add_option("--n", n)->required();
    auto* chain = app.add_subcommand("chain", "Orthogonalization chain U_0 = V, ..., U_n");
    chain->add_option("--x", x_text)->required();
    chain->add_option("--v", v_text)->required();
    chain->add_option("--n", n)->required();
    int m_min = 1, m_max = 4, t_min = 2, t_max = 4, n_max = 2;
    std::string sweep_field = "2";
    auto* sweep = app.add_subcommand("sweep", "Existence grid over A(m, t) and n");
    sweep->add_option("--m-min", m_min)->check(CLI::Range(1, Caps::max_sweep_m));
    sweep->add_option("--m-max", m_max)->check(CLI::Range(1, Caps::max_sweep_m));
    sweep->add_option("--t-min", t_min)->check(CLI::Range(1, Caps::max_sweep_t));
    sweep->add_option("--t-max", t_max)->check(CLI::Range(1, Caps::max_sweep_t));
    sweep->add_option("--n-max", n_max)->check(CLI::Range(1, Caps::max_n));
    sweep->add_option("--field", sweep_field, "Prime p or q for the rationals");

    std::vector<const char*> args(argv, argv + argc);
    try {
        app.parse(static_cast<int>(args.size()), args.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    auto* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    try {
        if (cmd != sweep && algebra_arg.empty()) throw ParseError("--algebra is required for " + name, "algebra");
        if ((cmd == ext_table || cmd == search || cmd == verify || cmd == chain) && (n < 1 || n > Caps::max_n)) {
            throw InvalidParameter("--n must lie in [1, " + std::to_string(Caps::max_n) + "]");
        }
        if (cmd == ext && deg < 1) throw InvalidParameter("--deg must be >= 1");

        json rep;
        int code = exit_ok;
        std::vector<std::string> warnings;
        if (cmd == sweep) {
            if (m_min > m_max || t_min > t_max) throw InvalidParameter("empty sweep range");
            FieldSpec field = (sweep_field == "q" || sweep_field == "Q") ? FieldSpec::rational()
                                                                         : FieldSpec::prime(std::stoll(sweep_field));
            rep = sweep_report(m_min, m_max, t_min, t_max, n_max, field, jobs);
        } else {
            Algebra a = parse_algebra_arg(algebra_arg, label_base);
            if (cmd == info) rep = info_report(a);
            if (cmd == indec) rep = indec_report(a);
            if (cmd == ext_table) rep = ext_table_report(a, n, jobs);
            if (cmd == ext) rep = ext_report(a, from, to, deg);
            if (cmd == resolve) rep = resolve_report(a, mod, steps);
            if (cmd == complexity) rep = complexity_report(a, mod, budget > 0 ? budget : default_budget(a));
            if (cmd == search) {
                rep = search_report(a, n, jobs, timing, warnings);
                if (expect_nonempty && rep["sets"].empty()) code = exit_refuted;
            }
            if (cmd == verify) {
                rep = verify_report(a, set, n);
                if (!rep["verified"].get<bool>()) code = exit_refuted;
            }
            if (cmd == chain) rep = chain_report(a, x_text, v_text, n);
        }
        for (const auto& w : warnings) err << "WARNING: " << w << '\n';
        if (format == "data") {
            out << rep.dump(2) << '\n';
        } else {
            render_text(name, rep, out);
        }
        return code;
    } catch (const InvariantBreach& e) {
        err << "internal invariant breach: " << e.what() << '\n';
        return exit_internal;
    } catch (const NotVerified& e) {
        err << "error: " << e.what() << '\n';
        return exit_refuted;
    } catch (const RigidityError& e) {
        err << "error: " << e.what() << '\n';
        return exit_refuted;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: bad numeric argument: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

}  // namespace nakayama::cli
