#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond the plain record types, so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "entigraph/graph.hpp"
#include "entigraph/vec2.hpp"
#include "entigraph/view.hpp"

namespace testsupport {

using namespace entigraph;

/// O(m^2 * s) pair/sentence intersection count.
inline std::map<std::pair<std::string, std::string>, std::int64_t> brute_collocations(
    const Document& doc, const std::vector<Mention>& mentions) {
    std::map<std::pair<std::string, std::string>, std::int64_t> out;
    for (std::size_t i = 0; i < mentions.size(); ++i) {
        for (std::size_t j = i + 1; j < mentions.size(); ++j) {
            std::int64_t shared = 0;
            for (const auto& s : doc.sentences) {
                const bool a = mentions[i].span.start < s.end && s.start < mentions[i].span.end;
                const bool b = mentions[j].span.start < s.end && s.start < mentions[j].span.end;
                if (a && b) ++shared;
            }
            if (shared > 0) {
                auto key = mentions[i].id < mentions[j].id ? std::pair{mentions[i].id, mentions[j].id}
                                                           : std::pair{mentions[j].id, mentions[i].id};
                out[key] = shared;
            }
        }
    }
    return out;
}

struct OracleEdge {
    std::string kind;
    std::string lo;  // endpoints as "x:id", sorted
    std::string hi;
    std::int64_t weight = 1;
    double confidence = 1.0;

    auto tie() const { return std::tie(kind, lo, hi, weight, confidence); }
    bool operator<(const OracleEdge& o) const { return tie() < o.tie(); }
    bool operator==(const OracleEdge& o) const { return tie() == o.tie(); }
};

inline OracleEdge oracle_edge(std::string kind, std::string a, std::string b, std::int64_t w, double c) {
    if (b < a) std::swap(a, b);
    return {std::move(kind), std::move(a), std::move(b), w, c};
}

/// Existential DE edges: (e, d) for every mention m of d linked to e.
inline std::set<OracleEdge> de_oracle(const Graph& g) {
    std::set<OracleEdge> out;
    for (const auto& [eid, _] : g.entities()) {
        for (const auto& [did, __] : g.documents()) {
            std::int64_t support = 0;
            double best = -1.0;
            for (const auto& [pair, conf] : g.links()) {
                if (pair.second != eid) continue;
                if (g.mentions().at(pair.first).document != did) continue;
                ++support;
                best = std::max(best, conf);
            }
            if (support > 0) out.insert(oracle_edge("entity-document", "e:" + eid, "d:" + did, support, best));
        }
    }
    return out;
}

struct OracleView {
    std::map<std::string, std::optional<EntityClass>> nodes;  // key string -> class
    std::set<OracleEdge> edges;
};

inline OracleView structural_oracle(const Graph& g, ViewMode mode) {
    OracleView v;
    for (const auto& [id, _] : g.documents()) v.nodes["d:" + id] = std::nullopt;
    for (const auto& [id, e] : g.entities()) v.nodes["e:" + id] = e.entity_class;
    if (mode == ViewMode::DE) {
        v.edges = de_oracle(g);
        return v;
    }
    for (const auto& [id, m] : g.mentions()) {
        v.nodes["m:" + id] = m.entity_class;
        v.edges.insert(oracle_edge("mention-document", "m:" + id, "d:" + m.document, 1, 1.0));
    }
    for (const auto& [pair, c] : g.links()) {
        v.edges.insert(oracle_edge("mention-entity", "m:" + pair.first, "e:" + pair.second, 1, c));
    }
    for (const auto& [pair, w] : g.collocations()) {
        v.edges.insert(oracle_edge("collocation", "m:" + pair.first, "m:" + pair.second, w, 1.0));
    }
    return v;
}

/// Set-comprehension form of the visibility predicate.
inline OracleView filter_oracle(const Graph& g, ViewMode mode, const RuleFilter& rule, const FocusState& focus) {
    const OracleView s = structural_oracle(g, mode);
    const std::string sel = focus.selected ? focus.selected->str() : "";
    const std::string foc = focus.focused ? focus.focused->str() : "";

    auto kind_of = [](const std::string& key) {
        return key[0] == 'd' ? NodeKind::Document : key[0] == 'm' ? NodeKind::Mention : NodeKind::Entity;
    };
    auto adjacent = [&](const std::string& a, const std::string& b) {
        for (const auto& e : s.edges) {
            if ((e.lo == a && e.hi == b) || (e.lo == b && e.hi == a)) return true;
        }
        return false;
    };
    auto edge_kind_allowed = [&](const std::string& name) {
        for (EdgeKind k : kAllEdgeKinds) {
            if (edge_kind_name(k) == name) return rule.edge_kinds.contains(k);
        }
        return false;
    };

    OracleView out;
    for (const auto& [key, cls] : s.nodes) {
        const bool rule_ok = rule.node_kinds.contains(kind_of(key)) && (!cls || rule.entity_classes.contains(*cls));
        const bool focus_ok = foc.empty() || key == foc || adjacent(key, foc) || key == sel;
        if (rule_ok && focus_ok) out.nodes[key] = cls;
    }
    for (const auto& e : s.edges) {
        const bool ends = out.nodes.contains(e.lo) && out.nodes.contains(e.hi);
        const bool sel_ok = sel.empty() || e.lo == sel || e.hi == sel || (!foc.empty() && (e.lo == foc || e.hi == foc));
        if (edge_kind_allowed(e.kind) && ends && sel_ok) out.edges.insert(e);
    }
    return out;
}

inline OracleView from_visible(const VisibleGraph& v) {
    OracleView out;
    for (const auto& n : v.nodes) out.nodes[n.key.str()] = std::nullopt;
    for (const auto& e : v.edges) {
        out.edges.insert(oracle_edge(std::string(edge_kind_name(e.kind)), e.a.str(), e.b.str(), e.weight, e.confidence));
    }
    return out;
}

inline std::set<std::string> key_set(const OracleView& v) {
    std::set<std::string> out;
    for (const auto& [k, _] : v.nodes) out.insert(k);
    return out;
}

/// splitmix64 written out from its published definition.
struct SplitMixReference {
    std::uint64_t x;
    std::uint64_t next() {
        x += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

inline std::vector<Vec2> reference_init(std::size_t n, std::uint64_t seed) {
    SplitMixReference rng{seed};
    const double r = 10.0 * std::sqrt(static_cast<double>(n));
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = std::ldexp(static_cast<double>(rng.next()), -64);
        const double v = std::ldexp(static_cast<double>(rng.next()), -64);
        out.push_back({r * (2.0 * u - 1.0), r * (2.0 * v - 1.0)});
    }
    return out;
}

/// Exact O(n^2) repulsion k_r * m_u * m_v / d, directed away from v.
inline std::vector<Vec2> exact_repulsion(const std::vector<Vec2>& p, const std::vector<double>& m, double kr) {
    std::vector<Vec2> f(p.size(), Vec2{0.0, 0.0});
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (i == j) continue;
            const double dx = p[i].x - p[j].x;
            const double dy = p[i].y - p[j].y;
            const double d2 = dx * dx + dy * dy;
            if (d2 == 0.0) continue;
            // |F| = kr*mi*mj/d along the unit vector (dx,dy)/d.
            const double s = kr * m[i] * m[j] / d2;
            f[i].x += dx * s;
            f[i].y += dy * s;
        }
    }
    return f;
}

/// Levenshtein by full dynamic-programming table.
inline std::size_t reference_edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) t[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) t[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = t[i - 1][j - 1] + (a[i - 1] != b[j - 1]);
            t[i][j] = std::min({t[i - 1][j] + 1, t[i][j - 1] + 1, sub});
        }
    }
    return t[a.size()][b.size()];
}

}  // namespace testsupport
