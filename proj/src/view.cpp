#include "entigraph/view.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

namespace entigraph {

std::string_view view_mode_name(ViewMode m) { return m == ViewMode::DME ? "dme" : "de"; }

std::optional<ViewMode> view_mode_from_name(std::string_view name) {
    if (name == "dme") return ViewMode::DME;
    if (name == "de") return ViewMode::DE;
    return std::nullopt;
}

std::string_view color_scheme_name(ColorScheme s) {
    return s == ColorScheme::ByType ? "byType" : "byClass";
}

std::optional<ColorScheme> color_scheme_from_name(std::string_view name) {
    if (name == "byType") return ColorScheme::ByType;
    if (name == "byClass") return ColorScheme::ByClass;
    return std::nullopt;
}

std::string Rgb::hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02X%02X%02X", r, g, b);
    return buf;
}

std::string_view pictogram_name(Pictogram p) {
    switch (p) {
        case Pictogram::Document: return "document";
        case Pictogram::Person: return "person";
        case Pictogram::Organization: return "organization";
        case Pictogram::Location: return "location";
        case Pictogram::Misc: return "misc";
    }
    return "misc";
}

std::string_view edge_style_name(EdgeStyle s) {
    switch (s) {
        case EdgeStyle::Membership: return "membership";
        case EdgeStyle::Link: return "link";
        case EdgeStyle::Collocation: return "collocation";
        case EdgeStyle::Virtual: return "virtual";
    }
    return "membership";
}

std::string VisualEdge::id() const { return Edge{kind, a, b, confidence, weight}.id(); }

bool StructuralGraph::contains(const GlobalKey& key) const {
    return std::binary_search(nodes.begin(), nodes.end(), StructuralNode{key, std::nullopt},
                              [](const StructuralNode& x, const StructuralNode& y) {
                                  return x.key < y.key;
                              });
}

StructuralGraph project_view(const Graph& graph, ViewMode mode) {
    StructuralGraph out;
    for (const auto& [id, d] : graph.documents()) {
        out.nodes.push_back({GlobalKey::document(id), std::nullopt});
    }
    for (const auto& [id, e] : graph.entities()) {
        out.nodes.push_back({GlobalKey::entity(id), e.entity_class});
    }
    if (mode == ViewMode::DME) {
        for (const auto& [id, m] : graph.mentions()) {
            out.nodes.push_back({GlobalKey::mention(id), m.entity_class});
        }
        out.edges = graph.edges();
        return out;
    }

    struct Support {
        std::int64_t count = 0;
        double confidence = 0.0;
    };
    std::map<IdPair, Support> virtual_edges;  // (entity, document)
    for (const auto& [pair, conf] : graph.links()) {
        auto& s = virtual_edges[{pair.second, graph.mentions().at(pair.first).document}];
        ++s.count;
        s.confidence = std::max(s.confidence, conf);
    }
    out.edges.reserve(virtual_edges.size());
    for (const auto& [pair, s] : virtual_edges) {
        out.edges.push_back({EdgeKind::EntityDocument, GlobalKey::entity(pair.first),
                             GlobalKey::document(pair.second), s.confidence, s.count});
    }
    return out;
}

FilteredGraph apply_filters(const StructuralGraph& structural, const RuleFilter& rule,
                            const FocusState& focus) {
    for (const auto* key : {&focus.selected, &focus.focused}) {
        if (*key && !structural.contains(**key)) {
            throw Error(ErrorCode::UnknownKey, (*key)->str(), "unknown focus key: " + (*key)->str());
        }
    }

    std::set<GlobalKey> focus_area;
    if (focus.focused) {
        const GlobalKey& f = *focus.focused;
        focus_area.insert(f);
        for (const Edge& e : structural.edges) {
            if (e.a == f) focus_area.insert(e.b);
            if (e.b == f) focus_area.insert(e.a);
        }
        if (focus.selected) focus_area.insert(*focus.selected);
    }

    FilteredGraph out;
    out.focus = focus;
    std::set<GlobalKey> visible;
    for (const StructuralNode& n : structural.nodes) {
        if (!rule.node_kinds.contains(n.key.kind)) continue;
        if (n.entity_class && !rule.entity_classes.contains(*n.entity_class)) continue;
        if (focus.focused && !focus_area.contains(n.key)) continue;
        visible.insert(n.key);
        out.nodes.push_back(n);
    }

    for (const Edge& e : structural.edges) {
        if (!rule.edge_kinds.contains(e.kind)) continue;
        if (!visible.contains(e.a) || !visible.contains(e.b)) continue;
        if (focus.selected) {
            const bool touches_selected = e.a == *focus.selected || e.b == *focus.selected;
            const bool touches_focused =
                focus.focused && (e.a == *focus.focused || e.b == *focus.focused);
            if (!touches_selected && !touches_focused) continue;
        }
        out.edges.push_back(e);
    }
    return out;
}

namespace {

Pictogram class_pictogram(EntityClass c) {
    switch (c) {
        case EntityClass::Person: return Pictogram::Person;
        case EntityClass::Organization: return Pictogram::Organization;
        case EntityClass::Location: return Pictogram::Location;
        case EntityClass::Misc: return Pictogram::Misc;
    }
    return Pictogram::Misc;
}

Rgb class_color(EntityClass c) {
    switch (c) {
        case EntityClass::Person: return palette::kPerson;
        case EntityClass::Organization: return palette::kOrganization;
        case EntityClass::Location: return palette::kLocation;
        case EntityClass::Misc: return palette::kMisc;
    }
    return palette::kMisc;
}

EdgeStyle style_of(EdgeKind k) {
    switch (k) {
        case EdgeKind::MentionDocument: return EdgeStyle::Membership;
        case EdgeKind::MentionEntity: return EdgeStyle::Link;
        case EdgeKind::Collocation: return EdgeStyle::Collocation;
        case EdgeKind::EntityDocument: return EdgeStyle::Virtual;
    }
    return EdgeStyle::Membership;
}

}  // namespace

VisibleGraph map_visuals(const FilteredGraph& filtered, ColorScheme scheme) {
    VisibleGraph out;
    out.nodes.reserve(filtered.nodes.size());
    for (const StructuralNode& n : filtered.nodes) {
        VisualNode v;
        v.key = n.key;
        v.emphasis = filtered.focus.selected == n.key || filtered.focus.focused == n.key;
        const EntityClass cls = n.entity_class.value_or(EntityClass::Misc);
        switch (n.key.kind) {
            case NodeKind::Document:
                v.radius = kDocumentRadius;
                v.fill = palette::kDocument;
                v.pictogram = Pictogram::Document;
                break;
            case NodeKind::Mention:
                v.radius = kMentionRadius;
                v.fill = scheme == ColorScheme::ByType ? palette::kMention : class_color(cls);
                v.pictogram = class_pictogram(cls);
                break;
            case NodeKind::Entity:
                v.radius = kEntityRadius;
                v.fill = scheme == ColorScheme::ByType ? palette::kEntity : class_color(cls);
                v.pictogram = class_pictogram(cls);
                break;
        }
        out.nodes.push_back(std::move(v));
    }
    out.edges.reserve(filtered.edges.size());
    for (const Edge& e : filtered.edges) {
        out.edges.push_back({e.a, e.b, e.kind, e.weight, e.confidence, style_of(e.kind)});
    }
    return out;
}

VisibleGraph build_view(const Graph& graph, const ViewState& state) {
    return map_visuals(apply_filters(project_view(graph, state.mode), state.rule, state.focus),
                       state.scheme);
}

}  // namespace entigraph
