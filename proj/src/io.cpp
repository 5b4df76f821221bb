#include "entigraph/io.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>

#include "entigraph/json_codec.hpp"

namespace entigraph {

using nlohmann::json;

std::string_view violation_kind_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::MalformedSyntax: return "malformed-syntax";
        case ViolationKind::UnknownVersion: return "unknown-version";
        case ViolationKind::Schema: return "schema";
        case ViolationKind::DanglingReference: return "dangling-reference";
        case ViolationKind::DuplicateId: return "duplicate-id";
        case ViolationKind::SpanViolation: return "span-violation";
        case ViolationKind::OutOfRange: return "out-of-range";
    }
    return "schema";
}

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& reason) {
    throw ImportError({ViolationKind::Schema, path, reason});
}

std::string at(const std::string& path, std::string_view field) {
    return path.empty() ? std::string(field) : path + "." + std::string(field);
}

std::string at(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void expect_object(const json& j, const std::string& path,
                   std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) schema(path, "expected an object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            schema(at(path, key), "unknown field");
        }
    }
}

const json* optional_field(const json& obj, std::string_view name) {
    auto it = obj.find(name);
    return it == obj.end() ? nullptr : &*it;
}

const json& required_field(const json& obj, std::string_view name, const std::string& path) {
    const json* f = optional_field(obj, name);
    if (!f) schema(at(path, name), "missing required field");
    return *f;
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema(path, "expected a string");
    return j.get<std::string>();
}

std::string as_id(const json& j, const std::string& path) {
    std::string s = as_string(j, path);
    if (s.empty()) schema(path, "id must be non-empty");
    return s;
}

std::int64_t as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) schema(path, "expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
        schema(path, "integer out of range");
    }
    return j.get<std::int64_t>();
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) schema(path, "expected a number");
    return j.get<double>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) schema(path, "expected a boolean");
    return j.get<bool>();
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) schema(path, "expected an array");
    return j;
}

EntityClass as_class(const json& j, const std::string& path) {
    auto c = entity_class_from_tag(as_string(j, path));
    if (!c) schema(path, "class must be one of PER, ORG, LOC, MISC");
    return *c;
}

GlobalKey as_key(const json& j, const std::string& path) {
    auto k = GlobalKey::parse(as_string(j, path));
    if (!k) schema(path, "expected a node key of the form d:<id>, m:<id> or e:<id>");
    return *k;
}

Document parse_document(const json& j, const std::string& path, bool allow_kind = false) {
    if (allow_kind) {
        expect_object(j, path, {"kind", "id", "title", "text", "sentences"});
    } else {
        expect_object(j, path, {"id", "title", "text", "sentences"});
    }
    Document d;
    d.id = as_id(required_field(j, "id", path), at(path, "id"));
    d.title = as_string(required_field(j, "title", path), at(path, "title"));
    if (const json* t = optional_field(j, "text"); t && !t->is_null()) d.text = as_string(*t, at(path, "text"));
    if (const json* s = optional_field(j, "sentences")) {
        const std::string spath = at(path, "sentences");
        for (std::size_t i = 0; i < as_array(*s, spath).size(); ++i) {
            const json& pair = (*s)[i];
            const std::string p = at(spath, i);
            if (!pair.is_array() || pair.size() != 2) schema(p, "sentence must be [start, end]");
            d.sentences.push_back({as_int(pair[0], at(p, 0)), as_int(pair[1], at(p, 1))});
        }
    }
    return d;
}

Mention parse_mention(const json& j, const std::string& path, bool allow_kind = false) {
    if (allow_kind) {
        expect_object(j, path, {"kind", "id", "document", "start", "end", "surface", "class"});
    } else {
        expect_object(j, path, {"id", "document", "start", "end", "surface", "class"});
    }
    Mention m;
    m.id = as_id(required_field(j, "id", path), at(path, "id"));
    m.document = as_id(required_field(j, "document", path), at(path, "document"));
    m.span.start = as_int(required_field(j, "start", path), at(path, "start"));
    m.span.end = as_int(required_field(j, "end", path), at(path, "end"));
    m.surface = as_string(required_field(j, "surface", path), at(path, "surface"));
    m.entity_class = as_class(required_field(j, "class", path), at(path, "class"));
    return m;
}

Entity parse_entity(const json& j, const std::string& path, bool allow_kind = false) {
    if (allow_kind) {
        expect_object(j, path, {"kind", "id", "term", "class"});
    } else {
        expect_object(j, path, {"id", "term", "class"});
    }
    Entity e;
    e.id = as_id(required_field(j, "id", path), at(path, "id"));
    e.term = as_string(required_field(j, "term", path), at(path, "term"));
    e.entity_class = as_class(required_field(j, "class", path), at(path, "class"));
    return e;
}

Link parse_link(const json& j, const std::string& path) {
    expect_object(j, path, {"mention", "entity", "confidence"});
    Link l;
    l.mention = as_id(required_field(j, "mention", path), at(path, "mention"));
    l.entity = as_id(required_field(j, "entity", path), at(path, "entity"));
    if (const json* c = optional_field(j, "confidence")) l.confidence = as_number(*c, at(path, "confidence"));
    return l;
}

Collocation parse_collocation(const json& j, const std::string& path) {
    expect_object(j, path, {"a", "b", "weight"});
    Collocation c;
    c.a = as_id(required_field(j, "a", path), at(path, "a"));
    c.b = as_id(required_field(j, "b", path), at(path, "b"));
    if (const json* w = optional_field(j, "weight")) c.weight = as_int(*w, at(path, "weight"));
    return c;
}

Vec2 parse_point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) schema(path, "position must be [x, y]");
    Vec2 p{as_number(j[0], at(path, 0)), as_number(j[1], at(path, 1))};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) schema(path, "position must be finite");
    return p;
}

template <typename T, typename F>
std::vector<T> parse_list(const json& root, std::string_view name, F parse) {
    std::vector<T> out;
    const json* arr = optional_field(root, name);
    if (!arr) return out;
    const std::string path(name);
    as_array(*arr, path);
    out.reserve(arr->size());
    for (std::size_t i = 0; i < arr->size(); ++i) out.push_back(parse((*arr)[i], at(path, i)));
    return out;
}

template <typename E, std::size_t N, typename Name>
EnumSet<E> parse_enum_set(const json& j, const std::string& path, const E (&all)[N], Name name) {
    EnumSet<E> out;
    as_array(j, path);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string s = as_string(j[i], at(path, i));
        bool found = false;
        for (E v : all) {
            if (name(v) == s) {
                out.insert(v);
                found = true;
            }
        }
        if (!found) schema(at(path, i), "unknown value '" + s + "'");
    }
    return out;
}

template <typename E, std::size_t N, typename Name>
json enum_set_to_json(EnumSet<E> set, const E (&all)[N], Name name) {
    std::vector<std::string> names;
    for (E v : all) {
        if (set.contains(v)) names.emplace_back(name(v));
    }
    std::sort(names.begin(), names.end());
    return names;
}

json document_json(const Document& d) {
    json j = {{"id", d.id}, {"title", d.title}};
    if (d.text) j["text"] = *d.text;
    json s = json::array();
    for (const auto& span : d.sentences) s.push_back({span.start, span.end});
    j["sentences"] = std::move(s);
    return j;
}

json mention_json(const Mention& m) {
    return {{"id", m.id},
            {"document", m.document},
            {"start", m.span.start},
            {"end", m.span.end},
            {"surface", m.surface},
            {"class", std::string(to_tag(m.entity_class))}};
}

json entity_json(const Entity& e) {
    return {{"id", e.id}, {"term", e.term}, {"class", std::string(to_tag(e.entity_class))}};
}

std::string class_name(EntityClass c) { return std::string(to_tag(c)); }

}  // namespace

ImportFile parse_import_unchecked(std::string_view bytes) {
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ImportError({ViolationKind::MalformedSyntax, "", e.what()});
    }
    expect_object(root, "",
                  {"version", "documents", "mentions", "entities", "links", "collocations",
                   "positions", "viewState"});

    ImportFile f;
    const json& version = required_field(root, "version", "");
    if (!version.is_number_integer()) schema("version", "expected an integer");
    if (version.get<std::int64_t>() != kFormatVersion) {
        throw ImportError({ViolationKind::UnknownVersion, "version",
                           "unsupported version " + version.dump()});
    }
    f.version = kFormatVersion;
    f.documents = parse_list<Document>(root, "documents",
                                       [](const json& j, const std::string& p) { return parse_document(j, p); });
    f.mentions = parse_list<Mention>(root, "mentions",
                                     [](const json& j, const std::string& p) { return parse_mention(j, p); });
    f.entities = parse_list<Entity>(root, "entities",
                                    [](const json& j, const std::string& p) { return parse_entity(j, p); });
    f.links = parse_list<Link>(root, "links", parse_link);
    if (optional_field(root, "collocations")) {
        f.collocations = parse_list<Collocation>(root, "collocations", parse_collocation);
    }
    if (const json* pos = optional_field(root, "positions")) {
        if (!pos->is_object()) schema("positions", "expected an object");
        std::map<GlobalKey, Vec2> points;
        for (const auto& [k, v] : pos->items()) {
            const std::string path = "positions." + k;
            auto key = GlobalKey::parse(k);
            if (!key) schema(path, "expected a node key of the form d:<id>, m:<id> or e:<id>");
            points[*key] = parse_point(v, path);
        }
        f.positions = std::move(points);
    }
    if (const json* vs = optional_field(root, "viewState")) {
        f.view_state = codec::view_state_from_json(*vs, "viewState");
    }
    return f;
}

std::vector<Violation> validate(const ImportFile& f) {
    std::vector<Violation> out;
    auto add = [&](ViolationKind k, std::string path, std::string reason) {
        out.push_back({k, std::move(path), std::move(reason)});
    };

    if (f.version != kFormatVersion) {
        add(ViolationKind::UnknownVersion, "version", "unsupported version " + std::to_string(f.version));
    }

    std::map<std::string, const Document*> docs;
    for (std::size_t i = 0; i < f.documents.size(); ++i) {
        const Document& d = f.documents[i];
        const std::string path = at("documents", i);
        if (d.id.empty()) add(ViolationKind::Schema, at(path, "id"), "id must be non-empty");
        if (!docs.emplace(d.id, &d).second) {
            add(ViolationKind::DuplicateId, at(path, "id"), "duplicate document id '" + d.id + "'");
        }
        const std::int64_t len = d.text ? utf8_length(*d.text) : -1;
        std::int64_t prev_end = 0;
        for (std::size_t k = 0; k < d.sentences.size(); ++k) {
            const CharSpan& s = d.sentences[k];
            const std::string sp = at(at(path, "sentences"), k);
            if (s.start >= s.end) {
                add(ViolationKind::SpanViolation, sp, "sentence start >= end in document '" + d.id + "'");
            } else if (s.start < prev_end) {
                add(ViolationKind::SpanViolation, sp,
                    "sentences overlap or are unsorted in document '" + d.id + "'");
            } else if (len >= 0 && s.end > len) {
                add(ViolationKind::SpanViolation, sp, "sentence exceeds text of document '" + d.id + "'");
            }
            prev_end = std::max(prev_end, s.end);
        }
    }

    std::map<std::string, const Mention*> mentions;
    for (std::size_t i = 0; i < f.mentions.size(); ++i) {
        const Mention& m = f.mentions[i];
        const std::string path = at("mentions", i);
        if (m.id.empty()) add(ViolationKind::Schema, at(path, "id"), "id must be non-empty");
        if (!mentions.emplace(m.id, &m).second) {
            add(ViolationKind::DuplicateId, at(path, "id"), "duplicate mention id '" + m.id + "'");
        }
        auto doc = docs.find(m.document);
        if (doc == docs.end()) {
            add(ViolationKind::DanglingReference, at(path, "document"),
                "mention '" + m.id + "' references missing document '" + m.document + "'");
        }
        if (m.span.start >= m.span.end) {
            add(ViolationKind::SpanViolation, path, "mention '" + m.id + "' has start >= end");
        } else if (m.span.start < 0) {
            add(ViolationKind::SpanViolation, at(path, "start"), "mention '" + m.id + "' starts before 0");
        } else if (doc != docs.end() && doc->second->text &&
                   m.span.end > utf8_length(*doc->second->text)) {
            add(ViolationKind::SpanViolation, at(path, "end"),
                "mention '" + m.id + "' exceeds the text of document '" + m.document + "'");
        }
    }

    std::set<std::string> entities;
    for (std::size_t i = 0; i < f.entities.size(); ++i) {
        const Entity& e = f.entities[i];
        const std::string path = at("entities", i);
        if (e.id.empty()) add(ViolationKind::Schema, at(path, "id"), "id must be non-empty");
        if (!entities.insert(e.id).second) {
            add(ViolationKind::DuplicateId, at(path, "id"), "duplicate entity id '" + e.id + "'");
        }
        if (e.term.empty()) add(ViolationKind::Schema, at(path, "term"), "entity '" + e.id + "' has an empty term");
    }

    std::set<IdPair> links;
    for (std::size_t i = 0; i < f.links.size(); ++i) {
        const Link& l = f.links[i];
        const std::string path = at("links", i);
        if (!mentions.contains(l.mention)) {
            add(ViolationKind::DanglingReference, at(path, "mention"), "missing mention '" + l.mention + "'");
        }
        if (!entities.contains(l.entity)) {
            add(ViolationKind::DanglingReference, at(path, "entity"), "missing entity '" + l.entity + "'");
        }
        if (!(l.confidence >= 0.0 && l.confidence <= 1.0)) {
            add(ViolationKind::OutOfRange, at(path, "confidence"), "confidence must lie in [0, 1]");
        }
        if (!links.insert({l.mention, l.entity}).second) {
            add(ViolationKind::DuplicateId, path, "duplicate link '" + l.mention + "' -> '" + l.entity + "'");
        }
    }

    if (f.collocations) {
        std::set<IdPair> seen;
        for (std::size_t i = 0; i < f.collocations->size(); ++i) {
            const Collocation& c = (*f.collocations)[i];
            const std::string path = at("collocations", i);
            auto ma = mentions.find(c.a);
            auto mb = mentions.find(c.b);
            if (ma == mentions.end()) {
                add(ViolationKind::DanglingReference, at(path, "a"), "missing mention '" + c.a + "'");
            }
            if (mb == mentions.end()) {
                add(ViolationKind::DanglingReference, at(path, "b"), "missing mention '" + c.b + "'");
            }
            if (c.a == c.b) {
                add(ViolationKind::Schema, path, "collocation of '" + c.a + "' with itself");
            } else if (ma != mentions.end() && mb != mentions.end() &&
                       ma->second->document != mb->second->document) {
                add(ViolationKind::Schema, path, "collocation spans two documents");
            }
            if (c.weight < 1) add(ViolationKind::OutOfRange, at(path, "weight"), "weight must be >= 1");
            if (!seen.insert(ordered_pair(c.a, c.b)).second) {
                add(ViolationKind::DuplicateId, path, "duplicate collocation '" + c.a + "' - '" + c.b + "'");
            }
        }
    }

    if (f.positions) {
        for (const auto& [key, _] : *f.positions) {
            const bool known = key.kind == NodeKind::Document ? docs.contains(key.id)
                               : key.kind == NodeKind::Mention ? mentions.contains(key.id)
                                                               : entities.contains(key.id);
            if (!known) {
                add(ViolationKind::DanglingReference, "positions." + key.str(), "unknown node " + key.str());
            }
        }
    }
    return out;
}

ImportFile parse_import(std::string_view bytes) {
    ImportFile f = parse_import_unchecked(bytes);
    auto violations = validate(f);
    if (!violations.empty()) throw ImportError(std::move(violations.front()));
    return f;
}

std::string serialize(const ImportFile& file) { return codec::to_json(file).dump() + "\n"; }

ExportFile to_export_file(const Graph& graph, const std::optional<ViewState>& view_state,
                          const std::optional<std::map<GlobalKey, Vec2>>& positions) {
    ExportFile f;
    for (const auto& [_, d] : graph.documents()) f.documents.push_back(d);
    for (const auto& [_, m] : graph.mentions()) f.mentions.push_back(m);
    for (const auto& [_, e] : graph.entities()) f.entities.push_back(e);
    for (const auto& [pair, c] : graph.links()) f.links.push_back({pair.first, pair.second, c});
    f.collocations.emplace();
    for (const auto& [pair, w] : graph.collocations()) f.collocations->push_back({pair.first, pair.second, w});
    f.positions = positions;
    f.view_state = view_state;
    return f;
}

std::string export_graph(const Graph& graph, const std::optional<ViewState>& view_state,
                         const std::optional<std::map<GlobalKey, Vec2>>& positions) {
    return serialize(to_export_file(graph, view_state, positions));
}

namespace codec {

json to_json(const ImportFile& file) {
    auto sorted = [](auto items, auto key) {
        std::sort(items.begin(), items.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
        return items;
    };
    json j;
    j["version"] = file.version;
    json docs = json::array();
    for (const auto& d : sorted(file.documents, [](const Document& d) { return d.id; })) {
        docs.push_back(document_json(d));
    }
    j["documents"] = std::move(docs);
    json mentions = json::array();
    for (const auto& m : sorted(file.mentions, [](const Mention& m) { return m.id; })) {
        mentions.push_back(mention_json(m));
    }
    j["mentions"] = std::move(mentions);
    json entities = json::array();
    for (const auto& e : sorted(file.entities, [](const Entity& e) { return e.id; })) {
        entities.push_back(entity_json(e));
    }
    j["entities"] = std::move(entities);
    json links = json::array();
    for (const auto& l : sorted(file.links, [](const Link& l) { return IdPair{l.mention, l.entity}; })) {
        links.push_back({{"mention", l.mention}, {"entity", l.entity}, {"confidence", l.confidence}});
    }
    j["links"] = std::move(links);
    if (file.collocations) {
        json collocs = json::array();
        std::vector<Collocation> normalized;
        for (const auto& c : *file.collocations) {
            auto p = ordered_pair(c.a, c.b);
            normalized.push_back({p.first, p.second, c.weight});
        }
        for (const auto& c : sorted(normalized, [](const Collocation& c) { return IdPair{c.a, c.b}; })) {
            collocs.push_back({{"a", c.a}, {"b", c.b}, {"weight", c.weight}});
        }
        j["collocations"] = std::move(collocs);
    }
    if (file.positions) j["positions"] = to_json(*file.positions);
    if (file.view_state) j["viewState"] = to_json(*file.view_state);
    return j;
}

json to_json(const std::map<GlobalKey, Vec2>& positions) {
    json j = json::object();
    for (const auto& [k, p] : positions) j[k.str()] = {p.x, p.y};
    return j;
}

json to_json(const RuleFilter& rule) {
    return {{"nodeKinds", enum_set_to_json(rule.node_kinds, kAllNodeKinds,
                                           [](NodeKind k) { return std::string(kind_name(k)); })},
            {"entityClasses", enum_set_to_json(rule.entity_classes, kAllEntityClasses, class_name)},
            {"edgeKinds", enum_set_to_json(rule.edge_kinds, kAllEdgeKinds,
                                           [](EdgeKind k) { return std::string(edge_kind_name(k)); })}};
}

json to_json(const FocusState& focus) {
    json j = json::object();
    if (focus.selected) j["selected"] = focus.selected->str();
    if (focus.focused) j["focused"] = focus.focused->str();
    return j;
}

json to_json(const ViewState& state) {
    return {{"mode", std::string(view_mode_name(state.mode))},
            {"ruleFilter", to_json(state.rule)},
            {"focusState", to_json(state.focus)},
            {"colorScheme", std::string(color_scheme_name(state.scheme))}};
}

RuleFilter rule_filter_from_json(const json& j, const std::string& path) {
    expect_object(j, path, {"nodeKinds", "entityClasses", "edgeKinds"});
    RuleFilter rule;
    if (const json* v = optional_field(j, "nodeKinds")) {
        rule.node_kinds = parse_enum_set(*v, at(path, "nodeKinds"), kAllNodeKinds,
                                         [](NodeKind k) { return std::string(kind_name(k)); });
    }
    if (const json* v = optional_field(j, "entityClasses")) {
        rule.entity_classes = parse_enum_set(*v, at(path, "entityClasses"), kAllEntityClasses, class_name);
    }
    if (const json* v = optional_field(j, "edgeKinds")) {
        rule.edge_kinds = parse_enum_set(*v, at(path, "edgeKinds"), kAllEdgeKinds,
                                         [](EdgeKind k) { return std::string(edge_kind_name(k)); });
    }
    return rule;
}

FocusState focus_state_from_json(const json& j, const std::string& path) {
    expect_object(j, path, {"selected", "focused"});
    FocusState focus;
    if (const json* v = optional_field(j, "selected"); v && !v->is_null()) {
        focus.selected = as_key(*v, at(path, "selected"));
    }
    if (const json* v = optional_field(j, "focused"); v && !v->is_null()) {
        focus.focused = as_key(*v, at(path, "focused"));
    }
    return focus;
}

ViewState view_state_from_json(const json& j, const std::string& path) {
    expect_object(j, path, {"mode", "ruleFilter", "focusState", "colorScheme"});
    ViewState vs;
    if (const json* v = optional_field(j, "mode")) {
        auto m = view_mode_from_name(as_string(*v, at(path, "mode")));
        if (!m) schema(at(path, "mode"), "mode must be 'dme' or 'de'");
        vs.mode = *m;
    }
    if (const json* v = optional_field(j, "ruleFilter")) vs.rule = rule_filter_from_json(*v, at(path, "ruleFilter"));
    if (const json* v = optional_field(j, "focusState")) vs.focus = focus_state_from_json(*v, at(path, "focusState"));
    if (const json* v = optional_field(j, "colorScheme")) {
        auto s = color_scheme_from_name(as_string(*v, at(path, "colorScheme")));
        if (!s) schema(at(path, "colorScheme"), "colorScheme must be 'byType' or 'byClass'");
        vs.scheme = *s;
    }
    return vs;
}

json to_json(const LayoutParams& p) {
    return {{"repulsion", p.repulsion},
            {"gravity", p.gravity},
            {"theta", p.theta},
            {"jitterTolerance", p.jitter_tolerance},
            {"edgeWeightInfluence", p.edge_weight_influence},
            {"linLog", p.lin_log},
            {"strongGravity", p.strong_gravity},
            {"nodeSpeed", p.node_speed},
            {"maxNodeSpeed", p.max_node_speed},
            {"seed", p.seed}};
}

LayoutParams layout_params_from_json(const json& j, const std::string& path) {
    expect_object(j, path,
                  {"repulsion", "gravity", "theta", "jitterTolerance", "edgeWeightInfluence", "linLog",
                   "strongGravity", "nodeSpeed", "maxNodeSpeed", "seed"});
    LayoutParams p;
    auto num = [&](const char* name, double& out) {
        if (const json* v = optional_field(j, name)) out = as_number(*v, at(path, name));
    };
    num("repulsion", p.repulsion);
    num("gravity", p.gravity);
    num("theta", p.theta);
    num("jitterTolerance", p.jitter_tolerance);
    num("edgeWeightInfluence", p.edge_weight_influence);
    num("nodeSpeed", p.node_speed);
    num("maxNodeSpeed", p.max_node_speed);
    if (const json* v = optional_field(j, "linLog")) p.lin_log = as_bool(*v, at(path, "linLog"));
    if (const json* v = optional_field(j, "strongGravity")) p.strong_gravity = as_bool(*v, at(path, "strongGravity"));
    if (const json* v = optional_field(j, "seed")) {
        if (!v->is_number_unsigned()) schema(at(path, "seed"), "expected a non-negative integer");
        p.seed = v->get<std::uint64_t>();
    }
    return p;
}

json to_json(const MutationOp& op) {
    auto edge = [](std::string_view name, EdgeKind kind, const GlobalKey& a, const GlobalKey& b) {
        return json{{"op", std::string(name)},
                    {"kind", std::string(edge_kind_name(kind))},
                    {"a", a.str()},
                    {"b", b.str()}};
    };
    if (const auto* add = std::get_if<AddNode>(&op)) {
        json node;
        if (const auto* d = std::get_if<Document>(&add->node)) {
            node = document_json(*d);
            node["kind"] = "document";
        } else if (const auto* m = std::get_if<Mention>(&add->node)) {
            node = mention_json(*m);
            node["kind"] = "mention";
        } else {
            node = entity_json(std::get<Entity>(add->node));
            node["kind"] = "entity";
        }
        return {{"op", "addNode"}, {"node", std::move(node)}};
    }
    if (const auto* del = std::get_if<DeleteNode>(&op)) return {{"op", "deleteNode"}, {"key", del->key.str()}};
    if (const auto* add = std::get_if<AddEdge>(&op)) {
        json j = edge("addEdge", add->kind, add->a, add->b);
        if (add->kind == EdgeKind::Collocation) {
            j["weight"] = add->weight;
        } else {
            j["confidence"] = add->confidence;
        }
        return j;
    }
    if (const auto* del = std::get_if<DeleteEdge>(&op)) return edge("deleteEdge", del->kind, del->a, del->b);
    if (const auto* set = std::get_if<SetEntityTerm>(&op)) {
        return {{"op", "setEntityTerm"}, {"entity", set->entity}, {"term", set->term}};
    }
    if (const auto* set = std::get_if<SetNodeClass>(&op)) {
        return {{"op", "setNodeClass"}, {"key", set->key.str()}, {"class", class_name(set->entity_class)}};
    }
    const auto& merge = std::get<MergeEntities>(op);
    return {{"op", "mergeEntities"}, {"keep", merge.keep}, {"absorb", merge.absorb}};
}

namespace {

MutationOp op_from_json_unchecked(const json& j) {
    if (!j.is_object()) schema("op", "expected an object");
    const std::string name = as_string(required_field(j, "op", ""), "op");
    auto edge_kind = [&]() {
        auto k = edge_kind_from_name(as_string(required_field(j, "kind", ""), "kind"));
        if (!k) schema("kind", "unknown edge kind");
        return *k;
    };
    if (name == "addNode") {
        expect_object(j, "", {"op", "node"});
        const json& node = required_field(j, "node", "");
        if (!node.is_object()) schema("node", "expected an object");
        const std::string kind = as_string(required_field(node, "kind", "node"), "node.kind");
        if (kind == "document") return AddNode{parse_document(node, "node", true)};
        if (kind == "mention") return AddNode{parse_mention(node, "node", true)};
        if (kind == "entity") return AddNode{parse_entity(node, "node", true)};
        schema("node.kind", "unknown node kind '" + kind + "'");
    }
    if (name == "deleteNode") {
        expect_object(j, "", {"op", "key"});
        return DeleteNode{as_key(required_field(j, "key", ""), "key")};
    }
    if (name == "addEdge") {
        expect_object(j, "", {"op", "kind", "a", "b", "confidence", "weight"});
        AddEdge add;
        add.kind = edge_kind();
        add.a = as_key(required_field(j, "a", ""), "a");
        add.b = as_key(required_field(j, "b", ""), "b");
        if (const json* c = optional_field(j, "confidence")) add.confidence = as_number(*c, "confidence");
        if (const json* w = optional_field(j, "weight")) add.weight = as_int(*w, "weight");
        return add;
    }
    if (name == "deleteEdge") {
        expect_object(j, "", {"op", "kind", "a", "b"});
        DeleteEdge del;
        del.kind = edge_kind();
        del.a = as_key(required_field(j, "a", ""), "a");
        del.b = as_key(required_field(j, "b", ""), "b");
        return del;
    }
    if (name == "setEntityTerm") {
        expect_object(j, "", {"op", "entity", "term"});
        return SetEntityTerm{as_id(required_field(j, "entity", ""), "entity"),
                             as_string(required_field(j, "term", ""), "term")};
    }
    if (name == "setNodeClass") {
        expect_object(j, "", {"op", "key", "class"});
        return SetNodeClass{as_key(required_field(j, "key", ""), "key"),
                            as_class(required_field(j, "class", ""), "class")};
    }
    if (name == "mergeEntities") {
        expect_object(j, "", {"op", "keep", "absorb"});
        return MergeEntities{as_id(required_field(j, "keep", ""), "keep"),
                             as_id(required_field(j, "absorb", ""), "absorb")};
    }
    schema("op", "unknown op '" + name + "'");
}

}  // namespace

MutationOp op_from_json(const json& j) {
    try {
        return op_from_json_unchecked(j);
    } catch (const ImportError& e) {
        throw Error(ErrorCode::InvalidOp, e.violation().path, std::string("invalid op: ") + e.what());
    }
}

std::vector<MutationOp> ops_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::InvalidOp, "ops", "invalid op: ops must be an array");
    std::vector<MutationOp> ops;
    ops.reserve(j.size());
    for (const auto& item : j) ops.push_back(op_from_json(item));
    return ops;
}

json to_json(const SearchHit& hit) {
    return {{"key", hit.key.str()},
            {"score", hit.score},
            {"matchedField", std::string(search_field_name(hit.field))},
            {"matchKind", std::string(match_kind_name(hit.match))}};
}

json to_json(const VisibleGraph& view) {
    json nodes = json::array();
    for (const auto& n : view.nodes) {
        nodes.push_back({{"key", n.key.str()},
                         {"kind", std::string(kind_name(n.key.kind))},
                         {"radius", n.radius},
                         {"color", n.fill.hex()},
                         {"pictogram", std::string(pictogram_name(n.pictogram))},
                         {"emphasis", n.emphasis}});
    }
    json edges = json::array();
    for (const auto& e : view.edges) {
        edges.push_back({{"id", e.id()},
                         {"kind", std::string(edge_kind_name(e.kind))},
                         {"a", e.a.str()},
                         {"b", e.b.str()},
                         {"weight", e.weight},
                         {"confidence", e.confidence},
                         {"style", std::string(edge_style_name(e.style))}});
    }
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace codec

}  // namespace entigraph
