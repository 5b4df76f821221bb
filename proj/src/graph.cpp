#include "entigraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace entigraph {

namespace {

const std::set<std::string> kNoIds;

const std::set<std::string>& lookup(const std::map<std::string, std::set<std::string>>& index,
                                    const std::string& key) {
    auto it = index.find(key);
    return it == index.end() ? kNoIds : it->second;
}

void unindex(std::map<std::string, std::set<std::string>>& index, const std::string& key,
             const std::string& value) {
    auto it = index.find(key);
    if (it == index.end()) return;
    it->second.erase(value);
    if (it->second.empty()) index.erase(it);
}

[[noreturn]] void fail(ErrorCode code, const std::string& subject, const std::string& what) {
    throw Error(code, subject, what + ": " + subject);
}

bool edge_less(const Edge& x, const Edge& y) {
    return std::tie(x.kind, x.a, x.b) < std::tie(y.kind, y.a, y.b);
}

}  // namespace

std::string Edge::id() const {
    std::string out(edge_kind_name(kind));
    out += ':';
    out += a.str();
    out += '|';
    out += b.str();
    return out;
}

IdPair ordered_pair(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

std::int64_t utf8_length(std::string_view text) {
    std::int64_t n = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::vector<Collocation> derive_collocations(const Document& doc,
                                             std::span<const Mention> mentions) {
    const auto& sentences = doc.sentences;
    // Sentences are sorted and disjoint, so the ones a mention touches form a
    // contiguous run [first, last).
    struct Run {
        const Mention* mention;
        std::size_t first;
        std::size_t last;
    };
    std::vector<Run> runs;
    runs.reserve(mentions.size());
    for (const Mention& m : mentions) {
        auto first = std::partition_point(sentences.begin(), sentences.end(),
                                          [&](const CharSpan& s) { return s.end <= m.span.start; });
        auto last = first;
        while (last != sentences.end() && last->start < m.span.end) ++last;
        if (first != last) {
            runs.push_back({&m, static_cast<std::size_t>(first - sentences.begin()),
                            static_cast<std::size_t>(last - sentences.begin())});
        }
    }

    std::map<IdPair, std::int64_t> weights;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        for (std::size_t j = i + 1; j < runs.size(); ++j) {
            const std::size_t lo = std::max(runs[i].first, runs[j].first);
            const std::size_t hi = std::min(runs[i].last, runs[j].last);
            if (lo < hi) {
                weights[ordered_pair(runs[i].mention->id, runs[j].mention->id)] +=
                    static_cast<std::int64_t>(hi - lo);
            }
        }
    }

    std::vector<Collocation> out;
    out.reserve(weights.size());
    for (auto& [pair, w] : weights) out.push_back({pair.first, pair.second, w});
    return out;
}

bool Graph::contains(const GlobalKey& key) const {
    switch (key.kind) {
        case NodeKind::Document: return documents_.contains(key.id);
        case NodeKind::Mention: return mentions_.contains(key.id);
        case NodeKind::Entity: return entities_.contains(key.id);
    }
    return false;
}

bool Graph::has_link(const std::string& mention, const std::string& entity) const {
    return links_.contains({mention, entity});
}

std::size_t Graph::node_count() const {
    return documents_.size() + mentions_.size() + entities_.size();
}

std::size_t Graph::edge_count() const {
    return mentions_.size() + links_.size() + collocations_.size();
}

std::vector<GlobalKey> Graph::node_keys() const {
    std::vector<GlobalKey> keys;
    keys.reserve(node_count());
    for (const auto& [id, _] : documents_) keys.push_back(GlobalKey::document(id));
    for (const auto& [id, _] : entities_) keys.push_back(GlobalKey::entity(id));
    for (const auto& [id, _] : mentions_) keys.push_back(GlobalKey::mention(id));
    return keys;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (const auto& [id, m] : mentions_) {
        out.push_back({EdgeKind::MentionDocument, GlobalKey::mention(id),
                       GlobalKey::document(m.document), 1.0, 1});
    }
    for (const auto& [pair, conf] : links_) {
        out.push_back({EdgeKind::MentionEntity, GlobalKey::mention(pair.first),
                       GlobalKey::entity(pair.second), conf, 1});
    }
    for (const auto& [pair, w] : collocations_) {
        out.push_back({EdgeKind::Collocation, GlobalKey::mention(pair.first),
                       GlobalKey::mention(pair.second), 1.0, w});
    }
    return out;
}

std::vector<Edge> Graph::incident_edges(const GlobalKey& key) const {
    std::vector<Edge> out;
    switch (key.kind) {
        case NodeKind::Document:
            for (const auto& m : mentions_of_document(key.id)) {
                out.push_back({EdgeKind::MentionDocument, GlobalKey::mention(m), key, 1.0, 1});
            }
            break;
        case NodeKind::Entity:
            for (const auto& m : mentions_of_entity(key.id)) {
                out.push_back({EdgeKind::MentionEntity, GlobalKey::mention(m), key,
                               links_.at({m, key.id}), 1});
            }
            break;
        case NodeKind::Mention: {
            auto it = mentions_.find(key.id);
            if (it == mentions_.end()) break;
            out.push_back({EdgeKind::MentionDocument, key,
                           GlobalKey::document(it->second.document), 1.0, 1});
            for (const auto& e : entities_of_mention(key.id)) {
                out.push_back({EdgeKind::MentionEntity, key, GlobalKey::entity(e),
                               links_.at({key.id, e}), 1});
            }
            for (const auto& other : collocated_with(key.id)) {
                auto pair = ordered_pair(key.id, other);
                out.push_back({EdgeKind::Collocation, GlobalKey::mention(pair.first),
                               GlobalKey::mention(pair.second), 1.0, collocations_.at(pair)});
            }
            break;
        }
    }
    std::sort(out.begin(), out.end(), edge_less);
    return out;
}

const std::set<std::string>& Graph::mentions_of_document(const std::string& doc) const {
    return lookup(doc_mentions_, doc);
}
const std::set<std::string>& Graph::mentions_of_entity(const std::string& entity) const {
    return lookup(entity_mentions_, entity);
}
const std::set<std::string>& Graph::entities_of_mention(const std::string& mention) const {
    return lookup(mention_entities_, mention);
}
const std::set<std::string>& Graph::collocated_with(const std::string& mention) const {
    return lookup(mention_collocs_, mention);
}

std::set<GlobalKey> Graph::neighbors(const GlobalKey& key, EdgeKindSet kinds) const {
    if (!contains(key)) fail(ErrorCode::UnknownKey, key.str(), "unknown node");
    std::set<GlobalKey> out;
    switch (key.kind) {
        case NodeKind::Document:
            if (kinds.contains(EdgeKind::MentionDocument)) {
                for (const auto& m : mentions_of_document(key.id)) out.insert(GlobalKey::mention(m));
            }
            break;
        case NodeKind::Entity:
            if (kinds.contains(EdgeKind::MentionEntity)) {
                for (const auto& m : mentions_of_entity(key.id)) out.insert(GlobalKey::mention(m));
            }
            break;
        case NodeKind::Mention:
            if (kinds.contains(EdgeKind::MentionDocument)) {
                out.insert(GlobalKey::document(mentions_.at(key.id).document));
            }
            if (kinds.contains(EdgeKind::MentionEntity)) {
                for (const auto& e : entities_of_mention(key.id)) out.insert(GlobalKey::entity(e));
            }
            if (kinds.contains(EdgeKind::Collocation)) {
                for (const auto& m : collocated_with(key.id)) out.insert(GlobalKey::mention(m));
            }
            break;
    }
    return out;
}

std::vector<IdPair> Graph::class_mismatches() const {
    std::vector<IdPair> out;
    for (const auto& [pair, _] : links_) {
        if (mentions_.at(pair.first).entity_class != entities_.at(pair.second).entity_class) {
            out.push_back(pair);
        }
    }
    return out;
}

std::optional<EntityClass> Graph::node_class(const GlobalKey& key) const {
    if (key.kind == NodeKind::Mention) {
        if (auto it = mentions_.find(key.id); it != mentions_.end()) return it->second.entity_class;
    } else if (key.kind == NodeKind::Entity) {
        if (auto it = entities_.find(key.id); it != entities_.end()) return it->second.entity_class;
    }
    return std::nullopt;
}

void Graph::insert_document(Document doc) {
    if (doc.id.empty()) fail(ErrorCode::InvalidOp, doc.id, "empty document id");
    if (documents_.contains(doc.id)) fail(ErrorCode::DuplicateId, doc.id, "duplicate document id");
    const std::int64_t len = doc.text ? utf8_length(*doc.text) : -1;
    std::int64_t prev_end = 0;
    for (const auto& s : doc.sentences) {
        if (s.start < prev_end || s.start >= s.end || (len >= 0 && s.end > len)) {
            fail(ErrorCode::SpanViolation, doc.id, "invalid sentence span in document");
        }
        prev_end = s.end;
    }
    std::string id = doc.id;
    documents_.emplace(std::move(id), std::move(doc));
}

void Graph::insert_mention(Mention mention) {
    if (mention.id.empty()) fail(ErrorCode::InvalidOp, mention.id, "empty mention id");
    if (mentions_.contains(mention.id)) {
        fail(ErrorCode::DuplicateId, mention.id, "duplicate mention id");
    }
    auto doc = documents_.find(mention.document);
    if (doc == documents_.end()) {
        fail(ErrorCode::DanglingReference, mention.document, "mention references missing document");
    }
    if (mention.span.start < 0 || mention.span.start >= mention.span.end ||
        (doc->second.text && mention.span.end > utf8_length(*doc->second.text))) {
        fail(ErrorCode::SpanViolation, mention.id, "invalid mention span");
    }
    doc_mentions_[mention.document].insert(mention.id);
    std::string id = mention.id;
    mentions_.emplace(std::move(id), std::move(mention));
}

void Graph::insert_entity(Entity entity) {
    if (entity.id.empty()) fail(ErrorCode::InvalidOp, entity.id, "empty entity id");
    if (entities_.contains(entity.id)) fail(ErrorCode::DuplicateId, entity.id, "duplicate entity id");
    if (entity.term.empty()) fail(ErrorCode::InvalidOp, entity.id, "empty entity term");
    std::string id = entity.id;
    entities_.emplace(std::move(id), std::move(entity));
}

void Graph::remove_document(const std::string& id) {
    if (!documents_.contains(id)) fail(ErrorCode::UnknownKey, "d:" + id, "unknown node");
    if (!mentions_of_document(id).empty()) {
        fail(ErrorCode::InvalidOp, id, "document still has mentions");
    }
    documents_.erase(id);
}

void Graph::remove_mention(const std::string& id) {
    auto it = mentions_.find(id);
    if (it == mentions_.end()) fail(ErrorCode::UnknownKey, "m:" + id, "unknown node");
    if (!entities_of_mention(id).empty() || !collocated_with(id).empty()) {
        fail(ErrorCode::InvalidOp, id, "mention still has edges");
    }
    unindex(doc_mentions_, it->second.document, id);
    mentions_.erase(it);
}

void Graph::remove_entity(const std::string& id) {
    if (!entities_.contains(id)) fail(ErrorCode::UnknownKey, "e:" + id, "unknown node");
    if (!mentions_of_entity(id).empty()) fail(ErrorCode::InvalidOp, id, "entity still has links");
    entities_.erase(id);
}

void Graph::insert_link(const Link& link) {
    if (!mentions_.contains(link.mention)) {
        fail(ErrorCode::DanglingReference, link.mention, "link references missing mention");
    }
    if (!entities_.contains(link.entity)) {
        fail(ErrorCode::DanglingReference, link.entity, "link references missing entity");
    }
    if (!(link.confidence >= 0.0 && link.confidence <= 1.0)) {
        fail(ErrorCode::InvalidOp, link.mention, "link confidence outside [0,1]");
    }
    if (!links_.emplace(IdPair{link.mention, link.entity}, link.confidence).second) {
        fail(ErrorCode::DuplicateId, link.mention + "|" + link.entity, "duplicate link");
    }
    mention_entities_[link.mention].insert(link.entity);
    entity_mentions_[link.entity].insert(link.mention);
}

void Graph::remove_link(const std::string& mention, const std::string& entity) {
    if (links_.erase({mention, entity}) == 0) {
        fail(ErrorCode::UnknownKey, mention + "|" + entity, "unknown link");
    }
    unindex(mention_entities_, mention, entity);
    unindex(entity_mentions_, entity, mention);
}

void Graph::set_link_confidence(const std::string& mention, const std::string& entity, double c) {
    auto it = links_.find({mention, entity});
    if (it == links_.end()) fail(ErrorCode::UnknownKey, mention + "|" + entity, "unknown link");
    if (!(c >= 0.0 && c <= 1.0)) fail(ErrorCode::InvalidOp, mention, "link confidence outside [0,1]");
    it->second = c;
}

void Graph::insert_collocation(Collocation colloc) {
    auto ma = mentions_.find(colloc.a);
    auto mb = mentions_.find(colloc.b);
    if (ma == mentions_.end()) {
        fail(ErrorCode::DanglingReference, colloc.a, "collocation references missing mention");
    }
    if (mb == mentions_.end()) {
        fail(ErrorCode::DanglingReference, colloc.b, "collocation references missing mention");
    }
    if (colloc.a == colloc.b) fail(ErrorCode::InvalidOp, colloc.a, "collocation is a self loop");
    if (ma->second.document != mb->second.document) {
        fail(ErrorCode::InvalidOp, colloc.a + "|" + colloc.b, "collocation spans two documents");
    }
    if (colloc.weight < 1) fail(ErrorCode::InvalidOp, colloc.a, "collocation weight must be >= 1");
    auto pair = ordered_pair(colloc.a, colloc.b);
    if (collocations_.contains(pair)) {
        fail(ErrorCode::DuplicateId, pair.first + "|" + pair.second, "duplicate collocation");
    }
    mention_collocs_[pair.first].insert(pair.second);
    mention_collocs_[pair.second].insert(pair.first);
    collocations_.emplace(std::move(pair), colloc.weight);
}

void Graph::remove_collocation(const std::string& a, const std::string& b) {
    auto pair = ordered_pair(a, b);
    if (collocations_.erase(pair) == 0) {
        fail(ErrorCode::UnknownKey, pair.first + "|" + pair.second, "unknown collocation");
    }
    unindex(mention_collocs_, pair.first, pair.second);
    unindex(mention_collocs_, pair.second, pair.first);
}

void Graph::set_entity_term(const std::string& entity, std::string term) {
    auto it = entities_.find(entity);
    if (it == entities_.end()) fail(ErrorCode::UnknownKey, "e:" + entity, "unknown node");
    if (term.empty()) fail(ErrorCode::InvalidOp, entity, "empty entity term");
    it->second.term = std::move(term);
}

void Graph::set_node_class(const GlobalKey& key, EntityClass c) {
    if (key.kind == NodeKind::Mention) {
        auto it = mentions_.find(key.id);
        if (it == mentions_.end()) fail(ErrorCode::UnknownKey, key.str(), "unknown node");
        it->second.entity_class = c;
    } else if (key.kind == NodeKind::Entity) {
        auto it = entities_.find(key.id);
        if (it == entities_.end()) fail(ErrorCode::UnknownKey, key.str(), "unknown node");
        it->second.entity_class = c;
    } else {
        fail(ErrorCode::InvalidOp, key.str(), "documents carry no entity class");
    }
}

bool Graph::operator==(const Graph& other) const {
    return documents_ == other.documents_ && mentions_ == other.mentions_ &&
           entities_ == other.entities_ && links_ == other.links_ &&
           collocations_ == other.collocations_;
}

}  // namespace entigraph
