#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entigraph/types.hpp"

namespace entigraph {

struct Document {
    std::string id;
    std::string title;
    std::optional<std::string> text;
    std::vector<CharSpan> sentences;  // sorted, non-overlapping

    bool operator==(const Document&) const = default;
};

struct Mention {
    std::string id;
    std::string document;
    CharSpan span;
    std::string surface;
    EntityClass entity_class = EntityClass::Misc;

    bool operator==(const Mention&) const = default;
};

struct Entity {
    std::string id;
    std::string term;
    EntityClass entity_class = EntityClass::Misc;

    bool operator==(const Entity&) const = default;
};

struct Link {
    std::string mention;
    std::string entity;
    double confidence = 1.0;

    bool operator==(const Link&) const = default;
};

/// Mention pair sharing at least one sentence. Endpoints are stored with a < b.
struct Collocation {
    std::string a;
    std::string b;
    std::int64_t weight = 1;

    bool operator==(const Collocation&) const = default;
};

/// Uniform view of a stored or derived edge.
struct Edge {
    EdgeKind kind = EdgeKind::MentionDocument;
    GlobalKey a;
    GlobalKey b;
    double confidence = 1.0;
    std::int64_t weight = 1;

    /// Stable textual id: "<kind>:<a>|<b>".
    std::string id() const;
    bool operator==(const Edge&) const = default;
};

using IdPair = std::pair<std::string, std::string>;

/// Number of Unicode code points in a UTF-8 string; character spans are
/// measured in these units.
std::int64_t utf8_length(std::string_view text);

/// Mention pairs whose spans both intersect a common sentence of `doc`,
/// weighted by the number of shared sentences. Output sorted by (a, b).
std::vector<Collocation> derive_collocations(const Document& doc,
                                             std::span<const Mention> mentions);

/// Document/mention/entity graph with adjacency indices.
///
/// Every mention carries exactly one document reference, which *is* its
/// MentionDocument edge; it cannot be added or removed independently of the
/// mention. The primitive mutators validate fully before touching state and
/// throw `Error` on violation, leaving the graph unchanged.
class Graph {
public:
    const std::map<std::string, Document>& documents() const { return documents_; }
    const std::map<std::string, Mention>& mentions() const { return mentions_; }
    const std::map<std::string, Entity>& entities() const { return entities_; }
    /// (mention, entity) -> confidence
    const std::map<IdPair, double>& links() const { return links_; }
    /// (a, b) with a < b -> weight
    const std::map<IdPair, std::int64_t>& collocations() const { return collocations_; }

    bool contains(const GlobalKey& key) const;
    bool has_link(const std::string& mention, const std::string& entity) const;
    std::size_t node_count() const;
    std::size_t edge_count() const;
    bool empty() const { return node_count() == 0; }

    /// All node keys in canonical order.
    std::vector<GlobalKey> node_keys() const;
    /// All stored edges (never EntityDocument), ordered by (kind, a, b).
    std::vector<Edge> edges() const;
    /// Stored edges touching `key`.
    std::vector<Edge> incident_edges(const GlobalKey& key) const;

    const std::set<std::string>& mentions_of_document(const std::string& doc) const;
    const std::set<std::string>& mentions_of_entity(const std::string& entity) const;
    const std::set<std::string>& entities_of_mention(const std::string& mention) const;
    const std::set<std::string>& collocated_with(const std::string& mention) const;

    std::set<GlobalKey> neighbors(const GlobalKey& key, EdgeKindSet kinds) const;
    /// (mention id, entity id) for every link whose endpoint classes differ.
    std::vector<IdPair> class_mismatches() const;

    std::optional<EntityClass> node_class(const GlobalKey& key) const;

    void insert_document(Document doc);
    void insert_mention(Mention mention);
    void insert_entity(Entity entity);
    void remove_document(const std::string& id);  // requires no mentions left
    void remove_mention(const std::string& id);   // requires no links/collocations left
    void remove_entity(const std::string& id);    // requires no links left
    void insert_link(const Link& link);
    void remove_link(const std::string& mention, const std::string& entity);
    void set_link_confidence(const std::string& mention, const std::string& entity, double c);
    void insert_collocation(Collocation colloc);
    void remove_collocation(const std::string& a, const std::string& b);
    void set_entity_term(const std::string& entity, std::string term);
    void set_node_class(const GlobalKey& key, EntityClass c);

    /// Compares stored data only; indices are derived.
    bool operator==(const Graph& other) const;

private:
    std::map<std::string, Document> documents_;
    std::map<std::string, Mention> mentions_;
    std::map<std::string, Entity> entities_;
    std::map<IdPair, double> links_;
    std::map<IdPair, std::int64_t> collocations_;

    std::map<std::string, std::set<std::string>> doc_mentions_;
    std::map<std::string, std::set<std::string>> entity_mentions_;
    std::map<std::string, std::set<std::string>> mention_entities_;
    std::map<std::string, std::set<std::string>> mention_collocs_;
};

/// Normalizes a collocation endpoint pair so that a < b.
IdPair ordered_pair(std::string a, std::string b);

}  // namespace entigraph
