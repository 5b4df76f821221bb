#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entigraph/graph.hpp"

namespace entigraph {

enum class SearchField : std::uint8_t { Term, Title, Surface };
enum class MatchKind : std::uint8_t { Fuzzy, Prefix, Exact };  // ordered weakest first

std::string_view search_field_name(SearchField f);
std::string_view match_kind_name(MatchKind m);

struct SearchHit {
    GlobalKey key;
    double score = 0.0;
    SearchField field = SearchField::Term;
    MatchKind match = MatchKind::Exact;  // strongest match over query tokens

    bool operator==(const SearchHit&) const = default;
};

/// Lowercases ASCII and splits on ASCII non-alphanumerics. Bytes >= 0x80 are
/// kept inside tokens so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

/// Plain Levenshtein distance (insert, delete, substitute; no transpositions).
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Largest edit distance a query token of `length` bytes may match fuzzily.
std::size_t fuzzy_budget(std::size_t length);

/// Inverted index over entity terms (boost 2), document titles (boost 1.5)
/// and mention surfaces (boost 1).
class SearchIndex {
public:
    static SearchIndex build(const Graph& graph);

    /// Re-indexes the given nodes from `graph`; nodes no longer present are
    /// dropped. Equivalent to a rebuild when `touched` covers every change.
    void refresh(const Graph& graph, std::span<const GlobalKey> touched);

    /// Per query token: exact x3, prefix x2, fuzzy x1, times the field boost.
    /// Sorted by descending score, then by key.
    std::vector<SearchHit> query(std::string_view text, std::size_t limit) const;

    std::size_t size() const { return docs_.size(); }
    std::vector<std::string> vocabulary() const;

    bool operator==(const SearchIndex&) const = default;

private:
    struct IndexedNode {
        SearchField field = SearchField::Term;
        std::vector<std::string> tokens;  // unique, sorted
        bool operator==(const IndexedNode&) const = default;
    };

    void add(const GlobalKey& key, SearchField field, std::string_view text);
    void remove(const GlobalKey& key);

    std::map<GlobalKey, IndexedNode> docs_;
    std::map<std::string, std::set<GlobalKey>> postings_;
};

double field_boost(SearchField f);

}  // namespace entigraph
