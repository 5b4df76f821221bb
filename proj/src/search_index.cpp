#include "entigraph/search_index.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace entigraph {

namespace {

constexpr std::size_t kMaxFuzzyDistance = 2;

double kind_multiplier(MatchKind m) {
    switch (m) {
        case MatchKind::Exact: return 3.0;
        case MatchKind::Prefix: return 2.0;
        case MatchKind::Fuzzy: return 1.0;
    }
    return 1.0;
}

bool is_token_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

}  // namespace

std::string_view search_field_name(SearchField f) {
    switch (f) {
        case SearchField::Term: return "term";
        case SearchField::Title: return "title";
        case SearchField::Surface: return "surface";
    }
    return "term";
}

std::string_view match_kind_name(MatchKind m) {
    switch (m) {
        case MatchKind::Exact: return "exact";
        case MatchKind::Prefix: return "prefix";
        case MatchKind::Fuzzy: return "fuzzy";
    }
    return "fuzzy";
}

double field_boost(SearchField f) {
    switch (f) {
        case SearchField::Term: return 2.0;
        case SearchField::Title: return 1.5;
        case SearchField::Surface: return 1.0;
    }
    return 1.0;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (is_token_byte(c)) {
            cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::size_t fuzzy_budget(std::size_t length) {
    return std::min(kMaxFuzzyDistance, length / 5);  // floor(0.2 * length)
}

SearchIndex SearchIndex::build(const Graph& graph) {
    SearchIndex index;
    for (const auto& [id, e] : graph.entities()) {
        index.add(GlobalKey::entity(id), SearchField::Term, e.term);
    }
    for (const auto& [id, d] : graph.documents()) {
        index.add(GlobalKey::document(id), SearchField::Title, d.title);
    }
    for (const auto& [id, m] : graph.mentions()) {
        index.add(GlobalKey::mention(id), SearchField::Surface, m.surface);
    }
    return index;
}

void SearchIndex::add(const GlobalKey& key, SearchField field, std::string_view text) {
    IndexedNode node{field, tokenize(text)};
    std::sort(node.tokens.begin(), node.tokens.end());
    node.tokens.erase(std::unique(node.tokens.begin(), node.tokens.end()), node.tokens.end());
    for (const auto& t : node.tokens) postings_[t].insert(key);
    docs_[key] = std::move(node);
}

void SearchIndex::remove(const GlobalKey& key) {
    auto it = docs_.find(key);
    if (it == docs_.end()) return;
    for (const auto& t : it->second.tokens) {
        auto p = postings_.find(t);
        p->second.erase(key);
        if (p->second.empty()) postings_.erase(p);
    }
    docs_.erase(it);
}

void SearchIndex::refresh(const Graph& graph, std::span<const GlobalKey> touched) {
    for (const GlobalKey& key : touched) {
        remove(key);
        switch (key.kind) {
            case NodeKind::Entity:
                if (auto it = graph.entities().find(key.id); it != graph.entities().end()) {
                    add(key, SearchField::Term, it->second.term);
                }
                break;
            case NodeKind::Document:
                if (auto it = graph.documents().find(key.id); it != graph.documents().end()) {
                    add(key, SearchField::Title, it->second.title);
                }
                break;
            case NodeKind::Mention:
                if (auto it = graph.mentions().find(key.id); it != graph.mentions().end()) {
                    add(key, SearchField::Surface, it->second.surface);
                }
                break;
        }
    }
}

std::vector<std::string> SearchIndex::vocabulary() const {
    std::vector<std::string> out;
    out.reserve(postings_.size());
    for (const auto& [t, _] : postings_) out.push_back(t);
    return out;
}

std::vector<SearchHit> SearchIndex::query(std::string_view text, std::size_t limit) const {
    if (limit == 0) throw Error(ErrorCode::InvalidArgument, "limit", "limit must be >= 1");

    std::map<GlobalKey, SearchHit> hits;
    for (const std::string& q : tokenize(text)) {
        // Best match kind per node for this query token.
        std::map<GlobalKey, MatchKind> best;
        auto offer = [&](const std::set<GlobalKey>& keys, MatchKind kind) {
            for (const auto& k : keys) {
                auto [it, inserted] = best.emplace(k, kind);
                if (!inserted && it->second < kind) it->second = kind;
            }
        };

        for (auto it = postings_.lower_bound(q);
             it != postings_.end() && it->first.compare(0, q.size(), q) == 0; ++it) {
            offer(it->second, it->first.size() == q.size() ? MatchKind::Exact : MatchKind::Prefix);
        }
        if (const std::size_t budget = fuzzy_budget(q.size()); budget > 0) {
            for (const auto& [token, keys] : postings_) {
                const std::size_t diff = token.size() > q.size() ? token.size() - q.size()
                                                                  : q.size() - token.size();
                if (diff > budget || token.starts_with(q)) continue;
                if (levenshtein(q, token) <= budget) offer(keys, MatchKind::Fuzzy);
            }
        }

        for (const auto& [key, kind] : best) {
            const SearchField field = docs_.at(key).field;
            auto [it, inserted] = hits.emplace(key, SearchHit{key, 0.0, field, kind});
            it->second.score += field_boost(field) * kind_multiplier(kind);
            if (!inserted && it->second.match < kind) it->second.match = kind;
        }
    }

    std::vector<SearchHit> out;
    out.reserve(hits.size());
    for (auto& [_, h] : hits) out.push_back(std::move(h));
    std::stable_sort(out.begin(), out.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.key < b.key;
    });
    if (out.size() > limit) out.resize(limit);
    return out;
}

}  // namespace entigraph
