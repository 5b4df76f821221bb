#include <doctest.h>

#include "entigraph/fixtures.hpp"
#include "entigraph/graph_store.hpp"
#include "entigraph/search_index.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace entigraph;

namespace {

const GraphStore& g0() {
    static const GraphStore store = build_from_import(fixtures::g0());
    return store;
}

std::vector<std::string> keys_of(const std::vector<SearchHit>& hits) {
    std::vector<std::string> out;
    for (const auto& h : hits) out.push_back(h.key.str());
    return out;
}

}  // namespace

TEST_CASE("tokenize") {
    CHECK(tokenize("Nikola Tesla") == std::vector<std::string>{"nikola", "tesla"});
    CHECK(tokenize("  N. Tesla-Edison ") == std::vector<std::string>{"n", "tesla", "edison"});
    CHECK(tokenize("Zürich") == std::vector<std::string>{"zürich"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("--").empty());
}

TEST_CASE("G0 index") {
    const SearchIndex idx = SearchIndex::build(g0().graph());
    CHECK(idx.size() == 9);
    const auto vocab = idx.vocabulary();
    for (const char* w : {"nikola", "tesla", "berlin", "thomas", "edison", "doc", "one", "two"}) {
        CHECK(std::find(vocab.begin(), vocab.end(), w) != vocab.end());
    }
    CHECK(SearchIndex::build(Graph{}).size() == 0);
}

TEST_CASE("query 'tesla'") {
    const auto hits = SearchIndex::build(g0().graph()).query("tesla", 10);
    REQUIRE(keys_of(hits) == std::vector<std::string>{"e:e1", "m:m1", "m:m3"});
    // boost 2 x exact 3; boost 1 x exact 3
    CHECK(hits[0].score == 6.0);
    CHECK(hits[1].score == 3.0);
    CHECK(hits[2].score == 3.0);
    CHECK(hits[0].field == SearchField::Term);
    CHECK(hits[1].field == SearchField::Surface);
    CHECK(hits[0].match == MatchKind::Exact);
}

TEST_CASE("query 'doc'") {
    const auto hits = SearchIndex::build(g0().graph()).query("doc", 10);
    REQUIRE(keys_of(hits) == std::vector<std::string>{"d:d1", "d:d2"});
    // "doc" is itself a title token, so the match is exact: 1.5 x 3
    CHECK(hits[0].score == 4.5);
    CHECK(hits[1].score == 4.5);
    CHECK(hits[0].field == SearchField::Title);

    const auto pre = SearchIndex::build(g0().graph()).query("do", 10);
    REQUIRE(keys_of(pre) == std::vector<std::string>{"d:d1", "d:d2"});
    CHECK(pre[0].score == 3.0);
    CHECK(pre[0].match == MatchKind::Prefix);
}

TEST_CASE("query 'berlim'") {
    CHECK(levenshtein("berlim", "berlin") == 1);
    CHECK(fuzzy_budget(6) == 1);
    const auto hits = SearchIndex::build(g0().graph()).query("berlim", 10);
    REQUIRE(keys_of(hits) == std::vector<std::string>{"e:e2", "m:m2"});
    CHECK(hits[0].score == 2.0);
    CHECK(hits[1].score == 1.0);
    CHECK(hits[0].match == MatchKind::Fuzzy);
}

TEST_CASE("query edge cases") {
    const SearchIndex idx = SearchIndex::build(g0().graph());
    CHECK(idx.query("", 10).empty());
    CHECK(idx.query("  ,, ", 10).empty());
    CHECK_THROWS_AS(idx.query("tesla", 0), Error);
    CHECK(idx.query("tesla", 1).size() == 1);
    CHECK(idx.query("zzzzzz", 10).empty());
    // several tokens add up: e1 gets nikola + tesla exact
    CHECK(idx.query("nikola tesla", 10)[0].score == 12.0);
    CHECK(idx.query("tesla", 10) == idx.query("tesla", 10));
}

TEST_CASE("fuzzy budget") {
    CHECK(fuzzy_budget(1) == 0);
    CHECK(fuzzy_budget(4) == 0);
    CHECK(fuzzy_budget(5) == 1);
    CHECK(fuzzy_budget(9) == 1);
    CHECK(fuzzy_budget(10) == 2);
    CHECK(fuzzy_budget(40) == 2);
}

TEST_CASE("levenshtein equals the DP table") {
    testsupport::Rng rng(17);
    const std::string alphabet = "abcde";
    for (int trial = 0; trial < 2000; ++trial) {
        std::string a, b;
        const auto la = testsupport::uniform(rng, 0, 9);
        const auto lb = testsupport::uniform(rng, 0, 9);
        for (int i = 0; i < la; ++i) a += alphabet[testsupport::uniform(rng, 0, 4)];
        for (int i = 0; i < lb; ++i) b += alphabet[testsupport::uniform(rng, 0, 4)];
        REQUIRE(levenshtein(a, b) == testsupport::reference_edit_distance(a, b));
    }
    CHECK(levenshtein("ab", "ba") == 2);
}

TEST_CASE("exact outranks fuzzy at equal boost") {
    ImportFile f;
    f.entities.push_back({"e1", "Curie", EntityClass::Person});
    f.entities.push_back({"e2", "Curle", EntityClass::Person});
    f.entities.push_back({"e3", "Curies", EntityClass::Person});
    const auto hits = SearchIndex::build(build_from_import(f).graph()).query("curie", 10);
    REQUIRE(hits.size() == 3);
    CHECK(hits[0].key.str() == "e:e1");
    CHECK(hits[0].match == MatchKind::Exact);
    CHECK(hits[1].match == MatchKind::Prefix);
    CHECK(hits[2].match == MatchKind::Fuzzy);
}

TEST_CASE("rebuild reflects SetEntityTerm") {
    GraphStore s = build_from_import(fixtures::g0());
    SearchIndex idx = SearchIndex::build(s.graph());
    const auto entry = s.apply({SetEntityTerm{"e1", "N. Tesla"}});
    idx.refresh(s.graph(), entry.touched_nodes());
    CHECK(idx == SearchIndex::build(s.graph()));
    CHECK(idx.query("nikola", 10).empty());
}

TEST_CASE("incremental refresh equals rebuild") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        testsupport::Rng rng(seed);
        GraphStore s = build_from_import(testsupport::random_corpus(rng));
        SearchIndex idx = SearchIndex::build(s.graph());
        testsupport::OpGenerator gen(seed * 7 + 1);
        for (int i = 0; i < 100; ++i) {
            const int action = static_cast<int>(testsupport::uniform(gen.rng(), 0, 9));
            JournalEntry entry;
            if (action == 0 && s.can_undo()) {
                entry = s.history().back();
                s.undo();
            } else if (action == 1 && s.can_redo()) {
                entry = s.redo_stack().back();
                s.redo();
            } else {
                entry = s.apply({gen.next(s.graph())});
            }
            idx.refresh(s.graph(), entry.touched_nodes());
            REQUIRE(idx == SearchIndex::build(s.graph()));
        }
    }
}
