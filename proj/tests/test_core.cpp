#include <doctest.h>

#include "entigraph/fixtures.hpp"
#include "entigraph/graph_store.hpp"
#include "entigraph/io.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace entigraph;

namespace {

GraphStore g0_store() { return build_from_import(fixtures::g0()); }

std::set<std::string> edge_ids(const Graph& g) {
    std::set<std::string> out;
    for (const auto& e : g.edges()) out.insert(e.id());
    return out;
}

std::set<std::string> key_strings(const std::vector<GlobalKey>& keys) {
    std::set<std::string> out;
    for (const auto& k : keys) out.insert(k.str());
    return out;
}

template <typename F>
ErrorCode error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

// Full scan: every stored edge endpoint exists.
bool closed(const Graph& g) {
    for (const auto& e : g.edges()) {
        if (!g.contains(e.a) || !g.contains(e.b)) return false;
    }
    for (const auto& [_, m] : g.mentions()) {
        if (!g.documents().contains(m.document)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("G0 builds into 9 nodes and 4 + 5 + 1 edges") {
    const GraphStore s = g0_store();
    const Graph& g = s.graph();
    CHECK(g.node_count() == 9);
    CHECK(s.revision() == 0);
    std::map<EdgeKind, int> by_kind;
    for (const auto& e : g.edges()) ++by_kind[e.kind];
    CHECK(by_kind[EdgeKind::MentionDocument] == 4);
    CHECK(by_kind[EdgeKind::MentionEntity] == 5);
    CHECK(by_kind[EdgeKind::Collocation] == 1);
    CHECK(by_kind[EdgeKind::EntityDocument] == 0);
    CHECK(g.edge_count() == 10);
}

TEST_CASE("empty file gives an empty store at revision 0") {
    const GraphStore s = build_from_import(ImportFile{});
    CHECK(s.graph().empty());
    CHECK(s.graph().edge_count() == 0);
    CHECK(s.revision() == 0);
}

TEST_CASE("dangling document reference names the missing id") {
    ImportFile f = fixtures::g0();
    f.mentions[0].document = "dX";
    try {
        build_from_import(f);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DanglingReference);
        CHECK(std::string(e.what()).find("dX") != std::string::npos);
    }
}

TEST_CASE("derive_collocations on G0 d1 yields only m1-m2") {
    const ImportFile f = fixtures::g0();
    std::vector<Mention> d1;
    for (const auto& m : f.mentions) {
        if (m.document == "d1") d1.push_back(m);
    }
    const auto out = derive_collocations(f.documents[0], d1);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == Collocation{"m1", "m2", 1});
}

TEST_CASE("derive_collocations small cases") {
    Document doc{"d", "t", std::nullopt, {{0, 10}, {10, 20}}};
    SUBCASE("single mention") {
        std::vector<Mention> ms{{"a", "d", {1, 3}, "x", EntityClass::Person}};
        CHECK(derive_collocations(doc, ms).empty());
    }
    SUBCASE("two mentions spanning both sentences share two") {
        std::vector<Mention> ms{{"a", "d", {5, 15}, "x", EntityClass::Person},
                                {"b", "d", {8, 12}, "y", EntityClass::Person}};
        const auto out = derive_collocations(doc, ms);
        REQUIRE(out.size() == 1);
        CHECK(out[0].weight == 2);
    }
    SUBCASE("no sentences") {
        Document bare{"d", "t", std::nullopt, {}};
        std::vector<Mention> ms{{"a", "d", {1, 3}, "x", EntityClass::Person},
                                {"b", "d", {2, 4}, "y", EntityClass::Person}};
        CHECK(derive_collocations(bare, ms).empty());
    }
}

TEST_CASE("derive_collocations equals the brute-force oracle") {
    testsupport::Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        Document doc{"d", "t", std::nullopt, testsupport::random_sentences(rng, 150)};
        std::vector<Mention> ms;
        const int n = static_cast<int>(testsupport::uniform(rng, 0, 200));
        for (int i = 0; i < n; ++i) {
            const std::int64_t start = testsupport::uniform(rng, 0, 160);
            ms.push_back({"m" + std::to_string(i), "d", {start, start + testsupport::uniform(rng, 1, 30)}, "s",
                          EntityClass::Misc});
        }
        const auto expected = testsupport::brute_collocations(doc, ms);
        const auto got = derive_collocations(doc, ms);
        std::map<std::pair<std::string, std::string>, std::int64_t> got_map;
        for (const auto& c : got) got_map[{c.a, c.b}] = c.weight;
        REQUIRE(got_map == expected);
    }
}

TEST_CASE("DeleteNode(m2) cascades to its three edges") {
    GraphStore s = g0_store();
    const auto before = edge_ids(s.graph());
    s.apply({DeleteNode{GlobalKey::mention("m2")}});
    CHECK(s.graph().node_count() == 8);
    CHECK(s.graph().edge_count() == 7);
    std::set<std::string> removed;
    const auto after = edge_ids(s.graph());
    std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                        std::inserter(removed, removed.end()));
    CHECK(removed == std::set<std::string>{"collocation:m:m1|m:m2", "mention-document:m:m2|d:d1",
                                           "mention-entity:m:m2|e:e2"});
    CHECK(s.revision() == 1);
}

TEST_CASE("SetEntityTerm changes only the term") {
    GraphStore s = g0_store();
    const auto edges = s.graph().edges();
    s.apply({SetEntityTerm{"e1", "N. Tesla"}});
    CHECK(s.graph().entities().at("e1").term == "N. Tesla");
    CHECK(s.graph().edges() == edges);
}

TEST_CASE("virtual and membership edges are not storable") {
    GraphStore s = g0_store();
    const std::string before = canonical_json(s.graph());
    CHECK(error_of([&] {
              s.apply({AddEdge{EdgeKind::EntityDocument, GlobalKey::entity("e1"), GlobalKey::document("d1")}});
          }) == ErrorCode::InvalidOp);
    CHECK(error_of([&] {
              s.apply({AddEdge{EdgeKind::MentionDocument, GlobalKey::mention("m1"), GlobalKey::document("d2")}});
          }) == ErrorCode::InvalidOp);
    CHECK(canonical_json(s.graph()) == before);
    CHECK(s.revision() == 0);
}

TEST_CASE("deleting d1 takes its mentions and their edges") {
    GraphStore s = g0_store();
    s.delete_node(GlobalKey::document("d1"));
    CHECK(key_strings(s.graph().node_keys()) == std::set<std::string>{"d:d2", "e:e1", "e:e2", "e:e3", "m:m4"});
    CHECK(edge_ids(s.graph()) == std::set<std::string>{"mention-document:m:m4|d:d2", "mention-entity:m:m4|e:e3"});
    // 10 stored edges before, 2 after.
    CHECK(10 - s.graph().edge_count() == 8);
}

TEST_CASE("deleting e2 orphans m2") {
    GraphStore s = g0_store();
    s.delete_node(GlobalKey::entity("e2"));
    REQUIRE(s.graph().mentions().contains("m2"));
    CHECK(s.graph().entities_of_mention("m2").empty());
}

TEST_CASE("deleting an unknown key fails and leaves the store unchanged") {
    GraphStore s = g0_store();
    const std::string before = canonical_json(s.graph());
    CHECK(error_of([&] { s.delete_node(GlobalKey::mention("zz")); }) == ErrorCode::UnknownKey);
    CHECK(canonical_json(s.graph()) == before);
    CHECK(s.revision() == 0);
}

TEST_CASE("merge(e1, e3) re-points links keeping the max confidence") {
    GraphStore s = g0_store();
    s.merge_entities("e1", "e3");
    const Graph& g = s.graph();
    CHECK_FALSE(g.entities().contains("e3"));
    std::map<std::string, double> to_e1;
    for (const auto& [pair, c] : g.links()) {
        if (pair.second == "e1") to_e1[pair.first] = c;
    }
    CHECK(to_e1 == std::map<std::string, double>{{"m1", 0.9}, {"m3", 0.7}, {"m4", 0.8}});
    CHECK(g.entities().at("e1").term == "Nikola Tesla");
}

TEST_CASE("merge edge cases") {
    GraphStore s = g0_store();
    s.apply({AddNode{Entity{"e4", "Lonely", EntityClass::Misc}}});
    const auto links = s.graph().links();
    s.merge_entities("e1", "e4");
    CHECK(s.graph().links() == links);
    CHECK_FALSE(s.graph().entities().contains("e4"));

    CHECK(error_of([&] { s.merge_entities("e1", "e1"); }) == ErrorCode::InvalidOp);
    CHECK(error_of([&] { s.merge_entities("e1", "nope"); }) == ErrorCode::UnknownKey);
}

TEST_CASE("merge then undo restores the canonical bytes") {
    GraphStore s = g0_store();
    const std::string before = canonical_json(s.graph());
    s.merge_entities("e1", "e3");
    s.undo();
    CHECK(canonical_json(s.graph()) == before);
    CHECK(s.revision() == 2);
}

TEST_CASE("undo and redo") {
    GraphStore s = g0_store();
    const std::string g0 = canonical_json(s.graph());
    CHECK(error_of([&] { s.undo(); }) == ErrorCode::EmptyHistory);
    CHECK(error_of([&] { s.redo(); }) == ErrorCode::EmptyHistory);

    s.delete_node(GlobalKey::mention("m2"));
    const std::string deleted = canonical_json(s.graph());
    CHECK(s.undo() == 2);
    CHECK(canonical_json(s.graph()) == g0);
    CHECK(s.redo() == 3);
    CHECK(canonical_json(s.graph()) == deleted);

    s.undo();
    s.apply({SetEntityTerm{"e1", "x"}});
    CHECK_FALSE(s.can_redo());
}

TEST_CASE("stale expected revision is rejected before anything changes") {
    GraphStore s = g0_store();
    s.apply({SetEntityTerm{"e1", "a"}}, 0);
    const std::string before = canonical_json(s.graph());
    CHECK(error_of([&] { s.apply({SetEntityTerm{"e1", "b"}}, 0); }) == ErrorCode::RevisionConflict);
    CHECK(canonical_json(s.graph()) == before);
    CHECK(s.revision() == 1);
}

TEST_CASE("a batch is atomic") {
    GraphStore s = g0_store();
    const std::string before = canonical_json(s.graph());
    CHECK(error_of([&] {
              s.apply({DeleteNode{GlobalKey::mention("m2")}, SetEntityTerm{"e1", "ok"},
                       DeleteNode{GlobalKey::mention("m2")}});
          }) == ErrorCode::UnknownKey);
    CHECK(canonical_json(s.graph()) == before);
    CHECK(s.revision() == 0);
    CHECK_FALSE(s.can_undo());
    CHECK(error_of([&] { s.apply({}); }) == ErrorCode::InvalidOp);
}

TEST_CASE("100 random ops then 100 undos restore the start; redos restore the end") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        testsupport::Rng rng(seed);
        GraphStore s = build_from_import(testsupport::random_corpus(rng));
        const std::string start = canonical_json(s.graph());
        testsupport::OpGenerator gen(seed * 7919);
        for (int i = 0; i < 100; ++i) {
            s.apply({gen.next(s.graph())});
            REQUIRE(closed(s.graph()));
        }
        const std::string end = canonical_json(s.graph());
        for (int i = 0; i < 100; ++i) s.undo();
        REQUIRE(canonical_json(s.graph()) == start);
        for (int i = 0; i < 100; ++i) s.redo();
        REQUIRE(canonical_json(s.graph()) == end);
        CHECK(s.revision() == 300);
    }
}

TEST_CASE("neighbors") {
    const GraphStore s = g0_store();
    CHECK(s.neighbors(GlobalKey::entity("e1"), {EdgeKind::MentionEntity}) ==
          std::set<GlobalKey>{GlobalKey::mention("m1"), GlobalKey::mention("m3")});
    CHECK(s.neighbors(GlobalKey::document("d2"), EdgeKindSet::of(kAllEdgeKinds)) ==
          std::set<GlobalKey>{GlobalKey::mention("m4")});
    CHECK(s.neighbors(GlobalKey::mention("m1"), EdgeKindSet{}).empty());
    CHECK(error_of([&] { (void)s.neighbors(GlobalKey::entity("zz"), {}); }) == ErrorCode::UnknownKey);
}

TEST_CASE("class mismatches") {
    GraphStore s = g0_store();
    CHECK(s.class_mismatches().empty());
    s.apply({SetNodeClass{GlobalKey::mention("m2"), EntityClass::Person}});
    CHECK(s.class_mismatches() == std::vector<IdPair>{{"m2", "e2"}});
    CHECK(build_from_import(ImportFile{}).class_mismatches().empty());
    CHECK(error_of([&] { s.apply({SetNodeClass{GlobalKey::document("d1"), EntityClass::Person}}); }) ==
          ErrorCode::InvalidOp);
}

TEST_CASE("mention fan-out to several entities is accepted") {
    GraphStore s = g0_store();
    s.apply({AddEdge{EdgeKind::MentionEntity, GlobalKey::mention("m1"), GlobalKey::entity("e2"), 0.1}});
    CHECK(s.graph().entities_of_mention("m1").size() == 3);
}

TEST_CASE("collocation edges need two mentions of one document") {
    GraphStore s = g0_store();
    CHECK(error_of([&] {
              s.apply({AddEdge{EdgeKind::Collocation, GlobalKey::mention("m1"), GlobalKey::mention("m4"), 1, 1}});
          }) == ErrorCode::InvalidOp);
    CHECK(error_of([&] {
              s.apply({AddEdge{EdgeKind::Collocation, GlobalKey::mention("m1"), GlobalKey::mention("m1"), 1, 1}});
          }) == ErrorCode::InvalidOp);
    s.apply({AddEdge{EdgeKind::Collocation, GlobalKey::mention("m3"), GlobalKey::mention("m1"), 1, 2}});
    CHECK(s.graph().collocations().at({"m1", "m3"}) == 2);
}

TEST_CASE("global keys order by their string form") {
    CHECK(GlobalKey::document("z") < GlobalKey::entity("a"));
    CHECK(GlobalKey::entity("z") < GlobalKey::mention("a"));
    CHECK(GlobalKey::parse("m:a:b") == GlobalKey::mention("a:b"));
    CHECK_FALSE(GlobalKey::parse("x:a"));
    CHECK_FALSE(GlobalKey::parse("m:"));
}

TEST_CASE("utf8_length counts code points") {
    CHECK(utf8_length("Zürich") == 6);
    CHECK(utf8_length("") == 0);
}
