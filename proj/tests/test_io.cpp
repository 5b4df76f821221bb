#include <doctest.h>

#include "entigraph/fixtures.hpp"
#include "entigraph/graph_store.hpp"
#include "entigraph/io.hpp"
#include "entigraph/json_codec.hpp"
#include "support/generators.hpp"

using namespace entigraph;

namespace {

std::string with(std::string_view base, const std::string& from, const std::string& to) {
    std::string s(base);
    const auto at = s.find(from);
    REQUIRE(at != std::string::npos);
    s.replace(at, from.size(), to);
    return s;
}

Violation import_failure(std::string_view bytes) {
    try {
        parse_import(bytes);
    } catch (const ImportError& e) {
        return e.violation();
    }
    FAIL("import unexpectedly succeeded");
    return {};
}

bool has(const std::vector<Violation>& vs, ViolationKind kind, const std::string& path) {
    for (const auto& v : vs) {
        if (v.kind == kind && v.path == path) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("G0 parses and builds 9 nodes") {
    const ImportFile f = fixtures::g0();
    CHECK(validate(f).empty());
    const GraphStore s = build_from_import(f);
    CHECK(s.graph().node_count() == 9);
    CHECK(s.revision() == 0);
    CHECK(serialize(parse_import(serialize(f))) == serialize(f));
}

TEST_CASE("parse errors carry kind and path") {
    SUBCASE("confidence out of range") {
        const Violation v = import_failure(with(fixtures::kG0Json, "\"confidence\": 0.7", "\"confidence\": 1.5"));
        CHECK(v.kind == ViolationKind::OutOfRange);
        CHECK(v.path == "links[1].confidence");
    }
    SUBCASE("unknown version") {
        const Violation v = import_failure(with(fixtures::kG0Json, "\"version\": 1", "\"version\": 2"));
        CHECK(v.kind == ViolationKind::UnknownVersion);
    }
    SUBCASE("malformed syntax") {
        CHECK(import_failure("{\"version\": 1,").kind == ViolationKind::MalformedSyntax);
        CHECK(import_failure("").kind == ViolationKind::MalformedSyntax);
    }
    SUBCASE("schema") {
        CHECK(import_failure("[]").kind == ViolationKind::Schema);
        CHECK(import_failure("{\"documents\": []}").kind == ViolationKind::Schema);
        const Violation extra = import_failure(with(fixtures::kG0Json, "\"term\": \"Berlin\"", "\"term\": \"Berlin\", \"x\": 1"));
        CHECK(extra.kind == ViolationKind::Schema);
        CHECK(extra.path == "entities[1].x");
        const Violation cls = import_failure(with(fixtures::kG0Json, "\"class\": \"LOC\"}", "\"class\": \"CITY\"}"));
        CHECK(cls.kind == ViolationKind::Schema);
        CHECK(cls.path == "mentions[1].class");
    }
    SUBCASE("dangling reference") {
        const Violation v = import_failure(with(fixtures::kG0Json, "\"entity\": \"e3\", \"confidence\": 0.2", "\"entity\": \"e9\", \"confidence\": 0.2"));
        CHECK(v.kind == ViolationKind::DanglingReference);
        CHECK(v.path == "links[4].entity");
    }
}

TEST_CASE("validate collects every violation") {
    ImportFile f = fixtures::g0();
    CHECK(validate(f).empty());
    f.mentions[0].span = {50, 10};
    f.entities.push_back({"e1", "dup", EntityClass::Misc});
    f.links[2].confidence = -0.1;
    const auto vs = validate(f);
    CHECK(vs.size() == 3);
    CHECK(has(vs, ViolationKind::SpanViolation, "mentions[0]"));
    CHECK(has(vs, ViolationKind::DuplicateId, "entities[3].id"));
    CHECK(has(vs, ViolationKind::OutOfRange, "links[2].confidence"));
}

TEST_CASE("span checks against text and sentences") {
    ImportFile f;
    f.documents.push_back({"d1", "t", "abc", {{0, 2}, {1, 3}}});
    f.mentions.push_back({"m1", "d1", {1, 9}, "x", EntityClass::Misc});
    const auto vs = validate(f);
    CHECK(has(vs, ViolationKind::SpanViolation, "documents[0].sentences[1]"));
    CHECK(has(vs, ViolationKind::SpanViolation, "mentions[0].end"));
}

TEST_CASE("collocation checks") {
    ImportFile f = fixtures::g0();
    f.collocations = std::vector<Collocation>{{"m1", "m1", 1}, {"m1", "m4", 1}, {"m1", "m2", 0}, {"m1", "zz", 1}};
    const auto vs = validate(f);
    CHECK(vs.size() == 4);
    for (const auto& v : vs) CHECK(v.path.starts_with("collocations["));
}

TEST_CASE("positions must name existing nodes") {
    ImportFile f = fixtures::g0();
    f.positions = std::map<GlobalKey, Vec2>{{GlobalKey::mention("m1"), {1.0, 2.0}}, {GlobalKey::entity("zz"), {0.0, 0.0}}};
    const auto vs = validate(f);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].kind == ViolationKind::DanglingReference);
}

TEST_CASE("export round trip") {
    const GraphStore s = build_from_import(fixtures::g0());
    const std::string once = export_graph(s.graph());
    CHECK(once == export_graph(s.graph()));
    CHECK(once.back() == '\n');
    CHECK(once.find("\n") == once.size() - 1);
    CHECK(once.find(": ") == std::string::npos);

    const ImportFile back = parse_import(once);
    REQUIRE(back.collocations.has_value());
    CHECK(back.collocations->size() == 1);
    const GraphStore again = build_from_import(back);
    CHECK(again.graph() == s.graph());
    CHECK(export_graph(again.graph()) == once);
}

TEST_CASE("export carries positions and view state") {
    const GraphStore s = build_from_import(fixtures::g0());
    ViewState vs;
    vs.mode = ViewMode::DE;
    vs.focus.focused = GlobalKey::entity("e1");
    std::map<GlobalKey, Vec2> pos{{GlobalKey::document("d1"), {0.5, -1.25}}};
    const std::string bytes = export_graph(s.graph(), vs, pos);
    const ImportFile back = parse_import(bytes);
    CHECK(back.view_state == vs);
    CHECK(back.positions == pos);
    CHECK(serialize(back) == bytes);
}

TEST_CASE("export after deleting m2") {
    GraphStore s = build_from_import(fixtures::g0());
    const std::string before = export_graph(s.graph());
    s.delete_node(GlobalKey::mention("m2"));
    const ImportFile f = parse_import(export_graph(s.graph()));
    CHECK(f.mentions.size() == 3);
    for (const auto& m : f.mentions) CHECK(m.id != "m2");
    for (const auto& l : f.links) CHECK(l.mention != "m2");
    CHECK(f.links.size() == 4);
    REQUIRE(f.collocations.has_value());
    CHECK(f.collocations->empty());
    CHECK(before.find("\"m2\"") != std::string::npos);
}

TEST_CASE("export is canonical regardless of input order") {
    ImportFile f = fixtures::g0();
    ImportFile shuffled = f;
    std::reverse(shuffled.documents.begin(), shuffled.documents.end());
    std::reverse(shuffled.mentions.begin(), shuffled.mentions.end());
    std::reverse(shuffled.links.begin(), shuffled.links.end());
    CHECK(export_graph(build_from_import(f).graph()) == export_graph(build_from_import(shuffled).graph()));
    CHECK(serialize(f) != serialize(ImportFile{}));
}

TEST_CASE("UTF-8 text survives and spans count code points") {
    ImportFile f;
    f.documents.push_back({"d1", "Zürich Bericht", "Zürich ist schön", {{0, 16}}});
    f.mentions.push_back({"m1", "d1", {0, 6}, "Zürich", EntityClass::Location});
    f.mentions.push_back({"m2", "d1", {11, 16}, "schön", EntityClass::Misc});
    CHECK(validate(f).empty());
    const std::string bytes = export_graph(build_from_import(f).graph());
    CHECK(bytes.find("Zürich") != std::string::npos);
    CHECK(parse_import(bytes).mentions[0].surface == "Zürich");
}

TEST_CASE("validate is empty exactly when import succeeds") {
    testsupport::Rng rng(404);
    int invalid = 0;
    for (int trial = 0; trial < 400; ++trial) {
        ImportFile f = testsupport::random_corpus(rng);
        switch (testsupport::uniform(rng, 0, 6)) {
            case 0:
                if (!f.entities.empty()) f.entities.push_back(f.entities.front());
                break;
            case 1:
                if (!f.mentions.empty()) f.mentions.back().document = "nope";
                break;
            case 2:
                if (!f.mentions.empty()) f.mentions.front().span.end = f.mentions.front().span.start;
                break;
            case 3:
                if (!f.links.empty()) f.links.front().confidence = 1.01;
                break;
            case 4:
                if (!f.links.empty()) f.links.push_back(f.links.front());
                break;
            default: break;
        }
        const auto vs = validate(f);
        bool ok = true;
        try {
            build_from_import(parse_import(serialize(f)));
        } catch (const ImportError&) {
            ok = false;
        }
        REQUIRE(vs.empty() == ok);
        if (vs.empty()) CHECK_NOTHROW(build_from_import(f));
        invalid += !ok;
    }
    CHECK(invalid > 50);
}

TEST_CASE("export then import is idempotent on random corpora") {
    testsupport::Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const GraphStore s = build_from_import(testsupport::random_corpus(rng));
        const std::string a = export_graph(s.graph());
        const GraphStore t = build_from_import(parse_import(a));
        REQUIRE(t.graph() == s.graph());
        REQUIRE(export_graph(t.graph()) == a);
    }
}

TEST_CASE("op wire format round trip") {
    testsupport::Rng rng(3);
    GraphStore s = build_from_import(testsupport::random_corpus(rng));
    testsupport::OpGenerator gen(5);
    for (int i = 0; i < 300; ++i) {
        const MutationOp op = gen.next(s.graph());
        const auto j = codec::to_json(op);
        REQUIRE(codec::op_from_json(j) == op);
        REQUIRE(codec::op_from_json(codec::json::parse(j.dump())) == op);
        s.apply({op});
    }
    CHECK_THROWS_AS(codec::op_from_json(codec::json{{"op", "explode"}}), Error);
    CHECK_THROWS_AS(codec::op_from_json(codec::json{{"op", "deleteNode"}, {"key", "q:1"}}), Error);
    CHECK_THROWS_AS(codec::op_from_json(codec::json{{"op", "deleteNode"}}), Error);
}

TEST_CASE("view state wire format round trip") {
    ViewState vs;
    vs.mode = ViewMode::DE;
    vs.scheme = ColorScheme::ByClass;
    vs.rule.entity_classes.erase(EntityClass::Misc);
    vs.rule.edge_kinds.insert(EdgeKind::Collocation);
    vs.focus.selected = GlobalKey::document("d2");
    CHECK(codec::view_state_from_json(codec::to_json(vs)) == vs);
    CHECK_THROWS_AS(codec::view_state_from_json(codec::json{{"mode", "XYZ"}}), ImportError);
}

TEST_CASE("layout params wire format") {
    LayoutParams p;
    p.theta = 1.2;
    p.lin_log = true;
    p.seed = 99;
    const LayoutParams back = codec::layout_params_from_json(codec::to_json(p));
    CHECK(back.theta == 1.2);
    CHECK(back.lin_log);
    CHECK(back.seed == 99);
    CHECK(codec::layout_params_from_json(codec::json::object()).repulsion == 2.0);
}
