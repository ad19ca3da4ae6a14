#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqm/comprehension.hpp"
#include "cqm/corpus.hpp"
#include "cqm/error.hpp"

#include <random>

using namespace cqm;

namespace {

// Fills in the identity rows of a composition table.
FinCategory category(std::vector<Id> objects, std::vector<Arrow> arrows, FinCategory::CompTable comp) {
    std::map<Id, Id> ids;
    for (const auto& a : objects) {
        ids[a] = "id_" + a;
        arrows.push_back({"id_" + a, a, a});
    }
    for (const auto& f : arrows) {
        comp[{ids[f.dom], f.name}] = f.name;
        comp[{f.name, ids[f.cod]}] = f.name;
    }
    return FinCategory(objects, arrows, ids, comp);
}

FinCategory chain3() {
    std::vector<std::vector<bool>> leq(3, std::vector<bool>(3));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) leq[i][j] = i <= j;
    return corpus::preorder_category(leq, corpus::trivial_monoid());
}

// Every fiber and every entry a singleton.
LaxSpec terminal_spec(const FinCategory& c) {
    LaxSpec s{c, {}, {}, {}, {}};
    FinSet pt("*", {"*"});
    for (const auto& a : c.objects()) {
        s.obmap[a] = pt;
        s.eta[{a, "*"}] = c.identity(a);
    }
    for (const auto& f : c.arrows()) s.armap[f.name] = SetSpan(pt, pt, std::vector<SpanCell>{{"*", "*", {f.name}}});
    for (const auto& [key, h] : c.table()) s.mu[{key.first, key.second, key.first, key.second}] = h;
    return s;
}

// Fibers {lo, hi}; entries nonempty where the source is below the target.
LaxSpec order_spec(const FinCategory& c) {
    const std::vector<Id> levels{"lo", "hi"};
    LaxSpec s{c, {}, {}, {}, {}};
    auto cell = [](const Id& f, std::size_t i, std::size_t j) { return f + ":" + std::to_string(i) + std::to_string(j); };
    for (const auto& a : c.objects()) {
        s.obmap[a] = FinSet(a, levels);
        for (std::size_t i = 0; i < 2; ++i) s.eta[{a, levels[i]}] = cell(c.identity(a), i, i);
    }
    for (const auto& f : c.arrows()) {
        std::vector<SpanCell> cells;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = i; j < 2; ++j) cells.push_back({levels[i], levels[j], {cell(f.name, i, j)}});
        s.armap[f.name] = SetSpan(s.obmap[f.dom], s.obmap[f.cod], cells);
    }
    for (const auto& [key, h] : c.table())
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = i; j < 2; ++j)
                for (std::size_t k = j; k < 2; ++k)
                    s.mu[{key.first, key.second, cell(key.first, i, j), cell(key.second, j, k)}] = cell(h, i, k);
    return s;
}

}  // namespace

TEST_CASE("finite categories are validated") {
    CHECK_NOTHROW(chain3());
    CHECK_THROWS_AS(category({"A"}, {{"f", "A", "B"}}, {}), InputError);
    // f;f missing from the table.
    CHECK_THROWS_AS(category({"A"}, {{"f", "A", "A"}}, {}), InputError);
    CHECK_THROWS_AS(category({"A"}, {{"f", "A", "A"}}, {{{"f", "f"}, "nope"}}), InputError);
}

TEST_CASE("terminal specification") {
    auto c = chain3();
    auto s = terminal_spec(c);
    CHECK(verify_lax(s).pass);
    CHECK(is_relational(s));
    auto comp = build_comprehension(s);
    CHECK(comp.total.objects().size() == c.objects().size());
    CHECK(comp.total.arrows().size() == c.arrows().size());
    CHECK(spec_roundtrip_check(s).pass);
}

TEST_CASE("identity-only base gives a discrete comprehension") {
    auto c = category({"A"}, {}, {});
    FinSet fib("A", {"a", "b"});
    LaxSpec s{c, {{"A", fib}}, {}, {}, {}};
    s.armap["id_A"] = SetSpan(fib, fib, std::vector<SpanCell>{{"a", "a", {"ia"}}, {"b", "b", {"ib"}}});
    s.eta[{"A", "a"}] = "ia";
    s.eta[{"A", "b"}] = "ib";
    s.mu[{"id_A", "id_A", "ia", "ia"}] = "ia";
    s.mu[{"id_A", "id_A", "ib", "ib"}] = "ib";
    CHECK(verify_lax(s).pass);
    auto comp = build_comprehension(s);
    CHECK(comp.total.objects().size() == 2);
    CHECK(comp.total.arrows().size() == 2);
    for (const auto& a : comp.total.objects())
        for (const auto& b : comp.total.objects())
            CHECK(comp.total.hom(a, b).size() == (a == b ? 1u : 0u));
}

TEST_CASE("relational spec over a poset: object and arrow counts") {
    auto c = chain3();
    auto s = order_spec(c);
    CHECK(verify_lax(s).pass);
    CHECK(is_relational(s));
    std::size_t objects = 0, arrows = 0;
    for (const auto& a : c.objects()) objects += s.fiber(a).size();
    for (const auto& f : c.arrows()) {
        const auto& sp = s.span(f.name);
        for (std::size_t i = 0; i < sp.dom().size(); ++i)
            for (std::size_t j = 0; j < sp.cod().size(); ++j) arrows += !sp.entry(i, j).empty();
    }
    auto comp = build_comprehension(s);
    CHECK(comp.total.objects().size() == objects);
    CHECK(comp.total.arrows().size() == arrows);
    CHECK(objects == 6);
    CHECK(arrows == 18);
    CHECK(spec_roundtrip_check(s).pass);
}

TEST_CASE("specification of the identity functor") {
    auto c = chain3();
    auto e = FinFunctor::identity(c);
    auto s = specification_of_functor(e);
    for (const auto& a : c.objects()) CHECK(s.fiber(a).size() == 1);
    for (const auto& f : c.arrows()) CHECK(s.span(f.name).cell_count() == 1);
    CHECK(is_faithful(e));
    CHECK(is_relational(s));
    CHECK(roundtrip_check(e).pass);
}

TEST_CASE("parallel fiber arrows") {
    auto base = category({"0", "1"}, {{"u", "0", "1"}}, {});
    auto top = category({"x", "y"}, {{"p", "x", "y"}, {"q", "x", "y"}}, {});
    FinFunctor e(top, base, {{"x", "0"}, {"y", "1"}}, {{"p", "u"}, {"q", "u"}, {"id_x", "id_0"}, {"id_y", "id_1"}});
    CHECK_FALSE(is_faithful(e));
    auto s = specification_of_functor(e);
    CHECK(s.span("u").entry("x", "y").size() == 2);
    CHECK_FALSE(is_relational(s));
    CHECK(roundtrip_check(e).pass);
}

TEST_CASE("empty fiber") {
    auto base = category({"0", "1"}, {}, {});
    auto top = category({"x"}, {}, {});
    FinFunctor e(top, base, {{"x", "0"}}, {{"id_x", "id_0"}});
    auto s = specification_of_functor(e);
    CHECK(s.fiber("1").empty());
    CHECK(roundtrip_check(e).pass);
}

TEST_CASE("functors that break the laws are rejected") {
    auto base = category({"0", "1"}, {{"u", "0", "1"}}, {});
    auto top = category({"x", "y"}, {{"p", "x", "y"}}, {});
    CHECK_THROWS_AS(FinFunctor(top, base, {{"x", "0"}, {"y", "1"}}, {{"p", "u"}, {"id_x", "u"}, {"id_y", "id_1"}}),
                    InputError);
    CHECK_THROWS_AS(FinFunctor(top, base, {{"x", "1"}, {"y", "0"}}, {{"p", "u"}, {"id_x", "id_1"}, {"id_y", "id_0"}}),
                    InputError);
}

TEST_CASE("random functors round-trip") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 60; ++t) {
        auto e = corpus::random_functor(rng);
        auto rep = roundtrip_check(e);
        CHECK(rep.pass);
        auto s = specification_of_functor(e);
        CHECK(verify_lax(s).pass);
        CHECK(spec_roundtrip_check(s).pass);
        CHECK(is_faithful(e) == is_relational(s));
    }
}

TEST_CASE("mutated multiplication is located") {
    auto spec = corpus::chain_spec();
    CHECK(verify_lax(spec).pass);
    std::mt19937_64 rng(5);
    for (const auto& m : corpus::mu_mutants(spec, 20, rng)) {
        auto rep = verify_lax(m);
        CHECK_FALSE(rep.pass);
        bool located = false;
        for (const auto& f : rep.failures) located |= f.location.find('(') != std::string::npos;
        CHECK(located);
        CHECK_THROWS_AS(build_comprehension(m), IncoherentSpec);
    }
}

TEST_CASE("missing multiplication entries are reported") {
    auto s = order_spec(chain3());
    s.mu.erase(s.mu.begin());
    auto rep = verify_lax(s);
    CHECK_FALSE(rep.pass);
    CHECK(rep.failures.front().kind == "mu_missing");
}
