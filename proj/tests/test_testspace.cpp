#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqm/corpus.hpp"
#include "cqm/error.hpp"
#include "cqm/testspace.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <set>

using namespace cqm;
using corpus::numbered;

namespace {

Family fam(std::vector<std::vector<std::size_t>> sets) {
    Family f;
    for (const auto& s : sets) {
        Mask m = 0;
        for (auto i : s) m |= bit(i);
        f.push_back(m);
    }
    canonicalize(f);
    return f;
}

// Subsets meeting every test exactly once, then the inclusion-maximal ones.
Family oracle_complement(std::size_t n, const Family& alpha) {
    std::vector<Mask> exact;
    for (Mask u = 0; u < bit(n); ++u)
        if (std::all_of(alpha.begin(), alpha.end(), [&](Mask a) { return std::popcount(u & a) == 1; }))
            exact.push_back(u);
    Family out;
    for (Mask u : exact)
        if (std::none_of(exact.begin(), exact.end(), [&](Mask v) { return v != u && (u & v) == u; }))
            out.push_back(u);
    canonicalize(out);
    return out;
}

Mask product_mask(const FinSet& prod, std::vector<std::pair<Id, Id>> cells) {
    Mask m = 0;
    for (const auto& [a, b] : cells) m |= bit(prod.require_index(pair_name(a, b)));
    return m;
}

bool has_induced_p4(const FinRel& r) {
    const std::size_t n = r.dom().size();
    std::vector<std::size_t> p(4);
    for (p[0] = 0; p[0] < n; ++p[0])
        for (p[1] = 0; p[1] < n; ++p[1])
            for (p[2] = 0; p[2] < n; ++p[2])
                for (p[3] = 0; p[3] < n; ++p[3]) {
                    std::set<std::size_t> d(p.begin(), p.end());
                    if (d.size() < 4) continue;
                    if (r.holds(p[0], p[1]) && r.holds(p[1], p[2]) && r.holds(p[2], p[3]) && !r.holds(p[0], p[2]) &&
                        !r.holds(p[1], p[3]) && !r.holds(p[0], p[3]))
                        return true;
                }
    return false;
}

FinRel graph_relation(std::size_t n, Mask edges) {
    std::vector<Bits> rows(n, Bits(n));
    std::size_t e = 0;
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].set(i);
        for (std::size_t j = i + 1; j < n; ++j, ++e)
            if (edges & bit(e)) {
                rows[i].set(j);
                rows[j].set(i);
            }
    }
    auto x = numbered(n);
    return FinRel(x, x, std::move(rows));
}

Family oracle_cliques(const FinRel& r) {
    const std::size_t n = r.dom().size();
    auto clique = [&](Mask u) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if ((u & bit(i)) && (u & bit(j)) && !r.holds(i, j)) return false;
        return true;
    };
    Family out;
    for (Mask u = 1; u < bit(n); ++u) {
        if (!clique(u)) continue;
        bool maximal = true;
        for (std::size_t x = 0; x < n && maximal; ++x)
            if (!(u & bit(x)) && clique(u | bit(x))) maximal = false;
        if (maximal) out.push_back(u);
    }
    canonicalize(out);
    return out;
}

// Direct-image definition of the morphism relation.
bool oracle_morphism(const FinRel& r, const Testable& a, const Testable& b) {
    auto img = [](const FinRel& rel, Mask s) {
        Mask out = 0;
        for (std::size_t i = 0; i < rel.dom().size(); ++i)
            if (s & bit(i))
                for (std::size_t j = 0; j < rel.cod().size(); ++j)
                    if (rel.holds(i, j)) out |= bit(j);
        return out;
    };
    auto in = [](const Family& f, Mask m) { return std::find(f.begin(), f.end(), m) != f.end(); };
    for (Mask t : a.tests())
        if (!in(b.tests(), img(r, t))) return false;
    const FinRel op = dagger(r);
    for (Mask t : b.complement().tests())
        if (!in(a.complement().tests(), img(op, t))) return false;
    return true;
}

}  // namespace

TEST_CASE("complement examples") {
    CHECK(complement(TestSpace(numbered(2), fam({{0, 1}}))) == fam({{0}, {1}}));
    CHECK(complement(TestSpace(numbered(4), fam({{0, 1}, {2, 3}}))) == fam({{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
    CHECK(complement(TestSpace(numbered(3), fam({{0, 1}, {1, 2}}))) == fam({{1}, {0, 2}}));
}

TEST_CASE("complement agrees with subset enumeration") {
    for (std::size_t n = 1; n <= 4; ++n)
        for (const auto& f : corpus::all_test_spaces(n)) CHECK(complement_family(n, f) == oracle_complement(n, f));
}

TEST_CASE("complement tests meet every test once") {
    for (std::size_t n = 1; n <= 5; ++n)
        for (const auto& f : corpus::all_test_spaces(n))
            for (Mask u : complement_family(n, f))
                for (Mask a : f) CHECK(std::popcount(u & a) == 1);
}

TEST_CASE("test space validation") {
    CHECK_THROWS_AS(TestSpace(numbered(2), fam({{0}, {0, 1}})), InputError);
    CHECK_THROWS_AS(TestSpace(numbered(3), fam({{0, 1}})), InputError);
    TestSpace empty(FinSet("E", {}), {});
    CHECK(complement(empty).empty());
}

TEST_CASE("size guard refuses large universes") {
    SizeGuard small{4, 256};
    CHECK_THROWS_AS(complement(TestSpace(numbered(5), fam({{0, 1, 2, 3, 4}})), small), SizeGuardError);
}

TEST_CASE("testability") {
    CHECK(is_testable(TestSpace(numbered(3), fam({{0, 1}, {1, 2}}))).testable);
    for (std::size_t n = 1; n <= 7; ++n)
        for (const auto& p : corpus::all_partitions(n)) {
            auto cert = is_testable(TestSpace(numbered(n), p));
            CHECK(cert.testable);
            CHECK(cert.double_complement == p);
        }
    // The certificate matches the double-complement oracle.
    for (std::size_t n = 1; n <= 4; ++n)
        for (const auto& f : corpus::all_test_spaces(n)) {
            const bool expect = oracle_complement(n, oracle_complement(n, f)) == f;
            CHECK(is_testable(TestSpace(numbered(n), f)).testable == expect);
        }
}

TEST_CASE("clique testables") {
    auto x = numbered(3);
    CHECK(clique_testable(FinRel::identity(x)).tests() == fam({{0}, {1}, {2}}));
    std::vector<Bits> total(3, Bits(3).set());
    CHECK(clique_testable(FinRel(x, x, total)).tests() == fam({{0, 1, 2}}));
    CHECK(clique_testable(graph_relation(3, 0b101)).tests() == fam({{0, 1}, {1, 2}}));

    std::vector<Bits> asym(3, Bits(3));
    for (std::size_t i = 0; i < 3; ++i) asym[i].set(i);
    asym[0].set(1);
    CHECK_THROWS_AS(clique_testable(FinRel(x, x, asym)), InputError);
}

TEST_CASE("clique testables over all small graphs") {
    std::size_t with_p4 = 0, with_p4_testable = 0;
    for (std::size_t n = 1; n <= 5; ++n) {
        const std::size_t edges = n * (n - 1) / 2;
        for (Mask e = 0; e < bit(edges); ++e) {
            auto r = graph_relation(n, e);
            const auto cliques = oracle_cliques(r);
            CHECK(maximal_cliques(r) == cliques);
            const bool testable = oracle_complement(n, oracle_complement(n, cliques)) == cliques;
            const bool p4 = has_induced_p4(r);
            // No induced path on four vertices is sufficient, not necessary.
            if (!p4) CHECK(testable);
            with_p4 += p4;
            with_p4_testable += p4 && testable;
            if (testable)
                CHECK(clique_testable(r).tests() == cliques);
            else
                CHECK_THROWS_AS(clique_testable(r), NotTestable);
        }
    }
    CHECK(with_p4 > 0);
    CHECK(with_p4_testable > 0);
}

TEST_CASE("path on four vertices has untestable cliques") {
    auto r = graph_relation(4, 0b101001);  // edges 01, 12, 23
    CHECK(maximal_cliques(r) == fam({{0, 1}, {1, 2}, {2, 3}}));
    try {
        clique_testable(r);
        FAIL("expected NotTestable");
    } catch (const NotTestable& e) {
        CHECK(e.certificate().complement == fam({{0, 2}, {1, 3}}));
        CHECK(e.certificate().double_complement == fam({{0, 1}, {0, 3}, {1, 2}, {2, 3}}));
    }
}

TEST_CASE("tensor and par of the crudest and finest covers") {
    auto bell = corpus::bell_instance();
    auto t = tensor(bell.crudest, bell.finest);
    auto p = par(bell.crudest, bell.finest);
    const auto& u = t.universe();
    Family tensor_expect{product_mask(u, {{"0", "0"}, {"1", "0"}}), product_mask(u, {{"0", "1"}, {"1", "1"}})};
    canonicalize(tensor_expect);
    CHECK(t.tests() == tensor_expect);
    Family par_expect{product_mask(u, {{"0", "0"}, {"1", "0"}}), product_mask(u, {{"0", "0"}, {"1", "1"}}),
                      product_mask(u, {{"0", "1"}, {"1", "0"}}), product_mask(u, {{"0", "1"}, {"1", "1"}})};
    canonicalize(par_expect);
    CHECK(p.tests() == par_expect);
    CHECK(t.star() == par(bell.crudest.star(), bell.finest.star()));
}

TEST_CASE("unit for tensor and par") {
    for (std::size_t n = 1; n <= 3; ++n)
        for (const auto& a : corpus::all_testables(n)) {
            auto t = tensor(Testable::unit(), a);
            auto p = par(Testable::unit(), a);
            CHECK(t.tests() == a.tests());
            CHECK(p.tests() == a.tests());
            CHECK(a.star().star() == a);
        }
}

TEST_CASE("morphism check") {
    auto a = Testable::make(TestSpace(numbered(3), fam({{0, 1}, {1, 2}})));
    CHECK(morphism_check(FinRel::identity(a.universe()), a, a).ok);
    auto v = morphism_check(FinRel(a.universe(), a.universe()), a, a);
    CHECK_FALSE(v.ok);
    CHECK(v.diagnostic.find("not a test") != std::string::npos);
}

TEST_CASE("morphism check agrees with direct images") {
    std::vector<Testable> objs;
    for (std::size_t n = 1; n <= 2; ++n) {
        auto t = corpus::all_testables(n);
        objs.insert(objs.end(), t.begin(), t.end());
    }
    for (const auto& a : objs)
        for (const auto& b : objs) {
            const std::size_t cells = a.universe().size() * b.universe().size();
            for (Mask m = 0; m < bit(cells); ++m) {
                std::vector<Bits> rows(a.universe().size(), Bits(b.universe().size()));
                for (std::size_t k = 0; k < cells; ++k)
                    if (m & bit(k)) rows[k / b.universe().size()].set(k % b.universe().size());
                FinRel r(a.universe(), b.universe(), rows);
                CHECK(morphism_check(r, a, b).ok == oracle_morphism(r, a, b));
            }
        }
}

TEST_CASE("morphisms compose") {
    std::mt19937_64 rng(11);
    std::vector<Testable> objs;
    for (std::size_t n = 1; n <= 3; ++n) {
        auto t = corpus::all_testables(n);
        objs.insert(objs.end(), t.begin(), t.end());
    }
    std::uniform_int_distribution<std::size_t> pick(0, objs.size() - 1);
    std::size_t composed = 0;
    for (int trial = 0; trial < 4000 && composed < 300; ++trial) {
        const auto& a = objs[pick(rng)];
        const auto& b = objs[pick(rng)];
        const auto& c = objs[pick(rng)];
        auto random_rel = [&](const FinSet& x, const FinSet& y) {
            std::vector<Bits> rows(x.size(), Bits(y.size()));
            std::bernoulli_distribution coin(0.5);
            for (auto& row : rows)
                for (std::size_t j = 0; j < y.size(); ++j) row[j] = coin(rng);
            return FinRel(x, y, rows);
        };
        auto r = random_rel(a.universe(), b.universe());
        auto s = random_rel(b.universe(), c.universe());
        if (!morphism_check(r, a, b).ok || !morphism_check(s, b, c).ok) continue;
        ++composed;
        CHECK(morphism_check(compose(r, s), a, c).ok);
    }
    CHECK(composed > 0);
}

TEST_CASE("vectors are the tests") {
    for (std::size_t n = 1; n <= 4; ++n)
        for (const auto& a : corpus::all_testables(n)) {
            Family got;
            for (const auto& v : enumerate_vectors(a)) got.push_back(v.subset);
            canonicalize(got);
            CHECK(got == a.tests());
        }
}

TEST_CASE("separable and entangled vectors") {
    auto bell = corpus::bell_instance();
    ProductFactors factors{bell.crudest, bell.finest};
    auto tv = enumerate_vectors(tensor(bell.crudest, bell.finest), factors);
    CHECK(tv.size() == 2);
    for (const auto& v : tv) CHECK(v.separable == true);

    auto p = par(bell.crudest, bell.finest);
    auto pv = enumerate_vectors(p, factors);
    CHECK(pv.size() == 4);
    const auto& u = p.universe();
    std::set<Mask> entangled;
    for (const auto& v : pv)
        if (v.separable == false) entangled.insert(v.subset);
    CHECK(entangled == std::set<Mask>{product_mask(u, {{"0", "0"}, {"1", "1"}}),
                                      product_mask(u, {{"0", "1"}, {"1", "0"}})});
}

TEST_CASE("complementary bases") {
    auto rep = complementary_bases(TestSpace(numbered(4), fam({{0, 1}, {2, 3}})));
    CHECK(rep.rectangular);
    std::set<Family> bases(rep.bases.begin(), rep.bases.end());
    CHECK(bases.contains(fam({{0, 2}, {1, 3}})));
    CHECK(bases.contains(fam({{0, 3}, {1, 2}})));
    for (const auto& s : rep.shapes) CHECK(s == std::pair<std::size_t, std::size_t>{2, 2});

    auto bad = complementary_bases(TestSpace(numbered(3), fam({{0, 1}, {2}})));
    CHECK_FALSE(bad.rectangular);
    CHECK(bad.bases.empty());
    CHECK(bad.complement == fam({{0, 2}, {1, 2}}));

    auto finest = complementary_bases(TestSpace(numbered(3), fam({{0}, {1}, {2}})));
    CHECK(finest.rectangular);
    CHECK(finest.bases == std::vector<Family>{fam({{0, 1, 2}})});
}

TEST_CASE("complementary bases are partitions inside the complement") {
    for (std::size_t n = 1; n <= 6; ++n)
        for (const auto& p : corpus::all_partitions(n)) {
            auto rep = complementary_bases(TestSpace(numbered(n), p));
            std::size_t expected = 0;
            for (const auto& q : corpus::all_partitions(n))
                if (std::all_of(q.begin(), q.end(), [&](Mask blk) {
                        return std::find(rep.complement.begin(), rep.complement.end(), blk) != rep.complement.end();
                    }))
                    ++expected;
            CHECK(rep.bases.size() == expected);
            // A complementary basis exists exactly for equal block sizes.
            const bool equal = std::all_of(p.begin(), p.end(),
                                           [&](Mask b) { return std::popcount(b) == std::popcount(p.front()); });
            CHECK(rep.rectangular == equal);
            CHECK(rep.bases.empty() != equal);
        }
}
