#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqm/axioms.hpp"
#include "cqm/corpus.hpp"
#include "cqm/error.hpp"

#include <random>
#include <set>

using namespace cqm;
using corpus::numbered;

namespace {

bool has_kind(const VerificationReport& r, const std::string& kind) {
    for (const auto& f : r.failures)
        if (f.kind == kind) return true;
    return false;
}

// nabla as a ternary predicate over indices: ((a, b), c).
struct Ternary {
    std::size_t n;
    const FinRel& rel;
    ProductIndex idx;
    bool operator()(std::size_t a, std::size_t b, std::size_t c) const { return rel.holds(idx(a, b), c); }
};

using PairSet = std::set<std::pair<std::size_t, std::size_t>>;

struct FrobeniusOracle {
    bool left = true, right = true, assoc = true;
};

FrobeniusOracle oracle_frobenius(const FinRel& nabla) {
    const std::size_t n = nabla.cod().size();
    Ternary m{n, nabla, ProductIndex(nabla.cod(), nabla.cod())};
    FrobeniusOracle o;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            PairSet left, middle, right;
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d)
                    for (std::size_t e = 0; e < n; ++e) {
                        if (m(c, d, a) && m(d, b, e)) left.emplace(c, e);
                        if (m(a, b, e) && m(c, d, e)) middle.emplace(c, d);
                        if (m(c, d, b) && m(a, c, e)) right.emplace(e, d);
                    }
            o.left &= left == middle;
            o.right &= right == middle;
            for (std::size_t c = 0; c < n; ++c) {
                std::set<std::size_t> one, two;
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t e = 0; e < n; ++e) {
                        if (m(a, b, k) && m(k, c, e)) one.insert(e);
                        if (m(b, c, k) && m(a, k, e)) two.insert(e);
                    }
                o.assoc &= one == two;
            }
        }
    return o;
}

DualityData duality(const FinSet& x, Mask eta, Mask eps) {
    ProductIndex p(x, x);
    const std::size_t k = p.set().size();
    std::vector<Bits> eta_rows(1, Bits(k));
    std::vector<Bits> eps_rows(k, Bits(1));
    for (std::size_t i = 0; i < k; ++i) {
        eta_rows[0][i] = (eta >> i) & 1;
        eps_rows[i][0] = (eps >> i) & 1;
    }
    return {x, FinRel(FinSet::point(), p.set(), eta_rows), FinRel(p.set(), FinSet::point(), eps_rows)};
}

// Both snakes are identities: x ↦ {u | (u,v) ∈ η, (v,x) ∈ ε} and
// x ↦ {v | (u,v) ∈ η, (x,u) ∈ ε}.
bool oracle_snakes(std::size_t n, Mask eta, Mask eps) {
    auto in = [n](Mask m, std::size_t a, std::size_t b) { return (m >> (a * n + b)) & 1; };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            bool l = false, r = false;
            for (std::size_t w = 0; w < n; ++w) {
                l |= in(eta, y, w) && in(eps, w, x);
                r |= in(eta, w, y) && in(eps, x, w);
            }
            if (l != (x == y) || r != (x == y)) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("structural isomorphisms are bijections") {
    auto x = numbered(2, "X"), y = numbered(3, "Y"), z = numbered(2, "Z");
    auto a = associator(x, y, z);
    CHECK(compose(a, dagger(a)) == FinRel::identity(a.dom()));
    CHECK(compose(dagger(a), a) == FinRel::identity(a.cod()));
    auto ru = right_unitor(x);
    CHECK(compose(ru, dagger(ru)) == FinRel::identity(x));
    auto lu = left_unitor(x);
    CHECK(compose(lu, dagger(lu)) == FinRel::identity(x));
}

TEST_CASE("compact adjunction of the diagonal") {
    for (std::size_t n = 1; n <= 4; ++n) CHECK(check_compact_adjunction(DualityData::diagonal(numbered(n))).pass);
    CHECK(check_compact_adjunction(DualityData::diagonal(FinSet("E", {}))).pass);

    auto d = DualityData::diagonal(numbered(3));
    ProductIndex p(d.carrier, d.carrier);
    d.eps = d.eps.with_pair(p(1, 1), 0, false);
    auto r = check_compact_adjunction(d);
    CHECK_FALSE(r.pass);
    CHECK((has_kind(r, "snake_left") || has_kind(r, "snake_right")));
}

TEST_CASE("compact adjunction agrees with the snake oracle") {
    for (std::size_t n = 1; n <= 2; ++n) {
        const Mask cells = bit(n * n);
        for (Mask eta = 0; eta < cells; ++eta)
            for (Mask eps = 0; eps < cells; ++eps)
                CHECK(check_compact_adjunction(duality(numbered(n), eta, eps)).pass == oracle_snakes(n, eta, eps));
    }
}

TEST_CASE("mix and distributivity") {
    auto bell = corpus::bell_instance();
    auto u = Testable::unit();
    CHECK(check_mix_and_distributivity(bell.crudest, bell.finest, u).pass);
    for (std::size_t n = 1; n <= 2; ++n)
        for (const auto& a : corpus::all_testables(n)) {
            CHECK(check_mix_and_distributivity(u, a, u).pass);
            CHECK(check_mix_and_distributivity(a, u, u).pass);
        }
}

TEST_CASE("star laws") {
    auto bell = corpus::bell_instance();
    CHECK(check_star_object_laws(bell.crudest, bell.finest).pass);
    for (std::size_t n = 1; n <= 3; ++n)
        for (const auto& a : corpus::all_testables(n)) {
            CHECK(a.star().star() == a);
            CHECK(check_star_object_laws(a, Testable::unit()).pass);
        }
    CHECK(Testable::unit().star() == Testable::unit());
}

TEST_CASE("autonomous duality of the unit") {
    CHECK(check_autonomous_duality(Testable::unit()).pass);
    auto bell = corpus::bell_instance();
    auto r1 = check_autonomous_duality(bell.crudest);
    auto r2 = check_autonomous_duality(bell.crudest);
    CHECK(to_json(r1) == to_json(r2));
}

TEST_CASE("Frobenius examples") {
    CHECK(check_frobenius(AlgebraData::cyclic_group(2)).pass);
    CHECK(check_frobenius(AlgebraData::cyclic_group(3)).pass);
    CHECK(check_frobenius(AlgebraData::cyclic_group(1)).pass);
    CHECK_FALSE(check_frobenius(corpus::constant_algebra(2)).pass);
    // In Rel the first projection satisfies both Frobenius equations.
    auto proj = corpus::first_projection_algebra(2);
    CHECK(oracle_frobenius(proj.nabla).left);
    CHECK(check_frobenius(proj).pass);

    auto broken = AlgebraData::cyclic_group(2);
    broken.delta = FinRel::identity(broken.carrier);
    CHECK_THROWS_AS(check_frobenius(broken), InputError);
}

TEST_CASE("Frobenius agrees with the oracle on every relation over two elements") {
    auto x = numbered(2);
    ProductIndex p(x, x);
    for (Mask m = 0; m < bit(8); ++m) {
        std::vector<Bits> rows(4, Bits(2));
        for (std::size_t k = 0; k < 8; ++k)
            if (m & bit(k)) rows[k / 2].set(k % 2);
        FinRel nabla(p.set(), x, rows);
        auto o = oracle_frobenius(nabla);
        auto r = check_frobenius(AlgebraData::of_multiplication(nabla));
        CHECK(has_kind(r, "frobenius_left") == !o.left);
        CHECK(has_kind(r, "frobenius_right") == !o.right);
        CHECK(has_kind(r, "associativity") == !o.assoc);
    }
}

TEST_CASE("Frobenius agrees with the oracle on random operations over three elements") {
    std::mt19937_64 rng(41);
    auto x = numbered(3);
    ProductIndex p(x, x);
    std::uniform_int_distribution<std::size_t> pick(0, 2);
    for (int t = 0; t < 300; ++t) {
        std::vector<std::size_t> targets(9);
        for (auto& v : targets) v = pick(rng);
        auto nabla = FinRel::graph(p.set(), x, targets);
        auto o = oracle_frobenius(nabla);
        auto r = check_frobenius(AlgebraData::of_multiplication(nabla));
        CHECK(r.pass == (o.left && o.right && o.assoc));
    }
}
