#include "cqm/axioms.hpp"

#include "cqm/error.hpp"

namespace cqm {

FinRel associator(const FinSet& x, const FinSet& y, const FinSet& z) {
    ProductIndex yz(y, z), left(x, yz.set()), xy(x, y), right(xy.set(), z);
    std::vector<std::size_t> targets(left.set().size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        auto [i, jk] = left.split(k);
        auto [j, l] = yz.split(jk);
        targets[k] = right(xy(i, j), l);
    }
    return FinRel::graph(left.set(), right.set(), targets);
}

FinRel right_unitor(const FinSet& x) {
    ProductIndex p(x, FinSet::point());
    std::vector<std::size_t> targets(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) targets[i] = p(i, 0);
    return FinRel::graph(x, p.set(), targets);
}

FinRel left_unitor(const FinSet& x) {
    ProductIndex p(FinSet::point(), x);
    std::vector<std::size_t> targets(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) targets[i] = p(0, i);
    return FinRel::graph(x, p.set(), targets);
}

DualityData DualityData::diagonal(const FinSet& x) {
    ProductIndex p(x, x);
    FinRel eta(FinSet::point(), p.set());
    std::vector<Bits> rows(p.set().size(), Bits(1));
    Bits diag(p.set().size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        diag.set(p(i, i));
        rows[p(i, i)].set(0);
    }
    return {x, FinRel(FinSet::point(), p.set(), std::vector<Bits>{diag}), FinRel(p.set(), FinSet::point(), rows)};
}

namespace {

void compare(VerificationReport& r, const FinRel& got, const FinRel& want, const std::string& law) {
    r.checked += got.dom().size() * got.cod().size();
    for (std::size_t i = 0; i < got.dom().size(); ++i)
        for (std::size_t j = 0; j < got.cod().size(); ++j) {
            if (got.holds(i, j) == want.holds(i, j)) continue;
            r.fail(law, pair_name(got.dom()[i], got.cod()[j]), got.holds(i, j) ? "extra pair" : "missing pair");
        }
}

}  // namespace

VerificationReport check_compact_adjunction(const DualityData& d) {
    const FinSet& x = d.carrier;
    ProductIndex xx(x, x);
    if (!(d.eta.dom() == FinSet::point()) || !(d.eta.cod() == xx.set()))
        throw DomainMismatch("eta boundary", d.eta.cod().name(), xx.set().name());
    if (!(d.eps.cod() == FinSet::point()) || !(d.eps.dom() == xx.set()))
        throw DomainMismatch("eps boundary", d.eps.dom().name(), xx.set().name());
    const FinRel id = FinRel::identity(x);
    VerificationReport r;
    // X → X×1 → X×(X×X) → (X×X)×X → 1×X → X
    FinRel first = compose(compose(compose(compose(right_unitor(x), tensor(id, d.eta)), associator(x, x, x)),
                                   tensor(d.eps, id)),
                           dagger(left_unitor(x)));
    compare(r, first, id, "snake_left");
    // X → 1×X → (X×X)×X → X×(X×X) → X×1 → X
    FinRel second = compose(compose(compose(compose(left_unitor(x), tensor(d.eta, id)), dagger(associator(x, x, x))),
                                    tensor(id, d.eps)),
                            dagger(right_unitor(x)));
    compare(r, second, id, "snake_right");
    r.finalize();
    return r;
}

namespace {

nlohmann::json named_family(const Testable& t) { return t.space().named_tests(); }

}  // namespace

VerificationReport check_mix_and_distributivity(const Testable& a, const Testable& b, const Testable& c,
                                                const SizeGuard& guard) {
    VerificationReport r;
    ++r.checked;
    try {
        Testable ab = tensor(a, b, guard);
        Testable apb = par(a, b, guard);
        r.details["tensor"] = named_family(ab);
        r.details["par"] = named_family(apb);
        auto v = morphism_check(FinRel::identity(ab.universe()), ab, apb);
        if (!v.ok) r.fail("mix", "A⊗B → A⅋B", v.diagnostic);
    } catch (const NotTestable& e) {
        r.fail("not_testable", "mix", e.what());
    }
    ++r.checked;
    try {
        Testable left = tensor(a, par(b, c, guard), guard);
        Testable right = par(tensor(a, b, guard), c, guard);
        r.details["distributivity_source"] = named_family(left);
        r.details["distributivity_target"] = named_family(right);
        auto v = morphism_check(associator(a.universe(), b.universe(), c.universe()), left, right);
        if (!v.ok) r.fail("distributivity", "A⊗(B⅋C) → (A⊗B)⅋C", v.diagnostic);
    } catch (const NotTestable& e) {
        r.fail("not_testable", "distributivity", e.what());
    }
    r.finalize();
    return r;
}

VerificationReport check_star_object_laws(const Testable& a, const Testable& b, const SizeGuard& guard) {
    VerificationReport r;
    ++r.checked;
    if (!(a.star().star() == a)) r.fail("double_star", "A", "A** differs from A");
    ++r.checked;
    if (!(Testable::unit().star() == Testable::unit())) r.fail("unit_star", "1", "unit is not self-dual");
    ++r.checked;
    try {
        Testable lhs = tensor(a, b, guard).star();
        Testable rhs = par(a.star(), b.star(), guard);
        if (!(lhs == rhs)) {
            r.fail("de_morgan", "(A⊗B)* vs A*⅋B*", "families differ");
            r.details["lhs"] = named_family(lhs);
            r.details["rhs"] = named_family(rhs);
        }
    } catch (const NotTestable& e) {
        r.fail("not_testable", "de_morgan", e.what());
    }
    r.finalize();
    return r;
}

VerificationReport check_autonomous_duality(const Testable& a, const SizeGuard& guard) {
    VerificationReport r;
    const DualityData d = DualityData::diagonal(a.universe());
    ++r.checked;
    try {
        auto v = morphism_check(d.eta, Testable::unit(), par(a.star(), a, guard));
        if (!v.ok) r.fail("eta", "⊤ → A*⅋A", v.diagnostic);
    } catch (const NotTestable& e) {
        r.fail("not_testable", "eta", e.what());
    }
    ++r.checked;
    try {
        auto v = morphism_check(d.eps, tensor(a, a.star(), guard), Testable::unit());
        if (!v.ok) r.fail("eps", "A⊗A* → ⊥", v.diagnostic);
    } catch (const NotTestable& e) {
        r.fail("not_testable", "eps", e.what());
    }
    r.finalize();
    return r;
}

AlgebraData AlgebraData::of_multiplication(const FinRel& nabla) {
    return {nabla.cod(), nabla, dagger(nabla)};
}

AlgebraData AlgebraData::cyclic_group(std::size_t n) {
    std::vector<Id> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
    FinSet x("Z" + std::to_string(n), names);
    ProductIndex p(x, x);
    std::vector<std::size_t> targets(p.set().size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        auto [i, j] = p.split(k);
        targets[k] = x.require_index(std::to_string((std::stoul(x[i]) + std::stoul(x[j])) % n));
    }
    return of_multiplication(FinRel::graph(p.set(), x, targets));
}

VerificationReport check_frobenius(const AlgebraData& alg) {
    const FinSet& x = alg.carrier;
    ProductIndex xx(x, x);
    if (!(alg.nabla.dom() == xx.set()) || !(alg.nabla.cod() == x))
        throw DomainMismatch("nabla boundary", alg.nabla.dom().name(), xx.set().name());
    if (!(alg.delta == dagger(alg.nabla))) throw InputError("delta is not the converse of nabla");
    const FinRel id = FinRel::identity(x);
    const FinRel assoc = associator(x, x, x);
    VerificationReport r;
    const FinRel middle = compose(alg.nabla, alg.delta);
    // X×X → (X×X)×X → X×(X×X) → X×X
    const FinRel left = compose(compose(tensor(alg.delta, id), dagger(assoc)), tensor(id, alg.nabla));
    // X×X → X×(X×X) → (X×X)×X → X×X
    const FinRel right = compose(compose(tensor(id, alg.delta), assoc), tensor(alg.nabla, id));
    compare(r, left, middle, "frobenius_left");
    compare(r, right, middle, "frobenius_right");
    // (X×X)×X → X two ways
    const FinRel a1 = compose(tensor(alg.nabla, id), alg.nabla);
    const FinRel a2 = compose(compose(dagger(assoc), tensor(id, alg.nabla)), alg.nabla);
    compare(r, a1, a2, "associativity");
    r.finalize();
    return r;
}

}  // namespace cqm
