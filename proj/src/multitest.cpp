#include "cqm/multitest.hpp"

#include "cqm/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cqm {

MultiTestable::MultiTestable(Testable alpha, std::vector<unsigned> omega)
    : alpha_(std::move(alpha)), omega_(std::move(omega)) {
    if (omega_.size() != alpha_.universe().size())
        throw InputError("multiplicity table has " + std::to_string(omega_.size()) + " entries for a universe of " +
                         std::to_string(alpha_.universe().size()));
    for (std::size_t i = 0; i < omega_.size(); ++i)
        if (omega_[i] == 0) throw InputError("multiplicity of '" + alpha_.universe()[i] + "' is zero");
}

MultiTestable MultiTestable::unit() { return MultiTestable(Testable::unit(), {1}); }

MultiTestable MultiTestable::star() const { return MultiTestable(alpha_.star(), omega_); }

namespace {

std::string test_name(const FinSet& x, Mask m) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(m & bit(i))) continue;
        if (!first) s += ",";
        s += x[i];
        first = false;
    }
    return s + "}";
}

std::size_t find_triple(const EtaleSet& e, Mask test, std::size_t element, unsigned copy) {
    for (std::size_t k = 0; k < e.triples.size(); ++k) {
        const auto& t = e.triples[k];
        if (e.family[t.test] == test && t.element == element && t.copy == copy) return e.index_of_triple[k];
    }
    throw InputError("no such etale triple");
}

}  // namespace

std::size_t etale_count(const Family& family, const std::vector<unsigned>& omega) {
    std::size_t n = 0;
    for (Mask a : family)
        for (std::size_t x = 0; x < omega.size(); ++x)
            if (a & bit(x)) n += omega[x];
    return n;
}

EtaleSet etale(const FinSet& universe, const Family& family, const std::vector<unsigned>& omega) {
    EtaleSet e;
    e.family = family;
    std::vector<Id> names;
    for (std::size_t t = 0; t < family.size(); ++t)
        for (std::size_t x = 0; x < universe.size(); ++x) {
            if (!(family[t] & bit(x))) continue;
            for (unsigned i = 0; i < omega[x]; ++i) {
                e.triples.push_back({t, x, i});
                names.push_back("<" + test_name(universe, family[t]) + "," + universe[x] + "," + std::to_string(i) +
                                ">");
            }
        }
    e.elements = FinSet("|" + universe.name() + "|", names);
    e.test_of.assign(names.size(), 0);
    for (std::size_t k = 0; k < names.size(); ++k) {
        const std::size_t pos = e.elements.require_index(names[k]);
        e.index_of_triple.push_back(pos);
        e.test_of[pos] = family[e.triples[k].test];
    }
    return e;
}

namespace {

void require_same(const FinSet& a, const FinSet& b, const char* what) {
    if (!(a == b)) throw DomainMismatch(what, a.name(), b.name());
}

// Checks {test_of_target[s] | row(t) ∋ s} = {image(test_of_source[t])} for every t.
bool square(const FinRel& base, const FinRel& leg, const EtaleSet& from, const EtaleSet& to, const char* label,
            MultiVerdict& v) {
    for (std::size_t t = 0; t < from.elements.size(); ++t) {
        const Mask want = image_mask(base, from.test_of[t]);
        const Bits& row = leg.row(t);
        bool any = false;
        for (auto s = row.find_first(); s != Bits::npos; s = row.find_next(s)) {
            any = true;
            if (to.test_of[s] != want) {
                v.ok = false;
                v.diagnostic = std::string(label) + ": triple " + from.elements[t] + " reaches " + to.elements[s] +
                               " outside the image test";
                return false;
            }
        }
        if (!any) {
            v.ok = false;
            v.diagnostic = std::string(label) + ": triple " + from.elements[t] + " is related to nothing";
            return false;
        }
    }
    return true;
}

}  // namespace

MultiVerdict multimorphism_check(const MultiMorphism& m, const MultiTestable& a, const MultiTestable& b) {
    require_same(m.r.dom(), a.universe(), "base relation domain");
    require_same(m.r.cod(), b.universe(), "base relation codomain");
    const EtaleSet ea = etale(a), eb = etale(b), ebb = etale_complement(b), eab = etale_complement(a);
    require_same(m.R.dom(), ea.elements, "R domain");
    require_same(m.R.cod(), eb.elements, "R codomain");
    require_same(m.Rbot.dom(), ebb.elements, "Rbot domain");
    require_same(m.Rbot.cod(), eab.elements, "Rbot codomain");
    MultiVerdict v;
    if (!square(m.r, m.R, ea, eb, "forward square", v)) return v;
    square(dagger(m.r), m.Rbot, ebb, eab, "backward square", v);
    return v;
}

MultiMorphism compose_multimorphisms(const MultiMorphism& m1, const MultiMorphism& m2) {
    return {compose(m1.r, m2.r), compose(m1.R, m2.R), compose(m2.Rbot, m1.Rbot)};
}

MultiMorphism identity_multimorphism(const MultiTestable& a) {
    return {FinRel::identity(a.universe()), FinRel::identity(etale(a).elements),
            FinRel::identity(etale_complement(a).elements)};
}

namespace {

std::vector<unsigned> product_omega(const MultiTestable& a, const MultiTestable& b, const ProductIndex& idx) {
    std::vector<unsigned> w(idx.set().size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        auto [i, j] = idx.split(k);
        w[k] = a.omega()[i] * b.omega()[j];
    }
    return w;
}

}  // namespace

MultiTestable multi_tensor(const MultiTestable& a, const MultiTestable& b, const SizeGuard& guard) {
    ProductIndex idx(a.universe(), b.universe());
    return MultiTestable(tensor(a.testable(), b.testable(), guard), product_omega(a, b, idx));
}

MultiStructure multi_structure(const MultiTestable& a, const MultiTestable& b, const SizeGuard& guard) {
    ProductIndex idx(a.universe(), b.universe());
    auto w = product_omega(a, b, idx);
    return {a.star(), MultiTestable(tensor(a.testable(), b.testable(), guard), w),
            MultiTestable(par(a.testable(), b.testable(), guard), w)};
}

MultiMorphism tensor_multimorphisms(const MultiMorphism& m1, const MultiMorphism& m2, const MultiTestable& a1,
                                    const MultiTestable& b1, const MultiTestable& a2, const MultiTestable& b2,
                                    const SizeGuard& guard) {
    const MultiTestable a = multi_tensor(a1, a2, guard);
    const MultiTestable b = multi_tensor(b1, b2, guard);
    const ProductIndex ia(a1.universe(), a2.universe());
    const ProductIndex ib(b1.universe(), b2.universe());
    const EtaleSet e1 = etale(a1), e2 = etale(a2), f1 = etale(b1), f2 = etale(b2);
    const EtaleSet ea = etale(a), eb = etale(b);

    auto tensor_mask = [](Mask x, Mask y, std::size_t nx, std::size_t ny, const ProductIndex& idx) {
        Mask m = 0;
        for (std::size_t i = 0; i < nx; ++i)
            if (x & bit(i))
                for (std::size_t j = 0; j < ny; ++j)
                    if (y & bit(j)) m |= bit(idx(i, j));
        return m;
    };
    // <a,x,i> ⊗ <b,y,j> ↦ <a×b, (x,y), i·ϖ(y) + j>
    auto pair_triple = [&](const EtaleSet& l, std::size_t kl, const EtaleSet& r, std::size_t kr,
                           const MultiTestable& tl, const MultiTestable& tr, const ProductIndex& idx,
                           const EtaleSet& target) {
        const auto& p = l.triples[kl];
        const auto& q = r.triples[kr];
        const Mask m = tensor_mask(l.family[p.test], r.family[q.test], tl.universe().size(), tr.universe().size(), idx);
        return find_triple(target, m, idx(p.element, q.element), p.copy * tr.omega()[q.element] + q.copy);
    };
    auto position = [](const EtaleSet& e) {
        std::vector<std::size_t> inv(e.elements.size());
        for (std::size_t k = 0; k < e.triples.size(); ++k) inv[e.index_of_triple[k]] = k;
        return inv;
    };
    const auto p1 = position(e1), p2 = position(e2), q1 = position(f1), q2 = position(f2);

    std::vector<Bits> rows(ea.elements.size(), Bits(eb.elements.size()));
    for (std::size_t s1 = 0; s1 < e1.elements.size(); ++s1)
        for (std::size_t s2 = 0; s2 < e2.elements.size(); ++s2) {
            const auto src = pair_triple(e1, p1[s1], e2, p2[s2], a1, a2, ia, ea);
            for (auto t1 = m1.R.row(s1).find_first(); t1 != Bits::npos; t1 = m1.R.row(s1).find_next(t1))
                for (auto t2 = m2.R.row(s2).find_first(); t2 != Bits::npos; t2 = m2.R.row(s2).find_next(t2))
                    rows[src].set(pair_triple(f1, q1[t1], f2, q2[t2], b1, b2, ib, eb));
        }

    const FinRel r = tensor(m1.r, m2.r);
    const FinRel rop = dagger(r);
    const EtaleSet bb = etale_complement(b), ab = etale_complement(a);
    std::vector<Bits> brows(bb.elements.size(), Bits(ab.elements.size()));
    for (std::size_t u = 0; u < bb.elements.size(); ++u) {
        const Mask want = image_mask(rop, bb.test_of[u]);
        for (std::size_t v = 0; v < ab.elements.size(); ++v)
            if (ab.test_of[v] == want) brows[u].set(v);
    }
    return {r, FinRel(ea.elements, eb.elements, std::move(rows)), FinRel(bb.elements, ab.elements, std::move(brows))};
}

std::optional<MultiMorphism> maximal_multimorphism(const FinRel& r, const MultiTestable& a, const MultiTestable& b) {
    const EtaleSet ea = etale(a), eb = etale(b), ebb = etale_complement(b), eab = etale_complement(a);
    const FinRel rop = dagger(r);
    auto fill = [](const FinRel& base, const EtaleSet& from, const EtaleSet& to) -> std::optional<FinRel> {
        std::vector<Bits> rows(from.elements.size(), Bits(to.elements.size()));
        for (std::size_t t = 0; t < from.elements.size(); ++t) {
            const Mask want = image_mask(base, from.test_of[t]);
            for (std::size_t s = 0; s < to.elements.size(); ++s)
                if (to.test_of[s] == want) rows[t].set(s);
            if (rows[t].none()) return std::nullopt;
        }
        return FinRel(from.elements, to.elements, std::move(rows));
    };
    auto R = fill(r, ea, eb);
    auto Rb = fill(rop, ebb, eab);
    if (!R || !Rb) return std::nullopt;
    return MultiMorphism{r, std::move(*R), std::move(*Rb)};
}

}  // namespace cqm
