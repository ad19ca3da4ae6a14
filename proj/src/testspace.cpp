#include "cqm/testspace.hpp"

#include "cqm/error.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace cqm {

namespace {

std::string mask_text(const FinSet& x, Mask m) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(m & bit(i))) continue;
        if (!first) out += ',';
        out += x[i];
        first = false;
    }
    return out + "}";
}

template <typename F>
void for_each_bit(Mask m, F&& f) {
    while (m) {
        auto i = static_cast<std::size_t>(std::countr_zero(m));
        f(i);
        m &= m - 1;
    }
}

std::vector<Mask> row_masks(const FinRel& r) {
    if (r.cod().size() > kMaxUniverse) throw SizeGuardError("relation codomain exceeds 64 elements");
    std::vector<Mask> out(r.dom().size(), 0);
    for (std::size_t i = 0; i < out.size(); ++i)
        for (auto j = r.row(i).find_first(); j != Bits::npos; j = r.row(i).find_next(j)) out[i] |= bit(j);
    return out;
}

}  // namespace

void SizeGuard::check(std::size_t elements, std::size_t tests, const char* what) const {
    if (elements > max_elements || elements > kMaxUniverse)
        throw SizeGuardError(std::string(what) + ": universe of " + std::to_string(elements) +
                             " elements exceeds the size guard of " + std::to_string(max_elements));
    if (tests > max_tests)
        throw SizeGuardError(std::string(what) + ": family of " + std::to_string(tests) +
                             " tests exceeds the size guard of " + std::to_string(max_tests));
}

void canonicalize(Family& family) {
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
}

bool is_covered(std::size_t n, std::span<const Mask> family) {
    Mask u = 0;
    for (auto a : family) u |= a;
    return u == full_mask(n);
}

bool is_irredundant(std::span<const Mask> family) {
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = 0; j < family.size(); ++j)
            if (i != j && (family[i] & ~family[j]) == 0) return false;
    return true;
}

TestSpace::TestSpace(FinSet universe, Family tests) : universe_(std::move(universe)), tests_(std::move(tests)) {
    if (universe_.size() > kMaxUniverse)
        throw SizeGuardError("test space universe '" + universe_.name() + "' exceeds 64 elements");
    canonicalize(tests_);
    const Mask all = full_mask(universe_.size());
    for (auto a : tests_)
        if (a & ~all) throw InputError("test lies outside the universe '" + universe_.name() + "'");
    if (!is_covered(universe_.size(), tests_))
        throw InputError("tests do not cover the universe '" + universe_.name() + "'");
    for (std::size_t i = 0; i < tests_.size(); ++i)
        for (std::size_t j = 0; j < tests_.size(); ++j)
            if (i != j && (tests_[i] & ~tests_[j]) == 0)
                throw InputError("not irredundant: test " + mask_text(universe_, tests_[i]) + " is contained in " +
                                 mask_text(universe_, tests_[j]));
}

TestSpace TestSpace::from_names(FinSet universe, const std::vector<std::vector<Id>>& tests) {
    Family family;
    for (const auto& t : tests) {
        Mask m = 0;
        for (const auto& x : t) m |= bit(universe.require_index(x));
        family.push_back(m);
    }
    return TestSpace(std::move(universe), std::move(family));
}

std::vector<Id> TestSpace::named(Mask m) const {
    std::vector<Id> out;
    for_each_bit(m, [&](std::size_t i) { out.push_back(universe_[i]); });
    return out;
}

std::vector<std::vector<Id>> TestSpace::named_tests() const {
    std::vector<std::vector<Id>> out;
    for (auto a : tests_) out.push_back(named(a));
    std::sort(out.begin(), out.end());
    return out;
}

Family complement_family(std::size_t n, std::span<const Mask> family, const SizeGuard& guard) {
    guard.check(n, family.size(), "complement");
    if (family.empty()) return {};

    // conflict[x]: elements sharing a member with x. Choosing x rules them out.
    std::vector<Mask> conflict(n, 0);
    Mask covered = 0;
    for (auto a : family) {
        covered |= a;
        for_each_bit(a, [&](std::size_t x) { conflict[x] |= a; });
    }
    for (std::size_t x = 0; x < n; ++x) conflict[x] &= ~bit(x);
    // Elements outside every member never break the one-per-member condition,
    // so maximality puts all of them into every transversal.
    const Mask free = full_mask(n) & ~covered;

    Family found;
    auto search = [&](auto&& self, Mask u, Mask blocked) -> void {
        const Mask* next = nullptr;
        for (const auto& a : family) {
            if (a & u) continue;
            // An unhit member all of whose elements are blocked is a dead end.
            if ((a & ~blocked) == 0) return;
            if (!next) next = &a;
        }
        if (!next) {
            found.push_back(u | free);
            return;
        }
        for_each_bit(*next & ~blocked, [&](std::size_t x) { self(self, u | bit(x), blocked | conflict[x]); });
    };
    search(search, 0, 0);

    canonicalize(found);
    Family maximal;
    for (auto u : found) {
        bool dominated = std::any_of(found.begin(), found.end(), [u](Mask v) { return v != u && (u & ~v) == 0; });
        if (!dominated) maximal.push_back(u);
    }
    return maximal;
}

Family complement(const TestSpace& alpha, const SizeGuard& guard) {
    return complement_family(alpha.universe().size(), alpha.tests(), guard);
}

TestabilityCertificate is_testable(const TestSpace& alpha, const SizeGuard& guard) {
    TestabilityCertificate cert;
    const auto n = alpha.universe().size();
    cert.complement = complement(alpha, guard);
    if (!is_covered(n, cert.complement)) {
        cert.reason = "complement does not cover the universe";
        return cert;
    }
    if (!is_irredundant(cert.complement)) {
        cert.reason = "complement is not irredundant";
        return cert;
    }
    cert.double_complement = complement_family(n, cert.complement, guard);
    if (cert.double_complement != alpha.tests()) {
        cert.reason = "double complement differs from the family";
        return cert;
    }
    cert.testable = true;
    return cert;
}

NotTestable::NotTestable(const std::string& what, FinSet universe, Family family, TestabilityCertificate certificate)
    : std::runtime_error(what + ": " + certificate.reason),
      universe_(std::move(universe)),
      family_(std::move(family)),
      certificate_(std::move(certificate)) {}

Testable::Testable(TestSpace space, TestSpace complement)
    : space_(std::move(space)), complement_(std::move(complement)) {}

Testable Testable::make(const TestSpace& space, const SizeGuard& guard) {
    auto cert = is_testable(space, guard);
    if (!cert.testable) throw NotTestable("not a testable", space.universe(), space.tests(), std::move(cert));
    return Testable(space, TestSpace(space.universe(), cert.complement));
}

Testable Testable::make(const FinSet& universe, const Family& raw, const SizeGuard& guard) {
    Family family = raw;
    canonicalize(family);
    if (!is_covered(universe.size(), family) || !is_irredundant(family)) {
        TestabilityCertificate cert;
        cert.reason = "family is not a test space";
        throw NotTestable("not a testable", universe, family, std::move(cert));
    }
    return make(TestSpace(universe, family), guard);
}

Testable Testable::unit() {
    auto one = FinSet::point();
    return Testable(TestSpace(one, {bit(0)}), TestSpace(one, {bit(0)}));
}

Testable Testable::star() const { return Testable(complement_, space_); }

Family tensor_family(const TestSpace& alpha, const TestSpace& beta, const ProductIndex& idx) {
    Family out;
    for (auto a : alpha.tests())
        for (auto b : beta.tests()) {
            Mask m = 0;
            for_each_bit(a, [&](std::size_t i) { for_each_bit(b, [&](std::size_t j) { m |= bit(idx(i, j)); }); });
            out.push_back(m);
        }
    canonicalize(out);
    return out;
}

Family par_family(const Testable& a, const Testable& b, const ProductIndex& idx, const SizeGuard& guard) {
    auto dual = tensor_family(a.complement(), b.complement(), idx);
    return complement_family(idx.set().size(), dual, guard);
}

namespace {

ProductIndex product_index(const Testable& a, const Testable& b) {
    if (a.universe().size() * b.universe().size() > kMaxUniverse)
        throw SizeGuardError("product universe exceeds 64 elements");
    return ProductIndex(a.universe(), b.universe());
}

}  // namespace

Testable tensor(const Testable& a, const Testable& b, const SizeGuard& guard) {
    auto idx = product_index(a, b);
    auto family = tensor_family(a.space(), b.space(), idx);
    try {
        return Testable::make(idx.set(), family, guard);
    } catch (const NotTestable& e) {
        throw NotTestable("tensor is not a testable", idx.set(), family, e.certificate());
    }
}

Testable par(const Testable& a, const Testable& b, const SizeGuard& guard) {
    auto idx = product_index(a, b);
    auto family = par_family(a, b, idx, guard);
    try {
        return Testable::make(idx.set(), family, guard);
    } catch (const NotTestable& e) {
        throw NotTestable("par is not a testable", idx.set(), family, e.certificate());
    }
}

Family relabel(std::span<const Mask> family, std::span<const std::size_t> index_map) {
    Family out;
    for (auto a : family) {
        Mask m = 0;
        for_each_bit(a, [&](std::size_t i) { m |= bit(index_map[i]); });
        out.push_back(m);
    }
    canonicalize(out);
    return out;
}

Mask image_mask(const FinRel& r, Mask a) {
    Mask out = 0;
    for_each_bit(a, [&](std::size_t i) {
        const auto& row = r.row(i);
        for (auto j = row.find_first(); j != Bits::npos; j = row.find_next(j)) out |= bit(j);
    });
    return out;
}

MorphismVerdict morphism_check(const FinRel& r, const Testable& a, const Testable& b) {
    if (!(r.dom() == a.universe())) throw DomainMismatch("relation domain", r.dom().name(), a.universe().name());
    if (!(r.cod() == b.universe())) throw DomainMismatch("relation codomain", r.cod().name(), b.universe().name());
    const auto fwd = row_masks(r);
    const auto bwd = row_masks(dagger(r));
    auto img = [](const std::vector<Mask>& rows, Mask s) {
        Mask out = 0;
        for_each_bit(s, [&](std::size_t i) { out |= rows[i]; });
        return out;
    };
    auto member = [](const Family& f, Mask m) { return std::binary_search(f.begin(), f.end(), m); };

    for (auto t : a.tests()) {
        auto im = img(fwd, t);
        if (!member(b.tests(), im))
            return {false, "image of test " + mask_text(a.universe(), t) + " is " + mask_text(b.universe(), im) +
                               ", not a test of the codomain"};
    }
    for (auto t : b.complement().tests()) {
        auto im = img(bwd, t);
        if (!member(a.complement().tests(), im))
            return {false, "converse image of co-test " + mask_text(b.universe(), t) + " is " +
                               mask_text(a.universe(), im) + ", not a co-test of the domain"};
    }
    return {};
}

Family maximal_cliques(const FinRel& r) {
    const auto n = r.dom().size();
    auto rows = row_masks(r);
    for (std::size_t i = 0; i < n; ++i) rows[i] &= ~bit(i);
    Family out;
    auto bron_kerbosch = [&](auto&& self, Mask clique, Mask candidates, Mask excluded) -> void {
        if (!candidates && !excluded) {
            out.push_back(clique);
            return;
        }
        // Pivot on the vertex with most neighbours among the candidates.
        std::size_t pivot = 0;
        int best = -1;
        for_each_bit(candidates | excluded, [&](std::size_t u) {
            int c = std::popcount(candidates & rows[u]);
            if (c > best) {
                best = c;
                pivot = u;
            }
        });
        for_each_bit(candidates & ~rows[pivot], [&](std::size_t v) {
            self(self, clique | bit(v), candidates & rows[v], excluded & rows[v]);
            candidates &= ~bit(v);
            excluded |= bit(v);
        });
    };
    if (n > 0) bron_kerbosch(bron_kerbosch, 0, full_mask(n), 0);
    canonicalize(out);
    return out;
}

Testable clique_testable(const FinRel& r, const SizeGuard& guard) {
    if (!(r.dom() == r.cod())) throw DomainMismatch("clique relation must be an endo-relation", r.dom().name(), r.cod().name());
    for (std::size_t i = 0; i < r.dom().size(); ++i) {
        if (!r.holds(i, i)) throw InputError("relation is not reflexive at '" + r.dom()[i] + "'");
        for (std::size_t j = 0; j < r.dom().size(); ++j)
            if (r.holds(i, j) != r.holds(j, i))
                throw InputError("relation is not symmetric at ('" + r.dom()[i] + "','" + r.dom()[j] + "')");
    }
    auto cliques = maximal_cliques(r);
    try {
        return Testable::make(r.dom(), cliques, guard);
    } catch (const NotTestable& e) {
        throw NotTestable("maximal cliques are not a testable", r.dom(), cliques, e.certificate());
    }
}

std::vector<Vector> enumerate_vectors(const Testable& a, const std::optional<ProductFactors>& factors,
                                      const SizeGuard& guard) {
    const auto& x = a.universe();
    guard.check(x.size(), a.tests().size(), "enumerate_vectors");
    const auto unit = Testable::unit();

    std::set<Mask> products;
    if (factors) {
        ProductIndex idx(factors->left.universe(), factors->right.universe());
        if (!(idx.set() == x)) throw DomainMismatch("declared factors do not multiply to the universe", idx.set().name(), x.name());
        auto fam = tensor_family(factors->left.space(), factors->right.space(), idx);
        products.insert(fam.begin(), fam.end());
    }

    std::vector<Vector> out;
    const Mask limit = full_mask(x.size());
    for (Mask v = 0;; ++v) {
        std::vector<Bits> rows{Bits(x.size())};
        for_each_bit(v, [&](std::size_t i) { rows[0].set(i); });
        FinRel rel(unit.universe(), x, std::move(rows));
        if (morphism_check(rel, unit, a).ok) {
            Vector vec{v, std::nullopt};
            if (factors) vec.separable = products.contains(v);
            out.push_back(vec);
        }
        if (v == limit) break;
    }
    return out;
}

bool is_partition(const TestSpace& beta) {
    Mask seen = 0;
    for (auto b : beta.tests()) {
        if (b == 0 || (seen & b)) return false;
        seen |= b;
    }
    return true;
}

ComplementaryBasesReport complementary_bases(const TestSpace& beta, const SizeGuard& guard) {
    if (!is_partition(beta)) throw InputError("complementary_bases needs a partition");
    ComplementaryBasesReport report;
    const auto n = beta.universe().size();
    report.complement = complement(beta, guard);

    std::set<int> sizes;
    for (auto b : beta.tests()) sizes.insert(std::popcount(b));
    report.rectangular = sizes.size() <= 1 &&
                         (beta.tests().empty() ? n == 0
                                               : n == static_cast<std::size_t>(*sizes.begin()) * beta.tests().size());

    // Exact covers of X by members of β⊥: always extend at the lowest uncovered element.
    const Mask all = full_mask(n);
    Family chosen;
    auto search = [&](auto&& self, Mask covered) -> void {
        if (covered == all) {
            Family basis = chosen;
            canonicalize(basis);
            report.bases.push_back(std::move(basis));
            return;
        }
        auto lowest = bit(static_cast<std::size_t>(std::countr_zero(~covered & all)));
        for (auto p : report.complement) {
            if (!(p & lowest) || (p & covered)) continue;
            chosen.push_back(p);
            self(self, covered | p);
            chosen.pop_back();
        }
    };
    if (n > 0) search(search, 0);
    std::sort(report.bases.begin(), report.bases.end());

    for (const auto& basis : report.bases) {
        std::set<int> block_sizes;
        for (auto c : basis) block_sizes.insert(std::popcount(c));
        report.shapes.emplace_back(basis.size(), block_sizes.size() == 1 ? *block_sizes.begin() : 0);
    }
    return report;
}

}  // namespace cqm
