#include "cqm/corpus.hpp"

#include "cqm/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>

namespace cqm::corpus {

FinSet numbered(std::size_t n, const std::string& name) {
    if (n > 10) throw InputError("numbered sets are limited to 10 elements");
    std::vector<Id> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(std::to_string(i));
    return FinSet(name, e);
}

std::vector<Family> all_test_spaces(std::size_t n) {
    std::vector<Family> out;
    if (n == 0 || n > 6) throw InputError("all_test_spaces supports 1..6 elements");
    const Mask top = full_mask(n);
    Family chosen;
    auto rec = [&](auto&& self, Mask next, Mask covered) -> void {
        if (next > top) {
            if (covered == top) out.push_back(chosen);
            return;
        }
        self(self, next + 1, covered);
        for (Mask c : chosen)
            if ((c & next) == c || (c & next) == next) return;
        chosen.push_back(next);
        self(self, next + 1, covered | next);
        chosen.pop_back();
    };
    rec(rec, 1, 0);
    for (auto& f : out) canonicalize(f);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Family> all_partitions(std::size_t n) {
    std::vector<Family> out;
    std::vector<std::size_t> block(n, 0);
    auto rec = [&](auto&& self, std::size_t i, std::size_t used) -> void {
        if (i == n) {
            Family f(used, 0);
            for (std::size_t k = 0; k < n; ++k) f[block[k]] |= bit(k);
            canonicalize(f);
            out.push_back(std::move(f));
            return;
        }
        for (std::size_t b = 0; b <= used; ++b) {
            block[i] = b;
            self(self, i + 1, std::max(used, b + 1));
        }
    };
    if (n == 0) return {Family{}};
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Testable> all_testables(std::size_t n, const SizeGuard& guard) {
    std::vector<Testable> out;
    const FinSet x = numbered(n);
    for (const auto& f : all_test_spaces(n)) {
        TestSpace t(x, f);
        if (is_testable(t, guard).testable) out.push_back(Testable::make(t, guard));
    }
    return out;
}

FinRel random_reflexive_symmetric(std::size_t n, std::mt19937_64& rng, double p) {
    const FinSet x = numbered(n);
    std::bernoulli_distribution coin(p);
    std::vector<Bits> rows(n, Bits(n));
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].set(i);
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng)) {
                rows[i].set(j);
                rows[j].set(i);
            }
    }
    return FinRel(x, x, std::move(rows));
}

Monoid trivial_monoid() { return {"1", {"e"}, 0, {{0}}}; }

Monoid cyclic_monoid(std::size_t n) {
    Monoid m{"Z" + std::to_string(n), {}, 0, {}};
    for (std::size_t i = 0; i < n; ++i) {
        m.elements.push_back(i == 0 ? "e" : "g" + std::to_string(i));
        m.mul.emplace_back();
        for (std::size_t j = 0; j < n; ++j) m.mul[i].push_back((i + j) % n);
    }
    return m;
}

Monoid and_monoid() { return {"AND", {"e", "z"}, 0, {{0, 1}, {1, 1}}}; }

namespace {

std::string arrow_name(std::size_t i, std::size_t j, const Monoid& m, std::size_t k) {
    return std::to_string(i) + ">" + std::to_string(j) + ":" + m.elements[k];
}

std::vector<std::vector<bool>> random_preorder(std::size_t k, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.35);
    std::vector<std::vector<bool>> leq(k, std::vector<bool>(k, false));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) leq[i][j] = i == j || coin(rng);
    for (std::size_t m = 0; m < k; ++m)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (leq[i][m] && leq[m][j]) leq[i][j] = true;
    return leq;
}

std::size_t arrow_count(const std::vector<std::vector<bool>>& leq, const Monoid& m) {
    std::size_t n = 0;
    for (const auto& row : leq) n += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
    return n * m.elements.size();
}

}  // namespace

FinCategory preorder_category(const std::vector<std::vector<bool>>& leq, const Monoid& m) {
    const std::size_t k = leq.size();
    std::vector<Id> objects;
    for (std::size_t i = 0; i < k; ++i) objects.push_back(std::to_string(i));
    std::vector<Arrow> arrows;
    std::map<Id, Id> ids;
    FinCategory::CompTable comp;
    for (std::size_t i = 0; i < k; ++i) {
        ids[objects[i]] = arrow_name(i, i, m, m.unit);
        for (std::size_t j = 0; j < k; ++j) {
            if (!leq[i][j]) continue;
            for (std::size_t a = 0; a < m.elements.size(); ++a) {
                arrows.push_back({arrow_name(i, j, m, a), objects[i], objects[j]});
                for (std::size_t l = 0; l < k; ++l) {
                    if (!leq[j][l]) continue;
                    for (std::size_t b = 0; b < m.elements.size(); ++b)
                        comp[{arrow_name(i, j, m, a), arrow_name(j, l, m, b)}] = arrow_name(i, l, m, m.mul[a][b]);
                }
            }
        }
    }
    return FinCategory(objects, arrows, ids, comp);
}

FinFunctor random_functor(std::mt19937_64& rng, std::size_t max_objects, std::size_t max_arrows) {
    const std::vector<Monoid> monoids{trivial_monoid(), cyclic_monoid(2), cyclic_monoid(3), and_monoid()};
    std::uniform_int_distribution<std::size_t> pick_monoid(0, monoids.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_size(1, max_objects);

    auto sample_side = [&](const Monoid& m) {
        for (;;) {
            auto leq = random_preorder(pick_size(rng), rng);
            if (arrow_count(leq, m) <= max_arrows) return leq;
        }
    };

    const Monoid& src_m = monoids[pick_monoid(rng)];
    // Candidate homomorphisms out of src_m: (target monoid, element map).
    std::vector<std::pair<Monoid, std::vector<std::size_t>>> homs;
    homs.push_back({trivial_monoid(), std::vector<std::size_t>(src_m.elements.size(), 0)});
    if (src_m.elements.size() > 1) {
        std::vector<std::size_t> id(src_m.elements.size());
        for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
        homs.push_back({src_m, id});
        if (src_m.name == "Z3") homs.push_back({src_m, {0, 2, 1}});
        if (src_m.name == "AND") homs.push_back({src_m, {0, 0}});
    }
    std::uniform_int_distribution<std::size_t> pick_hom(0, homs.size() - 1);
    const auto& [dst_m, h] = homs[pick_hom(rng)];

    const auto src = sample_side(src_m);
    const auto dst = sample_side(dst_m);
    const std::size_t k = src.size(), l = dst.size();

    std::vector<std::size_t> f(k, 0);
    std::uniform_int_distribution<std::size_t> pick_obj(0, l - 1);
    bool found = false;
    for (int attempt = 0; attempt < 50 && !found; ++attempt) {
        for (auto& v : f) v = pick_obj(rng);
        found = true;
        for (std::size_t i = 0; i < k && found; ++i)
            for (std::size_t j = 0; j < k && found; ++j)
                if (src[i][j] && !dst[f[i]][f[j]]) found = false;
    }
    if (!found) std::fill(f.begin(), f.end(), 0);

    FinCategory c = preorder_category(src, src_m);
    FinCategory d = preorder_category(dst, dst_m);
    std::map<Id, Id> ob, ar;
    for (std::size_t i = 0; i < k; ++i) {
        ob[std::to_string(i)] = std::to_string(f[i]);
        for (std::size_t j = 0; j < k; ++j) {
            if (!src[i][j]) continue;
            for (std::size_t a = 0; a < src_m.elements.size(); ++a)
                ar[arrow_name(i, j, src_m, a)] = arrow_name(f[i], f[j], dst_m, h[a]);
        }
    }
    return FinFunctor(c, d, ob, ar);
}

LaxSpec chain_spec() {
    std::vector<std::vector<bool>> leq(4, std::vector<bool>(4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) leq[i][j] = i <= j;
    const Monoid z2 = cyclic_monoid(2), one = trivial_monoid();
    FinCategory total = preorder_category(leq, z2);
    FinCategory base = preorder_category(leq, one);
    std::map<Id, Id> ob, ar;
    for (std::size_t i = 0; i < 4; ++i) {
        ob[std::to_string(i)] = std::to_string(i);
        for (std::size_t j = i; j < 4; ++j)
            for (std::size_t a = 0; a < 2; ++a) ar[arrow_name(i, j, z2, a)] = arrow_name(i, j, one, 0);
    }
    return specification_of_functor(FinFunctor(total, base, ob, ar));
}

std::vector<LaxSpec> mu_mutants(const LaxSpec& spec, std::size_t count, std::mt19937_64& rng) {
    std::vector<std::pair<LaxSpec::MuKey, LaxSpec::MuKey>> candidates;
    for (auto a = spec.mu.begin(); a != spec.mu.end(); ++a)
        for (auto b = std::next(a); b != spec.mu.end(); ++b) {
            if (std::get<0>(a->first) != std::get<0>(b->first) || std::get<1>(a->first) != std::get<1>(b->first))
                continue;
            if (a->second != b->second) candidates.emplace_back(a->first, b->first);
        }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    if (candidates.size() > count) candidates.resize(count);
    std::vector<LaxSpec> out;
    for (const auto& [a, b] : candidates) {
        LaxSpec m = spec;
        std::swap(m.mu.at(a), m.mu.at(b));
        out.push_back(std::move(m));
    }
    return out;
}

BellInstance bell_instance() {
    return {Testable::make(numbered(2, "X"), Family{0b11}), Testable::make(numbered(2, "Y"), Family{0b01, 0b10})};
}

namespace {

Ray ray(std::initializer_list<Complex> xs) {
    CVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v(i++) = x;
    return Ray::from_vector(v);
}

}  // namespace

RayDict pauli6() {
    const double s = 1.0 / std::numbers::sqrt2;
    const Complex i(0.0, 1.0);
    return RayDict("pauli6", 2,
                   {ray({1, 0}), ray({0, 1}), ray({s, s}), ray({s, -s}), ray({s, s * i}), ray({s, -s * i})});
}

RayDict mub3() {
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const double s = 1.0 / std::sqrt(3.0);
    std::vector<Ray> rays{ray({1, 0, 0}), ray({0, 1, 0}), ray({0, 0, 1})};
    for (int l = 0; l < 3; ++l)
        for (int k = 0; k < 3; ++k) {
            CVector v(3);
            for (int j = 0; j < 3; ++j) v(j) = s * std::pow(w, (k * j + l * j * j) % 3);
            rays.push_back(Ray::from_vector(v));
        }
    return RayDict("mub3", 3, std::move(rays));
}

Ray bell_phi_plus() {
    const double s = 1.0 / std::numbers::sqrt2;
    return ray({s, 0, 0, s});
}

Ray bell_psi_plus() {
    const double s = 1.0 / std::numbers::sqrt2;
    return ray({0, s, s, 0});
}

RayDict pauli18() {
    const RayDict p = pauli6();
    const RaySet zc = c_complement(kZ, 1.0 / std::numbers::sqrt2, p);
    std::vector<Ray> rays;
    for (auto i : zc)
        for (auto j : zc) rays.push_back(kron(p[i], p[j]));
    rays.push_back(bell_phi_plus());
    rays.push_back(bell_psi_plus());
    return RayDict("pauli18", 4, std::move(rays));
}

namespace {

AlgebraData algebra_of(std::size_t n, const std::function<std::size_t(std::size_t, std::size_t)>& op) {
    const FinSet x = numbered(n);
    ProductIndex p(x, x);
    std::vector<std::size_t> targets(p.set().size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        auto [a, b] = p.split(k);
        targets[k] = op(a, b);
    }
    return AlgebraData::of_multiplication(FinRel::graph(p.set(), x, targets));
}

}  // namespace

AlgebraData first_projection_algebra(std::size_t n) {
    return algebra_of(n, [](std::size_t a, std::size_t) { return a; });
}

AlgebraData constant_algebra(std::size_t n) {
    return algebra_of(n, [](std::size_t, std::size_t) { return std::size_t{0}; });
}

}  // namespace cqm::corpus
