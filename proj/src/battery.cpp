#include "cqm/battery.hpp"

#include "cqm/axioms.hpp"
#include "cqm/comprehension.hpp"
#include "cqm/corpus.hpp"
#include "cqm/error.hpp"
#include "cqm/fhilb.hpp"
#include "cqm/json_io.hpp"
#include "cqm/multitest.hpp"
#include "cqm/qprob.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

namespace cqm {

using nlohmann::json;

Family complement_oracle(std::size_t n, const Family& family) {
    Family hits;
    for (Mask u = 0; u <= full_mask(n); ++u) {
        bool ok = true;
        for (Mask a : family)
            if (std::popcount(u & a) != 1) {
                ok = false;
                break;
            }
        if (ok) hits.push_back(u);
        if (u == full_mask(n)) break;
    }
    Family out;
    for (Mask u : hits) {
        bool maximal = true;
        for (Mask v : hits)
            if (v != u && (u & v) == u) maximal = false;
        if (maximal) out.push_back(u);
    }
    canonicalize(out);
    return out;
}

namespace {

CriterionResult named(int id, std::string name) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    return r;
}

std::mt19937_64 rng_for(const BatteryConfig& c, int id) {
    std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                      static_cast<std::uint32_t>(id)};
    return std::mt19937_64(seq);
}

json names_of(const FinSet& x, const Family& f) { return io::family_json(x, f); }

// 1. Random functors: roundtrip and faithful ⇔ relational.
CriterionResult comprehension_roundtrip(const BatteryConfig& c) {
    CriterionResult r = named(1, "comprehension roundtrip");
    auto rng = rng_for(c, 1);
    std::size_t ok = 0, faithful = 0, mismatches = 0, roundtrip_failures = 0;
    json first_failure;
    const std::size_t total = 200;
    for (std::size_t i = 0; i < total; ++i) {
        FinFunctor e = corpus::random_functor(rng);
        const auto rep = roundtrip_check(e);
        const bool f = is_faithful(e);
        const bool rel = is_relational(specification_of_functor(e));
        faithful += f;
        if (!rep.pass) ++roundtrip_failures;
        if (f != rel) ++mismatches;
        if (rep.pass && f == rel)
            ++ok;
        else if (first_failure.is_null())
            first_failure = {{"index", i}, {"report", to_json(rep)}, {"faithful", f}, {"relational", rel}};
    }
    r.pass = ok == total;
    r.details = {{"functors", total},          {"passed", ok},
                 {"faithful", faithful},        {"roundtrip_failures", roundtrip_failures},
                 {"faithful_relational_mismatches", mismatches}};
    if (!first_failure.is_null()) r.details["first_failure"] = first_failure;
    r.summary = std::to_string(ok) + "/" + std::to_string(total) + " functors pass, " + std::to_string(faithful) +
                " faithful";
    return r;
}

// 2. Every μ-permutation mutant is caught with a located failure.
CriterionResult lax_sensitivity(const BatteryConfig& c) {
    CriterionResult r = named(2, "lax coherence sensitivity");
    auto rng = rng_for(c, 2);
    const LaxSpec base = corpus::chain_spec();
    const bool base_ok = verify_lax(base).pass;
    const auto mutants = corpus::mu_mutants(base, 50, rng);
    std::size_t caught = 0;
    json kinds = json::object();
    json sample;
    for (const auto& m : mutants) {
        const auto rep = verify_lax(m);
        const bool located = !rep.failures.empty() &&
                             std::all_of(rep.failures.begin(), rep.failures.end(),
                                         [](const Failure& f) { return !f.location.empty(); });
        if (!rep.pass && located) {
            ++caught;
            kinds[rep.failures.front().kind] = kinds.value(rep.failures.front().kind, 0) + 1;
            if (sample.is_null()) sample = {{"kind", rep.failures.front().kind}, {"location", rep.failures.front().location}};
        }
    }
    r.pass = base_ok && mutants.size() == 50 && caught == mutants.size();
    r.details = {{"base_coherent", base_ok}, {"mutants", mutants.size()}, {"caught", caught}, {"first_failure_kinds", kinds}};
    if (!sample.is_null()) r.details["sample"] = sample;
    r.summary = std::to_string(caught) + "/" + std::to_string(mutants.size()) + " mutants caught";
    return r;
}

// 3. complement() against the brute-force oracle on every test space, |X| ≤ 5.
CriterionResult complement_vs_oracle(const BatteryConfig& c) {
    CriterionResult r = named(3, "complement oracle");
    std::size_t spaces = 0, discrepancies = 0;
    json per_size = json::object(), first;
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto all = corpus::all_test_spaces(n);
        per_size[std::to_string(n)] = all.size();
        for (const auto& f : all) {
            ++spaces;
            if (complement_family(n, f, c.guard) != complement_oracle(n, f)) {
                ++discrepancies;
                if (first.is_null()) first = names_of(corpus::numbered(n), f);
            }
        }
    }
    r.pass = discrepancies == 0;
    r.details = {{"test_spaces", spaces}, {"per_size", per_size}, {"discrepancies", discrepancies}};
    if (!first.is_null()) r.details["first_discrepancy"] = first;
    r.summary = std::to_string(discrepancies) + " discrepancies over " + std::to_string(spaces) + " test spaces";
    return r;
}

// 4. Double complement on partitions and on clique families.
CriterionResult double_complement(const BatteryConfig& c) {
    CriterionResult r = named(4, "double complement");
    std::size_t partitions = 0, partition_failures = 0;
    for (std::size_t n = 1; n <= 7; ++n)
        for (const auto& beta : corpus::all_partitions(n)) {
            ++partitions;
            auto cc = complement_family(n, complement_family(n, beta, c.guard), c.guard);
            if (cc != beta) ++partition_failures;
        }
    auto rng = rng_for(c, 4);
    std::uniform_int_distribution<std::size_t> size(1, 6);
    std::size_t relations = 0, clique_failures = 0;
    json first;
    for (int i = 0; i < 500; ++i) {
        const FinRel rel = corpus::random_reflexive_symmetric(size(rng), rng);
        ++relations;
        const std::size_t n = rel.dom().size();
        const Family cliques = maximal_cliques(rel);
        const auto cert = is_testable(TestSpace(rel.dom(), cliques), c.guard);
        if (cert.double_complement != cliques || !cert.testable) {
            ++clique_failures;
            if (first.is_null())
                first = {{"universe", n},
                         {"relation", io::to_json(rel)["pairs"]},
                         {"cliques", names_of(rel.dom(), cliques)},
                         {"complement", names_of(rel.dom(), cert.complement)},
                         {"double_complement", names_of(rel.dom(), cert.double_complement)}};
        }
    }
    r.pass = partition_failures == 0 && clique_failures == 0;
    r.details = {{"partitions", partitions},
                 {"partition_failures", partition_failures},
                 {"clique_relations", relations},
                 {"clique_failures", clique_failures}};
    if (!first.is_null()) r.details["first_clique_counterexample"] = first;
    r.summary = std::to_string(partition_failures) + " partition and " + std::to_string(clique_failures) + "/" +
                std::to_string(relations) + " clique failures";
    return r;
}

// 5. Rectangular criterion on all partitions, |X| ≤ 8.
CriterionResult rectangular(const BatteryConfig& c) {
    CriterionResult r = named(5, "rectangular criterion");
    std::size_t partitions = 0, disagreements = 0, shape_errors = 0, rectangular_count = 0;
    for (std::size_t n = 1; n <= 8; ++n) {
        const FinSet x = corpus::numbered(n);
        for (const auto& beta : corpus::all_partitions(n)) {
            ++partitions;
            const auto rep = complementary_bases(TestSpace(x, beta), c.guard);
            rectangular_count += rep.rectangular;
            if (rep.rectangular != !rep.bases.empty()) ++disagreements;
            if (rep.rectangular) {
                const std::size_t b = n / beta.size();
                for (const auto& [blocks, block_size] : rep.shapes)
                    if (blocks != b || block_size != beta.size()) ++shape_errors;
            }
        }
    }
    r.pass = disagreements == 0 && shape_errors == 0;
    r.details = {{"partitions", partitions},
                 {"rectangular", rectangular_count},
                 {"disagreements", disagreements},
                 {"shape_errors", shape_errors}};
    r.summary = std::to_string(disagreements) + " disagreements over " + std::to_string(partitions) + " partitions";
    return r;
}

// 6. Vectors of the Bell instance.
CriterionResult entanglement(const BatteryConfig& c) {
    CriterionResult r = named(6, "entanglement separation");
    const auto bell = corpus::bell_instance();
    const ProductFactors factors{bell.crudest, bell.finest};
    const Testable t = tensor(bell.crudest, bell.finest, c.guard);
    const Testable p = par(bell.crudest, bell.finest, c.guard);
    const auto tv = enumerate_vectors(t, factors, c.guard);
    const auto pv = enumerate_vectors(p, factors, c.guard);
    auto count = [](const std::vector<Vector>& vs, bool sep) {
        return static_cast<std::size_t>(
            std::count_if(vs.begin(), vs.end(), [&](const Vector& v) { return v.separable == sep; }));
    };
    Family entangled;
    for (const auto& v : pv)
        if (v.separable == false) entangled.push_back(v.subset);
    const FinSet& xy = p.universe();
    const Family expected{bit(xy.require_index("(0,0)")) | bit(xy.require_index("(1,1)")),
                          bit(xy.require_index("(0,1)")) | bit(xy.require_index("(1,0)"))};
    Family want = expected;
    canonicalize(want);
    canonicalize(entangled);
    r.pass = tv.size() == 2 && count(tv, true) == 2 && pv.size() == 4 && count(pv, false) == 2 && entangled == want;
    r.details = {{"tensor_vectors", tv.size()},
                 {"tensor_separable", count(tv, true)},
                 {"par_vectors", pv.size()},
                 {"par_entangled", count(pv, false)},
                 {"entangled", names_of(xy, entangled)}};
    r.summary = "tensor " + std::to_string(tv.size()) + " vectors, par " + std::to_string(pv.size()) + " with " +
                std::to_string(count(pv, false)) + " entangled";
    return r;
}

// All relations between each pair of testables that pass morphism_check.
std::vector<std::vector<std::vector<FinRel>>> testable_homs(const std::vector<Testable>& objs) {
    const std::size_t k = objs.size();
    std::vector<std::vector<std::vector<FinRel>>> hom(k, std::vector<std::vector<FinRel>>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const auto& x = objs[i].universe();
            const auto& y = objs[j].universe();
            const std::size_t cells = x.size() * y.size();
            for (Mask m = 0; m < (Mask{1} << cells); ++m) {
                std::vector<Bits> rows(x.size(), Bits(y.size()));
                for (std::size_t b = 0; b < cells; ++b)
                    if (m & bit(b)) rows[b / y.size()].set(b % y.size());
                FinRel rel(x, y, std::move(rows));
                if (morphism_check(rel, objs[i], objs[j]).ok) hom[i][j].push_back(std::move(rel));
            }
        }
    return hom;
}

// 7. Category laws, star laws, and mix/distributivity tallies over |X| ≤ 3.
CriterionResult star_category(const BatteryConfig& c) {
    CriterionResult r = named(7, "category and star laws");
    std::vector<Testable> objs;
    for (std::size_t n = 1; n <= 3; ++n) {
        auto t = corpus::all_testables(n, c.guard);
        objs.insert(objs.end(), t.begin(), t.end());
    }
    const std::size_t k = objs.size();
    const auto hom = testable_homs(objs);
    std::size_t relations_checked = 0, identity_failures = 0, closure_failures = 0, compositions = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            relations_checked += Mask{1} << (objs[i].universe().size() * objs[j].universe().size());
    std::size_t homs = 0;
    for (const auto& row : hom)
        for (const auto& h : row) homs += h.size();
    for (std::size_t i = 0; i < k; ++i)
        if (!morphism_check(FinRel::identity(objs[i].universe()), objs[i], objs[i]).ok) ++identity_failures;
    json first_closure;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < k; ++l)
                for (const auto& f : hom[i][j])
                    for (const auto& g : hom[j][l]) {
                        ++compositions;
                        if (!morphism_check(compose(f, g), objs[i], objs[l]).ok) {
                            ++closure_failures;
                            if (first_closure.is_null())
                                first_closure = {{"f", io::to_json(f)}, {"g", io::to_json(g)}};
                        }
                    }

    std::size_t star_checks = 0, star_failures = 0, star_skipped = 0;
    json first_star;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            ++star_checks;
            VerificationReport rep;
            try {
                rep = check_star_object_laws(objs[i], objs[j], c.guard);
            } catch (const SizeGuardError&) {
                ++star_skipped;
                continue;
            }
            if (!rep.pass) {
                ++star_failures;
                if (first_star.is_null()) first_star = to_json(rep);
            }
        }

    json mix = {{"pass", 0}, {"fail", 0}, {"not_testable", 0}};
    json dist = {{"pass", 0}, {"fail", 0}, {"not_testable", 0}, {"skipped_by_guard", 0}};
    json mix_counterexample, dist_counterexample;
    auto tally = [](json& t, const VerificationReport& rep, const std::string& kind, json& keep, const json& who) {
        bool nt = false, bad = false;
        for (const auto& f : rep.failures) {
            if (f.kind == "not_testable" && f.location == kind) nt = true;
            if (f.kind == kind) bad = true;
        }
        const char* key = nt ? "not_testable" : bad ? "fail" : "pass";
        t[key] = t[key].get<std::size_t>() + 1;
        if ((nt || bad) && keep.is_null()) keep = who;
    };
    // Triples over three-element universes reach 27 elements; the search is
    // small enough to run them all.
    const SizeGuard wide{std::max<std::size_t>(c.guard.max_elements, 27),
                         std::max<std::size_t>(c.guard.max_tests, std::size_t{1} << 16)};
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t l = 0; l < k; ++l) {
                const std::size_t n = objs[i].universe().size() * objs[j].universe().size() * objs[l].universe().size();
                json who = {{"A", io::to_json(objs[i].space())},
                            {"B", io::to_json(objs[j].space())},
                            {"C", io::to_json(objs[l].space())}};
                if (n > wide.max_elements) {
                    dist["skipped_by_guard"] = dist["skipped_by_guard"].get<std::size_t>() + 1;
                    if (l == 0) {
                        const auto rep = check_mix_and_distributivity(objs[i], objs[j], Testable::unit(), wide);
                        tally(mix, rep, "mix", mix_counterexample, who);
                    }
                    continue;
                }
                VerificationReport rep;
                try {
                    rep = check_mix_and_distributivity(objs[i], objs[j], objs[l], wide);
                } catch (const SizeGuardError&) {
                    dist["skipped_by_guard"] = dist["skipped_by_guard"].get<std::size_t>() + 1;
                    continue;
                }
                if (l == 0) tally(mix, rep, "mix", mix_counterexample, who);
                tally(dist, rep, "distributivity", dist_counterexample, who);
            }
        }
    r.pass = identity_failures == 0 && closure_failures == 0 && star_failures == 0;
    r.details = {{"testables", k},
                 {"relations_checked", relations_checked},
                 {"identity_failures", identity_failures},
                 {"compositions", compositions},
                 {"closure_failures", closure_failures},
                 {"star_law_pairs", star_checks},
                 {"star_law_failures", star_failures},
                 {"star_law_skipped_by_guard", star_skipped},
                 {"morphisms", homs},
                 {"mix_tally", mix},
                 {"distributivity_tally", dist}};
    if (!first_closure.is_null()) r.details["first_closure_failure"] = first_closure;
    if (!first_star.is_null()) r.details["first_star_failure"] = first_star;
    if (!mix_counterexample.is_null()) r.details["mix_counterexample"] = mix_counterexample;
    if (!dist_counterexample.is_null()) r.details["distributivity_counterexample"] = dist_counterexample;
    r.summary = std::to_string(k) + " testables, " + std::to_string(compositions) + " compositions, " +
                std::to_string(closure_failures + identity_failures + star_failures) + " law failures";
    return r;
}

// 8. Pauli dictionary classifications.
CriterionResult hilbert_testables(const BatteryConfig& c) {
    CriterionResult r = named(8, "hilbert testables");
    const RayDict p6 = corpus::pauli6();
    const auto cert = is_hilb_testable(corpus::kZ, 1.0 / std::numbers::sqrt2, p6, c.eps);
    const RaySet xy{2, 3, 4, 5};
    const bool main_ok = cert.testable && cert.complement == xy;

    const RayDict d1("C1", 1, {Ray::from_vector(CVector::Ones(1))});
    const std::vector<RayDict> dicts{d1, p6, corpus::mub3()};
    std::size_t c0_testable = 0, c1_testable = 0, c1_expected = 0, subsets = 0;
    for (const auto& d : dicts) {
        for (Mask m = 0; m < (Mask{1} << d.size()); ++m) {
            RaySet alpha;
            for (std::size_t i = 0; i < d.size(); ++i)
                if (m & bit(i)) alpha.push_back(i);
            ++subsets;
            if (is_hilb_testable(alpha, 0.0, d, c.eps).testable) ++c0_testable;
            if (is_hilb_testable(alpha, 1.0, d, c.eps).testable) {
                ++c1_testable;
                if (d.dim() == 1 && alpha.size() == 1) ++c1_expected;
            }
        }
    }
    const bool degenerate_ok = c0_testable == 0 && c1_testable == 1 && c1_expected == 1;
    const auto mub = is_hilb_testable({0, 1, 2}, 1.0 / std::sqrt(3.0), corpus::mub3(), c.eps);
    r.pass = main_ok && degenerate_ok;
    r.details = {{"z_testable", cert.testable},
                 {"z_complement", cert.complement},
                 {"subsets_classified", subsets},
                 {"c0_testable", c0_testable},
                 {"c1_testable", c1_testable},
                 {"mub3_standard_basis_testable", mub.testable},
                 {"mub3_standard_basis_complement", mub.complement}};
    r.summary = std::string("Z testable: ") + (cert.testable ? "yes" : "no") + ", complement " +
                (cert.complement == xy ? "= X∪Y" : "differs") + ", degenerate cases " + (degenerate_ok ? "ok" : "wrong");
    return r;
}

// 9. Bell rays in the par of the 18-ray dictionary, and the mix inclusion.
CriterionResult bell_par(const BatteryConfig& c) {
    CriterionResult r = named(9, "bell-ray par membership");
    const RayDict p6 = corpus::pauli6();
    const RayDict d18 = corpus::pauli18();
    RaySet s(16);
    for (std::size_t i = 0; i < 16; ++i) s[i] = i;
    const RaySet par = c_complement(s, 0.5, d18, c.eps);
    const auto srays = rays_of(s, d18);
    json bell = json::array();
    bool bell_ok = true;
    for (std::size_t k : {16u, 17u}) {
        const bool in = std::binary_search(par.begin(), par.end(), k);
        const std::size_t rank = schmidt_rank(d18[k].vector(), 2, 2, c.eps);
        std::vector<double> col;
        for (const auto& x : srays) col.push_back(std::round(colinearity(d18[k], x) * 1e6) / 1e6);
        std::sort(col.begin(), col.end());
        col.erase(std::unique(col.begin(), col.end()), col.end());
        bell.push_back({{"ray", k}, {"in_par", in}, {"schmidt_rank", rank}, {"colinearities", col}});
        bell_ok = bell_ok && in && rank == 2;
    }
    std::size_t zz_in = 0;
    for (auto i : corpus::kZ)
        for (auto j : corpus::kZ) zz_in += in_c_complement(kron(p6[i], p6[j]), srays, 0.5, c.eps);
    r.pass = bell_ok && zz_in == 4;
    r.details = {{"par", par}, {"bell", bell}, {"zz_in_par", zz_in}};
    r.summary = std::string("bell rays ") + (bell_ok ? "in par and entangled" : "NOT in par") + ", " +
                std::to_string(zz_in) + "/4 of Z×Z in par";
    return r;
}

// 10. Adjointness and Born measures.
CriterionResult adjoint_measures(const BatteryConfig& c) {
    CriterionResult r = named(10, "adjointness and measures");
    auto rng = rng_for(c, 10);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    double worst = 0.0;
    std::size_t adj_fail = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t m = dim(rng), n = dim(rng);
        const LinearMap f(random_matrix(m, n, rng));
        const CVector a = random_matrix(n, 1, rng);
        const CVector b = random_matrix(m, 1, rng);
        const Complex lhs = (dagger(f)(b)).dot(a);
        const Complex rhs = b.dot(f(a));
        const double err = std::abs(lhs - rhs);
        worst = std::max(worst, err);
        if (err > 1e-9) ++adj_fail;
    }
    std::size_t measures_ok = 0, mutants_caught = 0;
    json first;
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + static_cast<std::size_t>(t) % 5;
        const auto rho = DensityMatrix::random(d, rng);
        const auto sample = MeasureSample::generate(d, rng);
        auto table = born_table(rho, sample);
        const auto rep = check_measure_axioms(sample, table, c.eps);
        if (rep.pass)
            ++measures_ok;
        else if (first.is_null())
            first = to_json(rep);
        const auto& victim = sample.ids()[sample.pairs().front().left];
        table[victim] += 1e-3;
        if (!check_measure_axioms(sample, table, c.eps).pass) ++mutants_caught;
    }
    r.pass = adj_fail == 0 && measures_ok == 100 && mutants_caught == 100;
    r.details = {{"adjoint_trials", 1000},
                 {"adjoint_failures", adj_fail},
                 {"adjoint_max_error_below_1e-12", worst < 1e-12},
                 {"densities", 100},
                 {"measures_pass", measures_ok},
                 {"mutants_caught", mutants_caught}};
    if (!first.is_null()) r.details["first_measure_failure"] = first;
    r.summary = std::to_string(adj_fail) + " adjoint failures, " + std::to_string(measures_ok) + "/100 measures, " +
                std::to_string(mutants_caught) + "/100 mutants caught";
    return r;
}

// 11. Compact adjunction and Frobenius.
CriterionResult compact_frobenius(const BatteryConfig&) {
    CriterionResult r = named(11, "compact adjunction and frobenius");
    std::size_t duality_ok = 0;
    for (std::size_t n = 0; n <= 4; ++n) duality_ok += check_compact_adjunction(DualityData::diagonal(corpus::numbered(n))).pass;
    const bool z2 = check_frobenius(AlgebraData::cyclic_group(2)).pass;
    const bool z3 = check_frobenius(AlgebraData::cyclic_group(3)).pass;
    const auto proj = check_frobenius(corpus::first_projection_algebra(2));
    const auto cst = check_frobenius(corpus::constant_algebra(2));
    r.pass = duality_ok == 5 && z2 && z3 && !proj.pass;
    r.details = {{"diagonal_duality_pass", duality_ok},
                 {"sizes", 5},
                 {"z2", z2},
                 {"z3", z3},
                 {"first_projection_rejected", !proj.pass},
                 {"constant_map_rejected", !cst.pass}};
    r.summary = std::to_string(duality_ok) + "/5 dualities, Z2 " + (z2 ? "ok" : "bad") + ", Z3 " + (z3 ? "ok" : "bad") +
                ", projection mutant " + (proj.pass ? "NOT rejected" : "rejected");
    return r;
}

// 12. Multitestables: étale counts, lifting, unit and associativity of composition.
CriterionResult multitestables(const BatteryConfig& c) {
    CriterionResult r = named(12, "multitestables");
    auto rng = rng_for(c, 12);
    std::vector<Testable> base;
    for (std::size_t n = 1; n <= 3; ++n) {
        auto t = corpus::all_testables(n, c.guard);
        base.insert(base.end(), t.begin(), t.end());
    }
    const auto base_hom = testable_homs(base);

    struct Obj {
        MultiTestable m;
        std::size_t t;
    };
    std::vector<Obj> objs;
    std::size_t count_failures = 0;
    for (std::size_t t = 0; t < base.size(); ++t) {
        const std::size_t n = base[t].universe().size();
        for (Mask w = 0; w < (Mask{1} << n); ++w) {
            std::vector<unsigned> omega(n);
            for (std::size_t i = 0; i < n; ++i) omega[i] = (w & bit(i)) ? 2 : 1;
            auto closed = [&](const Family& f) {
                std::size_t s = 0;
                for (Mask a : f)
                    for (std::size_t x = 0; x < n; ++x)
                        if (a & bit(x)) s += omega[x];
                return s;
            };
            objs.push_back({MultiTestable(base[t], omega), t});
            const auto& m = objs.back().m;
            if (etale(m).elements.size() != closed(base[t].tests())) ++count_failures;
            if (etale_complement(m).elements.size() != closed(base[t].complement().tests())) ++count_failures;
        }
    }
    const std::size_t k = objs.size();

    // A random R below the maximal one, keeping at least one target per row.
    auto thin = [&](const FinRel& full) {
        std::vector<Bits> rows = full.rows();
        for (auto& row : rows) {
            std::vector<std::size_t> on;
            for (auto s = row.find_first(); s != Bits::npos; s = row.find_next(s)) on.push_back(s);
            std::uniform_int_distribution<std::size_t> keep(0, on.size() - 1);
            const std::size_t always = on[keep(rng)];
            std::bernoulli_distribution coin(0.5);
            for (auto s : on)
                if (s != always && coin(rng)) row.reset(s);
        }
        return FinRel(full.dom(), full.cod(), std::move(rows));
    };
    auto lift = [&](const FinRel& rel, std::size_t i, std::size_t j) {
        std::vector<MultiMorphism> out;
        auto mm = maximal_multimorphism(rel, objs[i].m, objs[j].m);
        if (!mm) return out;
        MultiMorphism sparse{mm->r, thin(mm->R), thin(mm->Rbot)};
        out.push_back(std::move(*mm));
        out.push_back(std::move(sparse));
        return out;
    };

    // Every base morphism lifts over every pair of multiplicities; both lifts
    // pass the check and satisfy the unit laws.
    std::size_t lifted = 0, lift_failures = 0, check_failures = 0, unit_failures = 0;
    std::vector<std::vector<std::vector<MultiMorphism>>> small(k, std::vector<std::vector<MultiMorphism>>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (const auto& rel : base_hom[objs[i].t][objs[j].t]) {
                auto ms = lift(rel, i, j);
                if (ms.empty()) {
                    ++lift_failures;
                    continue;
                }
                for (const auto& m : ms) {
                    ++lifted;
                    if (!multimorphism_check(m, objs[i].m, objs[j].m).ok) ++check_failures;
                    if (!(compose_multimorphisms(identity_multimorphism(objs[i].m), m) == m) ||
                        !(compose_multimorphisms(m, identity_multimorphism(objs[j].m)) == m))
                        ++unit_failures;
                }
                if (objs[i].m.universe().size() <= 2 && objs[j].m.universe().size() <= 2)
                    for (auto& m : ms) small[i][j].push_back(std::move(m));
            }

    std::size_t assoc_checks = 0, assoc_failures = 0, closure_checks = 0, closure_failures = 0;
    auto assoc = [&](const MultiMorphism& f, const MultiMorphism& g, const MultiMorphism& h, std::size_t a,
                     std::size_t b, std::size_t d) {
        ++assoc_checks;
        const auto fg = compose_multimorphisms(f, g);
        ++closure_checks;
        if (!multimorphism_check(fg, objs[a].m, objs[b].m).ok) ++closure_failures;
        const auto all = compose_multimorphisms(fg, h);
        if (!(all == compose_multimorphisms(f, compose_multimorphisms(g, h)))) ++assoc_failures;
        ++closure_checks;
        if (!multimorphism_check(all, objs[a].m, objs[d].m).ok) ++closure_failures;
    };
    // Exhaustive over |X| ≤ 2.
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            if (small[a][b].empty()) continue;
            for (std::size_t cc = 0; cc < k; ++cc) {
                if (small[b][cc].empty()) continue;
                for (std::size_t d = 0; d < k; ++d)
                    for (const auto& f : small[a][b])
                        for (const auto& g : small[b][cc])
                            for (const auto& h : small[cc][d]) assoc(f, g, h, a, cc, d);
            }
        }
    const std::size_t exhaustive_checks = assoc_checks;
    // Seeded chains over |X| ≤ 3.
    std::uniform_int_distribution<std::size_t> pick_obj(0, k - 1);
    const std::size_t sampled = 2000;
    for (std::size_t done = 0, tries = 0; done < sampled && tries < 100 * sampled; ++tries) {
        std::size_t o[4];
        for (auto& x : o) x = pick_obj(rng);
        bool ok = true;
        for (int s = 0; s < 3 && ok; ++s) ok = !base_hom[objs[o[s]].t][objs[o[s + 1]].t].empty();
        if (!ok) continue;
        std::vector<MultiMorphism> chain;
        for (int s = 0; s < 3; ++s) {
            const auto& hs = base_hom[objs[o[s]].t][objs[o[s + 1]].t];
            std::uniform_int_distribution<std::size_t> pick(0, hs.size() - 1);
            auto ms = lift(hs[pick(rng)], o[s], o[s + 1]);
            if (ms.empty()) break;
            std::bernoulli_distribution coin(0.5);
            chain.push_back(ms[coin(rng) ? 1 : 0]);
        }
        if (chain.size() != 3) continue;
        assoc(chain[0], chain[1], chain[2], o[0], o[2], o[3]);
        ++done;
    }
    r.pass = count_failures == 0 && lift_failures == 0 && check_failures == 0 && unit_failures == 0 &&
             closure_failures == 0 && assoc_failures == 0;
    r.details = {{"objects", k},
                 {"etale_count_failures", count_failures},
                 {"base_morphisms", [&] {
                      std::size_t n = 0;
                      for (const auto& row : base_hom)
                          for (const auto& h : row) n += h.size();
                      return n;
                  }()},
                 {"lifted_morphisms", lifted},
                 {"lift_failures", lift_failures},
                 {"morphism_check_failures", check_failures},
                 {"unit_failures", unit_failures},
                 {"associativity_exhaustive_small", exhaustive_checks},
                 {"associativity_sampled", assoc_checks - exhaustive_checks},
                 {"associativity_failures", assoc_failures},
                 {"closure_checks", closure_checks},
                 {"closure_failures", closure_failures}};
    r.summary = std::to_string(k) + " objects, " + std::to_string(lifted) + " morphisms, " +
                std::to_string(assoc_checks) + " associativity checks, " +
                std::to_string(count_failures + lift_failures + check_failures + unit_failures + closure_failures +
                               assoc_failures) +
                " failures";
    return r;
}

// 13. The battery is byte-stable across reruns and worker counts.
CriterionResult determinism(const BatteryConfig& c) {
    CriterionResult r = named(13, "determinism");
    std::set<int> rest;
    for (int i = 1; i < kCriteria; ++i) rest.insert(i);
    BatteryConfig serial = c, parallel = c;
    serial.jobs = 1;
    parallel.jobs = std::max(4u, c.jobs);
    const std::string a = battery_json(run_battery(serial, rest), serial)["criteria"].dump();
    const std::string b = battery_json(run_battery(serial, rest), serial)["criteria"].dump();
    const std::string p = battery_json(run_battery(parallel, rest), parallel)["criteria"].dump();
    r.pass = a == b && a == p;
    r.details = {{"rerun_identical", a == b}, {"jobs_identical", a == p}, {"parallel_jobs", parallel.jobs}, {"bytes", a.size()}};
    r.summary = std::string("rerun ") + (a == b ? "identical" : "differs") + ", jobs " + (a == p ? "identical" : "differ");
    return r;
}

}  // namespace

CriterionResult run_criterion(int id, const BatteryConfig& c) {
    using Fn = CriterionResult (*)(const BatteryConfig&);
    static constexpr Fn table[] = {comprehension_roundtrip, lax_sensitivity,   complement_vs_oracle, double_complement,
                                   rectangular,             entanglement,      star_category,        hilbert_testables,
                                   bell_par,                adjoint_measures,  compact_frobenius,    multitestables,
                                   determinism};
    if (id < 1 || id > kCriteria) throw InputError("no criterion " + std::to_string(id));
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = table[id - 1](c);
    } catch (const std::exception& e) {
        r = named(id, "criterion " + std::to_string(id));
        r.pass = false;
        r.summary = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> run_battery(const BatteryConfig& config, const std::set<int>& only) {
    std::vector<int> ids;
    for (int i = 1; i <= kCriteria; ++i)
        if (only.empty() || only.contains(i)) ids.push_back(i);
    std::vector<CriterionResult> out(ids.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(ids.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < ids.size(); ++i) out[i] = run_criterion(ids[i], config);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < ids.size();) out[i] = run_criterion(ids[i], config);
        });
    for (auto& t : pool) t.join();
    return out;
}

json battery_json(const std::vector<CriterionResult>& results, const BatteryConfig& config) {
    json cs = json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        cs.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}, {"details", r.details}});
    }
    return {{"schema", io::kSchema},
            {"pass", all},
            {"config",
             {{"seed", config.seed},
              {"tolerance", config.eps},
              {"max_elements", config.guard.max_elements},
              {"max_tests", config.guard.max_tests}}},
            {"criteria", cs}};
}

}  // namespace cqm
