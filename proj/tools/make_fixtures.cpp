// Writes the bundled example inputs into a directory.

#include "cqm/corpus.hpp"
#include "cqm/json_io.hpp"
#include "cqm/qprob.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

using namespace cqm;
using nlohmann::json;

namespace {

std::filesystem::path out_dir;

void put(const std::string& name, json j) {
    j["schema"] = io::kSchema;
    io::write_file((out_dir / name).string(), j);
}

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

json space(std::size_t n, std::vector<std::vector<std::size_t>> sets) {
    return io::to_json(TestSpace(corpus::numbered(n), fam(std::move(sets))));
}

json hilb(const RayDict& d, const RaySet& alpha, double c) {
    return {{"universe", io::to_json(d)}, {"alpha", alpha}, {"c", c}};
}

json matrix2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return io::to_json(m);
}

json subspace(const std::string& id, std::vector<CVector> basis) {
    json b = json::array();
    for (const auto& v : basis) b.push_back(io::to_json(v));
    return {{"id", id}, {"basis", b}};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures DIR\n";
        return 2;
    }
    out_dir = argv[1];
    std::filesystem::create_directories(out_dir);
    const double r2 = 1.0 / std::sqrt(2.0);

    // Test spaces.
    put("partition_2x2.json", space(4, {{0, 1}, {2, 3}}));
    put("overlap_3.json", space(3, {{0, 1}, {1, 2}}));
    put("uneven_partition_3.json", space(3, {{0, 1}, {2}}));
    put("path_p4_cliques.json", space(4, {{0, 1}, {1, 2}, {2, 3}}));
    json redundant = {{"universe", {"0", "1"}}, {"tests", {{"0"}, {"0", "1"}}}};
    put("redundant.json", redundant);

    const auto bell = corpus::bell_instance();
    put("bell_crudest.json", io::to_json(bell.crudest.space()));
    put("bell_finest.json", io::to_json(bell.finest.space()));
    put("bell_pair.json", {{"left", io::to_json(bell.crudest.space())}, {"right", io::to_json(bell.finest.space())}});
    put("bell_par_vectors.json", {{"left", io::to_json(bell.crudest.space())},
                                  {"right", io::to_json(bell.finest.space())},
                                  {"op", "par"}});
    {
        const auto x = corpus::numbered(3);
        put("overlap_identity.json", {{"source", space(3, {{0, 1}, {1, 2}})},
                                      {"target", space(3, {{0, 1}, {1, 2}})},
                                      {"relation", io::to_json(FinRel::identity(x))}});
        put("overlap_empty.json", {{"source", space(3, {{0, 1}, {1, 2}})},
                                   {"target", space(3, {{0, 1}, {1, 2}})},
                                   {"relation", io::to_json(FinRel(x, x))}});
    }

    // Ray dictionaries and Hilbert testables.
    const auto p6 = corpus::pauli6();
    put("pauli6_z.json", hilb(p6, corpus::kZ, r2));
    put("pauli6_z_c0.json", hilb(p6, corpus::kZ, 0.0));
    {
        RaySet xy(16);
        for (std::size_t i = 0; i < 16; ++i) xy[i] = i;
        put("pauli18.json", hilb(corpus::pauli18(), xy, 0.5));
    }
    put("mub3.json", hilb(corpus::mub3(), {0, 1, 2}, 1.0 / std::sqrt(3.0)));
    put("hadamard.json", {{"source", hilb(p6, corpus::kZ, r2)},
                          {"target", hilb(p6, corpus::kZ, r2)},
                          {"map", matrix2(r2, r2, r2, -r2)}});
    put("phase_flip.json", {{"source", hilb(p6, corpus::kZ, r2)},
                            {"target", hilb(p6, corpus::kZ, r2)},
                            {"map", matrix2(1, 0, 0, -1)}});

    // Measures on a qubit.
    {
        const CVector e0 = CVector::Unit(2, 0), e1 = CVector::Unit(2, 1);
        json sample = {{"dim", 2},
                       {"subspaces",
                        {subspace("zero", {}), subspace("e0", {e0}), subspace("e1", {e1}),
                         subspace("full", {e0, e1})}},
                       {"pairs", {{"e0", "e1", "full"}}}};
        CMatrix half = CMatrix::Identity(2, 2) * 0.5;
        put("qubit_mixed.json", {{"sample", sample}, {"density", io::to_json(half)}});
        put("qubit_bad_measure.json",
            {{"sample", sample}, {"measure", {{"zero", 0.0}, {"e0", 0.5}, {"e1", 0.6}, {"full", 1.0}}}});
        CMatrix p0 = CMatrix::Zero(2, 2);
        p0(0, 0) = 1;
        put("qubit_projection.json", {{"sample", sample},
                                      {"density", io::to_json(half)},
                                      {"map", io::to_json(p0)},
                                      {"target_sample", sample},
                                      {"target_density", io::to_json(half)}});
    }

    // Multitestables.
    {
        json src = space(3, {{0, 1}, {1, 2}});
        src["omega"] = {{"1", 2}};
        put("overlap_multi.json", {{"source", src}});
    }

    // Algebras and dualities.
    put("z2_frobenius.json", {{"law", "frobenius"}, {"nabla", io::to_json(AlgebraData::cyclic_group(2).nabla)}});
    put("z3_frobenius.json", {{"law", "frobenius"}, {"nabla", io::to_json(AlgebraData::cyclic_group(3).nabla)}});
    put("projection_frobenius.json",
        {{"law", "frobenius"}, {"nabla", io::to_json(corpus::first_projection_algebra(2).nabla)}});
    put("constant_frobenius.json", {{"law", "frobenius"}, {"nabla", io::to_json(corpus::constant_algebra(2).nabla)}});
    put("compact_diagonal.json", {{"law", "compact"}, {"carrier", io::to_json(corpus::numbered(3))}});
    {
        auto d = DualityData::diagonal(corpus::numbered(2));
        ProductIndex p(d.carrier, d.carrier);
        put("compact_missing_pair.json", {{"law", "compact"},
                                          {"carrier", io::to_json(d.carrier)},
                                          {"eps", io::to_json(d.eps.with_pair(p(1, 1), 0, false))}});
    }
    put("mix_bell.json", {{"law", "mix"},
                          {"a", io::to_json(bell.crudest.space())},
                          {"b", io::to_json(bell.finest.space())},
                          {"c", io::to_json(Testable::unit().space())}});

    // Lax specifications.
    const LaxSpec chain = corpus::chain_spec();
    put("chain_spec.json", io::to_json(chain));
    std::mt19937_64 rng(7);
    put("chain_spec_mu_swapped.json", io::to_json(corpus::mu_mutants(chain, 1, rng).front()));
    {
        LaxSpec no_eta = chain;
        no_eta.eta.erase(no_eta.eta.begin());
        put("chain_spec_missing_eta.json", io::to_json(no_eta));
    }
    return 0;
}
