#pragma once

// Enumerations, seeded generators and bundled fixtures used by the suite,
// the tests and the CLI.

#include "cqm/axioms.hpp"
#include "cqm/comprehension.hpp"
#include "cqm/fhilb.hpp"
#include "cqm/multitest.hpp"
#include "cqm/testspace.hpp"

#include <random>

namespace cqm::corpus {

/// {"0", ..., "n-1"}; n ≤ 10 keeps string order equal to numeric order.
FinSet numbered(std::size_t n, const std::string& name = "X");

/// Every covered irredundant family over n ≥ 1 elements.
std::vector<Family> all_test_spaces(std::size_t n);
/// Every set partition of n elements, blocks in canonical order.
std::vector<Family> all_partitions(std::size_t n);
/// Every testable over numbered(n).
std::vector<Testable> all_testables(std::size_t n, const SizeGuard& guard = {});

/// Reflexive symmetric relation on numbered(n), off-diagonal pairs with probability p.
FinRel random_reflexive_symmetric(std::size_t n, std::mt19937_64& rng, double p = 0.5);

/// A finite commutative monoid given by its multiplication table.
struct Monoid {
    std::string name;
    std::vector<Id> elements;
    std::size_t unit = 0;
    std::vector<std::vector<std::size_t>> mul;
};

Monoid trivial_monoid();
Monoid cyclic_monoid(std::size_t n);
/// {1, 0} under conjunction.
Monoid and_monoid();

/// Preorder (reflexive transitive relation) times a monoid: arrows
/// "i>j:m" for i ≤ j and m ∈ M.
FinCategory preorder_category(const std::vector<std::vector<bool>>& leq, const Monoid& m);

/// Random functor between preorder×monoid categories, each side with at
/// most max_objects objects and max_arrows arrows.
FinFunctor random_functor(std::mt19937_64& rng, std::size_t max_objects = 4, std::size_t max_arrows = 10);

/// Specification of the projection (4-chain × Z2) → 4-chain.
LaxSpec chain_spec();
/// Mutants of a specification, each swapping the μ outputs of two inputs
/// over the same pair of base arrows.
std::vector<LaxSpec> mu_mutants(const LaxSpec& spec, std::size_t count, std::mt19937_64& rng);

/// Crudest cover over {0,1} and finest cover over {0,1}.
struct BellInstance {
    Testable crudest;
    Testable finest;
};
BellInstance bell_instance();

/// Z0 Z1 X+ X- Y+ Y-, in that order.
RayDict pauli6();
inline const RaySet kZ{0, 1};
/// The four mutually unbiased bases of C^3, three rays each.
RayDict mub3();
/// Z^c ⊗ Z^c within pauli6 (16 rays) followed by Φ+ and Ψ+.
RayDict pauli18();
/// Φ+ = (e00 + e11)/√2 and Ψ+ = (e01 + e10)/√2.
Ray bell_phi_plus();
Ray bell_psi_plus();

/// ∇(a, b) = a on the given carrier.
AlgebraData first_projection_algebra(std::size_t n);
/// ∇(a, b) = 0 on the given carrier.
AlgebraData constant_algebra(std::size_t n);

}  // namespace cqm::corpus
