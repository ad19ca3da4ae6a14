#pragma once

// Instance checks of the categorical laws: compact duality in Rel, mix and
// distributivity carried by identities, star object laws, and the Frobenius
// condition for relational algebras.

#include "cqm/report.hpp"
#include "cqm/testspace.hpp"

namespace cqm {

/// Structural isomorphisms of the cartesian product, as function graphs.
FinRel associator(const FinSet& x, const FinSet& y, const FinSet& z);  // X×(Y×Z) → (X×Y)×Z
FinRel right_unitor(const FinSet& x);                                   // X → X×1
FinRel left_unitor(const FinSet& x);                                    // X → 1×X

struct DualityData {
    FinSet carrier;
    FinRel eta;  // 1 → X×X
    FinRel eps;  // X×X → 1

    /// η = {(*, (x,x))}, ε = {((x,x), *)}.
    static DualityData diagonal(const FinSet& x);
};

/// (ε⊗X)(X⊗η) = id and (X⊗ε)(η⊗X) = id, with the missing and extra pairs
/// of each composite reported.
VerificationReport check_compact_adjunction(const DualityData& d);

/// Mix: id on X×Y is a morphism A⊗B → A⅋B. Distributivity: the associator
/// is a morphism A⊗(B⅋C) → (A⊗B)⅋C. Untestable intermediate objects are
/// reported as failures of kind "not_testable".
VerificationReport check_mix_and_distributivity(const Testable& a, const Testable& b, const Testable& c,
                                                const SizeGuard& guard = {});

/// A** = A, (A⊗B)* = A*⅋B*, and 1* = 1.
VerificationReport check_star_object_laws(const Testable& a, const Testable& b, const SizeGuard& guard = {});

/// η: ⊤ → A*⅋A and ε: A⊗A* → ⊥ carried by the diagonal; both morphism checks.
VerificationReport check_autonomous_duality(const Testable& a, const SizeGuard& guard = {});

struct AlgebraData {
    FinSet carrier;
    FinRel nabla;  // X×X → X
    FinRel delta;  // X → X×X

    /// Δ = ∇‡.
    static AlgebraData of_multiplication(const FinRel& nabla);
    /// Graph of addition in Z_n on {0..n-1}.
    static AlgebraData cyclic_group(std::size_t n);
};

/// (Δ⊗X);(X⊗∇) = ∇;Δ = (X⊗Δ);(∇⊗X) and associativity of ∇. Throws
/// InputError unless Δ = ∇‡.
VerificationReport check_frobenius(const AlgebraData& alg);

}  // namespace cqm
