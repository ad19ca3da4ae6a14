#pragma once

// Multitestables <X, α, ω>: testables with positive integer multiplicities,
// their étale forms, and span-valued morphisms <r, R, R⊥>.

#include "cqm/testspace.hpp"

#include <string>
#include <vector>

namespace cqm {

class MultiTestable {
public:
    MultiTestable() = default;
    /// omega is indexed by the universe's canonical order; every entry must be positive.
    MultiTestable(Testable alpha, std::vector<unsigned> omega);

    static MultiTestable unit();

    const Testable& testable() const noexcept { return alpha_; }
    const FinSet& universe() const noexcept { return alpha_.universe(); }
    const std::vector<unsigned>& omega() const noexcept { return omega_; }

    /// <X, α⊥, ω>.
    MultiTestable star() const;

    friend bool operator==(const MultiTestable&, const MultiTestable&) = default;

private:
    Testable alpha_;
    std::vector<unsigned> omega_;
};

struct EtaleTriple {
    std::size_t test;     // index into the family
    std::size_t element;  // index into the universe
    unsigned copy;
};

/// |A| = {<a,x,i> | a ∈ α, x ∈ a, i < ω(x)} with its projection to the tests.
struct EtaleSet {
    Family family;
    std::vector<EtaleTriple> triples;
    FinSet elements;  // triple names "<a,x,i>", a written as "{x,y}"
    std::vector<std::size_t> index_of_triple;  // triples[k] is elements[index_of_triple[k]]
    std::vector<Mask> test_of;                 // per element of `elements`, the test it projects to
};

EtaleSet etale(const FinSet& universe, const Family& family, const std::vector<unsigned>& omega);
inline EtaleSet etale(const MultiTestable& a) {
    return etale(a.universe(), a.testable().tests(), a.omega());
}
inline EtaleSet etale_complement(const MultiTestable& a) {
    return etale(a.universe(), a.testable().complement().tests(), a.omega());
}

/// Σ_{a∈α} Σ_{x∈a} ω(x).
std::size_t etale_count(const Family& family, const std::vector<unsigned>& omega);

struct MultiMorphism {
    FinRel r;     // X → Y
    FinRel R;     // |A| → |B|
    FinRel Rbot;  // |B⊥| → |A⊥|

    friend bool operator==(const MultiMorphism&, const MultiMorphism&) = default;
};

struct MultiVerdict {
    bool ok = true;
    std::string diagnostic;
};

/// A;℘r = R;B and B⊥;℘r^op = R⊥;A⊥, both read as relations into the
/// powerset. Boundary mismatches throw DomainMismatch.
MultiVerdict multimorphism_check(const MultiMorphism& m, const MultiTestable& a, const MultiTestable& b);

/// <r;s, R;S, S⊥;R⊥>.
MultiMorphism compose_multimorphisms(const MultiMorphism& m1, const MultiMorphism& m2);
/// η^A = <id, id, id>.
MultiMorphism identity_multimorphism(const MultiTestable& a);

struct MultiStructure {
    MultiTestable star;
    MultiTestable tensor;
    MultiTestable par;
};

/// Star, and tensor/par with product multiplicities ω·ϖ. Throws NotTestable
/// when the underlying testspace operation does.
MultiStructure multi_structure(const MultiTestable& a, const MultiTestable& b, const SizeGuard& guard = {});
MultiTestable multi_tensor(const MultiTestable& a, const MultiTestable& b, const SizeGuard& guard = {});

/// Componentwise tensor of multimorphisms (an extrapolation: the ⊥ leg is
/// the largest relation making the second square commute).
MultiMorphism tensor_multimorphisms(const MultiMorphism& m1, const MultiMorphism& m2, const MultiTestable& a1,
                                    const MultiTestable& b1, const MultiTestable& a2, const MultiTestable& b2,
                                    const SizeGuard& guard = {});

/// The largest R and R⊥ over r: each triple is related to every triple in
/// the fiber it must land in. Empty optional if some fiber is empty.
std::optional<MultiMorphism> maximal_multimorphism(const FinRel& r, const MultiTestable& a, const MultiTestable& b);

}  // namespace cqm
