#pragma once

// Test spaces and testables over finite sets: the ⊥ complement, tensor and
// par, morphism checking, vectors, and complementary bases of partitions.
//
// Subsets of a universe are 64-bit masks over the universe's canonical
// element order, so universes are capped at 64 elements regardless of the
// configured size guard.

#include "cqm/finrel.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqm {

using Mask = std::uint64_t;
using Family = std::vector<Mask>;

inline constexpr std::size_t kMaxUniverse = 64;

inline Mask bit(std::size_t i) { return Mask{1} << i; }
inline Mask full_mask(std::size_t n) { return n >= 64 ? ~Mask{0} : bit(n) - 1; }

/// Bound on the exponential operations (complement, vectors, complementary bases).
struct SizeGuard {
    std::size_t max_elements = 16;
    std::size_t max_tests = 256;

    void check(std::size_t elements, std::size_t tests, const char* what) const;
};

/// Sorts and deduplicates a family in place; the canonical form.
void canonicalize(Family& family);
bool is_covered(std::size_t n, std::span<const Mask> family);
bool is_irredundant(std::span<const Mask> family);

/// A covered, irredundant family of subsets of a finite universe.
class TestSpace {
public:
    TestSpace() = default;
    TestSpace(FinSet universe, Family tests);

    static TestSpace from_names(FinSet universe, const std::vector<std::vector<Id>>& tests);

    const FinSet& universe() const noexcept { return universe_; }
    const Family& tests() const noexcept { return tests_; }
    std::size_t size() const noexcept { return tests_.size(); }
    std::vector<std::vector<Id>> named_tests() const;
    std::vector<Id> named(Mask m) const;

    friend bool operator==(const TestSpace& a, const TestSpace& b) {
        return a.universe_ == b.universe_ && a.tests_ == b.tests_;
    }

private:
    FinSet universe_;
    Family tests_;
};

/// The exact-transversal complement of an arbitrary family over n elements:
/// the maximal u with |u ∩ a| = 1 for every member a. Depth-first over the
/// family in canonical order. An empty family has empty complement.
Family complement_family(std::size_t n, std::span<const Mask> family, const SizeGuard& guard = {});

/// α⊥ for a test space.
Family complement(const TestSpace& alpha, const SizeGuard& guard = {});

struct TestabilityCertificate {
    bool testable = false;
    std::string reason;
    Family complement;
    Family double_complement;
};

/// α is testable iff α⊥ is covered (and irredundant) and α⊥⊥ = α.
TestabilityCertificate is_testable(const TestSpace& alpha, const SizeGuard& guard = {});

/// A family over a universe that was expected to be testable but is not.
class NotTestable : public std::runtime_error {
public:
    NotTestable(const std::string& what, FinSet universe, Family family, TestabilityCertificate certificate);

    const FinSet& universe() const noexcept { return universe_; }
    const Family& family() const noexcept { return family_; }
    const TestabilityCertificate& certificate() const noexcept { return certificate_; }

private:
    FinSet universe_;
    Family family_;
    TestabilityCertificate certificate_;
};

/// An object <X, α> of the category of testables, with α⊥ cached.
class Testable {
public:
    Testable() = default;

    /// Throws NotTestable (or InputError for a family that is not a test space).
    static Testable make(const TestSpace& space, const SizeGuard& guard = {});
    static Testable make(const FinSet& universe, const Family& family, const SizeGuard& guard = {});

    /// <1, {1}>, the unit for both tensors.
    static Testable unit();

    const FinSet& universe() const noexcept { return space_.universe(); }
    const TestSpace& space() const noexcept { return space_; }
    const TestSpace& complement() const noexcept { return complement_; }
    const Family& tests() const noexcept { return space_.tests(); }

    /// <X, α>* = <X, α⊥>.
    Testable star() const;

    friend bool operator==(const Testable& a, const Testable& b) { return a.space_ == b.space_; }

private:
    Testable(TestSpace space, TestSpace complement);

    TestSpace space_;
    TestSpace complement_;
};

using TestableObject = Testable;

/// α ⊗ β = {a × b} over X × Y.
Family tensor_family(const TestSpace& alpha, const TestSpace& beta, const ProductIndex& idx);
/// (α⊥ ⊗ β⊥)⊥ over X × Y.
Family par_family(const Testable& a, const Testable& b, const ProductIndex& idx, const SizeGuard& guard = {});

/// Both throw NotTestable when the result fails is_testable.
Testable tensor(const Testable& a, const Testable& b, const SizeGuard& guard = {});
Testable par(const Testable& a, const Testable& b, const SizeGuard& guard = {});

/// Moves a family along a bijection between universes given as index map.
Family relabel(std::span<const Mask> family, std::span<const std::size_t> index_map);

/// Direct image of a subset along a relation, both as masks.
Mask image_mask(const FinRel& r, Mask a);

struct MorphismVerdict {
    bool ok = true;
    std::string diagnostic;
};

/// α|r|β ⟺ ℘℘r(α) ⊆ β ∧ ℘℘r^op(β⊥) ⊆ α⊥. The diagnostic names the first
/// violating test.
MorphismVerdict morphism_check(const FinRel& r, const Testable& a, const Testable& b);

/// Maximal cliques of a reflexive symmetric relation (Bron–Kerbosch).
Family maximal_cliques(const FinRel& r);

/// Testable of maximal cliques. InputError if r is not reflexive and
/// symmetric; NotTestable if the cliques do not form a testable.
Testable clique_testable(const FinRel& r, const SizeGuard& guard = {});

/// A product universe X × Y with its declared factors.
struct ProductFactors {
    Testable left;
    Testable right;
};

struct Vector {
    Mask subset = 0;
    /// Set only when product factors were declared.
    std::optional<bool> separable;
};

/// All vectors 1 → X passing morphism_check from the unit, found by brute
/// force over every subset of X. With factors, each vector is classified as
/// separable (a × b for tests a, b of the factors) or entangled.
std::vector<Vector> enumerate_vectors(const Testable& a, const std::optional<ProductFactors>& factors = std::nullopt,
                                      const SizeGuard& guard = {});

bool is_partition(const TestSpace& beta);

struct ComplementaryBasesReport {
    /// All blocks have the same size b and |X| = b · |β|.
    bool rectangular = false;
    Family complement;
    /// Partitions of X whose blocks all lie in β⊥.
    std::vector<Family> bases;
    /// Per basis: (number of blocks, common block size or 0 if sizes differ).
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
};

ComplementaryBasesReport complementary_bases(const TestSpace& beta, const SizeGuard& guard = {});

}  // namespace cqm
