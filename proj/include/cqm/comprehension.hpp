#pragma once

// Finitely presented categories, lax functors into set-spans, and the
// comprehension (Grothendieck) construction relating the two.

#include "cqm/finrel.hpp"
#include "cqm/report.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cqm {

struct Arrow {
    Id name;
    Id dom;
    Id cod;

    friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// A finite category given by its full composition table. Construction
/// checks typing, unit laws and associativity and throws InputError with the
/// offending arrows named.
class FinCategory {
public:
    using CompTable = std::map<std::pair<Id, Id>, Id>;

    FinCategory() = default;
    FinCategory(std::vector<Id> objects, std::vector<Arrow> arrows, std::map<Id, Id> identity, CompTable comp);

    const std::vector<Id>& objects() const noexcept { return objects_; }
    const std::vector<Arrow>& arrows() const noexcept { return arrows_; }
    const std::map<Id, Id>& identities() const noexcept { return identity_; }
    const CompTable& table() const noexcept { return comp_; }

    bool has_object(const Id& a) const { return object_index_.contains(a); }
    bool has_arrow(const Id& f) const { return arrow_index_.contains(f); }
    const Arrow& arrow(const Id& f) const;
    const Id& identity(const Id& object) const;
    bool is_identity(const Id& f) const;
    /// f ; g (first f, then g). Throws if not composable.
    const Id& compose(const Id& f, const Id& g) const;
    /// Arrows A → B in declaration order.
    std::vector<Id> hom(const Id& a, const Id& b) const;

private:
    std::vector<Id> objects_;
    std::vector<Arrow> arrows_;
    std::map<Id, Id> identity_;
    CompTable comp_;
    std::map<Id, std::size_t> object_index_;
    std::map<Id, std::size_t> arrow_index_;
};

/// A functor between finite categories, checked on construction.
class FinFunctor {
public:
    FinFunctor() = default;
    FinFunctor(FinCategory dom, FinCategory cod, std::map<Id, Id> obmap, std::map<Id, Id> armap);

    static FinFunctor identity(const FinCategory& c);

    const FinCategory& dom() const noexcept { return dom_; }
    const FinCategory& cod() const noexcept { return cod_; }
    const std::map<Id, Id>& obmap() const noexcept { return obmap_; }
    const std::map<Id, Id>& armap() const noexcept { return armap_; }
    const Id& on_object(const Id& a) const { return obmap_.at(a); }
    const Id& on_arrow(const Id& f) const { return armap_.at(f); }

private:
    FinCategory dom_;
    FinCategory cod_;
    std::map<Id, Id> obmap_;
    std::map<Id, Id> armap_;
};

/// A lax functor P : C → Span given by explicit tables.
///
/// mu[(f, g, φ, ψ)] is the cell of α|f;g|γ assigned to φ ∈ α|f|β and
/// ψ ∈ β|g|γ; eta[(A, α)] is the cell of α|id_A|α.
struct LaxSpec {
    using MuKey = std::tuple<Id, Id, Id, Id>;

    FinCategory base;
    std::map<Id, FinSet> obmap;
    std::map<Id, SetSpan> armap;
    std::map<MuKey, Id> mu;
    std::map<std::pair<Id, Id>, Id> eta;

    const FinSet& fiber(const Id& object) const { return obmap.at(object); }
    const SetSpan& span(const Id& arrow) const { return armap.at(arrow); }
};

/// Checks that μ and η land in the right entries and that the associativity
/// square and both unit triangles commute. Failures are sorted by location.
VerificationReport verify_lax(const LaxSpec& spec);

/// Result of the comprehension construction: the total category together
/// with its projection and the naming used for objects <A,α> and arrows <f,φ>.
struct Comprehension {
    FinCategory total;
    FinFunctor projection;
    std::map<Id, std::pair<Id, Id>> object_of;  // "(A,α)" -> (A, α)
    std::map<Id, std::pair<Id, Id>> arrow_of;   // "(f,φ)" -> (f, φ)
};

/// Builds ∫_C P. Throws InputError (carrying the verify_lax failures) when
/// the specification is not coherent.
Comprehension build_comprehension(const LaxSpec& spec);

/// P_E: fibers E⁻¹A, entries {φ | Eφ = f}, η = identities, μ = composition in E.
LaxSpec specification_of_functor(const FinFunctor& e);

/// Builds ∫ P_E and checks the canonical isomorphism E ≅ ∫ P_E against
/// both projections. Witness mappings are recorded in details.
VerificationReport roundtrip_check(const FinFunctor& e);

/// Builds ∫ P, then P_π for its projection π, and checks that it recovers P
/// after renaming <A,α> ↦ α and <f,φ> ↦ φ.
VerificationReport spec_roundtrip_check(const LaxSpec& spec);

bool is_faithful(const FinFunctor& e);
bool is_relational(const LaxSpec& spec);

/// Thrown by build_comprehension on an incoherent specification.
class IncoherentSpec : public std::runtime_error {
public:
    explicit IncoherentSpec(VerificationReport report);
    const VerificationReport& report() const noexcept { return report_; }

private:
    VerificationReport report_;
};

}  // namespace cqm
