#pragma once

// Finite sets, binary relations between them, and set-valued spans
// (matrices of sets) with their compositions.

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqm {

using Id = std::string;
using Bits = boost::dynamic_bitset<>;

/// Name used for the element of a cartesian product, "(x,y)".
std::string pair_name(std::string_view first, std::string_view second);

/// A named finite set. Elements are kept sorted and distinct, so two sets
/// with the same members compare equal whatever their names.
class FinSet {
public:
    FinSet() = default;
    FinSet(std::string name, std::vector<Id> elements);

    /// The one-element set 1 = {*}.
    static FinSet point();

    const std::string& name() const noexcept { return name_; }
    const std::vector<Id>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }
    const Id& operator[](std::size_t i) const { return elements_[i]; }

    std::optional<std::size_t> index_of(std::string_view id) const;
    std::size_t require_index(std::string_view id) const;
    bool contains(std::string_view id) const { return index_of(id).has_value(); }

    /// Subset as a bitset over the canonical order; throws if some id is not a member.
    Bits subset(std::span<const Id> ids) const;
    std::vector<Id> members(const Bits& bits) const;
    Bits none() const { return Bits(size()); }
    Bits all() const { return Bits(size()).set(); }

    friend bool operator==(const FinSet& a, const FinSet& b) { return a.elements_ == b.elements_; }

private:
    std::string name_;
    std::vector<Id> elements_;
};

/// X × Y with elements named by pair_name. Throws if two pairs collide as names.
FinSet product(const FinSet& x, const FinSet& y);

/// Index of pair (i, j) of product(x, y) inside that product's canonical order.
class ProductIndex {
public:
    ProductIndex(const FinSet& x, const FinSet& y);
    const FinSet& set() const noexcept { return set_; }
    std::size_t operator()(std::size_t i, std::size_t j) const { return table_[i * cols_ + j]; }
    /// Inverse: position in the product -> (i, j).
    std::pair<std::size_t, std::size_t> split(std::size_t k) const { return inverse_[k]; }

private:
    FinSet set_;
    std::size_t cols_ = 0;
    std::vector<std::size_t> table_;
    std::vector<std::pair<std::size_t, std::size_t>> inverse_;
};

/// A relation r ⊆ dom × cod, stored as one row bitset per domain element.
class FinRel {
public:
    FinRel() = default;
    FinRel(FinSet dom, FinSet cod);
    FinRel(FinSet dom, FinSet cod, std::span<const std::pair<Id, Id>> pairs);
    FinRel(FinSet dom, FinSet cod, std::vector<Bits> rows);

    static FinRel identity(const FinSet& x);
    /// Graph of a function given as target index per source element.
    static FinRel graph(FinSet dom, FinSet cod, std::span<const std::size_t> targets);

    const FinSet& dom() const noexcept { return dom_; }
    const FinSet& cod() const noexcept { return cod_; }
    const Bits& row(std::size_t i) const { return rows_[i]; }
    const std::vector<Bits>& rows() const noexcept { return rows_; }

    bool holds(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
    bool holds(std::string_view x, std::string_view y) const;
    std::size_t size() const;
    bool empty() const { return size() == 0; }

    /// Sorted list of related pairs.
    std::vector<std::pair<Id, Id>> pairs() const;

    FinRel with_pair(std::size_t i, std::size_t j, bool present) const;

    friend bool operator==(const FinRel& a, const FinRel& b) {
        return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.rows_ == b.rows_;
    }

private:
    FinSet dom_;
    FinSet cod_;
    std::vector<Bits> rows_;
};

/// r ; s (first r, then s).
FinRel compose(const FinRel& r, const FinRel& s);
/// Relational converse.
FinRel dagger(const FinRel& r);
/// r ⊗ s : X × X' → Y × Y'.
FinRel tensor(const FinRel& r, const FinRel& s);

/// Direct image ℘r(a) on bitsets over dom/cod.
Bits image(const FinRel& r, const Bits& a);
/// Direct image on element names; throws if a ⊄ dom.
std::vector<Id> powerset_image(const FinRel& r, std::span<const Id> a);
/// ℘℘r(α): the set of direct images, sorted and deduplicated.
std::vector<Bits> powerset2_image(const FinRel& r, std::span<const Bits> family);
std::vector<std::vector<Id>> powerset2_image(const FinRel& r, std::span<const std::vector<Id>> family);

struct SpanCell {
    Id row;
    Id col;
    std::vector<Id> names;
};

/// A span between finite sets, read as a matrix of finite sets of cells.
class SetSpan {
public:
    SetSpan() = default;
    SetSpan(FinSet dom, FinSet cod);
    SetSpan(FinSet dom, FinSet cod, std::span<const SpanCell> cells);

    /// Identity span: cell x on the diagonal entry (x, x).
    static SetSpan identity(const FinSet& x);
    /// Relation viewed as a span with one cell "(x,y)" per related pair.
    static SetSpan of_relation(const FinRel& r);

    const FinSet& dom() const noexcept { return dom_; }
    const FinSet& cod() const noexcept { return cod_; }
    const std::vector<Id>& entry(std::size_t i, std::size_t j) const { return entries_[i * cod_.size() + j]; }
    const std::vector<Id>& entry(std::string_view a, std::string_view b) const;
    std::size_t cell_count() const;
    /// Every (row, col, names) with a nonempty entry, in canonical order.
    std::vector<SpanCell> cells() const;

    friend bool operator==(const SetSpan& a, const SetSpan& b) {
        return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.entries_ == b.entries_;
    }

private:
    void check_distinct() const;

    FinSet dom_;
    FinSet cod_;
    std::vector<std::vector<Id>> entries_;
};

/// (F;G)_ac = Σ_b F_ab × G_bc, cells named pair_name(φ, ψ).
SetSpan compose(const SetSpan& f, const SetSpan& g);
/// Image factorization: (a,b) related iff F_ab is nonempty.
FinRel factorize(const SetSpan& f);

}  // namespace cqm
