#include "cqm/finrel.hpp"

#include "cqm/error.hpp"

#include <algorithm>
#include <set>

namespace cqm {

std::string pair_name(std::string_view first, std::string_view second) {
    std::string out;
    out.reserve(first.size() + second.size() + 3);
    out += '(';
    out += first;
    out += ',';
    out += second;
    out += ')';
    return out;
}

FinSet::FinSet(std::string name, std::vector<Id> elements) : name_(std::move(name)), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    auto dup = std::adjacent_find(elements_.begin(), elements_.end());
    if (dup != elements_.end()) {
        throw InputError("set '" + name_ + "' lists element '" + *dup + "' twice");
    }
}

FinSet FinSet::point() { return FinSet("1", {"*"}); }

std::optional<std::size_t> FinSet::index_of(std::string_view id) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), id);
    if (it == elements_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - elements_.begin());
}

std::size_t FinSet::require_index(std::string_view id) const {
    auto i = index_of(id);
    if (!i) throw InputError("'" + std::string(id) + "' is not an element of '" + name_ + "'");
    return *i;
}

Bits FinSet::subset(std::span<const Id> ids) const {
    Bits out(size());
    for (const auto& id : ids) out.set(require_index(id));
    return out;
}

std::vector<Id> FinSet::members(const Bits& bits) const {
    std::vector<Id> out;
    for (auto i = bits.find_first(); i != Bits::npos; i = bits.find_next(i)) out.push_back(elements_[i]);
    return out;
}

FinSet product(const FinSet& x, const FinSet& y) {
    std::vector<Id> elems;
    elems.reserve(x.size() * y.size());
    for (const auto& a : x.elements())
        for (const auto& b : y.elements()) elems.push_back(pair_name(a, b));
    // FinSet rejects duplicates, which is exactly a name collision here.
    return FinSet(pair_name(x.name(), y.name()), std::move(elems));
}

ProductIndex::ProductIndex(const FinSet& x, const FinSet& y) : set_(product(x, y)), cols_(y.size()) {
    table_.resize(x.size() * y.size());
    inverse_.resize(table_.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            auto k = *set_.index_of(pair_name(x[i], y[j]));
            table_[i * cols_ + j] = k;
            inverse_[k] = {i, j};
        }
    }
}

FinRel::FinRel(FinSet dom, FinSet cod) : dom_(std::move(dom)), cod_(std::move(cod)) {
    rows_.assign(dom_.size(), Bits(cod_.size()));
}

FinRel::FinRel(FinSet dom, FinSet cod, std::span<const std::pair<Id, Id>> pairs)
    : FinRel(std::move(dom), std::move(cod)) {
    for (const auto& [x, y] : pairs) rows_[dom_.require_index(x)].set(cod_.require_index(y));
}

FinRel::FinRel(FinSet dom, FinSet cod, std::vector<Bits> rows)
    : dom_(std::move(dom)), cod_(std::move(cod)), rows_(std::move(rows)) {
    if (rows_.size() != dom_.size()) throw InputError("relation row count does not match its domain");
    for (const auto& r : rows_)
        if (r.size() != cod_.size()) throw InputError("relation row width does not match its codomain");
}

FinRel FinRel::identity(const FinSet& x) {
    FinRel r(x, x);
    for (std::size_t i = 0; i < x.size(); ++i) r.rows_[i].set(i);
    return r;
}

FinRel FinRel::graph(FinSet dom, FinSet cod, std::span<const std::size_t> targets) {
    FinRel r(std::move(dom), std::move(cod));
    if (targets.size() != r.dom_.size()) throw InputError("function graph needs one target per element");
    for (std::size_t i = 0; i < targets.size(); ++i) r.rows_[i].set(targets[i]);
    return r;
}

bool FinRel::holds(std::string_view x, std::string_view y) const {
    auto i = dom_.index_of(x);
    auto j = cod_.index_of(y);
    return i && j && rows_[*i].test(*j);
}

std::size_t FinRel::size() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.count();
    return n;
}

std::vector<std::pair<Id, Id>> FinRel::pairs() const {
    std::vector<std::pair<Id, Id>> out;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (auto j = rows_[i].find_first(); j != Bits::npos; j = rows_[i].find_next(j))
            out.emplace_back(dom_[i], cod_[j]);
    return out;
}

FinRel FinRel::with_pair(std::size_t i, std::size_t j, bool present) const {
    FinRel out = *this;
    out.rows_[i].set(j, present);
    return out;
}

FinRel compose(const FinRel& r, const FinRel& s) {
    if (!(r.cod() == s.dom())) throw DomainMismatch("cannot compose relations", r.cod().name(), s.dom().name());
    std::vector<Bits> rows(r.dom().size(), Bits(s.cod().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& ri = r.row(i);
        for (auto j = ri.find_first(); j != Bits::npos; j = ri.find_next(j)) rows[i] |= s.row(j);
    }
    return FinRel(r.dom(), s.cod(), std::move(rows));
}

FinRel dagger(const FinRel& r) {
    std::vector<Bits> rows(r.cod().size(), Bits(r.dom().size()));
    for (std::size_t i = 0; i < r.dom().size(); ++i) {
        const auto& ri = r.row(i);
        for (auto j = ri.find_first(); j != Bits::npos; j = ri.find_next(j)) rows[j].set(i);
    }
    return FinRel(r.cod(), r.dom(), std::move(rows));
}

FinRel tensor(const FinRel& r, const FinRel& s) {
    ProductIndex in(r.dom(), s.dom());
    ProductIndex out(r.cod(), s.cod());
    std::vector<Bits> rows(in.set().size(), Bits(out.set().size()));
    for (std::size_t i = 0; i < r.dom().size(); ++i)
        for (std::size_t k = 0; k < s.dom().size(); ++k) {
            auto& row = rows[in(i, k)];
            for (auto j = r.row(i).find_first(); j != Bits::npos; j = r.row(i).find_next(j))
                for (auto l = s.row(k).find_first(); l != Bits::npos; l = s.row(k).find_next(l)) row.set(out(j, l));
        }
    return FinRel(in.set(), out.set(), std::move(rows));
}

Bits image(const FinRel& r, const Bits& a) {
    Bits out(r.cod().size());
    for (auto i = a.find_first(); i != Bits::npos; i = a.find_next(i)) out |= r.row(i);
    return out;
}

std::vector<Id> powerset_image(const FinRel& r, std::span<const Id> a) {
    return r.cod().members(image(r, r.dom().subset(a)));
}

std::vector<Bits> powerset2_image(const FinRel& r, std::span<const Bits> family) {
    std::set<Bits> out;
    for (const auto& a : family) {
        if (a.size() != r.dom().size()) throw InputError("subset is not over the relation's domain");
        out.insert(image(r, a));
    }
    return {out.begin(), out.end()};
}

std::vector<std::vector<Id>> powerset2_image(const FinRel& r, std::span<const std::vector<Id>> family) {
    std::vector<Bits> bits;
    bits.reserve(family.size());
    for (const auto& a : family) bits.push_back(r.dom().subset(a));
    std::vector<std::vector<Id>> out;
    for (const auto& b : powerset2_image(r, std::span<const Bits>(bits))) out.push_back(r.cod().members(b));
    std::sort(out.begin(), out.end());
    return out;
}

SetSpan::SetSpan(FinSet dom, FinSet cod) : dom_(std::move(dom)), cod_(std::move(cod)) {
    entries_.resize(dom_.size() * cod_.size());
}

SetSpan::SetSpan(FinSet dom, FinSet cod, std::span<const SpanCell> cells) : SetSpan(std::move(dom), std::move(cod)) {
    for (const auto& c : cells) {
        auto& e = entries_[dom_.require_index(c.row) * cod_.size() + cod_.require_index(c.col)];
        e.insert(e.end(), c.names.begin(), c.names.end());
    }
    for (auto& e : entries_) std::sort(e.begin(), e.end());
    check_distinct();
}

void SetSpan::check_distinct() const {
    std::vector<Id> all;
    for (const auto& e : entries_) all.insert(all.end(), e.begin(), e.end());
    std::sort(all.begin(), all.end());
    auto dup = std::adjacent_find(all.begin(), all.end());
    if (dup != all.end()) throw InputError("span cell '" + *dup + "' occurs more than once");
}

SetSpan SetSpan::identity(const FinSet& x) {
    SetSpan s(x, x);
    for (std::size_t i = 0; i < x.size(); ++i) s.entries_[i * x.size() + i] = {x[i]};
    return s;
}

SetSpan SetSpan::of_relation(const FinRel& r) {
    SetSpan s(r.dom(), r.cod());
    for (std::size_t i = 0; i < r.dom().size(); ++i)
        for (std::size_t j = 0; j < r.cod().size(); ++j)
            if (r.holds(i, j)) s.entries_[i * r.cod().size() + j] = {pair_name(r.dom()[i], r.cod()[j])};
    return s;
}

const std::vector<Id>& SetSpan::entry(std::string_view a, std::string_view b) const {
    return entry(dom_.require_index(a), cod_.require_index(b));
}

std::size_t SetSpan::cell_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.size();
    return n;
}

std::vector<SpanCell> SetSpan::cells() const {
    std::vector<SpanCell> out;
    for (std::size_t i = 0; i < dom_.size(); ++i)
        for (std::size_t j = 0; j < cod_.size(); ++j)
            if (!entry(i, j).empty()) out.push_back({dom_[i], cod_[j], entry(i, j)});
    return out;
}

SetSpan compose(const SetSpan& f, const SetSpan& g) {
    if (!(f.cod() == g.dom())) throw DomainMismatch("cannot compose spans", f.cod().name(), g.dom().name());
    std::vector<SpanCell> cells;
    for (std::size_t a = 0; a < f.dom().size(); ++a)
        for (std::size_t c = 0; c < g.cod().size(); ++c) {
            SpanCell cell{f.dom()[a], g.cod()[c], {}};
            for (std::size_t b = 0; b < f.cod().size(); ++b)
                for (const auto& phi : f.entry(a, b))
                    for (const auto& psi : g.entry(b, c)) cell.names.push_back(pair_name(phi, psi));
            if (!cell.names.empty()) cells.push_back(std::move(cell));
        }
    return SetSpan(f.dom(), g.cod(), cells);
}

FinRel factorize(const SetSpan& f) {
    std::vector<Bits> rows(f.dom().size(), Bits(f.cod().size()));
    for (std::size_t i = 0; i < f.dom().size(); ++i)
        for (std::size_t j = 0; j < f.cod().size(); ++j)
            if (!f.entry(i, j).empty()) rows[i].set(j);
    return FinRel(f.dom(), f.cod(), std::move(rows));
}

}  // namespace cqm
