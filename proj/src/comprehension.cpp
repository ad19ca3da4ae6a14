#include "cqm/comprehension.hpp"

#include "cqm/error.hpp"

#include <algorithm>
#include <set>

namespace cqm {

namespace {

std::string arrow_list(std::initializer_list<std::string_view> names) {
    std::string out;
    for (auto n : names) {
        if (!out.empty()) out += ',';
        out += n;
    }
    return out;
}

}  // namespace

FinCategory::FinCategory(std::vector<Id> objects, std::vector<Arrow> arrows, std::map<Id, Id> identities, CompTable comp)
    : objects_(std::move(objects)), arrows_(std::move(arrows)), identity_(std::move(identities)), comp_(std::move(comp)) {
    for (std::size_t i = 0; i < objects_.size(); ++i)
        if (!object_index_.emplace(objects_[i], i).second)
            throw InputError("category lists object '" + objects_[i] + "' twice");
    for (std::size_t i = 0; i < arrows_.size(); ++i) {
        const auto& f = arrows_[i];
        if (!arrow_index_.emplace(f.name, i).second) throw InputError("category lists arrow '" + f.name + "' twice");
        if (!has_object(f.dom) || !has_object(f.cod))
            throw InputError("arrow '" + f.name + "' has an unknown endpoint");
    }
    for (const auto& a : objects_) {
        auto it = identity_.find(a);
        if (it == identity_.end()) throw InputError("object '" + a + "' has no identity");
        if (!has_arrow(it->second)) throw InputError("identity of '" + a + "' is not an arrow");
        const auto& id = arrow(it->second);
        if (id.dom != a || id.cod != a) throw InputError("identity of '" + a + "' is not an endo-arrow");
    }
    if (identity_.size() != objects_.size()) throw InputError("identity table names an unknown object");

    for (const auto& [key, h] : comp_) {
        if (!has_arrow(key.first) || !has_arrow(key.second) || !has_arrow(h))
            throw InputError("composition table mentions an unknown arrow at " + arrow_list({key.first, key.second}));
        const auto& f = arrow(key.first);
        const auto& g = arrow(key.second);
        if (f.cod != g.dom) throw InputError("composition table composes non-composable " + arrow_list({f.name, g.name}));
        const auto& fg = arrow(h);
        if (fg.dom != f.dom || fg.cod != g.cod)
            throw InputError("composite of " + arrow_list({f.name, g.name}) + " has the wrong type");
    }
    for (const auto& f : arrows_)
        for (const auto& g : arrows_)
            if (f.cod == g.dom && !comp_.contains({f.name, g.name}))
                throw InputError("composition table is missing " + arrow_list({f.name, g.name}));

    for (const auto& f : arrows_) {
        if (compose(identity(f.dom), f.name) != f.name || compose(f.name, identity(f.cod)) != f.name)
            throw InputError("identities are not units for '" + f.name + "'");
    }
    for (const auto& f : arrows_)
        for (const auto& g : arrows_) {
            if (f.cod != g.dom) continue;
            const auto& fg = compose(f.name, g.name);
            for (const auto& h : arrows_) {
                if (g.cod != h.dom) continue;
                if (compose(fg, h.name) != compose(f.name, compose(g.name, h.name)))
                    throw InputError("composition is not associative at " + arrow_list({f.name, g.name, h.name}));
            }
        }
}

const Arrow& FinCategory::arrow(const Id& f) const {
    auto it = arrow_index_.find(f);
    if (it == arrow_index_.end()) throw InputError("unknown arrow '" + f + "'");
    return arrows_[it->second];
}

const Id& FinCategory::identity(const Id& object) const {
    auto it = identity_.find(object);
    if (it == identity_.end()) throw InputError("unknown object '" + object + "'");
    return it->second;
}

bool FinCategory::is_identity(const Id& f) const {
    const auto& a = arrow(f);
    return a.dom == a.cod && identity(a.dom) == f;
}

const Id& FinCategory::compose(const Id& f, const Id& g) const {
    auto it = comp_.find({f, g});
    if (it == comp_.end()) throw InputError("arrows '" + f + "' and '" + g + "' are not composable");
    return it->second;
}

std::vector<Id> FinCategory::hom(const Id& a, const Id& b) const {
    std::vector<Id> out;
    for (const auto& f : arrows_)
        if (f.dom == a && f.cod == b) out.push_back(f.name);
    return out;
}

FinFunctor::FinFunctor(FinCategory dom, FinCategory cod, std::map<Id, Id> obmap, std::map<Id, Id> armap)
    : dom_(std::move(dom)), cod_(std::move(cod)), obmap_(std::move(obmap)), armap_(std::move(armap)) {
    for (const auto& a : dom_.objects()) {
        auto it = obmap_.find(a);
        if (it == obmap_.end() || !cod_.has_object(it->second))
            throw InputError("functor does not send object '" + a + "' to an object");
    }
    for (const auto& f : dom_.arrows()) {
        auto it = armap_.find(f.name);
        if (it == armap_.end() || !cod_.has_arrow(it->second))
            throw InputError("functor does not send arrow '" + f.name + "' to an arrow");
        const auto& img = cod_.arrow(it->second);
        if (img.dom != obmap_.at(f.dom) || img.cod != obmap_.at(f.cod))
            throw InputError("functor image of '" + f.name + "' has the wrong type");
    }
    if (obmap_.size() != dom_.objects().size() || armap_.size() != dom_.arrows().size())
        throw InputError("functor maps names outside its domain");
    for (const auto& a : dom_.objects())
        if (armap_.at(dom_.identity(a)) != cod_.identity(obmap_.at(a)))
            throw InputError("functor does not preserve the identity of '" + a + "'");
    for (const auto& [key, h] : dom_.table())
        if (armap_.at(h) != cod_.compose(armap_.at(key.first), armap_.at(key.second)))
            throw InputError("functor does not preserve the composite of " + arrow_list({key.first, key.second}));
}

FinFunctor FinFunctor::identity(const FinCategory& c) {
    std::map<Id, Id> ob, ar;
    for (const auto& a : c.objects()) ob.emplace(a, a);
    for (const auto& f : c.arrows()) ar.emplace(f.name, f.name);
    return FinFunctor(c, c, std::move(ob), std::move(ar));
}

namespace {

/// Where each cell of each span sits: arrow -> cell -> (row element, col element).
using CellIndex = std::map<Id, std::map<Id, std::pair<Id, Id>>>;

CellIndex index_cells(const LaxSpec& spec) {
    CellIndex out;
    for (const auto& f : spec.base.arrows()) {
        auto& m = out[f.name];
        for (const auto& c : spec.span(f.name).cells())
            for (const auto& n : c.names) m.emplace(n, std::pair{c.row, c.col});
    }
    return out;
}

void check_shape(const LaxSpec& spec) {
    for (const auto& a : spec.base.objects())
        if (!spec.obmap.contains(a)) throw InputError("specification has no fiber for object '" + a + "'");
    for (const auto& f : spec.base.arrows()) {
        auto it = spec.armap.find(f.name);
        if (it == spec.armap.end()) throw InputError("specification has no span for arrow '" + f.name + "'");
        if (!(it->second.dom() == spec.fiber(f.dom)) || !(it->second.cod() == spec.fiber(f.cod)))
            throw InputError("span of '" + f.name + "' does not run between the fibers of its endpoints");
    }
}

std::string cell_location(const Id& f, const Id& g, const Id& phi, const Id& psi) {
    return "mu[" + f + "," + g + "](" + phi + "," + psi + ")";
}

}  // namespace

VerificationReport verify_lax(const LaxSpec& spec) {
    check_shape(spec);
    VerificationReport report;
    const auto cells = index_cells(spec);
    const auto& base = spec.base;

    // Typing of η and μ. Later checks only run once everything is typed.
    bool typed = true;
    for (const auto& a : base.objects()) {
        const auto& id = base.identity(a);
        for (const auto& alpha : spec.fiber(a).elements()) {
            ++report.checked;
            auto it = spec.eta.find({a, alpha});
            std::string loc = "eta[" + a + "](" + alpha + ")";
            if (it == spec.eta.end()) {
                report.fail("eta_missing", loc);
                typed = false;
                continue;
            }
            auto c = cells.at(id).find(it->second);
            if (c == cells.at(id).end() || c->second != std::pair{alpha, alpha}) {
                report.fail("eta_entry", loc, "cell '" + it->second + "' is not in the diagonal entry");
                typed = false;
            }
        }
    }

    auto mu = [&](const Id& f, const Id& g, const Id& phi, const Id& psi) -> std::optional<Id> {
        auto it = spec.mu.find({f, g, phi, psi});
        if (it == spec.mu.end()) return std::nullopt;
        return it->second;
    };

    for (const auto& f : base.arrows())
        for (const auto& g : base.arrows()) {
            if (f.cod != g.dom) continue;
            const auto& fg = base.compose(f.name, g.name);
            for (const auto& [phi, fpos] : cells.at(f.name))
                for (const auto& [psi, gpos] : cells.at(g.name)) {
                    if (fpos.second != gpos.first) continue;
                    ++report.checked;
                    auto loc = cell_location(f.name, g.name, phi, psi);
                    auto out = mu(f.name, g.name, phi, psi);
                    if (!out) {
                        report.fail("mu_missing", loc);
                        typed = false;
                        continue;
                    }
                    auto c = cells.at(fg).find(*out);
                    if (c == cells.at(fg).end() || c->second != std::pair{fpos.first, gpos.second}) {
                        report.fail("mu_entry", loc, "cell '" + *out + "' is not in entry (" + fpos.first + "," +
                                                         gpos.second + ") of '" + fg + "'");
                        typed = false;
                    }
                }
        }
    if (!typed) {
        report.finalize();
        return report;
    }

    // Unit triangles.
    for (const auto& f : base.arrows()) {
        const auto& ida = base.identity(f.dom);
        const auto& idb = base.identity(f.cod);
        for (const auto& [phi, pos] : cells.at(f.name)) {
            ++report.checked;
            auto left = mu(ida, f.name, spec.eta.at({f.dom, pos.first}), phi);
            if (*left != phi)
                report.fail("unit_left", "arrow " + f.name + " cell " + phi, "mu(eta, phi) = " + *left);
            auto right = mu(f.name, idb, phi, spec.eta.at({f.cod, pos.second}));
            if (*right != phi)
                report.fail("unit_right", "arrow " + f.name + " cell " + phi, "mu(phi, eta) = " + *right);
        }
    }

    // Associativity square.
    for (const auto& f : base.arrows())
        for (const auto& g : base.arrows()) {
            if (f.cod != g.dom) continue;
            const auto& fg = base.compose(f.name, g.name);
            for (const auto& h : base.arrows()) {
                if (g.cod != h.dom) continue;
                const auto& gh = base.compose(g.name, h.name);
                for (const auto& [phi, fp] : cells.at(f.name))
                    for (const auto& [psi, gp] : cells.at(g.name)) {
                        if (fp.second != gp.first) continue;
                        auto fpsi = *mu(f.name, g.name, phi, psi);
                        for (const auto& [chi, hp] : cells.at(h.name)) {
                            if (gp.second != hp.first) continue;
                            ++report.checked;
                            auto lhs = *mu(fg, h.name, fpsi, chi);
                            auto rhs = *mu(f.name, gh, phi, *mu(g.name, h.name, psi, chi));
                            if (lhs != rhs) {
                                report.fail("associativity", "triple (" + arrow_list({f.name, g.name, h.name}) + ")",
                                            "cells (" + arrow_list({phi, psi, chi}) + "): " + lhs + " != " + rhs);
                            }
                        }
                    }
            }
        }
    report.finalize();
    return report;
}

IncoherentSpec::IncoherentSpec(VerificationReport report)
    : std::runtime_error("specification fails verify_lax (" + std::to_string(report.failures.size()) +
                         " failures; first: " +
                         (report.failures.empty() ? std::string("none")
                                                  : report.failures.front().kind + " at " +
                                                        report.failures.front().location) +
                         ")"),
      report_(std::move(report)) {}

Comprehension build_comprehension(const LaxSpec& spec) {
    auto report = verify_lax(spec);
    if (!report.pass) throw IncoherentSpec(std::move(report));
    const auto cells = index_cells(spec);
    const auto& base = spec.base;

    Comprehension out;
    std::vector<Id> objects;
    for (const auto& a : base.objects())
        for (const auto& alpha : spec.fiber(a).elements()) {
            auto name = pair_name(a, alpha);
            objects.push_back(name);
            out.object_of.emplace(name, std::pair{a, alpha});
        }

    std::vector<Arrow> arrows;
    std::map<Id, Id> proj_ar;
    for (const auto& f : base.arrows())
        for (const auto& [phi, pos] : cells.at(f.name)) {
            auto name = pair_name(f.name, phi);
            arrows.push_back({name, pair_name(f.dom, pos.first), pair_name(f.cod, pos.second)});
            out.arrow_of.emplace(name, std::pair{f.name, phi});
            proj_ar.emplace(name, f.name);
        }

    std::map<Id, Id> identity;
    std::map<Id, Id> proj_ob;
    for (const auto& [name, ob] : out.object_of) {
        identity.emplace(name, pair_name(base.identity(ob.first), spec.eta.at(ob)));
        proj_ob.emplace(name, ob.first);
    }

    FinCategory::CompTable comp;
    for (const auto& x : arrows)
        for (const auto& y : arrows) {
            if (x.cod != y.dom) continue;
            const auto& [f, phi] = out.arrow_of.at(x.name);
            const auto& [g, psi] = out.arrow_of.at(y.name);
            comp.emplace(std::pair{x.name, y.name}, pair_name(base.compose(f, g), spec.mu.at({f, g, phi, psi})));
        }

    out.total = FinCategory(std::move(objects), std::move(arrows), std::move(identity), std::move(comp));
    out.projection = FinFunctor(out.total, base, std::move(proj_ob), std::move(proj_ar));
    return out;
}

LaxSpec specification_of_functor(const FinFunctor& e) {
    LaxSpec spec;
    spec.base = e.cod();
    const auto& total = e.dom();
    std::map<Id, std::vector<Id>> fibers;
    for (const auto& a : spec.base.objects()) fibers[a];
    for (const auto& x : total.objects()) fibers[e.on_object(x)].push_back(x);
    for (auto& [a, elems] : fibers) spec.obmap.emplace(a, FinSet("P" + a, elems));

    for (const auto& f : spec.base.arrows()) {
        std::vector<SpanCell> cells;
        for (const auto& phi : total.arrows())
            if (e.on_arrow(phi.name) == f.name) cells.push_back({phi.dom, phi.cod, {phi.name}});
        spec.armap.emplace(f.name, SetSpan(spec.fiber(f.dom), spec.fiber(f.cod), cells));
    }
    for (const auto& x : total.objects()) spec.eta.emplace(std::pair{e.on_object(x), x}, total.identity(x));
    for (const auto& [key, h] : total.table())
        spec.mu.emplace(LaxSpec::MuKey{e.on_arrow(key.first), e.on_arrow(key.second), key.first, key.second}, h);
    return spec;
}

VerificationReport roundtrip_check(const FinFunctor& e) {
    VerificationReport report;
    const auto spec = specification_of_functor(e);
    auto lax = verify_lax(spec);
    if (!lax.pass) {
        for (const auto& f : lax.failures) report.fail("spec_" + f.kind, f.location, f.detail);
        report.finalize();
        return report;
    }
    const auto comp = build_comprehension(spec);
    const auto& src = e.dom();
    const auto& tgt = comp.total;

    // Canonical witness: α ↦ <Eα, α>, φ ↦ <Eφ, φ>.
    std::map<Id, Id> ob, ar;
    for (const auto& x : src.objects()) ob.emplace(x, pair_name(e.on_object(x), x));
    for (const auto& f : src.arrows()) ar.emplace(f.name, pair_name(e.on_arrow(f.name), f.name));

    std::set<Id> ob_img, ar_img;
    for (const auto& [x, y] : ob) {
        ++report.checked;
        if (!tgt.has_object(y)) report.fail("object_missing", x, y);
        ob_img.insert(y);
    }
    for (const auto& [f, g] : ar) {
        ++report.checked;
        if (!tgt.has_arrow(g)) {
            report.fail("arrow_missing", f, g);
            continue;
        }
        ar_img.insert(g);
        const auto& a = src.arrow(f);
        const auto& b = tgt.arrow(g);
        if (b.dom != ob.at(a.dom) || b.cod != ob.at(a.cod)) report.fail("arrow_type", f, g);
        if (comp.projection.on_arrow(g) != e.on_arrow(f)) report.fail("projection", f, g);
    }
    if (ob_img.size() != tgt.objects().size() || ob_img.size() != src.objects().size())
        report.fail("object_bijection", "objects", std::to_string(src.objects().size()) + " vs " +
                                                       std::to_string(tgt.objects().size()));
    if (ar_img.size() != tgt.arrows().size() || ar_img.size() != src.arrows().size())
        report.fail("arrow_bijection", "arrows", std::to_string(src.arrows().size()) + " vs " +
                                                     std::to_string(tgt.arrows().size()));
    if (report.pass) {
        for (const auto& x : src.objects()) {
            ++report.checked;
            if (comp.projection.on_object(ob.at(x)) != e.on_object(x)) report.fail("projection", x, ob.at(x));
            if (tgt.identity(ob.at(x)) != ar.at(src.identity(x))) report.fail("identity", x);
        }
        for (const auto& [key, h] : src.table()) {
            ++report.checked;
            if (tgt.compose(ar.at(key.first), ar.at(key.second)) != ar.at(h))
                report.fail("composition", "(" + arrow_list({key.first, key.second}) + ")");
        }
    }
    report.details["objects"] = ob;
    report.details["arrows"] = ar;
    report.finalize();
    return report;
}

VerificationReport spec_roundtrip_check(const LaxSpec& spec) {
    VerificationReport report;
    const auto comp = build_comprehension(spec);
    const auto back = specification_of_functor(comp.projection);

    auto strip_ob = [&](const Id& n) { return comp.object_of.at(n).second; };
    auto strip_ar = [&](const Id& n) { return comp.arrow_of.at(n).second; };

    for (const auto& a : spec.base.objects()) {
        ++report.checked;
        std::vector<Id> renamed;
        for (const auto& x : back.fiber(a).elements()) renamed.push_back(strip_ob(x));
        std::sort(renamed.begin(), renamed.end());
        if (renamed != spec.fiber(a).elements()) report.fail("fiber", a);
    }
    for (const auto& f : spec.base.arrows()) {
        const auto& orig = spec.span(f.name);
        const auto& got = back.span(f.name);
        for (const auto& alpha : spec.fiber(f.dom).elements())
            for (const auto& beta : spec.fiber(f.cod).elements()) {
                ++report.checked;
                std::vector<Id> renamed;
                for (const auto& c : got.entry(pair_name(f.dom, alpha), pair_name(f.cod, beta)))
                    renamed.push_back(strip_ar(c));
                std::sort(renamed.begin(), renamed.end());
                if (renamed != orig.entry(alpha, beta)) report.fail("entry", f.name + "(" + alpha + "," + beta + ")");
            }
    }
    for (const auto& [key, cell] : back.eta) {
        ++report.checked;
        auto a = key.first;
        auto alpha = strip_ob(key.second);
        if (spec.eta.at({a, alpha}) != strip_ar(cell)) report.fail("eta", a + "," + alpha);
    }
    for (const auto& [key, cell] : back.mu) {
        ++report.checked;
        const auto& [f, g, phi, psi] = key;
        auto it = spec.mu.find({f, g, strip_ar(phi), strip_ar(psi)});
        if (it == spec.mu.end() || it->second != strip_ar(cell)) report.fail("mu", cell_location(f, g, phi, psi));
    }
    if (back.mu.size() != spec.mu.size()) report.fail("mu_count", "mu");
    report.finalize();
    return report;
}

bool is_faithful(const FinFunctor& e) {
    std::set<std::tuple<Id, Id, Id>> seen;
    for (const auto& f : e.dom().arrows())
        if (!seen.emplace(f.dom, f.cod, e.on_arrow(f.name)).second) return false;
    return true;
}

bool is_relational(const LaxSpec& spec) {
    for (const auto& [name, span] : spec.armap)
        for (std::size_t i = 0; i < span.dom().size(); ++i)
            for (std::size_t j = 0; j < span.cod().size(); ++j)
                if (span.entry(i, j).size() > 1) return false;
    return true;
}

}  // namespace cqm
