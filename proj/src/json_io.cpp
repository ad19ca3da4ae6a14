#include "cqm/json_io.hpp"

#include "cqm/error.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

namespace cqm {

void VerificationReport::finalize() { std::sort(failures.begin(), failures.end()); }

void VerificationReport::merge(const VerificationReport& other) {
    pass = pass && other.pass;
    checked += other.checked;
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

nlohmann::json to_json(const VerificationReport& report) {
    nlohmann::json fs = nlohmann::json::array();
    for (const auto& f : report.failures) fs.push_back({{"kind", f.kind}, {"location", f.location}, {"detail", f.detail}});
    return {{"schema", io::kSchema},
            {"pass", report.pass},
            {"checked", report.checked},
            {"failures", fs},
            {"details", report.details}};
}

namespace io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw InputError((path.empty() ? std::string("/") : path) + ": " + what);
}

const json& at(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(path, std::string("missing field '") + key + "'");
    return *it;
}

std::string str(const json& j, const std::string& path) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    bad(path, "expected a string");
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    return j.get<double>();
}

const json& arr(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array");
    return j;
}

std::vector<Id> names(const json& j, const std::string& path) {
    std::vector<Id> out;
    const auto& a = arr(j, path);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(str(a[i], path + "/" + std::to_string(i)));
    return out;
}

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InputError& e) {
        if (std::string(e.what()).starts_with("/")) throw;
        bad(path, e.what());
    } catch (const std::logic_error& e) {
        bad(path, e.what());
    }
}

}  // namespace

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        json j = json::parse(in);
        check_schema(j);
        return j;
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

void check_schema(const json& j) {
    if (j.is_object() && j.contains("schema") && j["schema"] != kSchema)
        throw InputError("/schema: unsupported schema " + j["schema"].dump());
}

FinSet finset_from(const json& j, const std::string& path, const std::string& name) {
    if (j.is_array()) return wrap(path, [&] { return FinSet(name, names(j, path)); });
    const std::string n = j.contains("name") ? str(j["name"], path + "/name") : name;
    return wrap(path, [&] { return FinSet(n, names(at(j, "elements", path), path + "/elements")); });
}

json to_json(const FinSet& x) { return {{"name", x.name()}, {"elements", x.elements()}}; }

FinRel finrel_from(const json& j, const std::string& path) {
    FinSet dom = finset_from(at(j, "dom", path), path + "/dom", "dom");
    FinSet cod = finset_from(at(j, "cod", path), path + "/cod", "cod");
    std::vector<std::pair<Id, Id>> pairs;
    const auto& ps = arr(at(j, "pairs", path), path + "/pairs");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::string p = path + "/pairs/" + std::to_string(i);
        if (!ps[i].is_array() || ps[i].size() != 2) bad(p, "expected a pair");
        pairs.emplace_back(str(ps[i][0], p + "/0"), str(ps[i][1], p + "/1"));
    }
    return wrap(path, [&] { return FinRel(dom, cod, pairs); });
}

json to_json(const FinRel& r) {
    json ps = json::array();
    for (const auto& [x, y] : r.pairs()) ps.push_back({x, y});
    return {{"dom", to_json(r.dom())}, {"cod", to_json(r.cod())}, {"pairs", ps}};
}

SetSpan setspan_from(const json& j, const std::string& path, const FinSet& dom, const FinSet& cod) {
    std::vector<SpanCell> cells;
    const json& cs = j.is_array() ? j : at(j, "cells", path);
    const std::string base = j.is_array() ? path : path + "/cells";
    arr(cs, base);
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string p = base + "/" + std::to_string(i);
        cells.push_back({str(at(cs[i], "row", p), p + "/row"), str(at(cs[i], "col", p), p + "/col"),
                         names(at(cs[i], "names", p), p + "/names")});
    }
    return wrap(path, [&] { return SetSpan(dom, cod, cells); });
}

json to_json(const SetSpan& s) {
    json cs = json::array();
    for (const auto& c : s.cells()) cs.push_back({{"row", c.row}, {"col", c.col}, {"names", c.names}});
    return {{"dom", to_json(s.dom())}, {"cod", to_json(s.cod())}, {"cells", cs}};
}

TestSpace testspace_from(const json& j, const std::string& path) {
    FinSet x = finset_from(at(j, "universe", path), path + "/universe", "X");
    std::vector<std::vector<Id>> tests;
    const auto& ts = arr(at(j, "tests", path), path + "/tests");
    for (std::size_t i = 0; i < ts.size(); ++i) tests.push_back(names(ts[i], path + "/tests/" + std::to_string(i)));
    return wrap(path, [&] { return TestSpace::from_names(x, tests); });
}

json family_json(const FinSet& x, const Family& f) {
    json out = json::array();
    for (Mask m : f) {
        json t = json::array();
        for (std::size_t i = 0; i < x.size(); ++i)
            if (m & bit(i)) t.push_back(x[i]);
        out.push_back(t);
    }
    return out;
}

json to_json(const TestSpace& t) { return {{"universe", t.universe().elements()}, {"tests", family_json(t.universe(), t.tests())}}; }

FinCategory category_from(const json& j, const std::string& path) {
    std::vector<Id> objects = names(at(j, "objects", path), path + "/objects");
    std::vector<Arrow> arrows;
    const auto& as = arr(at(j, "arrows", path), path + "/arrows");
    for (std::size_t i = 0; i < as.size(); ++i) {
        const std::string p = path + "/arrows/" + std::to_string(i);
        arrows.push_back({str(at(as[i], "name", p), p + "/name"), str(at(as[i], "dom", p), p + "/dom"),
                          str(at(as[i], "cod", p), p + "/cod")});
    }
    std::map<Id, Id> ids;
    const auto& is = at(j, "identities", path);
    if (!is.is_object()) bad(path + "/identities", "expected an object");
    for (auto it = is.begin(); it != is.end(); ++it) ids[it.key()] = str(it.value(), path + "/identities/" + it.key());
    FinCategory::CompTable comp;
    if (j.contains("compose")) {
        const auto& cs = arr(j["compose"], path + "/compose");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::string p = path + "/compose/" + std::to_string(i);
            if (!cs[i].is_array() || cs[i].size() != 3) bad(p, "expected [f, g, f;g]");
            comp[{str(cs[i][0], p), str(cs[i][1], p)}] = str(cs[i][2], p);
        }
    }
    // Composites with identities may be left implicit.
    std::map<Id, Arrow> by_name;
    for (const auto& a : arrows) by_name[a.name] = a;
    for (const auto& a : arrows) {
        auto d = ids.find(a.dom), c = ids.find(a.cod);
        if (d != ids.end()) comp.try_emplace({d->second, a.name}, a.name);
        if (c != ids.end()) comp.try_emplace({a.name, c->second}, a.name);
    }
    return wrap(path, [&] { return FinCategory(objects, arrows, ids, comp); });
}

json to_json(const FinCategory& c) {
    json as = json::array();
    for (const auto& a : c.arrows()) as.push_back({{"name", a.name}, {"dom", a.dom}, {"cod", a.cod}});
    json cs = json::array();
    for (const auto& [k, h] : c.table()) cs.push_back({k.first, k.second, h});
    return {{"objects", c.objects()}, {"arrows", as}, {"identities", c.identities()}, {"compose", cs}};
}

namespace {

std::map<Id, Id> string_map(const json& j, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    std::map<Id, Id> m;
    for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = str(it.value(), path + "/" + it.key());
    return m;
}

}  // namespace

FinFunctor functor_from(const json& j, const std::string& path) {
    FinCategory dom = category_from(at(j, "dom", path), path + "/dom");
    FinCategory cod = category_from(at(j, "cod", path), path + "/cod");
    auto ob = string_map(at(j, "obmap", path), path + "/obmap");
    auto ar = string_map(at(j, "armap", path), path + "/armap");
    return wrap(path, [&] { return FinFunctor(dom, cod, ob, ar); });
}

LaxSpec lax_from(const json& j, const std::string& path) {
    LaxSpec spec;
    spec.base = category_from(at(j, "base", path), path + "/base");
    const auto& fs = at(j, "fibers", path);
    if (!fs.is_object()) bad(path + "/fibers", "expected an object");
    for (const auto& a : spec.base.objects()) {
        if (!fs.contains(a)) bad(path + "/fibers", "no fiber for object '" + a + "'");
        spec.obmap[a] = finset_from(fs[a], path + "/fibers/" + a, "P" + a);
    }
    const auto& ss = at(j, "spans", path);
    if (!ss.is_object()) bad(path + "/spans", "expected an object");
    for (const auto& f : spec.base.arrows()) {
        if (!ss.contains(f.name)) bad(path + "/spans", "no span for arrow '" + f.name + "'");
        spec.armap[f.name] = setspan_from(ss[f.name], path + "/spans/" + f.name, spec.obmap[f.dom], spec.obmap[f.cod]);
    }
    const auto& mu = arr(at(j, "mu", path), path + "/mu");
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const std::string p = path + "/mu/" + std::to_string(i);
        if (!mu[i].is_array() || mu[i].size() != 5) bad(p, "expected [f, g, phi, psi, cell]");
        spec.mu[{str(mu[i][0], p), str(mu[i][1], p), str(mu[i][2], p), str(mu[i][3], p)}] = str(mu[i][4], p);
    }
    const auto& eta = arr(at(j, "eta", path), path + "/eta");
    for (std::size_t i = 0; i < eta.size(); ++i) {
        const std::string p = path + "/eta/" + std::to_string(i);
        if (!eta[i].is_array() || eta[i].size() != 3) bad(p, "expected [object, element, cell]");
        spec.eta[{str(eta[i][0], p), str(eta[i][1], p)}] = str(eta[i][2], p);
    }
    return spec;
}

json to_json(const LaxSpec& spec) {
    json fibers = json::object(), spans = json::object(), mu = json::array(), eta = json::array();
    for (const auto& [a, x] : spec.obmap) fibers[a] = x.elements();
    for (const auto& [f, s] : spec.armap) spans[f] = to_json(s)["cells"];
    for (const auto& [k, v] : spec.mu) mu.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k), v});
    for (const auto& [k, v] : spec.eta) eta.push_back({k.first, k.second, v});
    return {{"base", to_json(spec.base)}, {"fibers", fibers}, {"spans", spans}, {"mu", mu}, {"eta", eta}};
}

Complex complex_from(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {num(j[0], path + "/0"), num(j[1], path + "/1")};
    bad(path, "expected a number or [re, im]");
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

CMatrix matrix_from(const json& j, const std::string& path) {
    const auto& rows = arr(j, path);
    const std::size_t n = rows.size();
    const std::size_t m = n ? arr(rows[0], path + "/0").size() : 0;
    CMatrix out(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string p = path + "/" + std::to_string(i);
        if (arr(rows[i], p).size() != m) bad(p, "ragged matrix row");
        for (std::size_t k = 0; k < m; ++k)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                complex_from(rows[i][k], p + "/" + std::to_string(k));
    }
    return out;
}

json to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(to_json(m(i, k)));
        rows.push_back(r);
    }
    return rows;
}

CVector vector_from(const json& j, const std::string& path) {
    const auto& a = arr(j, path);
    CVector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from(a[i], path + "/" + std::to_string(i));
    return v;
}

json to_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
    return out;
}

RayDict raydict_from(const json& j, const std::string& path, double eps) {
    const std::string name = j.contains("name") ? str(j["name"], path + "/name") : "H";
    const auto& rs = arr(at(j, "rays", path), path + "/rays");
    std::vector<Ray> rays;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const std::string p = path + "/rays/" + std::to_string(i);
        rays.push_back(wrap(p, [&] { return Ray::from_vector(vector_from(rs[i], p), eps); }));
    }
    std::size_t dim = rays.empty() ? 0 : rays.front().dim();
    if (j.contains("dim")) dim = at(j, "dim", path).get<std::size_t>();
    return wrap(path, [&] { return RayDict(name, dim, rays, eps); });
}

json to_json(const RayDict& d) {
    json rs = json::array();
    for (const auto& r : d.rays()) rs.push_back(to_json(r.vector()));
    return {{"name", d.name()}, {"dim", d.dim()}, {"rays", rs}};
}

HilbTestable hilb_from(const json& j, const std::string& path, double eps) {
    RayDict u = raydict_from(at(j, "universe", path), path + "/universe", eps);
    RaySet alpha;
    const auto& a = arr(at(j, "alpha", path), path + "/alpha");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number_unsigned() || a[i].get<std::size_t>() >= u.size())
            bad(path + "/alpha/" + std::to_string(i), "expected a ray index");
        alpha.push_back(a[i].get<std::size_t>());
    }
    std::sort(alpha.begin(), alpha.end());
    alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
    return HilbTestable{std::move(u), std::move(alpha), num(at(j, "c", path), path + "/c"), SpaceVariant::plain};
}

MeasureSample sample_from(const json& j, const std::string& path, double eps) {
    const std::size_t dim = at(j, "dim", path).get<std::size_t>();
    std::vector<std::string> ids;
    std::vector<Subspace> subs;
    std::map<std::string, std::size_t> index;
    const auto& ss = arr(at(j, "subspaces", path), path + "/subspaces");
    for (std::size_t i = 0; i < ss.size(); ++i) {
        const std::string p = path + "/subspaces/" + std::to_string(i);
        ids.push_back(str(at(ss[i], "id", p), p + "/id"));
        index[ids.back()] = i;
        const auto& basis = arr(at(ss[i], "basis", p), p + "/basis");
        CMatrix cols(dim, basis.size());
        for (std::size_t k = 0; k < basis.size(); ++k) {
            CVector v = vector_from(basis[k], p + "/basis/" + std::to_string(k));
            if (static_cast<std::size_t>(v.size()) != dim) bad(p + "/basis/" + std::to_string(k), "wrong dimension");
            cols.col(static_cast<Eigen::Index>(k)) = v;
        }
        subs.push_back(Subspace::span(dim, cols, eps));
    }
    std::vector<OrthogonalPair> pairs;
    if (j.contains("pairs")) {
        const auto& ps = arr(j["pairs"], path + "/pairs");
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const std::string p = path + "/pairs/" + std::to_string(i);
            if (!ps[i].is_array() || ps[i].size() != 3) bad(p, "expected [left, right, sum]");
            auto lookup = [&](const json& x) {
                auto it = index.find(str(x, p));
                if (it == index.end()) bad(p, "unknown subspace id " + x.dump());
                return it->second;
            };
            pairs.push_back({lookup(ps[i][0]), lookup(ps[i][1]), lookup(ps[i][2])});
        }
    }
    return wrap(path, [&] { return MeasureSample(dim, ids, subs, pairs, eps); });
}

MeasureTable table_from(const json& j, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    MeasureTable t;
    for (auto it = j.begin(); it != j.end(); ++it) t[it.key()] = num(it.value(), path + "/" + it.key());
    return t;
}

MultiTestable multitestable_from(const json& j, const std::string& path, const SizeGuard& guard) {
    TestSpace t = testspace_from(j, path);
    std::vector<unsigned> omega(t.universe().size(), 1);
    if (j.contains("omega")) {
        const auto& o = j["omega"];
        if (!o.is_object()) bad(path + "/omega", "expected an object");
        for (auto it = o.begin(); it != o.end(); ++it) {
            auto i = t.universe().index_of(it.key());
            if (!i) bad(path + "/omega/" + it.key(), "not an element of the universe");
            if (!it.value().is_number_integer() || it.value().get<long long>() <= 0)
                bad(path + "/omega/" + it.key(), "multiplicity must be a positive integer");
            omega[*i] = it.value().get<unsigned>();
        }
    }
    return wrap(path, [&] { return MultiTestable(Testable::make(t, guard), omega); });
}

json to_json(const MultiTestable& a) {
    json j = to_json(a.testable().space());
    json o = json::object();
    for (std::size_t i = 0; i < a.omega().size(); ++i) o[a.universe()[i]] = a.omega()[i];
    j["omega"] = o;
    return j;
}

MultiMorphism multimorphism_from(const json& j, const std::string& path) {
    return {finrel_from(at(j, "r", path), path + "/r"), finrel_from(at(j, "R", path), path + "/R"),
            finrel_from(at(j, "Rbot", path), path + "/Rbot")};
}

}  // namespace io
}  // namespace cqm
