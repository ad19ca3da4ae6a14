// cqm: command-line front end over the model checkers.

#include "cqm/axioms.hpp"
#include "cqm/battery.hpp"
#include "cqm/comprehension.hpp"
#include "cqm/error.hpp"
#include "cqm/fhilb.hpp"
#include "cqm/json_io.hpp"
#include "cqm/multitest.hpp"
#include "cqm/qprob.hpp"
#include "cqm/testspace.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

using namespace cqm;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string input;
    std::string output = "-";
    double tolerance = kDefaultEps;
    std::size_t max_size = 16;
    std::size_t max_tests = 256;
    std::uint64_t seed = 7;
    unsigned jobs = 1;
    std::vector<int> only;

    SizeGuard guard() const { return {max_size, max_tests}; }
};

struct Outcome {
    bool pass = true;
    json details = json::object();
    json failures = json::array();
};

Outcome from_report(const VerificationReport& r) {
    json j = to_json(r);
    return {r.pass, j["details"], j["failures"]};
}

json family(const FinSet& x, const Family& f) { return io::family_json(x, f); }

json certificate_json(const FinSet& x, const TestabilityCertificate& c) {
    return {{"testable", c.testable},
            {"reason", c.reason},
            {"complement", family(x, c.complement)},
            {"double_complement", family(x, c.double_complement)}};
}

Outcome cmd_complement(const json& in, const RunConfig& cfg) {
    const TestSpace t = io::testspace_from(in, "");
    return {true, {{"complement", family(t.universe(), complement(t, cfg.guard()))}}, json::array()};
}

Outcome cmd_testable(const json& in, const RunConfig& cfg) {
    const TestSpace t = io::testspace_from(in, "");
    const auto c = is_testable(t, cfg.guard());
    return {c.testable, certificate_json(t.universe(), c), json::array()};
}

Outcome cmd_product(const json& in, const RunConfig& cfg, bool is_par) {
    const Testable a = Testable::make(io::testspace_from(in.at("left"), "/left"), cfg.guard());
    const Testable b = Testable::make(io::testspace_from(in.at("right"), "/right"), cfg.guard());
    const ProductIndex idx(a.universe(), b.universe());
    const Family f = is_par ? par_family(a, b, idx, cfg.guard()) : tensor_family(a.space(), b.space(), idx);
    const auto c = is_testable(TestSpace(idx.set(), f), cfg.guard());
    return {c.testable,
            {{"universe", idx.set().elements()}, {"tests", family(idx.set(), f)}, {"certificate", certificate_json(idx.set(), c)}},
            json::array()};
}

Outcome cmd_vectors(const json& in, const RunConfig& cfg) {
    std::optional<ProductFactors> factors;
    Testable t;
    if (in.contains("left")) {
        const Testable a = Testable::make(io::testspace_from(in.at("left"), "/left"), cfg.guard());
        const Testable b = Testable::make(io::testspace_from(in.at("right"), "/right"), cfg.guard());
        const std::string op = in.value("op", "tensor");
        if (op != "tensor" && op != "par") throw InputError("/op: expected \"tensor\" or \"par\"");
        t = op == "par" ? par(a, b, cfg.guard()) : tensor(a, b, cfg.guard());
        factors = ProductFactors{a, b};
    } else {
        t = Testable::make(io::testspace_from(in, ""), cfg.guard());
    }
    json vs = json::array();
    for (const auto& v : enumerate_vectors(t, factors, cfg.guard())) {
        json e = {{"subset", t.space().named(v.subset)}};
        if (v.separable) e["separable"] = *v.separable;
        vs.push_back(e);
    }
    return {true, {{"universe", t.universe().elements()}, {"vectors", vs}}, json::array()};
}

Outcome cmd_morphism(const json& in, const RunConfig& cfg) {
    const Testable a = Testable::make(io::testspace_from(in.at("source"), "/source"), cfg.guard());
    const Testable b = Testable::make(io::testspace_from(in.at("target"), "/target"), cfg.guard());
    const FinRel r = io::finrel_from(in.at("relation"), "/relation");
    const auto v = morphism_check(r, a, b);
    Outcome o{v.ok, {{"diagnostic", v.diagnostic}}, json::array()};
    if (!v.ok) o.failures.push_back({{"kind", "morphism"}, {"location", "relation"}, {"detail", v.diagnostic}});
    return o;
}

Outcome cmd_comprehend(const json& in, const RunConfig&) {
    const LaxSpec spec = io::lax_from(in, "");
    const auto rep = verify_lax(spec);
    Outcome o = from_report(rep);
    if (rep.pass) {
        const auto c = build_comprehension(spec);
        o.details["total"] = io::to_json(c.total);
        o.details["projection"] = {{"obmap", c.projection.obmap()}, {"armap", c.projection.armap()}};
        o.details["relational"] = is_relational(spec);
    }
    return o;
}

Outcome cmd_roundtrip(const json& in, const RunConfig&) {
    if (in.contains("base")) return from_report(spec_roundtrip_check(io::lax_from(in, "")));
    const FinFunctor e = io::functor_from(in, "");
    Outcome o = from_report(roundtrip_check(e));
    o.details["faithful"] = is_faithful(e);
    o.details["relational"] = is_relational(specification_of_functor(e));
    return o;
}

Outcome cmd_hilb_testable(const json& in, const RunConfig& cfg) {
    const HilbTestable h = io::hilb_from(in, "", cfg.tolerance);
    const auto c = is_hilb_testable(h.alpha, h.c, h.universe, cfg.tolerance);
    return {c.testable,
            {{"testable", c.testable},
             {"reason", c.reason},
             {"complement", c.complement},
             {"double_complement", c.double_complement},
             {"alpha_spans", c.alpha_spans},
             {"complement_spans", c.complement_spans}},
            json::array()};
}

Outcome cmd_hilb_morphism(const json& in, const RunConfig& cfg) {
    const HilbTestable a = io::hilb_from(in.at("source"), "/source", cfg.tolerance);
    const HilbTestable b = io::hilb_from(in.at("target"), "/target", cfg.tolerance);
    const LinearMap f(io::matrix_from(in.at("map"), "/map"));
    const auto v = hilb_testable_morphism_check(f, a, b, cfg.tolerance);
    Outcome o{v.ok, {{"diagnostic", v.diagnostic}}, json::array()};
    if (!v.ok) o.failures.push_back({{"kind", "morphism"}, {"location", "map"}, {"detail", v.diagnostic}});
    return o;
}

Outcome cmd_measure(const json& in, const RunConfig& cfg) {
    const MeasureSample s = io::sample_from(in.at("sample"), "/sample", cfg.tolerance);
    MeasureTable mu;
    if (in.contains("density"))
        mu = born_table(DensityMatrix::make(io::matrix_from(in["density"], "/density"), cfg.tolerance), s);
    else
        mu = io::table_from(in.at("measure"), "/measure");
    Outcome o = from_report(check_measure_axioms(s, mu, cfg.tolerance));
    o.details["measure"] = mu;
    if (in.contains("map")) {
        const LinearMap f(io::matrix_from(in["map"], "/map"));
        const MeasureSample t = io::sample_from(in.at("target_sample"), "/target_sample", cfg.tolerance);
        MeasureTable nu;
        if (in.contains("target_density"))
            nu = born_table(DensityMatrix::make(io::matrix_from(in["target_density"], "/target_density"), cfg.tolerance), t);
        else
            nu = io::table_from(in.at("target_measure"), "/target_measure");
        const auto v = measure_morphism_check(f, s, mu, t, nu, cfg.tolerance);
        o.details["preserved"] = v.ok;
        if (!v.ok) {
            o.pass = false;
            o.failures.push_back({{"kind", "preservation"}, {"location", "map"}, {"detail", v.diagnostic}});
        }
    }
    return o;
}

Outcome cmd_multi(const json& in, const RunConfig& cfg) {
    const MultiTestable a = io::multitestable_from(in.at("source"), "/source", cfg.guard());
    Outcome o;
    o.details["source_etale"] = etale(a).elements.elements();
    o.details["source_complement_etale"] = etale_complement(a).elements.elements();
    if (in.contains("target")) {
        const MultiTestable b = io::multitestable_from(in["target"], "/target", cfg.guard());
        const MultiMorphism m = io::multimorphism_from(in.at("morphism"), "/morphism");
        const auto v = multimorphism_check(m, a, b);
        o.pass = v.ok;
        o.details["diagnostic"] = v.diagnostic;
        if (!v.ok) o.failures.push_back({{"kind", "multimorphism"}, {"location", "morphism"}, {"detail", v.diagnostic}});
    }
    return o;
}

Outcome cmd_axioms(const json& in, const RunConfig& cfg) {
    const std::string law = in.at("law").get<std::string>();
    if (law == "compact") {
        const FinSet x = io::finset_from(in.at("carrier"), "/carrier");
        DualityData d = DualityData::diagonal(x);
        if (in.contains("eta")) d.eta = io::finrel_from(in["eta"], "/eta");
        if (in.contains("eps")) d.eps = io::finrel_from(in["eps"], "/eps");
        return from_report(check_compact_adjunction(d));
    }
    if (law == "frobenius") return from_report(check_frobenius(AlgebraData::of_multiplication(io::finrel_from(in.at("nabla"), "/nabla"))));
    auto testable = [&](const char* key) {
        return Testable::make(io::testspace_from(in.at(key), std::string("/") + key), cfg.guard());
    };
    if (law == "mix") return from_report(check_mix_and_distributivity(testable("a"), testable("b"), testable("c"), cfg.guard()));
    if (law == "star") return from_report(check_star_object_laws(testable("a"), testable("b"), cfg.guard()));
    if (law == "autonomous") return from_report(check_autonomous_duality(testable("a"), cfg.guard()));
    throw InputError("/law: unknown law '" + law + "'");
}

int emit(const std::string& command, const RunConfig& cfg, const Outcome& o) {
    json report = {{"schema", io::kSchema},
                   {"command", command},
                   {"pass", o.pass},
                   {"details", o.details},
                   {"failures", o.failures},
                   {"provenance",
                    {{"input", cfg.input}, {"tolerance", cfg.tolerance}, {"max_size", cfg.max_size}, {"seed", cfg.seed}}}};
    io::write_file(cfg.output, report);
    return o.pass ? 0 : 1;
}

int run_suite(const RunConfig& cfg) {
    BatteryConfig bc{cfg.seed, cfg.tolerance, cfg.guard(), cfg.jobs};
    const std::set<int> only(cfg.only.begin(), cfg.only.end());
    const auto results = run_battery(bc, only);
    for (const auto& r : results)
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.summary << "\n";
    const json j = battery_json(results, bc);
    io::write_file(cfg.output, j);
    return j["pass"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-model checker for comprehension categories, testables and quantum structures"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--output,-o", cfg.output, "Report path, - for stdout")->envname("CQM_OUTPUT");
    app.add_option("--tolerance", cfg.tolerance, "Numerical tolerance")->envname("CQM_TOLERANCE")->check(CLI::PositiveNumber);
    app.add_option("--max-size", cfg.max_size, "Largest universe for exponential searches")
        ->envname("CQM_MAX_SIZE")
        ->check(CLI::Range(1, 64));
    app.add_option("--max-tests", cfg.max_tests, "Largest family for exponential searches")
        ->envname("CQM_MAX_TESTS")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Random seed")->envname("CQM_SEED");
    app.add_option("--jobs", cfg.jobs, "Worker threads")->envname("CQM_JOBS")->check(CLI::Range(1, 256));

    using Handler = std::function<Outcome(const json&, const RunConfig&)>;
    const std::vector<std::tuple<std::string, std::string, Handler>> commands{
        {"complement", "Complement of a test space", cmd_complement},
        {"testable-check", "Testability certificate", cmd_testable},
        {"tensor", "Tensor of two testables", [](const json& j, const RunConfig& c) { return cmd_product(j, c, false); }},
        {"par", "Par of two testables", [](const json& j, const RunConfig& c) { return cmd_product(j, c, true); }},
        {"vectors", "Vectors of a testable, classified over declared factors", cmd_vectors},
        {"morphism-check", "Check a relation between testables", cmd_morphism},
        {"comprehend", "Verify a lax specification and build its comprehension", cmd_comprehend},
        {"roundtrip", "Functor or specification round trip", cmd_roundtrip},
        {"hilb-testable", "Hilbert testability over a ray dictionary", cmd_hilb_testable},
        {"hilb-morphism", "Check a linear map between Hilbert testables", cmd_hilb_morphism},
        {"measure-check", "Measure axioms and preservation on samples", cmd_measure},
        {"multi-check", "Multitestable etale forms and morphisms", cmd_multi},
        {"axioms", "Compact, Frobenius, mix and star laws", cmd_axioms},
    };
    std::string chosen;
    Handler handler;
    for (const auto& [name, help, fn] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--input,-i", cfg.input, "Input JSON")->required()->check(CLI::ExistingFile);
        sub->callback([&, name = name, fn = fn] {
            chosen = name;
            handler = fn;
        });
    }
    auto* suite = app.add_subcommand("suite", "Run the acceptance battery");
    suite->add_option("--only", cfg.only, "Criterion ids to run")->check(CLI::Range(1, kCriteria));
    suite->callback([&] { chosen = "suite"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (chosen == "suite") return run_suite(cfg);
        const json in = io::read_file(cfg.input);
        return emit(chosen, cfg, handler(in, cfg));
    } catch (const NotTestable& e) {
        Outcome o{false, {{"certificate", certificate_json(e.universe(), e.certificate())}}, json::array()};
        o.failures.push_back({{"kind", "not_testable"}, {"location", e.universe().name()}, {"detail", e.what()}});
        return emit(chosen, cfg, o);
    } catch (const IncoherentSpec& e) {
        return emit(chosen, cfg, from_report(e.report()));
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
}
