#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqm/corpus.hpp"
#include "cqm/error.hpp"
#include "cqm/json_io.hpp"

#include <random>

using namespace cqm;
using nlohmann::json;

namespace {

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("relations round-trip") {
    std::mt19937_64 rng(1);
    std::bernoulli_distribution coin(0.5);
    auto x = corpus::numbered(3, "X"), y = corpus::numbered(4, "Y");
    for (int t = 0; t < 20; ++t) {
        std::vector<Bits> rows(3, Bits(4));
        for (auto& r : rows)
            for (std::size_t j = 0; j < 4; ++j) r[j] = coin(rng);
        FinRel r(x, y, rows);
        CHECK(io::finrel_from(io::to_json(r), "") == r);
    }
}

TEST_CASE("test spaces round-trip") {
    for (const auto& f : corpus::all_test_spaces(3)) {
        TestSpace t(corpus::numbered(3), f);
        CHECK(io::testspace_from(io::to_json(t), "") == t);
    }
}

TEST_CASE("specifications round-trip") {
    auto spec = corpus::chain_spec();
    auto back = io::lax_from(io::to_json(spec), "");
    CHECK(io::to_json(back) == io::to_json(spec));
    CHECK(verify_lax(back).pass);
}

TEST_CASE("dictionaries and multitestables round-trip") {
    auto d = corpus::mub3();
    auto back = io::raydict_from(io::to_json(d), "", 1e-9);
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(same_ray(back[i], d[i]));

    MultiTestable m(corpus::bell_instance().crudest, {2, 1});
    CHECK(io::multitestable_from(io::to_json(m), "", {}) == m);
}

TEST_CASE("complex numbers") {
    CHECK(io::complex_from(json(1.5), "") == Complex(1.5, 0));
    CHECK(io::complex_from(json::array({0.5, -2}), "") == Complex(0.5, -2));
    CHECK(io::complex_from(io::to_json(Complex(3, 4)), "") == Complex(3, 4));
    CHECK_THROWS_AS(io::complex_from(json("x"), "/z"), InputError);
}

TEST_CASE("errors carry the JSON path") {
    json bad = {{"universe", {"0", "1"}}, {"tests", {{"0"}, {"7"}}}};
    CHECK(error_of([&] { io::testspace_from(bad, "/left"); }).starts_with("/left"));
    json rel = {{"dom", {"a"}}, {"cod", {"b"}}, {"pairs", {{"a", "c"}}}};
    CHECK(error_of([&] { io::finrel_from(rel, "/relation"); }).starts_with("/relation"));
    json omega = {{"universe", {"0"}}, {"tests", {{"0"}}}, {"omega", {{"0", 0}}}};
    CHECK(error_of([&] { io::multitestable_from(omega, "/source", {}); }).find("positive") != std::string::npos);
    CHECK_THROWS_AS(io::check_schema(json{{"schema", "other"}}), InputError);
    CHECK_NOTHROW(io::check_schema(json{{"schema", io::kSchema}}));
}
