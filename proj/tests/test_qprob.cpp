#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqm/error.hpp"
#include "cqm/qprob.hpp"

#include <cmath>
#include <random>

using namespace cqm;

namespace {

CVector basis_vector(std::size_t d, std::size_t i) { return CVector::Unit(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)); }

Subspace line(const CVector& v) { return Subspace::span(static_cast<std::size_t>(v.size()), v); }

// <v|ρ|v> / <v|v> for a line.
double oracle_line_measure(const DensityMatrix& rho, const CVector& v) {
    return (v.adjoint() * rho.matrix() * v)(0, 0).real() / v.squaredNorm();
}

// {0, e0, e1, C²} with e0 ⊥ e1 summing to the whole space.
MeasureSample qubit_sample(const CMatrix& u) {
    return MeasureSample(2, {"zero", "e0", "e1", "full"},
                         {Subspace::zero(2), line(u.col(0)), line(u.col(1)), Subspace::full(2)}, {{1, 2, 3}});
}

}  // namespace

TEST_CASE("density matrices are validated") {
    CMatrix bad(2, 2);
    bad << 1, 0, 0, 1;
    CHECK_THROWS_AS(DensityMatrix::make(bad), InputError);
    CMatrix neg(2, 2);
    neg << 1.5, 0, 0, -0.5;
    CHECK_THROWS_AS(DensityMatrix::make(neg), InputError);
    CMatrix nonherm(2, 2);
    nonherm << 0.5, 0.1, 0, 0.5;
    CHECK_THROWS_AS(DensityMatrix::make(nonherm), InputError);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) CHECK_NOTHROW(DensityMatrix::make(DensityMatrix::random(3, rng).matrix()));
}

TEST_CASE("Born measure examples") {
    auto rho = DensityMatrix::pure(basis_vector(2, 0));
    CHECK(born_measure(rho, line(basis_vector(2, 0))) == doctest::Approx(1.0));
    CHECK(born_measure(rho, line(basis_vector(2, 1))) == doctest::Approx(0.0));
    auto mixed = DensityMatrix::maximally_mixed(2);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) CHECK(born_measure(mixed, line(random_matrix(2, 1, rng).col(0))) == doctest::Approx(0.5));
}

TEST_CASE("Born measure on lines matches the expectation value") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + t % 4;
        auto rho = DensityMatrix::random(d, rng);
        CVector v = random_matrix(d, 1, rng).col(0);
        CHECK(std::abs(born_measure(rho, line(v)) - oracle_line_measure(rho, v)) <= 1e-9);
    }
}

TEST_CASE("Born measures satisfy the axioms on generated samples") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 30; ++t) {
        const std::size_t d = 2 + t % 4;
        auto sample = MeasureSample::generate(d, rng);
        auto rho = DensityMatrix::random(d, rng);
        auto rep = check_measure_axioms(sample, born_table(rho, sample));
        CHECK(rep.pass);
        CHECK(!sample.pairs().empty());
    }
    auto s3 = MeasureSample::generate(3, rng, 3);
    CHECK(s3.size() == 20);
    CHECK(check_measure_axioms(s3, born_table(DensityMatrix::random(3, rng), s3)).pass);
}

TEST_CASE("broken measures are caught") {
    std::mt19937_64 rng(5);
    auto sample = MeasureSample::generate(3, rng);
    MeasureTable zero;
    for (const auto& id : sample.ids()) zero[id] = 0.0;
    auto rep = check_measure_axioms(sample, zero);
    CHECK_FALSE(rep.pass);
    bool normalization = false;
    for (const auto& f : rep.failures) normalization |= f.kind == "normalization";
    CHECK(normalization);

    auto table = born_table(DensityMatrix::random(3, rng), sample);
    table[sample.ids()[sample.pairs().front().left]] += 1e-3;
    auto bumped = check_measure_axioms(sample, table);
    CHECK_FALSE(bumped.pass);
    bool additivity = false;
    for (const auto& f : bumped.failures) additivity |= f.kind == "additivity";
    CHECK(additivity);
}

TEST_CASE("samples reject bad pairs") {
    auto e0 = line(basis_vector(2, 0));
    auto plus = line(CVector::Ones(2));
    CHECK_THROWS_AS(MeasureSample(2, {"zero", "a", "b", "full"}, {Subspace::zero(2), e0, plus, Subspace::full(2)},
                                  {{1, 2, 3}}),
                    InputError);
    CHECK_THROWS_AS(MeasureSample(2, {"a", "full"}, {e0, Subspace::full(2)}, {}), InputError);
}

TEST_CASE("measure preservation") {
    std::mt19937_64 rng(6);
    auto id = CMatrix::Identity(2, 2).eval();
    auto s = qubit_sample(id);
    auto mu = born_table(DensityMatrix::random(2, rng), s);
    CHECK(measure_morphism_check(LinearMap::identity(2), s, mu, s, mu).ok);

    for (int t = 0; t < 30; ++t) {
        CMatrix u = random_unitary(2, rng);
        CMatrix w = random_unitary(2, rng);
        auto source = qubit_sample(w);
        auto target = qubit_sample(u * w);
        auto rho = DensityMatrix::random(2, rng);
        auto nu = born_table(rho, target);
        auto pulled = DensityMatrix::make(u.adjoint() * rho.matrix() * u);
        auto mu_u = born_table(pulled, source);
        CHECK(measure_morphism_check(LinearMap(u), source, mu_u, target, nu).ok);
        // The unpulled state fails unless it happens to agree.
        auto mu_bad = born_table(DensityMatrix::pure(basis_vector(2, 0)), source);
        auto nu_good = born_table(DensityMatrix::pure(u * basis_vector(2, 1)), target);
        CHECK_FALSE(measure_morphism_check(LinearMap(u), source, mu_bad, target, nu_good).ok);
    }

    CMatrix p0 = CMatrix::Zero(2, 2);
    p0(0, 0) = 1;
    auto half = born_table(DensityMatrix::maximally_mixed(2), s);
    auto v = measure_morphism_check(LinearMap(p0), s, half, s, half);
    CHECK_FALSE(v.ok);
    CHECK(!v.diagnostic.empty());
}

TEST_CASE("images outside the target sample are input errors") {
    std::mt19937_64 rng(7);
    CMatrix u = random_unitary(2, rng);
    auto s = qubit_sample(CMatrix::Identity(2, 2));
    auto mu = born_table(DensityMatrix::maximally_mixed(2), s);
    CHECK_THROWS_AS(measure_morphism_check(LinearMap(u), s, mu, s, mu), InputError);
    CHECK_THROWS_AS(measure_morphism_check(LinearMap::identity(3), s, mu, s, mu), DomainMismatch);
}

TEST_CASE("random unitaries are unitary") {
    std::mt19937_64 rng(8);
    for (std::size_t d = 1; d <= 6; ++d) {
        CMatrix u = random_unitary(d, rng);
        CHECK((u.adjoint() * u - CMatrix::Identity(d, d)).norm() <= 1e-9);
    }
}
