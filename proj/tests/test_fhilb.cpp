#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqm/corpus.hpp"
#include "cqm/error.hpp"
#include "cqm/fhilb.hpp"
#include "cqm/qprob.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace cqm;

namespace {

constexpr double kTol = 1e-9;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

CVector vec(std::initializer_list<Complex> xs) {
    CVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v(i++) = x;
    return v;
}

Subspace span1(const CVector& v) { return Subspace::span(static_cast<std::size_t>(v.size()), v); }

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

// |<x|y>| / (|x||y|) straight from the coordinates.
double oracle_colinearity(const CVector& x, const CVector& y) {
    Complex ip = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) ip += std::conj(x(i)) * y(i);
    return std::abs(ip) / (x.norm() * y.norm());
}

RaySet oracle_c_complement(const RaySet& alpha, double c, const RayDict& u) {
    RaySet out;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (std::all_of(alpha.begin(), alpha.end(), [&](std::size_t a) {
                return std::abs(oracle_colinearity(u[i].vector(), u[a].vector()) - c) <= kTol;
            }))
            out.push_back(i);
    return out;
}

HilbTestable pauli_z() { return make_hilb_testable(corpus::pauli6(), corpus::kZ, kInvSqrt2); }

}  // namespace

TEST_CASE("colinearity") {
    auto e0 = Ray::from_vector(vec({1, 0}));
    auto e1 = Ray::from_vector(vec({0, 1}));
    auto plus = Ray::from_vector(vec({1, 1}));
    CHECK(colinearity(e0, e1) == doctest::Approx(0.0));
    CHECK(colinearity(e0, e0) == doctest::Approx(1.0));
    CHECK(colinearity(e0, plus) == doctest::Approx(0.70710678).epsilon(1e-8));
    CHECK_THROWS_AS(Ray::from_vector(vec({0, 0})), InputError);
}

TEST_CASE("rays ignore phase and scale") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    for (int t = 0; t < 100; ++t) {
        CVector v = random_matrix(3, 1, rng).col(0);
        const Complex phase = std::polar(std::abs(n(rng)) + 0.1, n(rng));
        CHECK(same_ray(Ray::from_vector(v), Ray::from_vector(phase * v)));
        CHECK(colinearity(Ray::from_vector(v), Ray::from_vector(phase * v)) == doctest::Approx(1.0));
    }
}

TEST_CASE("colinearity matches the formula on the dictionaries") {
    for (const auto& d : {corpus::pauli6(), corpus::mub3(), corpus::pauli18()}) {
        auto m = d.colinearity_matrix();
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j)
                CHECK(std::abs(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                               oracle_colinearity(d[i].vector(), d[j].vector())) <= kTol);
    }
}

TEST_CASE("ray dictionaries reject repeated rays") {
    std::vector<Ray> rays{Ray::from_vector(vec({1, 0})), Ray::from_vector(vec({Complex(0, 2), 0}))};
    CHECK_THROWS_AS(RayDict("d", 2, rays), InputError);
}

TEST_CASE("c-complement examples") {
    auto d = corpus::pauli6();
    CHECK(c_complement({}, 0.3, d).size() == d.size());
    CHECK(c_complement(corpus::kZ, kInvSqrt2, d) == RaySet{2, 3, 4, 5});
    RaySet all(d.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    CHECK(c_complement(all, 1.0, d).empty());
}

TEST_CASE("c-complement agrees with the formula over all subsets") {
    for (const auto& d : {corpus::pauli6(), corpus::mub3()}) {
        for (double c : {0.0, kInvSqrt2, 1.0 / std::sqrt(3.0), 1.0}) {
            for (std::size_t m = 0; m < (std::size_t{1} << d.size()); ++m) {
                RaySet a;
                for (std::size_t i = 0; i < d.size(); ++i)
                    if (m >> i & 1) a.push_back(i);
                CHECK(c_complement(a, c, d) == oracle_c_complement(a, c, d));
            }
        }
    }
}

TEST_CASE("Hilbert testability") {
    auto d = corpus::pauli6();
    auto cert = is_hilb_testable(corpus::kZ, kInvSqrt2, d);
    CHECK(cert.testable);
    CHECK(cert.complement == RaySet{2, 3, 4, 5});
    CHECK(cert.double_complement == corpus::kZ);

    RayDict one("C", 1, {Ray::from_vector(vec({1}))});
    CHECK(is_hilb_testable({0}, 1.0, one).testable);

    auto zero = is_hilb_testable(corpus::kZ, 0.0, d);
    CHECK_FALSE(zero.testable);
    CHECK(zero.complement.empty());
    CHECK_THROWS_AS(make_hilb_testable(d, corpus::kZ, 0.0), InputError);
}

TEST_CASE("every basis of the three-dimensional unbiased quadruple is testable") {
    auto d = corpus::mub3();
    const double c = 1.0 / std::sqrt(3.0);
    for (std::size_t b = 0; b < 4; ++b) {
        RaySet basis{3 * b, 3 * b + 1, 3 * b + 2};
        auto cert = is_hilb_testable(basis, c, d);
        CHECK(cert.testable);
        CHECK(cert.complement.size() == 9);
    }
}

TEST_CASE("annihilators") {
    CHECK(annihilator(Subspace::zero(3)).dim() == 3);
    CHECK(annihilator(Subspace::full(3)).dim() == 0);
    CHECK(same_subspace(annihilator(span1(vec({1, 1}))), span1(vec({1, -1}))));
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + t % 4;
        const std::size_t k = static_cast<std::size_t>(t) % (d + 1);
        auto chi = Subspace::span(d, random_matrix(d, k, rng));
        auto perp = annihilator(chi);
        CHECK(chi.dim() + perp.dim() == d);
        CHECK((chi.basis().adjoint() * perp.basis()).norm() <= 1e-9);
        CHECK(same_subspace(annihilator(perp), chi));
    }
}

TEST_CASE("images and containment") {
    CHECK(same_subspace(image_subspace(LinearMap::identity(2), span1(vec({1, 1}))), span1(vec({1, 1}))));
    LinearMap p0(mat2(1, 0, 0, 0));
    CHECK(same_subspace(image_subspace(p0, span1(vec({1, 1}))), span1(vec({1, 0}))));
    CHECK_FALSE(contains(span1(vec({1, 0})), span1(vec({1, 1}))));
    CHECK(contains(Subspace::full(2), span1(vec({1, 1}))));
    CHECK(contains(span1(vec({1, 1})), Subspace::zero(2)));
}

TEST_CASE("proposition morphisms") {
    auto chi = span1(vec({1, 0}));
    CHECK(prop_morphism_check(LinearMap::identity(2), chi, chi));
    CHECK(prop_morphism_check(LinearMap::zero(2, 2), chi, Subspace::zero(2)));
    CHECK_FALSE(prop_morphism_check(LinearMap(mat2(0, 1, 1, 0)), chi, chi));
}

TEST_CASE("proposition morphisms reverse under the annihilator") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        LinearMap f(random_matrix(3, 3, rng));
        auto chi = Subspace::span(3, random_matrix(3, 1, rng));
        auto kappa = image_subspace(f, chi);
        CHECK(prop_morphism_check(f, chi, kappa));
        CHECK(prop_morphism_check(dagger(f), annihilator(kappa), annihilator(chi)));
    }
}

TEST_CASE("dagger") {
    CHECK(dagger(LinearMap::identity(3)).matrix() == CMatrix::Identity(3, 3));
    LinearMap f(mat2(0, 1, 0, 0));
    CHECK(dagger(f).matrix() == mat2(0, 0, 1, 0));
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        LinearMap g(random_matrix(3, 2, rng));
        CHECK((dagger(dagger(g)).matrix() - g.matrix()).norm() == 0.0);
        CVector a = random_matrix(2, 1, rng).col(0);
        CVector b = random_matrix(3, 1, rng).col(0);
        CHECK(std::abs(b.dot(g(a)) - dagger(g)(b).dot(a)) <= 1e-9);
    }
}

TEST_CASE("space variants form a Klein group") {
    for (auto v : {SpaceVariant::plain, SpaceVariant::dual, SpaceVariant::conjugate, SpaceVariant::double_dagger}) {
        CHECK(upper_star(upper_star(v)) == v);
        CHECK(lower_star(lower_star(v)) == v);
        CHECK(upper_star(lower_star(v)) == lower_star(upper_star(v)));
    }
    CHECK(upper_star(SpaceVariant::plain) == SpaceVariant::dual);
    CHECK(lower_star(SpaceVariant::plain) == SpaceVariant::conjugate);
}

TEST_CASE("proposition structure") {
    PropObject a{span1(vec({1, 0})), SpaceVariant::plain};
    auto s = prop_structure(a, a);
    CHECK(s.tensor.chi.dim() == 1);
    CHECK(s.par.chi.dim() == 3);
    CHECK(s.mix_ok);
    CHECK(s.tensor_dim_ok);
    CHECK(s.par_dim_ok);

    CHECK(same_subspace(prop_tensor(prop_top(), a).chi, a.chi));
    CHECK(same_subspace(prop_par(prop_bottom(), a).chi, a.chi));
    CHECK(same_subspace(prop_star(prop_star(a)).chi, a.chi));
    CHECK(same_subspace(prop_dagger(a).chi, conjugate(a.chi)));

    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        PropObject x{Subspace::span(2, random_matrix(2, t % 3, rng)), SpaceVariant::plain};
        PropObject y{Subspace::span(3, random_matrix(3, t % 4, rng)), SpaceVariant::plain};
        auto st = prop_structure(x, y);
        CHECK(st.tensor.chi.dim() == x.chi.dim() * y.chi.dim());
        CHECK(st.par.chi.dim() == 6 - (2 - x.chi.dim()) * (3 - y.chi.dim()));
        CHECK(st.mix_ok);
    }
}

TEST_CASE("Hilbert testable morphisms") {
    auto z = pauli_z();
    CHECK(hilb_testable_morphism_check(LinearMap::identity(2), z, z).ok);
    CHECK(hilb_testable_morphism_check(LinearMap(mat2(1, 0, 0, -1)), z, z).ok);
    CHECK_FALSE(hilb_testable_morphism_check(LinearMap(mat2(kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2)), z, z).ok);
    CHECK_FALSE(hilb_testable_morphism_check(LinearMap::zero(2, 2), z, z).ok);
}

TEST_CASE("Schmidt rank") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 50; ++t) {
        CVector a = random_matrix(2, 1, rng).col(0);
        CVector b = random_matrix(3, 1, rng).col(0);
        CVector ab(6);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) ab(i * 3 + j) = a(i) * b(j);
        CHECK(schmidt_rank(ab, 2, 3) == 1);
    }
    CHECK(schmidt_rank(corpus::bell_phi_plus().vector(), 2, 2) == 2);
    CHECK(schmidt_rank(corpus::bell_psi_plus().vector(), 2, 2) == 2);
}

TEST_CASE("tensor and par of the Pauli testable") {
    auto z = pauli_z();
    auto s = hilb_testable_structure(z, z, {corpus::bell_phi_plus(), corpus::bell_psi_plus()});
    CHECK(s.tensor_separated);
    CHECK(s.mix_inclusion);
    CHECK(s.par_c == doctest::Approx(0.5));
    CHECK(s.tensor.alpha.size() == 4);
    for (const auto& m : s.par_members) CHECK(m.schmidt_rank >= 1);

    // Colinearities of the Bell rays with the sixteen X/Y products: each
    // value is 0, 1/2 or 1/√2, so neither ray is in the par.
    auto d18 = corpus::pauli18();
    RaySet xy(16);
    for (std::size_t i = 0; i < 16; ++i) xy[i] = i;
    auto par = c_complement(xy, 0.5, d18);
    for (std::size_t k : {16u, 17u}) {
        CHECK_FALSE(std::binary_search(par.begin(), par.end(), k));
        std::size_t zeros = 0;
        for (std::size_t i = 0; i < 16; ++i) zeros += oracle_colinearity(d18[k].vector(), d18[i].vector()) < kTol;
        CHECK(zeros > 0);
    }
    // The four Z products sit at 1/2 from every X/Y product.
    auto srays = rays_of(xy, d18);
    auto pz = corpus::pauli6();
    for (std::size_t i : corpus::kZ)
        for (std::size_t j : corpus::kZ) CHECK(in_c_complement(kron(pz[i], pz[j]), srays, 0.5));
}

TEST_CASE("unit for the Hilbert tensor") {
    RayDict one("C", 1, {Ray::from_vector(vec({1}))});
    auto unit = make_hilb_testable(one, {0}, 1.0);
    auto z = pauli_z();
    auto s = hilb_testable_structure(unit, z, {});
    CHECK(s.tensor.alpha.size() == z.alpha.size());
    CHECK(s.tensor.c == doctest::Approx(z.c));
    CHECK(s.tensor_certificate.testable);
}
