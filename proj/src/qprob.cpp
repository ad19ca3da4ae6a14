#include "cqm/qprob.hpp"

#include "cqm/error.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <set>

namespace cqm {

DensityMatrix DensityMatrix::make(CMatrix rho, double eps) {
    if (rho.rows() != rho.cols()) throw InputError("density matrix is not square");
    if (!rho.allFinite()) throw InputError("density matrix has non-finite entries");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > eps && rho.size() > 0)
        throw InputError("density matrix is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > eps) throw InputError("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    if (es.eigenvalues().minCoeff() < -eps) throw InputError("density matrix is not positive semidefinite");
    DensityMatrix d;
    d.rho_ = std::move(rho);
    return d;
}

DensityMatrix DensityMatrix::pure(const CVector& v) {
    const double n = v.norm();
    if (n == 0.0) throw InputError("pure state from zero vector");
    CVector u = v / n;
    DensityMatrix d;
    d.rho_ = u * u.adjoint();
    return d;
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    DensityMatrix d;
    d.rho_ = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
    return d;
}

CMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double re = n(rng);
            const double im = n(rng);
            m(i, j) = Complex(re, im);
        }
    return m;
}

CMatrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
    CMatrix g = random_matrix(dim, dim, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    return q;
}

DensityMatrix DensityMatrix::random(std::size_t dim, std::mt19937_64& rng) {
    CMatrix g = random_matrix(dim, dim, rng);
    CMatrix r = g * g.adjoint();
    r /= r.trace().real();
    r = (r + r.adjoint()) / 2.0;
    DensityMatrix d;
    d.rho_ = std::move(r);
    return d;
}

MeasureSample::MeasureSample(std::size_t dim, std::vector<std::string> ids, std::vector<Subspace> subspaces,
                             std::vector<OrthogonalPair> pairs, double eps)
    : dim_(dim), ids_(std::move(ids)), subspaces_(std::move(subspaces)), pairs_(std::move(pairs)) {
    if (ids_.size() != subspaces_.size()) throw InputError("sample ids and subspaces differ in length");
    std::set<std::string> seen;
    bool has_zero = false, has_full = false;
    for (std::size_t i = 0; i < subspaces_.size(); ++i) {
        if (!seen.insert(ids_[i]).second) throw InputError("duplicate subspace id '" + ids_[i] + "'");
        if (subspaces_[i].ambient() != dim_) throw InputError("subspace '" + ids_[i] + "' has wrong ambient dimension");
        if (subspaces_[i].dim() == 0 && !has_zero) {
            has_zero = true;
            zero_ = i;
        }
        if (subspaces_[i].dim() == dim_ && !has_full) {
            has_full = true;
            full_ = i;
        }
    }
    if (!has_zero) throw InputError("sample lacks the zero subspace");
    if (!has_full) throw InputError("sample lacks the full space");
    for (const auto& p : pairs_) {
        if (p.left >= size() || p.right >= size() || p.sum >= size()) throw InputError("orthogonal pair index out of range");
        const auto& a = subspaces_[p.left];
        const auto& b = subspaces_[p.right];
        if (a.dim() && b.dim() && (a.basis().adjoint() * b.basis()).cwiseAbs().maxCoeff() > eps)
            throw InputError("declared pair (" + ids_[p.left] + ", " + ids_[p.right] + ") is not orthogonal");
        CMatrix both(dim_, a.dim() + b.dim());
        both << a.basis(), b.basis();
        if (!same_subspace(Subspace::span(dim_, both, eps), subspaces_[p.sum], eps))
            throw InputError("'" + ids_[p.sum] + "' is not the sum of " + ids_[p.left] + " and " + ids_[p.right]);
    }
}

MeasureSample MeasureSample::generate(std::size_t dim, std::mt19937_64& rng, std::size_t bases,
                                      std::size_t per_basis, double eps) {
    if (dim == 0 || dim > 20) throw InputError("sample dimension out of range");
    std::vector<std::string> ids{"zero", "full"};
    std::vector<Subspace> subs{Subspace::zero(dim), Subspace::full(dim)};
    std::vector<OrthogonalPair> pairs;
    const std::uint64_t full = (std::uint64_t{1} << dim) - 1;
    for (std::size_t k = 0; k < bases; ++k) {
        CMatrix u = random_unitary(dim, rng);
        std::vector<std::uint64_t> masks;
        auto add = [&](std::uint64_t m) {
            if (m == 0 || m == full) return;
            if (std::find(masks.begin(), masks.end(), m) == masks.end()) masks.push_back(m);
        };
        for (std::size_t i = 0; i < dim; ++i) {
            add(std::uint64_t{1} << i);
            add(full ^ (std::uint64_t{1} << i));
        }
        std::uniform_int_distribution<std::uint64_t> pick(1, full);
        for (std::size_t tries = 0; masks.size() < per_basis + 2 * dim && tries < 64; ++tries) {
            const auto m = pick(rng);
            add(m);
            add(full ^ m);
        }
        std::sort(masks.begin(), masks.end());
        std::map<std::uint64_t, std::size_t> at;
        at[0] = 0;
        at[full] = 1;
        for (auto m : masks) {
            CMatrix cols(dim, std::popcount(m));
            Eigen::Index c = 0;
            for (std::size_t i = 0; i < dim; ++i)
                if (m >> i & 1) cols.col(c++) = u.col(static_cast<Eigen::Index>(i));
            at[m] = subs.size();
            std::string id = "b" + std::to_string(k) + ":";
            for (std::size_t i = 0; i < dim; ++i) id += (m >> i & 1) ? '1' : '0';
            ids.push_back(std::move(id));
            subs.push_back(Subspace::span(dim, cols, eps));
        }
        for (const auto& [a, ia] : at)
            for (const auto& [b, ib] : at) {
                if (a == 0 || b == 0 || (a & b) || a > b) continue;
                auto it = at.find(a | b);
                if (it != at.end()) pairs.push_back({ia, ib, it->second});
            }
    }
    return MeasureSample(dim, std::move(ids), std::move(subs), std::move(pairs), eps);
}

std::optional<std::size_t> MeasureSample::find(const Subspace& chi, double eps) const {
    for (std::size_t i = 0; i < subspaces_.size(); ++i)
        if (subspaces_[i].ambient() == chi.ambient() && same_subspace(subspaces_[i], chi, eps)) return i;
    return std::nullopt;
}

double born_measure(const DensityMatrix& rho, const Subspace& chi) {
    if (rho.dim() != chi.ambient())
        throw DomainMismatch("density and subspace", std::to_string(rho.dim()), std::to_string(chi.ambient()));
    if (chi.dim() == 0) return 0.0;
    // tr(ρ B B‡) = tr(B‡ ρ B)
    return (chi.basis().adjoint() * rho.matrix() * chi.basis()).trace().real();
}

MeasureTable born_table(const DensityMatrix& rho, const MeasureSample& sample) {
    MeasureTable t;
    for (std::size_t i = 0; i < sample.size(); ++i)
        t[sample.ids()[i]] = std::clamp(born_measure(rho, sample.subspaces()[i]), 0.0, 1.0);
    return t;
}

namespace {

double lookup(const MeasureTable& mu, const std::string& id) {
    auto it = mu.find(id);
    if (it == mu.end()) throw InputError("measure table has no entry for '" + id + "'");
    return it->second;
}

}  // namespace

VerificationReport check_measure_axioms(const MeasureSample& sample, const MeasureTable& mu, double eps) {
    for (const auto& id : sample.ids()) lookup(mu, id);
    VerificationReport r;
    const auto& ids = sample.ids();
    const double z = lookup(mu, ids[sample.zero_index()]);
    ++r.checked;
    if (std::abs(z) > eps) r.fail("zero", ids[sample.zero_index()], "mu(0) = " + std::to_string(z));
    const double f = lookup(mu, ids[sample.full_index()]);
    ++r.checked;
    if (std::abs(f - 1.0) > eps) r.fail("normalization", ids[sample.full_index()], "mu(H) = " + std::to_string(f));
    for (const auto& p : sample.pairs()) {
        ++r.checked;
        const double lhs = lookup(mu, ids[p.sum]);
        const double rhs = lookup(mu, ids[p.left]) + lookup(mu, ids[p.right]);
        if (std::abs(lhs - rhs) > eps)
            r.fail("additivity", ids[p.left] + " + " + ids[p.right],
                   "mu(" + ids[p.sum] + ") = " + std::to_string(lhs) + " vs " + std::to_string(rhs));
    }
    r.finalize();
    return r;
}

MeasureVerdict measure_morphism_check(const LinearMap& f, const MeasureSample& source, const MeasureTable& mu,
                                      const MeasureSample& target, const MeasureTable& nu, double eps) {
    if (f.cols() != source.dim() || f.rows() != target.dim())
        throw DomainMismatch("map shape vs samples", std::to_string(f.rows()) + "x" + std::to_string(f.cols()),
                             std::to_string(target.dim()) + "x" + std::to_string(source.dim()));
    MeasureVerdict v;
    for (std::size_t i = 0; i < source.size(); ++i) {
        const auto& id = source.ids()[i];
        auto j = target.find(image_subspace(f, source.subspaces()[i], eps), eps);
        if (!j) throw InputError("image of '" + id + "' is not in the target sample");
        const double a = lookup(mu, id);
        const double b = lookup(nu, target.ids()[*j]);
        if (v.ok && std::abs(a - b) > eps) {
            v.ok = false;
            v.diagnostic = "mu(" + id + ") = " + std::to_string(a) + " but nu(f " + id + ") = " + std::to_string(b);
        }
    }
    return v;
}

}  // namespace cqm
