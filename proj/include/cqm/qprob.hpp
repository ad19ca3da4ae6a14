#pragma once

// Quantum probability measures checked on finite samples of the subspace
// lattice: Born measures of density matrices, the measure axioms, and the
// measure-preservation relation between spaces.

#include "cqm/fhilb.hpp"
#include "cqm/report.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace cqm {

class DensityMatrix {
public:
    DensityMatrix() = default;
    /// Throws InputError unless Hermitian, PSD and of unit trace within eps.
    static DensityMatrix make(CMatrix rho, double eps = kDefaultEps);
    /// Pure state |v><v| for a nonzero vector.
    static DensityMatrix pure(const CVector& v);
    static DensityMatrix maximally_mixed(std::size_t dim);
    /// Random mixed state: G G‡ / tr for a complex Gaussian G.
    static DensityMatrix random(std::size_t dim, std::mt19937_64& rng);

    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    const CMatrix& matrix() const noexcept { return rho_; }

private:
    CMatrix rho_;
};

struct OrthogonalPair {
    std::size_t left;
    std::size_t right;
    /// Index of left ⊕ right within the sample.
    std::size_t sum;
};

/// A finite family of named subspaces containing 0 and the full space,
/// with declared orthogonal pairs whose sums are present.
class MeasureSample {
public:
    MeasureSample() = default;
    MeasureSample(std::size_t dim, std::vector<std::string> ids, std::vector<Subspace> subspaces,
                  std::vector<OrthogonalPair> pairs, double eps = kDefaultEps);

    /// Coordinate subspaces of a few random orthonormal bases, with all
    /// disjoint pairs whose union is also sampled.
    static MeasureSample generate(std::size_t dim, std::mt19937_64& rng, std::size_t bases = 2,
                                  std::size_t per_basis = 10, double eps = kDefaultEps);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return subspaces_.size(); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<Subspace>& subspaces() const noexcept { return subspaces_; }
    const std::vector<OrthogonalPair>& pairs() const noexcept { return pairs_; }
    std::size_t zero_index() const noexcept { return zero_; }
    std::size_t full_index() const noexcept { return full_; }

    /// Index of a subspace equal to chi, if sampled.
    std::optional<std::size_t> find(const Subspace& chi, double eps = kDefaultEps) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::string> ids_;
    std::vector<Subspace> subspaces_;
    std::vector<OrthogonalPair> pairs_;
    std::size_t zero_ = 0;
    std::size_t full_ = 0;
};

using MeasureTable = std::map<std::string, double>;

/// tr(ρ P_χ), unclamped.
double born_measure(const DensityMatrix& rho, const Subspace& chi);
/// Born values for every sampled subspace, clamped to [0, 1].
MeasureTable born_table(const DensityMatrix& rho, const MeasureSample& sample);

/// μ(0) = 0, μ(H) = 1 and additivity on each declared pair. Missing
/// entries throw InputError.
VerificationReport check_measure_axioms(const MeasureSample& sample, const MeasureTable& mu,
                                        double eps = kDefaultEps);

struct MeasureVerdict {
    bool ok = true;
    std::string diagnostic;
};

/// μ|f|ν ⟺ μ(χ) = ν(fχ) on every sampled χ. Throws InputError naming χ
/// when fχ is not in the target sample.
MeasureVerdict measure_morphism_check(const LinearMap& f, const MeasureSample& source, const MeasureTable& mu,
                                      const MeasureSample& target, const MeasureTable& nu,
                                      double eps = kDefaultEps);

/// Random unitary from the QR factorization of a complex Gaussian matrix.
CMatrix random_unitary(std::size_t dim, std::mt19937_64& rng);
CMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

}  // namespace cqm
