#pragma once

// Finite-dimensional complex linear algebra: subspaces as propositions,
// annihilators, adjoints, rays and colinearity, c-complements over finite
// ray dictionaries, and Hilbert testables.
//
// Coordinate convention: every space variant (dual, conjugate, double
// dagger) is carried on the coordinates of the original space through the
// Riesz identification, which acts as complex conjugation of coordinates.
// Variant tags record where an object formally lives.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cqm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kDefaultEps = 1e-9;

class LinearMap {
public:
    LinearMap() = default;
    explicit LinearMap(CMatrix m);

    static LinearMap identity(std::size_t n) { return LinearMap(CMatrix::Identity(n, n)); }
    static LinearMap zero(std::size_t rows, std::size_t cols) { return LinearMap(CMatrix::Zero(rows, cols)); }

    std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(m_.cols()); }
    const CMatrix& matrix() const noexcept { return m_; }

    CVector operator()(const CVector& x) const { return m_ * x; }

private:
    CMatrix m_;
};

/// g ∘ f, i.e. first f then g.
LinearMap compose(const LinearMap& f, const LinearMap& g);
/// Conjugate transpose: <f‡b|a> = <b|fa>.
LinearMap dagger(const LinearMap& f);
LinearMap kron(const LinearMap& f, const LinearMap& g);

/// Antilinear Riesz identification H → H* (and H_* → H), realized as
/// coordinate conjugation.
struct Riesz {
    std::size_t dim = 0;
    CVector apply(const CVector& x) const { return x.conjugate(); }
};
Riesz riesz(std::size_t dim);

enum class SpaceVariant { plain, dual, conjugate, double_dagger };

SpaceVariant upper_star(SpaceVariant v);
SpaceVariant lower_star(SpaceVariant v);
std::string to_string(SpaceVariant v);

/// A subspace of C^d held by an orthonormal basis (columns).
class Subspace {
public:
    Subspace() = default;

    /// Span of the given columns, orthonormalized, with rank truncated at eps.
    static Subspace span(std::size_t ambient, const CMatrix& columns, double eps = kDefaultEps);
    static Subspace zero(std::size_t ambient);
    static Subspace full(std::size_t ambient);

    std::size_t ambient() const noexcept { return ambient_; }
    std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
    const CMatrix& basis() const noexcept { return basis_; }
    CMatrix projector() const { return basis_ * basis_.adjoint(); }

private:
    std::size_t ambient_ = 0;
    CMatrix basis_;
};

/// Numerical rank: singular values above eps · max(1, σ_max).
std::size_t numerical_rank(const CMatrix& m, double eps = kDefaultEps);

/// χ⊥, realized on H as the orthogonal complement.
Subspace annihilator(const Subspace& chi, double eps = kDefaultEps);
Subspace conjugate(const Subspace& chi);
Subspace image_subspace(const LinearMap& f, const Subspace& chi, double eps = kDefaultEps);
/// κ ⊇ σ, i.e. ‖(I − P_κ) basis(σ)‖ ≤ eps column by column.
bool contains(const Subspace& kappa, const Subspace& sigma, double eps = kDefaultEps);
bool same_subspace(const Subspace& a, const Subspace& b, double eps = kDefaultEps);
Subspace tensor(const Subspace& chi, const Subspace& kappa, double eps = kDefaultEps);

/// χ|f|κ ⟺ fχ ⊆ κ.
bool prop_morphism_check(const LinearMap& f, const Subspace& chi, const Subspace& kappa, double eps = kDefaultEps);

/// An object <χ ⊆ H> of the comprehension of propositions.
struct PropObject {
    Subspace chi;
    SpaceVariant variant = SpaceVariant::plain;
};

PropObject prop_top();
PropObject prop_bottom();
PropObject prop_star(const PropObject& a, double eps = kDefaultEps);
PropObject prop_lower_star(const PropObject& a, double eps = kDefaultEps);
PropObject prop_dagger(const PropObject& a, double eps = kDefaultEps);
PropObject prop_tensor(const PropObject& a, const PropObject& b, double eps = kDefaultEps);
PropObject prop_par(const PropObject& a, const PropObject& b, double eps = kDefaultEps);

struct PropStructure {
    PropObject star;
    PropObject lower_star;
    PropObject dagger;
    PropObject tensor;
    PropObject par;
    bool tensor_dim_ok = false;
    bool par_dim_ok = false;
    /// χ⊗κ ⊆ χ⅋κ, the mix inclusion.
    bool mix_ok = false;
};

PropStructure prop_structure(const PropObject& a, const PropObject& b, double eps = kDefaultEps);

/// A ray held by a unit representative whose first coordinate of magnitude
/// above eps is real and positive.
class Ray {
public:
    Ray() = default;
    /// Throws InputError for a (numerically) zero vector.
    static Ray from_vector(const CVector& v, double eps = kDefaultEps);

    std::size_t dim() const { return static_cast<std::size_t>(v_.size()); }
    const CVector& vector() const noexcept { return v_; }

private:
    CVector v_;
};

/// ∠(a, b) = |<x|y>| / (|x||y|), clamped to [0, 1].
double colinearity(const Ray& a, const Ray& b);
bool same_ray(const Ray& a, const Ray& b, double eps = kDefaultEps);
Ray kron(const Ray& a, const Ray& b);
Ray conjugate(const Ray& a);

/// A finite set of distinct rays standing in for all rays of C^d.
class RayDict {
public:
    RayDict() = default;
    RayDict(std::string name, std::size_t dim, std::vector<Ray> rays, double eps = kDefaultEps);

    const std::string& name() const noexcept { return name_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Ray>& rays() const noexcept { return rays_; }
    std::size_t size() const noexcept { return rays_.size(); }
    const Ray& operator[](std::size_t i) const { return rays_[i]; }
    std::optional<std::size_t> find(const Ray& r, double eps = kDefaultEps) const;

    /// Colinearity matrix, entry (i, j) = ∠(r_i, r_j).
    Eigen::MatrixXd colinearity_matrix() const;

private:
    std::string name_;
    std::size_t dim_ = 0;
    std::vector<Ray> rays_;
};

/// Sorted indices into a RayDict.
using RaySet = std::vector<std::size_t>;

/// Does the ray sit at colinearity c (within eps) from every ray of alpha?
bool in_c_complement(const Ray& x, const std::vector<Ray>& alpha, double c, double eps = kDefaultEps);

/// α^c within the universe.
RaySet c_complement(const RaySet& alpha, double c, const RayDict& universe, double eps = kDefaultEps);

/// Do the rays span C^d (numerical rank = d)?
bool spans(const std::vector<Ray>& rays, std::size_t dim, double eps = kDefaultEps);
std::vector<Ray> rays_of(const RaySet& set, const RayDict& universe);

struct HilbCertificate {
    bool testable = false;
    std::string reason;
    RaySet complement;
    RaySet double_complement;
    bool alpha_spans = false;
    bool complement_spans = false;
};

/// <α, c> is testable within the universe: α and α^c span, α^cc = α.
HilbCertificate is_hilb_testable(const RaySet& alpha, double c, const RayDict& universe, double eps = kDefaultEps);

/// An object <H, α, c>; verdicts are relative to the universe dictionary.
struct HilbTestable {
    RayDict universe;
    RaySet alpha;
    double c = 0.0;
    SpaceVariant variant = SpaceVariant::plain;

    std::size_t dim() const { return universe.dim(); }
};

/// Throws NotHilbTestable-style InputError when the pair is not testable.
HilbTestable make_hilb_testable(RayDict universe, RaySet alpha, double c, double eps = kDefaultEps);

struct HilbMorphismVerdict {
    bool ok = true;
    std::string diagnostic;
};

/// <α,c>|f|<β,d> ⟺ fα ⊆ β ∧ f‡β^d ⊆ α^c, ray by ray. A ray sent to zero
/// is a failure.
HilbMorphismVerdict hilb_testable_morphism_check(const LinearMap& f, const HilbTestable& a, const HilbTestable& b,
                                                 double eps = kDefaultEps);

/// Number of Schmidt coefficients above eps of a vector of C^{dl} ⊗ C^{dr}.
std::size_t schmidt_rank(const CVector& v, std::size_t left_dim, std::size_t right_dim, double eps = kDefaultEps);

/// Pairwise Kronecker products of two dictionaries, followed by extra rays.
RayDict product_dictionary(const RayDict& left, const RayDict& right, const std::vector<Ray>& extra,
                           double eps = kDefaultEps);

struct ParMember {
    std::size_t index;
    std::size_t schmidt_rank;
};

struct HilbStructure {
    HilbTestable star;
    HilbTestable lower_star;
    HilbTestable dagger;
    /// <H⊗K, α×β, c·d> over the product dictionary.
    HilbTestable tensor;
    /// (α^c × β^d)^{c·d} within the product dictionary.
    RaySet par;
    double par_c = 0.0;
    std::vector<ParMember> par_members;
    /// Every member of α×β has Schmidt rank 1.
    bool tensor_separated = false;
    /// α×β ⊆ (α^c×β^d)^{c·d}.
    bool mix_inclusion = false;
    HilbCertificate tensor_certificate;
    HilbCertificate par_certificate;
};

HilbStructure hilb_testable_structure(const HilbTestable& a, const HilbTestable& b, const std::vector<Ray>& extra,
                                      double eps = kDefaultEps);

}  // namespace cqm
