#include "cqm/fhilb.hpp"

#include "cqm/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cqm {

LinearMap::LinearMap(CMatrix m) : m_(std::move(m)) {
    if (!m_.allFinite()) throw InputError("linear map has non-finite entries");
}

LinearMap compose(const LinearMap& f, const LinearMap& g) {
    if (g.cols() != f.rows())
        throw DomainMismatch("linear maps not composable", std::to_string(f.rows()), std::to_string(g.cols()));
    return LinearMap(g.matrix() * f.matrix());
}

LinearMap dagger(const LinearMap& f) { return LinearMap(f.matrix().adjoint()); }

LinearMap kron(const LinearMap& f, const LinearMap& g) {
    const auto& a = f.matrix();
    const auto& b = g.matrix();
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return LinearMap(std::move(out));
}

Riesz riesz(std::size_t dim) { return Riesz{dim}; }

// Variants form Z2 x Z2: star flips the dual bit, lower star the conjugate bit.
namespace {
int code(SpaceVariant v) { return static_cast<int>(v); }
SpaceVariant from_code(int c) { return static_cast<SpaceVariant>(c); }
// plain=0 dual=1 conjugate=2 double_dagger=3
}  // namespace

SpaceVariant upper_star(SpaceVariant v) { return from_code(code(v) ^ 1); }
SpaceVariant lower_star(SpaceVariant v) { return from_code(code(v) ^ 2); }

std::string to_string(SpaceVariant v) {
    switch (v) {
        case SpaceVariant::plain: return "plain";
        case SpaceVariant::dual: return "dual";
        case SpaceVariant::conjugate: return "conjugate";
        case SpaceVariant::double_dagger: return "double_dagger";
    }
    return "?";
}

std::size_t numerical_rank(const CMatrix& m, double eps) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    const double cut = eps * std::max(1.0, s.size() ? s(0) : 0.0);
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

Subspace Subspace::span(std::size_t ambient, const CMatrix& columns, double eps) {
    if (static_cast<std::size_t>(columns.rows()) != ambient && columns.cols() > 0)
        throw InputError("spanning vectors have wrong dimension");
    Subspace s;
    s.ambient_ = ambient;
    if (columns.cols() == 0 || ambient == 0) {
        s.basis_ = CMatrix::Zero(ambient, 0);
        return s;
    }
    Eigen::JacobiSVD<CMatrix> svd(columns, Eigen::ComputeFullU);
    const std::size_t r = numerical_rank(columns, eps);
    s.basis_ = svd.matrixU().leftCols(r);
    return s;
}

Subspace Subspace::zero(std::size_t ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = CMatrix::Zero(ambient, 0);
    return s;
}

Subspace Subspace::full(std::size_t ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = CMatrix::Identity(ambient, ambient);
    return s;
}

Subspace annihilator(const Subspace& chi, double eps) {
    const std::size_t d = chi.ambient();
    if (chi.dim() == 0) return Subspace::full(d);
    if (chi.dim() >= d) return Subspace::zero(d);
    // Columns of I - P span the complement.
    CMatrix q = CMatrix::Identity(d, d) - chi.projector();
    return Subspace::span(d, q, eps);
}

Subspace conjugate(const Subspace& chi) {
    if (chi.dim() == 0) return Subspace::zero(chi.ambient());
    return Subspace::span(chi.ambient(), chi.basis().conjugate());
}

Subspace image_subspace(const LinearMap& f, const Subspace& chi, double eps) {
    if (f.cols() != chi.ambient())
        throw DomainMismatch("map and subspace", std::to_string(f.cols()), std::to_string(chi.ambient()));
    if (chi.dim() == 0) return Subspace::zero(f.rows());
    return Subspace::span(f.rows(), f.matrix() * chi.basis(), eps);
}

bool contains(const Subspace& kappa, const Subspace& sigma, double eps) {
    if (kappa.ambient() != sigma.ambient())
        throw DomainMismatch("subspaces of different spaces", std::to_string(kappa.ambient()),
                             std::to_string(sigma.ambient()));
    if (sigma.dim() == 0) return true;
    CMatrix r = sigma.basis() - kappa.projector() * sigma.basis();
    for (Eigen::Index j = 0; j < r.cols(); ++j)
        if (r.col(j).norm() > eps) return false;
    return true;
}

bool same_subspace(const Subspace& a, const Subspace& b, double eps) {
    return a.dim() == b.dim() && contains(a, b, eps) && contains(b, a, eps);
}

Subspace tensor(const Subspace& chi, const Subspace& kappa, double eps) {
    const std::size_t d = chi.ambient() * kappa.ambient();
    if (chi.dim() == 0 || kappa.dim() == 0) return Subspace::zero(d);
    CMatrix k = kron(LinearMap(chi.basis()), LinearMap(kappa.basis())).matrix();
    return Subspace::span(d, k, eps);
}

bool prop_morphism_check(const LinearMap& f, const Subspace& chi, const Subspace& kappa, double eps) {
    if (f.rows() != kappa.ambient())
        throw DomainMismatch("map codomain and subspace", std::to_string(f.rows()), std::to_string(kappa.ambient()));
    return contains(kappa, image_subspace(f, chi, eps), eps);
}

PropObject prop_top() { return {Subspace::full(1), SpaceVariant::plain}; }
PropObject prop_bottom() { return {Subspace::zero(1), SpaceVariant::plain}; }

// In Riesz-identified coordinates the annihilator in H* reads as conj(χ^⟂).
PropObject prop_star(const PropObject& a, double eps) {
    return {conjugate(annihilator(a.chi, eps)), upper_star(a.variant)};
}

PropObject prop_lower_star(const PropObject& a, double eps) {
    return {conjugate(annihilator(a.chi, eps)), lower_star(a.variant)};
}

PropObject prop_dagger(const PropObject& a, double eps) { return prop_star(prop_lower_star(a, eps), eps); }

PropObject prop_tensor(const PropObject& a, const PropObject& b, double eps) {
    return {tensor(a.chi, b.chi, eps), SpaceVariant::plain};
}

PropObject prop_par(const PropObject& a, const PropObject& b, double eps) {
    return {annihilator(tensor(annihilator(a.chi, eps), annihilator(b.chi, eps), eps), eps), SpaceVariant::plain};
}

PropStructure prop_structure(const PropObject& a, const PropObject& b, double eps) {
    PropStructure s;
    s.star = prop_star(a, eps);
    s.lower_star = prop_lower_star(a, eps);
    s.dagger = prop_dagger(a, eps);
    s.tensor = prop_tensor(a, b, eps);
    s.par = prop_par(a, b, eps);
    const std::size_t dh = a.chi.ambient(), dk = b.chi.ambient();
    s.tensor_dim_ok = s.tensor.chi.dim() == a.chi.dim() * b.chi.dim();
    s.par_dim_ok = s.par.chi.dim() == dh * dk - (dh - a.chi.dim()) * (dk - b.chi.dim());
    s.mix_ok = contains(s.par.chi, s.tensor.chi, eps);
    return s;
}

Ray Ray::from_vector(const CVector& v, double eps) {
    const double n = v.norm();
    if (!v.allFinite() || n <= eps) throw InputError("ray from a zero vector");
    CVector u = v / n;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) > eps) {
            u *= std::conj(u(i)) / std::abs(u(i));
            u(i) = std::abs(u(i));
            break;
        }
    }
    Ray r;
    r.v_ = std::move(u);
    return r;
}

double colinearity(const Ray& a, const Ray& b) {
    if (a.dim() != b.dim()) throw DomainMismatch("rays of different dimension", std::to_string(a.dim()),
                                                 std::to_string(b.dim()));
    return std::clamp(std::abs(a.vector().dot(b.vector())), 0.0, 1.0);
}

bool same_ray(const Ray& a, const Ray& b, double eps) {
    return a.dim() == b.dim() && (a.vector() - b.vector()).norm() <= eps;
}

Ray kron(const Ray& a, const Ray& b) {
    CVector out(a.vector().size() * b.vector().size());
    for (Eigen::Index i = 0; i < a.vector().size(); ++i)
        out.segment(i * b.vector().size(), b.vector().size()) = a.vector()(i) * b.vector();
    return Ray::from_vector(out);
}

Ray conjugate(const Ray& a) { return Ray::from_vector(a.vector().conjugate()); }

RayDict::RayDict(std::string name, std::size_t dim, std::vector<Ray> rays, double eps)
    : name_(std::move(name)), dim_(dim), rays_(std::move(rays)) {
    for (std::size_t i = 0; i < rays_.size(); ++i) {
        if (rays_[i].dim() != dim_)
            throw InputError("dictionary '" + name_ + "': ray " + std::to_string(i) + " has dimension " +
                             std::to_string(rays_[i].dim()));
        for (std::size_t j = 0; j < i; ++j)
            if (same_ray(rays_[i], rays_[j], eps))
                throw InputError("dictionary '" + name_ + "': rays " + std::to_string(j) + " and " +
                                 std::to_string(i) + " coincide");
    }
}

std::optional<std::size_t> RayDict::find(const Ray& r, double eps) const {
    for (std::size_t i = 0; i < rays_.size(); ++i)
        if (same_ray(rays_[i], r, eps)) return i;
    return std::nullopt;
}

Eigen::MatrixXd RayDict::colinearity_matrix() const {
    const auto n = static_cast<Eigen::Index>(rays_.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = colinearity(rays_[i], rays_[j]);
    return m;
}

bool in_c_complement(const Ray& x, const std::vector<Ray>& alpha, double c, double eps) {
    return std::all_of(alpha.begin(), alpha.end(),
                       [&](const Ray& a) { return std::abs(colinearity(x, a) - c) <= eps; });
}

std::vector<Ray> rays_of(const RaySet& set, const RayDict& universe) {
    std::vector<Ray> out;
    out.reserve(set.size());
    for (auto i : set) {
        if (i >= universe.size()) throw InputError("ray index " + std::to_string(i) + " out of range");
        out.push_back(universe[i]);
    }
    return out;
}

RaySet c_complement(const RaySet& alpha, double c, const RayDict& universe, double eps) {
    const auto a = rays_of(alpha, universe);
    RaySet out;
    for (std::size_t i = 0; i < universe.size(); ++i)
        if (in_c_complement(universe[i], a, c, eps)) out.push_back(i);
    return out;
}

bool spans(const std::vector<Ray>& rays, std::size_t dim, double eps) {
    if (dim == 0) return true;
    if (rays.empty()) return false;
    CMatrix m(dim, rays.size());
    for (std::size_t j = 0; j < rays.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = rays[j].vector();
    return numerical_rank(m, eps) == dim;
}

HilbCertificate is_hilb_testable(const RaySet& alpha_in, double c, const RayDict& universe, double eps) {
    RaySet alpha = alpha_in;
    std::sort(alpha.begin(), alpha.end());
    alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
    HilbCertificate cert;
    cert.complement = c_complement(alpha, c, universe, eps);
    cert.double_complement = c_complement(cert.complement, c, universe, eps);
    cert.alpha_spans = spans(rays_of(alpha, universe), universe.dim(), eps);
    cert.complement_spans = spans(rays_of(cert.complement, universe), universe.dim(), eps);
    if (!cert.alpha_spans)
        cert.reason = "alpha does not span";
    else if (!cert.complement_spans)
        cert.reason = "complement does not span";
    else if (cert.double_complement != alpha)
        cert.reason = "double complement differs from alpha";
    cert.testable = cert.reason.empty();
    return cert;
}

HilbTestable make_hilb_testable(RayDict universe, RaySet alpha, double c, double eps) {
    std::sort(alpha.begin(), alpha.end());
    alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
    auto cert = is_hilb_testable(alpha, c, universe, eps);
    if (!cert.testable) throw InputError("not hilb-testable in '" + universe.name() + "': " + cert.reason);
    return HilbTestable{std::move(universe), std::move(alpha), c, SpaceVariant::plain};
}

namespace {

std::string describe(const Ray& r) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < r.vector().size(); ++i) {
        if (i) os << ", ";
        os << r.vector()(i).real();
        if (r.vector()(i).imag() != 0.0) os << (r.vector()(i).imag() < 0 ? "-" : "+") << std::abs(r.vector()(i).imag()) << "i";
    }
    os << ")";
    return os.str();
}

bool ray_in(const Ray& x, const std::vector<Ray>& set, double eps) {
    return std::any_of(set.begin(), set.end(), [&](const Ray& y) { return same_ray(x, y, eps); });
}

}  // namespace

HilbMorphismVerdict hilb_testable_morphism_check(const LinearMap& f, const HilbTestable& a, const HilbTestable& b,
                                                 double eps) {
    if (f.cols() != a.dim() || f.rows() != b.dim())
        throw DomainMismatch("map shape vs testables", std::to_string(f.rows()) + "x" + std::to_string(f.cols()),
                             std::to_string(b.dim()) + "x" + std::to_string(a.dim()));
    HilbMorphismVerdict v;
    const auto beta = rays_of(b.alpha, b.universe);
    for (std::size_t i : a.alpha) {
        CVector y = f(a.universe[i].vector());
        if (y.norm() <= eps) {
            v.ok = false;
            v.diagnostic = "forward: ray " + std::to_string(i) + " is annihilated";
            return v;
        }
        if (!ray_in(Ray::from_vector(y, eps), beta, eps)) {
            v.ok = false;
            v.diagnostic = "forward: image of ray " + std::to_string(i) + " " + describe(Ray::from_vector(y, eps)) +
                           " is not in beta";
            return v;
        }
    }
    const auto alpha_c = rays_of(c_complement(a.alpha, a.c, a.universe, eps), a.universe);
    const LinearMap fd = dagger(f);
    for (std::size_t j : c_complement(b.alpha, b.c, b.universe, eps)) {
        CVector y = fd(b.universe[j].vector());
        if (y.norm() <= eps) {
            v.ok = false;
            v.diagnostic = "backward: complement ray " + std::to_string(j) + " is annihilated by the adjoint";
            return v;
        }
        if (!ray_in(Ray::from_vector(y, eps), alpha_c, eps)) {
            v.ok = false;
            v.diagnostic = "backward: adjoint image of complement ray " + std::to_string(j) + " " +
                           describe(Ray::from_vector(y, eps)) + " is not in the source complement";
            return v;
        }
    }
    return v;
}

std::size_t schmidt_rank(const CVector& v, std::size_t left_dim, std::size_t right_dim, double eps) {
    if (static_cast<std::size_t>(v.size()) != left_dim * right_dim)
        throw InputError("vector length does not match the bipartition");
    CMatrix m(left_dim, right_dim);
    for (std::size_t i = 0; i < left_dim; ++i)
        for (std::size_t j = 0; j < right_dim; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                v(static_cast<Eigen::Index>(i * right_dim + j));
    return numerical_rank(m, eps);
}

RayDict product_dictionary(const RayDict& left, const RayDict& right, const std::vector<Ray>& extra, double eps) {
    std::vector<Ray> rays;
    for (const auto& a : left.rays())
        for (const auto& b : right.rays()) rays.push_back(kron(a, b));
    for (const auto& e : extra) {
        if (e.dim() != left.dim() * right.dim()) throw InputError("extra ray has wrong dimension");
        if (!ray_in(e, rays, eps)) rays.push_back(e);
    }
    return RayDict(left.name() + "x" + right.name(), left.dim() * right.dim(), std::move(rays), eps);
}

namespace {

HilbTestable variant_of(const HilbTestable& a, const RaySet& set, SpaceVariant tag, bool conj, double eps) {
    if (!conj) return HilbTestable{a.universe, set, a.c, tag};
    std::vector<Ray> rays;
    for (const auto& r : a.universe.rays()) rays.push_back(conjugate(r));
    return HilbTestable{RayDict(a.universe.name() + "_conj", a.dim(), std::move(rays), eps), set, a.c, tag};
}

}  // namespace

HilbStructure hilb_testable_structure(const HilbTestable& a, const HilbTestable& b, const std::vector<Ray>& extra,
                                      double eps) {
    HilbStructure s;
    const RaySet ac = c_complement(a.alpha, a.c, a.universe, eps);
    const RaySet bd = c_complement(b.alpha, b.c, b.universe, eps);
    // Conjugating coordinates preserves colinearity, so these stay testable.
    s.star = variant_of(a, ac, upper_star(a.variant), false, eps);
    s.lower_star = variant_of(a, ac, lower_star(a.variant), true, eps);
    s.dagger = variant_of(a, a.alpha, upper_star(lower_star(a.variant)), true, eps);

    RayDict prod = product_dictionary(a.universe, b.universe, extra, eps);
    const std::size_t nb = b.universe.size();
    RaySet ab, acbd;
    for (auto i : a.alpha)
        for (auto j : b.alpha) ab.push_back(i * nb + j);
    for (auto i : ac)
        for (auto j : bd) acbd.push_back(i * nb + j);
    std::sort(ab.begin(), ab.end());
    std::sort(acbd.begin(), acbd.end());
    s.par_c = a.c * b.c;
    s.par = c_complement(acbd, s.par_c, prod, eps);
    for (auto k : s.par) s.par_members.push_back({k, schmidt_rank(prod[k].vector(), a.dim(), b.dim(), eps)});
    s.tensor_separated = std::all_of(ab.begin(), ab.end(), [&](std::size_t k) {
        return schmidt_rank(prod[k].vector(), a.dim(), b.dim(), eps) == 1;
    });
    s.mix_inclusion = std::includes(s.par.begin(), s.par.end(), ab.begin(), ab.end());
    s.tensor_certificate = is_hilb_testable(ab, s.par_c, prod, eps);
    s.par_certificate = is_hilb_testable(s.par, s.par_c, prod, eps);
    s.tensor = HilbTestable{std::move(prod), std::move(ab), s.par_c, SpaceVariant::plain};
    return s;
}

}  // namespace cqm
