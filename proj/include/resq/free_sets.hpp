#pragma once
// Convex free-set descriptions with membership, linear minimization, and the
// encoders feeding the dual programs. Three variants:
//   incoherent — diagonal states in a reference orthonormal basis
//   ppt        — bipartite states with positive partial transpose
//   hull       — convex hull of a finite generator list
// PPT is the separability proxy; it is exact only at 2x2 and 2x3, so
// entanglement checks elsewhere stay at those sizes.

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "random.hpp"
#include "sdp.hpp"
#include "tensor.hpp"

namespace resq {

enum class FreeVariant { incoherent, ppt, hull };

struct FreeSetSpec {
    FreeVariant variant = FreeVariant::incoherent;
    Mat basis;                    // incoherent: columns form the reference basis
    int dimA = 0, dimB = 0;       // ppt
    std::vector<Mat> generators;  // hull

    static FreeSetSpec incoherent(int d) {
        FreeSetSpec f;
        f.variant = FreeVariant::incoherent;
        f.basis = Mat::identity(d);
        return f;
    }
    static FreeSetSpec incoherent_in(const Mat& basis) {
        FreeSetSpec f;
        f.variant = FreeVariant::incoherent;
        f.basis = basis;
        f.validate();
        return f;
    }
    static FreeSetSpec ppt(int dA, int dB) {
        FreeSetSpec f;
        f.variant = FreeVariant::ppt;
        f.dimA = dA;
        f.dimB = dB;
        f.validate();
        return f;
    }
    static FreeSetSpec hull(std::vector<Mat> gens) {
        FreeSetSpec f;
        f.variant = FreeVariant::hull;
        f.generators = std::move(gens);
        f.validate();
        return f;
    }

    int dim() const {
        switch (variant) {
            case FreeVariant::incoherent: return basis.rows();
            case FreeVariant::ppt: return dimA * dimB;
            case FreeVariant::hull: return generators.empty() ? 0 : generators.front().rows();
        }
        return 0;
    }

    void validate() const {
        if (variant == FreeVariant::incoherent) {
            int d = basis.rows();
            if (d < 2 || basis.cols() != d) throw std::invalid_argument("free set: basis shape");
            if ((basis.adjoint() * basis - Mat::identity(d)).max_abs() > 1e-10)
                throw std::invalid_argument("free set: basis not orthonormal");
        } else if (variant == FreeVariant::ppt) {
            if (dimA < 2 || dimB < 2) throw std::invalid_argument("free set: ppt dims < 2");
        } else {
            if (generators.empty()) throw std::invalid_argument("free set: empty hull");
            int d = generators.front().rows();
            for (const auto& g : generators) {
                if (g.rows() != d || g.cols() != d) throw std::invalid_argument("free set: generator dims");
                Density check(g);  // psd + unit trace
                (void)check;
            }
        }
    }
};

// trace-norm distance from sigma to the generator hull, via
//   min Tr P + Tr N  s.t.  P - N + sum q_i g_i = sigma, sum q_i = 1, q >= 0
inline double hull_distance(const Mat& sigma, const std::vector<Mat>& gens) {
    const int d = sigma.rows();
    const int n = (int)gens.size();
    SdpProblem p = SdpProblem::make({d, d}, n);
    p.obj_herm[0] = Mat::identity(d);
    p.obj_herm[1] = Mat::identity(d);
    auto basis = herm_basis(d);
    for (const auto& e : basis) {
        auto& con = p.add_constraint(hs_inner(e, sigma));
        con.a_herm[0] = e;
        con.a_herm[1] = e * cplx(-1.0);
        for (int i = 0; i < n; ++i) con.a_lin[i] = hs_inner(e, gens[i]);
    }
    auto& norm = p.add_constraint(1.0);
    norm.a_lin.assign(n, 1.0);
    auto s = solve(p);
    if (s.status == SdpStatus::infeasible) throw std::runtime_error("hull_distance: infeasible");
    return std::max(0.0, s.primal_obj);
}

inline bool membership(const Mat& sigma, const FreeSetSpec& f, double tol) {
    if (sigma.rows() != f.dim()) throw std::invalid_argument("membership: dimension mismatch");
    switch (f.variant) {
        case FreeVariant::incoherent: {
            Mat in_basis = f.basis.adjoint() * sigma * f.basis;
            double off = 0;
            for (int i = 0; i < in_basis.rows(); ++i)
                for (int j = 0; j < in_basis.cols(); ++j)
                    if (i != j) off = std::max(off, std::abs(in_basis(i, j)));
            return off <= tol;
        }
        case FreeVariant::ppt:
            return min_eig(partial_transpose(sigma, f.dimA, f.dimB, Sub::B)) >= -tol;
        case FreeVariant::hull:
            return hull_distance(sigma, f.generators) <= tol;
    }
    return false;
}

struct MinLinResult {
    double value = 0;
    Mat argmin;
};

// min over F of the linear functional Tr[k sigma]
inline MinLinResult min_linear_over_free(const Mat& k, const FreeSetSpec& f) {
    const int d = f.dim();
    if (k.rows() != d || k.cols() != d) throw std::invalid_argument("min_linear: dimension mismatch");
    MinLinResult out;
    switch (f.variant) {
        case FreeVariant::incoherent: {
            int best = 0;
            double bv = std::numeric_limits<double>::infinity();
            for (int i = 0; i < d; ++i) {
                Mat bi(d, 1);
                for (int r = 0; r < d; ++r) bi(r, 0) = f.basis(r, i);
                double v = std::real((bi.adjoint() * k * bi)(0, 0));
                if (v < bv - 1e-15) {
                    bv = v;
                    best = i;
                }
            }
            Mat bi(d, 1);
            for (int r = 0; r < d; ++r) bi(r, 0) = f.basis(r, best);
            out.value = bv;
            out.argmin = outer(bi, bi);
            return out;
        }
        case FreeVariant::hull: {
            int best = 0;
            double bv = std::numeric_limits<double>::infinity();
            for (int i = 0; i < (int)f.generators.size(); ++i) {
                double v = hs_inner(k, f.generators[i]);
                if (v < bv - 1e-15) {
                    bv = v;
                    best = i;
                }
            }
            out.value = bv;
            out.argmin = f.generators[best];
            return out;
        }
        case FreeVariant::ppt: {
            // min <k,s> over s >= 0, s^Tb >= 0, Tr s = 1
            SdpProblem p = SdpProblem::make({d, d});
            p.obj_herm[0] = sym(k);
            auto basis = herm_basis(d);
            for (const auto& e : basis) {
                auto& con = p.add_constraint(0.0);  // P - s^Tb = 0
                con.a_herm[0] = partial_transpose(e, f.dimA, f.dimB, Sub::B) * cplx(-1.0);
                con.a_herm[1] = e;
            }
            p.add_constraint(1.0).a_herm[0] = Mat::identity(d);
            auto s = solve(p);
            if (s.status != SdpStatus::optimal) throw std::runtime_error("min_linear: ppt solve failed");
            Mat arg = psd_part(s.x_herm[0]);
            arg = arg * (1.0 / std::real(arg.trace()));
            out.value = s.primal_obj;
            out.argmin = arg;
            return out;
        }
    }
    return out;
}

inline double max_linear_over_free(const Mat& k, const FreeSetSpec& f) {
    return -min_linear_over_free(k * cplx(-1.0), f).value;
}

// Functionals F_j with the meaning Tr[Y F_j] >= 1 (weight) or <= 1
// (robustness) covering all of F by convexity. PPT is semi-infinite, so it
// returns a marker instead: the quantifier module handles it through the
// positive + positive-under-partial-transpose cone split.
struct DualConstraintSet {
    bool primal_route = false;
    std::vector<Mat> functionals;
};

inline DualConstraintSet encode_dual_constraints(const FreeSetSpec& f) {
    DualConstraintSet out;
    switch (f.variant) {
        case FreeVariant::incoherent: {
            int d = f.dim();
            for (int i = 0; i < d; ++i) {
                Mat bi(d, 1);
                for (int r = 0; r < d; ++r) bi(r, 0) = f.basis(r, i);
                out.functionals.push_back(outer(bi, bi));
            }
            return out;
        }
        case FreeVariant::hull:
            out.functionals = f.generators;
            return out;
        case FreeVariant::ppt:
            out.primal_route = true;
            return out;
    }
    return out;
}

// random member of F (free-state sampler used by invariant checks)
inline Mat sample_free(const FreeSetSpec& f, Rng& rng) {
    switch (f.variant) {
        case FreeVariant::incoherent: {
            int d = f.dim();
            auto pr = random_prob(d, rng);
            Mat s(d, d);
            for (int i = 0; i < d; ++i) {
                Mat bi(d, 1);
                for (int r = 0; r < d; ++r) bi(r, 0) = f.basis(r, i);
                s += pr[i] * outer(bi, bi);
            }
            return s;
        }
        case FreeVariant::ppt: {
            // mixtures of product states are ppt
            const int terms = 3;
            auto pr = random_prob(terms, rng);
            Mat s(f.dimA * f.dimB, f.dimA * f.dimB);
            for (int t = 0; t < terms; ++t)
                s += pr[t] * kron(random_density(f.dimA, f.dimA, rng), random_density(f.dimB, f.dimB, rng));
            return s;
        }
        case FreeVariant::hull: {
            auto pr = random_prob((int)f.generators.size(), rng);
            Mat s(f.dim(), f.dim());
            for (std::size_t i = 0; i < f.generators.size(); ++i) s += pr[i] * f.generators[i];
            return s;
        }
    }
    throw std::logic_error("sample_free: unreachable");
}

}  // namespace resq
