#pragma once
// Weight and generalized robustness of a state relative to a convex free set.
//
//   weight:      max Tr s'   s.t.  s' in cone(F),  rho - s' >= 0,   w = 1 - Tr s'
//     dual:      min Tr[Y rho]  over  Y >= 0,  Tr[Y sigma] >= 1 on F
//   robustness:  min Tr s' - 1  s.t.  s' in cone(F),  s' - rho >= 0
//     dual:      max Tr[Y rho] - 1  over  Y >= 0,  Tr[Y sigma] <= 1 on F
//
// Both quantifiers are computed from the dual program (whose strict interior
// never degenerates, even for rank-deficient inputs) and certified against
// the primal decomposition. The witness Y is re-projected onto the exact
// feasible set by rescaling with the linear minimum over F, so certificate
// checks hold by construction and the objective moves at most by solver gap.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "free_sets.hpp"
#include "matrix.hpp"
#include "sdp.hpp"

namespace resq {

struct WeightCertificate {
    double w = 0;  // in [0,1]
    bool has_sigma_free = false;   // absent when w = 1
    bool has_rho_general = false;  // absent when w = 0
    Mat sigma_free;                // member of F
    Mat rho_general;               // rho = w rho_general + (1-w) sigma_free
    Mat dual_witness;              // feasible Y, Tr[Y sigma] >= 1 on F
    double gap = 0;                // |w - (1 - Tr[Y rho])| after re-projection
    bool nonunique_face = false;   // optimal decomposition face has dim > 0
    FreeSetSpec free_set;          // echo of the set the certificate refers to
};

struct RobustnessCertificate {
    double r = 0;  // >= 0; +inf when no cone(F) element dominates rho
    bool has_sigma_free = false;
    bool has_rho_general = false;  // absent when r = 0
    Mat sigma_free;                // rho + r rho_general = (1+r) sigma_free
    Mat rho_general;
    Mat dual_witness;  // feasible Y, Tr[Y sigma] <= 1 on F
    double gap = 0;    // |r - (Tr[Y rho] - 1)| after re-projection
    FreeSetSpec free_set;
};

struct Witness {
    Mat W;  // Tr[W sigma] >= 0 on F, Tr[W rho] < 0
    Mat X;  // X = I - W/||W||, so 0 <= Tr[X sigma] <= 1 < Tr[X rho]
};

namespace detail_quant {

// ppt dual cones split into explicit blocks: the membership constraints
// Tr[Y sigma] >= 1 (resp. <= 1) over all sigma >= 0 with sigma^Tb >= 0 are
// equivalent to Y - T - A^Tb = I (resp. Y + T + B^Tb = I) with T, A, B >= 0.
inline SdpSolution dual_program(const Mat& rho, const FreeSetSpec& f, bool weight_side,
                                const SdpOptions& opt) {
    const int d = f.dim();
    auto enc = encode_dual_constraints(f);
    SdpProblem p;
    if (!enc.primal_route) {
        p = SdpProblem::make({d}, (int)enc.functionals.size());
        p.obj_herm[0] = weight_side ? sym(rho) : sym(rho) * cplx(-1.0);
        for (std::size_t j = 0; j < enc.functionals.size(); ++j) {
            auto& c = p.add_constraint(1.0);
            c.a_herm[0] = sym(enc.functionals[j]);
            c.a_lin[j] = weight_side ? -1.0 : 1.0;
        }
    } else {
        p = SdpProblem::make({d, d, d});
        p.obj_herm[0] = weight_side ? sym(rho) : sym(rho) * cplx(-1.0);
        const cplx sign = weight_side ? -1.0 : 1.0;
        for (const auto& e : herm_basis(d)) {
            auto& c = p.add_constraint(std::real(e.trace()));
            c.a_herm[0] = e;
            c.a_herm[1] = e * sign;
            c.a_herm[2] = partial_transpose(e, f.dimA, f.dimB, Sub::B) * sign;
        }
    }
    return solve(p, opt);
}

struct PrimalOut {
    Mat sigma_prime;  // cone(F) element below (weight) / above (robustness) rho
    Mat slack;        // rho - sigma' resp. sigma' - rho, as the solver saw it
    double trace = 0;
};

inline PrimalOut primal_program(const Mat& rho, const FreeSetSpec& f, bool weight_side,
                                const SdpOptions& opt) {
    const int d = f.dim();
    auto basis = herm_basis(d);
    PrimalOut out;
    if (f.variant == FreeVariant::ppt) {
        // blocks: sigma', its partial transpose, psd slack
        SdpProblem p = SdpProblem::make({d, d, d});
        p.obj_herm[0] = Mat::identity(d) * cplx(weight_side ? -1.0 : 1.0);
        const cplx sign = weight_side ? 1.0 : -1.0;
        for (const auto& e : basis) {
            auto& c = p.add_constraint(hs_inner(e, rho) * (weight_side ? 1.0 : -1.0));
            c.a_herm[0] = e * sign;
            c.a_herm[2] = e;
        }
        for (const auto& e : basis) {
            auto& c = p.add_constraint(0.0);
            c.a_herm[0] = partial_transpose(e, f.dimA, f.dimB, Sub::B);
            c.a_herm[1] = e * cplx(-1.0);
        }
        auto s = solve(p, opt);
        if (s.status != SdpStatus::optimal) throw std::runtime_error("quantifier: primal solve failed");
        out.sigma_prime = sym(s.x_herm[0]);
        out.slack = sym(s.x_herm[2]);
        out.trace = std::real(out.sigma_prime.trace());
        return out;
    }
    // incoherent/hull: cone(F) is the nonnegative span of finitely many
    // generators (basis projectors for incoherent), so sigma' lives in scalars
    const auto gens = encode_dual_constraints(f).functionals;
    SdpProblem p = SdpProblem::make({d}, (int)gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j) p.obj_lin[j] = weight_side ? -1.0 : 1.0;
    const double sign = weight_side ? 1.0 : -1.0;
    for (const auto& e : basis) {
        auto& c = p.add_constraint(hs_inner(e, rho) * sign);
        c.a_herm[0] = e;
        for (std::size_t j = 0; j < gens.size(); ++j) c.a_lin[j] = hs_inner(e, gens[j]) * sign;
    }
    auto s = solve(p, opt);
    if (s.status != SdpStatus::optimal) throw std::runtime_error("quantifier: primal solve failed");
    Mat sp(d, d);
    for (std::size_t j = 0; j < gens.size(); ++j)
        if (s.x_lin[j] > 0) sp = sp + gens[j] * cplx(s.x_lin[j]);
    out.sigma_prime = sym(sp);
    out.slack = sym(s.x_herm[0]);
    out.trace = std::real(out.sigma_prime.trace());
    return out;
}

}  // namespace detail_quant

inline WeightCertificate weight(const Density& rho, const FreeSetSpec& f,
                                const SdpOptions& opt = {}) {
    f.validate();
    const int d = f.dim();
    if (rho.dim() != d) throw std::invalid_argument("weight: dimension mismatch");

    auto ds = detail_quant::dual_program(rho.m, f, true, opt);
    if (ds.status != SdpStatus::optimal) throw std::runtime_error("weight: dual solve failed");
    auto ml = min_linear_over_free(sym(ds.x_herm[0]), f);
    if (ml.value < 1e-9) throw std::runtime_error("weight: degenerate dual optimum");
    Mat y = sym(ds.x_herm[0]) * cplx(1.0 / ml.value);
    const double w_dual = 1.0 - hs_inner(y, rho.m);

    WeightCertificate cert;
    cert.free_set = f;
    cert.dual_witness = y;
    if (w_dual >= 1.0 - 1e-9) {
        // saturated: the only decomposition is rho itself, skip the primal
        // (whose optimum sits at sigma' = 0 on the cone boundary)
        cert.w = std::min(w_dual, 1.0);
        cert.has_rho_general = true;
        cert.rho_general = rho.m;
        cert.gap = std::abs(cert.w - w_dual);
        return cert;
    }
    auto pr = detail_quant::primal_program(rho.m, f, true, opt);
    const double t = std::min(std::max(pr.trace, 0.0), 1.0);
    cert.w = 1.0 - t;
    cert.gap = std::abs(cert.w - w_dual);
    if (t > 1e-9) {
        cert.has_sigma_free = true;
        cert.sigma_free = pr.sigma_prime * cplx(1.0 / pr.trace);
    }
    if (1.0 - t > 1e-9) {
        cert.has_rho_general = true;
        cert.rho_general = sym(rho.m - pr.sigma_prime) * cplx(1.0 / (1.0 - pr.trace));
    }
    // strict complementarity: slack rank + witness rank covering the space
    // pins a zero-dimensional optimal face; anything less leaves room for
    // more than one optimal decomposition
    if (cert.w > 1e-9 && cert.w < 1.0 - 1e-9)
        cert.nonunique_face = eig_rank(pr.slack, 1e-6) + eig_rank(y, 1e-6) < d;
    return cert;
}

inline RobustnessCertificate robustness(const Density& rho, const FreeSetSpec& f,
                                        const SdpOptions& opt = {}) {
    f.validate();
    const int d = f.dim();
    if (rho.dim() != d) throw std::invalid_argument("robustness: dimension mismatch");

    RobustnessCertificate cert;
    cert.free_set = f;
    auto ds = detail_quant::dual_program(rho.m, f, false, opt);
    if (ds.status == SdpStatus::infeasible) {
        // dual objective grows without bound <=> no cone(F) element dominates
        // rho (possible for hull sets without full-rank span)
        cert.r = std::numeric_limits<double>::infinity();
        cert.dual_witness = Mat(d, d);
        return cert;
    }
    if (ds.status != SdpStatus::optimal) throw std::runtime_error("robustness: dual solve failed");
    double mx = max_linear_over_free(sym(ds.x_herm[0]), f);
    if (mx < 1e-9) throw std::runtime_error("robustness: degenerate dual optimum");
    Mat y = sym(ds.x_herm[0]) * cplx(1.0 / mx);
    const double r_dual = hs_inner(y, rho.m) - 1.0;

    auto pr = detail_quant::primal_program(rho.m, f, false, opt);
    const double t = std::max(pr.trace, 1.0);
    cert.r = t - 1.0;
    cert.dual_witness = y;
    cert.gap = std::abs(cert.r - r_dual);
    cert.has_sigma_free = true;
    cert.sigma_free = pr.sigma_prime * cplx(1.0 / pr.trace);
    if (t - 1.0 > 1e-9) {
        cert.has_rho_general = true;
        cert.rho_general = sym(pr.sigma_prime - rho.m) * cplx(1.0 / (pr.trace - 1.0));
    }
    return cert;
}

inline Witness witness_from_dual(const WeightCertificate& cert) {
    if (cert.w <= 1e-9) throw std::invalid_argument("witness: state is free, nothing separates it");
    const int d = cert.dual_witness.rows();
    Witness wit;
    wit.W = sym(cert.dual_witness - Mat::identity(d));
    const double n = operator_norm(wit.W);
    if (n < 1e-12) throw std::runtime_error("witness: degenerate (Y = identity)");
    wit.X = sym(Mat::identity(d) - wit.W * cplx(1.0 / n));
    return wit;
}

}  // namespace resq
