#pragma once
// Subchannel exclusion/discrimination games and the constructions that turn
// a weight or robustness certificate into a game with a matching advantage.
//
// A subchannel is a completely positive trace-nonincreasing map, stored as
// its Choi matrix J = sum_ij |i><j| (x) Psi(|i><j|) with the input factor on
// the slow index (tensor.hpp convention).  An ensemble {Psi_x} summing to a
// channel, applied to one input, induces the state ensemble
// p(x) rho_x = Psi_x(rho); the player then plays exclusion (or
// discrimination) on the induced ensemble.  Dividing the input's error
// probability by the best achievable over free inputs gives a performance
// ratio that the weight (robustness) bounds from below (above): folding the
// post-processing g into K = sum_a Psi_{g(a)}^dag(M_a) makes the numerator
// Tr[K rho] and the free benchmark an exact linear optimization over F.
//
// The game saturating the weight bound comes out of the dual witness Y:
// condition Y (kernel projection, eigenvalue snapping, intra-cluster
// rotation), take shift unitaries in its eigenbasis as subchannels and the
// conjugated witness itself as the measurement.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "exclusion.hpp"
#include "free_sets.hpp"
#include "matrix.hpp"
#include "quantifiers.hpp"
#include "random.hpp"
#include "tensor.hpp"

namespace resq {

namespace detail_sub {

inline Mat cols(const Mat& m, int a, int b) {
    Mat out(m.rows(), b - a);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = a; j < b; ++j) out(i, j - a) = m(i, j);
    return out;
}

inline void set_cols(Mat& m, int a, const Mat& block) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < block.cols(); ++j) m(i, a + j) = block(i, j);
}

inline Mat dft_unitary(int m) {
    Mat f(m, m);
    const double s = 1.0 / std::sqrt(double(m));
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            double ang = 2.0 * std::numbers::pi * double(j) * double(k) / double(m);
            f(j, k) = cplx(std::cos(ang) * s, std::sin(ang) * s);
        }
    return f;
}

inline Mat shift_perm(int d, int s) {
    Mat p(d, d);
    for (int k = 0; k < d; ++k) p((k + s) % d, k) = 1.0;
    return p;
}

inline double unitary_residual(const Mat& u) {
    return (u.adjoint() * u - Mat::identity(u.cols())).frobenius();
}

}  // namespace detail_sub

struct Subchannel {
    int dim_in = 0, dim_out = 0;
    Mat choi;  // (dim_in * dim_out) square, input factor slow

    Subchannel(int din, int dout, const Mat& j) : dim_in(din), dim_out(dout), choi(sym(j)) {
        if (din < 1 || dout < 1) throw std::invalid_argument("subchannel: dims");
        if (j.rows() != din * dout || j.cols() != din * dout)
            throw std::invalid_argument("subchannel: Choi shape");
        if (herm_residual(j) > Tol::input) throw std::invalid_argument("subchannel: Choi not Hermitian");
        if (min_eig(choi) < -Tol::input) throw std::invalid_argument("subchannel: not completely positive");
        Mat red = partial_trace(choi, din, dout, Sub::B);
        if (min_eig(Mat::identity(din) - red) < -1e-8)
            throw std::invalid_argument("subchannel: trace increasing");
    }

    // scale * U . U^dag; Choi is scale * (I (x) U)|Omega><Omega|(I (x) U^dag)
    static Subchannel from_unitary(const Mat& u, double scale) {
        const int d = u.rows();
        if (u.cols() != d) throw std::invalid_argument("from_unitary: not square");
        if (detail_sub::unitary_residual(u) > 1e-10)
            throw std::invalid_argument("from_unitary: not unitary");
        if (scale < 0.0 || scale > 1.0 + 1e-12) throw std::invalid_argument("from_unitary: scale");
        Mat v(d * d, 1);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) v(i * d + k, 0) = u(k, i);
        return Subchannel(d, d, outer(v, v) * scale);
    }
};

// Psi(m) = Tr_in[(m^T (x) I) J]; trace of the output is the branch weight
inline Mat apply(const Subchannel& s, const Mat& m) {
    if (m.rows() != s.dim_in || m.cols() != s.dim_in) throw std::invalid_argument("apply: dims");
    Mat big = kron(m.transpose(), Mat::identity(s.dim_out)) * s.choi;
    return partial_trace(big, s.dim_in, s.dim_out, Sub::A);
}

// Tr[M Psi(X)] = Tr[adjoint_apply(s, M) X] for all X
inline Mat adjoint_apply(const Subchannel& s, const Mat& m) {
    if (m.rows() != s.dim_out || m.cols() != s.dim_out)
        throw std::invalid_argument("adjoint_apply: dims");
    Mat big = s.choi * kron(Mat::identity(s.dim_in), m);
    return partial_trace(big, s.dim_in, s.dim_out, Sub::B).transpose();
}

struct SubchannelEnsemble {
    std::vector<Subchannel> members;

    explicit SubchannelEnsemble(std::vector<Subchannel> ms) : members(std::move(ms)) {
        if (members.size() < 2) throw std::invalid_argument("subchannel ensemble: need k >= 2");
        const int din = members[0].dim_in, dout = members[0].dim_out;
        Mat total(din, din);
        for (const auto& s : members) {
            if (s.dim_in != din || s.dim_out != dout)
                throw std::invalid_argument("subchannel ensemble: mixed dims");
            total += partial_trace(s.choi, din, dout, Sub::B);
        }
        if ((total - Mat::identity(din)).frobenius() > 1e-8)
            throw std::invalid_argument("subchannel ensemble: members do not sum to a channel");
    }
    int k() const { return (int)members.size(); }
    int dim_in() const { return members[0].dim_in; }
    int dim_out() const { return members[0].dim_out; }
};

struct InducedEnsemble {
    StateEnsemble ensemble;
    std::vector<char> placeholder;  // branch had zero probability on this input
};

// p(x) rho_x = Psi_x(rho).  Branches with (numerically) zero probability get
// a maximally mixed placeholder state and an exactly zero prior, so they can
// never contribute to an error probability.
inline InducedEnsemble ensemble_of_states(const SubchannelEnsemble& psi, const Density& rho) {
    if (rho.dim() != psi.dim_in()) throw std::invalid_argument("ensemble_of_states: dims");
    const int dout = psi.dim_out();
    InducedEnsemble out;
    std::vector<Mat> states;
    std::vector<double> priors;
    double total = 0;
    for (const auto& s : psi.members) {
        Mat branch = sym(apply(s, rho.m));
        double p = std::real(branch.trace());
        total += std::max(p, 0.0);
        if (p <= 1e-12) {
            states.push_back(Mat::identity(dout) * (1.0 / dout));
            priors.push_back(0.0);
            out.placeholder.push_back(1);
            continue;
        }
        Mat st = psd_part(branch * (1.0 / p));
        st = st * (1.0 / std::real(st.trace()));
        states.push_back(st);
        priors.push_back(p);
        out.placeholder.push_back(0);
    }
    for (double& p : priors) p /= total;  // channel condition: total = 1 up to dust
    out.ensemble = StateEnsemble(std::move(states), std::move(priors));
    return out;
}

inline ExclusionFixed perr_subchannel(const SubchannelEnsemble& psi, const Povm& m,
                                      const Density& rho) {
    return perr_exclusion_fixed(ensemble_of_states(psi, rho).ensemble, m);
}

inline double psucc_subchannel(const SubchannelEnsemble& psi, const Povm& m, const Density& rho) {
    return psucc_discrimination_fixed(ensemble_of_states(psi, rho).ensemble, m);
}

struct UnitaryFamily {
    std::vector<Mat> unitaries;
    Mat basis;  // reference orthonormal basis (columns) the family acts on

    UnitaryFamily(std::vector<Mat> us, const Mat& e) : unitaries(std::move(us)), basis(e) {
        if (unitaries.empty()) throw std::invalid_argument("unitary family: empty");
        if (detail_sub::unitary_residual(basis) > 1e-10)
            throw std::invalid_argument("unitary family: basis not orthonormal");
        for (const auto& u : unitaries)
            if (u.rows() != basis.rows() || detail_sub::unitary_residual(u) > 1e-10)
                throw std::invalid_argument("unitary family: member not unitary");
    }
    int k() const { return (int)unitaries.size(); }
    int dim() const { return basis.rows(); }
};

// U_s = E P_s E^dag with P_s the cyclic shift by s.  The family permutes the
// basis labels transitively, so sum_s U_s |e_j><e_j| U_s^dag = I for every j.
inline UnitaryFamily shift_unitaries(const Mat& e) {
    const int d = e.rows();
    if (e.cols() != d) throw std::invalid_argument("shift_unitaries: basis not square");
    std::vector<Mat> us;
    us.reserve(d);
    for (int s = 0; s < d; ++s) us.push_back(e * detail_sub::shift_perm(d, s) * e.adjoint());
    return UnitaryFamily(std::move(us), e);
}

struct ConditionedWitness {
    Mat eigvecs;                  // orthonormal columns, matching eigvals order
    std::vector<double> eigvals;  // nonnegative, descending, constant on clusters
    double objective = 0;         // Tr[Y rho] after conditioning

    Mat matrix() const {
        const int d = eigvecs.rows();
        Mat y(d, d);
        for (int i = 0; i < (int)eigvals.size(); ++i) {
            if (eigvals[i] == 0.0) continue;
            Mat vi = detail_sub::cols(eigvecs, i, i + 1);
            y += outer(vi, vi) * eigvals[i];
        }
        return sym(y);
    }
    double trace() const {
        double t = 0;
        for (double v : eigvals) t += v;
        return t;
    }
};

// Clean a dual witness before building a game out of its eigenbasis.
// Solver output is only accurate to the duality gap, and the game
// construction is sensitive to the witness's eigenstructure, so:
//   1. rescale so the free-set extremum of Tr[Y sigma] is exactly 1, and
//      project onto the near-kernel of the primal slack (complementary
//      slackness says the exact optimum lives there) when that leaves the
//      rescaled objective unchanged;
//   2. snap near-zero eigenvalues to zero and nearly-degenerate ones to
//      their cluster mean, then restore the free-set scale;
//   3. inside each degenerate cluster, rotate the eigenvectors so each one
//      sees the same overlap with rho (diagonalize the compression of rho,
//      then mix with a DFT).  This leaves Y itself unchanged but removes
//      the arbitrariness in the basis the shift unitaries are built from.
inline ConditionedWitness condition_witness(const Mat& y_in, const Mat& slack, const Density& rho,
                                            bool weight_side, const FreeSetSpec& f) {
    const int d = y_in.rows();
    if (slack.rows() != d || rho.dim() != d) throw std::invalid_argument("condition_witness: dims");
    auto scale_of = [&](const Mat& c) -> double {
        return weight_side ? min_linear_over_free(c, f).value : max_linear_over_free(c, f);
    };

    Mat best = sym(y_in);
    double m0 = scale_of(best);
    if (m0 <= 1e-12) throw std::runtime_error("condition_witness: free-set scale degenerate");
    best = best * (1.0 / m0);
    const double obj_raw = hs_inner(best, rho.m);

    auto es = herm_eig(sym(slack), 1.0);
    const double top = std::max(es.vals.front(), 1e-30);
    int kern = 0;
    while (kern < d && es.vals[kern] > 1e-6 * top) ++kern;
    if (kern > 0 && kern < d) {
        Mat p = detail_sub::cols(es.vecs, kern, d);
        Mat cand = sym(p * (p.adjoint() * sym(y_in) * p) * p.adjoint());
        double m1 = scale_of(cand);
        if (m1 > 1e-12) {
            cand = cand * (1.0 / m1);
            if (std::abs(hs_inner(cand, rho.m) - obj_raw) <=
                1e-7 * std::max(1.0, std::abs(obj_raw)))
                best = cand;
        }
    }

    auto ey = herm_eig(best, 1.0);
    std::vector<double> yv = ey.vals;
    Mat v = ey.vecs;
    if (yv[0] <= 0.0) throw std::runtime_error("condition_witness: witness not positive");
    for (double& x : yv)
        if (x < 1e-6 * yv[0]) x = 0.0;

    std::vector<std::pair<int, int>> clusters;
    int start = 0;
    for (int i = 1; i < d; ++i)
        if (yv[i - 1] - yv[i] > 1e-7 * std::max(yv[0], 1.0)) {
            clusters.emplace_back(start, i);
            start = i;
        }
    clusters.emplace_back(start, d);
    for (auto [a, b] : clusters) {
        double mean = 0;
        for (int i = a; i < b; ++i) mean += yv[i];
        mean /= double(b - a);
        for (int i = a; i < b; ++i) yv[i] = mean;
    }

    auto assemble = [&](const std::vector<double>& vals) {
        Mat y(d, d);
        for (int i = 0; i < d; ++i) {
            if (vals[i] == 0.0) continue;
            Mat vi = detail_sub::cols(v, i, i + 1);
            y += outer(vi, vi) * vals[i];
        }
        return sym(y);
    };
    double m2 = scale_of(assemble(yv));
    if (m2 <= 1e-12) throw std::runtime_error("condition_witness: snapped witness degenerate");
    for (double& x : yv) x /= m2;

    for (auto [a, b] : clusters) {
        const int mlen = b - a;
        if (mlen <= 1) continue;
        Mat vg = detail_sub::cols(v, a, b);
        Mat c = sym(vg.adjoint() * rho.m * vg);
        auto ec = herm_eig(c, 1.0);
        detail_sub::set_cols(v, a, vg * (ec.vecs * detail_sub::dft_unitary(mlen)));
    }

    ConditionedWitness out;
    out.eigvecs = v;
    out.eigvals = yv;
    out.objective = hs_inner(out.matrix(), rho.m);
    return out;
}

struct DualGame {
    SubchannelEnsemble channels;
    Povm measurement;
    UnitaryFamily family;
    ConditionedWitness witness;
};

namespace detail_sub {

inline DualGame game_from_witness(const ConditionedWitness& cw) {
    const int d = cw.eigvecs.rows();
    const double ty = cw.trace();
    if (ty <= 1e-12) throw std::runtime_error("game construction: witness trace degenerate");
    UnitaryFamily fam = shift_unitaries(cw.eigvecs);
    Mat yhat = cw.matrix();
    std::vector<Subchannel> subs;
    std::vector<Mat> effects;
    subs.reserve(d);
    effects.reserve(d);
    for (const Mat& u : fam.unitaries) {
        subs.push_back(Subchannel::from_unitary(u, 1.0 / d));
        effects.push_back(sym(u * yhat * u.adjoint()) * (1.0 / ty));
    }
    return DualGame{SubchannelEnsemble(std::move(subs)), Povm(std::move(effects)),
                    std::move(fam), cw};
}

}  // namespace detail_sub

// Exclusion game on which rho's error rate, relative to the best free
// input, reproduces 1 - w(rho).  Subchannels are the shifted unitaries at
// uniform weight; effects are the conjugated witness normalized to a POVM.
inline DualGame build_dual_game(const Density& rho, const WeightCertificate& cert) {
    Mat slack = cert.has_sigma_free ? sym(rho.m - cert.sigma_free * (1.0 - cert.w)) : rho.m;
    ConditionedWitness cw = condition_witness(cert.dual_witness, slack, rho, true, cert.free_set);
    return detail_sub::game_from_witness(cw);
}

// Discrimination mirror: success relative to the best free input reproduces
// 1 + r(rho).  The slack of the covering decomposition plays the role the
// leftover resource plays on the weight side.
inline DualGame build_discrimination_game(const Density& rho, const RobustnessCertificate& cert) {
    if (!cert.has_sigma_free)
        throw std::invalid_argument("build_discrimination_game: robustness is infinite");
    Mat slack = sym(cert.sigma_free * (1.0 + cert.r) - rho.m);
    ConditionedWitness cw = condition_witness(cert.dual_witness, slack, rho, false, cert.free_set);
    return detail_sub::game_from_witness(cw);
}

// Binary measure-and-prepare game out of a weight witness: both subchannels
// measure {A, I - A} with A = (I + X/||X||)/2 and write the outcome into a
// classical flag, one with the labels swapped.  The branch difference has
// trace norm Tr[X eta]/||X||, so the optimal exclusion error of any input is
// (1 - Tr[X eta]/||X||)/2 and Tr[X rho] > 1 buys a strict advantage over
// every free state.
inline SubchannelEnsemble build_witness_game(const Witness& wit) {
    const int d = wit.X.rows();
    const double nx = operator_norm(wit.X);
    if (nx <= 1e-12) throw std::invalid_argument("build_witness_game: degenerate witness");
    Mat a = (Mat::identity(d) + sym(wit.X) * (1.0 / nx)) * 0.5;
    Mat b = Mat::identity(d) - a;
    Mat p0 = outer(basis_ket(2, 0), basis_ket(2, 0));
    Mat p1 = outer(basis_ket(2, 1), basis_ket(2, 1));
    std::vector<Subchannel> subs;
    subs.emplace_back(d, 2, (kron(a.transpose(), p0) + kron(b.transpose(), p1)) * 0.5);
    subs.emplace_back(d, 2, (kron(b.transpose(), p0) + kron(a.transpose(), p1)) * 0.5);
    return SubchannelEnsemble(std::move(subs));
}

struct QcRatio {
    double numerator = 0;    // error (success) probability of the given input
    double denominator = 0;  // best free input under the same game and readout
    double ratio = 0;
    bool saturated = false;  // denominator hit zero; ratio reported as 0
    Mat argopt_free;         // free state achieving the denominator
};

namespace detail_sub {

inline Mat fold_readout(const SubchannelEnsemble& psi, const Povm& m,
                        const std::vector<int>& assignment) {
    Mat k(psi.dim_in(), psi.dim_in());
    for (int a = 0; a < m.outcomes(); ++a)
        k += adjoint_apply(psi.members[assignment[a]], m.effects[a]);
    return sym(k);
}

}  // namespace detail_sub

// Exclusion performance of rho against the best free input, with the
// measurement and post-processing fixed to rho's own (shared readout).
// Folding the readout into K = sum_a Psi_{g(a)}^dag(M_a) makes the
// denominator min_{sigma in F} Tr[K sigma], an exact linear optimization.
inline QcRatio qc_ratio_shared(const SubchannelEnsemble& psi, const Povm& m, const Density& rho,
                               const FreeSetSpec& f) {
    if (m.dim() != psi.dim_out()) throw std::invalid_argument("qc_ratio_shared: readout dims");
    if (f.dim() != psi.dim_in()) throw std::invalid_argument("qc_ratio_shared: free set dims");
    auto fixed = perr_subchannel(psi, m, rho);
    QcRatio out;
    out.numerator = fixed.perr;
    Mat k = detail_sub::fold_readout(psi, m, fixed.assignment);
    auto ml = min_linear_over_free(k, f);
    out.denominator = ml.value;
    out.argopt_free = ml.argmin;
    if (!(ml.value > 1e-12)) {
        out.saturated = true;
        out.ratio = 0.0;
        return out;
    }
    if (std::abs(hs_inner(k, ml.argmin) - ml.value) > 1e-8 * std::max(1.0, std::abs(ml.value)))
        throw std::runtime_error("qc_ratio_shared: free optimum inconsistent");
    out.ratio = out.numerator / out.denominator;
    return out;
}

// Discrimination mirror of qc_ratio_shared: argmax post-processing, free
// benchmark maximized instead of minimized.
inline QcRatio qc_success_ratio_shared(const SubchannelEnsemble& psi, const Povm& m,
                                       const Density& rho, const FreeSetSpec& f) {
    if (m.dim() != psi.dim_out())
        throw std::invalid_argument("qc_success_ratio_shared: readout dims");
    if (f.dim() != psi.dim_in())
        throw std::invalid_argument("qc_success_ratio_shared: free set dims");
    auto ind = ensemble_of_states(psi, rho);
    QcRatio out;
    std::vector<int> g(m.outcomes(), 0);
    double ps = 0;
    for (int a = 0; a < m.outcomes(); ++a) {
        double bv = -std::numeric_limits<double>::infinity();
        int bx = 0;
        for (int x = 0; x < ind.ensemble.k(); ++x) {
            double vv = hs_inner(m.effects[a], ind.ensemble.weighted(x));
            if (vv > bv + 1e-15) {
                bv = vv;
                bx = x;
            }
        }
        g[a] = bx;
        ps += bv;
    }
    out.numerator = std::min(std::max(ps, 0.0), 1.0);
    Mat k = detail_sub::fold_readout(psi, m, g);
    auto ml = min_linear_over_free(k * (-1.0), f);  // argmax via negation
    out.denominator = -ml.value;
    out.argopt_free = ml.argmin;
    if (!(out.denominator > 1e-12)) {
        out.saturated = true;
        out.ratio = 0.0;
        return out;
    }
    out.ratio = out.numerator / out.denominator;
    return out;
}

struct QcRatioIndependent {
    double numerator = 0;    // optimal exclusion error for rho's ensemble
    double denominator = 0;  // free input with its own optimal measurement
    double ratio = 0;
    bool saturated = false;
    bool converged = false;  // alternating minimization reached tolerance
    bool certified = false;  // final (sigma, M) pair passes the optimality check
    int rounds = 0;
};

// Both players fully optimized: the numerator is rho's optimal exclusion
// error, the denominator min_{sigma in F} of sigma's optimal error.  The
// denominator is found by alternating two exact solves -- fold the current
// measurement's readout and minimize over F, then reoptimize the measurement
// for the new free state -- which decreases the objective every round.
inline QcRatioIndependent qc_ratio_independent(const SubchannelEnsemble& psi, const Density& rho,
                                               const FreeSetSpec& f, int cap = 100) {
    if (f.dim() != psi.dim_in()) throw std::invalid_argument("qc_ratio_independent: dims");
    if (cap < 1) throw std::invalid_argument("qc_ratio_independent: cap");
    QcRatioIndependent out;
    auto num_opt = min_error_exclusion(ensemble_of_states(psi, rho).ensemble);
    out.numerator = num_opt.perr;

    Povm m = num_opt.m_opt;
    std::vector<int> g =
        perr_exclusion_fixed(ensemble_of_states(psi, rho).ensemble, m).assignment;
    double prev = std::numeric_limits<double>::infinity();
    double cur = prev;
    Mat sigma;
    for (out.rounds = 1; out.rounds <= cap; ++out.rounds) {
        Mat k = detail_sub::fold_readout(psi, m, g);
        sigma = min_linear_over_free(k, f).argmin;
        auto ens = ensemble_of_states(psi, Density(sigma)).ensemble;
        auto opt = min_error_exclusion(ens);
        m = opt.m_opt;
        g = perr_exclusion_fixed(ens, m).assignment;
        cur = opt.perr;
        if (cur > prev + 1e-12)
            throw std::runtime_error("qc_ratio_independent: objective increased");
        if (prev - cur <= 1e-9) {
            out.converged = true;
            break;
        }
        prev = cur;
    }
    out.rounds = std::min(out.rounds, cap);
    out.denominator = cur;
    auto final_ens = ensemble_of_states(psi, Density(sigma)).ensemble;
    out.certified = check_exclusion_optimality(final_ens, m, 1e-6).pass;
    if (!(out.denominator > 1e-12)) {
        out.saturated = true;
        out.ratio = 0.0;
        return out;
    }
    out.ratio = out.numerator / out.denominator;
    return out;
}

struct FamilyConditions {
    double coverage_residual = 0;  // orbits of basis projectors must resolve identity
    double invariance_residual = 0;  // conjugations must agree on every free state
    bool pass = false;
};

// The two structural conditions under which a unitary-family game makes the
// independent-player ratio meet the weight bound: the family acts
// transitively on its basis (c1), and free states are invariant enough that
// every player sees the same free ensemble (c2, checked on the supplied
// states).  Both residuals must vanish to 1e-8.
inline FamilyConditions check_family_conditions(const UnitaryFamily& fam,
                                             const std::vector<Mat>& free_states) {
    const int d = fam.dim();
    FamilyConditions out;
    for (int j = 0; j < d; ++j) {
        Mat ej = detail_sub::cols(fam.basis, j, j + 1);
        Mat acc(d, d);
        for (const Mat& u : fam.unitaries) {
            Mat uej = u * ej;
            acc += outer(uej, uej);
        }
        out.coverage_residual = std::max(out.coverage_residual, operator_norm(acc - Mat::identity(d)));
    }
    for (const Mat& s : free_states) {
        std::vector<Mat> orbit;
        orbit.reserve(fam.unitaries.size());
        for (const Mat& u : fam.unitaries) orbit.push_back(u * s * u.adjoint());
        for (size_t i = 0; i < orbit.size(); ++i)
            for (size_t j = i + 1; j < orbit.size(); ++j)
                out.invariance_residual = std::max(out.invariance_residual, (orbit[i] - orbit[j]).frobenius());
    }
    out.pass = out.coverage_residual <= 1e-8 && out.invariance_residual <= 1e-8;
    return out;
}

inline FamilyConditions check_family_conditions(const UnitaryFamily& fam, const FreeSetSpec& f,
                                             int samples, Rng& rng) {
    std::vector<Mat> sts;
    sts.reserve(samples);
    for (int i = 0; i < samples; ++i) sts.push_back(sample_free(f, rng));
    return check_family_conditions(fam, sts);
}

}  // namespace resq
