#pragma once
// Order +-infinity Renyi entropies and the single-shot informations they
// induce on exclusion/discrimination games.
//
// For an ensemble {p(x), rho_x} measured with {M_g}, the joint distribution
// is p(g,x) = p(x) Tr[M_g rho_x].  The minus-infinity conditional entropy
// -log2 sum_g min_x p(g,x) is exactly -log2 of the optimally post-processed
// exclusion error, and the plus-infinity analogue with max is -log2 of the
// discrimination success, so both mutual informations reduce to quantities
// the exclusion module already computes.  Entropies are reported in bits;
// +infinity is an explicit marker, never a large float.
//
// info_advantage compares the generating state against the best free input
// of a weighted-channel ensemble (Choi partial trace p(x)*I, so the label
// prior is input independent and the prior entropy cancels): the exclusion
// advantage is -log2 of the shared-readout error ratio, bounded by
// -log2(1-w); the discrimination advantage is log2 of the success ratio,
// bounded by log2(1+r).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "exclusion.hpp"
#include "free_sets.hpp"
#include "matrix.hpp"
#include "subchannel.hpp"

namespace resq {

struct ExtendedReal {
    double value = 0;  // bits; meaningful only when finite
    bool infinite = false;

    static ExtendedReal inf() { return {0.0, true}; }
    static ExtendedReal finite(double v) { return {v, false}; }
    double bits() const {
        if (infinite) throw std::runtime_error("extended real: infinite");
        return value;
    }
};

namespace detail_info {

inline void check_distribution(const std::vector<double>& p) {
    if (p.empty()) throw std::invalid_argument("distribution: empty");
    double s = 0;
    for (double v : p) {
        if (v < -1e-12) throw std::invalid_argument("distribution: negative entry");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("distribution: must sum to 1");
}

}  // namespace detail_info

struct JointDistribution {
    int k_g = 0, k_x = 0;
    std::vector<double> p;  // row-major, p[g * k_x + x]

    JointDistribution(int kg, int kx, std::vector<double> probs)
        : k_g(kg), k_x(kx), p(std::move(probs)) {
        if (kg < 1 || kx < 1 || p.size() != size_t(kg) * size_t(kx))
            throw std::invalid_argument("joint distribution: shape");
        detail_info::check_distribution(p);
    }
    double at(int g, int x) const { return p[size_t(g) * k_x + x]; }
};

inline JointDistribution joint_distribution(const StateEnsemble& e, const Povm& m) {
    if (m.dim() != e.dim()) throw std::invalid_argument("joint distribution: dims");
    std::vector<double> p;
    p.reserve(size_t(m.outcomes()) * e.k());
    for (const auto& mg : m.effects)
        for (int x = 0; x < e.k(); ++x) p.push_back(std::max(hs_inner(mg, e.weighted(x)), 0.0));
    double s = 0;
    for (double v : p) s += v;
    for (double& v : p) v /= s;  // Born rows sum to 1 up to rounding
    return JointDistribution(m.outcomes(), e.k(), std::move(p));
}

// H_{-inf}(X) = -log2 min_x p(x); the blind guesser's exclusion error
inline ExtendedReal h_minus_inf(const std::vector<double>& prior) {
    detail_info::check_distribution(prior);
    double mn = prior[0];
    for (double v : prior) mn = std::min(mn, v);
    if (mn <= 0.0) return ExtendedReal::inf();
    return ExtendedReal::finite(-std::log2(mn));
}

// H_{-inf}(X|G) = -log2 sum_g min_x p(g,x); the measured exclusion error
inline ExtendedReal h_minus_inf_cond(const JointDistribution& j) {
    double s = 0;
    for (int g = 0; g < j.k_g; ++g) {
        double mn = j.at(g, 0);
        for (int x = 1; x < j.k_x; ++x) mn = std::min(mn, j.at(g, x));
        s += std::max(mn, 0.0);
    }
    if (s <= 0.0) return ExtendedReal::inf();
    return ExtendedReal::finite(-std::log2(s));
}

inline ExtendedReal h_plus_inf(const std::vector<double>& prior) {
    detail_info::check_distribution(prior);
    double mx = prior[0];
    for (double v : prior) mx = std::max(mx, v);
    return ExtendedReal::finite(-std::log2(mx));
}

inline ExtendedReal h_plus_inf_cond(const JointDistribution& j) {
    double s = 0;
    for (int g = 0; g < j.k_g; ++g) {
        double mx = j.at(g, 0);
        for (int x = 1; x < j.k_x; ++x) mx = std::max(mx, j.at(g, x));
        s += std::max(mx, 0.0);
    }
    if (s <= 0.0) throw std::runtime_error("conditional max-entropy: degenerate joint");
    return ExtendedReal::finite(-std::log2(s));
}

// I_{-inf}(X:G) = H_{-inf}(X|G) - H_{-inf}(X) = -log2 perr + log2 min p.
// Error probabilities below solver resolution (1e-10) count as exact zeros;
// both terms infinite (a zero prior forces a zero error) has no finite
// interpretation and is surfaced as an error.
inline ExtendedReal mutual_exclusion_info(const StateEnsemble& e, const Povm& m) {
    double perr = perr_exclusion_fixed(e, m).perr;
    ExtendedReal prior = h_minus_inf(e.priors);
    if (perr <= 1e-10) {
        if (prior.infinite)
            throw std::runtime_error("mutual exclusion info: infinite - infinite");
        return ExtendedReal::inf();
    }
    return ExtendedReal::finite(-std::log2(perr) - prior.value);
}

// I_{+inf}(X:G) = H_{+inf}(X) - H_{+inf}(X|G) = -log2 max p + log2 psucc;
// always finite because psucc >= max p > 0.
inline ExtendedReal mutual_accessible_info(const StateEnsemble& e, const Povm& m) {
    double ps = psucc_discrimination_fixed(e, m);
    ExtendedReal prior = h_plus_inf(e.priors);
    if (ps <= 0.0) throw std::runtime_error("mutual accessible info: zero success probability");
    return ExtendedReal::finite(prior.value + std::log2(ps));
}

enum class InfoMode { exclusion, discrimination };

// Maximum information gained by playing rho instead of the best free input,
// with the game and readout fixed.  Requires weighted-channel members so the
// label prior -- and with it the prior entropy -- is the same for every
// input, leaving only the error/success ratio.
inline ExtendedReal info_advantage(const Density& rho, const FreeSetSpec& f,
                                   const SubchannelEnsemble& psi, const Povm& m, InfoMode mode) {
    const int din = psi.dim_in();
    for (const auto& s : psi.members) {
        Mat red = partial_trace(s.choi, din, s.dim_out, Sub::B);
        double px = std::real(red.trace()) / din;
        if ((red - Mat::identity(din) * px).max_abs() > 1e-8)
            throw std::invalid_argument("info_advantage: member is not a weighted channel");
    }
    if (mode == InfoMode::exclusion) {
        auto qc = qc_ratio_shared(psi, m, rho, f);
        if (qc.numerator <= 1e-10) return ExtendedReal::inf();
        if (qc.saturated)
            throw std::runtime_error("info_advantage: free input excludes perfectly");
        return ExtendedReal::finite(-std::log2(qc.ratio));
    }
    auto qc = qc_success_ratio_shared(psi, m, rho, f);
    if (qc.saturated || qc.numerator <= 1e-12)
        throw std::runtime_error("info_advantage: degenerate success probabilities");
    return ExtendedReal::finite(std::log2(qc.ratio));
}

}  // namespace resq
