#pragma once
// Randomized end-to-end verification suites, shared by the CLI `verify`
// subcommand and the acceptance runner.  Each suite checks one contract of
// the library against an independent route (closed form, duality partner,
// constructed game, or raw sampling), draws everything from its own
// deterministically derived generator, and reports the worst margin it saw,
// so two runs with the same configuration produce identical records.
//
// Pinned sub-tolerances that are part of the contract itself (strictness
// floors, trace-distance of reconstructions, the 3-sigma sampling band)
// stay fixed; the configurable tolerance only moves the primary bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "exclusion.hpp"
#include "free_sets.hpp"
#include "info_metrics.hpp"
#include "quantifiers.hpp"
#include "random.hpp"
#include "subchannel.hpp"

namespace resq {

struct VerifyConfig {
    std::uint64_t seed = 90021;
    int trials = 200;   // scale for the densest suites; others derive from it
    double tol = 1e-6;  // primary equality/inequality tolerance
};

struct CheckRecord {
    std::string name;
    int trials = 0;
    int failures = 0;
    double worst = 0;  // worst margin in the suite's own metric (see note)
    std::string note;
    bool pass = false;

    void finish() { pass = failures == 0 && trials > 0; }
};

namespace detail_verify {

inline Rng suite_rng(const VerifyConfig& cfg, std::uint64_t suite) {
    return Rng(cfg.seed ^ (0x9e3779b97f4a7c15ull * (suite + 1)));
}

inline Mat mixed_state(int d, double lam, Rng& rng) {
    return sym(random_pure(d, rng) * cplx(lam) + Mat::identity(d) * cplx((1.0 - lam) / d));
}

// one free-set shape per variant, at desk scale
inline FreeSetSpec spec_for(int variant, Rng& rng) {
    switch (variant % 3) {
        case 0: return FreeSetSpec::incoherent(2 + variant % 2 + (variant / 3) % 2);
        case 1: return FreeSetSpec::ppt(2, 2);
        default: {
            std::vector<Mat> gens;
            for (int i = 0; i < 3; ++i) gens.push_back(random_density(2, 2, rng));
            gens.push_back(Mat::identity(2) * cplx(0.5));  // keeps every cone problem feasible
            return FreeSetSpec::hull(std::move(gens));
        }
    }
}

// rejection-sample a state whose weight is comfortably nonzero; the cheap
// pre-screen avoids solving programs for states that are obviously free
inline bool obviously_free(const Mat& rho, const FreeSetSpec& f) {
    switch (f.variant) {
        case FreeVariant::incoherent: {
            Mat in_basis = f.basis.adjoint() * rho * f.basis;
            double off = 0;
            for (int i = 0; i < in_basis.rows(); ++i)
                for (int j = 0; j < in_basis.cols(); ++j)
                    if (i != j) off = std::max(off, std::abs(in_basis(i, j)));
            return off < 0.05;
        }
        case FreeVariant::ppt:
            return min_eig(partial_transpose(rho, f.dimA, f.dimB, Sub::B)) > -0.02;
        case FreeVariant::hull:
            return false;
    }
    return false;
}

struct ResourcefulDraw {
    Density rho;
    WeightCertificate cert;
};

inline ResourcefulDraw resourceful(const FreeSetSpec& f, double min_w, Rng& rng) {
    const int d = f.dim();
    for (int tries = 0; tries < 200; ++tries) {
        Mat rho = mixed_state(d, 0.72 + 0.26 * rng.uniform(), rng);
        if (obviously_free(rho, f)) continue;
        auto cert = weight(Density(rho), f);
        if (cert.w >= min_w) return {Density(rho), std::move(cert)};
    }
    throw std::runtime_error("verify: could not draw a resourceful state");
}

inline SubchannelEnsemble random_game(int d, Rng& rng) {
    Mat g = ginibre(d * d, d * d, rng);
    Mat j1 = sym(g * g.adjoint());
    Mat red = partial_trace(j1, d, d, Sub::B);
    j1 = j1 * (0.7 / operator_norm(red));
    Mat rest = Mat::identity(d) - partial_trace(j1, d, d, Sub::B);
    Mat j2 = kron(rest, Mat::identity(d) * (1.0 / d));
    std::vector<Subchannel> subs;
    subs.emplace_back(d, d, j1);
    subs.emplace_back(d, d, j2);
    return SubchannelEnsemble(std::move(subs));
}

inline SubchannelEnsemble weighted_unitary_game(int d, int k, Rng& rng) {
    auto probs = random_prob(k, rng);
    std::vector<Subchannel> subs;
    for (int x = 0; x < k; ++x)
        subs.push_back(Subchannel::from_unitary(haar_unitary(d, rng), probs[x]));
    return SubchannelEnsemble(std::move(subs));
}

// coherence weight of a qubit, closed form: the optimal diagonal part
// equalizes both slack populations at |rho01| when that fits, otherwise
// zeroes the smaller population and rides the psd boundary
inline double qubit_coherence_weight(const Mat& rho) {
    const double c = std::abs(rho(0, 1));
    const double p0 = std::real(rho(0, 0)), p1 = std::real(rho(1, 1));
    if (c <= std::min(p0, p1)) return 2.0 * c;
    if (p0 <= p1) return 1.0 - std::max(0.0, p1 - c * c / p0);
    return 1.0 - std::max(0.0, p0 - c * c / p1);
}

}  // namespace detail_verify

// SDP route against the k = 2 trace-norm formula, qubits and ququarts
inline CheckRecord verify_binary_exclusion(const VerifyConfig& cfg) {
    CheckRecord rec{.name = "binary-exclusion-closed-form",
                    .note = "max |sdp - trace-norm formula|"};
    auto rng = detail_verify::suite_rng(cfg, 1);
    for (int t = 0; t < cfg.trials; ++t) {
        const int d = (t % 2 == 0) ? 2 : 4;
        std::vector<Mat> sts = {random_density(d, 1 + rng.index(d), rng),
                                random_density(d, 1 + rng.index(d), rng)};
        StateEnsemble e(std::move(sts), random_prob(2, rng));
        const double dev = std::abs(min_error_exclusion(e).perr - binary_exclusion_value(e));
        rec.worst = std::max(rec.worst, dev);
        rec.failures += dev > cfg.tol;
        ++rec.trials;
    }
    rec.finish();
    return rec;
}

// primal weight against its dual witness, and the convex split it returns
inline CheckRecord verify_weight_duality(const VerifyConfig& cfg) {
    CheckRecord rec{.name = "weight-duality-decomposition",
                    .note = "max of duality gap and split trace-distance"};
    auto rng = detail_verify::suite_rng(cfg, 2);
    for (int variant = 0; variant < 3; ++variant) {
        auto f = detail_verify::spec_for(variant, rng);
        const int d = f.dim();
        for (int t = 0; t < cfg.trials; ++t) {
            Mat rho = detail_verify::mixed_state(d, 0.3 + 0.65 * rng.uniform(), rng);
            auto cert = weight(Density(rho), f);
            Mat mix(d, d);
            if (cert.has_rho_general) mix += cert.rho_general * cplx(cert.w);
            if (cert.has_sigma_free) mix += cert.sigma_free * cplx(1.0 - cert.w);
            const double dist = 0.5 * trace_norm(rho - mix);
            rec.worst = std::max(rec.worst, std::max(cert.gap, dist));
            rec.failures += cert.gap > cfg.tol || dist > 1e-7;
            ++rec.trials;
        }
    }
    rec.finish();
    return rec;
}

// solver against the two-branch qubit coherence formula
inline CheckRecord verify_qubit_closed_form(const VerifyConfig& cfg) {
    CheckRecord rec{.name = "qubit-coherence-weight", .note = "max |sdp - closed form|"};
    auto rng = detail_verify::suite_rng(cfg, 3);
    auto f = FreeSetSpec::incoherent(2);
    for (int t = 0; t < cfg.trials; ++t) {
        // rank-1 draws keep the boundary branch of the formula covered
        Mat rho = (t % 3 == 2) ? random_pure(2, rng) : random_density(2, 2, rng);
        const double dev =
            std::abs(weight(Density(rho), f).w - detail_verify::qubit_coherence_weight(rho));
        rec.worst = std::max(rec.worst, dev);
        rec.failures += dev > cfg.tol;
        ++rec.trials;
    }
    rec.finish();
    return rec;
}

// every resourceful state yields a two-outcome game it plays strictly
// better than the best free state
inline CheckRecord verify_witness_advantage(const VerifyConfig& cfg) {
    CheckRecord rec{.name = "witness-game-advantage",
                    .note = "min classical-minus-quantum error gap"};
    rec.worst = std::numeric_limits<double>::infinity();
    auto rng = detail_verify::suite_rng(cfg, 4);
    const int per_variant = std::max(1, cfg.trials / 2);
    for (int variant = 0; variant < 3; ++variant) {
        auto f = detail_verify::spec_for(variant, rng);
        for (int t = 0; t < per_variant; ++t) {
            auto draw = detail_verify::resourceful(f, 0.02, rng);
            auto wit = witness_from_dual(draw.cert);
            const double nx = operator_norm(wit.X);
            const double q = 0.5 * (1.0 - hs_inner(wit.X, draw.rho.m) / nx);
            const double cl = 0.5 * (1.0 - max_linear_over_free(sym(wit.X), f) / nx);
            const double gap = cl - q;
            // the game realizes exactly the witness error curve
            auto game = build_witness_game(wit);
            Povm flag({outer(basis_ket(2, 0), basis_ket(2, 0)),
                       outer(basis_ket(2, 1), basis_ket(2, 1))});
            const double played = perr_subchannel(game, flag, draw.rho).perr;
            rec.worst = std::min(rec.worst, gap);
            rec.failures += gap < 1e-7 || std::abs(played - q) > 1e-8;
            ++rec.trials;
        }
    }
    rec.finish();
    return rec;
}

// constructed games meet the weight bound with equality; arbitrary games
// never beat it
inline CheckRecord verify_shared_ratio(const VerifyConfig& cfg) {
    CheckRecord rec{.name = "shared-readout-ratio",
                    .note = "max violation across equality and bound branches"};
    auto rng = detail_verify::suite_rng(cfg, 5);
    for (int t = 0; t < cfg.trials; ++t) {
        auto f = detail_verify::spec_for(t, rng);
        const int d = f.dim();
        Mat rho = detail_verify::mixed_state(d, 0.35 + 0.6 * rng.uniform(), rng);
        auto cert = weight(Density(rho), f);
        auto game = build_dual_game(Density(rho), cert);
        auto qr = qc_ratio_shared(game.channels, game.measurement, Density(rho), f);
        double viol = 0;
        if (cert.w < 1.0 - 1e-6)
            viol = std::abs(qr.ratio - (1.0 - cert.w));
        else
            viol = qr.numerator;  // saturated branch: nothing left to exclude
        rec.worst = std::max(rec.worst, viol);
        rec.failures += viol > cfg.tol;
        ++rec.trials;
    }
    for (int t = 0; t < cfg.trials; ++t) {
        auto f = detail_verify::spec_for(t, rng);
        const int d = f.dim();
        Mat rho = detail_verify::mixed_state(d, 0.3 + 0.65 * rng.uniform(), rng);
        auto psi = detail_verify::random_game(d, rng);
        Povm m(random_povm(d, 2 + rng.index(2), rng));
        auto qr = qc_ratio_shared(psi, m, Density(rho), f);
        if (qr.saturated) continue;  // ratio undefined when the free side is exact
        const double w = weight(Density(rho), f).w;
        const double viol = (1.0 - w - 1e-7) - qr.ratio;
        rec.worst = std::max(rec.worst, viol);
        rec.failures += viol > 0;
        ++rec.trials;
    }
    rec.finish();
    return rec;
}

// stationarity certificate accepts every solver output and rejects a
// deliberately lazy measurement with negative slack
inline CheckRecord verify_exclusion_optimality(const VerifyConfig& cfg) {
    CheckRecord rec{.name = "exclusion-optimality-certificate",
                    .note = "min eigenvalue slack over accepted certificates"};
    rec.worst = std::numeric_limits<double>::infinity();
    auto rng = detail_verify::suite_rng(cfg, 6);
    for (int t = 0; t < cfg.trials; ++t) {
        const int d = 2 + rng.index(3), k = 2 + rng.index(3);
        std::vector<Mat> sts;
        for (int x = 0; x < k; ++x) sts.push_back(random_density(d, d, rng));
        StateEnsemble e(std::move(sts), random_prob(k, rng));
        auto opt = min_error_exclusion(e);
        auto cert = check_exclusion_optimality(e, opt.m_opt, cfg.tol);
        for (double s : cert.min_eig_slacks) rec.worst = std::min(rec.worst, s);
        rec.failures += !cert.pass;
        ++rec.trials;
    }
    // uniform effects on {|0>,|+>} leave a traceless nonzero residual, so a
    // strictly negative slack must be flagged
    Mat plus(2, 2);
    plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
    StateEnsemble frozen({outer(basis_ket(2, 0), basis_ket(2, 0)), plus}, {0.5, 0.5});
    Povm lazy({Mat::identity(2) * cplx(0.5), Mat::identity(2) * cplx(0.5)});
    auto bad = check_exclusion_optimality(frozen, lazy, cfg.tol);
    double worst_slack = 0;
    for (double s : bad.min_eig_slacks) worst_slack = std::min(worst_slack, s);
    rec.failures += bad.pass || worst_slack > -1e-6;
    ++rec.trials;
    rec.finish();
    return rec;
}

// players who cannot coordinate readouts still meet the weight bound on the
// constructed game, and the structural checker recognizes when the
// unitary family covers the free set
inline CheckRecord verify_independent_ratio(const VerifyConfig& cfg) {
    CheckRecord rec{.name = "independent-readout-ratio",
                    .note = "max bound violation; plus family-condition patterns"};
    auto rng = detail_verify::suite_rng(cfg, 7);
    auto f = FreeSetSpec::incoherent(2);
    for (int t = 0; t < cfg.trials; ++t) {
        Mat rho = detail_verify::mixed_state(2, 0.4 + 0.55 * rng.uniform(), rng);
        if (std::abs(rho(0, 1)) < 1e-3) {
            --t;  // need visible coherence for the game to bite
            continue;
        }
        auto cert = weight(Density(rho), f);
        auto game = build_dual_game(Density(rho), cert);
        auto qi = qc_ratio_independent(game.channels, Density(rho), f);
        bool ok = qi.certified;
        double viol = 0;
        if (qi.saturated) {
            ok = ok && cert.w >= 1.0 - cfg.tol;
        } else {
            viol = (1.0 - cert.w - cfg.tol) - qi.ratio;
            ok = ok && viol <= 0;
        }
        rec.worst = std::max(rec.worst, viol);
        rec.failures += !ok;
        ++rec.trials;
    }

    // shift family: basis coverage always holds; invariance needs the free
    // set to be a single conjugation-invariant point
    auto fam = shift_unitaries(Mat::identity(2));
    Mat skewed(2, 2);
    skewed(0, 0) = 0.9;
    skewed(1, 1) = 0.1;
    auto pattern = check_family_conditions(fam, {skewed});
    rec.failures += !(pattern.coverage_residual <= 1e-8 && pattern.invariance_residual > 1e-8);
    auto mm = FreeSetSpec::hull({Mat::identity(2) * cplx(0.5)});
    auto both = check_family_conditions(fam, mm, 16, rng);
    rec.failures += !both.pass;
    rec.trials += 2;
    rec.finish();
    return rec;
}

// single-shot exclusion advantage: equality on the constructed game, never
// above the weight line for arbitrary weighted-unitary games.  Comparisons
// in bits amplify probability-scale solver noise by 1/((1-w) ln 2) and by
// the inverse denominator, so draws are conditioned to stay resolvable at
// the bit tolerance and ill-conditioned ones check the same bound on the
// linear scale instead.
inline CheckRecord verify_exclusion_advantage(const VerifyConfig& cfg) {
    CheckRecord rec{.name = "exclusion-info-advantage",
                    .note = "max violation across equality and bound branches"};
    auto rng = detail_verify::suite_rng(cfg, 8);
    for (int t = 0; t < cfg.trials; ++t) {
        const int d = 2 + t % 2;
        auto f = FreeSetSpec::incoherent(d);
        Mat rho = detail_verify::mixed_state(d, 0.3 + 0.55 * rng.uniform(), rng);
        auto cert = weight(Density(rho), f);
        if (cert.w > 0.8) {  // 1/((1-w) ln 2) would outgrow the bit tolerance
            --t;
            continue;
        }
        auto game = build_dual_game(Density(rho), cert);
        auto adv = info_advantage(Density(rho), f, game.channels, game.measurement,
                                  InfoMode::exclusion);
        const double viol =
            adv.infinite ? 1.0 : std::abs(adv.bits() - (-std::log2(1.0 - cert.w)));
        rec.worst = std::max(rec.worst, viol);
        rec.failures += viol > cfg.tol;
        ++rec.trials;
    }
    for (int t = 0; t < cfg.trials; ++t) {
        const int d = 2 + t % 2;
        auto f = FreeSetSpec::incoherent(d);
        Mat rho = detail_verify::mixed_state(d, 0.3 + 0.65 * rng.uniform(), rng);
        auto psi = detail_verify::weighted_unitary_game(d, 2 + rng.index(2), rng);
        Povm m(random_povm(d, 2 + rng.index(2), rng));
        const double w = weight(Density(rho), f).w;
        auto qr = qc_ratio_shared(psi, m, Density(rho), f);
        if (qr.saturated) continue;
        bool ok = true;
        double viol = 0;
        if (1.0 - w >= 1e-2 && qr.denominator >= 1e-3) {
            auto adv = info_advantage(Density(rho), f, psi, m, InfoMode::exclusion);
            ok = !adv.infinite;
            if (ok) {
                viol = adv.bits() - (-std::log2(1.0 - w)) - cfg.tol;
                ok = viol <= 0;
            }
        } else {
            viol = (1.0 - w - 1e-7) - qr.ratio;
            ok = viol <= 0;
        }
        rec.worst = std::max(rec.worst, viol);
        rec.failures += !ok;
        ++rec.trials;
    }
    rec.finish();
    return rec;
}

// robustness side: duality gap, the mirrored discrimination game achieving
// 1 + r, and the discrimination advantage staying under log2(1 + r)
inline CheckRecord verify_robustness_games(const VerifyConfig& cfg) {
    CheckRecord rec{.name = "robustness-duality-games",
                    .note = "max of gap, |ratio - (1+r)| and advantage excess"};
    auto rng = detail_verify::suite_rng(cfg, 9);
    for (int t = 0; t < cfg.trials; ++t) {
        auto f = detail_verify::spec_for(t, rng);
        const int d = f.dim();
        Mat rho = detail_verify::mixed_state(d, 0.35 + 0.6 * rng.uniform(), rng);
        auto cert = robustness(Density(rho), f);
        double viol = cert.gap;
        auto game = build_discrimination_game(Density(rho), cert);
        auto qs = qc_success_ratio_shared(game.channels, game.measurement, Density(rho), f);
        viol = std::max(viol, std::abs(qs.ratio - (1.0 + cert.r)));
        auto psi = detail_verify::weighted_unitary_game(d, 2 + rng.index(2), rng);
        Povm m(random_povm(d, 2 + rng.index(2), rng));
        auto adv = info_advantage(Density(rho), f, psi, m, InfoMode::discrimination);
        viol = std::max(viol, adv.bits() - std::log2(1.0 + cert.r));
        rec.worst = std::max(rec.worst, viol);
        rec.failures += viol > cfg.tol;
        ++rec.trials;
    }
    rec.finish();
    return rec;
}

// sampled play of the exclusion game lands inside the binomial band around
// the solver's error probability
inline CheckRecord verify_empirical_frequencies(const VerifyConfig& cfg) {
    CheckRecord rec{.name = "empirical-frequencies", .note = "max |freq - perr| in sigma units"};
    auto rng = detail_verify::suite_rng(cfg, 10);
    const long shots = 10000;
    const int pairs = std::max(2, cfg.trials / 10);
    for (int t = 0; t < pairs; ++t) {
        const int d = 2 + rng.index(2), k = 2 + rng.index(2);
        std::vector<Mat> sts;
        for (int x = 0; x < k; ++x) sts.push_back(random_density(d, d, rng));
        StateEnsemble e(std::move(sts), random_prob(k, rng));
        auto opt = min_error_exclusion(e);
        const double freq = simulate_play(e, opt.m_opt, shots, rng.bits());
        const double sigma = std::sqrt(std::max(opt.perr * (1.0 - opt.perr), 1e-12) / shots);
        const double z = std::abs(freq - opt.perr) / sigma;
        rec.worst = std::max(rec.worst, z);
        rec.failures += z > 3.0;
        ++rec.trials;
    }
    rec.finish();
    return rec;
}

inline std::vector<CheckRecord> run_verification(const VerifyConfig& cfg) {
    return {verify_binary_exclusion(cfg),      verify_weight_duality(cfg),
            verify_qubit_closed_form(cfg),     verify_witness_advantage(cfg),
            verify_shared_ratio(cfg),          verify_exclusion_optimality(cfg),
            verify_independent_ratio(cfg),     verify_exclusion_advantage(cfg),
            verify_robustness_games(cfg),      verify_empirical_frequencies(cfg)};
}

inline bool all_pass(const std::vector<CheckRecord>& recs) {
    for (const auto& r : recs)
        if (!r.pass) return false;
    return !recs.empty();
}

// Re-derivation of every invariant a certificate claims, from the artifact
// and the state it refers to -- nothing is trusted from the solve that
// produced it.  A certificate that was serialized, shipped and parsed back
// passes exactly when a freshly computed one would.
struct CertCheck {
    bool pass = true;
    std::string detail;  // first violated invariant; empty when pass

    void fail(const std::string& what) {
        if (pass) detail = what;
        pass = false;
    }
};

inline CertCheck check_certificate(const WeightCertificate& c, const Density& rho,
                                   double tol = 1e-6) {
    CertCheck out;
    c.free_set.validate();
    const int d = c.free_set.dim();
    if (rho.dim() != d) {
        out.fail("state dimension does not match the free set");
        return out;
    }
    if (c.w < -1e-12 || c.w > 1.0 + 1e-12) out.fail("weight outside [0,1]");
    if (c.gap > tol) out.fail("primal/dual gap above tolerance");
    if (min_eig(c.dual_witness) < -1e-8) out.fail("dual witness has a negative eigenvalue");
    if (min_linear_over_free(c.dual_witness, c.free_set).value < 1.0 - 1e-7)
        out.fail("dual witness dips below 1 on the free set");
    if (std::abs(c.w - (1.0 - hs_inner(c.dual_witness, rho.m))) > c.gap + 1e-9)
        out.fail("stored gap understates the dual mismatch");
    if (!c.has_sigma_free && c.w < 1.0 - tol) out.fail("free part missing but weight below 1");
    if (!c.has_rho_general && c.w > tol) out.fail("general part missing but weight above 0");
    if (c.has_sigma_free) {
        if (!membership(c.sigma_free, c.free_set, 1e-7)) out.fail("free part is not in the set");
        if (std::abs(std::real(c.sigma_free.trace()) - 1.0) > 1e-7)
            out.fail("free part is not normalized");
    }
    if (c.has_rho_general) {
        if (min_eig(sym(c.rho_general)) < -1e-7) out.fail("general part is not a state");
        if (std::abs(std::real(c.rho_general.trace()) - 1.0) > 1e-7)
            out.fail("general part is not normalized");
    }
    Mat mix(d, d);
    if (c.has_rho_general) mix = mix + c.rho_general * cplx(c.w);
    if (c.has_sigma_free) mix = mix + c.sigma_free * cplx(1.0 - c.w);
    if (0.5 * trace_norm(rho.m - mix) > tol) out.fail("decomposition does not reconstruct the state");
    return out;
}

inline CertCheck check_certificate(const RobustnessCertificate& c, const Density& rho,
                                   double tol = 1e-6) {
    CertCheck out;
    c.free_set.validate();
    const int d = c.free_set.dim();
    if (rho.dim() != d) {
        out.fail("state dimension does not match the free set");
        return out;
    }
    if (std::isinf(c.r)) {
        // nothing in cone(F) dominates rho; the only artifact-level claims
        // are that no decomposition is attached and rho itself is not free
        if (c.has_sigma_free || c.has_rho_general) out.fail("infinite value with attached parts");
        if (membership(rho.m, c.free_set, 1e-7)) out.fail("infinite value on a free state");
        return out;
    }
    if (c.r < -1e-12) out.fail("negative robustness");
    if (c.gap > tol) out.fail("primal/dual gap above tolerance");
    if (min_eig(c.dual_witness) < -1e-8) out.fail("dual witness has a negative eigenvalue");
    if (max_linear_over_free(c.dual_witness, c.free_set) > 1.0 + 1e-7)
        out.fail("dual witness exceeds 1 on the free set");
    if (std::abs(c.r - (hs_inner(c.dual_witness, rho.m) - 1.0)) > c.gap + 1e-9)
        out.fail("stored gap understates the dual mismatch");
    if (!c.has_sigma_free) out.fail("free mixture missing");
    if (!c.has_rho_general && c.r > tol) out.fail("noise part missing but value above 0");
    if (c.has_sigma_free && !membership(c.sigma_free, c.free_set, 1e-7))
        out.fail("free mixture is not in the set");
    if (c.has_rho_general) {
        if (min_eig(sym(c.rho_general)) < -1e-7) out.fail("noise part is not a state");
        if (std::abs(std::real(c.rho_general.trace()) - 1.0) > 1e-7)
            out.fail("noise part is not normalized");
    }
    if (c.has_sigma_free) {
        Mat lhs = rho.m;
        if (c.has_rho_general) lhs = lhs + c.rho_general * cplx(c.r);
        if (0.5 * trace_norm(lhs - c.sigma_free * cplx(1.0 + c.r)) / (1.0 + c.r) > tol)
            out.fail("mixture does not absorb the state");
    }
    return out;
}

}  // namespace resq
