#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "resq/exclusion.hpp"
#include "resq/random.hpp"
#include "resq/tensor.hpp"

using namespace resq;

namespace {

Mat ket_proj(int d, int k) {
    Mat v = basis_ket(d, k);
    return outer(v, v);
}

Mat plus_proj() {
    Mat v(2, 1);
    v(0, 0) = 1.0 / std::sqrt(2.0);
    v(1, 0) = 1.0 / std::sqrt(2.0);
    return outer(v, v);
}

Povm computational(int d) {
    std::vector<Mat> eff;
    for (int i = 0; i < d; ++i) eff.push_back(ket_proj(d, i));
    return Povm(std::move(eff));
}

// exclusion objective with the identity assignment, matching the SDP
double excl_objective(const StateEnsemble& e, const Povm& m) {
    double v = 0;
    for (int x = 0; x < e.k(); ++x) v += hs_inner(m.effects[x], e.weighted(x));
    return v;
}

Povm povm_from_factors(const std::vector<Mat>& gs) {
    const int d = gs[0].rows();
    Mat s(d, d);
    for (const auto& g : gs) s = s + g * g.adjoint();
    Mat w = herm_inv_sqrt(s);
    std::vector<Mat> eff;
    for (const auto& g : gs) eff.push_back(sym(w * (g * g.adjoint()) * w));
    return Povm(std::move(eff));
}

// parametrized-POVM search: random Ginibre factors on log-spread scales,
// then a shrinking coordinate pattern search on the best candidate
double povm_random_search(const StateEnsemble& e, int samples, int pattern_evals, Rng& rng) {
    const int d = e.dim(), k = e.k();
    double best = std::numeric_limits<double>::infinity();
    std::vector<Mat> bestg;
    for (int t = 0; t < samples; ++t) {
        std::vector<Mat> gs;
        for (int x = 0; x < k; ++x) {
            double scale = std::pow(10.0, -3.0 * rng.uniform());
            gs.push_back(ginibre(d, d, rng) * cplx(scale));
        }
        double v = excl_objective(e, povm_from_factors(gs));
        if (v < best) {
            best = v;
            bestg = gs;
        }
    }
    double step = 0.1;
    int evals = 0;
    while (step > 1e-9 && evals < pattern_evals) {
        bool improved = false;
        for (int x = 0; x < k && evals < pattern_evals; ++x)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int part = 0; part < 2; ++part)
                        for (double sgn : {1.0, -1.0}) {
                            if (evals >= pattern_evals) break;
                            auto trial = bestg;
                            cplx delta = part == 0 ? cplx(sgn * step, 0) : cplx(0, sgn * step);
                            trial[x](i, j) += delta;
                            double v = excl_objective(e, povm_from_factors(trial));
                            ++evals;
                            if (v < best - 1e-15) {
                                best = v;
                                bestg = trial;
                                improved = true;
                            }
                        }
        if (!improved) step *= 0.5;
    }
    return best;
}

}  // namespace

TEST_CASE("fixed-measurement exclusion follows the post-processing reduction") {
    auto comp = computational(2);
    {
        auto e = StateEnsemble::uniform({ket_proj(2, 0), ket_proj(2, 1)});
        auto r = perr_exclusion_fixed(e, comp);
        REQUIRE(r.perr == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(r.assignment == std::vector<int>{1, 0});  // exclude the other label
    }
    {
        Rng rng(5);
        Mat rho = random_density(2, 2, rng);
        auto e = StateEnsemble::uniform({rho, rho});
        auto r = perr_exclusion_fixed(e, comp);
        REQUIRE(r.perr == Catch::Approx(0.5).margin(1e-12));
        REQUIRE(r.assignment == std::vector<int>{0, 0});  // ties break low
    }
    {
        auto e = StateEnsemble::uniform({ket_proj(2, 0), plus_proj()});
        auto r = perr_exclusion_fixed(e, comp);
        REQUIRE(r.perr == Catch::Approx(0.25).margin(1e-12));
        REQUIRE(r.assignment == std::vector<int>{1, 0});
    }
}

TEST_CASE("binary exclusion value is the trace-norm formula") {
    REQUIRE(binary_exclusion_value(StateEnsemble::uniform({ket_proj(2, 0), ket_proj(2, 1)})) ==
            Catch::Approx(0.0).margin(1e-12));
    Rng rng(7);
    Mat rho = random_density(2, 2, rng);
    REQUIRE(binary_exclusion_value(StateEnsemble::uniform({rho, rho})) ==
            Catch::Approx(0.5).margin(1e-12));
    // eigenvalues of |0><0| - |+><+| are +-1/sqrt(2), halved by the priors
    REQUIRE(binary_exclusion_value(StateEnsemble::uniform({ket_proj(2, 0), plus_proj()})) ==
            Catch::Approx(0.1464466094067262).margin(1e-12));
    REQUIRE_THROWS_AS(
        binary_exclusion_value(StateEnsemble::uniform({ket_proj(2, 0), ket_proj(2, 1), plus_proj()})),
        std::invalid_argument);
}

TEST_CASE("optimal exclusion agrees with the binary formula and certifies") {
    Rng rng(29);
    for (int t = 0; t < 20; ++t) {
        std::vector<Mat> st{random_density(2, 2, rng), random_density(2, 1 + (t % 2), rng)};
        double p0 = 0.2 + 0.6 * rng.uniform();
        StateEnsemble e(std::move(st), {p0, 1.0 - p0});
        auto opt = min_error_exclusion(e);
        REQUIRE(opt.perr == Catch::Approx(binary_exclusion_value(e)).margin(1e-6));
        // the fixed-measurement route reproduces the optimum
        auto fixed = perr_exclusion_fixed(e, opt.m_opt);
        REQUIRE(fixed.perr == Catch::Approx(opt.perr).margin(1e-8));
        REQUIRE(opt.perr <= std::min(e.priors[0], e.priors[1]) + 1e-9);
        auto cert = check_exclusion_optimality(e, opt.m_opt, 1e-6);
        REQUIRE(cert.pass);
        // exclusion and discrimination are opposite faces of the same coin
        auto disc = max_succ_discrimination(e);
        REQUIRE(opt.perr + disc.psucc == Catch::Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("three-state exclusion is certified and matches a povm search") {
    auto e = StateEnsemble::uniform({ket_proj(2, 0), ket_proj(2, 1), plus_proj()});
    auto opt = min_error_exclusion(e);
    auto cert = check_exclusion_optimality(e, opt.m_opt, 1e-6);
    REQUIRE(cert.pass);
    REQUIRE(perr_exclusion_fixed(e, opt.m_opt).perr == Catch::Approx(opt.perr).margin(1e-8));

    Rng rng(17);
    double searched = povm_random_search(e, 4000, 10000, rng);
    REQUIRE(opt.perr <= searched + 1e-9);  // sdp lower-bounds every povm
    REQUIRE(searched - opt.perr <= 1e-3);  // and the search closes in
}

TEST_CASE("optimality certificate localizes failures") {
    auto e = StateEnsemble::uniform({ket_proj(2, 0), ket_proj(2, 1)});
    {
        // exclude the label you did not see: optimal
        Povm good({ket_proj(2, 1), ket_proj(2, 0)});
        auto cert = check_exclusion_optimality(e, good, 1e-9);
        REQUIRE(cert.pass);
        REQUIRE(cert.hermiticity_residual <= 1e-12);
    }
    {
        // exclude exactly what you saw: worst possible, slack dips to -1/2
        Povm bad({ket_proj(2, 0), ket_proj(2, 1)});
        auto cert = check_exclusion_optimality(e, bad, 1e-9);
        REQUIRE_FALSE(cert.pass);
        REQUIRE(cert.hermiticity_residual <= 1e-12);
        REQUIRE(cert.min_eig_slacks[0] == Catch::Approx(-0.5).margin(1e-12));
        REQUIRE(cert.min_eig_slacks[1] == Catch::Approx(-0.5).margin(1e-12));
    }
    // one effect per label is required
    Povm three({ket_proj(2, 0), ket_proj(2, 1) * cplx(0.5), ket_proj(2, 1) * cplx(0.5)});
    REQUIRE_THROWS_AS(check_exclusion_optimality(e, three, 1e-9), std::invalid_argument);
}

TEST_CASE("discrimination mirrors exclusion with min and max swapped") {
    {
        auto e = StateEnsemble::uniform({ket_proj(2, 0), ket_proj(2, 1)});
        auto disc = max_succ_discrimination(e);
        REQUIRE(disc.psucc == Catch::Approx(1.0).margin(1e-7));
    }
    {
        Rng rng(3);
        Mat rho = random_density(2, 2, rng);
        auto e = StateEnsemble::uniform({rho, rho});
        REQUIRE(max_succ_discrimination(e).psucc == Catch::Approx(0.5).margin(1e-7));
    }
    {
        auto e = StateEnsemble::uniform({ket_proj(2, 0), plus_proj()});
        REQUIRE(max_succ_discrimination(e).psucc ==
                Catch::Approx(0.8535533905932737).margin(1e-7));
        REQUIRE(psucc_discrimination_fixed(e, computational(2)) ==
                Catch::Approx(0.75).margin(1e-12));
    }
}

TEST_CASE("simulated play concentrates around the analytic error") {
    const long shots = 10000;
    {
        auto e = StateEnsemble::uniform({ket_proj(2, 0), ket_proj(2, 1)});
        Povm good({ket_proj(2, 1), ket_proj(2, 0)});
        REQUIRE(simulate_play(e, good, shots, 42) == 0.0);
    }
    {
        Rng rng(9);
        Mat rho = random_density(2, 2, rng);
        auto e = StateEnsemble::uniform({rho, rho});
        double f = simulate_play(e, computational(2), shots, 43);
        REQUIRE(std::abs(f - 0.5) <= 3.0 * std::sqrt(0.25 / double(shots)));
    }
    {
        auto e = StateEnsemble::uniform({ket_proj(2, 0), plus_proj()});
        auto opt = min_error_exclusion(e);
        double p = binary_exclusion_value(e);
        double f = simulate_play(e, opt.m_opt, shots, 44);
        REQUIRE(std::abs(f - p) <= 3.0 * std::sqrt(p * (1.0 - p) / double(shots)));
        // deterministic per seed
        REQUIRE(simulate_play(e, opt.m_opt, shots, 44) == f);
        REQUIRE_THROWS_AS(simulate_play(e, opt.m_opt, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("ensemble and povm validation reject malformed inputs") {
    REQUIRE_THROWS_AS(StateEnsemble({ket_proj(2, 0)}, {1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(StateEnsemble({ket_proj(2, 0), ket_proj(2, 1)}, {0.9, 0.2}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(Povm({ket_proj(2, 0), ket_proj(2, 0)}), std::invalid_argument);
    Mat neg(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    Mat fill = Mat::identity(2) - neg;
    REQUIRE_THROWS_AS(Povm({neg, fill}), std::invalid_argument);
}
