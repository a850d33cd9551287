#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>

#include "resq/free_sets.hpp"
#include "resq/quantifiers.hpp"
#include "resq/random.hpp"
#include "resq/tensor.hpp"

using namespace resq;

namespace {

Mat mat2(cplx a, cplx b, cplx c, cplx d) {
    Mat m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

Mat plus_state() {
    Mat v(2, 1);
    v(0, 0) = 1.0 / std::sqrt(2.0);
    v(1, 0) = 1.0 / std::sqrt(2.0);
    return outer(v, v);
}

Mat bell_state() {
    Mat v(4, 1);
    v(0, 0) = 1.0 / std::sqrt(2.0);
    v(3, 0) = 1.0 / std::sqrt(2.0);
    return outer(v, v);
}

// exhaustive grid over diagonal subnormalized sigma' = diag(s0, s1) with
// rho - sigma' >= 0, maximizing the trace. For fixed s0 the best s1 sits on
// the psd boundary (r00-s0)(r11-s1) = |r01|^2 of the 2x2 slack, so the grid
// only needs one dimension.
double qubit_weight_grid(const Mat& rho) {
    double r00 = std::real(rho(0, 0)), r11 = std::real(rho(1, 1));
    double c2 = std::norm(rho(0, 1));
    if (c2 < 1e-18) return 0.0;
    double cap = r00 - c2 / r11;  // beyond this s1 would go negative
    if (cap <= 0) return 1.0 - std::max(0.0, r11 - c2 / r00);
    const int n = 2000000;
    double best = 0;
    for (int i = 0; i <= n; ++i) {
        double s0 = cap * i / n;
        double s1 = r11 - c2 / (r00 - s0);
        if (s1 >= 0) best = std::max(best, s0 + s1);
    }
    return 1.0 - best;
}

// minimize s0 + s1 over diagonal sigma' with sigma' - rho >= 0; again the
// optimum lies on the boundary s1 = r11 + |r01|^2/(s0 - r00)
double qubit_robustness_grid(const Mat& rho) {
    double r00 = std::real(rho(0, 0)), r11 = std::real(rho(1, 1));
    double c2 = std::norm(rho(0, 1));
    if (c2 < 1e-18) return 0.0;
    const int n = 3000000;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n; ++i) {
        double s0 = r00 + 3.0 * i / n;
        double s1 = r11 + c2 / (s0 - r00);
        best = std::min(best, s0 + s1);
    }
    return best - 1.0;
}

// coherence weight of a qubit in closed form: the optimal diagonal shift
// equalizes both slack diagonals at |rho01| when that fits under both
// populations, otherwise pins the smaller population to zero
double qubit_weight_closed_form(const Mat& rho) {
    double c = std::abs(rho(0, 1));
    double p0 = std::real(rho(0, 0)), p1 = std::real(rho(1, 1));
    double m = std::min(p0, p1);
    if (c <= m) return 2 * c;
    return m + c * c / m;
}

double decomposition_residual(const Mat& rho, const WeightCertificate& cert) {
    Mat mix(rho.rows(), rho.rows());
    if (cert.has_rho_general) mix = mix + cert.rho_general * cplx(cert.w);
    if (cert.has_sigma_free) mix = mix + cert.sigma_free * cplx(1.0 - cert.w);
    return trace_norm(rho - mix);
}

}  // namespace

TEST_CASE("free diagonal state has zero weight") {
    Density rho(mat2(0.3, 0, 0, 0.7));
    auto f = FreeSetSpec::incoherent(2);
    auto cert = weight(rho, f);
    REQUIRE(cert.w <= 1e-7);
    REQUIRE(cert.w >= 0.0);
    REQUIRE(cert.has_sigma_free);
    REQUIRE_FALSE(cert.has_rho_general);
    REQUIRE(trace_norm(cert.sigma_free - rho.m) <= 1e-7);
    REQUIRE(membership(cert.sigma_free, f, 1e-8));
    REQUIRE(cert.gap <= 1e-6);
    // re-projected witness is exactly feasible
    REQUIRE(min_linear_over_free(cert.dual_witness, f).value >= 1.0 - 1e-12);
    REQUIRE(min_eig(cert.dual_witness) >= -1e-9);
}

TEST_CASE("pure coherent state saturates the weight") {
    Density rho(plus_state());
    auto f = FreeSetSpec::incoherent(2);
    auto cert = weight(rho, f);
    REQUIRE(cert.w == Catch::Approx(1.0).margin(1e-7));
    REQUIRE_FALSE(cert.has_sigma_free);
    REQUIRE(cert.has_rho_general);
    REQUIRE(trace_norm(cert.rho_general - rho.m) <= 1e-9);
    REQUIRE(hs_inner(cert.dual_witness, rho.m) <= 1e-7);  // Tr[Y rho] = 1 - w
    REQUIRE(min_linear_over_free(cert.dual_witness, f).value >= 1.0 - 1e-12);
}

TEST_CASE("qubit coherence weight matches grid oracle and closed form") {
    Density rho(mat2(0.5, 0.25, 0.25, 0.5));
    auto f = FreeSetSpec::incoherent(2);
    auto cert = weight(rho, f);
    REQUIRE(cert.w == Catch::Approx(0.5).margin(1e-7));
    REQUIRE(cert.w == Catch::Approx(qubit_weight_grid(rho.m)).margin(1e-5));
    REQUIRE(cert.w == Catch::Approx(qubit_weight_closed_form(rho.m)).margin(1e-7));
    REQUIRE(decomposition_residual(rho.m, cert) <= 1e-7);
    REQUIRE(membership(cert.sigma_free, f, 1e-8));
    Density check_free(cert.sigma_free);
    Density check_general(cert.rho_general);
    REQUIRE(cert.gap <= 1e-6);
    REQUIRE_FALSE(cert.nonunique_face);  // strict complementarity: both ranks 1

    Rng rng(331);
    for (int t = 0; t < 20; ++t) {
        Density r(random_density(2, 2, rng));
        auto c = weight(r, f);
        REQUIRE(c.w == Catch::Approx(qubit_weight_closed_form(r.m)).margin(1e-6));
        REQUIRE(decomposition_residual(r.m, c) <= 1e-7);
    }
}

TEST_CASE("bell state saturates the entanglement weight") {
    Density rho(bell_state());
    auto f = FreeSetSpec::ppt(2, 2);
    auto cert = weight(rho, f);
    REQUIRE(cert.w == Catch::Approx(1.0).margin(1e-7));
    REQUIRE_FALSE(cert.has_sigma_free);
    REQUIRE(hs_inner(cert.dual_witness, rho.m) <= 1e-7);
    REQUIRE(min_linear_over_free(cert.dual_witness, f).value >= 1.0 - 1e-7);
}

TEST_CASE("ppt weight dual witness agrees with the primal multiplier route") {
    // on full-rank inputs the slack multiplier of the primal is itself an
    // optimal dual witness; both routes must price the state identically
    Rng rng(77);
    auto f = FreeSetSpec::ppt(2, 2);
    for (int t = 0; t < 4; ++t) {
        Density rho(random_density(4, 4, rng));
        auto cert = weight(rho, f);

        SdpProblem p = SdpProblem::make({4, 4, 4});
        p.obj_herm[0] = Mat::identity(4) * cplx(-1.0);
        auto basis = herm_basis(4);
        for (const auto& e : basis) {
            auto& c = p.add_constraint(hs_inner(e, rho.m));
            c.a_herm[0] = e;
            c.a_herm[2] = e;
        }
        for (const auto& e : basis) {
            auto& c = p.add_constraint(0.0);
            c.a_herm[0] = partial_transpose(e, 2, 2, Sub::B);
            c.a_herm[1] = e * cplx(-1.0);
        }
        auto s = solve(p);
        REQUIRE(s.status == SdpStatus::optimal);
        double w_primal = 1.0 + s.primal_obj;  // obj = -Tr sigma'

        Mat y_mult = sym(s.z_herm[2]);  // slack block multiplier
        double scale = min_linear_over_free(y_mult, f).value;
        REQUIRE(scale >= 1.0 - 1e-6);
        y_mult = y_mult * cplx(1.0 / scale);
        double w_mult = 1.0 - hs_inner(y_mult, rho.m);

        REQUIRE(w_mult == Catch::Approx(cert.w).margin(1e-6));
        REQUIRE(w_primal == Catch::Approx(cert.w).margin(1e-6));
        REQUIRE(min_eig(y_mult) >= -1e-9);
    }
}

TEST_CASE("robustness of free states vanishes and doubles the plus state") {
    auto f = FreeSetSpec::incoherent(2);
    {
        Density rho(mat2(0.3, 0, 0, 0.7));
        auto cert = robustness(rho, f);
        REQUIRE(cert.r <= 1e-7);
        REQUIRE(cert.r >= 0.0);
        REQUIRE_FALSE(cert.has_rho_general);
        REQUIRE(trace_norm(cert.sigma_free - rho.m) <= 1e-6);
        REQUIRE(cert.gap <= 1e-6);
    }
    {
        Density rho(plus_state());
        auto cert = robustness(rho, f);
        REQUIRE(cert.r == Catch::Approx(1.0).margin(1e-6));
        REQUIRE(cert.r == Catch::Approx(qubit_robustness_grid(rho.m)).margin(1e-6));
        // rho + r rho_G = (1+r) sigma
        Mat lhs = rho.m + cert.rho_general * cplx(cert.r);
        Mat rhs = cert.sigma_free * cplx(1.0 + cert.r);
        REQUIRE(trace_norm(lhs - rhs) <= 1e-7);
        REQUIRE(membership(cert.sigma_free, f, 1e-8));
        REQUIRE(max_linear_over_free(cert.dual_witness, f) <= 1.0 + 1e-12);
        REQUIRE(hs_inner(cert.dual_witness, rho.m) - 1.0 == Catch::Approx(1.0).margin(1e-6));
    }
    {
        Density mm(Mat::identity(3) * cplx(1.0 / 3.0));
        auto cert = robustness(mm, FreeSetSpec::incoherent(3));
        REQUIRE(cert.r <= 1e-7);
    }
}

TEST_CASE("robustness diverges when the hull cannot dominate the state") {
    Mat p0(2, 2), p1(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    auto f = FreeSetSpec::hull({p0});
    Density rho(p1);
    auto cert = robustness(rho, f);
    REQUIRE(std::isinf(cert.r));
    REQUIRE_FALSE(cert.has_sigma_free);
    REQUIRE_FALSE(cert.has_rho_general);
    // the weight of the same pair saturates instead of diverging
    auto wcert = weight(rho, f);
    REQUIRE(wcert.w == Catch::Approx(1.0).margin(1e-7));
}

TEST_CASE("witness splits the generating state from the free set") {
    // hand-built certificate: the known optimal witness of the plus state
    WeightCertificate cert;
    cert.w = 1.0;
    cert.dual_witness = mat2(1.0, -1.0, -1.0, 1.0);
    auto wit = witness_from_dual(cert);
    REQUIRE(wit.W.max_abs() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(std::abs(wit.W(0, 0)) <= 1e-12);
    REQUIRE(wit.W(0, 1).real() == Catch::Approx(-1.0).margin(1e-12));
    REQUIRE(wit.X(0, 0).real() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(wit.X(0, 1).real() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(hs_inner(wit.X, plus_state()) == Catch::Approx(2.0).margin(1e-9));

    // pipeline on a random resourceful qubit
    auto f = FreeSetSpec::incoherent(2);
    Rng rng(55);
    Density rho(random_density(2, 1, rng));
    auto c = weight(rho, f);
    REQUIRE(c.w > 0.1);
    auto w2 = witness_from_dual(c);
    REQUIRE(hs_inner(w2.W, rho.m) < 0.0);
    REQUIRE(hs_inner(w2.X, rho.m) > 1.0);
    REQUIRE(min_eig(w2.X) >= -1e-9);
    for (int t = 0; t < 1000; ++t) {
        Mat sigma = sample_free(f, rng);
        REQUIRE(hs_inner(w2.W, sigma) >= -1e-8);
        REQUIRE(hs_inner(w2.X, sigma) <= 1.0 + 1e-8);
    }

    // free input refuses to produce a witness
    auto cfree = weight(Density(mat2(0.5, 0, 0, 0.5)), f);
    REQUIRE_THROWS_AS(witness_from_dual(cfree), std::invalid_argument);
}

TEST_CASE("strong duality, bounds, and membership equivalence per variant") {
    Rng rng(913);
    std::vector<FreeSetSpec> sets;
    sets.push_back(FreeSetSpec::incoherent(3));
    sets.push_back(FreeSetSpec::ppt(2, 2));
    {
        std::vector<Mat> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(random_density(3, 3, rng));
        gens.push_back(Mat::identity(3) * cplx(1.0 / 3.0));
        sets.push_back(FreeSetSpec::hull(gens));
    }
    for (const auto& f : sets) {
        const int d = f.dim();
        for (int t = 0; t < 6; ++t) {
            Density rho(random_density(d, d, rng));
            auto cert = weight(rho, f);
            REQUIRE(cert.w >= 0.0);
            REQUIRE(cert.w <= 1.0);
            REQUIRE(cert.gap <= 1e-6);
            REQUIRE(decomposition_residual(rho.m, cert) <= 1e-7);
            if (cert.has_sigma_free) REQUIRE(membership(cert.sigma_free, f, 1e-8));
            bool is_free = membership(rho.m, f, 1e-7);
            if (cert.w <= 1e-7) REQUIRE(is_free);
            if (is_free) REQUIRE(cert.w <= 1e-7);

            auto rcert = robustness(rho, f);
            REQUIRE(rcert.r >= 0.0);
            REQUIRE(rcert.gap <= 1e-6);
            Mat lhs = rho.m + (rcert.has_rho_general ? rcert.rho_general * cplx(rcert.r) : Mat(d, d));
            Mat rhs = rcert.sigma_free * cplx(1.0 + rcert.r);
            REQUIRE(trace_norm(lhs - rhs) <= 1e-7);
        }
        // deliberately free input: both quantifiers at zero
        Mat sigma = sample_free(f, rng);
        auto certf = weight(Density(sigma), f);
        REQUIRE(certf.w <= 1e-7);
        REQUIRE(membership(sigma, f, 1e-7));
    }
}

TEST_CASE("weight is monotone under mixing and convex") {
    Rng rng(2024);
    auto f = FreeSetSpec::incoherent(3);
    for (int t = 0; t < 3; ++t) {
        Density rho(random_density(3, 3, rng));
        auto cert = weight(rho, f);
        REQUIRE(cert.has_sigma_free);
        for (double lam : {0.25, 0.5, 0.75}) {
            Mat mixed = rho.m * cplx(lam) + cert.sigma_free * cplx(1.0 - lam);
            auto cm = weight(Density(mixed), f);
            REQUIRE(cm.w <= cert.w + 1e-7);
        }
    }
    for (int t = 0; t < 3; ++t) {
        Density a(random_density(3, 3, rng));
        Density b(random_density(3, 3, rng));
        auto ca = weight(a, f);
        auto cb = weight(b, f);
        for (double lam : {0.3, 0.6}) {
            Mat mixed = a.m * cplx(lam) + b.m * cplx(1.0 - lam);
            auto cm = weight(Density(mixed), f);
            REQUIRE(cm.w <= lam * ca.w + (1.0 - lam) * cb.w + 1e-7);
        }
    }
}
