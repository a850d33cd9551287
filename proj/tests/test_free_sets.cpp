#include <catch2/catch_amalgamated.hpp>

#include "resq/free_sets.hpp"

using namespace resq;

static Mat plus_state() {
    Mat v(2, 1);
    v(0, 0) = v(1, 0) = std::sqrt(0.5);
    return outer(v, v);
}

static Mat bell_state() {
    Mat v(4, 1);
    v(0, 0) = v(3, 0) = std::sqrt(0.5);
    return outer(v, v);
}

TEST_CASE("incoherent membership checks off-diagonal mass in the reference basis") {
    auto f = FreeSetSpec::incoherent(2);
    Mat diag(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = 0.7;
    REQUIRE(membership(diag, f, 1e-9));
    REQUIRE_FALSE(membership(plus_state(), f, 1e-9));

    // rotated basis moves the free set with it
    Mat h(2, 2);
    h(0, 0) = h(0, 1) = h(1, 0) = std::sqrt(0.5);
    h(1, 1) = -std::sqrt(0.5);
    auto fr = FreeSetSpec::incoherent_in(h);
    REQUIRE(membership(plus_state(), fr, 1e-9));
    REQUIRE_FALSE(membership(diag, fr, 1e-9));
}

TEST_CASE("ppt membership flags the bell state") {
    auto f = FreeSetSpec::ppt(2, 2);
    REQUIRE_FALSE(membership(bell_state(), f, 1e-8));
    Rng rng(5);
    for (int t = 0; t < 20; ++t) REQUIRE(membership(sample_free(f, rng), f, 1e-8));
}

TEST_CASE("hull membership solves the trace-norm distance program") {
    Mat p0 = outer(basis_ket(2, 0), basis_ket(2, 0));
    auto f = FreeSetSpec::hull({p0, Mat::identity(2) * 0.5});
    REQUIRE(membership(p0, f, 1e-8));

    Mat mid(2, 2);  // 0.5*p0 + 0.5*mm = diag(0.75, 0.25)
    mid(0, 0) = 0.75;
    mid(1, 1) = 0.25;
    REQUIRE(membership(mid, f, 1e-8));

    Mat p1 = outer(basis_ket(2, 1), basis_ket(2, 1));
    REQUIRE_FALSE(membership(p1, f, 1e-8));
    REQUIRE(hull_distance(p1, f.generators) > 0.4);  // nearest point is mm at q=(0,1)
    REQUIRE_FALSE(membership(plus_state(), f, 1e-8));
}

TEST_CASE("incoherent linear minimization picks the smallest diagonal entry") {
    auto f = FreeSetSpec::incoherent(2);
    Mat k(2, 2);
    k(0, 0) = 0.2;
    k(1, 1) = 0.9;
    auto r = min_linear_over_free(k, f);
    REQUIRE(r.value == Catch::Approx(0.2).margin(1e-12));
    REQUIRE(std::real(r.argmin(0, 0)) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(membership(r.argmin, f, 1e-8));
}

TEST_CASE("identity functional gives one on every variant") {
    Rng rng(7);
    std::vector<FreeSetSpec> fs = {
        FreeSetSpec::incoherent(3),
        FreeSetSpec::ppt(2, 2),
        FreeSetSpec::hull({random_density(3, 3, rng), random_density(3, 3, rng)}),
    };
    for (const auto& f : fs) {
        auto r = min_linear_over_free(Mat::identity(f.dim()), f);
        REQUIRE(r.value == Catch::Approx(1.0).margin(1e-7));
        REQUIRE(membership(r.argmin, f, 1e-8));
    }
}

// product value <a b| k |a b> for unnormalized qubit pair, divided by norms
static double product_value(const Mat& k, const Mat& a, const Mat& b) {
    cplx v = 0;
    double na = 0, nb = 0;
    for (int i = 0; i < 2; ++i) {
        na += std::norm(a(i, 0));
        nb += std::norm(b(i, 0));
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q)
                    v += std::conj(a(i, 0) * b(j, 0)) * k(i * 2 + j, p * 2 + q) * a(p, 0) * b(q, 0);
    return std::real(v) / (na * nb);
}

// alternate min-eigenvector descent in the a and b factors
static double seesaw_polish(const Mat& k, Mat a, Mat b) {
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        Mat ka(2, 2);  // condition on b
        for (int i = 0; i < 2; ++i)
            for (int p = 0; p < 2; ++p) {
                cplx v = 0;
                for (int j = 0; j < 2; ++j)
                    for (int q = 0; q < 2; ++q) v += std::conj(b(j, 0)) * k(i * 2 + j, p * 2 + q) * b(q, 0);
                ka(i, p) = v / cplx(std::norm(b(0, 0)) + std::norm(b(1, 0)));
            }
        auto ea = herm_eig(sym(ka), 1.0);
        for (int i = 0; i < 2; ++i) a(i, 0) = ea.vecs(i, 1);  // smallest eigenvalue column
        Mat kb(2, 2);
        for (int j = 0; j < 2; ++j)
            for (int q = 0; q < 2; ++q) {
                cplx v = 0;
                for (int i = 0; i < 2; ++i)
                    for (int p = 0; p < 2; ++p) v += std::conj(a(i, 0)) * k(i * 2 + j, p * 2 + q) * a(p, 0);
                kb(j, q) = v / cplx(std::norm(a(0, 0)) + std::norm(a(1, 0)));
            }
        auto eb = herm_eig(sym(kb), 1.0);
        for (int j = 0; j < 2; ++j) b(j, 0) = eb.vecs(j, 1);
        double cur = product_value(k, a, b);
        if (prev - cur < 1e-14) return cur;
        prev = cur;
    }
    return prev;
}

TEST_CASE("ppt linear minimization matches a product-state sampling oracle") {
    Rng rng(11);
    Mat g = ginibre(4, 4, rng);
    Mat k = sym(g + g.adjoint()) * 0.5;
    auto f = FreeSetSpec::ppt(2, 2);
    auto r = min_linear_over_free(k, f);

    // at 2x2 the ppt extreme points are pure products, so product sampling
    // plus local eigenvector descent converges to the true minimum
    double best = std::numeric_limits<double>::infinity();
    Mat besta(2, 1), bestb(2, 1);
    Rng srng(13);
    for (int t = 0; t < 1000000; ++t) {
        Mat a(2, 1), b(2, 1);
        for (int i = 0; i < 2; ++i) {
            a(i, 0) = srng.cgaussian();
            b(i, 0) = srng.cgaussian();
        }
        double v = product_value(k, a, b);
        if (v < best) {
            best = v;
            besta = a;
            bestb = b;
        }
    }
    REQUIRE(r.value <= best + 1e-9);  // sdp value lower-bounds every sample
    double polished = seesaw_polish(k, besta, bestb);
    REQUIRE(polished >= r.value - 1e-9);
    REQUIRE(polished - r.value <= 1e-3);  // and the refined sampling closes the gap
    REQUIRE(membership(r.argmin, f, 1e-8));
    REQUIRE(hs_inner(k, r.argmin) == Catch::Approx(r.value).margin(1e-7));
}

TEST_CASE("hull of basis projectors reproduces incoherent minimization") {
    Rng rng(17);
    std::vector<Mat> projs;
    for (int i = 0; i < 3; ++i) projs.push_back(outer(basis_ket(3, i), basis_ket(3, i)));
    auto fh = FreeSetSpec::hull(projs);
    auto fi = FreeSetSpec::incoherent(3);
    for (int t = 0; t < 10; ++t) {
        Mat g = ginibre(3, 3, rng);
        Mat k = sym(g + g.adjoint());
        auto rh = min_linear_over_free(k, fh);
        auto ri = min_linear_over_free(k, fi);
        REQUIRE(std::abs(rh.value - ri.value) <= 1e-9);
    }
}

TEST_CASE("linear minimum lower-bounds random members of each variant") {
    Rng rng(19);
    std::vector<FreeSetSpec> fs = {
        FreeSetSpec::incoherent(3),
        FreeSetSpec::ppt(2, 2),
        FreeSetSpec::hull({random_density(4, 4, rng), random_density(4, 4, rng),
                           random_density(4, 4, rng)}),
    };
    for (const auto& f : fs) {
        Mat g = ginibre(f.dim(), f.dim(), rng);
        Mat k = sym(g + g.adjoint());
        auto r = min_linear_over_free(k, f);
        for (int t = 0; t < 100; ++t) {
            Mat s = sample_free(f, rng);
            REQUIRE(r.value <= hs_inner(k, s) + 1e-7);
        }
        REQUIRE(membership(r.argmin, f, 1e-8));
    }
}

TEST_CASE("dual constraint encoders") {
    auto ei = encode_dual_constraints(FreeSetSpec::incoherent(2));
    REQUIRE_FALSE(ei.primal_route);
    REQUIRE(ei.functionals.size() == 2);
    REQUIRE(std::real(ei.functionals[0](0, 0)) == Catch::Approx(1.0));

    Rng rng(23);
    auto eh = encode_dual_constraints(
        FreeSetSpec::hull({random_density(2, 2, rng), random_density(2, 2, rng), random_density(2, 2, rng)}));
    REQUIRE(eh.functionals.size() == 3);

    auto ep = encode_dual_constraints(FreeSetSpec::ppt(2, 2));
    REQUIRE(ep.primal_route);
    REQUIRE(ep.functionals.empty());
}

TEST_CASE("free-set descriptions reject malformed input") {
    Mat notortho(2, 2);
    notortho(0, 0) = 1;
    notortho(0, 1) = 1;
    notortho(1, 1) = 1;
    REQUIRE_THROWS(FreeSetSpec::incoherent_in(notortho));
    REQUIRE_THROWS(FreeSetSpec::ppt(1, 2));
    REQUIRE_THROWS(FreeSetSpec::hull({}));
    Mat nottrace = Mat::identity(2);  // trace 2
    REQUIRE_THROWS(FreeSetSpec::hull({nottrace}));
}
