#pragma once
// Seeded sampling primitives. Gaussians use an explicit Box-Muller over
// mt19937_64 bits so that a seed reproduces byte-identical streams across
// platforms (std::normal_distribution is not portable).

#include <cstdint>
#include <random>

#include "eig.hpp"
#include "matrix.hpp"

namespace resq {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}

    double uniform() {  // [0,1)
        return (g_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

    cplx cgaussian() {
        double re = gaussian(), im = gaussian();
        return cplx(re, im);
    }

    std::uint64_t bits() { return g_(); }
    int index(int n) {  // uniform in [0, n)
        return std::min(int(uniform() * n), n - 1);
    }

private:
    std::mt19937_64 g_;
    double spare_ = 0;
    bool have_ = false;
};

inline Mat ginibre(int r, int c, Rng& rng) {
    Mat g(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) g(i, j) = rng.cgaussian();
    return g;
}

inline Mat random_pure(int d, Rng& rng) {  // Haar |psi><psi|
    Mat v(d, 1);
    double n2 = 0;
    for (int i = 0; i < d; ++i) {
        v(i, 0) = rng.cgaussian();
        n2 += std::norm(v(i, 0));
    }
    double s = 1.0 / std::sqrt(n2);
    for (int i = 0; i < d; ++i) v(i, 0) *= s;
    Mat p(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p(i, j) = v(i, 0) * std::conj(v(j, 0));
    return p;
}

// G G^dag / Tr, G of shape d x rank: induced-measure density of given rank
inline Mat random_density(int d, int rank, Rng& rng) {
    Mat g = ginibre(d, rank, rng);
    Mat w = g * g.adjoint();
    cplx t = w.trace();
    return w * (1.0 / std::real(t));
}

inline Mat haar_unitary(int d, Rng& rng) {
    // Gram-Schmidt of a Ginibre matrix with phase fixing
    Mat g = ginibre(d, d, rng);
    Mat q(d, d);
    for (int j = 0; j < d; ++j) {
        std::vector<cplx> v(d);
        for (int i = 0; i < d; ++i) v[i] = g(i, j);
        for (int k = 0; k < j; ++k) {
            cplx ip = 0;
            for (int i = 0; i < d; ++i) ip += std::conj(q(i, k)) * v[i];
            for (int i = 0; i < d; ++i) v[i] -= ip * q(i, k);
        }
        double nrm = 0;
        for (int i = 0; i < d; ++i) nrm += std::norm(v[i]);
        nrm = std::sqrt(nrm);
        // Ginibre columns are independent; exact linear dependence has
        // probability zero, so a tiny norm only signals numerics
        if (nrm < 1e-12) throw std::runtime_error("haar_unitary: degenerate sample");
        // Gram-Schmidt fixes the R factor to a positive diagonal, which is
        // exactly the convention under which Ginibre QR is Haar
        for (int i = 0; i < d; ++i) q(i, j) = v[i] / nrm;
    }
    return q;
}

inline std::vector<double> random_prob(int n, Rng& rng) {
    std::vector<double> p(n);
    double s = 0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        while (u <= 0) u = rng.uniform();
        p[i] = -std::log(u);  // flat Dirichlet
        s += p[i];
    }
    for (auto& v : p) v /= s;
    return p;
}

// n effects E_x = S^{-1/2} G_x G_x^dag S^{-1/2}, S = sum G G^dag
inline std::vector<Mat> random_povm(int d, int n, Rng& rng) {
    std::vector<Mat> raw;
    Mat s(d, d);
    for (int x = 0; x < n; ++x) {
        Mat g = ginibre(d, d, rng);
        raw.push_back(g * g.adjoint());
        s += raw.back();
    }
    Mat si = herm_inv_sqrt(s);
    std::vector<Mat> out;
    for (auto& e : raw) out.push_back(sym(si * e * si));
    return out;
}

}  // namespace resq
