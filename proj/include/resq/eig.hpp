#pragma once
// Hermitian eigendecomposition via the real symmetric embedding
// [[Re,-Im],[Im,Re]]: Householder tridiagonalization followed by
// implicit-shift QL. The embedding doubles every eigenvalue; the complex
// eigenvectors are recovered by Gram-Schmidt over the 2d real eigenvectors
// mapped as (x,y) -> x+iy (each complex direction appears twice, as v and iv).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"

namespace resq {

namespace detail {

// Householder reduction of symmetric a (n x n, row-major) to tridiagonal
// (d, e); a is overwritten with the accumulated orthogonal transform.
inline void tred2(std::vector<double>& a, int n, std::vector<double>& d, std::vector<double>& e) {
    auto at = [&](int i, int j) -> double& { return a[std::size_t(i) * n + j]; };
    for (int i = n - 1; i >= 1; --i) {
        int l = i - 1;
        double h = 0, scale = 0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    at(j, i) = at(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = at(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) at(j, k) -= f * e[k] + g * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += at(i, k) * at(k, j);
                for (int k = 0; k <= l; ++k) at(k, j) -= g * at(k, i);
            }
        }
        d[i] = at(i, i);
        at(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) at(j, i) = at(i, j) = 0.0;
    }
}

// Implicit-shift QL on tridiagonal (d, e); rotations accumulated into z.
inline void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n) {
    auto zt = [&](int i, int j) -> double& { return z[std::size_t(i) * n + j]; };
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 64) throw std::runtime_error("eig: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = zt(k, i + 1);
                        zt(k, i + 1) = s * zt(k, i) + c * f;
                        zt(k, i) = c * zt(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace detail

struct EigResult {
    std::vector<double> vals;  // descending
    Mat vecs;                  // columns, orthonormal
};

// Eigendecomposition of a Hermitian matrix. Input is symmetrized first;
// asymmetry beyond `tol` is rejected.
inline EigResult herm_eig(const Mat& a_in, double tol = Tol::input) {
    const int d = a_in.rows();
    if (a_in.cols() != d) throw std::invalid_argument("herm_eig: not square");
    if (herm_residual(a_in) > tol) throw std::invalid_argument("herm_eig: not Hermitian");
    Mat a = sym(a_in);

    if (d == 1) {
        EigResult r;
        r.vals = {std::real(a(0, 0))};
        r.vecs = Mat::identity(1);
        return r;
    }

    const int n = 2 * d;
    std::vector<double> emb(std::size_t(n) * n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double re = std::real(a(i, j)), im = std::imag(a(i, j));
            emb[std::size_t(i) * n + j] = re;
            emb[std::size_t(i) * n + (j + d)] = -im;
            emb[std::size_t(i + d) * n + j] = im;
            emb[std::size_t(i + d) * n + (j + d)] = re;
        }
    std::vector<double> dv(n), ev(n);
    detail::tred2(emb, n, dv, ev);
    detail::tql2(dv, ev, emb, n);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int p, int q) { return dv[p] > dv[q]; });

    // Pick d complex vectors by Gram-Schmidt over candidates x+iy, relaxing
    // the acceptance threshold if degeneracy mixing starves a pass. Output
    // columns are orthonormal by construction.
    EigResult r;
    r.vecs = Mat(d, d);
    r.vals.reserve(d);
    std::vector<std::vector<cplx>> accepted;
    for (double thr : {0.5, 1e-2, 1e-6}) {
        for (int idx : order) {
            if ((int)accepted.size() == d) break;
            std::vector<cplx> v(d);
            for (int i = 0; i < d; ++i)
                v[i] = cplx(emb[std::size_t(i) * n + idx], emb[std::size_t(i + d) * n + idx]);
            for (const auto& u : accepted) {
                cplx ip = 0;
                for (int i = 0; i < d; ++i) ip += std::conj(u[i]) * v[i];
                for (int i = 0; i < d; ++i) v[i] -= ip * u[i];
            }
            double nrm = 0;
            for (int i = 0; i < d; ++i) nrm += std::norm(v[i]);
            nrm = std::sqrt(nrm);
            if (nrm < thr) continue;
            for (int i = 0; i < d; ++i) v[i] /= nrm;
            accepted.push_back(std::move(v));
            r.vals.push_back(dv[idx]);
        }
        if ((int)accepted.size() == d) break;
    }
    if ((int)accepted.size() != d) throw std::runtime_error("herm_eig: eigenvector recovery failed");

    // vals can come out of order by ~eps across passes; restore descending
    std::vector<int> ro(d);
    std::iota(ro.begin(), ro.end(), 0);
    std::stable_sort(ro.begin(), ro.end(), [&](int p, int q) { return r.vals[p] > r.vals[q]; });
    std::vector<double> vals(d);
    for (int j = 0; j < d; ++j) {
        vals[j] = r.vals[ro[j]];
        for (int i = 0; i < d; ++i) r.vecs(i, j) = accepted[ro[j]][i];
    }
    r.vals = std::move(vals);
    return r;
}

inline double min_eig(const Mat& a) {
    auto e = herm_eig(sym(a), 1.0);  // caller guarantees near-Hermitian
    return e.vals.back();
}

inline double max_eig(const Mat& a) { return herm_eig(sym(a), 1.0).vals.front(); }

// largest |eigenvalue| of a Hermitian matrix
inline double operator_norm(const Mat& a) {
    auto e = herm_eig(a);
    return std::max(std::abs(e.vals.front()), std::abs(e.vals.back()));
}

// sum of singular values; for Hermitian input this is sum |eigenvalue|
inline double trace_norm(const Mat& a) {
    if (a.rows() == a.cols() && herm_residual(a) <= 1e-12 * std::max(1.0, a.max_abs())) {
        auto e = herm_eig(sym(a), 1.0);
        double s = 0;
        for (double v : e.vals) s += std::abs(v);
        return s;
    }
    auto e = herm_eig(sym(a.adjoint() * a), 1.0);
    double s = 0;
    for (double v : e.vals) s += std::sqrt(std::max(0.0, v));
    return s;
}

inline Mat eig_apply(const EigResult& e, double (*f)(double)) {
    const int d = e.vecs.rows();
    Mat out(d, d);
    for (int k = 0; k < d; ++k) {
        double fv = f(e.vals[k]);
        if (fv == 0.0) continue;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out(i, j) += fv * e.vecs(i, k) * std::conj(e.vecs(j, k));
    }
    return out;
}

// clip negative eigenvalues to zero
inline Mat psd_part(const Mat& a) {
    return eig_apply(herm_eig(sym(a), 1.0), [](double x) { return x > 0 ? x : 0.0; });
}

inline Mat herm_sqrt(const Mat& a) {
    return eig_apply(herm_eig(a), [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

// pseudo inverse square root: eigenvalues below `cut` are dropped
inline Mat herm_inv_sqrt(const Mat& a, double cut = 1e-12) {
    auto e = herm_eig(a);
    const int d = e.vecs.rows();
    double top = std::max(std::abs(e.vals.front()), 1.0);
    Mat out(d, d);
    for (int k = 0; k < d; ++k) {
        if (e.vals[k] <= cut * top) continue;
        double fv = 1.0 / std::sqrt(e.vals[k]);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out(i, j) += fv * e.vecs(i, k) * std::conj(e.vecs(j, k));
    }
    return out;
}

inline int eig_rank(const Mat& a, double rel = 1e-9) {
    auto e = herm_eig(sym(a), 1.0);
    double top = 0;
    for (double v : e.vals) top = std::max(top, std::abs(v));
    if (top == 0) return 0;
    int r = 0;
    for (double v : e.vals)
        if (std::abs(v) > rel * top) ++r;
    return r;
}

}  // namespace resq
