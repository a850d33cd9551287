#pragma once
// Primal-dual interior-point solver for small dense SDPs:
//   minimize  sum_b <C_b, X_b> + c.x_lin
//   s.t.      sum_b <A_ib, X_b> + a_i.x_lin = b_i,   X_b >= 0, x_lin >= 0
// Complex Hermitian blocks are lowered to real symmetric blocks of twice the
// dimension ([[Re,-Im],[Im,Re]], data halved so objective/rhs keep their
// native scale); nonnegative scalars ride along as 1x1 blocks. Search
// direction is HKM with a Mehrotra predictor-corrector step.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "eig.hpp"
#include "matrix.hpp"

namespace resq {

struct SdpProblem {
    std::vector<int> herm_dims;  // complex Hermitian PSD blocks
    int nonneg = 0;              // nonnegative scalar variables
    std::vector<Mat> obj_herm;
    std::vector<double> obj_lin;
    struct Constraint {
        std::vector<Mat> a_herm;
        std::vector<double> a_lin;
        double rhs = 0;
    };
    std::vector<Constraint> cons;

    static SdpProblem make(std::vector<int> dims, int nn = 0) {
        SdpProblem p;
        p.herm_dims = std::move(dims);
        p.nonneg = nn;
        for (int d : p.herm_dims) p.obj_herm.emplace_back(d, d);
        p.obj_lin.assign(nn, 0.0);
        return p;
    }
    Constraint& add_constraint(double rhs) {
        Constraint c;
        for (int d : herm_dims) c.a_herm.emplace_back(d, d);
        c.a_lin.assign(nonneg, 0.0);
        c.rhs = rhs;
        cons.push_back(std::move(c));
        return cons.back();
    }
    void validate() const {
        if (cons.empty()) throw std::invalid_argument("sdp: no constraints");
        if ((int)obj_herm.size() != (int)herm_dims.size() || (int)obj_lin.size() != nonneg)
            throw std::invalid_argument("sdp: objective shape");
        for (std::size_t b = 0; b < herm_dims.size(); ++b)
            if (obj_herm[b].rows() != herm_dims[b] || herm_residual(obj_herm[b]) > 1e-12 * std::max(1.0, obj_herm[b].max_abs()))
                throw std::invalid_argument("sdp: objective block not Hermitian");
        for (const auto& c : cons) {
            if ((int)c.a_herm.size() != (int)herm_dims.size() || (int)c.a_lin.size() != nonneg)
                throw std::invalid_argument("sdp: constraint shape");
            for (std::size_t b = 0; b < herm_dims.size(); ++b)
                if (c.a_herm[b].rows() != herm_dims[b] || herm_residual(c.a_herm[b]) > 1e-12 * std::max(1.0, c.a_herm[b].max_abs()))
                    throw std::invalid_argument("sdp: constraint block not Hermitian");
        }
    }
};

enum class SdpStatus { optimal, infeasible, max_iter };

struct SdpSolution {
    SdpStatus status = SdpStatus::max_iter;
    std::vector<Mat> x_herm;
    std::vector<double> x_lin;
    std::vector<double> y;  // equality multipliers
    std::vector<Mat> z_herm;
    std::vector<double> z_lin;
    double primal_obj = 0, dual_obj = 0, gap = 0;
    int iterations = 0;
    std::vector<double> infeasibility_ray;          // y direction when infeasible
    std::vector<std::array<double, 2>> objectives;  // (primal, dual) per iterate
};

struct SdpOptions {
    double gap_tol = 1e-11;   // relative duality gap target
    double feas_tol = 1e-10;  // relative feasibility target
    int max_iter = 200;
};

namespace ipm {

// one real symmetric block-diagonal variable
struct Blocks {
    std::vector<int> n;
    std::vector<std::vector<double>> a;  // row-major, kept symmetric

    static Blocks zeros(const std::vector<int>& sizes) {
        Blocks b;
        b.n = sizes;
        for (int s : sizes) b.a.emplace_back(std::size_t(s) * s, 0.0);
        return b;
    }
    void set_identity(double scale) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            std::fill(a[k].begin(), a[k].end(), 0.0);
            for (int i = 0; i < n[k]; ++i) a[k][std::size_t(i) * n[k] + i] = scale;
        }
    }
    double max_abs() const {
        double m = 0;
        for (const auto& blk : a)
            for (double v : blk) m = std::max(m, std::abs(v));
        return m;
    }
};

inline double dot(const Blocks& x, const Blocks& y) {
    double s = 0;
    for (std::size_t k = 0; k < x.a.size(); ++k)
        for (std::size_t i = 0; i < x.a[k].size(); ++i) s += x.a[k][i] * y.a[k][i];
    return s;
}

inline void axpy(double alpha, const Blocks& x, Blocks& y) {
    for (std::size_t k = 0; k < x.a.size(); ++k)
        for (std::size_t i = 0; i < x.a[k].size(); ++i) y.a[k][i] += alpha * x.a[k][i];
}

// per-block C = A * B (general, no symmetry assumption)
inline void gemm(const Blocks& a, const Blocks& b, Blocks& c) {
    for (std::size_t k = 0; k < a.a.size(); ++k) {
        int m = a.n[k];
        const double* pa = a.a[k].data();
        const double* pb = b.a[k].data();
        double* pc = c.a[k].data();
        std::fill(c.a[k].begin(), c.a[k].end(), 0.0);
        for (int i = 0; i < m; ++i)
            for (int l = 0; l < m; ++l) {
                double v = pa[std::size_t(i) * m + l];
                if (v == 0.0) continue;
                for (int j = 0; j < m; ++j) pc[std::size_t(i) * m + j] += v * pb[std::size_t(l) * m + j];
            }
    }
}

inline void symmetrize(Blocks& x) {
    for (std::size_t k = 0; k < x.a.size(); ++k) {
        int m = x.n[k];
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                double v = 0.5 * (x.a[k][std::size_t(i) * m + j] + x.a[k][std::size_t(j) * m + i]);
                x.a[k][std::size_t(i) * m + j] = x.a[k][std::size_t(j) * m + i] = v;
            }
    }
}

// in-place lower Cholesky of a single dense symmetric block
inline bool chol(std::vector<double>& a, int m) {
    for (int j = 0; j < m; ++j) {
        double d = a[std::size_t(j) * m + j];
        for (int k = 0; k < j; ++k) d -= a[std::size_t(j) * m + k] * a[std::size_t(j) * m + k];
        if (d <= 0.0 || !std::isfinite(d)) return false;
        d = std::sqrt(d);
        a[std::size_t(j) * m + j] = d;
        for (int i = j + 1; i < m; ++i) {
            double s = a[std::size_t(i) * m + j];
            for (int k = 0; k < j; ++k) s -= a[std::size_t(i) * m + k] * a[std::size_t(j) * m + k];
            a[std::size_t(i) * m + j] = s / d;
        }
        for (int i = 0; i < j; ++i) a[std::size_t(i) * m + j] = 0.0;
    }
    return true;
}

inline void forward_solve(const std::vector<double>& l, int m, double* x) {  // L x = b in place
    for (int i = 0; i < m; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= l[std::size_t(i) * m + k] * x[k];
        x[i] = s / l[std::size_t(i) * m + i];
    }
}

inline void backward_solve(const std::vector<double>& l, int m, double* x) {  // L^T x = b
    for (int i = m - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < m; ++k) s -= l[std::size_t(k) * m + i] * x[k];
        x[i] = s / l[std::size_t(i) * m + i];
    }
}

// symmetric inverse from Cholesky factor
inline std::vector<double> chol_inverse(const std::vector<double>& l, int m) {
    std::vector<double> inv(std::size_t(m) * m, 0.0);
    std::vector<double> col(m);
    for (int j = 0; j < m; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        forward_solve(l, m, col.data());
        backward_solve(l, m, col.data());
        for (int i = 0; i < m; ++i) inv[std::size_t(i) * m + j] = col[i];
    }
    // clean up asymmetry from roundoff
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double v = 0.5 * (inv[std::size_t(i) * m + j] + inv[std::size_t(j) * m + i]);
            inv[std::size_t(i) * m + j] = inv[std::size_t(j) * m + i] = v;
        }
    return inv;
}

inline double min_eig_sym(std::vector<double> a, int m) {
    if (m == 1) return a[0];
    std::vector<double> d(m), e(m);
    detail::tred2(a, m, d, e);
    detail::tql2(d, e, a, m);
    double mn = d[0];
    for (double v : d) mn = std::min(mn, v);
    return mn;
}

// sup alpha with S + alpha*D psd, given the Cholesky factor of S
inline double boundary_alpha(const Blocks& s_chol, const Blocks& d) {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < d.a.size(); ++k) {
        int m = d.n[k];
        // W = L^-1 D L^-T
        std::vector<double> w = d.a[k];
        // columns of L^-1 D: solve on each column of D => do rows trick:
        // first solve L Y = D  (column-wise)
        std::vector<double> col(m);
        std::vector<double> y(std::size_t(m) * m);
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i) col[i] = w[std::size_t(i) * m + j];
            forward_solve(s_chol.a[k], m, col.data());
            for (int i = 0; i < m; ++i) y[std::size_t(i) * m + j] = col[i];
        }
        // then W = Y L^-T  => W^T = L^-1 Y^T
        std::vector<double> wt(std::size_t(m) * m);
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i) col[i] = y[std::size_t(j) * m + i];
            forward_solve(s_chol.a[k], m, col.data());
            for (int i = 0; i < m; ++i) wt[std::size_t(i) * m + j] = col[i];
        }
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                double v = 0.5 * (wt[std::size_t(i) * m + j] + wt[std::size_t(j) * m + i]);
                wt[std::size_t(i) * m + j] = wt[std::size_t(j) * m + i] = v;
            }
        double mn = min_eig_sym(std::move(wt), m);
        if (mn < -1e-16) alpha = std::min(alpha, 1.0 / (-mn));
    }
    return alpha;
}

}  // namespace ipm

namespace detail_sdp {

inline void embed_into(const Mat& c, std::vector<double>& out, int n, double factor) {
    int d = c.rows();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double re = factor * std::real(c(i, j)), im = factor * std::imag(c(i, j));
            out[std::size_t(i) * n + j] = re;
            out[std::size_t(i) * n + (j + d)] = -im;
            out[std::size_t(i + d) * n + j] = im;
            out[std::size_t(i + d) * n + (j + d)] = re;
        }
}

// average over the embedding symmetry and lift back to a complex matrix
inline Mat deembed(const std::vector<double>& v, int d, double factor) {
    int n = 2 * d;
    Mat out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double re = 0.5 * (v[std::size_t(i) * n + j] + v[std::size_t(i + d) * n + (j + d)]);
            double im = 0.5 * (v[std::size_t(i + d) * n + j] - v[std::size_t(i) * n + (j + d)]);
            out(i, j) = factor * cplx(re, im);
        }
    return sym(out);
}

}  // namespace detail_sdp

inline SdpSolution solve(const SdpProblem& p, const SdpOptions& opts = {}) {
    p.validate();
    const int nb_herm = (int)p.herm_dims.size();
    const int m = (int)p.cons.size();

    std::vector<int> sizes;
    for (int d : p.herm_dims) sizes.push_back(2 * d);
    for (int s = 0; s < p.nonneg; ++s) sizes.push_back(1);

    double nu = 0;  // barrier dimension
    for (int s : sizes) nu += s;

    auto embed_data = [&](const std::vector<Mat>& hm, const std::vector<double>& lin) {
        ipm::Blocks b = ipm::Blocks::zeros(sizes);
        for (int k = 0; k < nb_herm; ++k) detail_sdp::embed_into(hm[k], b.a[k], sizes[k], 0.5);
        for (int s = 0; s < p.nonneg; ++s) b.a[nb_herm + s][0] = lin[s];
        return b;
    };

    ipm::Blocks C = embed_data(p.obj_herm, p.obj_lin);
    std::vector<ipm::Blocks> A;
    std::vector<double> b(m);
    for (int i = 0; i < m; ++i) {
        A.push_back(embed_data(p.cons[i].a_herm, p.cons[i].a_lin));
        b[i] = p.cons[i].rhs;
    }

    double bmax = 0, amax = 0;
    for (double v : b) bmax = std::max(bmax, std::abs(v));
    for (const auto& ai : A) amax = std::max(amax, ai.max_abs());
    double cmax = C.max_abs();

    ipm::Blocks X = ipm::Blocks::zeros(sizes), Z = ipm::Blocks::zeros(sizes);
    X.set_identity(std::max(1.0, bmax));
    Z.set_identity(std::max({1.0, cmax, amax}));
    std::vector<double> y(m, 0.0);

    SdpSolution sol;
    sol.y = y;

    ipm::Blocks Rd = ipm::Blocks::zeros(sizes);
    ipm::Blocks Zi = ipm::Blocks::zeros(sizes);
    ipm::Blocks scratch = ipm::Blocks::zeros(sizes), scratch2 = ipm::Blocks::zeros(sizes);
    ipm::Blocks dXa = ipm::Blocks::zeros(sizes), dZa = ipm::Blocks::zeros(sizes);
    ipm::Blocks dX = ipm::Blocks::zeros(sizes), dZ = ipm::Blocks::zeros(sizes);

    double best_merit = std::numeric_limits<double>::infinity();
    int last_improve = 0;
    ipm::Blocks bestX = X, bestZ = Z;
    std::vector<double> besty = y;
    double init_norm = X.max_abs() + Z.max_abs();

    int it = 0;
    bool converged = false, diverged = false;
    for (; it < opts.max_iter; ++it) {
        // runaway iterates mean an unbounded dual ray, i.e. infeasibility;
        // bail before the linear algebra degrades
        {
            double ynorm = 0;
            for (double v : y) ynorm = std::max(ynorm, std::abs(v));
            double growth = X.max_abs() + Z.max_abs() + ynorm;
            if (!std::isfinite(growth) || growth > 1e10 * (1.0 + init_norm)) {
                diverged = true;
                break;
            }
        }
        // residuals
        std::vector<double> rp(m);
        double prim_feas = 0;
        for (int i = 0; i < m; ++i) {
            rp[i] = b[i] - ipm::dot(A[i], X);
            prim_feas = std::max(prim_feas, std::abs(rp[i]));
        }
        Rd = C;
        for (int i = 0; i < m; ++i) ipm::axpy(-y[i], A[i], Rd);
        ipm::axpy(-1.0, Z, Rd);
        double dual_feas = Rd.max_abs();

        double pobj = ipm::dot(C, X);
        double dobj = 0;
        for (int i = 0; i < m; ++i) dobj += b[i] * y[i];
        // lower estimate pobj - <X,Z>: coincides with b.y once dual-feasible,
        // and never exceeds pobj because both iterates stay in the cone
        sol.objectives.push_back({pobj, pobj - ipm::dot(X, Z)});

        double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        double pf = prim_feas / (1.0 + bmax);
        double df = dual_feas / (1.0 + cmax);
        double merit = std::max({relgap, pf, df});
        if (merit < best_merit * (1.0 - 1e-12)) {
            best_merit = merit;
            bestX = X;
            bestZ = Z;
            besty = y;
            last_improve = it;
        }
        if (pf <= opts.feas_tol && df <= opts.feas_tol && relgap <= opts.gap_tol) {
            converged = true;
            break;
        }
        if (it - last_improve >= 30) {
            double norm_now = X.max_abs() + Z.max_abs();
            double ynorm = 0;
            for (double v : y) ynorm = std::max(ynorm, std::abs(v));
            diverged = (norm_now > 1e6 * (1.0 + init_norm)) || ynorm > 1e8;
            break;
        }

        double mu = ipm::dot(X, Z) / nu;

        // factor Z, invert
        ipm::Blocks Zch = Z;
        bool ok = true;
        for (std::size_t k = 0; k < Zch.a.size(); ++k)
            if (!ipm::chol(Zch.a[k], Zch.n[k])) ok = false;
        if (!ok) break;  // lost the cone: report best iterate
        for (std::size_t k = 0; k < Zi.a.size(); ++k) Zi.a[k] = ipm::chol_inverse(Zch.a[k], Zi.n[k]);

        // Schur complement  M_ij = <A_i, sym(X A_j Z^-1)>
        std::vector<double> M(std::size_t(m) * m, 0.0);
        std::vector<ipm::Blocks> T;
        T.reserve(m);
        for (int j = 0; j < m; ++j) {
            ipm::gemm(X, A[j], scratch);
            ipm::gemm(scratch, Zi, scratch2);
            ipm::symmetrize(scratch2);
            T.push_back(scratch2);
        }
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double v = ipm::dot(A[i], T[j]);
                M[std::size_t(i) * m + j] = v;
                M[std::size_t(j) * m + i] = v;
            }

        double mdiag = 0;
        for (int i = 0; i < m; ++i) mdiag = std::max(mdiag, M[std::size_t(i) * m + i]);
        std::vector<double> Mch;
        bool fact = false;
        for (double reg : {0.0, 1e-14, 1e-12, 1e-10, 1e-8}) {
            Mch = M;
            for (int i = 0; i < m; ++i) Mch[std::size_t(i) * m + i] += reg * std::max(mdiag, 1.0);
            if (ipm::chol(Mch, m)) {
                fact = true;
                break;
            }
        }
        if (!fact) {
            double mdmin = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) mdmin = std::min(mdmin, M[std::size_t(i) * m + i]);
            throw std::runtime_error("sdp: Schur complement not factorizable, cond >= " +
                                     std::to_string(mdiag / std::max(mdmin, 1e-300)));
        }

        // X Rd Z^-1 contribution and <A_i, Z^-1>, reused by both solves
        ipm::gemm(X, Rd, scratch);
        ipm::gemm(scratch, Zi, scratch2);
        ipm::Blocks XRdZi = scratch2;
        std::vector<double> azi(m);
        for (int i = 0; i < m; ++i) azi[i] = ipm::dot(A[i], Zi);

        auto solve_direction = [&](double sigmu, const ipm::Blocks* Xi_corr, ipm::Blocks& outdX,
                                   std::vector<double>& outdy, ipm::Blocks& outdZ) {
            std::vector<double> rhs(m);
            for (int i = 0; i < m; ++i) {
                double v = b[i] + ipm::dot(A[i], XRdZi) - sigmu * azi[i];
                if (Xi_corr) v += ipm::dot(A[i], *Xi_corr);
                rhs[i] = v;
            }
            outdy = rhs;
            ipm::forward_solve(Mch, m, outdy.data());
            ipm::backward_solve(Mch, m, outdy.data());
            // dZ = Rd - sum dy_j A_j
            outdZ = Rd;
            for (int j = 0; j < m; ++j) ipm::axpy(-outdy[j], A[j], outdZ);
            // dX = sigmu Z^-1 - X - sym(X dZ Z^-1) - corr
            ipm::gemm(X, outdZ, scratch);
            ipm::gemm(scratch, Zi, outdX);
            for (std::size_t k = 0; k < outdX.a.size(); ++k)
                for (std::size_t q = 0; q < outdX.a[k].size(); ++q)
                    outdX.a[k][q] = sigmu * Zi.a[k][q] - X.a[k][q] - outdX.a[k][q] -
                                    (Xi_corr ? Xi_corr->a[k][q] : 0.0);
            ipm::symmetrize(outdX);
        };

        // predictor
        std::vector<double> dya(m);
        solve_direction(0.0, nullptr, dXa, dya, dZa);

        ipm::Blocks Xch = X;
        for (std::size_t k = 0; k < Xch.a.size(); ++k)
            if (!ipm::chol(Xch.a[k], Xch.n[k])) { ok = false; }
        if (!ok) break;
        double apa = std::min(1.0, ipm::boundary_alpha(Xch, dXa));
        double ada = std::min(1.0, ipm::boundary_alpha(Zch, dZa));

        // mu after the affine step drives the centering weight
        ipm::Blocks Xa = X, Za = Z;
        ipm::axpy(apa, dXa, Xa);
        ipm::axpy(ada, dZa, Za);
        double mu_aff = std::max(0.0, ipm::dot(Xa, Za) / nu);
        double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
        sigma = std::min(1.0, std::max(0.0, sigma));

        // corrector: second-order term dXa * dZa enters the complementarity rhs
        ipm::gemm(dXa, dZa, scratch);
        ipm::gemm(scratch, Zi, scratch2);
        ipm::Blocks corr = scratch2;

        std::vector<double> dy(m);
        solve_direction(sigma * mu, &corr, dX, dy, dZ);

        double ap = std::min(1.0, 0.98 * ipm::boundary_alpha(Xch, dX));
        double ad = std::min(1.0, 0.98 * ipm::boundary_alpha(Zch, dZ));
        if (ap < 1e-10 && ad < 1e-10) break;  // stalled

        ipm::axpy(ap, dX, X);
        ipm::axpy(ad, dZ, Z);
        for (int i = 0; i < m; ++i) y[i] += ad * dy[i];
    }

    // report the best iterate seen
    X = bestX;
    Z = bestZ;
    y = besty;
    sol.iterations = it;
    sol.y = y;

    sol.x_herm.clear();
    sol.z_herm.clear();
    for (int k = 0; k < nb_herm; ++k) {
        sol.x_herm.push_back(detail_sdp::deembed(X.a[k], p.herm_dims[k], 1.0));
        sol.z_herm.push_back(detail_sdp::deembed(Z.a[k], p.herm_dims[k], 2.0));
    }
    sol.x_lin.clear();
    sol.z_lin.clear();
    for (int s = 0; s < p.nonneg; ++s) {
        sol.x_lin.push_back(X.a[nb_herm + s][0]);
        sol.z_lin.push_back(Z.a[nb_herm + s][0]);
    }
    sol.primal_obj = ipm::dot(C, X);
    sol.dual_obj = 0;
    for (int i = 0; i < m; ++i) sol.dual_obj += b[i] * y[i];
    sol.gap = std::max(0.0, sol.primal_obj - sol.dual_obj);

    if (converged) {
        sol.status = SdpStatus::optimal;
    } else if (diverged) {
        sol.status = SdpStatus::infeasible;
        sol.infeasibility_ray = y;
    } else {
        // a stall can still land inside the advertised optimality envelope
        double prim_feas = 0;
        for (int i = 0; i < m; ++i) prim_feas = std::max(prim_feas, std::abs(b[i] - ipm::dot(A[i], X)));
        ipm::Blocks R = C;
        for (int i = 0; i < m; ++i) ipm::axpy(-y[i], A[i], R);
        ipm::axpy(-1.0, Z, R);
        double relgap = std::abs(sol.primal_obj - sol.dual_obj) /
                        (1.0 + std::abs(sol.primal_obj) + std::abs(sol.dual_obj));
        sol.status = (prim_feas <= 1e-8 && R.max_abs() <= 1e-8 && relgap <= 1e-7)
                         ? SdpStatus::optimal
                         : SdpStatus::max_iter;
    }
    return sol;
}

struct SdpResiduals {
    double primal_res = 0, dual_res = 0, gap = 0;
};

// recomputed directly from the problem data, independent of solver internals
inline SdpResiduals residuals(const SdpProblem& p, const SdpSolution& s) {
    const int m = (int)p.cons.size();
    if ((int)s.x_herm.size() != (int)p.herm_dims.size() || (int)s.y.size() != m)
        throw std::invalid_argument("residuals: shape mismatch");
    SdpResiduals r;
    double pobj = 0, dobj = 0;
    for (std::size_t k = 0; k < p.obj_herm.size(); ++k) pobj += hs_inner(p.obj_herm[k], s.x_herm[k]);
    for (int q = 0; q < p.nonneg; ++q) pobj += p.obj_lin[q] * s.x_lin[q];
    for (int i = 0; i < m; ++i) {
        double v = 0;
        for (std::size_t k = 0; k < p.obj_herm.size(); ++k) v += hs_inner(p.cons[i].a_herm[k], s.x_herm[k]);
        for (int q = 0; q < p.nonneg; ++q) v += p.cons[i].a_lin[q] * s.x_lin[q];
        r.primal_res = std::max(r.primal_res, std::abs(v - p.cons[i].rhs));
        dobj += p.cons[i].rhs * s.y[i];
    }
    for (std::size_t k = 0; k < p.obj_herm.size(); ++k)
        r.primal_res = std::max(r.primal_res, std::max(0.0, -min_eig(s.x_herm[k])));
    for (int q = 0; q < p.nonneg; ++q) r.primal_res = std::max(r.primal_res, std::max(0.0, -s.x_lin[q]));

    for (std::size_t k = 0; k < p.obj_herm.size(); ++k) {
        Mat d = p.obj_herm[k] - s.z_herm[k];
        for (int i = 0; i < m; ++i) d -= s.y[i] * p.cons[i].a_herm[k];
        r.dual_res = std::max(r.dual_res, d.max_abs());
        r.dual_res = std::max(r.dual_res, std::max(0.0, -min_eig(s.z_herm[k])));
    }
    for (int q = 0; q < p.nonneg; ++q) {
        double d = p.obj_lin[q] - s.z_lin[q];
        for (int i = 0; i < m; ++i) d -= s.y[i] * p.cons[i].a_lin[q];
        r.dual_res = std::max(r.dual_res, std::abs(d));
        r.dual_res = std::max(r.dual_res, std::max(0.0, -s.z_lin[q]));
    }
    r.gap = pobj - dobj;
    return r;
}

// Hermitian basis of d x d: d diagonal units, then (e_ij+e_ji) and
// i(e_ij-e_ji) for i<j. Spans all Hermitian matrices over the reals.
inline std::vector<Mat> herm_basis(int d) {
    std::vector<Mat> out;
    for (int i = 0; i < d; ++i) {
        Mat e(d, d);
        e(i, i) = 1;
        out.push_back(e);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Mat re(d, d);
            re(i, j) = re(j, i) = 1;
            out.push_back(re);
            Mat im(d, d);
            im(i, j) = cplx(0, 1);
            im(j, i) = cplx(0, -1);
            out.push_back(im);
        }
    return out;
}

}  // namespace resq
