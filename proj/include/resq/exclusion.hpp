#pragma once
// State exclusion ("guess which state it is not") and its discrimination
// mirror: fixed-measurement values through the classical post-processing
// reduction, globally optimal values as SDPs over the measurement effects,
// the binary trace-norm formula, and the algebraic optimality certificate
//   N = sum_x p(x) rho_x M_x,   N = N^dag,   p(x) rho_x - N >= 0.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "random.hpp"
#include "sdp.hpp"

namespace resq {

struct StateEnsemble {
    std::vector<Mat> states;
    std::vector<double> priors;

    StateEnsemble() = default;
    StateEnsemble(std::vector<Mat> st, std::vector<double> pr)
        : states(std::move(st)), priors(std::move(pr)) {
        validate();
    }
    static StateEnsemble uniform(std::vector<Mat> st) {
        std::vector<double> pr(st.size(), 1.0 / double(st.size()));
        return StateEnsemble(std::move(st), std::move(pr));
    }
    int k() const { return (int)states.size(); }
    int dim() const { return states.empty() ? 0 : states[0].rows(); }
    Mat weighted(int x) const { return states[x] * cplx(priors[x]); }
    void validate() const {
        if (states.size() < 2) throw std::invalid_argument("ensemble: need k >= 2");
        if (states.size() != priors.size()) throw std::invalid_argument("ensemble: priors shape");
        double s = 0;
        for (double p : priors) {
            if (p < 0) throw std::invalid_argument("ensemble: negative prior");
            s += p;
        }
        if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("ensemble: priors must sum to 1");
        for (const auto& st : states) {
            Density check(st);  // dims square, trace 1, psd
            if (st.rows() != states[0].rows()) throw std::invalid_argument("ensemble: mixed dims");
        }
    }
};

struct Povm {
    std::vector<Mat> effects;

    Povm() = default;
    explicit Povm(std::vector<Mat> eff) : effects(std::move(eff)) { validate(); }
    int outcomes() const { return (int)effects.size(); }
    int dim() const { return effects.empty() ? 0 : effects[0].rows(); }
    void validate() const {
        if (effects.empty()) throw std::invalid_argument("povm: no effects");
        const int d = effects[0].rows();
        Mat s(d, d);
        for (const auto& m : effects) {
            if (m.rows() != d || m.cols() != d) throw std::invalid_argument("povm: mixed dims");
            if (min_eig(m) < -1e-9) throw std::invalid_argument("povm: effect not psd");
            s = s + m;
        }
        if ((s - Mat::identity(d)).max_abs() > 1e-8)
            throw std::invalid_argument("povm: effects do not sum to identity");
    }
};

struct ExclusionFixed {
    double perr = 0;
    std::vector<int> assignment;  // outcome a -> excluded label g(a)
};

// perr = sum_a min_x Tr[M_a p(x) rho_x]; the inner minimization is the
// optimal classical post-processing (ties toward the smallest label, so the
// result is reproducible)
inline ExclusionFixed perr_exclusion_fixed(const StateEnsemble& e, const Povm& m) {
    if (m.dim() != e.dim()) throw std::invalid_argument("exclusion: dimension mismatch");
    ExclusionFixed out;
    std::vector<Mat> weighted;
    for (int x = 0; x < e.k(); ++x) weighted.push_back(e.weighted(x));
    for (const auto& ma : m.effects) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int x = 0; x < e.k(); ++x) {
            double v = hs_inner(ma, weighted[x]);
            if (v < best - 1e-15) {
                best = v;
                arg = x;
            }
        }
        out.perr += best;
        out.assignment.push_back(arg);
    }
    out.perr = std::min(std::max(out.perr, 0.0), 1.0);
    return out;
}

inline double psucc_discrimination_fixed(const StateEnsemble& e, const Povm& m) {
    if (m.dim() != e.dim()) throw std::invalid_argument("discrimination: dimension mismatch");
    double ps = 0;
    for (const auto& ma : m.effects) {
        double best = -std::numeric_limits<double>::infinity();
        for (int x = 0; x < e.k(); ++x) best = std::max(best, hs_inner(ma, e.weighted(x)));
        ps += best;
    }
    return std::min(std::max(ps, 0.0), 1.0);
}

namespace detail_excl {

// min/max of sum_x Tr[p(x) rho_x M_x] over k-effect POVMs
inline std::pair<double, Povm> povm_optimize(const StateEnsemble& e, bool maximize,
                                             const SdpOptions& opt) {
    const int d = e.dim(), k = e.k();
    std::vector<int> dims(k, d);
    SdpProblem p = SdpProblem::make(dims);
    for (int x = 0; x < k; ++x)
        p.obj_herm[x] = sym(e.weighted(x)) * cplx(maximize ? -1.0 : 1.0);
    for (const auto& em : herm_basis(d)) {
        auto& c = p.add_constraint(std::real(em.trace()));
        for (int x = 0; x < k; ++x) c.a_herm[x] = em;
    }
    auto s = solve(p, opt);
    if (s.status != SdpStatus::optimal) throw std::runtime_error("exclusion: povm solve failed");
    std::vector<Mat> eff;
    for (int x = 0; x < k; ++x) eff.push_back(sym(s.x_herm[x]));
    return {maximize ? -s.primal_obj : s.primal_obj, Povm(std::move(eff))};
}

}  // namespace detail_excl

struct ExclusionOpt {
    double perr = 0;
    Povm m_opt;
};

inline ExclusionOpt min_error_exclusion(const StateEnsemble& e, const SdpOptions& opt = {}) {
    auto [v, m] = detail_excl::povm_optimize(e, false, opt);
    return {std::min(std::max(v, 0.0), 1.0), std::move(m)};
}

struct DiscriminationOpt {
    double psucc = 0;
    Povm m_opt;
};

inline DiscriminationOpt max_succ_discrimination(const StateEnsemble& e,
                                                 const SdpOptions& opt = {}) {
    auto [v, m] = detail_excl::povm_optimize(e, true, opt);
    return {std::min(std::max(v, 0.0), 1.0), std::move(m)};
}

// k = 2 closed form: perr = (1 - ||p0 rho0 - p1 rho1||_1)/2
inline double binary_exclusion_value(const StateEnsemble& e) {
    if (e.k() != 2) throw std::invalid_argument("binary exclusion: k must be 2");
    return 0.5 * (1.0 - trace_norm(e.weighted(0) - e.weighted(1)));
}

struct ExclusionOptimalityCert {
    double hermiticity_residual = 0;
    std::vector<double> min_eig_slacks;
    bool pass = false;
};

// optimality conditions: N = sum_x p(x) rho_x M_x must be Hermitian and
// dominated by every weighted state; the asymmetry and the slack spectra are
// reported separately so a failure localizes
inline ExclusionOptimalityCert check_exclusion_optimality(const StateEnsemble& e, const Povm& m,
                                                          double tol) {
    if (m.outcomes() != e.k()) throw std::invalid_argument("optimality: one effect per label");
    const int d = e.dim();
    Mat n(d, d);
    for (int x = 0; x < e.k(); ++x) n = n + e.weighted(x) * m.effects[x];
    ExclusionOptimalityCert cert;
    cert.hermiticity_residual = herm_residual(n);
    Mat ns = sym(n);
    bool ok = cert.hermiticity_residual <= tol;
    for (int x = 0; x < e.k(); ++x) {
        double me = min_eig(e.weighted(x) - ns);
        cert.min_eig_slacks.push_back(me);
        ok = ok && me >= -tol;
    }
    cert.pass = ok;
    return cert;
}

// Monte Carlo realization of the exclusion game: draw a label, measure,
// apply the post-processing of perr_exclusion_fixed, count wrong guesses
inline double simulate_play(const StateEnsemble& e, const Povm& m, long shots,
                            std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("simulate: shots >= 1");
    auto fixed = perr_exclusion_fixed(e, m);
    Rng rng(seed);
    long errors = 0;
    std::vector<std::vector<double>> born(e.k());
    for (int x = 0; x < e.k(); ++x) {
        double tot = 0;
        for (const auto& ma : m.effects) {
            double v = std::max(0.0, hs_inner(ma, e.states[x]));
            born[x].push_back(v);
            tot += v;
        }
        for (auto& v : born[x]) v /= tot;
    }
    for (long s = 0; s < shots; ++s) {
        double u = rng.uniform();
        int x = 0;
        double acc = 0;
        for (int i = 0; i < e.k(); ++i) {
            acc += e.priors[i];
            if (u < acc) {
                x = i;
                break;
            }
            x = i;
        }
        double v = rng.uniform();
        int a = 0;
        acc = 0;
        for (int i = 0; i < m.outcomes(); ++i) {
            acc += born[x][i];
            if (v < acc) {
                a = i;
                break;
            }
            a = i;
        }
        if (fixed.assignment[a] == x) ++errors;
    }
    return double(errors) / double(shots);
}

}  // namespace resq
