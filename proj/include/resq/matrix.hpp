#pragma once
// Dense complex matrices and the validated quantum-state wrappers used
// throughout the library. Row-major storage.

#include <complex>
#include <cstddef>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace resq {

using cplx = std::complex<double>;

struct Tol {
    // single tolerance table; inputs are checked loosely, internal
    // identities tightly
    static constexpr double input = 1e-9;
    static constexpr double internal = 1e-10;
    static constexpr double herm_construct = 1e-12;
};

class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : r_(rows), c_(cols), a_(std::size_t(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Mat: negative dim");
    }

    static Mat zero(int r, int c) { return Mat(r, c); }
    static Mat identity(int d) {
        Mat m(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }

    cplx& operator()(int i, int j) { return a_[std::size_t(i) * c_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[std::size_t(i) * c_ + j]; }

    Mat& operator+=(const Mat& b) {
        check_same(b);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += b.a_[k];
        return *this;
    }
    Mat& operator-=(const Mat& b) {
        check_same(b);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= b.a_[k];
        return *this;
    }
    Mat& operator*=(cplx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(Mat a, cplx s) { return a *= s; }
    friend Mat operator*(cplx s, Mat a) { return a *= s; }
    friend Mat operator*(Mat a, double s) { return a *= cplx(s); }
    friend Mat operator*(double s, Mat a) { return a *= cplx(s); }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.c_ != b.r_) throw std::invalid_argument("Mat*: shape mismatch");
        Mat out(a.r_, b.c_);
        for (int i = 0; i < a.r_; ++i)
            for (int k = 0; k < a.c_; ++k) {
                cplx aik = a(i, k);
                if (aik == cplx(0)) continue;
                for (int j = 0; j < b.c_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    Mat adjoint() const {
        Mat out(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }
    Mat transpose() const {
        Mat out(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }
    Mat conjugate() const {
        Mat out(r_, c_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out(i, j) = std::conj((*this)(i, j));
        return out;
    }

    cplx trace() const {
        if (r_ != c_) throw std::invalid_argument("trace: not square");
        cplx t = 0;
        for (int i = 0; i < r_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }
    double frobenius() const {
        double s = 0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }
    bool finite() const {
        for (const auto& v : a_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

private:
    void check_same(const Mat& b) const {
        if (r_ != b.r_ || c_ != b.c_) throw std::invalid_argument("Mat: shape mismatch");
    }
    int r_ = 0, c_ = 0;
    std::vector<cplx> a_;
};

// Hilbert-Schmidt inner product Re Tr[a^dag b]; the real inner product under
// which Hermitian matrices form a real vector space.
inline double hs_inner(const Mat& a, const Mat& b) {
    double s = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            s += std::real(std::conj(a(i, j)) * b(i, j));
    return s;
}

inline double herm_residual(const Mat& a) {
    double m = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

// (a + a^dag)/2
inline Mat sym(const Mat& a) {
    Mat out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return out;
}

// Hermitian matrix: symmetrized on construction, rejects inputs whose
// asymmetry exceeds the construction tolerance.
struct Herm {
    Mat m;
    Herm() = default;
    explicit Herm(const Mat& a, double tol = Tol::herm_construct) {
        if (a.rows() != a.cols()) throw std::invalid_argument("Herm: not square");
        if (herm_residual(a) > tol)
            throw std::invalid_argument("Herm: asymmetry " + std::to_string(herm_residual(a)));
        m = sym(a);
    }
    int dim() const { return m.rows(); }
};

struct EigResult;  // eig.hpp
double min_eig(const Mat& a);

struct Density {
    Mat m;
    Density() = default;
    explicit Density(const Mat& a) : m(sym(a)) {
        if (herm_residual(a) > Tol::input) throw std::invalid_argument("Density: not Hermitian");
        if (std::abs(a.trace() - cplx(1.0)) > Tol::input)
            throw std::invalid_argument("Density: trace != 1");
        if (min_eig(m) < -Tol::input) throw std::invalid_argument("Density: not PSD");
    }
    int dim() const { return m.rows(); }
};

// p(x) * rho_x: PSD with trace equal to its weight
struct Subnorm {
    Mat m;
    double weight = 0;
    Subnorm() = default;
    Subnorm(const Mat& a, double w) : m(sym(a)), weight(w) {
        if (herm_residual(a) > Tol::input) throw std::invalid_argument("Subnorm: not Hermitian");
        if (std::abs(std::real(a.trace()) - w) > Tol::input)
            throw std::invalid_argument("Subnorm: trace != weight");
        if (w < -Tol::input || w > 1 + Tol::input) throw std::invalid_argument("Subnorm: weight range");
        if (min_eig(m) < -Tol::input) throw std::invalid_argument("Subnorm: not PSD");
    }
};

}  // namespace resq
