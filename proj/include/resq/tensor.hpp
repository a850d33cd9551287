#pragma once
// Bipartite index plumbing: kron, partial transpose, partial trace.
// Composite index convention: row = iA*dB + iB (first factor is the slow
// index everywhere in the library).

#include <stdexcept>

#include "matrix.hpp"

namespace resq {

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ia = 0; ia < a.rows(); ++ia)
        for (int ja = 0; ja < a.cols(); ++ja) {
            cplx av = a(ia, ja);
            if (av == cplx(0)) continue;
            for (int ib = 0; ib < b.rows(); ++ib)
                for (int jb = 0; jb < b.cols(); ++jb)
                    out(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
        }
    return out;
}

enum class Sub { A, B };

// transpose only the chosen factor; applying twice restores the input
inline Mat partial_transpose(const Mat& m, int dA, int dB, Sub which) {
    if (m.rows() != dA * dB || m.cols() != dA * dB)
        throw std::invalid_argument("partial_transpose: dims");
    Mat out(dA * dB, dA * dB);
    for (int ia = 0; ia < dA; ++ia)
        for (int ib = 0; ib < dB; ++ib)
            for (int ja = 0; ja < dA; ++ja)
                for (int jb = 0; jb < dB; ++jb) {
                    if (which == Sub::B)
                        out(ia * dB + ib, ja * dB + jb) = m(ia * dB + jb, ja * dB + ib);
                    else
                        out(ia * dB + ib, ja * dB + jb) = m(ja * dB + ib, ia * dB + jb);
                }
    return out;
}

inline Mat partial_trace(const Mat& m, int dA, int dB, Sub traced_out) {
    if (m.rows() != dA * dB || m.cols() != dA * dB)
        throw std::invalid_argument("partial_trace: dims");
    if (traced_out == Sub::B) {
        Mat out(dA, dA);
        for (int ia = 0; ia < dA; ++ia)
            for (int ja = 0; ja < dA; ++ja)
                for (int k = 0; k < dB; ++k) out(ia, ja) += m(ia * dB + k, ja * dB + k);
        return out;
    }
    Mat out(dB, dB);
    for (int ib = 0; ib < dB; ++ib)
        for (int jb = 0; jb < dB; ++jb)
            for (int k = 0; k < dA; ++k) out(ib, jb) += m(k * dB + ib, k * dB + jb);
    return out;
}

// |v><w| for column vectors stored as d x 1 matrices
inline Mat outer(const Mat& v, const Mat& w) {
    Mat out(v.rows(), w.rows());
    for (int i = 0; i < v.rows(); ++i)
        for (int j = 0; j < w.rows(); ++j) out(i, j) = v(i, 0) * std::conj(w(j, 0));
    return out;
}

inline Mat basis_ket(int d, int k) {
    Mat v(d, 1);
    v(k, 0) = 1.0;
    return v;
}

}  // namespace resq
