#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "entro/exponent.hpp"
#include "entro/spaces.hpp"

namespace entro {

// Dense operator T: l_p^cols -> l_q^rows. Row-major entries.
struct OperatorMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;  // rows*cols
    Exponent p;             // source exponent
    Exponent q;             // target exponent

    OperatorMatrix() = default;
    OperatorMatrix(int r, int c, Exponent source_p, Exponent target_q)
        : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0), p(source_p), q(target_q) {
        if (r < 1 || c < 1) throw std::invalid_argument("OperatorMatrix: dims must be >= 1");
    }

    double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static OperatorMatrix identity(int n, Exponent p, Exponent q) {
        OperatorMatrix m(n, n, p, q);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    static OperatorMatrix diagonal(const std::vector<double>& sigma, Exponent p, Exponent q) {
        OperatorMatrix m(static_cast<int>(sigma.size()), static_cast<int>(sigma.size()), p, q);
        for (size_t i = 0; i < sigma.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = sigma[i];
        return m;
    }

    void apply(std::span<const double> x, std::span<double> y) const {
        for (int i = 0; i < rows; ++i) {
            double s = 0.0;
            const double* row = a.data() + static_cast<size_t>(i) * cols;
            for (int j = 0; j < cols; ++j) s += row[j] * x[j];
            y[i] = s;
        }
    }

    OperatorMatrix scaled(double lambda) const {
        OperatorMatrix m = *this;
        for (double& v : m.a) v *= lambda;
        return m;
    }

    bool is_zero() const {
        for (double v : a)
            if (v != 0.0) return false;
        return true;
    }
};

// sum/composition for the bound-calculus cross checks
inline OperatorMatrix operator+(const OperatorMatrix& s, const OperatorMatrix& t) {
    if (s.rows != t.rows || s.cols != t.cols || s.p != t.p || s.q != t.q)
        throw std::invalid_argument("operator+: shape/exponent mismatch");
    OperatorMatrix r = s;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += t.a[i];
    return r;
}

inline OperatorMatrix compose(const OperatorMatrix& s, const OperatorMatrix& t) {
    // S after T: x -> S(Tx); T: l_p -> (l_mid), S: (l_mid) -> l_q
    if (s.cols != t.rows) throw std::invalid_argument("compose: inner dims mismatch");
    OperatorMatrix r(s.rows, t.cols, t.p, s.q);
    for (int i = 0; i < s.rows; ++i)
        for (int k = 0; k < s.cols; ++k) {
            double sv = s.at(i, k);
            if (sv == 0.0) continue;
            for (int j = 0; j < t.cols; ++j) r.at(i, j) += sv * t.at(k, j);
        }
    return r;
}

// Certified upper bound on ||T||_{p->q}. Exact for p=1 (extreme points of the
// l_1 ball are signed basis vectors); otherwise the l_1 -> l_p factorization
// ||x||_1 <= cols^{1-1/p} ||x||_p pays a dimension factor.
inline double norm_upper_bound(const OperatorMatrix& T) {
    double max_col = 0.0;
    std::vector<double> col(T.rows);
    for (int j = 0; j < T.cols; ++j) {
        for (int i = 0; i < T.rows; ++i) col[i] = T.at(i, j);
        max_col = std::max(max_col, lp_norm(col, T.q));
    }
    if (!T.p.is_inf() && T.p.value() == 1.0) return max_col;
    double factor = std::pow(static_cast<double>(T.cols), 1.0 - T.p.inv());
    return factor * max_col;
}

}  // namespace entro
