#pragma once

// Rate series (n, value) on geometric grids, CSV round-tripping, and the
// least-squares slope fit log2 v = a log2 n + b log2 log2 n + c used to
// recover power and log-power exponents from sampled envelopes.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace entro {

struct RateSeries {
    std::vector<long long> n;
    std::vector<double> value;

    void push(long long n_, double v_) {
        if (!n.empty() && n_ <= n.back())
            throw std::invalid_argument("RateSeries: n must be strictly increasing");
        if (!(v_ > 0.0) || !std::isfinite(v_))
            throw std::invalid_argument("RateSeries: values must be positive and finite");
        n.push_back(n_);
        value.push_back(v_);
    }
    size_t size() const { return n.size(); }
};

inline std::string to_csv(const RateSeries& s) {
    std::string out = "n,value\n";
    char buf[64];
    for (size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g\n", s.n[i], s.value[i]);
        out += buf;
    }
    return out;
}

inline RateSeries from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("RateSeries csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "n,value") throw std::invalid_argument("RateSeries csv: bad header: " + line);
    RateSeries s;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        long long n;
        double v;
        if (std::sscanf(line.c_str(), "%lld,%lf", &n, &v) != 2)
            throw std::invalid_argument("RateSeries csv: bad row: " + line);
        s.push(n, v);
    }
    return s;
}

struct SlopeFit {
    double power = 0.0;      // a
    double log_power = 0.0;  // b
    double intercept = 0.0;  // c
    double residual = 0.0;   // rms residual in log2 space
};

// Normal-equation fit over the basis {log2 n, log2 log2 n, 1}.  Needs at
// least 6 points spanning 3 octaves with n >= 2 so both logs are defined and
// the basis functions separate.
inline SlopeFit slope_fit(const RateSeries& s) {
    size_t m = s.size();
    if (m < 6) throw std::invalid_argument("slope_fit: need at least 6 points");
    if (s.n.front() < 2) throw std::invalid_argument("slope_fit: need n >= 2");
    if (s.n.back() < 8 * s.n.front())
        throw std::invalid_argument("slope_fit: grid must span at least 3 octaves");

    long double A[3][3] = {};
    long double B[3] = {};
    std::vector<double> xs(m), zs(m), ys(m);
    for (size_t i = 0; i < m; ++i) {
        xs[i] = std::log2(static_cast<double>(s.n[i]));
        zs[i] = std::log2(xs[i]);
        ys[i] = std::log2(s.value[i]);
        long double phi[3] = {xs[i], zs[i], 1.0L};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) A[a][b] += phi[a] * phi[b];
            B[a] += phi[a] * ys[i];
        }
    }
    // Gaussian elimination with partial pivoting on the 3x3 system
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r2 = col + 1; r2 < 3; ++r2)
            if (std::fabs(static_cast<double>(A[idx[r2]][col])) >
                std::fabs(static_cast<double>(A[idx[piv]][col])))
                piv = r2;
        std::swap(idx[col], idx[piv]);
        long double d = A[idx[col]][col];
        if (std::fabs(static_cast<double>(d)) < 1e-12)
            throw std::invalid_argument("slope_fit: degenerate grid");
        for (int r2 = col + 1; r2 < 3; ++r2) {
            long double f = A[idx[r2]][col] / d;
            for (int c2 = col; c2 < 3; ++c2) A[idx[r2]][c2] -= f * A[idx[col]][c2];
            B[idx[r2]] -= f * B[idx[col]];
        }
    }
    long double sol[3];
    for (int row = 2; row >= 0; --row) {
        long double acc = B[idx[row]];
        for (int c2 = row + 1; c2 < 3; ++c2) acc -= A[idx[row]][c2] * sol[c2];
        sol[row] = acc / A[idx[row]][row];
    }
    SlopeFit fit;
    fit.power = static_cast<double>(sol[0]);
    fit.log_power = static_cast<double>(sol[1]);
    fit.intercept = static_cast<double>(sol[2]);
    double ss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        double pred = fit.power * xs[i] + fit.log_power * zs[i] + fit.intercept;
        ss += (ys[i] - pred) * (ys[i] - pred);
    }
    fit.residual = std::sqrt(ss / static_cast<double>(m));
    return fit;
}

}  // namespace entro
