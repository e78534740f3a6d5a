#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace entro {

// An l_p exponent in [1, inf]. Infinity is a distinct state, never a large
// float, so expressions like 1/p and duality are exact at p = inf.
class Exponent {
public:
    Exponent() : value_(2.0), inf_(false) {}

    static Exponent finite(double p) {
        if (!(p >= 1.0) || std::isinf(p))
            throw std::invalid_argument("exponent must satisfy 1 <= p < inf (use Exponent::inf())");
        return Exponent(p, false);
    }
    static Exponent inf() { return Exponent(0.0, true); }

    bool is_inf() const { return inf_; }

    // finite value; only meaningful when !is_inf()
    double value() const {
        if (inf_) throw std::logic_error("value() on infinite exponent");
        return value_;
    }

    // 1/p with the exact convention 1/inf = 0
    double inv() const { return inf_ ? 0.0 : 1.0 / value_; }

    // dual exponent: 1/p + 1/p' = 1, with 1' = inf and inf' = 1
    Exponent dual() const {
        if (inf_) return finite(1.0);
        if (value_ == 1.0) return inf();
        return finite(value_ / (value_ - 1.0));
    }

    bool operator==(const Exponent& o) const {
        return inf_ == o.inf_ && (inf_ || value_ == o.value_);
    }
    bool operator!=(const Exponent& o) const { return !(*this == o); }
    // order on [1, inf]
    bool operator<(const Exponent& o) const {
        if (inf_) return false;
        if (o.inf_) return true;
        return value_ < o.value_;
    }
    bool operator<=(const Exponent& o) const { return *this < o || *this == o; }
    bool operator>(const Exponent& o) const { return o < *this; }
    bool operator>=(const Exponent& o) const { return o <= *this; }

    std::string str() const { return inf_ ? "inf" : format_finite(value_); }

    static Exponent parse(const std::string& s) {
        if (s == "inf" || s == "Inf" || s == "INF" || s == "oo") return inf();
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("bad exponent: " + s);
        return finite(v);
    }

    // stable 64-bit encoding for seed derivation
    std::uint64_t encode() const {
        if (inf_) return 0x7ff0'0000'0000'0001ull;
        std::uint64_t bits;
        double v = value_;
        static_assert(sizeof(bits) == sizeof(v));
        __builtin_memcpy(&bits, &v, sizeof(bits));
        return bits;
    }

private:
    Exponent(double v, bool is_infinite) : value_(v), inf_(is_infinite) {}

    static std::string format_finite(double v) {
        if (v == static_cast<long long>(v)) return std::to_string(static_cast<long long>(v));
        return std::to_string(v);
    }

    double value_;
    bool inf_;
};

// 1/q - 1/p, the exponent gap that appears throughout the envelopes
inline double inv_gap(Exponent q, Exponent p) { return q.inv() - p.inv(); }

// positive part
inline double pos_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace entro
