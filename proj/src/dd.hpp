#pragma once
// Double-double arithmetic (about 32 significant digits) for the partial-fraction
// oracle, whose coefficients cancel heavily when weights nearly coincide.

#include <cmath>
#include <limits>

namespace expotail::dd {

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double h) : hi(h) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

inline DD quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD operator+(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    DD t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD a, DD b) {
    const double q1 = a.hi / b.hi;
    DD r = a - b * DD(q1);
    const double q2 = r.hi / b.hi;
    r = r - b * DD(q2);
    const double q3 = r.hi / b.hi;
    return DD(quick_two_sum(q1, q2)) + DD(q3);
}

inline DD& operator+=(DD& a, DD b) { return a = a + b; }
inline DD& operator*=(DD& a, DD b) { return a = a * b; }

inline DD ldexp(DD a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

inline DD abs(DD a) { return a.hi < 0.0 ? -a : a; }

inline DD exp(DD a) {
    if (a.hi > 709.7) return {std::numeric_limits<double>::infinity(), 0.0};
    if (a.hi < -745.2) return {0.0, 0.0};
    static const DD ln2{6.931471805599452862e-01, 2.319046813846299558e-17};
    const double m = std::floor(a.hi / ln2.hi + 0.5);
    // r = (a - m ln2) / 2^10, so the Taylor series below needs only a dozen terms.
    const DD r = ldexp(a - ln2 * DD(m), -10);
    DD term = r;
    DD sum = r;
    for (int k = 2; k <= 12; ++k) {
        term = term * r / DD(static_cast<double>(k));
        sum += term;
        if (std::fabs(term.hi) < 1e-34) break;
    }
    // expm1(2x) = expm1(x) (expm1(x) + 2)
    for (int i = 0; i < 10; ++i) sum = sum * (sum + DD(2.0));
    const DD e = sum + DD(1.0);
    // Split the power of two so that deep underflow degrades gradually.
    const int mi = static_cast<int>(m);
    return ldexp(ldexp(e, mi / 2), mi - mi / 2);
}

// One Newton step on exp from the double logarithm.
inline DD log(DD a) {
    const DD y{std::log(a.hi)};
    return y + a * exp(-y) - DD(1.0);
}

inline DD pow_int(DD a, int n) {
    DD r{1.0};
    DD base = a;
    for (unsigned k = static_cast<unsigned>(n); k; k >>= 1) {
        if (k & 1U) r *= base;
        base *= base;
    }
    return r;
}

// a^p for a > 0; exact repeated squaring for integral p.
inline DD pow(DD a, double p) {
    if (p == std::floor(p) && std::fabs(p) < 1024.0) {
        const DD r = pow_int(a, static_cast<int>(std::fabs(p)));
        return p < 0.0 ? DD(1.0) / r : r;
    }
    return exp(log(a) * DD(p));
}

} // namespace expotail::dd
