#pragma once
#include "sosggm/rational.hpp"
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace sosggm {

// dense univariate polynomial, coefficients ascending by degree.
// T is cpp_rational for exact work or double for float work.
template <class T>
struct Poly {
    std::vector<T> c;

    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return (int)c.size() - 1; }
    const T &lead() const { return c.back(); }
    T coeff(size_t i) const { return i < c.size() ? c[i] : T(0); }

    static Poly monomial(size_t n, const T &a) {
        std::vector<T> v(n + 1, T(0));
        v[n] = a;
        return Poly(std::move(v));
    }

    T eval(const T &x) const {
        T r = 0;
        for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
        return r;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly();
        std::vector<T> d(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * T((long)i);
        return Poly(std::move(d));
    }

    Poly &operator+=(const Poly &o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
        trim();
        return *this;
    }
    Poly &operator-=(const Poly &o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly &b) { return a += b; }
    friend Poly operator-(Poly a, const Poly &b) { return a -= b; }

    friend Poly operator*(const Poly &a, const Poly &b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return Poly(std::move(r));
    }

    Poly &operator*=(const T &s) {
        for (auto &x : c) x *= s;
        trim();
        return *this;
    }
    friend Poly operator*(Poly a, const T &s) { return a *= s; }
    friend Poly operator*(const T &s, Poly a) { return a *= s; }

    Poly pow(unsigned e) const {
        Poly r = monomial(0, T(1));
        Poly b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    bool operator==(const Poly &o) const { return c == o.c; }
};

// num = den*quot + rem, deg(rem) < deg(den). exact over a field.
template <class T>
std::pair<Poly<T>, Poly<T>> poly_divrem(const Poly<T> &num, const Poly<T> &den) {
    if (den.is_zero()) throw std::invalid_argument("division by zero polynomial");
    Poly<T> q, r = num;
    if (r.degree() < den.degree()) return {q, r};
    q.c.assign(r.degree() - den.degree() + 1, T(0));
    while (!r.is_zero() && r.degree() >= den.degree()) {
        T f = r.lead() / den.lead();
        int off = r.degree() - den.degree();
        q.c[off] = f;
        for (size_t i = 0; i < den.c.size(); ++i) r.c[off + i] -= f * den.c[i];
        r.trim();
    }
    q.trim();
    return {q, r};
}

inline Poly<double> to_double_poly(const Poly<rat> &p) {
    std::vector<double> d(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i) d[i] = to_double(p.c[i]);
    return Poly<double>(std::move(d));
}

inline Poly<rat> to_rat_poly(const Poly<double> &p) {
    std::vector<rat> d(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i) d[i] = rat(p.c[i]);  // exact binary value
    return Poly<rat>(std::move(d));
}

inline double eval_double(const Poly<rat> &p, double x) {
    double r = 0;
    for (size_t i = p.c.size(); i-- > 0;) r = r * x + to_double(p.c[i]);
    return r;
}

// gcd up to a positive scalar; coefficients rescaled each step to stay small
inline Poly<rat> poly_gcd(Poly<rat> a, Poly<rat> b) {
    auto normalize = [](Poly<rat> &p) {
        if (p.is_zero()) return;
        rat m = 0;
        for (auto &x : p.c) m = std::max(m, rat(abs(x)));
        for (auto &x : p.c) x /= m;
    };
    normalize(a);
    normalize(b);
    while (!b.is_zero()) {
        auto [q, r] = poly_divrem(a, b);
        (void)q;
        normalize(r);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

}
