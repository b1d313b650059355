#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace sepchain {

using cplx = std::complex<double>;

// Forward-mode dual number over an arbitrary scalar field T (double,
// complex, or another Dual for higher derivatives).
template <class T>
struct Dual {
    T v{};  // value
    T d{};  // directional derivative

    Dual() = default;
    template <class U>
        requires std::convertible_to<U, T>
    Dual(const U& x) : v(static_cast<T>(x)) {}
    Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

// magnitude of the underlying value, for domain checks and tolerances
inline double mag(double x) { return std::abs(x); }
inline double mag(const cplx& z) { return std::abs(z); }
template <class T>
double mag(const Dual<T>& x) { return mag(x.v); }

inline double real_of(double x) { return x; }
inline double real_of(const cplx& z) { return z.real(); }
template <class T>
double real_of(const Dual<T>& x) { return real_of(x.v); }

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T>
Dual<T> operator+(const Dual<T>& a) { return a; }

template <class T, class U>
    requires std::convertible_to<U, T> && (!is_dual_v<U>)
Dual<T> operator+(const Dual<T>& a, const U& b) { return {a.v + static_cast<T>(b), a.d}; }
template <class T, class U>
    requires std::convertible_to<U, T> && (!is_dual_v<U>)
Dual<T> operator+(const U& a, const Dual<T>& b) { return b + a; }
template <class T, class U>
    requires std::convertible_to<U, T> && (!is_dual_v<U>)
Dual<T> operator-(const Dual<T>& a, const U& b) { return {a.v - static_cast<T>(b), a.d}; }
template <class T, class U>
    requires std::convertible_to<U, T> && (!is_dual_v<U>)
Dual<T> operator-(const U& a, const Dual<T>& b) { return {static_cast<T>(a) - b.v, -b.d}; }
template <class T, class U>
    requires std::convertible_to<U, T> && (!is_dual_v<U>)
Dual<T> operator*(const Dual<T>& a, const U& b) {
    T s = static_cast<T>(b);
    return {a.v * s, a.d * s};
}
template <class T, class U>
    requires std::convertible_to<U, T> && (!is_dual_v<U>)
Dual<T> operator*(const U& a, const Dual<T>& b) { return b * a; }
template <class T, class U>
    requires std::convertible_to<U, T> && (!is_dual_v<U>)
Dual<T> operator/(const Dual<T>& a, const U& b) {
    T s = static_cast<T>(b);
    return {a.v / s, a.d / s};
}
template <class T, class U>
    requires std::convertible_to<U, T> && (!is_dual_v<U>)
Dual<T> operator/(const U& a, const Dual<T>& b) {
    T q = static_cast<T>(a) / b.v;
    return {q, -q * b.d / b.v};
}

using std::cos;
using std::sin;
using std::sqrt;
using std::tan;

template <class T>
Dual<T> sin(const Dual<T>& x) {
    using sepchain::cos;
    using sepchain::sin;
    return {sin(x.v), cos(x.v) * x.d};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
    using sepchain::cos;
    using sepchain::sin;
    return {cos(x.v), -sin(x.v) * x.d};
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
    using sepchain::sqrt;
    T r = sqrt(x.v);
    return {r, x.d / (r + r)};
}

// integer powers, enough for the term vocabulary
template <class T>
T ipow(const T& x, int n) {
    if (n < 0) return T(1.0) / ipow(x, -n);
    T acc(1.0);
    T base = x;
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) acc = acc * base;
        if (e > 1) base = base * base;
    }
    return acc;
}

}  // namespace sepchain
