#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <string>

namespace qgeom {

using Complex = std::complex<double>;

inline constexpr double kDefaultEps = 1e-12;

/// The field with two elements. Addition is xor, multiplication is and.
struct Gf2 {
    std::uint8_t v = 0;

    constexpr Gf2() = default;
    constexpr explicit Gf2(int x) : v(static_cast<std::uint8_t>(x & 1)) {}

    friend constexpr Gf2 operator+(Gf2 a, Gf2 b) { return Gf2(a.v ^ b.v); }
    friend constexpr Gf2 operator-(Gf2 a, Gf2 b) { return Gf2(a.v ^ b.v); }
    friend constexpr Gf2 operator*(Gf2 a, Gf2 b) { return Gf2(a.v & b.v); }
    friend constexpr Gf2 operator/(Gf2 a, Gf2 /*b*/) { return a; }
    constexpr Gf2 operator-() const { return *this; }
    constexpr Gf2& operator+=(Gf2 o) { v ^= o.v; return *this; }
    constexpr Gf2& operator-=(Gf2 o) { v ^= o.v; return *this; }
    constexpr Gf2& operator*=(Gf2 o) { v &= o.v; return *this; }
    friend constexpr bool operator==(Gf2, Gf2) = default;
    friend std::ostream& operator<<(std::ostream& os, Gf2 x) { return os << int(x.v); }
};

/// Exact complex numbers a + b i with arbitrary-precision rational a, b.
class GaussRational {
public:
    using Rational = boost::multiprecision::cpp_rational;

    GaussRational() = default;
    GaussRational(long long re) : re_(re) {}  // NOLINT: implicit from integers is intended
    GaussRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussRational frac(long long num, long long den, long long inum = 0, long long iden = 1) {
        return {Rational(num, den), Rational(inum, iden)};
    }
    static GaussRational i() { return {0, 1}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    GaussRational conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    GaussRational operator-() const { return {-re_, -im_}; }
    friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend GaussRational operator/(const GaussRational& a, const GaussRational& b) {
        const Rational n = b.norm();
        const GaussRational num = a * b.conj();
        return {num.re_ / n, num.im_ / n};
    }
    GaussRational& operator+=(const GaussRational& o) { return *this = *this + o; }
    GaussRational& operator-=(const GaussRational& o) { return *this = *this - o; }
    GaussRational& operator*=(const GaussRational& o) { return *this = *this * o; }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    Complex to_complex() const {
        return {static_cast<double>(re_), static_cast<double>(im_)};
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussRational& x) {
        return os << '(' << x.re_ << (x.im_ < 0 ? "-" : "+") << abs(x.im_) << "i)";
    }

private:
    Rational re_ = 0;
    Rational im_ = 0;
};

enum class DomainKind { Real, ComplexFloat, Gf2, GaussianRational };

inline const char* to_string(DomainKind k) {
    switch (k) {
    case DomainKind::Real: return "real";
    case DomainKind::ComplexFloat: return "complex";
    case DomainKind::Gf2: return "gf2";
    case DomainKind::GaussianRational: return "gaussian-rational";
    }
    return "?";
}

/// Per-scalar-type arithmetic traits. Float kinds compare within a tolerance,
/// exact kinds ignore it.
template <class T>
struct Field;

template <>
struct Field<double> {
    static constexpr DomainKind kind = DomainKind::Real;
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long long n) { return static_cast<double>(n); }
    static bool is_zero(double x, double eps) { return std::abs(x) <= eps; }
    static double conj(double x) { return x; }
    static double magnitude(double x) { return std::abs(x); }
};

template <>
struct Field<Complex> {
    static constexpr DomainKind kind = DomainKind::ComplexFloat;
    static constexpr bool exact = false;
    static Complex zero() { return {}; }
    static Complex one() { return {1.0, 0.0}; }
    static Complex from_int(long long n) { return {static_cast<double>(n), 0.0}; }
    static bool is_zero(const Complex& x, double eps) { return std::abs(x) <= eps; }
    static Complex conj(const Complex& x) { return std::conj(x); }
    static double magnitude(const Complex& x) { return std::abs(x); }
};

template <>
struct Field<Gf2> {
    static constexpr DomainKind kind = DomainKind::Gf2;
    static constexpr bool exact = true;
    static Gf2 zero() { return Gf2(0); }
    static Gf2 one() { return Gf2(1); }
    static Gf2 from_int(long long n) { return Gf2(static_cast<int>(n & 1)); }
    static bool is_zero(Gf2 x, double /*eps*/) { return x.v == 0; }
    static Gf2 conj(Gf2 x) { return x; }
    static double magnitude(Gf2 x) { return x.v; }
};

template <>
struct Field<GaussRational> {
    static constexpr DomainKind kind = DomainKind::GaussianRational;
    static constexpr bool exact = true;
    static GaussRational zero() { return {}; }
    static GaussRational one() { return {1}; }
    static GaussRational from_int(long long n) { return {n}; }
    static bool is_zero(const GaussRational& x, double /*eps*/) { return x == GaussRational(); }
    static GaussRational conj(const GaussRational& x) { return x.conj(); }
    static double magnitude(const GaussRational& x) { return std::abs(x.to_complex()); }
};

template <class T>
bool approx_equal(const T& a, const T& b, double eps = kDefaultEps) {
    return Field<T>::is_zero(a - b, eps);
}

}  // namespace qgeom
