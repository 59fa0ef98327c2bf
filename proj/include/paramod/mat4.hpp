#pragma once

#include <array>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include <gmpxx.h>

#include "paramod/errors.hpp"

namespace paramod {

using Int = mpz_class;
using Rat = mpq_class;

// 4x4 matrix, row-major.  T is mpz_class, mpq_class or double.
template <class T>
struct Mat4 {
    std::array<T, 16> e{};

    Mat4() = default;
    Mat4(std::initializer_list<T> xs) {
        if (xs.size() != 16) throw ParseError("Mat4 needs 16 entries");
        int i = 0;
        for (const T& x : xs) e[i++] = x;
    }

    static Mat4 zero() { return Mat4(); }
    static Mat4 identity() {
        Mat4 m;
        for (int i = 0; i < 4; ++i) m(i, i) = T(1);
        return m;
    }

    T& operator()(int i, int j) { return e[4 * i + j]; }
    const T& operator()(int i, int j) const { return e[4 * i + j]; }

    friend Mat4 operator*(const Mat4& a, const Mat4& b) {
        Mat4 c;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) {
                const T& aik = a(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < 4; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend Mat4 operator+(const Mat4& a, const Mat4& b) {
        Mat4 c;
        for (int i = 0; i < 16; ++i) c.e[i] = a.e[i] + b.e[i];
        return c;
    }
    friend Mat4 operator-(const Mat4& a, const Mat4& b) {
        Mat4 c;
        for (int i = 0; i < 16; ++i) c.e[i] = a.e[i] - b.e[i];
        return c;
    }
    friend Mat4 operator*(const T& s, const Mat4& a) {
        Mat4 c;
        for (int i = 0; i < 16; ++i) c.e[i] = s * a.e[i];
        return c;
    }
    Mat4 operator-() const { return T(-1) * *this; }
    friend bool operator==(const Mat4& a, const Mat4& b) { return a.e == b.e; }
    friend bool operator!=(const Mat4& a, const Mat4& b) { return !(a == b); }

    Mat4 transposed() const {
        Mat4 c;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) c(j, i) = (*this)(i, j);
        return c;
    }

    bool is_zero() const {
        for (const T& x : e)
            if (x != 0) return false;
        return true;
    }

    friend std::ostream& operator<<(std::ostream& os, const Mat4& m) {
        os << "[";
        for (int i = 0; i < 4; ++i) {
            os << (i ? "; " : "");
            for (int j = 0; j < 4; ++j) os << (j ? " " : "") << m(i, j);
        }
        return os << "]";
    }
};

using IMat4 = Mat4<Int>;
using QMat4 = Mat4<Rat>;

inline QMat4 to_rational(const IMat4& m) {
    QMat4 q;
    for (int i = 0; i < 16; ++i) q.e[i] = Rat(m.e[i]);
    return q;
}

// Exact integer part; throws NonIntegral if any entry has a denominator.
inline IMat4 to_integer(const QMat4& m) {
    IMat4 z;
    for (int i = 0; i < 16; ++i) {
        if (m.e[i].get_den() != 1) throw NonIntegral();
        z.e[i] = m.e[i].get_num();
    }
    return z;
}

inline bool entrywise_divisible(const IMat4& m, const Int& d) {
    for (const Int& x : m.e)
        if (x % d != 0) return false;
    return true;
}

inline IMat4 divide_exact(const IMat4& m, const Int& d) {
    IMat4 r;
    for (int i = 0; i < 16; ++i) {
        if (m.e[i] % d != 0) throw NonIntegral("entry not divisible");
        r.e[i] = m.e[i] / d;
    }
    return r;
}

} // namespace paramod
