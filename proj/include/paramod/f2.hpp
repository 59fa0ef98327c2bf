#pragma once

#include <cstdint>
#include <ostream>

#include "paramod/mat4.hpp"

namespace paramod {

// 4x4 matrix over the two-element field, packed as 16 bits (bit 4*i+j = entry i,j).
struct F2Matrix {
    std::uint16_t bits = 0;

    F2Matrix() = default;
    explicit F2Matrix(std::uint16_t b) : bits(b) {}

    static F2Matrix identity() { return F2Matrix(0x8421); }  // bits 0,5,10,15

    int operator()(int i, int j) const { return (bits >> (4 * i + j)) & 1; }
    void set(int i, int j, int v) {
        std::uint16_t m = std::uint16_t(1u << (4 * i + j));
        bits = v ? (bits | m) : (bits & ~m);
    }

    friend F2Matrix operator*(const F2Matrix& a, const F2Matrix& b) {
        F2Matrix c;
        for (int i = 0; i < 4; ++i) {
            int row = (a.bits >> (4 * i)) & 0xf;
            int out = 0;
            for (int k = 0; k < 4; ++k)
                if (row & (1 << k)) out ^= (b.bits >> (4 * k)) & 0xf;
            c.bits |= std::uint16_t(out << (4 * i));
        }
        return c;
    }
    friend bool operator==(const F2Matrix& a, const F2Matrix& b) { return a.bits == b.bits; }
    friend bool operator!=(const F2Matrix& a, const F2Matrix& b) { return a.bits != b.bits; }
    friend bool operator<(const F2Matrix& a, const F2Matrix& b) { return a.bits < b.bits; }

    F2Matrix transposed() const {
        F2Matrix c;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) c.set(j, i, (*this)(i, j));
        return c;
    }

    friend std::ostream& operator<<(std::ostream& os, const F2Matrix& m) {
        os << "[";
        for (int i = 0; i < 4; ++i) {
            os << (i ? "; " : "");
            for (int j = 0; j < 4; ++j) os << (j ? " " : "") << m(i, j);
        }
        return os << "]";
    }
};

// Standard symplectic form mod 2 (signs and odd p's vanish mod 2).
inline F2Matrix f2_form() {
    F2Matrix j;
    j.set(0, 2, 1); j.set(1, 3, 1); j.set(2, 0, 1); j.set(3, 1, 1);
    return j;
}

// Block double swap; the involution fixed by the extended reduction map.
inline F2Matrix f2_iota() {
    F2Matrix m;
    m.set(0, 1, 1); m.set(1, 0, 1); m.set(2, 3, 1); m.set(3, 2, 1);
    return m;
}

inline bool f2_is_symplectic(const F2Matrix& m) {
    F2Matrix j = f2_form();
    return m * j * m.transposed() == j;
}

// g^-1 = J g^T J for symplectic g over F2 (J^2 = 1 here).
inline F2Matrix f2_inverse(const F2Matrix& m) {
    F2Matrix j = f2_form();
    return j * m.transposed() * j;
}

inline F2Matrix mod2(const IMat4& m) {
    F2Matrix r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            r.set(i, j, mpz_odd_p(m(i, j).get_mpz_t()) ? 1 : 0);
    return r;
}

} // namespace paramod
