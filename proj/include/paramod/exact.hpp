#pragma once

#include <ostream>
#include <sstream>
#include <string>

#include "paramod/errors.hpp"
#include "paramod/f2.hpp"
#include "paramod/mat4.hpp"

namespace paramod {

inline bool is_odd_prime(long p) {
    if (p < 3 || p % 2 == 0) return false;
    for (long d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

inline void require_odd_prime(long p) {
    if (!is_odd_prime(p)) throw InvalidPrime("p must be an odd prime >= 3");
}

// ---------------------------------------------------------------------------
// Symplectic forms.  StandardJ is [[0,I],[-I,0]]; LambdaP is [[0,E],[-E,0]]
// with E = diag(1,p).
// ---------------------------------------------------------------------------

enum class FormKind { StandardJ, LambdaP };

struct SymplecticForm {
    FormKind kind = FormKind::StandardJ;
    long p = 3;

    static SymplecticForm standard_j() { return {FormKind::StandardJ, 3}; }
    static SymplecticForm lambda(long p) {
        require_odd_prime(p);
        return {FormKind::LambdaP, p};
    }

    IMat4 matrix() const {
        IMat4 m;
        long d = (kind == FormKind::LambdaP) ? p : 1;
        m(0, 2) = 1;
        m(1, 3) = d;
        m(2, 0) = -1;
        m(3, 1) = -d;
        return m;
    }
    // p * Phi^-1 is integral for both forms; returned as (matrix, denominator).
    IMat4 scaled_inverse(Int& den) const {
        long d = (kind == FormKind::LambdaP) ? p : 1;
        IMat4 m;
        m(0, 2) = -d;
        m(1, 3) = -1;
        m(2, 0) = d;
        m(3, 1) = 1;
        den = d;
        return m;
    }
};

// ---------------------------------------------------------------------------
// ScaledSymplecticMatrix: value = entries / (sqrt p)^scale_exp, scale_exp in
// {0,1}.  Canonical form: at scale_exp = 1 the entries are not all divisible
// by p (a nonzero matrix sqrt(p)*M' has no representative here, and no
// element of the groups we work with produces one).
// ---------------------------------------------------------------------------

struct ScaledSymplecticMatrix {
    IMat4 m;
    int scale_exp = 0;
    long p = 3;

    ScaledSymplecticMatrix() = default;
    ScaledSymplecticMatrix(IMat4 entries, int e, long p_) : m(std::move(entries)), scale_exp(e), p(p_) {
        require_odd_prime(p);
        if (e != 0 && e != 1) throw ScaleOverflow("scale_exp must be 0 or 1");
        if (scale_exp == 1) {
            if (m.is_zero())
                scale_exp = 0;
            else if (entrywise_divisible(m, Int(p)))
                throw ScaleOverflow("sqrt(p)*integer matrix is not representable");
        }
    }

    static ScaledSymplecticMatrix identity(long p) { return {IMat4::identity(), 0, p}; }

    bool integral() const { return scale_exp == 0; }

    friend bool operator==(const ScaledSymplecticMatrix& a, const ScaledSymplecticMatrix& b) {
        return a.p == b.p && a.scale_exp == b.scale_exp && a.m == b.m;
    }
    friend bool operator!=(const ScaledSymplecticMatrix& a, const ScaledSymplecticMatrix& b) {
        return !(a == b);
    }
    friend std::ostream& operator<<(std::ostream& os, const ScaledSymplecticMatrix& g) {
        os << g.m;
        if (g.scale_exp == 1) os << "/sqrt(" << g.p << ")";
        return os;
    }
};

inline ScaledSymplecticMatrix mat_mul(const ScaledSymplecticMatrix& a, const ScaledSymplecticMatrix& b) {
    if (a.p != b.p) throw ChartMismatch("mat_mul: mismatched p");
    IMat4 prod = a.m * b.m;
    int e = a.scale_exp + b.scale_exp;
    if (e == 2) {
        if (!entrywise_divisible(prod, Int(a.p)))
            throw ScaleOverflow("product of two sqrt(p)-scaled matrices not divisible by p");
        return {divide_exact(prod, Int(a.p)), 0, a.p};
    }
    return {std::move(prod), e, a.p};
}

inline ScaledSymplecticMatrix operator*(const ScaledSymplecticMatrix& a, const ScaledSymplecticMatrix& b) {
    return mat_mul(a, b);
}

// g Phi g^T = Phi exactly; at scale_exp = 1 this reads M Phi M^T = p Phi.
inline bool symplectic_check(const ScaledSymplecticMatrix& g, const SymplecticForm& form) {
    IMat4 phi = form.matrix();
    IMat4 lhs = g.m * phi * g.m.transposed();
    if (g.scale_exp == 1) phi = Int(g.p) * phi;
    return lhs == phi;
}

inline bool symplectic_check(const QMat4& g, const SymplecticForm& form) {
    QMat4 phi = to_rational(form.matrix());
    return g * phi * g.transposed() == phi;
}

// g^-1 = Phi^-1 g^T Phi whenever g Phi g^T = Phi; stays in the same scale class.
inline ScaledSymplecticMatrix symplectic_inverse(const ScaledSymplecticMatrix& g, const SymplecticForm& form) {
    if (!symplectic_check(g, form)) throw NotSymplectic();
    Int den;
    IMat4 phi_inv_scaled = form.scaled_inverse(den);
    IMat4 num = phi_inv_scaled * g.m.transposed() * form.matrix();
    return {divide_exact(num, den), g.scale_exp, g.p};
}

inline QMat4 symplectic_inverse(const QMat4& g, const SymplecticForm& form) {
    if (!symplectic_check(g, form)) throw NotSymplectic();
    Int den;
    QMat4 phi_inv = to_rational(form.scaled_inverse(den));
    QMat4 r = Rat(1, den) * (phi_inv * g.transposed() * to_rational(form.matrix()));
    for (auto& x : r.e) x.canonicalize();
    return r;
}

inline F2Matrix mod2_reduce(const ScaledSymplecticMatrix& g) {
    if (g.scale_exp != 0) throw NonIntegral("mod-2 reduction needs an integral matrix");
    return mod2(g.m);
}

// ---------------------------------------------------------------------------
// Chart change: conjugation by R_p = diag(1,1,1,p).  Tilde chart holds the
// integer group Sp(Lambda_p, Z); the untilde chart holds the rational group
// with the p^-1 slot at (4,2).
// ---------------------------------------------------------------------------

inline QMat4 rp_conjugate(const QMat4& g, long p, bool to_tilde) {
    // to_tilde: R g R^-1 (row 4 * p, col 4 / p); else R^-1 g R.
    QMat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Rat v = g(i, j);
            if (i == 3 && j != 3) v = to_tilde ? Rat(v * p) : Rat(v / p);
            if (j == 3 && i != 3) v = to_tilde ? Rat(v / p) : Rat(v * p);
            v.canonicalize();
            r(i, j) = v;
        }
    return r;
}

// R_p g R_p^-1 for a rational matrix; result must be integral.
inline ScaledSymplecticMatrix rational_to_tilde(const QMat4& g, long p) {
    require_odd_prime(p);
    QMat4 t = rp_conjugate(g, p, true);
    try {
        return {to_integer(t), 0, p};
    } catch (const NonIntegral&) {
        throw NotConjugatable("matrix is not integral in the tilde chart");
    }
}

// Same conjugation for sqrt(p)-scaled matrices (the nontrivial-coset case).
inline ScaledSymplecticMatrix tilde_conjugate(const ScaledSymplecticMatrix& g) {
    QMat4 t = rp_conjugate(to_rational(g.m), g.p, true);
    try {
        return {to_integer(t), g.scale_exp, g.p};
    } catch (const NonIntegral&) {
        throw NotConjugatable("matrix is not integral in the tilde chart");
    }
}

inline QMat4 tilde_to_rational(const ScaledSymplecticMatrix& g) {
    if (g.scale_exp != 0) throw NonIntegral("use untilde_conjugate for scaled matrices");
    return rp_conjugate(to_rational(g.m), g.p, false);
}

// R_p^-1 g R_p, staying in sqrt(p)-scaled integer form when possible.
inline ScaledSymplecticMatrix untilde_conjugate(const ScaledSymplecticMatrix& g) {
    QMat4 t = rp_conjugate(to_rational(g.m), g.p, false);
    try {
        return {to_integer(t), g.scale_exp, g.p};
    } catch (const NonIntegral&) {
        throw NotConjugatable("matrix is not integral in the untilde chart");
    }
}

// ---------------------------------------------------------------------------
// Matrix literals: 16 whitespace-separated integers, row-major, followed by
// /sqrt(p) when scale_exp = 1.
// ---------------------------------------------------------------------------

inline std::string to_literal(const ScaledSymplecticMatrix& g) {
    std::ostringstream os;
    for (int i = 0; i < 16; ++i) os << (i ? " " : "") << g.m.e[i];
    if (g.scale_exp == 1) os << " /sqrt(" << g.p << ")";
    return os.str();
}

inline ScaledSymplecticMatrix parse_literal(const std::string& text, long p) {
    std::istringstream is(text);
    IMat4 m;
    for (int i = 0; i < 16; ++i) {
        std::string tok;
        if (!(is >> tok)) throw ParseError("matrix literal needs 16 integers");
        try {
            m.e[i] = Int(tok);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad integer in matrix literal: " + tok);
        }
    }
    std::string tail;
    int e = 0;
    if (is >> tail) {
        std::string want = "/sqrt(" + std::to_string(p) + ")";
        if (tail != want) throw ParseError("bad scale suffix: " + tail);
        e = 1;
    }
    return {m, e, p};
}

} // namespace paramod
