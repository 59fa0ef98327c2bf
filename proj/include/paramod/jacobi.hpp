#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "paramod/errors.hpp"
#include "paramod/mat4.hpp"

namespace paramod {

// ---------------------------------------------------------------------------
// Truncated bivariate Laurent series in (q, r): integer coefficients, q-degree
// capped by qmax, r-window capped hard at |l| <= 2*qmax + 4.  Stored zeros are
// purged so equality is map equality.
// ---------------------------------------------------------------------------

struct BiSeries {
    int qmax = 0;
    std::map<std::pair<int, int>, Int> coeff;  // (n, l) -> integer

    static BiSeries one(int qmax) {
        BiSeries s;
        s.qmax = qmax;
        s.coeff[{0, 0}] = 1;
        return s;
    }
    static BiSeries monomial(int qmax, int n, int l, Int c = Int(1)) {
        BiSeries s;
        s.qmax = qmax;
        if (n <= qmax && c != 0) s.coeff[{n, l}] = std::move(c);
        return s;
    }

    int window_cap() const { return 2 * qmax + 4; }

    Int at(int n, int l) const {
        auto it = coeff.find({n, l});
        return it == coeff.end() ? Int(0) : it->second;
    }
};

inline bool same_table(const BiSeries& a, const BiSeries& b) { return a.coeff == b.coeff; }

inline BiSeries bi_mul(const BiSeries& a, const BiSeries& b) {
    if (a.qmax != b.qmax) throw ChartMismatch("bi_mul: truncation orders differ");
    BiSeries c;
    c.qmax = a.qmax;
    const int window = a.window_cap();
    for (const auto& [ka, va] : a.coeff) {
        for (const auto& [kb, vb] : b.coeff) {
            int n = ka.first + kb.first;
            if (n > c.qmax) break;  // keys are sorted, q-degree only grows from here
            int l = ka.second + kb.second;
            if (l > window || l < -window) throw WindowOverflow("r-exponent window exceeded");
            c.coeff[{n, l}] += va * vb;
        }
    }
    for (auto it = c.coeff.begin(); it != c.coeff.end();)
        it = (it->second == 0) ? c.coeff.erase(it) : std::next(it);
    return c;
}

// multiply by (1 + sign * q^dq r^dl) in place
inline void bi_mul_binomial(BiSeries& a, int dq, int dl, int sign) {
    if (dq > a.qmax) return;
    const int window = a.window_cap();
    std::map<std::pair<int, int>, Int> add;
    for (const auto& [k, v] : a.coeff) {
        int n = k.first + dq;
        if (n > a.qmax) continue;
        int l = k.second + dl;
        if (l > window || l < -window) throw WindowOverflow("r-exponent window exceeded");
        add[{n, l}] += sign > 0 ? v : -v;
    }
    for (auto& [k, v] : add) {
        Int& slot = a.coeff[k];
        slot += v;
        if (slot == 0) a.coeff.erase(k);
    }
}

// ---------------------------------------------------------------------------
// The coefficient table f(n, l) of the generating identity
//   sum f(n,l) q^n r^l
//     = r^-1 ( prod_{n>=1} (1+q^{n-1}r)(1+q^n r^-1)(1-q^{2n-1}r^2)(1-q^{2n-1}r^-2) )^2.
// Factors whose leading q-exponent exceeds qmax contribute 1 and are skipped,
// so the product over 1 <= n <= qmax+1 is exact to order qmax.
// ---------------------------------------------------------------------------

struct FTable {
    int qmax = 0;
    std::map<std::pair<int, int>, Int> f;

    Int at(int n, int l) const {
        auto it = f.find({n, l});
        return it == f.end() ? Int(0) : it->second;
    }
    // largest |l| with f(n, l) != 0, or -1 if the row vanishes
    int max_abs_l(int n) const {
        int m = -1;
        for (const auto& [k, v] : f)
            if (k.first == n) m = std::max(m, std::abs(k.second));
        return m;
    }
};

inline FTable expand_f_table(int qmax) {
    if (qmax < 0) throw CapTooLarge("qmax must be >= 0");
    BiSeries prod = BiSeries::one(qmax);
    for (int n = 1; n <= qmax + 1; ++n) {
        if (n - 1 <= qmax) bi_mul_binomial(prod, n - 1, 1, +1);
        if (n <= qmax) bi_mul_binomial(prod, n, -1, +1);
        if (2 * n - 1 <= qmax) {
            bi_mul_binomial(prod, 2 * n - 1, 2, -1);
            bi_mul_binomial(prod, 2 * n - 1, -2, -1);
        }
    }
    BiSeries sq = bi_mul(prod, prod);
    FTable t;
    t.qmax = qmax;
    for (const auto& [k, v] : sq.coeff) t.f[{k.first, k.second - 1}] = v;
    return t;
}

// ---------------------------------------------------------------------------
// Text serialization: header `ftable qmax=<N>`, then `n l f` per line in
// lexicographic order.
// ---------------------------------------------------------------------------

inline void write_ftable(std::ostream& os, const FTable& t) {
    os << "ftable qmax=" << t.qmax << "\n";
    for (const auto& [k, v] : t.f) os << k.first << " " << k.second << " " << v << "\n";
}

inline FTable read_ftable(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("ftable qmax=", 0) != 0)
        throw ParseError("bad ftable header");
    FTable t;
    t.qmax = std::stoi(header.substr(12));
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int n, l;
        std::string c;
        if (!(ls >> n >> l >> c)) throw ParseError("bad ftable line: " + line);
        t.f[{n, l}] = Int(c);
    }
    return t;
}

} // namespace paramod
