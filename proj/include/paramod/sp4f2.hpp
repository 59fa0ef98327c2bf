#pragma once

#include <algorithm>
#include <bitset>
#include <map>
#include <ostream>
#include <set>
#include <vector>

#include "paramod/elements.hpp"
#include "paramod/exact.hpp"
#include "paramod/f2.hpp"

namespace paramod {

// ---------------------------------------------------------------------------
// The finite symplectic group over F2: exhaustive enumeration of the 2^16
// candidate matrices, closure facts, derived subgroup, sign character.
// ---------------------------------------------------------------------------

struct FiniteGroupTable {
    std::vector<F2Matrix> elements;          // sorted by bit pattern
    std::map<std::uint16_t, int> index;      // bits -> ordinal
    std::vector<bool> derived_mask;          // ordinal -> in derived subgroup
    int derived_order = 0;

    bool contains(const F2Matrix& m) const { return index.count(m.bits) != 0; }
    int ordinal(const F2Matrix& m) const {
        auto it = index.find(m.bits);
        if (it == index.end()) throw NotInGroup();
        return it->second;
    }
    std::size_t size() const { return elements.size(); }
};

inline FiniteGroupTable enumerate_sp4f2() {
    FiniteGroupTable t;
    for (std::uint32_t bits = 0; bits < (1u << 16); ++bits) {
        F2Matrix m{std::uint16_t(bits)};
        if (f2_is_symplectic(m)) t.elements.push_back(m);
    }
    for (std::size_t i = 0; i < t.elements.size(); ++i) t.index[t.elements[i].bits] = int(i);

    // derived subgroup: closure of all commutators
    std::set<std::uint16_t> comms;
    for (const F2Matrix& a : t.elements) {
        F2Matrix ia = f2_inverse(a);
        for (const F2Matrix& b : t.elements)
            comms.insert((a * b * ia * f2_inverse(b)).bits);
    }
    std::set<std::uint16_t> group(comms);
    group.insert(F2Matrix::identity().bits);
    std::vector<std::uint16_t> frontier(group.begin(), group.end());
    while (!frontier.empty()) {
        std::vector<std::uint16_t> next;
        for (std::uint16_t x : frontier)
            for (std::uint16_t c : comms) {
                std::uint16_t y = (F2Matrix(x) * F2Matrix(c)).bits;
                if (group.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    t.derived_mask.assign(t.elements.size(), false);
    for (std::uint16_t x : group) t.derived_mask[std::size_t(t.ordinal(F2Matrix(x)))] = true;
    t.derived_order = int(group.size());
    return t;
}

inline std::vector<F2Matrix> derived_subgroup(const FiniteGroupTable& t) {
    std::vector<F2Matrix> out;
    for (std::size_t i = 0; i < t.elements.size(); ++i)
        if (t.derived_mask[i]) out.push_back(t.elements[i]);
    return out;
}

// +1 on the derived subgroup, -1 off it; the sign of the permutation image.
inline int sign_char(const F2Matrix& m, const FiniteGroupTable& t) {
    return t.derived_mask[std::size_t(t.ordinal(m))] ? +1 : -1;
}

inline std::vector<F2Matrix> centralizer(const F2Matrix& x, const FiniteGroupTable& t) {
    if (!t.contains(x)) throw NotInGroup();
    std::vector<F2Matrix> out;
    for (const F2Matrix& g : t.elements)
        if (g * x == x * g) out.push_back(g);
    return out;
}

inline int conjugacy_class_count(const FiniteGroupTable& t) {
    std::set<std::uint16_t> seen;
    int classes = 0;
    for (const F2Matrix& g : t.elements) {
        if (seen.count(g.bits)) continue;
        ++classes;
        for (const F2Matrix& h : t.elements) seen.insert((h * g * f2_inverse(h)).bits);
    }
    return classes;
}

// ---------------------------------------------------------------------------
// pi*: the reduction map extended across the nontrivial coset.  On integral
// elements it is reduction mod 2; on sqrt(p)-scaled ones g maps to
// mod2(g * Wtilde) * iota.
// ---------------------------------------------------------------------------

inline F2Matrix pi_star(const ScaledSymplecticMatrix& g) {
    SymplecticForm lam = SymplecticForm::lambda(g.p);
    if (!symplectic_check(g, lam)) throw NotInGammaStar("not Lambda_p-symplectic");
    if (g.scale_exp == 0) return mod2(g.m);
    ScaledSymplecticMatrix h = [&] {
        try {
            return mat_mul(g, make_wtilde(g.p));
        } catch (const ScaleOverflow&) {
            throw NotInGammaStar("g * Wtilde is not integral");
        }
    }();
    if (h.scale_exp != 0) throw NotInGammaStar();
    return mod2(h.m) * f2_iota();
}

// ---------------------------------------------------------------------------
// Mechanical replay of the uniqueness argument for the level-2 extension:
// (a) Wtilde commutes with h1 and h2 exactly;
// (b) the involutions commuting with mod2(h1), mod2(h2) are block-diagonal
//     with 2x2 involution blocks, four candidates in all (cross-checked by a
//     full scan of the 720 elements);
// (c) every candidate except iota is refuted by one of the two displayed
//     witnesses g via mod2(W g W) != w mod2(g) w;
// (d) the surviving candidate set is exactly {iota}.
// ---------------------------------------------------------------------------

struct UniquenessReport {
    long p = 3;
    bool h1_commutes = false;
    bool h2_commutes = false;
    std::vector<F2Matrix> narrowed_candidates;   // step (b), structural narrowing
    std::vector<F2Matrix> full_scan_candidates;  // step (b), brute force
    struct Exclusion {
        F2Matrix candidate;
        int witness = 0;  // 1 or 2: which displayed matrix refutes it
        F2Matrix lhs;     // mod2(W g W)
        F2Matrix rhs;     // w mod2(g) w
    };
    std::vector<Exclusion> exclusions;
    bool unique = false;

    friend std::ostream& operator<<(std::ostream& os, const UniquenessReport& r) {
        os << "uniqueness audit p=" << r.p << "\n";
        os << "  (a) Wtilde*h1 == h1*Wtilde: " << (r.h1_commutes ? "yes" : "NO") << "\n";
        os << "  (a) Wtilde*h2 == h2*Wtilde: " << (r.h2_commutes ? "yes" : "NO") << "\n";
        os << "  (b) block-diagonal involution candidates commuting with both images: "
           << r.narrowed_candidates.size() << " (full scan: " << r.full_scan_candidates.size()
           << ")\n";
        for (const auto& c : r.narrowed_candidates) os << "      " << c << "\n";
        for (const auto& ex : r.exclusions)
            os << "  (c) candidate " << ex.candidate << " refuted by witness " << ex.witness
               << ": mod2(WgW) = " << ex.lhs << " != " << ex.rhs << "\n";
        os << "  (d) surviving candidate set = {iota}: " << (r.unique ? "yes" : "NO") << "\n";
        return os;
    }
};

inline UniquenessReport uniqueness_audit(long p, const FiniteGroupTable& t) {
    require_odd_prime(p);
    UniquenessReport rep;
    rep.p = p;

    ScaledSymplecticMatrix w = make_wtilde(p), h1 = make_h1(p), h2 = make_h2(p);
    rep.h1_commutes = (mat_mul(w, h1) == mat_mul(h1, w));
    rep.h2_commutes = (mat_mul(w, h2) == mat_mul(h2, w));
    if (!rep.h1_commutes || !rep.h2_commutes) throw AuditFailed("step (a): centralizer witnesses");

    F2Matrix p1 = mod2(h1.m), p2 = mod2(h2.m);

    // the four 2x2 involutions over F2
    const int blocks[4][4] = {{1, 0, 0, 1}, {0, 1, 1, 0}, {1, 1, 0, 1}, {1, 0, 1, 1}};
    for (const auto& blk : blocks) {
        F2Matrix cand;
        // A in the upper block, D = A^T in the lower (forced by the form)
        cand.set(0, 0, blk[0]); cand.set(0, 1, blk[1]);
        cand.set(1, 0, blk[2]); cand.set(1, 1, blk[3]);
        cand.set(2, 2, blk[0]); cand.set(2, 3, blk[2]);
        cand.set(3, 2, blk[1]); cand.set(3, 3, blk[3]);
        if (!f2_is_symplectic(cand)) continue;
        if (cand * cand != F2Matrix::identity()) continue;
        if (cand * p1 != p1 * cand || cand * p2 != p2 * cand) continue;
        rep.narrowed_candidates.push_back(cand);
    }

    for (const F2Matrix& g : t.elements)
        if (g * g == F2Matrix::identity() && g * p1 == p1 * g && g * p2 == p2 * g)
            rep.full_scan_candidates.push_back(g);
    auto sorted = [](std::vector<F2Matrix> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    if (sorted(rep.narrowed_candidates) != sorted(rep.full_scan_candidates))
        throw AuditFailed("step (b): narrowed set differs from full scan");

    ScaledSymplecticMatrix ex1 = make_exclusion1(p), ex2 = make_exclusion2(p);
    SymplecticForm lam = SymplecticForm::lambda(p);
    if (!symplectic_check(ex1, lam) || !symplectic_check(ex2, lam))
        throw AuditFailed("step (c): witnesses are not in the integer group");

    F2Matrix iota = f2_iota();
    std::vector<F2Matrix> survivors;
    for (const F2Matrix& cand : rep.narrowed_candidates) {
        bool excluded = false;
        int which = 0;
        for (const ScaledSymplecticMatrix* ex : {&ex1, &ex2}) {
            ++which;
            ScaledSymplecticMatrix wgw = mat_mul(mat_mul(w, *ex), w);
            F2Matrix lhs = mod2(wgw.m);
            F2Matrix rhs = cand * mod2(ex->m) * cand;
            if (lhs != rhs) {
                rep.exclusions.push_back({cand, which, lhs, rhs});
                excluded = true;
                break;
            }
        }
        if (!excluded) survivors.push_back(cand);
    }
    rep.unique = (survivors.size() == 1 && survivors[0] == iota);
    if (!rep.unique) throw AuditFailed("step (d): surviving candidates != {iota}");
    return rep;
}

} // namespace paramod
