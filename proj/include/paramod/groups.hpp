#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <vector>

#include "paramod/elements.hpp"
#include "paramod/exact.hpp"
#include "paramod/siegel_point.hpp"
#include "paramod/sp4f2.hpp"

namespace paramod {

// ---------------------------------------------------------------------------
// Group identifiers.  Tilde is the integer chart (the canonical one for all
// internal arithmetic); Untilde carries the p^-1 slot at (4,2).
// ---------------------------------------------------------------------------

enum class Group { GammaCircle, GammaCircleLevel2, GammaStar, GammaStarLevel2 };
enum class Chart { Tilde, Untilde };

struct GroupId {
    Group group = Group::GammaCircle;
    Chart chart = Chart::Tilde;
    long p = 3;
};

inline bool congruent_identity_mod2(const IMat4& m) {
    IMat4 d = m - IMat4::identity();
    return entrywise_divisible(d, Int(2));
}

// entry pattern of the untilde group: integers everywhere except the marked
// p-multiples and the p^-1 slot at (4,2)
inline bool untilde_pattern(const QMat4& g, long p) {
    static const int pmul[16] = {0, 0, 0, 1,
                                 1, 0, 1, 1,
                                 0, 0, 0, 1,
                                 0, 0, 0, 0};  // entries required divisible by p
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Rat& x = g(i, j);
            if (i == 3 && j == 1) {
                Rat px = x * p;  // x in p^-1 Z  <=>  p*x integral
                px.canonicalize();
                if (px.get_den() != 1) return false;
                continue;
            }
            if (x.get_den() != 1) return false;
            if (pmul[4 * i + j] && x.get_num() % p != 0) return false;
        }
    return true;
}

// g - 1 lies in 2 * (pattern), with 2p^-1 Z at (4,2)
inline bool untilde_level2_pattern(const QMat4& g, long p) {
    QMat4 d = g - to_rational(IMat4::identity());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Rat x = d(i, j);
            if (i == 3 && j == 1) {
                Rat px = x * p;
                px.canonicalize();
                if (px.get_den() != 1 || px.get_num() % 2 != 0) return false;
                continue;
            }
            if (x.get_den() != 1 || x.get_num() % 2 != 0) return false;
        }
    if (!untilde_pattern(g, p)) return false;
    // the 2p-divisible slots
    static const int pmul[16] = {0, 0, 0, 1,
                                 1, 0, 1, 1,
                                 0, 0, 0, 1,
                                 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (pmul[4 * i + j] && d(i, j).get_num() % (2 * p) != 0) return false;
    return true;
}

inline bool is_member(const ScaledSymplecticMatrix& g, const GroupId& id);

inline bool is_member(const QMat4& g, const GroupId& id) {
    if (id.chart != Chart::Untilde) {
        // a rational matrix may still be integral; delegate if so
        try {
            return is_member(ScaledSymplecticMatrix(to_integer(g), 0, id.p), id);
        } catch (const NonIntegral&) {
            throw ChartMismatch("rational matrix passed with tilde chart");
        }
    }
    switch (id.group) {
        case Group::GammaCircle:
            return untilde_pattern(g, id.p) && symplectic_check(g, SymplecticForm::standard_j());
        case Group::GammaCircleLevel2:
            return untilde_level2_pattern(g, id.p) &&
                   symplectic_check(g, SymplecticForm::standard_j());
        case Group::GammaStar:
        case Group::GammaStarLevel2: {
            // delegate to the tilde chart
            ScaledSymplecticMatrix t = rational_to_tilde(g, id.p);
            return is_member(t, {id.group, Chart::Tilde, id.p});
        }
    }
    return false;
}

inline bool is_member(const ScaledSymplecticMatrix& g, const GroupId& id) {
    if (g.p != id.p) throw ChartMismatch("p mismatch");
    if (id.chart == Chart::Untilde) {
        // conjugate into the tilde chart; scale-0 elements may also be tested
        // directly through the rational predicate
        if (g.scale_exp == 0 && (id.group == Group::GammaCircle || id.group == Group::GammaCircleLevel2))
            return is_member(to_rational(g.m), id);
        try {
            return is_member(tilde_conjugate(g), {id.group, Chart::Tilde, id.p});
        } catch (const NotConjugatable&) {
            return false;
        }
    }
    SymplecticForm lam = SymplecticForm::lambda(id.p);
    switch (id.group) {
        case Group::GammaCircle:
            return g.scale_exp == 0 && symplectic_check(g, lam);
        case Group::GammaCircleLevel2:
            return g.scale_exp == 0 && symplectic_check(g, lam) && congruent_identity_mod2(g.m);
        case Group::GammaStar: {
            if (!symplectic_check(g, lam)) return false;
            if (g.scale_exp == 0) return true;
            try {
                ScaledSymplecticMatrix h = mat_mul(make_wtilde(id.p), g);
                return h.scale_exp == 0 && symplectic_check(h, lam);
            } catch (const ScaleOverflow&) {
                return false;
            }
        }
        case Group::GammaStarLevel2: {
            if (!is_member(g, {Group::GammaStar, Chart::Tilde, id.p})) return false;
            return pi_star(g) == F2Matrix::identity();
        }
    }
    return false;
}

// a^-1 b in the base group of the chart
inline bool coset_equal(const ScaledSymplecticMatrix& a, const ScaledSymplecticMatrix& b, long p,
                        Chart chart = Chart::Untilde) {
    ScaledSymplecticMatrix at = chart == Chart::Untilde ? tilde_conjugate(a) : a;
    ScaledSymplecticMatrix bt = chart == Chart::Untilde ? tilde_conjugate(b) : b;
    SymplecticForm lam = SymplecticForm::lambda(p);
    ScaledSymplecticMatrix q = mat_mul(symplectic_inverse(at, lam), bt);
    return is_member(q, {Group::GammaCircle, Chart::Tilde, p});
}

// ---------------------------------------------------------------------------
// Deterministic random words over a membership-verified generator set.
// Level-2 elements are produced exactly: after drawing a word g, the mod-2
// image is cancelled by appending the inverse of a precomputed generator word
// for it (breadth-first table over the image group).
// ---------------------------------------------------------------------------

struct SamplerConfig {
    unsigned long seed = 42;
    int word_length = 10;
    std::vector<ScaledSymplecticMatrix> generators;  // empty: default set
};

class Sampler {
public:
    Sampler(long p, SamplerConfig cfg = {}) : p_(p), cfg_(std::move(cfg)), rng_(cfg_.seed) {
        if (cfg_.generators.empty()) cfg_.generators = default_tilde_generators(p);
        lam_ = SymplecticForm::lambda(p);
        for (const auto& g : cfg_.generators) {
            if (g.p != p || g.scale_exp != 0 || !symplectic_check(g, lam_))
                throw GeneratorInvalid("generator fails integer-chart membership");
            inverses_.push_back(symplectic_inverse(g, lam_));
        }
        build_word_table();
    }

    const std::vector<ScaledSymplecticMatrix>& generators() const { return cfg_.generators; }

    // random word of cfg.word_length generators/inverses
    ScaledSymplecticMatrix sample() { return sample_word(cfg_.word_length); }

    ScaledSymplecticMatrix sample_word(int length) {
        ScaledSymplecticMatrix g = ScaledSymplecticMatrix::identity(p_);
        for (int i = 0; i < length; ++i) {
            std::size_t k = pick(cfg_.generators.size());
            bool inv = pick(2) == 1;
            g = mat_mul(g, inv ? inverses_[k] : cfg_.generators[k]);
        }
        return g;
    }

    // congruent to the identity mod 2, exactly
    ScaledSymplecticMatrix sample_level2(int length = -1) {
        ScaledSymplecticMatrix g = sample_word(length < 0 ? cfg_.word_length : length);
        F2Matrix img = mod2(g.m);
        auto it = words_.find(img.bits);
        if (it == words_.end()) throw GeneratorInvalid("mod-2 image not reachable from generators");
        for (auto gi = it->second.rbegin(); gi != it->second.rend(); ++gi)
            g = mat_mul(g, inverses_[*gi]);
        return g;
    }

    ScaledSymplecticMatrix sample(Group grp, int length = -1) {
        if (grp == Group::GammaCircleLevel2) return sample_level2(length);
        if (grp == Group::GammaCircle) return sample_word(length < 0 ? cfg_.word_length : length);
        throw ChartMismatch("sampler draws from the integer-chart groups");
    }

    // number of distinct mod-2 images reachable from the generator set
    std::size_t image_order() const { return words_.size(); }

private:
    std::size_t pick(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
    }
    void build_word_table() {
        words_.clear();
        words_[F2Matrix::identity().bits] = {};
        std::deque<F2Matrix> queue{F2Matrix::identity()};
        std::vector<F2Matrix> imgs;
        for (const auto& g : cfg_.generators) imgs.push_back(mod2(g.m));
        while (!queue.empty()) {
            F2Matrix x = queue.front();
            queue.pop_front();
            for (std::size_t k = 0; k < imgs.size(); ++k) {
                F2Matrix y = x * imgs[k];
                if (words_.count(y.bits)) continue;
                auto w = words_[x.bits];
                w.push_back(k);
                words_[y.bits] = std::move(w);
                queue.push_back(y);
            }
        }
    }

    long p_;
    SamplerConfig cfg_;
    std::mt19937_64 rng_;
    SymplecticForm lam_;
    std::vector<ScaledSymplecticMatrix> inverses_;
    std::map<std::uint16_t, std::vector<std::size_t>> words_;
};

// ---------------------------------------------------------------------------
// The dual-abelian-surface period identity: swapping rows and columns of the
// dual period matrix [[p,0,p*tau1,tau2],[0,1,tau2,tau3/p]] exhibits the
// (1,p)-polarized normalized form (diag(1,p), Vbar_p(tau)).  Returns the max
// entrywise deviation, which should vanish to roundoff for every tau.
// ---------------------------------------------------------------------------

inline double dual_period_identity_residual(const SiegelPoint& tau, long p) {
    require_odd_prime(p);
    Cplx om[2][4] = {{Cplx(double(p)), Cplx(0), double(p) * tau.tau1, tau.tau2},
                     {Cplx(0), Cplx(1), tau.tau2, tau.tau3 / double(p)}};
    // left: swap the two rows, then swap columns (1,2) and (3,4)
    Cplx lhs[2][4];
    for (int j = 0; j < 4; ++j) {
        lhs[0][j] = om[1][j];
        lhs[1][j] = om[0][j];
    }
    for (auto& row : lhs) {
        std::swap(row[0], row[1]);
        std::swap(row[2], row[3]);
    }
    SiegelPoint img = mobius_act(make_vbar(p), tau);
    Cplx rhs[2][4] = {{Cplx(1), Cplx(0), img.tau1, img.tau2},
                      {Cplx(0), Cplx(double(p)), img.tau2, img.tau3}};
    double res = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) res = std::max(res, std::abs(lhs[i][j] - rhs[i][j]));
    return res;
}

} // namespace paramod
