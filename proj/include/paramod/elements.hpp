#pragma once

#include <vector>

#include "paramod/exact.hpp"

namespace paramod {

// ---------------------------------------------------------------------------
// Distinguished elements.  Integer matrices live in the tilde chart unless
// noted; sqrt(p)-scaled ones are chart-tagged by the caller.
// ---------------------------------------------------------------------------

// Any solution of x*p - y = 1; the coset of the result does not depend on it.
inline ScaledSymplecticMatrix make_vhat_xy(long p, long x, long y) {
    require_odd_prime(p);
    if (x * p - y != 1) throw GeneratorInvalid("need x*p - y = 1");
    IMat4 m{Int(p) * x, Int(-1),     Int(0),      Int(0),
            Int(-y) * p, Int(p),     Int(0),      Int(0),
            Int(0),      Int(0),     Int(p),      Int(y) * p,
            Int(0),      Int(0),     Int(1),      Int(p) * x};
    return {m, 0, p};
}

// hat V_p with the fixed solution x = 1, y = p-1 (untilde chart; value sqrt(p)*V_p).
inline ScaledSymplecticMatrix make_vhat(long p) {
    return make_vhat_xy(p, 1, p - 1);
}

// The Fricke-type involution representative in the untilde chart, scale 1/sqrt(p).
inline ScaledSymplecticMatrix make_vbar(long p) {
    require_odd_prime(p);
    IMat4 m{Int(0), Int(1), Int(0), Int(0),
            Int(p), Int(0), Int(0), Int(0),
            Int(0), Int(0), Int(0), Int(p),
            Int(0), Int(0), Int(1), Int(0)};
    return {m, 1, p};
}

// W tilde = R_p Vbar_p R_p^-1, the tilde-chart involution.
inline ScaledSymplecticMatrix make_wtilde(long p) {
    require_odd_prime(p);
    IMat4 m{Int(0), Int(1), Int(0), Int(0),
            Int(p), Int(0), Int(0), Int(0),
            Int(0), Int(0), Int(0), Int(1),
            Int(0), Int(0), Int(p), Int(0)};
    return {m, 1, p};
}

// The integral factor of kappa: g with kappa = Wtilde * g, mod-2 image iota.
inline ScaledSymplecticMatrix make_kappa_factor(long p) {
    require_odd_prime(p);
    IMat4 m{Int(p - 1),            Int(2 - p), Int(0),              Int(0),
            Int(p),                Int(1 - p), Int(0),              Int(0),
            Int(0),                Int(0),     Int(p - 1),          Int(1),
            Int(0),                Int(0),     Int(p) * (2 - p),    Int(1 - p)};
    return {m, 0, p};
}

// kappa tilde = Wtilde * kappa_factor, a scale-1 generator of ker(pi*) over
// the level-2 subgroup.
inline ScaledSymplecticMatrix make_kappa(long p) {
    return mat_mul(make_wtilde(p), make_kappa_factor(p));
}

inline IMat4 make_rp(long p) {
    require_odd_prime(p);
    IMat4 m = IMat4::identity();
    m(3, 3) = p;
    return m;
}

// R_p^-1 kappa R_p, the untilde-chart generator used with the level-2 group.
inline ScaledSymplecticMatrix make_kappa_untilde(long p) {
    return untilde_conjugate(make_kappa(p));
}

// The two centralizer witnesses of the uniqueness argument.
inline ScaledSymplecticMatrix make_h1(long p) {
    require_odd_prime(p);
    IMat4 m{Int(1), Int(0), Int(0), Int(1),
            Int(0), Int(1), Int(p), Int(0),
            Int(0), Int(0), Int(1), Int(0),
            Int(0), Int(0), Int(0), Int(1)};
    return {m, 0, p};
}

inline ScaledSymplecticMatrix make_h2(long p) {
    require_odd_prime(p);
    IMat4 m{Int(1), Int(0), Int(0), Int(0),
            Int(0), Int(1), Int(0), Int(0),
            Int(0), Int(1), Int(1), Int(0),
            Int(p), Int(0), Int(0), Int(1)};
    return {m, 0, p};
}

// Exclusion witnesses: upper-block one kills the identity candidate, the
// other kills the two triangular candidates.
inline ScaledSymplecticMatrix make_exclusion1(long p) {
    require_odd_prime(p);
    IMat4 m{Int(1), Int(1), Int(0),  Int(0),
            Int(0), Int(1), Int(0),  Int(0),
            Int(0), Int(0), Int(1),  Int(0),
            Int(0), Int(0), Int(-p), Int(1)};
    return {m, 0, p};
}

inline ScaledSymplecticMatrix make_exclusion2(long p) {
    require_odd_prime(p);
    IMat4 m{Int(1), Int(0), Int(0), Int(0),
            Int(p), Int(1), Int(0), Int(0),
            Int(0), Int(0), Int(1), Int(-1),
            Int(0), Int(0), Int(0), Int(1)};
    return {m, 0, p};
}

// ---------------------------------------------------------------------------
// Default generator set for the tilde-chart integer group: the unipotent
// block matrices compatible with Lambda_p, GL-block embeddings with the
// p-divisible corner, -1, and the four displayed centralizer/exclusion
// witnesses.  Membership is verified by the sampler; completeness is not
// asserted.
// ---------------------------------------------------------------------------

inline std::vector<ScaledSymplecticMatrix> default_tilde_generators(long p) {
    require_odd_prime(p);
    std::vector<ScaledSymplecticMatrix> gens;
    auto add = [&](IMat4 m) { gens.push_back({std::move(m), 0, p}); };

    // upper unipotents [I B; 0 I], B = [b1 b2; p*b2 b4]
    add({Int(1), Int(0), Int(1), Int(0),
         Int(0), Int(1), Int(0), Int(0),
         Int(0), Int(0), Int(1), Int(0),
         Int(0), Int(0), Int(0), Int(1)});
    add({Int(1), Int(0), Int(0), Int(0),
         Int(0), Int(1), Int(0), Int(1),
         Int(0), Int(0), Int(1), Int(0),
         Int(0), Int(0), Int(0), Int(1)});
    add({Int(1), Int(0), Int(0), Int(1),
         Int(0), Int(1), Int(p), Int(0),
         Int(0), Int(0), Int(1), Int(0),
         Int(0), Int(0), Int(0), Int(1)});
    // lower unipotents [I 0; C I], C = [c1 c2; p*c2 c4]
    add({Int(1), Int(0), Int(0), Int(0),
         Int(0), Int(1), Int(0), Int(0),
         Int(1), Int(0), Int(1), Int(0),
         Int(0), Int(0), Int(0), Int(1)});
    add({Int(1), Int(0), Int(0), Int(0),
         Int(0), Int(1), Int(0), Int(0),
         Int(0), Int(0), Int(1), Int(0),
         Int(0), Int(1), Int(0), Int(1)});
    add({Int(1), Int(0), Int(0), Int(0),
         Int(0), Int(1), Int(0), Int(0),
         Int(0), Int(1), Int(1), Int(0),
         Int(p), Int(0), Int(0), Int(1)});
    // GL embeddings [U 0; 0 E U^-T E^-1]
    add({Int(1), Int(1), Int(0),  Int(0),
         Int(0), Int(1), Int(0),  Int(0),
         Int(0), Int(0), Int(1),  Int(0),
         Int(0), Int(0), Int(-p), Int(1)});
    add({Int(1), Int(0), Int(0), Int(0),
         Int(p), Int(1), Int(0), Int(0),
         Int(0), Int(0), Int(1), Int(-1),
         Int(0), Int(0), Int(0), Int(1)});
    add({Int(-1), Int(0), Int(0),  Int(0),
         Int(0),  Int(1), Int(0),  Int(0),
         Int(0),  Int(0), Int(-1), Int(0),
         Int(0),  Int(0), Int(0),  Int(1)});
    gens.push_back({-IMat4::identity(), 0, p});
    gens.push_back(make_h1(p));
    gens.push_back(make_h2(p));
    return gens;
}

} // namespace paramod
