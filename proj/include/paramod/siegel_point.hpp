#pragma once

#include <array>
#include <complex>

#include "paramod/errors.hpp"
#include "paramod/exact.hpp"

namespace paramod {

using Cplx = std::complex<double>;

// A point of the degree-2 upper half-space: the symmetric matrix
// [tau1 tau2; tau2 tau3] with positive-definite imaginary part.
struct SiegelPoint {
    Cplx tau1, tau2, tau3;

    SiegelPoint() : tau1(0, 1), tau2(0, 0), tau3(0, 1) {}
    SiegelPoint(Cplx t1, Cplx t2, Cplx t3) : tau1(t1), tau2(t2), tau3(t3) {}

    double y1() const { return tau1.imag(); }
    double y2() const { return tau2.imag(); }
    double y3() const { return tau3.imag(); }

    bool valid() const { return y1() > 0 && y1() * y3() - y2() * y2() > 0; }
    double det_im() const { return y1() * y3() - y2() * y2(); }
};

// 4x4 real matrix used on the numeric side of the group action.
struct RealMat4 {
    std::array<double, 16> e{};
    double& operator()(int i, int j) { return e[4 * i + j]; }
    double operator()(int i, int j) const { return e[4 * i + j]; }

    static RealMat4 from(const ScaledSymplecticMatrix& g) {
        RealMat4 r;
        double s = g.scale_exp == 1 ? 1.0 / std::sqrt(double(g.p)) : 1.0;
        for (int i = 0; i < 16; ++i) r.e[i] = g.m.e[i].get_d() * s;
        return r;
    }
    static RealMat4 from(const QMat4& g) {
        RealMat4 r;
        for (int i = 0; i < 16; ++i) r.e[i] = g.e[i].get_d();
        return r;
    }
};

// tau -> (A tau + B)(C tau + D)^-1.  Returns the image point; det_out, when
// given, receives det(C tau + D).
inline SiegelPoint mobius_act(const RealMat4& g, const SiegelPoint& tau, Cplx* det_out = nullptr,
                              double singular_tol = 1e-12) {
    Cplx t1 = tau.tau1, t2 = tau.tau2, t3 = tau.tau3;
    // 2x2 blocks of g
    auto blk = [&](int bi, int bj, int i, int j) { return g(2 * bi + i, 2 * bj + j); };
    Cplx n00 = blk(0, 0, 0, 0) * t1 + blk(0, 0, 0, 1) * t2 + blk(0, 1, 0, 0);
    Cplx n01 = blk(0, 0, 0, 0) * t2 + blk(0, 0, 0, 1) * t3 + blk(0, 1, 0, 1);
    Cplx n10 = blk(0, 0, 1, 0) * t1 + blk(0, 0, 1, 1) * t2 + blk(0, 1, 1, 0);
    Cplx n11 = blk(0, 0, 1, 0) * t2 + blk(0, 0, 1, 1) * t3 + blk(0, 1, 1, 1);
    Cplx d00 = blk(1, 0, 0, 0) * t1 + blk(1, 0, 0, 1) * t2 + blk(1, 1, 0, 0);
    Cplx d01 = blk(1, 0, 0, 0) * t2 + blk(1, 0, 0, 1) * t3 + blk(1, 1, 0, 1);
    Cplx d10 = blk(1, 0, 1, 0) * t1 + blk(1, 0, 1, 1) * t2 + blk(1, 1, 1, 0);
    Cplx d11 = blk(1, 0, 1, 0) * t2 + blk(1, 0, 1, 1) * t3 + blk(1, 1, 1, 1);
    Cplx det = d00 * d11 - d01 * d10;
    if (det_out) *det_out = det;
    if (std::abs(det) < singular_tol) throw SingularDenominator();
    Cplx i00 = d11 / det, i01 = -d01 / det, i10 = -d10 / det, i11 = d00 / det;
    Cplx r1 = n00 * i00 + n01 * i10;
    Cplx r2a = n00 * i01 + n01 * i11;
    Cplx r2b = n10 * i00 + n11 * i10;
    Cplx r3 = n10 * i01 + n11 * i11;
    // symmetrize away roundoff
    return SiegelPoint(r1, 0.5 * (r2a + r2b), r3);
}

inline SiegelPoint mobius_act(const ScaledSymplecticMatrix& g, const SiegelPoint& tau) {
    if (!tau.valid()) throw SingularDenominator("tau is not in the upper half-space");
    return mobius_act(RealMat4::from(g), tau);
}

inline SiegelPoint mobius_act(const QMat4& g, const SiegelPoint& tau) {
    if (!tau.valid()) throw SingularDenominator("tau is not in the upper half-space");
    return mobius_act(RealMat4::from(g), tau);
}

} // namespace paramod
