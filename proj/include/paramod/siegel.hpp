#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "paramod/errors.hpp"
#include "paramod/jacobi.hpp"
#include "paramod/siegel_point.hpp"

namespace paramod {

// ---------------------------------------------------------------------------
// Truncated Fourier expansions on the degree-2 half-space.  A monomial key
// (a, b, c) stands for the term with exponent functional
//     2*pi*i * ( a*tau1/6 + b*tau2/6 + c*tau3/18 ),
// i.e. tr(T tau) with T = [a/6, b/12; b/12, c/18].  The truncation keeps
// a + 3c <= cap.  The weight-1 product has leading key (1,1,1); every stored
// key of a holomorphic cusp expansion satisfies a,c > 0 and 3*b^2 < 4*a*c
// (positive definite T).
//
// Exponent caveat: the r and s variables carry the lattice scalings 1/3 and
// 1/9 relative to e^{2*pi*i*tau_2}, e^{2*pi*i*tau_3}; with plain 1/2-weights
// on b and c the expansion is not stable under the group action (the slash
// ratios fail to be constant), so the scaled functional above is the one
// used everywhere.  The optional no-i mode drops the imaginary unit on the
// tau2 term to match the alternate printing of r; run-all records that this
// mode breaks constancy.
// ---------------------------------------------------------------------------

enum class Convention { WithI, NoI };

using Key3 = std::array<int, 3>;

struct SiegelSeries {
    int cap = 0;
    std::map<Key3, Int> coeff;

    Int at(int a, int b, int c) const {
        auto it = coeff.find({a, b, c});
        return it == coeff.end() ? Int(0) : it->second;
    }
    std::size_t size() const { return coeff.size(); }
    bool empty() const { return coeff.empty(); }

    void purge_zeros() {
        for (auto it = coeff.begin(); it != coeff.end();)
            it = (it->second == 0) ? coeff.erase(it) : std::next(it);
    }

    SiegelSeries truncated(int new_cap) const {
        SiegelSeries s;
        s.cap = new_cap;
        for (const auto& [k, v] : coeff)
            if (k[0] + 3 * k[2] <= new_cap) s.coeff[k] = v;
        return s;
    }

    // sum of |coefficient| per grade a+3c (used by the tail model)
    std::map<int, double> slice_sums() const {
        std::map<int, double> s;
        for (const auto& [k, v] : coeff) s[k[0] + 3 * k[2]] += std::abs(v.get_d());
        return s;
    }
};

inline bool same_series(const SiegelSeries& a, const SiegelSeries& b) { return a.coeff == b.coeff; }

// ---------------------------------------------------------------------------
// Construction of the weight-1 product expansion from the f-table:
//   prefactor (1,1,1), then one factor (1 - q^n r^l s^{3m})^{f(nm,l)} for
//   every (n, m) >= (0,0), l in Z (l < 0 when n = m = 0), taken over the
//   factors whose exponent step 6n + 18m fits under the cap.  Negative
//   exponents expand the reciprocal binomial as a truncated geometric sum.
// ---------------------------------------------------------------------------

namespace detail {

inline void mul_truncated(SiegelSeries& s, const std::vector<std::pair<Key3, Int>>& factor) {
    std::map<Key3, Int> out;
    for (const auto& [k1, v1] : s.coeff)
        for (const auto& [k2, v2] : factor) {
            Key3 k{k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]};
            if (k[0] + 3 * k[2] > s.cap) break;  // factor keys sorted by grade
            out[k] += v1 * v2;
        }
    s.coeff = std::move(out);
    s.purge_zeros();
}

// (1 - X)^e truncated, X the monomial with key step (da, db, dc)
inline std::vector<std::pair<Key3, Int>> binomial_factor(int da, int db, int dc, const Int& e,
                                                         int cap) {
    std::vector<std::pair<Key3, Int>> fac;
    int step = da + 3 * dc;
    long kmax;
    if (step == 0) {
        if (e < 0) throw CapTooLarge("reciprocal of a step-0 factor does not truncate");
        if (e > 4096) throw CapTooLarge("step-0 factor exponent out of range");
        kmax = e.get_si();
    } else {
        kmax = cap / step;
        if (e > 0 && e < kmax) kmax = e.get_si();
    }
    Int coef = 1;
    for (long k = 0; k <= kmax; ++k) {
        fac.push_back({{int(k) * da, int(k) * db, int(k) * dc}, coef});
        // next coefficient, sign folded in:
        //   e>0:  (-1)^{k+1} C(e,k+1) = coef * (k-e)/(k+1)
        //   e<0:  C(k-e, -e-1), the negative-binomial row, same recurrence
        coef = coef * (k - e) / (k + 1);
    }
    return fac;
}

} // namespace detail

inline SiegelSeries build_delta1(int cap, const FTable& f) {
    if (cap < 4) throw CapTooLarge("cap must be at least 4");
    if (cap > 2000) throw CapTooLarge("cap beyond the supported range");
    // every factor with step 6n+18m <= cap-4 can touch kept monomials
    int needed_nm = 0;
    for (int m = 1; 18 * m <= cap - 4; ++m) {
        int nmax = (cap - 4 - 18 * m) / 6;
        needed_nm = std::max(needed_nm, nmax * m);
    }
    if (f.qmax < needed_nm)
        throw FTableTooSmall("need f(n,l) through n=" + std::to_string(needed_nm));

    SiegelSeries s;
    s.cap = cap;
    s.coeff[{1, 1, 1}] = 1;
    for (int n = 0; 6 * n <= cap - 4; ++n) {
        for (int m = 0; 6 * n + 18 * m <= cap - 4; ++m) {
            int lcap = f.max_abs_l(n * m);
            for (int l = -lcap; l <= lcap; ++l) {
                if (n == 0 && m == 0 && l >= 0) continue;
                Int fe = f.at(n * m, l);
                if (fe == 0) continue;
                auto fac = detail::binomial_factor(6 * n, 2 * l, 6 * m, fe, cap);
                detail::mul_truncated(s, fac);
            }
        }
    }
    return s;
}

inline SiegelSeries series_power(const SiegelSeries& sr, int k) {
    if (k < 1) throw CapTooLarge("power must be >= 1");
    SiegelSeries out;
    out.cap = sr.cap;
    out.coeff[{0, 0, 0}] = 1;
    for (int i = 0; i < k; ++i) {
        std::map<Key3, Int> next;
        for (const auto& [k1, v1] : out.coeff)
            for (const auto& [k2, v2] : sr.coeff) {
                Key3 kk{k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]};
                if (kk[0] + 3 * kk[2] > sr.cap) continue;  // lex order, grade not monotone
                next[kk] += v1 * v2;
            }
        out.coeff = std::move(next);
        out.purge_zeros();
    }
    return out;
}

// minimal stored key under the truncation grading (grade, then lexicographic)
inline Key3 cusp_leading_exponents(const SiegelSeries& sr) {
    if (sr.empty()) throw PrecisionLoss("empty series has no leading exponents");
    auto best = sr.coeff.begin()->first;
    for (const auto& [k, v] : sr.coeff) {
        int ga = k[0] + 3 * k[2], gb = best[0] + 3 * best[2];
        if (ga < gb || (ga == gb && k < best)) best = k;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Evaluation with a tail estimate.
//
// Dropped terms have grade G > cap and (by the positive-definite support)
// satisfy tr(T Y) >= mu(G) where mu is the minimum of the linear functional
// over the support cone slice at grade G.  Coefficient mass per grade is
// extrapolated geometrically from the stored slices.  The estimate is a
// heuristic bound, not a proof: it assumes the empirical support cone and
// the extrapolated growth.
// ---------------------------------------------------------------------------

struct EvalOptions {
    Convention convention = Convention::WithI;
    double tolerance = 1e-4;  // relative
};

struct EvalResult {
    Cplx value{0.0, 0.0};
    double tail = 0.0;

    double relative_tail() const {
        double v = std::abs(value);
        if (v == 0) return tail == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        return tail / v;
    }
};

namespace detail {

// min over the grade-6 cone slice {a/6 = x, c/18 = z, x + 9z(z>=0, x>=0) = 1,
// b^2 <= 4ac/3} of the decay functional; negative means no decay at all.
inline double cone_quality(double y1, double y2, double y3) {
    double best = std::numeric_limits<double>::infinity();
    const int N = 720;
    for (int i = 0; i <= N; ++i) {
        double x = double(i) / N;
        double z = (1.0 - x) / 9.0;
        double v = x * y1 + z * y3 - 2.0 * std::sqrt(x * z) * std::abs(y2);
        best = std::min(best, v);
    }
    return best;
}

inline double tail_estimate(const std::map<int, double>& slices, int cap, double y1, double y2,
                            double y3) {
    if (slices.empty()) return 0.0;
    double q = cone_quality(y1, y2, y3);
    if (q <= 0) return std::numeric_limits<double>::infinity();
    // growth ratio per grade-6 step, taken from the upper half of the slices
    double smax = 0, rho = 1.0;
    for (const auto& [g, v] : slices) smax = std::max(smax, v);
    auto mid = slices.lower_bound((slices.begin()->first + slices.rbegin()->first) / 2);
    for (auto it = mid; it != slices.end(); ++it) {
        auto nx = std::next(it);
        if (nx == slices.end()) break;
        double steps = double(nx->first - it->first) / 6.0;
        if (it->second > 0) rho = std::max(rho, std::pow(nx->second / it->second, 1.0 / steps));
    }
    double decay = std::exp(-2.0 * M_PI * q);
    if (rho * decay >= 0.999) return std::numeric_limits<double>::infinity();
    int g0 = cap + 1;
    double lead = smax * std::pow(rho, double(g0 - slices.rbegin()->first) / 6.0) *
                  std::exp(-2.0 * M_PI * q * double(g0) / 6.0);
    return lead / (1.0 - rho * decay);
}

} // namespace detail

inline EvalResult evaluate_raw(const SiegelSeries& sr, const SiegelPoint& tau,
                               Convention conv = Convention::WithI) {
    EvalResult r;
    const Cplx twopii(0.0, 2.0 * M_PI);
    for (const auto& [k, v] : sr.coeff) {
        Cplx ex = twopii * (double(k[0]) * tau.tau1 / 6.0 + double(k[2]) * tau.tau3 / 18.0);
        if (conv == Convention::WithI)
            ex += twopii * (double(k[1]) * tau.tau2 / 6.0);
        else
            ex += 2.0 * M_PI * (double(k[1]) * tau.tau2 / 6.0);
        r.value += v.get_d() * std::exp(ex);
    }
    double y2eff = conv == Convention::WithI ? tau.y2() : -tau.tau2.real();
    r.tail = detail::tail_estimate(sr.slice_sums(), sr.cap, tau.y1(), y2eff, tau.y3());
    return r;
}

inline EvalResult evaluate(const SiegelSeries& sr, const SiegelPoint& tau,
                           const EvalOptions& opt = {}) {
    if (!tau.valid()) throw SingularDenominator("tau is not in the upper half-space");
    EvalResult r = evaluate_raw(sr, tau, opt.convention);
    if (sr.empty()) return r;
    if (!(r.relative_tail() <= opt.tolerance)) throw PrecisionLoss("tail exceeds tolerance");
    return r;
}

// F(g tau) / (det(C tau + D)^weight F(tau))
inline Cplx slash_ratio(const SiegelSeries& sr, const RealMat4& g, int weight,
                        const SiegelPoint& tau, const EvalOptions& opt = {}) {
    if (!tau.valid()) throw SingularDenominator("tau is not in the upper half-space");
    Cplx det;
    SiegelPoint img = mobius_act(g, tau, &det);
    if (!img.valid()) throw SingularDenominator("image left the upper half-space");
    EvalResult num = evaluate(sr, img, opt);
    EvalResult den = evaluate(sr, tau, opt);
    Cplx detw = std::pow(det, weight);
    if (std::abs(detw) == 0) throw SingularDenominator();
    return num.value / (detw * den.value);
}

inline Cplx slash_ratio(const SiegelSeries& sr, const ScaledSymplecticMatrix& g, int weight,
                        const SiegelPoint& tau, const EvalOptions& opt = {}) {
    return slash_ratio(sr, RealMat4::from(g), weight, tau, opt);
}
inline Cplx slash_ratio(const SiegelSeries& sr, const QMat4& g, int weight, const SiegelPoint& tau,
                        const EvalOptions& opt = {}) {
    return slash_ratio(sr, RealMat4::from(g), weight, tau, opt);
}

// ---------------------------------------------------------------------------
// Sample-point selection.  Both tau and g(tau) must sit where the truncated
// series is trustworthy; the selector scans a grid of imaginary parts (plus
// the real shift -C^-1 D when C is invertible), ranks candidates by the cone
// quality of the worse of the two points, and keeps the first `count` whose
// evaluated tails pass the tolerance.  The grid avoids tau2 = 0: the product
// vanishes there.
// ---------------------------------------------------------------------------

inline std::vector<SiegelPoint> select_sample_points(const SiegelSeries& sr, const RealMat4& g,
                                                     int count, const EvalOptions& opt = {}) {
    auto slices = sr.slice_sums();
    // real-part candidates
    std::vector<std::array<double, 3>> xs{{0, 0, 0}};
    double c00 = g(2, 0), c01 = g(2, 1), c10 = g(3, 0), c11 = g(3, 1);
    double detc = c00 * c11 - c01 * c10;
    if (std::abs(detc) > 1e-9) {
        double d00 = g(2, 2), d01 = g(2, 3), d10 = g(3, 2), d11 = g(3, 3);
        // X = -C^-1 D, symmetrized
        double i00 = c11 / detc, i01 = -c01 / detc, i10 = -c10 / detc, i11 = c00 / detc;
        double x00 = -(i00 * d00 + i01 * d10);
        double x01 = -(i00 * d01 + i01 * d11);
        double x10 = -(i10 * d00 + i11 * d10);
        double x11 = -(i10 * d01 + i11 * d11);
        xs.push_back({x00, 0.5 * (x01 + x10), x11});
    }
    struct Cand {
        double quality;
        SiegelPoint tau;
    };
    std::vector<Cand> cands;
    for (const auto& x : xs)
        for (double y1 = 0.5; y1 <= 8.0; y1 *= 1.55)
            for (double ratio = 0.8; ratio <= 110.0; ratio *= 1.75)
                for (double y2f : {-0.45, -0.2, 0.2, 0.45}) {
                    double y3 = y1 * ratio;
                    double y2 = y2f * std::sqrt(y1 * y3);
                    SiegelPoint tau(Cplx(x[0], y1), Cplx(x[1], y2), Cplx(x[2], y3));
                    if (!tau.valid()) continue;
                    SiegelPoint img;
                    try {
                        img = mobius_act(g, tau);
                    } catch (const SingularDenominator&) {
                        continue;
                    }
                    if (!img.valid()) continue;
                    double q = std::min(detail::cone_quality(tau.y1(), tau.y2(), tau.y3()),
                                        detail::cone_quality(img.y1(), img.y2(), img.y3()));
                    if (q <= 0) continue;
                    cands.push_back({q, tau});
                }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.quality > b.quality; });
    std::vector<SiegelPoint> out;
    for (const auto& c : cands) {
        if (out.size() >= std::size_t(count)) break;
        try {
            SiegelPoint img = mobius_act(g, c.tau);
            EvalResult a = evaluate_raw(sr, img, opt.convention);
            EvalResult b = evaluate_raw(sr, c.tau, opt.convention);
            double third = opt.tolerance / 3.0;
            if (a.relative_tail() <= third && b.relative_tail() <= third) out.push_back(c.tau);
        } catch (const Error&) {
            continue;
        }
    }
    if (out.size() < std::size_t(count))
        throw PrecisionLoss("no usable sample points at this cap");
    return out;
}

// ---------------------------------------------------------------------------
// Character scan: per element, slash ratios at several sample points must
// agree (constancy) and snap to a root of unity of the requested order.
// ---------------------------------------------------------------------------

struct ScanElement {
    RealMat4 g;
    std::string name;

    ScanElement(const ScaledSymplecticMatrix& m, std::string n = "")
        : g(RealMat4::from(m)), name(std::move(n)) {}
    ScanElement(const QMat4& m, std::string n = "") : g(RealMat4::from(m)), name(std::move(n)) {}
};

struct CharacterReport {
    std::string element;
    int weight = 0;
    Cplx ratio{0, 0};
    int snapped = -1;        // exponent k of e^{2 pi i k/order}, -1 = none
    double residual = 0;     // |ratio - snapped root|
    double spread = 0;       // max pairwise ratio deviation over the taus
    bool constant = false;
    bool usable = false;     // false: no sample points passed the tail check

    bool ok() const { return usable && constant && snapped >= 0; }
};

inline CharacterReport scan_element(const SiegelSeries& sr, const ScanElement& el, int weight,
                                    int order, const std::vector<SiegelPoint>& taus,
                                    const EvalOptions& opt = {}) {
    CharacterReport rep;
    rep.element = el.name;
    rep.weight = weight;
    std::vector<Cplx> ratios;
    for (const auto& tau : taus) {
        try {
            ratios.push_back(slash_ratio(sr, el.g, weight, tau, opt));
        } catch (const Error&) {
        }
    }
    if (ratios.size() < 2) return rep;
    rep.usable = true;
    rep.ratio = ratios.front();
    for (const Cplx& r : ratios)
        for (const Cplx& s : ratios) rep.spread = std::max(rep.spread, std::abs(r - s));
    rep.constant = rep.spread <= opt.tolerance;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < order; ++k) {
        Cplx root = std::polar(1.0, 2.0 * M_PI * double(k) / double(order));
        double d = std::abs(rep.ratio - root);
        if (d < best) {
            best = d;
            rep.snapped = k;
        }
    }
    rep.residual = best;
    if (best > opt.tolerance) rep.snapped = -1;
    return rep;
}

inline CharacterReport scan_element_auto(const SiegelSeries& sr, const ScanElement& el, int weight,
                                         int order, const EvalOptions& opt = {},
                                         int sample_count = 3) {
    std::vector<SiegelPoint> taus;
    try {
        taus = select_sample_points(sr, el.g, sample_count, opt);
    } catch (const PrecisionLoss&) {
        CharacterReport rep;
        rep.element = el.name;
        rep.weight = weight;
        return rep;  // unusable
    }
    return scan_element(sr, el, weight, order, taus, opt);
}

inline std::vector<CharacterReport> character_scan(const SiegelSeries& sr,
                                                   const std::vector<ScanElement>& elements,
                                                   int weight, int order,
                                                   const EvalOptions& opt = {}) {
    std::vector<CharacterReport> out;
    out.reserve(elements.size());
    for (const auto& el : elements) out.push_back(scan_element_auto(sr, el, weight, order, opt));
    return out;
}

// ---------------------------------------------------------------------------
// Serialization: `siegel cap=<C>` then `a b c coeff` per line, sorted keys.
// ---------------------------------------------------------------------------

inline void write_series(std::ostream& os, const SiegelSeries& sr) {
    os << "siegel cap=" << sr.cap << "\n";
    for (const auto& [k, v] : sr.coeff) os << k[0] << " " << k[1] << " " << k[2] << " " << v << "\n";
}

inline SiegelSeries read_series(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("siegel cap=", 0) != 0)
        throw ParseError("bad series header");
    SiegelSeries sr;
    sr.cap = std::stoi(header.substr(11));
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int a, b, c;
        std::string v;
        if (!(ls >> a >> b >> c >> v)) throw ParseError("bad series line: " + line);
        sr.coeff[{a, b, c}] = Int(v);
    }
    return sr;
}

} // namespace paramod
