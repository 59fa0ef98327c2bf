#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "paramod/elements.hpp"
#include "paramod/groups.hpp"
#include "paramod/siegel.hpp"

using namespace paramod;

namespace {

const FTable& ftab() {
    static FTable f = expand_f_table(40);
    return f;
}

SiegelSeries delta1_at(int cap) { return build_delta1(cap, ftab()); }

}  // namespace

TEST_CASE("product expansion, low order") {
    SiegelSeries d = delta1_at(16);
    SECTION("leading monomial") {
        CHECK(cusp_leading_exponents(d) == Key3{1, 1, 1});
        CHECK(d.at(1, 1, 1) == 1);
    }
    SECTION("lowest slice is the two-term difference") {
        CHECK(d.at(1, -1, 1) == -1);
        CHECK(d.at(1, 3, 1) == 0);
        CHECK(d.at(1, -3, 1) == 0);
    }
    SECTION("next slice, from a hand expansion") {
        // -(1-r^-1)(r + 2 + r^-1) against the prefactor
        CHECK(d.at(7, 3, 1) == -1);
        CHECK(d.at(7, 1, 1) == -1);
        CHECK(d.at(7, -1, 1) == 1);
        CHECK(d.at(7, -3, 1) == 1);
    }
    SECTION("third slice") {
        CHECK(d.at(13, -3, 1) == -1);
        CHECK(d.at(13, -1, 1) == 1);
        CHECK(d.at(13, 1, 1) == -1);
        CHECK(d.at(13, 3, 1) == 1);
    }
    SECTION("exactly the ten frozen terms at this cap") { CHECK(d.size() == 10); }
    SECTION("all keys on the unit lattice class") {
        for (const auto& [k, v] : d.coeff) {
            CHECK(((k[0] % 6) + 6) % 6 == 1);
            CHECK(((k[1] % 2) + 2) % 2 == 1);
            CHECK(((k[2] % 6) + 6) % 6 == 1);
        }
    }
    SECTION("positive definite support") {
        for (const auto& [k, v] : d.coeff) CHECK(3L * k[1] * k[1] < 4L * k[0] * k[2]);
    }
}

TEST_CASE("cube") {
    SiegelSeries d = delta1_at(16);
    SiegelSeries d3 = series_power(d, 3);
    SECTION("leading monomial of the cube") {
        CHECK(cusp_leading_exponents(d3) == Key3{3, 3, 3});
        CHECK(d3.at(3, 3, 3) == 1);
    }
    SECTION("binomial slice") {
        CHECK(d3.at(3, 1, 3) == -3);
        CHECK(d3.at(3, -1, 3) == 3);
        CHECK(d3.at(3, -3, 3) == -1);
    }
    SECTION("power equals iterated product") {
        SiegelSeries alt = d;
        {
            // d * d * d through the same truncated multiply
            SiegelSeries sq = series_power(d, 2);
            std::map<Key3, Int> out;
            for (const auto& [k1, v1] : sq.coeff)
                for (const auto& [k2, v2] : d.coeff) {
                    Key3 kk{k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]};
                    if (kk[0] + 3 * kk[2] > d.cap) continue;
                    out[kk] += v1 * v2;
                }
            alt.coeff = std::move(out);
            alt.purge_zeros();
        }
        CHECK(same_series(alt, d3));
    }
    SECTION("power of one is the series") { CHECK(same_series(series_power(d, 1), d)); }
}

TEST_CASE("truncation stability") {
    SiegelSeries small = delta1_at(24);
    SiegelSeries big = delta1_at(30);
    CHECK(same_series(small, big.truncated(24)));
    SiegelSeries bigger = delta1_at(36);
    CHECK(same_series(big, bigger.truncated(30)));
}

TEST_CASE("build preconditions") {
    FTable tiny = expand_f_table(0);
    CHECK_THROWS_AS(build_delta1(40, tiny), FTableTooSmall);
    CHECK_THROWS_AS(build_delta1(2, ftab()), CapTooLarge);
    CHECK_THROWS_AS(build_delta1(5000, ftab()), CapTooLarge);
}

TEST_CASE("evaluation") {
    SiegelSeries d = delta1_at(36);
    SECTION("large imaginary part is dominated by the lowest slice") {
        SiegelPoint tau(Cplx(0, 10), Cplx(0, 0), Cplx(0, 10));
        EvalResult r = evaluate(d, tau, {Convention::WithI, 1e-4});
        // the (1,±1,1) pair alone
        Cplx lead = std::exp(Cplx(0, 2 * M_PI) * (10.0 * Cplx(0, 1) / 6.0)) *
                        std::exp(Cplx(0, 2 * M_PI) * (10.0 * Cplx(0, 1) / 18.0)) -
                    std::exp(Cplx(0, 2 * M_PI) * (10.0 * Cplx(0, 1) / 6.0)) *
                        std::exp(Cplx(0, 2 * M_PI) * (10.0 * Cplx(0, 1) / 18.0));
        // with y2 = 0 the two b = ±1 terms have equal modulus and cancel to
        // the sine; compare against a direct two-term sum instead
        Cplx t1 = std::exp(Cplx(0, 2 * M_PI) *
                           (Cplx(0, 10) / 6.0 + Cplx(0, 0) / 6.0 + Cplx(0, 10) / 18.0));
        Cplx t2 = std::exp(Cplx(0, 2 * M_PI) *
                           (Cplx(0, 10) / 6.0 - Cplx(0, 0) / 6.0 + Cplx(0, 10) / 18.0));
        (void)lead;
        CHECK(std::abs(r.value - (t1 - t2)) <= 1e-12 + std::abs(r.value) * 1e-6);
    }
    SECTION("empty series evaluates to zero") {
        SiegelSeries e;
        e.cap = 12;
        SiegelPoint tau(Cplx(0, 2), Cplx(0, 0.3), Cplx(0, 6));
        EvalResult r = evaluate(e, tau);
        CHECK(r.value == Cplx(0, 0));
        CHECK(r.tail == 0.0);
    }
    SECTION("doubling the cap changes the value by less than the tail bound") {
        SiegelSeries big = delta1_at(72);
        SiegelPoint tau(Cplx(0, 1.2), Cplx(0, 0.4), Cplx(0, 4.0));
        EvalResult lo = evaluate_raw(d, tau);
        EvalResult hi = evaluate_raw(big, tau);
        CHECK(std::abs(lo.value - hi.value) <= lo.tail);
        CHECK(hi.tail < lo.tail);
    }
    SECTION("precision loss reported when the tail cannot be controlled") {
        SiegelPoint shallow(Cplx(0, 0.05), Cplx(0, 0.01), Cplx(0, 0.05));
        CHECK_THROWS_AS(evaluate(d, shallow, {Convention::WithI, 1e-4}), PrecisionLoss);
    }
}

TEST_CASE("slash ratios at small cap") {
    SiegelSeries d3 = series_power(delta1_at(48), 3);
    EvalOptions opt{Convention::WithI, 1e-4};
    SECTION("identity acts trivially") {
        SiegelPoint tau(Cplx(0, 2), Cplx(0, 0.5), Cplx(0, 9));
        Cplx r = slash_ratio(d3, ScaledSymplecticMatrix::identity(3), 3, tau, opt);
        CHECK(std::abs(r - Cplx(1, 0)) < 1e-10);
    }
    SECTION("the dual involution has ratio -1 at weight 3") {
        for (double t : {1.6, 2.0, 2.4}) {
            SiegelPoint tau(Cplx(0, t), Cplx(0, 0.35 * t), Cplx(0, 5 * t));
            Cplx r = slash_ratio(d3, make_vbar(3), 3, tau, opt);
            CHECK(std::abs(r - Cplx(-1, 0)) < 1e-4);
        }
    }
    SECTION("translation ratio is a primitive sixth root") {
        SiegelSeries d = delta1_at(48);
        QMat4 g = to_rational(IMat4::identity());
        g(0, 2) = 1;
        SiegelPoint tau(Cplx(0, 1.8), Cplx(0, 0.5), Cplx(0, 8));
        Cplx r = slash_ratio(d, g, 1, tau, opt);
        CHECK(std::abs(r - std::polar(1.0, M_PI / 3.0)) < 1e-6);
    }
}

TEST_CASE("sample point selection and scans") {
    SiegelSeries d = delta1_at(60);
    EvalOptions opt{Convention::WithI, 1e-4};
    SECTION("selector returns usable points for the dual involution") {
        auto taus = select_sample_points(d, RealMat4::from(make_vbar(3)), 3, opt);
        CHECK(taus.size() == 3);
        CharacterReport rep =
            scan_element(series_power(d, 3), ScanElement(make_vbar(3), "vbar"), 3, 2, taus, opt);
        CHECK(rep.ok());
        CHECK(rep.snapped == 1);  // -1 = e^{2 pi i / 2}
        CHECK(rep.residual < 1e-6);
    }
    SECTION("kappa conjugate snaps to +1 at weight 3") {
        CharacterReport rep = scan_element_auto(series_power(d, 3),
                                                ScanElement(make_kappa_untilde(3), "ku"), 3, 1, opt);
        CHECK(rep.ok());
        CHECK(rep.snapped == 0);
        CHECK(rep.residual < 1e-6);
    }
    SECTION("constancy failure is reported, not silently snapped") {
        // no-i convention breaks the translation in the tau2 slot
        QMat4 g = to_rational(IMat4::identity());
        g(0, 3) = 3;
        g(1, 2) = 3;
        EvalOptions noi{Convention::NoI, 1e-4};
        CharacterReport rep = scan_element_auto(d, ScanElement(g, "t2"), 1, 6, noi);
        CHECK_FALSE(rep.ok());
    }
}

TEST_CASE("cusp leading exponents") {
    SiegelSeries d = delta1_at(16);
    CHECK(cusp_leading_exponents(d) == Key3{1, 1, 1});
    CHECK(cusp_leading_exponents(series_power(d, 3)) == Key3{3, 3, 3});
    SiegelSeries one;
    one.cap = 6;
    one.coeff[{0, 0, 0}] = 1;
    CHECK(cusp_leading_exponents(one) == Key3{0, 0, 0});
    SiegelSeries empty;
    CHECK_THROWS_AS(cusp_leading_exponents(empty), PrecisionLoss);
}

TEST_CASE("series serialization") {
    SiegelSeries d = delta1_at(24);
    std::stringstream ss;
    write_series(ss, d);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "siegel cap=24");
    ss.seekg(0);
    SiegelSeries u = read_series(ss);
    CHECK(u.cap == 24);
    CHECK(same_series(u, d));
}

namespace {

// independent build: factors gathered first, multiplied in reverse order,
// binomials expanded by repeated squaring-free accumulation
SiegelSeries delta1_reversed(int cap, const FTable& f) {
    struct Fac {
        int n, l, m;
        long e;
    };
    std::vector<Fac> facs;
    for (int n = 0; 6 * n <= cap - 4; ++n)
        for (int m = 0; 6 * n + 18 * m <= cap - 4; ++m) {
            int lcap = f.max_abs_l(n * m);
            for (int l = -lcap; l <= lcap; ++l) {
                if (n == 0 && m == 0 && l >= 0) continue;
                Int fe = f.at(n * m, l);
                if (fe != 0) facs.push_back({n, l, m, fe.get_si()});
            }
        }
    SiegelSeries s;
    s.cap = cap;
    s.coeff[{1, 1, 1}] = 1;
    for (auto it = facs.rbegin(); it != facs.rend(); ++it) {
        // (1 - X)^e as repeated single-binomial multiplications when e > 0,
        // else the truncated geometric expansion
        int da = 6 * it->n, db = 2 * it->l, dc = 6 * it->m;
        if (it->e > 0) {
            for (long rep = 0; rep < it->e; ++rep) {
                std::map<Key3, Int> out;
                for (const auto& [k, v] : s.coeff) {
                    out[k] += v;
                    Key3 kk{k[0] + da, k[1] + db, k[2] + dc};
                    if (kk[0] + 3 * kk[2] <= cap) out[kk] -= v;
                }
                s.coeff = std::move(out);
                s.purge_zeros();
            }
        } else {
            auto fac = paramod::detail::binomial_factor(da, db, dc, Int(it->e), cap);
            paramod::detail::mul_truncated(s, fac);
        }
    }
    return s;
}

}  // namespace

TEST_CASE("coefficients are independent of factor order") {
    const FTable& f = ftab();
    SiegelSeries forward = build_delta1(30, f);
    SiegelSeries reversed = delta1_reversed(30, f);
    CHECK(same_series(forward, reversed));
    std::stringstream a, b;
    write_series(a, forward);
    write_series(b, reversed);
    CHECK(a.str() == b.str());
}
