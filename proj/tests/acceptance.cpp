// Acceptance suite: nine numbered criteria, one pass/fail line each.
// Exit status is the number of failures.

#include <complex>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "paramod/verify.hpp"

using namespace paramod;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, bool ok, const std::string& detail = "") {
    std::cout << "criterion " << number << " [" << label << "]: " << (ok ? "PASS" : "FAIL");
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << std::endl;
    if (!ok) ++failures;
}

bool near(const Cplx& z, const Cplx& w, double tol) { return std::abs(z - w) <= tol; }

}  // namespace

int main() {
    const unsigned long seed = 42;
    const double tol = 1e-4;

    // --- 1: exact group identities, p = 3 and 5 -----------------------------
    {
        bool ok = true;
        std::ostringstream note;
        for (long p : {3L, 5L}) {
            ScaledSymplecticMatrix w = make_wtilde(p);
            ok = ok && mat_mul(w, w) == ScaledSymplecticMatrix::identity(p);
            ScaledSymplecticMatrix v{make_vhat(p).m, 1, p};
            ScaledSymplecticMatrix v2 = mat_mul(v, v);
            ok = ok && v2.scale_exp == 0 &&
                 is_member(to_rational(v2.m), {Group::GammaCircle, Chart::Untilde, p});
            Sampler sampler(p, {seed, 10, {}});
            int good = 0;
            for (int i = 0; i < 1000; ++i) {
                ScaledSymplecticMatrix g = sampler.sample();
                if (is_member(mat_mul(mat_mul(w, g), w), {Group::GammaCircle, Chart::Tilde, p}))
                    ++good;
            }
            ok = ok && good == 1000;
            note << "p" << p << ":" << good << "/1000 ";
        }
        ok = ok && coset_equal(ScaledSymplecticMatrix{make_vhat(3).m, 1, 3}, make_vbar(3), 3,
                               Chart::Untilde);
        criterion(1, "exact group identities", ok, note.str() + "zero tolerance");
    }

    FiniteGroupTable table = enumerate_sp4f2();

    // --- 2: finite group enumeration ----------------------------------------
    {
        bool ok = table.size() == 720 && table.derived_order == 360 &&
                  sign_char(f2_iota(), table) == -1;
        std::ostringstream note;
        note << "order=" << table.size() << " derived=" << table.derived_order
             << " sign(iota)=" << sign_char(f2_iota(), table);
        criterion(2, "finite symplectic group", ok, note.str());
    }

    // --- 3: the extended reduction map is a homomorphism --------------------
    {
        long p = 3;
        ScaledSymplecticMatrix w = make_wtilde(p);
        F2Matrix iota = f2_iota();
        Sampler sampler(p, {seed + 1, 8, {}});
        std::vector<ScaledSymplecticMatrix> base, coset;
        for (int i = 0; i < 100; ++i) {
            base.push_back(sampler.sample());
            coset.push_back(mat_mul(sampler.sample(), w));
        }
        long pairs = 0;
        bool hom = true;
        for (int i = 0; i < 100; ++i)
            for (int j = 0; j < 100; ++j) {
                const auto& a = (j % 2 == 0) ? base[i] : coset[i];
                const auto& b = (i % 2 == 0) ? base[j] : coset[j];
                hom = hom && pi_star(mat_mul(a, b)) == pi_star(a) * pi_star(b);
                ++pairs;
            }
        bool conj = true, cosid = true;
        for (int i = 0; i < 1000; ++i) {
            const auto& g = base[i % 100];
            conj = conj && iota * pi_star(mat_mul(mat_mul(w, g), w)) * iota == pi_star(g);
            const auto& h = coset[i % 100];
            cosid = cosid && iota * pi_star(mat_mul(w, h)) == pi_star(mat_mul(h, w)) * iota;
        }
        std::ostringstream note;
        note << pairs << " pairs, 1000+1000 identity samples, exact";
        criterion(3, "reduction homomorphism", hom && conj && cosid, note.str());
    }

    // --- 4: uniqueness audit -------------------------------------------------
    {
        bool ok = true;
        std::ostringstream note;
        for (long p : {3L, 5L}) {
            try {
                UniquenessReport rep = uniqueness_audit(p, table);
                ok = ok && rep.unique && rep.h1_commutes && rep.h2_commutes;
                note << "p" << p << ":" << rep.narrowed_candidates.size() << " candidates -> iota  ";
            } catch (const Error& e) {
                ok = false;
                note << "p" << p << ": " << e.what();
            }
        }
        criterion(4, "extension uniqueness audit", ok, note.str());
    }

    // --- 5: coefficient table ------------------------------------------------
    {
        FTable t = expand_f_table(12);
        FTable o = expand_f_table_oracle(12);
        bool ok = t.at(0, -1) == 1 && t.at(0, 0) == 2 && t.at(0, 1) == 1 && t.f == o.f;
        std::ostringstream note;
        note << t.f.size() << " entries to qmax 12, bit-exact oracle match";
        criterion(5, "coefficient table", ok, note.str());
    }

    // --- 6: weight-1 expansion build ----------------------------------------
    {
        FTable f = expand_f_table(40);
        SiegelSeries d24 = build_delta1(24, f);
        SiegelSeries d30 = build_delta1(30, f);
        bool ok = cusp_leading_exponents(d24) == Key3{1, 1, 1} && d24.at(1, 1, 1) == 1 &&
                  same_series(d24, d30.truncated(24));
        bool integral_cone = true;
        for (const auto& [k, v] : d30.coeff)
            integral_cone = integral_cone && k[0] > 0 && k[2] > 0 &&
                            3L * k[1] * k[1] < 4L * k[0] * k[2];
        std::ostringstream note;
        note << d24.size() << " terms at cap 24, stable against cap 30";
        criterion(6, "weight-1 expansion", ok && integral_cone, note.str());
    }

    // --- 7: character numerics ----------------------------------------------
    RunConfig cfg;
    cfg.p = 3;
    cfg.seed = seed;
    cfg.samples = 1000;
    cfg.cap = 24;
    cfg.scan_cap = 120;
    cfg.tolerance = tol;
    {
        EvalOptions opt{Convention::WithI, tol};
        SiegelSeries d1 = cached_delta_power(cfg, cfg.scan_cap, 1);
        SiegelSeries d3 = cached_delta_power(cfg, cfg.scan_cap, 3);
        std::ostringstream note;
        bool ok = true;

        CharacterReport rv = scan_element_auto(d3, ScanElement(make_vbar(3), "vbar"), 3, 2, opt);
        ok = ok && rv.ok() && near(rv.ratio, Cplx(-1, 0), tol) && rv.spread <= tol;
        note << "vbar=" << std::setprecision(6) << rv.ratio.real();

        CharacterReport rk =
            scan_element_auto(d3, ScanElement(make_kappa_untilde(3), "kappa"), 3, 1, opt);
        ok = ok && rk.ok() && near(rk.ratio, Cplx(1, 0), tol) && rk.spread <= tol;
        note << " kappa=" << rk.ratio.real();

        Sampler s2(3, {seed + 20, 2, {}});
        ScanSamples lvl2 = scan_sampled_elements(d3, s2, Group::GammaCircleLevel2, 3, 1, 50, opt);
        bool l2ok = lvl2.reports.size() == 50;
        for (const auto& r : lvl2.reports)
            l2ok = l2ok && r.ok() && r.snapped == 0 && near(r.ratio, Cplx(1, 0), tol);
        ok = ok && l2ok;
        note << " level2=" << lvl2.reports.size() << "/50(skip " << lvl2.skipped << ")";

        Sampler s6(3, {seed + 21, 2, {}});
        ScanSamples full = scan_sampled_elements(d1, s6, Group::GammaCircle, 1, 6, 50, opt);
        bool c6ok = full.reports.size() == 50;
        bool primitive = false;
        for (const auto& r : full.reports) {
            c6ok = c6ok && r.ok() && r.spread <= tol;
            primitive = primitive || r.snapped == 1 || r.snapped == 5;
        }
        QMat4 t1 = to_rational(IMat4::identity());
        t1(0, 2) = 1;
        CharacterReport rt = scan_element_auto(d1, ScanElement(t1, "t1"), 1, 6, opt);
        primitive = primitive || (rt.ok() && (rt.snapped == 1 || rt.snapped == 5));
        ok = ok && c6ok && primitive;
        note << " order6=" << full.reports.size() << "/50(skip " << full.skipped << ")"
             << (primitive ? " primitive" : " NO-primitive");

        // multiplicativity of snapped values on 100 usable pairs
        Sampler sm(3, {seed + 22, 2, {}});
        int done = 0, attempts = 0;
        bool mult = true;
        while (done < 100 && attempts < 1200) {
            ++attempts;
            ScaledSymplecticMatrix a = sm.sample(Group::GammaCircle, 2);
            ScaledSymplecticMatrix b = sm.sample(Group::GammaCircle, 2);
            CharacterReport ra = scan_element_auto(d1, ScanElement(tilde_to_rational(a), ""), 1, 6, opt);
            CharacterReport rb = scan_element_auto(d1, ScanElement(tilde_to_rational(b), ""), 1, 6, opt);
            CharacterReport rab = scan_element_auto(
                d1, ScanElement(tilde_to_rational(mat_mul(a, b)), ""), 1, 6, opt);
            if (!ra.ok() || !rb.ok() || !rab.ok()) continue;
            mult = mult && (ra.snapped + rb.snapped) % 6 == rab.snapped;
            ++done;
        }
        ok = ok && mult && done == 100;
        note << " mult=" << done << "/100";
        criterion(7, "character numerics", ok, note.str());

        // --- 9: consistency with the permutation sign ------------------------
        Sampler sc(3, {seed + 23, 2, {}});
        ScanSamples cons = scan_sampled_elements(d3, sc, Group::GammaCircle, 3, 2, 50, opt);
        bool cok = cons.reports.size() == 50;
        for (std::size_t i = 0; i < cons.reports.size(); ++i) {
            const auto& r = cons.reports[i];
            int lhs = r.snapped == 0 ? +1 : -1;
            cok = cok && r.ok() && lhs == sign_char(mod2(cons.tilde[i].m), table);
        }
        std::ostringstream cnote;
        cnote << cons.reports.size() << "/50 elements (skip " << cons.skipped
              << "), numeric tol 1e-4, group side exact";

        // --- 8: dual period identity (printed in order) ----------------------
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-2.0, 2.0), v(0.5, 3.0), h(-0.5, 0.5);
        double worst = 0;
        for (long p : {3L, 5L})
            for (int i = 0; i < 20; ++i) {
                double y1 = v(rng), y3 = v(rng), y2 = h(rng) * std::sqrt(y1 * y3);
                SiegelPoint tau({u(rng), y1}, {u(rng), y2}, {u(rng), y3});
                worst = std::max(worst, dual_period_identity_residual(tau, p));
            }
        std::ostringstream dnote;
        dnote << "worst residual " << std::scientific << std::setprecision(2) << worst;
        criterion(8, "dual period identity", worst < 1e-12, dnote.str());

        criterion(9, "sign character consistency", cok, cnote.str());
    }

    std::cout << (failures == 0 ? "all criteria passed" : "FAILURES: " + std::to_string(failures))
              << std::endl;
    return failures;
}
