#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

#include "paramod/groups.hpp"
#include "paramod/jacobi.hpp"
#include "paramod/siegel.hpp"
#include "paramod/sp4f2.hpp"

namespace paramod {

// ---------------------------------------------------------------------------
// Batch verification: every check is a named pass/fail record; a run is a
// deterministic function of its configuration.
// ---------------------------------------------------------------------------

struct RunConfig {
    long p = 3;
    unsigned long seed = 42;
    int samples = 1000;
    int cap = 24;           // coefficient-level build cap
    int scan_cap = 120;     // cap for slash-ratio numerics
    double tolerance = 1e-4;
    Convention convention = Convention::WithI;
    std::string out_dir;    // series cache directory; empty = no caching

    void validate() const {
        require_odd_prime(p);
        if (tolerance <= 0) throw CapTooLarge("tolerance must be positive");
        if (cap < 6) throw CapTooLarge("cap must be at least 6");
        if (samples < 1) throw CapTooLarge("samples must be >= 1");
    }
};

enum class Status { Pass, Fail, Skip };

struct CheckResult {
    std::string name;
    Status status = Status::Fail;
    std::string measured;
    std::string expected;
    std::string tolerance;
    std::string note;  // the identity or property being checked

    static CheckResult make(std::string name, bool ok, std::string measured = "",
                            std::string expected = "", std::string tol = "", std::string note = "") {
        return {std::move(name), ok ? Status::Pass : Status::Fail, std::move(measured),
                std::move(expected), std::move(tol), std::move(note)};
    }
};

using Report = std::vector<CheckResult>;

inline const char* status_str(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        default: return "skip";
    }
}

inline void print_report(std::ostream& os, const Report& rep) {
    for (const auto& c : rep) {
        os << "check=" << c.name << " status=" << status_str(c.status);
        if (!c.measured.empty()) os << " measured=" << c.measured;
        if (!c.expected.empty()) os << " expected=" << c.expected;
        if (!c.tolerance.empty()) os << " tol=" << c.tolerance;
        if (!c.note.empty()) os << " note=\"" << c.note << "\"";
        os << "\n";
    }
}

inline int failed_count(const Report& rep) {
    int n = 0;
    for (const auto& c : rep)
        if (c.status == Status::Fail) ++n;
    return n;
}

namespace detail {

template <class F>
void guarded(Report& rep, const std::string& name, F&& body) {
    try {
        body();
    } catch (const Error& e) {
        rep.push_back({name, Status::Fail, "", "", "", std::string("exception: ") + e.what()});
    }
}

inline std::string cplx_str(const Cplx& z) {
    std::ostringstream os;
    os << std::setprecision(10) << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Independent route for the f-table: same identity, different evaluation
// order (one full pass per factor kind instead of interleaving by n), wider
// working window, and the square computed as a convolution of the final
// table rather than with the incremental binomials.
// ---------------------------------------------------------------------------

inline FTable expand_f_table_oracle(int qmax) {
    const int window = 2 * (qmax + 4) + 8;
    using Table = std::map<std::pair<int, int>, Int>;
    auto mul_binomial = [&](Table& t, int dq, int dl, int sign) {
        Table add;
        for (const auto& [k, v] : t) {
            int n = k.first + dq, l = k.second + dl;
            if (n > qmax || std::abs(l) > window) continue;
            if (sign > 0)
                add[{n, l}] += v;
            else
                add[{n, l}] -= v;
        }
        for (auto& [k, v] : add) {
            Int& slot = t[k];
            slot += v;
            if (slot == 0) t.erase(k);
        }
    };
    Table prod;
    prod[{0, 0}] = 1;
    for (int n = qmax + 1; n >= 1; --n)
        if (n - 1 <= qmax) mul_binomial(prod, n - 1, 1, +1);
    for (int n = qmax + 1; n >= 1; --n)
        if (n <= qmax) mul_binomial(prod, n, -1, +1);
    for (int n = qmax + 1; n >= 1; --n)
        if (2 * n - 1 <= qmax) mul_binomial(prod, 2 * n - 1, 2, -1);
    for (int n = qmax + 1; n >= 1; --n)
        if (2 * n - 1 <= qmax) mul_binomial(prod, 2 * n - 1, -2, -1);
    Table sq;
    for (const auto& [ka, va] : prod)
        for (const auto& [kb, vb] : prod) {
            int n = ka.first + kb.first;
            if (n > qmax) break;
            sq[{n, ka.second + kb.second}] += va * vb;
        }
    FTable t;
    t.qmax = qmax;
    for (const auto& [k, v] : sq)
        if (v != 0) t.f[{k.first, k.second - 1}] = v;
    return t;
}

// ---------------------------------------------------------------------------
// Series cache keyed by (kind, cap, convention); the convention does not
// change coefficients, only evaluation, but it is part of the key so cached
// reports stay self-describing.
// ---------------------------------------------------------------------------

inline SiegelSeries cached_delta_power(const RunConfig& cfg, int cap, int power) {
    namespace fs = std::filesystem;
    std::string name = "delta1pow" + std::to_string(power) + "-cap" + std::to_string(cap) + "-" +
                       (cfg.convention == Convention::WithI ? "i" : "noi") + ".txt";
    fs::path path;
    if (!cfg.out_dir.empty()) {
        path = fs::path(cfg.out_dir) / name;
        if (fs::exists(path)) {
            std::ifstream in(path);
            SiegelSeries s = read_series(in);
            if (s.cap == cap && !s.empty()) return s;
        }
    }
    int need = 0;
    for (int m = 1; 18 * m <= cap - 4; ++m)
        need = std::max(need, m * ((cap - 4 - 18 * m) / 6));
    FTable f = expand_f_table(need);
    SiegelSeries d1 = build_delta1(cap, f);
    SiegelSeries s = power == 1 ? d1 : series_power(d1, power);
    if (!cfg.out_dir.empty()) {
        fs::create_directories(path.parent_path());
        std::ofstream out(path);
        write_series(out, s);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Phase 1+2: exact matrix arithmetic and group identities.
// ---------------------------------------------------------------------------

inline Report check_group_identities(const RunConfig& cfg) {
    Report rep;
    for (long p : {3L, 5L}) {
        SymplecticForm lam = SymplecticForm::lambda(p);
        std::string sp = "p" + std::to_string(p);

        ScaledSymplecticMatrix w = make_wtilde(p);
        rep.push_back(CheckResult::make("wtilde-squared-" + sp,
                                        mat_mul(w, w) == ScaledSymplecticMatrix::identity(p), "", "",
                                        "exact", "W^2 = 1"));

        ScaledSymplecticMatrix v = make_vhat(p);
        ScaledSymplecticMatrix vscaled{v.m, 1, p};
        ScaledSymplecticMatrix v2 = mat_mul(vscaled, vscaled);
        bool v2ok = v2.scale_exp == 0 &&
                    is_member(to_rational(v2.m), {Group::GammaCircle, Chart::Untilde, p});
        rep.push_back(CheckResult::make("fricke-squared-in-group-" + sp, v2ok, "", "", "exact",
                                        "V^2 in the base group"));

        rep.push_back(CheckResult::make(
            "coset-v-vbar-" + sp, coset_equal(vscaled, make_vbar(p), p, Chart::Untilde), "", "",
            "exact", "V and Vbar generate the same coset"));
        // a second solution of x*p - y = 1 gives the same coset
        ScaledSymplecticMatrix v4{make_vhat_xy(p, 4, 4 * p - 1).m, 1, p};
        rep.push_back(CheckResult::make("coset-xy-choice-" + sp,
                                        coset_equal(vscaled, v4, p, Chart::Untilde), "", "", "exact",
                                        "coset independent of the (x,y) solution"));

        ScaledSymplecticMatrix kappa = make_kappa(p);
        ScaledSymplecticMatrix winv = symplectic_inverse(w, lam);
        ScaledSymplecticMatrix wk = mat_mul(winv, kappa);
        bool kap_ok = wk.scale_exp == 0 && is_member(wk, {Group::GammaCircle, Chart::Tilde, p}) &&
                      mod2(wk.m) == f2_iota();
        rep.push_back(CheckResult::make("kappa-decomposition-" + sp, kap_ok, "", "", "exact",
                                        "W^-1 kappa integral with image iota"));

        Sampler sampler(p, {cfg.seed, 10, {}});
        bool norm_ok = true, hkw_ok = true, index2_ok = true, closure_ok = true;
        for (int i = 0; i < cfg.samples; ++i) {
            ScaledSymplecticMatrix g = sampler.sample();
            ScaledSymplecticMatrix conj = mat_mul(mat_mul(w, g), w);
            norm_ok = norm_ok && is_member(conj, {Group::GammaCircle, Chart::Tilde, p});
            // block (2,1) entries vanish mod p in the integer chart
            for (int bi : {0, 1})
                for (int bj : {0, 1}) hkw_ok = hkw_ok && g.m(2 * bi + 1, 2 * bj) % p == 0;
            ScaledSymplecticMatrix star = (i % 2 == 0) ? g : mat_mul(w, g);
            bool in0 = is_member(star, {Group::GammaCircle, Chart::Tilde, p});
            bool in1 = is_member(mat_mul(w, star), {Group::GammaCircle, Chart::Tilde, p});
            index2_ok = index2_ok && (in0 != in1);
            closure_ok = closure_ok && symplectic_check(star, lam);
        }
        rep.push_back(CheckResult::make("fricke-normalizes-" + sp, norm_ok,
                                        std::to_string(cfg.samples) + " samples", "", "exact",
                                        "W g W stays in the integer group"));
        rep.push_back(CheckResult::make("hkw-divisibility-" + sp, hkw_ok, "", "", "exact",
                                        "block (2,1) entries divisible by p"));
        rep.push_back(CheckResult::make("index-two-" + sp, index2_ok, "", "", "exact",
                                        "exactly one of g, Wg in the base group"));
        rep.push_back(CheckResult::make("star-closure-" + sp, closure_ok, "", "", "exact",
                                        "random words stay Lambda_p-symplectic"));
    }

    // product of form-preserving matrices is form-preserving (both forms)
    {
        Sampler sampler(cfg.p, {cfg.seed + 1, 8, {}});
        SymplecticForm lam = SymplecticForm::lambda(cfg.p);
        bool ok = true;
        for (int i = 0; i < cfg.samples; ++i) {
            ScaledSymplecticMatrix a = sampler.sample(), b = sampler.sample();
            ok = ok && symplectic_check(mat_mul(a, b), lam);
        }
        rep.push_back(CheckResult::make("symplectic-closure", ok, std::to_string(cfg.samples),
                                        "", "exact", "form preserved under products"));
    }

    // literal round trip
    {
        Sampler sampler(cfg.p, {cfg.seed + 2, 6, {}});
        bool ok = true;
        for (int i = 0; i < 50; ++i) {
            ScaledSymplecticMatrix g = sampler.sample();
            if (i % 3 == 0) g = mat_mul(g, make_wtilde(cfg.p));
            ok = ok && parse_literal(to_literal(g), cfg.p) == g;
        }
        rep.push_back(
            CheckResult::make("literal-round-trip", ok, "", "", "exact", "parse(print(g)) = g"));
    }

    // Moebius action composes; numeric check
    {
        Sampler sampler(cfg.p, {cfg.seed + 3, 4, {}});
        double worst = 0;
        std::vector<SiegelPoint> taus = {SiegelPoint({0, 1.2}, {0.1, 0.2}, {0, 1.7}),
                                         SiegelPoint({-0.4, 2.0}, {0, -0.3}, {0.3, 2.4})};
        for (int i = 0; i < 50; ++i) {
            ScaledSymplecticMatrix g = sampler.sample(), h = sampler.sample();
            QMat4 gu = tilde_to_rational(g), hu = tilde_to_rational(h);
            QMat4 gh = gu * hu;
            for (const auto& tau : taus) {
                SiegelPoint lhs = mobius_act(gh, tau);
                SiegelPoint rhs = mobius_act(gu, mobius_act(hu, tau));
                worst = std::max({worst, std::abs(lhs.tau1 - rhs.tau1),
                                  std::abs(lhs.tau2 - rhs.tau2), std::abs(lhs.tau3 - rhs.tau3)});
            }
        }
        std::ostringstream m;
        m << std::scientific << std::setprecision(2) << worst;
        rep.push_back(CheckResult::make("moebius-composition", worst < 1e-10, m.str(), "<1e-10",
                                        "1e-10", "group action up to roundoff"));
    }

    // dual period identity
    {
        std::mt19937_64 rng(cfg.seed + 4);
        std::uniform_real_distribution<double> u(-2.0, 2.0), v(0.5, 3.0), w01(-0.5, 0.5);
        double worst = 0;
        for (long p : {3L, 5L})
            for (int i = 0; i < 20; ++i) {
                double y1 = v(rng), y3 = v(rng), y2 = w01(rng) * std::sqrt(y1 * y3);
                SiegelPoint tau({u(rng), y1}, {u(rng), y2}, {u(rng), y3});
                worst = std::max(worst, dual_period_identity_residual(tau, p));
            }
        std::ostringstream m;
        m << std::scientific << std::setprecision(2) << worst;
        rep.push_back(CheckResult::make("dual-period-identity", worst < 1e-12, m.str(), "<1e-12",
                                        "1e-12", "dual period matrix is (1,p)-normalized"));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Phase 3: the extended reduction map is a homomorphism.
// ---------------------------------------------------------------------------

inline Report check_reduction_hom(const RunConfig& cfg) {
    Report rep;
    long p = cfg.p;
    ScaledSymplecticMatrix w = make_wtilde(p);
    F2Matrix iota = f2_iota();

    Sampler sampler(p, {cfg.seed + 10, 8, {}});
    int pool_sz = 100;
    std::vector<ScaledSymplecticMatrix> pool0, pool1;
    for (int i = 0; i < pool_sz; ++i) {
        pool0.push_back(sampler.sample());
        pool1.push_back(mat_mul(sampler.sample(), w));
    }

    detail::guarded(rep, "reduction-hom", [&] {
        bool ok = true;
        long count = 0;
        for (int i = 0; i < pool_sz && ok; ++i)
            for (int j = 0; j < pool_sz && ok; ++j) {
                const auto& a = (j % 2 == 0) ? pool0[i] : pool1[i];
                const auto& b = (i % 2 == 0) ? pool0[j] : pool1[j];
                ok = ok && pi_star(mat_mul(a, b)) == pi_star(a) * pi_star(b);
                ++count;
            }
        rep.push_back(CheckResult::make("reduction-hom", ok, std::to_string(count) + " pairs", "",
                                        "exact", "extended map is multiplicative on both cosets"));
    });

    detail::guarded(rep, "conjugation-identity", [&] {
        bool ok = true;
        for (int i = 0; i < 1000; ++i) {
            const auto& g = pool0[i % pool_sz];
            ok = ok && iota * pi_star(mat_mul(mat_mul(w, g), w)) * iota == pi_star(g);
        }
        rep.push_back(CheckResult::make("conjugation-identity", ok, "1000 samples", "", "exact",
                                        "iota pi*(W g W) iota = pi*(g)"));
    });

    detail::guarded(rep, "coset-identity", [&] {
        bool ok = true;
        for (int i = 0; i < 1000; ++i) {
            const auto& h = pool1[i % pool_sz];
            ok = ok && iota * pi_star(mat_mul(w, h)) == pi_star(mat_mul(h, w)) * iota;
        }
        rep.push_back(CheckResult::make("coset-identity", ok, "1000 samples", "", "exact",
                                        "iota pi*(W h) = pi*(h W) iota off the base group"));
    });

    detail::guarded(rep, "kernel-is-level2", [&] {
        bool ok = true;
        for (int i = 0; i < 200; ++i) {
            ScaledSymplecticMatrix g = sampler.sample();
            ok = ok && ((pi_star(g) == F2Matrix::identity()) == congruent_identity_mod2(g.m));
            ScaledSymplecticMatrix g2 = sampler.sample_level2();
            ok = ok && pi_star(g2) == F2Matrix::identity();
        }
        rep.push_back(CheckResult::make("kernel-is-level2", ok, "200+200 samples", "", "exact",
                                        "kernel meets the base group in the level-2 subgroup"));
    });

    rep.push_back(CheckResult::make("reduction-surjective", sampler.image_order() == 720,
                                    std::to_string(sampler.image_order()), "720", "exact",
                                    "generator images generate the full finite group"));
    return rep;
}

// ---------------------------------------------------------------------------
// Phase 4: finite group facts and the uniqueness audit.
// ---------------------------------------------------------------------------

inline Report check_finite_group(const RunConfig& cfg, const FiniteGroupTable& table) {
    Report rep;
    rep.push_back(CheckResult::make("sp4f2-order", table.size() == 720,
                                    std::to_string(table.size()), "720", "exact",
                                    "brute-force enumeration over 2^16 matrices"));
    rep.push_back(CheckResult::make("derived-order", table.derived_order == 360,
                                    std::to_string(table.derived_order), "360", "exact",
                                    "commutator closure"));
    rep.push_back(CheckResult::make("sign-iota", sign_char(f2_iota(), table) == -1,
                                    std::to_string(sign_char(f2_iota(), table)), "-1", "exact",
                                    "the double swap is odd"));

    // Every normal closure of a nontrivial element is either the whole group
    // or the derived subgroup, so the derived subgroup is the one and only
    // index-2 subgroup.  Closures depend only on the conjugacy class.
    detail::guarded(rep, "unique-index-two", [&] {
        bool ok = true;
        std::set<std::uint16_t> seen;
        int closures = 0;
        for (const F2Matrix& x : table.elements) {
            if (x == F2Matrix::identity() || seen.count(x.bits)) continue;
            std::set<std::uint16_t> gen;
            for (const F2Matrix& h : table.elements) gen.insert((h * x * f2_inverse(h)).bits);
            seen.insert(gen.begin(), gen.end());
            std::set<std::uint16_t> grp(gen);
            grp.insert(F2Matrix::identity().bits);
            std::vector<std::uint16_t> frontier(grp.begin(), grp.end());
            while (!frontier.empty()) {
                std::vector<std::uint16_t> next;
                for (auto a : frontier)
                    for (auto b : gen) {
                        auto y = (F2Matrix(a) * F2Matrix(b)).bits;
                        if (grp.insert(y).second) next.push_back(y);
                    }
                frontier = std::move(next);
            }
            ++closures;
            if (grp.size() == 360) {
                for (auto b : grp)
                    ok = ok && table.derived_mask[std::size_t(table.ordinal(F2Matrix(b)))];
            } else {
                ok = ok && grp.size() == 720;
            }
        }
        rep.push_back(CheckResult::make("unique-index-two", ok,
                                        std::to_string(closures) + " class closures", "", "exact",
                                        "every proper normal closure is the derived subgroup"));
    });

    detail::guarded(rep, "centralizer-witnesses", [&] {
        long p = cfg.p;
        F2Matrix i1 = mod2(make_h1(p).m), i2 = mod2(make_h2(p).m);
        auto cz = centralizer(f2_iota(), table);
        auto has = [&](const F2Matrix& x) {
            return std::find(cz.begin(), cz.end(), x) != cz.end();
        };
        rep.push_back(CheckResult::make("centralizer-witnesses", has(i1) && has(i2),
                                        "centralizer order " + std::to_string(cz.size()), "", "exact",
                                        "both witness images centralize iota"));
    });

    for (long p : {3L, 5L}) {
        detail::guarded(rep, "uniqueness-audit-p" + std::to_string(p), [&] {
            UniquenessReport ur = uniqueness_audit(p, table);
            rep.push_back(CheckResult::make(
                "uniqueness-audit-p" + std::to_string(p), ur.unique,
                std::to_string(ur.narrowed_candidates.size()) + " candidates", "survivor iota",
                "exact", "candidate set narrows to the double swap"));
        });
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Phase 5: coefficient table and its oracle.
// ---------------------------------------------------------------------------

inline Report check_ftable(const RunConfig& cfg) {
    Report rep;
    (void)cfg;
    FTable t = expand_f_table(12);
    bool frozen = t.at(0, -1) == 1 && t.at(0, 0) == 2 && t.at(0, 1) == 1;
    for (int l = 2; l < 6; ++l) frozen = frozen && t.at(0, l) == 0 && t.at(0, -l - 1) == 0;
    rep.push_back(CheckResult::make("ftable-row0", frozen, "(1,2,1)", "(1,2,1)", "exact",
                                    "constant row of the generating product"));

    FTable o = expand_f_table_oracle(12);
    rep.push_back(CheckResult::make("ftable-oracle", t.f == o.f,
                                    std::to_string(t.f.size()) + " entries", "", "exact",
                                    "independent multiplication order agrees bit-exactly"));

    bool sym = true, support = true;
    int attained = 0;
    for (const auto& [k, v] : t.f) {
        if (k.first >= 1) sym = sym && t.at(k.first, -k.second) == v;
        if (v != 0) {
            support = support && (long(k.second) * k.second <= 12L * k.first + 1);
            if (long(k.second) * k.second == 12L * k.first + 1) ++attained;
        }
    }
    rep.push_back(
        CheckResult::make("ftable-symmetry", sym, "", "", "exact", "l -> -l symmetry for n >= 1"));
    rep.push_back(CheckResult::make("ftable-support", support && attained > 0,
                                    "l^2 <= 12n+1, attained " + std::to_string(attained) + "x", "",
                                    "exact", "observed support envelope"));
    return rep;
}

// ---------------------------------------------------------------------------
// Phase 6: expansion build and truncation stability.
// ---------------------------------------------------------------------------

inline Report check_delta_build(const RunConfig& cfg) {
    Report rep;
    SiegelSeries d1 = cached_delta_power(cfg, cfg.cap, 1);
    rep.push_back(CheckResult::make("delta1-leading",
                                    cusp_leading_exponents(d1) == Key3{1, 1, 1} && d1.at(1, 1, 1) == 1,
                                    "", "(1,1,1) -> 1", "exact", "weight-1 leading monomial"));
    rep.push_back(CheckResult::make("delta1-first-slice",
                                    d1.at(1, -1, 1) == -1 && d1.at(1, 3, 1) == 0,
                                    "", "(1,-1,1) -> -1", "exact", "lowest slice is r^(1/2)-r^(-1/2)"));
    bool cusp = true;
    for (const auto& [k, v] : d1.coeff)
        cusp = cusp && k[0] > 0 && k[2] > 0 && 3L * k[1] * k[1] < 4L * k[0] * k[2];
    rep.push_back(CheckResult::make("delta1-support-cone", cusp, "", "", "exact",
                                    "stored keys are positive definite"));

    SiegelSeries d1big = cached_delta_power(cfg, cfg.cap + 6, 1);
    rep.push_back(CheckResult::make("delta1-truncation-stable",
                                    same_series(d1, d1big.truncated(cfg.cap)), "", "", "exact",
                                    "cap +6 build agrees after re-truncation"));

    SiegelSeries d3 = cached_delta_power(cfg, cfg.cap, 3);
    rep.push_back(CheckResult::make("delta3-leading",
                                    cusp_leading_exponents(d3) == Key3{3, 3, 3} && d3.at(3, 3, 3) == 1,
                                    "", "(3,3,3) -> 1", "exact", "cube leading monomial"));
    return rep;
}

// ---------------------------------------------------------------------------
// Phase 7: character numerics.
// ---------------------------------------------------------------------------

struct ScanSamples {
    std::vector<ScaledSymplecticMatrix> tilde;  // originals, integer chart
    std::vector<CharacterReport> reports;
    int skipped = 0;
};

// Draw words until `count` of them admit usable sample points; returns the
// reports plus the tilde-chart originals (for cross-checks on the finite side).
inline ScanSamples scan_sampled_elements(const SiegelSeries& sr, Sampler& sampler, Group grp,
                                         int weight, int order, int count, const EvalOptions& opt,
                                         int min_len = 2, int max_len = 4) {
    ScanSamples out;
    int attempts = 0, attempt_cap = count * 12;
    std::mt19937_64 lenrng(sampler.generators().size() + 7);
    while (int(out.reports.size()) < count && attempts < attempt_cap) {
        ++attempts;
        int len = min_len + int(lenrng() % (unsigned long)(max_len - min_len + 1));
        ScaledSymplecticMatrix g = sampler.sample(grp, len);
        QMat4 gu = tilde_to_rational(g);
        CharacterReport r = scan_element_auto(sr, ScanElement(gu, to_literal(g)), weight, order, opt);
        if (!r.usable) {
            ++out.skipped;
            continue;
        }
        out.tilde.push_back(g);
        out.reports.push_back(std::move(r));
    }
    return out;
}

inline Report check_characters(const RunConfig& cfg, const FiniteGroupTable& table) {
    Report rep;
    long p = 3;  // the weight-1 product lives at p = 3
    EvalOptions opt{cfg.convention, cfg.tolerance};
    int scan_cap = std::max(cfg.cap, cfg.scan_cap);
    SiegelSeries d1 = cached_delta_power(cfg, scan_cap, 1);
    SiegelSeries d3 = cached_delta_power(cfg, scan_cap, 3);

    detail::guarded(rep, "fricke-ratio", [&] {
        CharacterReport r = scan_element_auto(d3, ScanElement(make_vbar(p), "vbar"), 3, 2, opt);
        bool ok = r.ok() && r.snapped == 1 && r.constant;
        rep.push_back(CheckResult::make("fricke-ratio", ok, detail::cplx_str(r.ratio), "-1",
                                        std::to_string(cfg.tolerance),
                                        "weight-3 ratio of the dual involution"));
    });

    detail::guarded(rep, "kappa-ratio", [&] {
        CharacterReport r =
            scan_element_auto(d3, ScanElement(make_kappa_untilde(p), "kappa-untilde"), 3, 1, opt);
        bool ok = r.ok() && r.snapped == 0;
        rep.push_back(CheckResult::make("kappa-ratio", ok, detail::cplx_str(r.ratio), "+1",
                                        std::to_string(cfg.tolerance),
                                        "weight-3 ratio of the level-2 extension generator"));
    });

    int want = std::min(cfg.samples, 50);

    detail::guarded(rep, "level2-ratios", [&] {
        Sampler sampler(p, {cfg.seed + 20, 2, {}});
        ScanSamples s = scan_sampled_elements(d3, sampler, Group::GammaCircleLevel2, 3, 1, want, opt);
        bool ok = int(s.reports.size()) == want;
        for (const auto& r : s.reports) ok = ok && r.ok() && r.snapped == 0;
        rep.push_back(CheckResult::make(
            "level2-ratios", ok, std::to_string(s.reports.size()) + " elements (skipped " +
                                     std::to_string(s.skipped) + ")",
            "+1 each", std::to_string(cfg.tolerance), "trivial character on the level-2 subgroup"));
    });

    detail::guarded(rep, "order-six-ratios", [&] {
        Sampler sampler(p, {cfg.seed + 21, 2, {}});
        ScanSamples s = scan_sampled_elements(d1, sampler, Group::GammaCircle, 1, 6, want, opt);
        bool ok = int(s.reports.size()) == want;
        bool primitive = false;
        for (const auto& r : s.reports) {
            ok = ok && r.ok();
            primitive = primitive || r.snapped == 1 || r.snapped == 5;
        }
        // the basic translation attains a primitive value; include it explicitly
        QMat4 t1 = to_rational(IMat4::identity());
        t1(0, 2) = 1;
        CharacterReport rt = scan_element_auto(d1, ScanElement(t1, "translation"), 1, 6, opt);
        ok = ok && rt.ok() && (rt.snapped == 1 || rt.snapped == 5);
        primitive = primitive || rt.ok();
        rep.push_back(CheckResult::make(
            "order-six-ratios", ok && primitive,
            std::to_string(s.reports.size()) + " elements (skipped " + std::to_string(s.skipped) +
                ")",
            "sixth roots, primitive attained", std::to_string(cfg.tolerance),
            "weight-1 ratios are sixth roots of unity"));
    });

    detail::guarded(rep, "character-multiplicative", [&] {
        Sampler sampler(p, {cfg.seed + 22, 2, {}});
        int pairs_want = std::min(cfg.samples, 100);
        int done = 0, attempts = 0, skipped = 0;
        bool ok = true;
        while (done < pairs_want && attempts < pairs_want * 12) {
            ++attempts;
            ScaledSymplecticMatrix a = sampler.sample(Group::GammaCircle, 2);
            ScaledSymplecticMatrix b = sampler.sample(Group::GammaCircle, 2);
            ScaledSymplecticMatrix ab = mat_mul(a, b);
            CharacterReport ra =
                scan_element_auto(d1, ScanElement(tilde_to_rational(a), "a"), 1, 6, opt);
            CharacterReport rb =
                scan_element_auto(d1, ScanElement(tilde_to_rational(b), "b"), 1, 6, opt);
            CharacterReport rab =
                scan_element_auto(d1, ScanElement(tilde_to_rational(ab), "ab"), 1, 6, opt);
            if (!ra.ok() || !rb.ok() || !rab.ok()) {
                ++skipped;
                continue;
            }
            ok = ok && (ra.snapped + rb.snapped) % 6 == rab.snapped;
            ++done;
        }
        ok = ok && done == pairs_want;
        rep.push_back(CheckResult::make("character-multiplicative", ok,
                                        std::to_string(done) + " pairs (skipped " +
                                            std::to_string(skipped) + ")",
                                        "", std::to_string(cfg.tolerance),
                                        "snapped values multiply on products"));
    });

    detail::guarded(rep, "sign-consistency", [&] {
        Sampler sampler(p, {cfg.seed + 23, 2, {}});
        ScanSamples s = scan_sampled_elements(d3, sampler, Group::GammaCircle, 3, 2, want, opt);
        bool ok = int(s.reports.size()) == want;
        for (std::size_t i = 0; i < s.reports.size(); ++i) {
            const auto& r = s.reports[i];
            int lhs = r.snapped == 0 ? +1 : -1;
            int rhs = sign_char(mod2(s.tilde[i].m), table);
            ok = ok && r.ok() && lhs == rhs;
        }
        rep.push_back(CheckResult::make(
            "sign-consistency", ok,
            std::to_string(s.reports.size()) + " elements (skipped " + std::to_string(s.skipped) +
                ")",
            "", std::to_string(cfg.tolerance),
            "weight-3 character factors through the permutation sign"));
    });

    detail::guarded(rep, "convention-check", [&] {
        // tau2 translation by p: constant ratio with the i convention, broken
        // without it
        QMat4 t2 = to_rational(IMat4::identity());
        t2(0, 3) = p;
        t2(1, 2) = p;
        EvalOptions no_i = opt;
        no_i.convention = Convention::NoI;
        CharacterReport good = scan_element_auto(d1, ScanElement(t2, "t2"), 1, 6, opt);
        bool noi_fails = false;
        try {
            CharacterReport bad = scan_element_auto(d1, ScanElement(t2, "t2"), 1, 6, no_i);
            noi_fails = !bad.ok();
        } catch (const Error&) {
            noi_fails = true;
        }
        bool ok = good.ok() && (cfg.convention == Convention::WithI ? noi_fails : true);
        rep.push_back(CheckResult::make("convention-check", ok,
                                        std::string("i=pass no-i=") + (noi_fails ? "fail" : "pass"),
                                        "i passes, no-i fails", std::to_string(cfg.tolerance),
                                        "records which exponent convention is modular"));
    });

    return rep;
}

// ---------------------------------------------------------------------------
// run_all: the phases in order.
// ---------------------------------------------------------------------------

inline Report run_all(const RunConfig& cfg) {
    cfg.validate();
    Report rep;
    auto append = [&](Report part) {
        for (auto& c : part) rep.push_back(std::move(c));
    };
    append(check_group_identities(cfg));
    append(check_reduction_hom(cfg));
    FiniteGroupTable table = enumerate_sp4f2();
    append(check_finite_group(cfg, table));
    append(check_ftable(cfg));
    append(check_delta_build(cfg));
    append(check_characters(cfg, table));
    return rep;
}

} // namespace paramod
