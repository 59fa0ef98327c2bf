// Command-line front end: reproducible verification runs over the paramodular
// group machinery and the weight-1/weight-3 product expansions.
//
//   paramod verify-group      --p 3 --samples 1000 --seed 42
//   paramod enumerate-sp4f2   --stats
//   paramod audit-uniqueness  --p 3
//   paramod build-delta       --cap 24 --out delta1.txt [--cube]
//   paramod check-characters  --series delta1.txt --group circle --weight 1 --order 6
//   paramod check-dual-identity --p 3 --samples 20
//   paramod run-all           --p 3 --cap 24 --samples 1000 --seed 42 --out cache/
//
// Reports are line-oriented key=value records; the exit status is the number
// of failed checks (capped at 125).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "paramod/verify.hpp"

using namespace paramod;

namespace {

int finish(const Report& rep) {
    print_report(std::cout, rep);
    return std::min(failed_count(rep), 125);
}

Convention parse_convention(const std::string& s) {
    if (s == "i") return Convention::WithI;
    if (s == "no-i") return Convention::NoI;
    throw CLI::ValidationError("--convention must be i or no-i");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for the level-2 paramodular group extension"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string convention = "i";
    std::string out_path, series_path, group_name = "circle";
    int weight = 1, order = 6;
    bool stats = false, cube = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.p, "odd prime polarization parameter");
        sub->add_option("--seed", cfg.seed, "sampler seed");
        sub->add_option("--samples", cfg.samples, "sample count for property checks");
        sub->add_option("--cap", cfg.cap, "series truncation cap");
        sub->add_option("--scan-cap", cfg.scan_cap, "cap used for slash-ratio numerics");
        sub->add_option("--tol", cfg.tolerance, "numeric tolerance");
        sub->add_option("--convention", convention, "exponent convention: i | no-i");
    };

    CLI::App* vg = app.add_subcommand("verify-group", "exact group identities and invariants");
    add_common(vg);

    CLI::App* en = app.add_subcommand("enumerate-sp4f2", "finite symplectic group facts");
    en->add_flag("--stats", stats, "print order, derived order, conjugacy classes");

    CLI::App* au = app.add_subcommand("audit-uniqueness", "replay the extension uniqueness argument");
    add_common(au);

    CLI::App* bd = app.add_subcommand("build-delta", "expand the weight-1 product");
    add_common(bd);
    bd->add_option("--out", out_path, "output series file")->required();
    bd->add_flag("--cube", cube, "write the weight-3 cube instead");

    CLI::App* cc = app.add_subcommand("check-characters", "slash-ratio character scan");
    add_common(cc);
    cc->add_option("--series", series_path, "series file from build-delta")->required();
    cc->add_option("--group", group_name, "circle | level2");
    cc->add_option("--weight", weight, "slash weight");
    cc->add_option("--order", order, "root-of-unity order for snapping");

    CLI::App* cd = app.add_subcommand("check-dual-identity", "dual period matrix identity");
    add_common(cd);

    CLI::App* ra = app.add_subcommand("run-all", "every phase in order");
    add_common(ra);
    ra->add_option("--out", cfg.out_dir, "series cache directory");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.convention = parse_convention(convention);
        cfg.validate();

        if (vg->parsed()) {
            Report rep = check_group_identities(cfg);
            for (auto& c : check_reduction_hom(cfg)) rep.push_back(c);
            return finish(rep);
        }

        if (en->parsed()) {
            FiniteGroupTable table = enumerate_sp4f2();
            std::cout << "order=" << table.size() << "\n";
            std::cout << "derived_order=" << table.derived_order << "\n";
            if (stats) std::cout << "conjugacy_classes=" << conjugacy_class_count(table) << "\n";
            RunConfig c2 = cfg;
            return finish(check_finite_group(c2, table));
        }

        if (au->parsed()) {
            FiniteGroupTable table = enumerate_sp4f2();
            UniquenessReport ur = uniqueness_audit(cfg.p, table);
            std::cout << ur;
            return ur.unique ? 0 : 1;
        }

        if (bd->parsed()) {
            SiegelSeries s = cached_delta_power(cfg, cfg.cap, cube ? 3 : 1);
            std::ofstream out(out_path);
            if (!out) throw ParseError("cannot open " + out_path);
            write_series(out, s);
            std::cout << "check=build-delta status=pass measured=" << s.size()
                      << " note=\"terms written to " << out_path << "\"\n";
            return 0;
        }

        if (cc->parsed()) {
            std::ifstream in(series_path);
            if (!in) throw ParseError("cannot open " + series_path);
            SiegelSeries s = read_series(in);
            EvalOptions opt{cfg.convention, cfg.tolerance};
            Sampler sampler(cfg.p, {cfg.seed, 2, {}});
            Group grp = group_name == "level2" ? Group::GammaCircleLevel2 : Group::GammaCircle;
            int want = std::min(cfg.samples, 50);
            ScanSamples scan = scan_sampled_elements(s, sampler, grp, weight, order, want,
                                                     opt);
            Report rep;
            bool all_ok = int(scan.reports.size()) == want;
            for (const auto& r : scan.reports) {
                all_ok = all_ok && r.ok();
                rep.push_back(CheckResult::make(
                    "ratio", r.ok(), detail::cplx_str(r.ratio),
                    r.snapped >= 0 ? "root " + std::to_string(r.snapped) + "/" + std::to_string(order)
                                   : "none",
                    std::to_string(cfg.tolerance), r.element));
            }
            rep.push_back(CheckResult::make("character-scan", all_ok,
                                            std::to_string(scan.reports.size()) + " elements, " +
                                                std::to_string(scan.skipped) + " skipped"));
            return finish(rep);
        }

        if (cd->parsed()) {
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> u(-2.0, 2.0), v(0.5, 3.0), h(-0.5, 0.5);
            Report rep;
            double worst = 0;
            for (int i = 0; i < cfg.samples; ++i) {
                double y1 = v(rng), y3 = v(rng), y2 = h(rng) * std::sqrt(y1 * y3);
                SiegelPoint tau({u(rng), y1}, {u(rng), y2}, {u(rng), y3});
                worst = std::max(worst, dual_period_identity_residual(tau, cfg.p));
            }
            std::ostringstream m;
            m << std::scientific << std::setprecision(3) << worst;
            rep.push_back(CheckResult::make("dual-period-identity", worst < 1e-12, m.str(),
                                            "<1e-12", "1e-12"));
            return finish(rep);
        }

        if (ra->parsed()) return finish(run_all(cfg));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 125;
    }
    return 0;
}
