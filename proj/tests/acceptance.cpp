// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// quantities and wall time. Exit status is nonzero if any criterion fails.
//
// usage: acceptance [path-to-cli]   (the CLI is used for the determinism check)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "alrh/alrh.hpp"

using alrh::cplx;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit_s > 0.0 && secs > time_limit_s) {
        o.pass = false;
        o.detail += "; runtime limit " + alrh::io::fmt(time_limit_s) + " s exceeded";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

std::string brief(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

alrh::LatticeField gaussian() { return alrh::gaussian_field(0.3, 20.0, 400); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<double> geometric_times(double lo, double hi, int count) {
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / double(count - 1));
    t.front() = lo;
    t.back() = hi;
    return t;
}

std::vector<cplx> monomial(std::size_t n, int m) {
    std::vector<cplx> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = std::polar(1.0, 2.0 * alrh::kPi * m * double(k) / double(n));
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    criterion(1, "single-site scattering closed form", 1.0, [] {
        const cplx q0{0.3, 0.2};
        const auto g = alrh::reflection_grid(alrh::single_site_field(q0), 256);
        double dr = 0.0, da = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            dr = std::max(dr, std::abs(g.r[k] - std::conj(q0) * std::polar(1.0, g.thetas[k])));
            da = std::max(da, std::abs(g.a[k] - 1.0));
        }
        return Outcome{dr <= 1e-12 && da <= 1e-12, "max|r-conj(q0)e^{iθ}| = " + sci(dr) + ", max|a-1| = " + sci(da)};
    });

    criterion(2, "unitarity identity (1-|r|^2)|a| = c", 0.0, [] {
        const auto g = alrh::reflection_grid(gaussian(), 1024);
        double stated = 0.0, squared = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double t = 1.0 - std::norm(g.r[k]);
            stated = std::max(stated, std::abs(t * std::abs(g.a[k]) - g.c_minus_inf));
            squared = std::max(squared, std::abs(t * std::norm(g.a[k]) - g.c_minus_inf) / std::norm(g.a[k]));
        }
        return Outcome{stated <= 1e-10, "max|(1-|r|^2)|a| - c| = " + sci(stated) +
                                            " (bound 1e-10); with |a|^2 in place of |a|, max relative residual " +
                                            sci(squared)};
    });

    criterion(3, "time-flow round trip", 60.0, [] {
        const auto f0 = gaussian();
        const auto g0 = alrh::reflection_grid(f0, 1024);
        const auto sim = alrh::simulate(f0, {0.01, 20.0, 100, 1e-12});
        const auto g1 = alrh::reflection_grid(sim.snapshots.back(), 1024);
        const auto pred = alrh::evolve_reflection(g0, 20.0);
        double dr = 0.0;
        for (std::size_t k = 0; k < g1.size(); ++k) dr = std::max(dr, std::abs(g1.r[k] - pred.r[k]));
        return Outcome{dr <= 1e-4 && sim.max_log_mass_drift <= 1e-8,
                       "max|Δr| = " + sci(dr) + ", log-mass drift = " + sci(sim.max_log_mass_drift)};
    });

    criterion(4, "RH inverse round trip", 120.0, [] {
        const auto f0 = gaussian();
        const auto g0 = alrh::reflection_grid(f0, 1024);
        double err0 = 0.0, det = 0.0, err5 = 0.0;
        for (int n = -20; n <= 20; ++n) {
            const auto rec = alrh::reconstruct(g0, n, 0.0);
            err0 = std::max(err0, std::abs(rec.q - f0.at(n)));
            det = std::max(det, rec.det_deviation);
        }
        const auto f5 = alrh::advance_to(f0, 5.0, 0.01);
        for (int n = -20; n <= 20; ++n) {
            const auto rec = alrh::reconstruct(g0, n, 5.0);
            err5 = std::max(err5, std::abs(rec.q - f5.at(n)));
            det = std::max(det, rec.det_deviation);
        }
        return Outcome{err0 <= 1e-6 && det <= 1e-8 && err5 <= 1e-5,
                       "t=0 max|q_rec-q_in| = " + sci(err0) + ", max|det M(0)-1| = " + sci(det) +
                           ", t=5 max|q_rec-q_sim| = " + sci(err5)};
    });

    criterion(5, "model-coefficient modulus |m1| = sqrt(ν)", 0.0, [] {
        std::mt19937_64 rng(20240501);
        std::uniform_real_distribution<double> mod(0.05, 0.95), ang(0.0, 2.0 * alrh::kPi);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const cplx r = std::polar(mod(rng), ang(rng));
            const double v = alrh::nu(r);
            worst = std::max(worst, std::abs(std::abs(alrh::m1_entry(v, r)) - std::sqrt(v)));
        }
        return Outcome{worst <= 1e-10, "max||m1| - sqrt(ν)| over 100 draws = " + sci(worst)};
    });

    criterion(6, "δ factor: real, >= 1, constant-|r| closed form", 0.0, [] {
        // δ(0) on the arc through -i (ξ >= 0).
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst_imag = 0.0, min_real = 1e300;
        for (int i = 0; i < 50; ++i) {
            const auto f = alrh::make_field(alrh::io::json{{"type", "random"},
                                                           {"seed", 1000 + i},
                                                           {"amplitude", 0.2 + 0.6 * u(rng)},
                                                           {"half_window", 16},
                                                           {"width", 6.0}});
            const auto g = alrh::reflection_grid(f, 512);
            const cplx d = alrh::delta_at_zero(g, 0.9 * u(rng));
            worst_imag = std::max(worst_imag, std::abs(d.imag()));
            min_real = std::min(min_real, d.real());
        }
        const auto c = alrh::make_reflection_grid(std::vector<cplx>(1024, 0.5));
        const double closed = std::abs(alrh::delta_at_zero(c, 0.0).real() - std::pow(0.75, -0.5));
        return Outcome{worst_imag <= 1e-10 && min_real >= 1.0 && closed <= 1e-8,
                       "max|Im| = " + sci(worst_imag) + ", min Re = " + brief(min_real) +
                           ", |δ - 0.75^{-1/2}| = " + sci(closed) + " (50 seeded random fields, ξ in [0, 0.9))"};
    });

    criterion(7, "Zakharov-Manakov rate on ξ = 0", 600.0, [] {
        // The listed times 100, 200, 400, 800 plus their geometric midpoints,
        // since a fit needs at least five samples.
        const auto times = geometric_times(100.0, 800.0, 7);
        auto f = alrh::padded(gaussian(), -2000, 2000);
        std::vector<alrh::FitSample> samples;
        std::string listed;
        for (double t : times) {
            f = alrh::advance_to(std::move(f), t, 0.02);
            samples.push_back({t, std::abs(f.at(0))});
            listed += brief(t) + ":" + sci(samples.back().abs_q) + " ";
        }
        const auto fit = alrh::fit_decay(samples);
        const auto g = alrh::reflection_grid(gaussian(), 1024);
        const double ratio = samples.back().abs_q / std::abs(alrh::zm_predict(g, 0, 800.0).q_pred);
        const bool ok = fit.exponent >= -0.55 && fit.exponent <= -0.45 && ratio >= 0.75 && ratio <= 1.25;
        return Outcome{ok, "exponent = " + brief(fit.exponent) + " (r^2 = " + brief(fit.r_squared) +
                               "), |q_sim|/|q_zm| at t=800 = " + brief(ratio) + "; |q_0(t)| " + listed +
                               "f_edge=" + sci(f.edge_abs())};
    });

    criterion(8, "fast-region rate on ξ = 1.5", 0.0, [] {
        const auto times = geometric_times(50.0, 500.0, 7);
        auto f = alrh::padded(gaussian(), -2000, 2000);
        std::vector<alrh::FitSample> samples;
        std::string listed;
        for (double t : times) {
            f = alrh::advance_to(std::move(f), t, 0.02);
            const int n = alrh::snap_site(1.5, t);
            samples.push_back({t, std::abs(f.at(n))});
            listed += std::to_string(n) + ":" + sci(samples.back().abs_q) + " ";
        }
        const auto fit = alrh::fit_decay(samples);
        return Outcome{fit.exponent <= -0.9, "exponent = " + brief(fit.exponent) + " over " +
                                                  std::to_string(fit.samples) + " samples; |q_n| " + listed};
    });

    criterion(9, "Cauchy projections and Plemelj", 0.0, [] {
        const std::size_t n = 256;
        double mono = 0.0;
        for (int m = -static_cast<int>(n / 2); m < static_cast<int>(n / 2); ++m) {
            const auto f = monomial(n, m);
            const auto p = alrh::cauchy_project(f, alrh::Side::plus);
            const auto q = alrh::cauchy_project(f, alrh::Side::minus);
            for (std::size_t k = 0; k < n; ++k) {
                mono = std::max(mono, std::abs(p[k] - (m < 0 ? f[k] : cplx{})));
                mono = std::max(mono, std::abs(q[k] - (m < 0 ? cplx{} : -f[k])));
            }
        }
        std::mt19937_64 rng(9);
        std::normal_distribution<double> gauss;
        double plemelj = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<cplx> f(n);
            for (int m = -static_cast<int>(n / 4); m <= static_cast<int>(n / 4); ++m) {
                const cplx c{gauss(rng), gauss(rng)};
                const auto e = monomial(n, m);
                for (std::size_t k = 0; k < n; ++k) f[k] += c * e[k];
            }
            const auto p = alrh::cauchy_project(f, alrh::Side::plus);
            const auto q = alrh::cauchy_project(f, alrh::Side::minus);
            for (std::size_t k = 0; k < n; ++k) plemelj = std::max(plemelj, std::abs(p[k] - q[k] - f[k]));
        }
        return Outcome{mono <= 1e-12 && plemelj <= 1e-12,
                       "monomials max error = " + sci(mono) + ", max|(C+ - C-)f - f| = " + sci(plemelj)};
    });

    criterion(10, "determinism of repeated runs", 0.0, [&cli] {
        const fs::path root = fs::temp_directory_path() / "alrh_acceptance_determinism";
        fs::remove_all(root);
        fs::create_directories(root);
        const alrh::io::json cfg{
            {"field", {{"type", "random"}, {"seed", 424242}, {"amplitude", 0.4}, {"half_window", 16}, {"width", 6.0}}},
            {"N", 256},
            {"dt", 0.02},
            {"rays", {0.25, {{"xi", 1.5}, {"times", {2, 4, 6, 8, 10}}}}},
            {"times", {2, 4, 6, 8, 10}},
            {"pipelines", {"simulate", "scatter", "rh", "zm"}},
            {"rh_times", {1.0}},
            {"rh_sites", {-3, 3}}};
        alrh::io::write_json_file((root / "config.json").string(), cfg);
        std::vector<fs::path> dirs{root / "run_a", root / "run_b"};
        std::string how;
        for (const auto& d : dirs) {
            if (!cli.empty()) {
                const std::string cmd = "\"" + cli + "\" run --config \"" + (root / "config.json").string() +
                                        "\" --output-dir \"" + d.string() + "\" > \"" + d.string() + ".log\"";
                const int rc = std::system(cmd.c_str());
                if (rc == -1) throw std::runtime_error("could not launch " + cli);
                how = "CLI run";
            } else {
                auto e = alrh::experiment_from_json(cfg);
                e.output_dir = d;
                alrh::run_experiment(e);
                how = "library run";
            }
        }
        std::size_t files = 0, differ = 0;
        for (const auto& entry : fs::directory_iterator(dirs[0])) {
            ++files;
            if (slurp(entry.path()) != slurp(dirs[1] / entry.path().filename())) ++differ;
        }
        if (slurp(root / "run_a.log") != slurp(root / "run_b.log")) ++differ;
        return Outcome{files > 0 && differ == 0, std::to_string(files) + " output files compared via " + how + ", " +
                                                     std::to_string(differ) + " differ"};
    });

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
