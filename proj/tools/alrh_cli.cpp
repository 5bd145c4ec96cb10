// Command-line front end. Exit codes: 0 success with budgets met,
// 1 a requested budget was missed, 2 invalid input or pipeline error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alrh/alrh.hpp"

namespace {

using alrh::cplx;
using alrh::io::fmt;
using alrh::io::json;

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        alrh::io::write_text_file(out, text);
}

/// "a..b" or a single integer.
std::pair<int, int> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            const int v = std::stoi(s);
            return {v, v};
        }
        const int lo = std::stoi(s.substr(0, dots));
        const int hi = std::stoi(s.substr(dots + 2));
        if (hi < lo) throw alrh::ConfigError("empty site range '" + s + "'");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw alrh::ConfigError("malformed site range '" + s + "'");
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        cells.push_back(cell);
    }
    return cells;
}

/// Rows of a headed CSV as column-name -> value maps.
std::vector<std::map<std::string, double>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw alrh::ConfigError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw alrh::ConfigError(path + ": empty file");
    const auto header = split_csv_line(line);
    std::vector<std::map<std::string, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) throw alrh::ConfigError(path + ": ragged row '" + line + "'");
        std::map<std::string, double> row;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            try {
                row[header[i]] = std::stod(cells[i]);
            } catch (const std::logic_error&) {
                throw alrh::ConfigError(path + ": non-numeric cell '" + cells[i] + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double column(const std::map<std::string, double>& row, const std::string& name, const std::string& path) {
    const auto it = row.find(name);
    if (it == row.end()) throw alrh::ConfigError(path + ": missing column '" + name + "'");
    return it->second;
}

alrh::Samples read_samples(const std::string& path) {
    alrh::Samples s;
    for (const auto& row : read_csv(path)) {
        const alrh::SampleKey key{static_cast<int>(column(row, "n", path)), column(row, "t", path)};
        s[key] = {column(row, "re", path), column(row, "im", path)};
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ablowitz-Ladik lattice: simulation, scattering, RH reconstruction and long-time asymptotics"};
    app.require_subcommand(1);
    int exit_code = 0;

    // simulate
    auto* sim = app.add_subcommand("simulate", "integrate the lattice from an initial field");
    std::string sim_in, sim_out, sim_final;
    double sim_t = 1.0, sim_dt = 0.01;
    int sim_every = 100, sim_pad = 0;
    sim->add_option("--input", sim_in, "field JSON")->required();
    sim->add_option("--t-end", sim_t, "final time")->required();
    sim->add_option("--dt", sim_dt, "time step");
    sim->add_option("--record-every", sim_every, "steps between snapshots");
    sim->add_option("--pad", sim_pad, "zero sites added on each side of the window");
    sim->add_option("--out", sim_out, "snapshot CSV (t,n,re,im); '-' for stdout");
    sim->add_option("--final", sim_final, "write the final state as field JSON");
    sim->callback([&] {
        auto f = alrh::io::read_field(sim_in);
        if (sim_pad > 0) f = alrh::padded(f, f.n_min - sim_pad, f.n_max() + sim_pad);
        alrh::SimConfig cfg;
        cfg.dt = sim_dt;
        cfg.t_end = sim_t;
        cfg.record_every = sim_every;
        const auto res = alrh::simulate(f, cfg);
        std::ostringstream csv;
        alrh::io::write_snapshots_csv(csv, res.snapshots);
        if (!sim_out.empty()) emit(sim_out, csv.str());
        if (!sim_final.empty())
            alrh::io::write_json_file(sim_final, alrh::io::field_to_json(res.snapshots.back()));
        const json summary{{"log_mass_initial", res.log_mass_initial},
                           {"log_mass_final", res.log_mass_final},
                           {"max_log_mass_drift", res.max_log_mass_drift},
                           {"max_edge_abs", res.max_edge_abs},
                           {"warnings", res.warnings}};
        (sim_out == "-" ? std::cerr : std::cout) << summary.dump(2) << '\n';
    });

    // scatter
    auto* sc = app.add_subcommand("scatter", "reflection coefficient on a uniform circle grid");
    std::string sc_in, sc_out;
    std::size_t sc_n = 1024;
    sc->add_option("--input", sc_in, "field JSON")->required();
    sc->add_option("--N", sc_n, "grid size (power of two)");
    sc->add_option("--out", sc_out, "rgrid JSON");
    sc->callback([&] {
        const auto g = alrh::reflection_grid(alrh::io::read_field(sc_in), sc_n);
        emit(sc_out, alrh::io::grid_to_json(g).dump(2) + "\n");
    });

    // evolve-r
    auto* ev = app.add_subcommand("evolve-r", "apply the explicit time flow to a reflection grid");
    std::string ev_in, ev_out;
    double ev_t = 0.0;
    ev->add_option("--rgrid", ev_in, "rgrid JSON")->required();
    ev->add_option("--t", ev_t, "target time")->required();
    ev->add_option("--out", ev_out, "rgrid JSON");
    ev->callback([&] {
        const auto g = alrh::evolve_reflection(alrh::io::read_grid(ev_in), ev_t);
        emit(ev_out, alrh::io::grid_to_json(g).dump(2) + "\n");
    });

    // zm-predict
    auto* zm = app.add_subcommand("zm-predict", "leading-order long-time formula at (n, t)");
    std::string zm_in, zm_out;
    int zm_n = 0;
    double zm_t = 0.0;
    zm->add_option("--rgrid", zm_in, "rgrid JSON")->required();
    zm->add_option("--n", zm_n, "site")->required();
    zm->add_option("--t", zm_t, "time")->required();
    zm->add_option("--out", zm_out, "prediction JSON");
    zm->callback([&] {
        const auto p = alrh::zm_predict(alrh::io::read_grid(zm_in), zm_n, zm_t);
        emit(zm_out, alrh::io::prediction_to_json(p).dump(2) + "\n");
    });

    // rh-reconstruct
    auto* rh = app.add_subcommand("rh-reconstruct", "solve the RH problem for q_n(t)");
    std::string rh_in, rh_out, rh_range = "0";
    double rh_t = 0.0;
    std::size_t rh_n_grid = 0;
    rh->add_option("--rgrid", rh_in, "rgrid JSON")->required();
    rh->add_option("--n", rh_range, "site or range lo..hi");
    rh->add_option("--t", rh_t, "time");
    rh->add_option("--N", rh_n_grid, "resample the grid to N nodes first");
    rh->add_option("--out", rh_out, "CSV n,t,re,im,residual");
    rh->callback([&] {
        auto g = alrh::io::read_grid(rh_in);
        if (rh_n_grid != 0 && rh_n_grid != g.size()) g = alrh::resample_grid(g, rh_n_grid);
        const auto [lo, hi] = parse_range(rh_range);
        std::ostringstream csv;
        csv << "n,t,re,im,residual\n";
        for (int n = lo; n <= hi; ++n) {
            const auto rec = alrh::reconstruct(g, n, rh_t);
            csv << n << ',' << fmt(rh_t) << ',' << fmt(rec.q.real()) << ',' << fmt(rec.q.imag()) << ','
                << fmt(rec.residual) << '\n';
        }
        emit(rh_out, csv.str());
    });

    // compare
    auto* cmp = app.add_subcommand("compare", "residuals between two sample tables keyed by (n, t)");
    std::string cmp_a, cmp_b, cmp_out;
    std::optional<double> cmp_budget;
    cmp->add_option("--a", cmp_a, "CSV with columns n,t,re,im")->required();
    cmp->add_option("--b", cmp_b, "CSV with columns n,t,re,im")->required();
    cmp->add_option("--budget", cmp_budget, "maximum allowed |a - b|");
    cmp->add_option("--out", cmp_out, "residual CSV");
    cmp->callback([&] {
        const auto table = alrh::compare_pipelines(read_samples(cmp_a), read_samples(cmp_b));
        std::ostringstream csv;
        csv << "n,t,abs_residual,rel_residual\n";
        for (const auto& r : table.rows)
            csv << r.key.n << ',' << fmt(r.key.t) << ',' << fmt(r.abs_residual) << ',' << fmt(r.rel_residual) << '\n';
        if (!cmp_out.empty()) emit(cmp_out, csv.str());
        json summary{{"count", table.rows.size()},
                     {"max_abs", table.max_abs},
                     {"median_abs", table.median_abs},
                     {"max_rel", table.max_rel},
                     {"median_rel", table.median_rel}};
        if (cmp_budget) {
            summary["budget"] = *cmp_budget;
            summary["budget_met"] = table.max_abs <= *cmp_budget;
            if (table.max_abs > *cmp_budget) exit_code = 1;
        }
        std::cout << summary.dump(2) << '\n';
    });

    // fit-decay
    auto* fit = app.add_subcommand("fit-decay", "power-law fit of |q| against t");
    std::string fit_in, fit_out;
    std::optional<int> fit_n;
    std::optional<double> fit_max, fit_min;
    fit->add_option("--input", fit_in, "CSV with columns t and abs, or t,re,im")->required();
    fit->add_option("--n", fit_n, "only rows with this site (needs an n column)");
    fit->add_option("--max-exponent", fit_max, "budget: exponent must not exceed this");
    fit->add_option("--min-exponent", fit_min, "budget: exponent must not fall below this");
    fit->add_option("--out", fit_out, "fit JSON");
    fit->callback([&] {
        std::vector<alrh::FitSample> samples;
        for (const auto& row : read_csv(fit_in)) {
            if (fit_n && static_cast<int>(column(row, "n", fit_in)) != *fit_n) continue;
            const double t = column(row, "t", fit_in);
            const double a = row.contains("abs") ? row.at("abs")
                                                 : std::abs(cplx{column(row, "re", fit_in), column(row, "im", fit_in)});
            samples.push_back({t, a});
        }
        const auto f = alrh::fit_decay(samples);
        json j{{"exponent", f.exponent}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
               {"t_lo", f.t_lo},         {"t_hi", f.t_hi},           {"samples", f.samples},
               {"warnings", f.warnings}};
        bool ok = true;
        if (fit_max) ok = ok && f.exponent <= *fit_max;
        if (fit_min) ok = ok && f.exponent >= *fit_min;
        if (fit_max || fit_min) j["budget_met"] = ok;
        if (!ok) exit_code = 1;
        emit(fit_out, j.dump(2) + "\n");
    });

    // run
    auto* run = app.add_subcommand("run", "full experiment from a JSON config");
    std::string run_cfg, run_dir;
    run->add_option("--config", run_cfg, "experiment JSON")->required();
    run->add_option("--output-dir", run_dir, "overrides output_dir in the config");
    run->callback([&] {
        const std::filesystem::path cfg_path(run_cfg);
        auto exp = alrh::experiment_from_json(alrh::io::read_json_file(run_cfg), cfg_path.parent_path());
        if (!run_dir.empty()) exp.output_dir = run_dir;
        const auto rep = alrh::run_experiment(exp);
        std::cout << rep.summary.dump(2) << '\n';
        if (!rep.budgets_met) exit_code = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const alrh::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
