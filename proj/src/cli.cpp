#include "pmelab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "pmelab/config.hpp"
#include "pmelab/diagnostics.hpp"
#include "pmelab/profiles.hpp"
#include "pmelab/solver.hpp"

namespace pmelab {

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_report_csv(const ExperimentReport& report) {
    std::vector<const SeriesPoint*> rows;
    rows.reserve(report.series.size());
    for (const auto& p : report.series) rows.push_back(&p);
    std::stable_sort(rows.begin(), rows.end(), [](const SeriesPoint* a, const SeriesPoint* b) {
        if (a->time != b->time) return a->time < b->time;
        return a->functional < b->functional;
    });
    std::string out = "time,functional,value\n";
    for (const auto* p : rows) out += format_number(p->time) + "," + p->functional + "," + format_number(p->value) + "\n";
    return out;
}

namespace {

void write_file(const std::string& path, const std::string& text) {
    const std::filesystem::path fp(path);
    if (fp.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(fp.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

/// Runs fn(i) for i in [0, jobs) on a pool of worker_count(jobs) threads.
/// The first exception is rethrown after all workers finish.
void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = worker_count(jobs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto body = [&] {
        for (std::size_t i = next++; i < jobs; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

std::string table_csv(const std::string& header, const std::vector<std::vector<double>>& rows) {
    std::string out = header + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
        out += "\n";
    }
    return out;
}

// ----------------------------------------------------------------------------
// experiment

bool needs_run(const std::string& name) { return name != "viscosity"; }

ExperimentReport run_experiment(const std::string& name, const ScenarioConfig& cfg, const Scenario& sc,
                                 const RadialRun* run) {
    if (name == "theorem1") return experiment_theorem1(sc, *run, cfg.theorem1);
    if (name == "theorem1b") return experiment_theorem1b(sc, *run, cfg.theorem1b);
    if (name == "theorem2") return experiment_theorem2(sc, *run, cfg.theorem2);
    if (name == "theorem3") return experiment_theorem3(sc, *run, cfg.theorem3);
    if (name == "decay") return experiment_decay(sc, *run, cfg.decay);
    if (name == "entropy") return experiment_entropy(sc, *run, cfg.entropy);
    return experiment_viscosity(sc.params, cfg.viscosity);
}

/// The trend windows must land on snapshot times of the run.
void check_windows(const std::string& name, const ScenarioConfig& cfg, const Scenario& sc) {
    double t_from = 0.0, t_to = 0.0;
    if (name == "theorem1") t_from = cfg.theorem1.t_from, t_to = cfg.theorem1.t_to;
    else if (name == "theorem1b") t_from = cfg.theorem1b.t_from, t_to = cfg.theorem1b.t_to;
    else if (name == "theorem2") t_from = cfg.theorem2.t_from, t_to = cfg.theorem2.t_to;
    else if (name == "theorem3") t_from = cfg.theorem3.t_from, t_to = cfg.theorem3.t_to;
    else return;
    for (auto [t, key] : {std::pair{t_from, ".t_from"}, std::pair{t_to, ".t_to"}}) {
        const bool hit = std::any_of(sc.times.begin(), sc.times.end(),
                                     [t](double s) { return std::abs(s - t) <= 1e-9 * std::max(1.0, t); });
        if (!hit) {
            throw ConfigError(name + key, format_double(t) + " is not a snapshot time of the run (t_start = " +
                                              format_double(cfg.t_start) + ", t_end = " + format_double(cfg.t_end) +
                                              ")");
        }
    }
}

struct ExperimentArgs {
    std::vector<std::string> names;
    std::string config;
    std::string out_dir;
    std::size_t n = 0;
};

int cmd_experiment(const ExperimentArgs& args, std::ostream& out) {
    // One config per requested name; names sharing a scenario share a run.
    std::vector<std::string> names = args.names;
    std::vector<ScenarioConfig> configs;
    if (!args.config.empty()) {
        const ScenarioConfig c = load_config(args.config);
        if (names.empty()) names = c.experiments;
        if (names.empty()) throw ConfigError("scenario.experiments", "no experiment named in the config or on the command line");
        configs.assign(names.size(), c);
    } else {
        if (names.empty()) throw ConfigError("experiment", "name at least one experiment");
        for (const auto& n : names) configs.push_back(default_config(n));
    }
    for (auto& c : configs) {
        c.experiments.clear();
        if (args.n > 0) c.n = args.n;
        if (!args.out_dir.empty()) c.output_dir = args.out_dir;
    }

    std::vector<std::size_t> run_of(names.size(), SIZE_MAX);
    std::vector<std::size_t> unique;  // index into configs of each distinct scenario
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!needs_run(names[i])) continue;
        for (std::size_t u = 0; u < unique.size(); ++u) {
            if (configs[unique[u]] == configs[i]) run_of[i] = u;
        }
        if (run_of[i] == SIZE_MAX) {
            run_of[i] = unique.size();
            unique.push_back(i);
        }
    }
    std::vector<Scenario> scenarios;
    for (const auto& c : configs) scenarios.push_back(c.scenario());
    for (std::size_t i = 0; i < names.size(); ++i) check_windows(names[i], configs[i], scenarios[i]);

    std::vector<RadialRun> runs(unique.size());
    parallel_for(unique.size(), [&](std::size_t u) { runs[u] = simulate(scenarios[unique[u]]); });

    std::vector<ExperimentReport> reports(names.size());
    parallel_for(names.size(), [&](std::size_t i) {
        const RadialRun* r = run_of[i] == SIZE_MAX ? nullptr : &runs[run_of[i]];
        reports[i] = run_experiment(names[i], configs[i], scenarios[i], r);
    });

    bool all = true;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const ExperimentReport& rep = reports[i];
        const std::string path = join(configs[i].output_dir, names[i] + ".csv");
        emit_csv(rep, path);
        out << names[i] << " (" << rep.scenario << "): " << (rep.passed() ? "PASS" : "FAIL") << "  -> " << path << "\n";
        for (const auto& c : rep.criteria) {
            out << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured " << format_double(c.measured)
                << "  threshold " << format_double(c.threshold) << "  (" << c.detail << ")\n";
        }
        for (const auto& [k, v] : rep.constants) out << "  " << k << " = " << format_double(v) << "\n";
        for (const auto& [k, v] : rep.fitted_rates) {
            out << "  rate " << k << " = " << format_double(v.exponent) << "  (1 - r^2 = " << format_double(v.residual)
                << ")\n";
        }
        for (const auto& w : rep.warnings) out << "  warning: " << w << "\n";
        all = all && rep.passed();
    }
    return all ? 0 : 1;
}

// ----------------------------------------------------------------------------
// simulate

int cmd_simulate(const std::string& config_path, const std::string& out_dir, const std::string& equation,
                 std::size_t stride, std::ostream& out) {
    ScenarioConfig cfg = config_path.empty() ? default_config("theorem1") : load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    const Scenario sc = cfg.scenario();
    SolverConfig scfg;
    scfg.cfl = sc.cfl;
    scfg.bc_left = sc.inner;
    scfg.bc_right = sc.outer;
    scfg.t_end = sc.times.back();
    scfg.snapshot_times = sc.times;
    scfg.leakage_threshold = sc.leakage_threshold;
    const Equation eq = equation == "radial" ? Equation::radial() : Equation::line();
    const RadialRun run = pmelab::run(sc.ic, sc.grid, scfg, sc.params, eq);

    std::string csv = "t,r,u\n";
    for (const auto& u : run.snapshots) {
        for (std::size_t i = 0; i < u.size(); i += stride) {
            csv += format_number(u.t()) + "," + format_number(sc.grid.node(i)) + "," + format_number(u[i]) + "\n";
        }
    }
    const std::string path = join(cfg.output_dir, "snapshots.csv");
    write_file(path, csv);
    out << "simulate (" << sc.id << ", " << equation << "): " << run.steps << " steps, " << run.snapshots.size()
        << " snapshots -> " << path << "\n";
    out << "  L12 mass " << format_number(run.initial_l12) << " -> " << format_number(run.final_l12) << "\n";
    for (const auto& w : run.warnings) out << "  warning: " << w << "\n";
    return 0;
}

// ----------------------------------------------------------------------------
// profiles and riemann

struct ProfileArgs {
    std::string kind;
    double m = 3.0;
    int N = 3;
    std::optional<double> K, k, D;
    double t = 1.0;
    double lo = -12.0;  // log r or s
    double hi = 2.0;
    std::size_t n = 1401;
    std::string out;
};

int cmd_profiles(const ProfileArgs& a, std::ostream& out) {
    const ProfileKind kind = profile_kind_from_string(a.kind);
    const Parameters p = make_parameters(a.m, a.N);
    double constant = 0.0;
    switch (constant_of(kind)) {
        case ProfileConstant::K:
            if (!a.K) throw ConfigError("--K", "profile " + a.kind + " needs --K");
            constant = *a.K;
            break;
        case ProfileConstant::k:
            if (!a.k) throw ConfigError("--k", "profile " + a.kind + " needs --k");
            constant = *a.k;
            break;
        case ProfileConstant::D:
            if (!a.D) throw ConfigError("--D", "profile " + a.kind + " needs --D");
            constant = *a.D;
            break;
    }
    const ProfileSpec spec = ProfileSpec::make(kind, p, constant);
    if (!(a.hi > a.lo)) throw ConfigError("--hi", "must exceed --lo");
    if (a.n < 2) throw ConfigError("--n", "must be >= 2");
    std::vector<std::vector<double>> rows;
    const bool line = is_line_profile(kind);
    for (std::size_t i = 0; i < a.n; ++i) {
        const double x = a.lo + (a.hi - a.lo) * static_cast<double>(i) / static_cast<double>(a.n - 1);
        if (line) {
            rows.push_back({x, eval_profile(spec, x, a.t)});
        } else {
            rows.push_back({std::exp(x), eval_profile(spec, std::exp(x), a.t)});
        }
    }
    const std::string csv = table_csv(std::string(line ? "s," : "r,") + to_string(kind), rows);
    if (a.out.empty()) {
        out << csv;
    } else {
        write_file(a.out, csv);
    }
    return 0;
}

struct RiemannArgs {
    double m = 3.0;
    double wl = 0.0;
    double wr = 1.0;
    double tau = 1.0;
    double s_min = -2.0;
    double s_max = 5.0;
    std::size_t n = 701;
    std::string out;
};

int cmd_riemann(const RiemannArgs& a, std::ostream& out) {
    if (!(a.m > 1.0)) throw ConfigError("--m", "must be > 1");
    if (!(a.wl >= 0.0) || !(a.wr >= 0.0)) throw ConfigError("--wl", "states must be >= 0");
    if (!(a.tau > 0.0)) throw ConfigError("--tau", "must be > 0");
    if (!(a.s_max > a.s_min)) throw ConfigError("--s-max", "must exceed --s-min");
    if (a.n < 2) throw ConfigError("--n", "must be >= 2");
    const RiemannProblem rp{a.wl, a.wr, a.m};
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < a.n; ++i) {
        const double s = a.s_min + (a.s_max - a.s_min) * static_cast<double>(i) / static_cast<double>(a.n - 1);
        rows.push_back({s, riemann_exact(rp, s, a.tau)});
    }
    const std::string csv = table_csv("s,w", rows);
    if (a.out.empty()) {
        out << csv;
    } else {
        write_file(a.out, csv);
    }
    return 0;
}

// ----------------------------------------------------------------------------
// figures

std::string evolution_csv(const RadialRun& run, const RadialGrid& grid) {
    std::string csv = "t,r,u\n";
    for (const auto& u : run.snapshots) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            csv += format_number(u.t()) + "," + format_number(grid.node(i)) + "," + format_number(u[i]) + "\n";
        }
    }
    return csv;
}

std::vector<std::vector<double>> profile_rows(const ProfileSpec& spec, double lo, double hi, std::size_t n, double t) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        rows.push_back({std::exp(x), eval_profile(spec, std::exp(x), t)});
    }
    return rows;
}

Scenario figure_scenario(int which, std::size_t n) {
    Scenario sc;
    sc.params = make_parameters(3.0, 3);
    switch (which) {
        case 1:
            sc.id = "figure1";
            sc.ic = InitialCondition::bump();
            sc.grid = RadialGrid{std::exp(-6.0), std::exp(4.0), n};
            sc.times = {0.1, 1.0, 10.0, 100.0};
            break;
        case 2:
            sc.id = "figure2";
            sc.ic = InitialCondition::plateau(1.0);
            sc.grid = RadialGrid{std::exp(-40.0), std::exp(6.0), n};
            sc.times = {0.1, 1.0, 2.0, 5.0, 10.0};
            sc.leakage_threshold = std::numeric_limits<double>::infinity();
            break;
        default:
            sc.id = "figure3";
            // Value 0.5 at the origin, peak 1 at r = 1.
            sc.ic = InitialCondition::custom({0.5, 1.0, 1.5}, {0.5, 1.0, 0.0});
            sc.grid = RadialGrid{std::exp(-100.0), std::exp(6.0), n};
            sc.times = log_times(0.01, 100.0, 10);
            sc.leakage_threshold = std::numeric_limits<double>::infinity();
            break;
    }
    return sc;
}

int cmd_figures(int which, const std::string& out_dir, std::size_t n, std::ostream& out) {
    if (n < 16) throw ConfigError("--n", "must be >= 16");
    const Scenario sc = figure_scenario(which, n);
    const RadialRun run = simulate(sc);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        const std::string path = join(out_dir, name);
        write_file(path, text);
        written.push_back(path);
    };
    if (which == 1) {
        const double k = solve_k(initial_weighted_mass(sc), sc.params);
        const ProfileSpec F = ProfileSpec::make(ProfileKind::F, sc.params, k);
        emit("figure1_profile.csv", table_csv("r,F", profile_rows(F, -3.0, 1.0, 801, 1.0)));
        emit("figure1_evolution.csv", evolution_csv(run, sc.grid));
    } else if (which == 2) {
        const ProfileSpec E = ProfileSpec::make(ProfileKind::EK, sc.params, 1.0);
        emit("figure2_profile.csv", table_csv("r,E_K", profile_rows(E, -12.0, 2.0, 1401, 1.0)));
        emit("figure2_evolution.csv", evolution_csv(run, sc.grid));
    } else {
        // Snapshots at 0, 0.1, 1, 10, 100 for the evolution plot; the
        // location and height of the maximum at every snapshot.
        RadialRun coarse;
        std::vector<std::vector<double>> peak;
        for (const auto& u : run.snapshots) {
            std::size_t arg = 0;
            for (std::size_t i = 1; i < u.size(); ++i) {
                if (u[i] > u[arg]) arg = i;
            }
            if (u.t() > 0.0) peak.push_back({u.t(), sc.grid.node(arg), u[arg]});
            const double lt = u.t() > 0.0 ? std::log10(u.t()) : 0.0;
            if (u.t() == 0.0 || (lt >= -1.0 - 1e-9 && std::abs(lt - std::round(lt)) < 1e-9)) coarse.snapshots.push_back(u);
        }
        emit("figure3_evolution.csv", evolution_csv(coarse, sc.grid));
        emit("figure3_maximum.csv", table_csv("t,r_max,u_max", peak));
    }
    out << "figure " << which << ": " << run.steps << " steps\n";
    for (const auto& p : written) out << "  -> " << p << "\n";
    return 0;
}

}  // namespace

void emit_csv(const ExperimentReport& report, const std::string& path) { write_file(path, format_report_csv(report)); }

std::size_t worker_count(std::size_t jobs) {
    std::size_t cap = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PMELAB_THREADS"); env != nullptr && *env != '\0') {
        std::size_t v = 0;
        const std::string_view s(env);
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v == 0) {
            throw ConfigError("PMELAB_THREADS", "must be a positive integer, got '" + std::string(s) + "'");
        }
        cap = v;
    }
    return std::max<std::size_t>(1, std::min(cap, jobs));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"pmelab: radial porous medium equation with singular density |x|^-2"};
    app.require_subcommand(1);

    std::string sim_config, sim_out, sim_eq = "line";
    std::size_t sim_stride = 1;
    auto* sim = app.add_subcommand("simulate", "run the solver and write every snapshot");
    sim->add_option("--config", sim_config, "scenario config file (default: Bump data)");
    sim->add_option("--out", sim_out, "output directory");
    sim->add_option("--equation", sim_eq, "line (through tr1) or radial")->check(CLI::IsMember({"line", "radial"}));
    sim->add_option("--stride", sim_stride, "write every k-th node")->check(CLI::PositiveNumber);

    ProfileArgs pa;
    auto* prof = app.add_subcommand("profiles", "dump a closed-form profile");
    prof->add_option("--kind", pa.kind, "F, W, EK, V, BD, TildeEK, TildeF or TildeBD")->required();
    prof->add_option("--m", pa.m, "exponent m > 1");
    prof->add_option("--N", pa.N, "dimension N >= 3");
    prof->add_option("--K", pa.K, "plateau height (EK, V, TildeEK)");
    prof->add_option("--k", pa.k, "mass constant (F, W, TildeF)");
    prof->add_option("--D", pa.D, "Barenblatt constant (BD, TildeBD)");
    prof->add_option("--t", pa.t, "time: t for radial kinds, tau for W and V");
    prof->add_option("--lo", pa.lo, "first abscissa: log r, or s for W and V");
    prof->add_option("--hi", pa.hi, "last abscissa");
    prof->add_option("--n", pa.n, "number of points");
    prof->add_option("--out", pa.out, "output file (default: stdout)");

    RiemannArgs ra;
    auto* rie = app.add_subcommand("riemann", "exact solution of W_tau + (W^m)_s = 0 with a jump at s = 0");
    rie->add_option("--m", ra.m, "exponent m > 1");
    rie->add_option("--wl", ra.wl, "left state");
    rie->add_option("--wr", ra.wr, "right state");
    rie->add_option("--tau", ra.tau, "time");
    rie->add_option("--s-min", ra.s_min, "first abscissa");
    rie->add_option("--s-max", ra.s_max, "last abscissa");
    rie->add_option("--n", ra.n, "number of points");
    rie->add_option("--out", ra.out, "output file (default: stdout)");

    ExperimentArgs ea;
    auto* exp = app.add_subcommand("experiment", "run theorem checks and write report CSVs");
    exp->add_option("names", ea.names, "theorem1 theorem1b theorem2 theorem3 decay viscosity entropy")
        ->check(CLI::IsMember(experiment_names()));
    exp->add_option("--config", ea.config, "scenario config file");
    exp->add_option("--out", ea.out_dir, "output directory (overrides the config)");
    exp->add_option("--n", ea.n, "grid size override");

    int fig = 1;
    std::string fig_out = ".";
    std::size_t fig_n = 2048;
    auto* figs = app.add_subcommand("figures", "write plot-ready CSVs for the figure scenarios");
    figs->add_option("which", fig, "1, 2 or 3")->required()->check(CLI::IsMember({1, 2, 3}));
    figs->add_option("--out", fig_out, "output directory");
    figs->add_option("--n", fig_n, "grid size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim) return cmd_simulate(sim_config, sim_out, sim_eq, sim_stride, out);
        if (*prof) return cmd_profiles(pa, out);
        if (*rie) return cmd_riemann(ra, out);
        if (*exp) return cmd_experiment(ea, out);
        if (*figs) return cmd_figures(fig, fig_out, fig_n, out);
    } catch (const ConfigError& e) {
        err << "pmelab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "pmelab: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace pmelab
