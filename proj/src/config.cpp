#include "pmelab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace pmelab {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    if (trim(v).empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = v.find(',', pos);
        out.push_back(trim(v.substr(pos, comma == std::string_view::npos ? v.npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

// Text <-> value, one overload pair per field type.

std::string to_text(double x) { return format_double(x); }
std::string to_text(int x) { return std::to_string(x); }
std::string to_text(std::size_t x) { return std::to_string(x); }
std::string to_text(const std::string& x) { return x; }

std::string to_text(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_double(xs[i]);
    return out;
}

std::string to_text(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
    return out;
}

std::string to_text(const BoundaryCondition& bc) {
    return bc.kind == BoundaryKind::Dirichlet ? "dirichlet:" + format_double(bc.value) : "neumann";
}

void from_text(std::string_view v, double& out, const std::string& field) {
    double x = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() || std::isnan(x)) {
        throw ConfigError(field, "expected a number, got '" + std::string(v) + "'");
    }
    out = x;
}

template <class Int>
void parse_integer(std::string_view v, Int& out, const std::string& field) {
    Int x{};
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError(field, "expected an integer, got '" + std::string(v) + "'");
    }
    out = x;
}

void from_text(std::string_view v, int& out, const std::string& field) { parse_integer(v, out, field); }
void from_text(std::string_view v, std::size_t& out, const std::string& field) { parse_integer(v, out, field); }

void from_text(std::string_view v, std::string& out, const std::string& field) {
    if (v.empty()) throw ConfigError(field, "empty value");
    out = std::string(v);
}

void from_text(std::string_view v, std::vector<double>& out, const std::string& field) {
    out.clear();
    for (auto item : split_list(v)) {
        double x = 0.0;
        from_text(item, x, field);
        out.push_back(x);
    }
}

void from_text(std::string_view v, std::vector<std::string>& out, const std::string& field) {
    out.clear();
    for (auto item : split_list(v)) {
        if (item.empty()) throw ConfigError(field, "empty list entry");
        out.emplace_back(item);
    }
}

void from_text(std::string_view v, BoundaryCondition& out, const std::string& field) {
    if (v == "neumann") {
        out = BoundaryCondition::neumann_zero();
        return;
    }
    constexpr std::string_view prefix = "dirichlet:";
    if (v.substr(0, prefix.size()) == prefix) {
        double x = 0.0;
        from_text(trim(v.substr(prefix.size())), x, field);
        out = BoundaryCondition::dirichlet(x);
        return;
    }
    throw ConfigError(field, "expected 'neumann' or 'dirichlet:<value>', got '" + std::string(v) + "'");
}

struct Field {
    std::string section;
    std::string key;
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, std::string_view)> set;
};

template <class Access>
Field make_field(std::string section, std::string key, Access access) {
    const std::string name = section + "." + key;
    return {section, key, [access](const ScenarioConfig& c) { return to_text(access(c)); },
            [access, name](ScenarioConfig& c, std::string_view v) { from_text(v, access(c), name); }};
}

#define PMELAB_FIELD(section, key, member) make_field(section, key, [](auto& c) -> auto& { return c.member; })

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        PMELAB_FIELD("scenario", "id", id),
        PMELAB_FIELD("scenario", "m", m),
        PMELAB_FIELD("scenario", "N", N),
        PMELAB_FIELD("scenario", "experiments", experiments),
        PMELAB_FIELD("scenario", "output_dir", output_dir),
        PMELAB_FIELD("initial", "kind", initial.kind),
        PMELAB_FIELD("initial", "K", initial.K),
        PMELAB_FIELD("initial", "r_inner", initial.r_inner),
        PMELAB_FIELD("initial", "r_outer", initial.r_outer),
        PMELAB_FIELD("initial", "r", initial.r),
        PMELAB_FIELD("initial", "u", initial.u),
        PMELAB_FIELD("grid", "log_r_min", log_r_min),
        PMELAB_FIELD("grid", "log_r_max", log_r_max),
        PMELAB_FIELD("grid", "n", n),
        PMELAB_FIELD("run", "t_start", t_start),
        PMELAB_FIELD("run", "t_end", t_end),
        PMELAB_FIELD("run", "per_decade", per_decade),
        PMELAB_FIELD("run", "cfl", cfl),
        PMELAB_FIELD("run", "inner", inner),
        PMELAB_FIELD("run", "outer", outer),
        PMELAB_FIELD("run", "leakage_threshold", leakage_threshold),
        PMELAB_FIELD("theorem1", "p_list", theorem1.p_list),
        PMELAB_FIELD("theorem1", "t_from", theorem1.t_from),
        PMELAB_FIELD("theorem1", "t_to", theorem1.t_to),
        PMELAB_FIELD("theorem1", "factor", theorem1.factor),
        PMELAB_FIELD("theorem1", "k_tol", theorem1.k_tol),
        PMELAB_FIELD("theorem1b", "t_from", theorem1b.t_from),
        PMELAB_FIELD("theorem1b", "t_to", theorem1b.t_to),
        PMELAB_FIELD("theorem1b", "factor", theorem1b.factor),
        PMELAB_FIELD("theorem1b", "y_lo", theorem1b.y_lo),
        PMELAB_FIELD("theorem1b", "y_hi", theorem1b.y_hi),
        PMELAB_FIELD("theorem1b", "bernstein_C", theorem1b.bernstein_C),
        PMELAB_FIELD("theorem1b", "resolution", theorem1b.resolution),
        PMELAB_FIELD("theorem2", "K", theorem2.K),
        PMELAB_FIELD("theorem2", "R", theorem2.R),
        PMELAB_FIELD("theorem2", "t_from", theorem2.t_from),
        PMELAB_FIELD("theorem2", "t_to", theorem2.t_to),
        PMELAB_FIELD("theorem2", "factor", theorem2.factor),
        PMELAB_FIELD("theorem2", "origin_tol", theorem2.origin_tol),
        PMELAB_FIELD("theorem2", "monotone_tol", theorem2.monotone_tol),
        PMELAB_FIELD("theorem3", "delta", theorem3.delta),
        PMELAB_FIELD("theorem3", "region_exponent", theorem3.region_exponent),
        PMELAB_FIELD("theorem3", "t_from", theorem3.t_from),
        PMELAB_FIELD("theorem3", "t_to", theorem3.t_to),
        PMELAB_FIELD("theorem3", "factor", theorem3.factor),
        PMELAB_FIELD("theorem3", "D_tol", theorem3.D_tol),
        PMELAB_FIELD("decay", "band", decay.band),
        PMELAB_FIELD("viscosity", "K", viscosity.K),
        PMELAB_FIELD("viscosity", "lambdas", viscosity.lambdas),
        PMELAB_FIELD("viscosity", "tau", viscosity.tau),
        PMELAB_FIELD("viscosity", "s_min", viscosity.window.s_min),
        PMELAB_FIELD("viscosity", "s_max", viscosity.window.s_max),
        PMELAB_FIELD("viscosity", "n", viscosity.window.n),
        PMELAB_FIELD("viscosity", "self_error_factor", viscosity.self_error_factor),
        PMELAB_FIELD("viscosity", "cfl", viscosity.cfl),
        PMELAB_FIELD("entropy", "C", entropy.C),
        PMELAB_FIELD("entropy", "tau_min", entropy.tau_min),
    };
    return table;
}

#undef PMELAB_FIELD

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) throw ConfigError(field, message);
}

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

void check_window(double t_from, double t_to, const char* a, const char* b) {
    require(positive(t_from), a, "must be > 0");
    require(t_to > t_from && std::isfinite(t_to), b, "must exceed t_from");
}

void check(const ScenarioConfig& c) {
    require(c.m > 1.0 && std::isfinite(c.m), "scenario.m", "must be > 1");
    require(c.N >= 3, "scenario.N", "must be >= 3");
    for (const auto& e : c.experiments) {
        const auto& names = experiment_names();
        require(std::find(names.begin(), names.end(), e) != names.end(), "scenario.experiments",
                "unknown experiment '" + e + "'");
    }
    require(std::isfinite(c.log_r_min), "grid.log_r_min", "must be finite");
    require(c.log_r_max > c.log_r_min && std::isfinite(c.log_r_max), "grid.log_r_max", "must exceed log_r_min");
    require(c.log_r_min > -700.0 && c.log_r_max < 700.0, "grid.log_r_min", "|log r| must stay below 700");
    require(c.n >= 2, "grid.n", "must be >= 2");
    require(positive(c.t_start), "run.t_start", "must be > 0");
    require(c.t_end >= c.t_start && std::isfinite(c.t_end), "run.t_end", "must be >= t_start");
    require(c.per_decade >= 1, "run.per_decade", "must be >= 1");
    require(c.cfl > 0.0 && c.cfl <= 1.0, "run.cfl", "must lie in (0, 1]");
    require(c.inner.kind == BoundaryKind::NeumannZero || (c.inner.value >= 0.0 && std::isfinite(c.inner.value)),
            "run.inner", "Dirichlet value must be finite and >= 0");
    require(c.outer.kind == BoundaryKind::NeumannZero || (c.outer.value >= 0.0 && std::isfinite(c.outer.value)),
            "run.outer", "Dirichlet value must be finite and >= 0");
    require(c.leakage_threshold >= 0.0, "run.leakage_threshold", "must be >= 0");

    require(!c.theorem1.p_list.empty(), "theorem1.p_list", "must not be empty");
    for (double p : c.theorem1.p_list) require(p >= 1.0 && std::isfinite(p), "theorem1.p_list", "every p must be >= 1");
    check_window(c.theorem1.t_from, c.theorem1.t_to, "theorem1.t_from", "theorem1.t_to");
    require(positive(c.theorem1.factor), "theorem1.factor", "must be > 0");
    require(positive(c.theorem1.k_tol), "theorem1.k_tol", "must be > 0");
    check_window(c.theorem1b.t_from, c.theorem1b.t_to, "theorem1b.t_from", "theorem1b.t_to");
    require(positive(c.theorem1b.factor), "theorem1b.factor", "must be > 0");
    require(c.theorem1b.y_hi > c.theorem1b.y_lo, "theorem1b.y_hi", "must exceed y_lo");
    require(std::isfinite(c.theorem1b.bernstein_C), "theorem1b.bernstein_C", "must be finite");
    require(c.theorem1b.resolution >= 0.0, "theorem1b.resolution", "must be >= 0");
    require(positive(c.theorem2.K), "theorem2.K", "must be > 0");
    require(positive(c.theorem2.R), "theorem2.R", "must be > 0");
    check_window(c.theorem2.t_from, c.theorem2.t_to, "theorem2.t_from", "theorem2.t_to");
    require(positive(c.theorem2.factor), "theorem2.factor", "must be > 0");
    require(positive(c.theorem2.origin_tol), "theorem2.origin_tol", "must be > 0");
    require(c.theorem2.monotone_tol >= 0.0, "theorem2.monotone_tol", "must be >= 0");
    require(positive(c.theorem3.delta), "theorem3.delta", "must be > 0");
    require(std::isfinite(c.theorem3.region_exponent), "theorem3.region_exponent", "must be finite");
    check_window(c.theorem3.t_from, c.theorem3.t_to, "theorem3.t_from", "theorem3.t_to");
    require(positive(c.theorem3.factor), "theorem3.factor", "must be > 0");
    require(positive(c.theorem3.D_tol), "theorem3.D_tol", "must be > 0");
    require(c.decay.band >= 0.0 && c.decay.band < 1.0, "decay.band", "must lie in [0, 1)");
    require(positive(c.viscosity.K), "viscosity.K", "must be > 0");
    require(!c.viscosity.lambdas.empty(), "viscosity.lambdas", "must not be empty");
    for (double l : c.viscosity.lambdas) require(positive(l), "viscosity.lambdas", "every lambda must be > 0");
    require(positive(c.viscosity.tau), "viscosity.tau", "must be > 0");
    require(c.viscosity.window.s_max > c.viscosity.window.s_min, "viscosity.s_max", "must exceed s_min");
    require(c.viscosity.window.n >= 2, "viscosity.n", "must be >= 2");
    require(positive(c.viscosity.self_error_factor), "viscosity.self_error_factor", "must be > 0");
    require(c.viscosity.cfl > 0.0 && c.viscosity.cfl <= 1.0, "viscosity.cfl", "must lie in (0, 1]");
    require(std::isfinite(c.entropy.C), "entropy.C", "must be finite");
    require(c.entropy.tau_min > 0.0, "entropy.tau_min", "must be > 0");
    (void)c.scenario();
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"theorem1", "theorem1b", "theorem2", "theorem3",
                                                "decay",    "viscosity", "entropy"};
    return names;
}

Scenario ScenarioConfig::scenario() const {
    Scenario sc;
    sc.id = id;
    try {
        sc.params = make_parameters(m, N);
    } catch (const ValidationError& e) {
        throw ConfigError("scenario.m", e.what());
    }
    try {
        if (initial.kind == "bump") {
            sc.ic = InitialCondition::bump();
        } else if (initial.kind == "plateau") {
            sc.ic = InitialCondition::plateau(initial.K, initial.r_inner, initial.r_outer);
        } else if (initial.kind == "custom") {
            sc.ic = InitialCondition::custom(initial.r, initial.u);
        } else {
            throw ConfigError("initial.kind", "expected bump, plateau or custom, got '" + initial.kind + "'");
        }
    } catch (const ValidationError& e) {
        throw ConfigError("initial." + std::string(initial.kind == "custom" ? "r" : "K"), e.what());
    }
    sc.grid = RadialGrid{std::exp(log_r_min), std::exp(log_r_max), n};
    try {
        sc.times = log_times(t_start, t_end, per_decade);
    } catch (const ValidationError& e) {
        throw ConfigError("run.t_end", e.what());
    }
    sc.cfl = cfl;
    sc.inner = inner;
    sc.outer = outer;
    sc.leakage_threshold = leakage_threshold;
    return sc;
}

ScenarioConfig default_config(const std::string& experiment) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end()) {
        throw ConfigError("scenario.experiments", "unknown experiment '" + experiment + "'");
    }
    ScenarioConfig c;
    c.experiments = {experiment};
    if (experiment == "theorem2") {
        c.id = "plateau";
        c.initial.kind = "plateau";
        c.initial.K = 1.0;
        c.log_r_min = -200.0;
        c.log_r_max = 20.0;
        c.t_end = 50.0;
        c.leakage_threshold = std::numeric_limits<double>::infinity();
    }
    return c;
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig c;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no), "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            const bool known = std::any_of(fields().begin(), fields().end(),
                                           [&](const Field& f) { return f.section == section; });
            if (!known) throw ConfigError(section, "unknown section");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no), "expected key = value");
        if (section.empty()) throw ConfigError("line " + std::to_string(line_no), "key outside any section");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = std::find_if(fields().begin(), fields().end(),
                                     [&](const Field& f) { return f.section == section && f.key == key; });
        if (it == fields().end()) throw ConfigError(section + "." + key, "unknown key");
        it->set(c, value);
    }
    check(c);
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const ScenarioConfig& c) {
    std::string out;
    std::string section;
    for (const auto& f : fields()) {
        if (f.section != section) {
            if (!section.empty()) out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += f.key + " = " + f.get(c) + "\n";
    }
    return out;
}

}  // namespace pmelab
