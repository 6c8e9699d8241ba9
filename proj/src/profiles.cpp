#include "pmelab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pmelab {

std::string to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::F: return "F";
        case ProfileKind::W: return "W";
        case ProfileKind::EK: return "EK";
        case ProfileKind::V: return "V";
        case ProfileKind::BD: return "BD";
        case ProfileKind::TildeEK: return "TildeEK";
        case ProfileKind::TildeF: return "TildeF";
        case ProfileKind::TildeBD: return "TildeBD";
    }
    return "?";
}

ProfileKind profile_kind_from_string(const std::string& name) {
    for (auto k : {ProfileKind::F, ProfileKind::W, ProfileKind::EK, ProfileKind::V, ProfileKind::BD,
                   ProfileKind::TildeEK, ProfileKind::TildeF, ProfileKind::TildeBD}) {
        if (to_string(k) == name) return k;
    }
    throw ValidationError("unknown profile kind '" + name + "'");
}

ProfileConstant constant_of(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::EK:
        case ProfileKind::V:
        case ProfileKind::TildeEK: return ProfileConstant::K;
        case ProfileKind::F:
        case ProfileKind::W:
        case ProfileKind::TildeF: return ProfileConstant::k;
        case ProfileKind::BD:
        case ProfileKind::TildeBD: return ProfileConstant::D;
    }
    return ProfileConstant::K;
}

ProfileSpec ProfileSpec::make(ProfileKind kind, const Parameters& params, double constant) {
    ProfileSpec spec;
    spec.kind = kind;
    spec.params = params;
    switch (constant_of(kind)) {
        case ProfileConstant::K: spec.K = constant; break;
        case ProfileConstant::k: spec.k = constant; break;
        case ProfileConstant::D: spec.D = constant; break;
    }
    spec.validate();
    return spec;
}

void ProfileSpec::validate() const {
    const auto need = constant_of(kind);
    const std::string name = to_string(kind);
    auto require_positive = [&](const std::optional<double>& c, const char* label) {
        if (!c) throw ValidationError(name + " profile requires constant " + label);
        if (!(*c > 0.0) || !std::isfinite(*c)) {
            throw ValidationError(name + " profile requires " + label + " > 0");
        }
    };
    if (need == ProfileConstant::K) require_positive(K, "K");
    else if (K) throw ValidationError(name + " profile does not take K");
    if (need == ProfileConstant::k) require_positive(k, "k");
    else if (k) throw ValidationError(name + " profile does not take k");
    if (need == ProfileConstant::D) {
        if (!D || !std::isfinite(*D)) throw ValidationError(name + " profile requires a finite D");
    } else if (D) {
        throw ValidationError(name + " profile does not take D");
    }
}

namespace {

void require_kind(const ProfileSpec& spec, std::initializer_list<ProfileKind> kinds, const char* op) {
    if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end()) {
        throw ValidationError(std::string(op) + ": wrong profile kind " + to_string(spec.kind));
    }
}

void require_time(double t, const char* op) {
    if (!(t > 0.0)) throw ValidationError(std::string(op) + ": time must be > 0");
}

void require_radius(double r, const char* op) {
    if (!(r > 0.0)) throw ValidationError(std::string(op) + ": r must be > 0");
}

// x_+^p with the positive part taken before exponentiation.
double pos_pow(double x, double p) { return x > 0.0 ? std::pow(x, p) : 0.0; }

double c_m(const Parameters& p) { return p.m * (p.N - 2); }

}  // namespace

double k_radial(double k, const Parameters& params) {
    return k * std::pow(static_cast<double>(params.N - 2), 2.0 / params.m - 1.0);
}

double eval_F_log(const ProfileSpec& spec, double log_r, double t) {
    require_kind(spec, {ProfileKind::F}, "eval_F");
    require_time(t, "eval_F");
    const auto& p = spec.params;
    const double t_root = std::pow(t, 1.0 / p.m);
    if (log_r < -k_radial(*spec.k, p) * t_root) return 0.0;
    return pos_pow(-log_r / (t_root * c_m(p)), 1.0 / (p.m - 1.0)) / t_root;
}

double eval_F(const ProfileSpec& spec, double r, double t) {
    require_radius(r, "eval_F");
    return eval_F_log(spec, std::log(r), t);
}

double eval_W(const ProfileSpec& spec, double s, double tau) {
    require_kind(spec, {ProfileKind::W}, "eval_W");
    require_time(tau, "eval_W");
    const auto& p = spec.params;
    const double root = std::pow(tau, 1.0 / p.m);
    if (s < 0.0 || s >= *spec.k * root) return 0.0;
    return pos_pow(s / (root * p.m), 1.0 / (p.m - 1.0)) / root;
}

double eval_EK_log(const ProfileSpec& spec, double log_r, double t) {
    require_kind(spec, {ProfileKind::EK}, "eval_EK");
    require_time(t, "eval_EK");
    const auto& p = spec.params;
    const double K = *spec.K;
    if (log_r >= 0.0) return 0.0;
    if (-log_r >= p.m * std::pow(K, p.m - 1.0) * (p.N - 2) * t) return K;
    return pos_pow(-log_r / (c_m(p) * t), 1.0 / (p.m - 1.0));
}

double eval_EK(const ProfileSpec& spec, double r, double t) {
    require_radius(r, "eval_EK");
    return eval_EK_log(spec, std::log(r), t);
}

double eval_V(const ProfileSpec& spec, double s, double tau) {
    require_kind(spec, {ProfileKind::V}, "eval_V");
    require_time(tau, "eval_V");
    const auto& p = spec.params;
    const double K = *spec.K;
    if (s <= 0.0) return 0.0;
    if (s >= p.m * std::pow(K, p.m - 1.0) * tau) return K;
    return std::pow(s / (p.m * tau), 1.0 / (p.m - 1.0));
}

double eval_BD_log(const ProfileSpec& spec, double log_r, double t) {
    require_kind(spec, {ProfileKind::BD}, "eval_BD");
    require_time(t, "eval_BD");
    const auto& p = spec.params;
    const double a = 1.0 / ((p.m - 1.0) * (p.N - 2));
    const double bracket = *spec.D - (log_r - a * std::log(t)) / c_m(p);
    return std::pow(t, -1.0 / (p.m - 1.0)) * pos_pow(bracket, 1.0 / (p.m - 1.0));
}

double eval_BD(const ProfileSpec& spec, double r, double t) {
    require_radius(r, "eval_BD");
    return eval_BD_log(spec, std::log(r), t);
}

double eval_tilde_log(const ProfileSpec& spec, double log_r, double t) {
    require_kind(spec, {ProfileKind::TildeEK, ProfileKind::TildeF, ProfileKind::TildeBD}, "eval_tilde");
    require_time(t, "eval_tilde");
    const auto& p = spec.params;
    const double weight = std::exp((2.0 - p.N) / p.m * log_r);
    ProfileSpec base = spec;
    switch (spec.kind) {
        case ProfileKind::TildeEK:
            base.kind = ProfileKind::EK;
            return weight * eval_EK_log(base, -log_r, t);
        case ProfileKind::TildeF:
            // Support [1, e^{k_F t^{1/m}}), closed on the left.
            if (log_r >= k_radial(*spec.k, p) * std::pow(t, 1.0 / p.m)) return 0.0;
            base.kind = ProfileKind::F;
            return weight * eval_F_log(base, -log_r, t);
        case ProfileKind::TildeBD:
            base.kind = ProfileKind::BD;
            return weight * eval_BD_log(base, -log_r, t);
        default: break;
    }
    return 0.0;
}

double eval_tilde(const ProfileSpec& spec, double r, double t) {
    require_radius(r, "eval_tilde");
    return eval_tilde_log(spec, std::log(r), t);
}

bool is_line_profile(ProfileKind kind) { return kind == ProfileKind::W || kind == ProfileKind::V; }

double eval_profile(const ProfileSpec& spec, double x, double time) {
    switch (spec.kind) {
        case ProfileKind::F: return eval_F(spec, x, time);
        case ProfileKind::W: return eval_W(spec, x, time);
        case ProfileKind::EK: return eval_EK(spec, x, time);
        case ProfileKind::V: return eval_V(spec, x, time);
        case ProfileKind::BD: return eval_BD(spec, x, time);
        default: return eval_tilde(spec, x, time);
    }
}

namespace {

double eval_radial_log(const ProfileSpec& spec, double log_r, double t) {
    switch (spec.kind) {
        case ProfileKind::F: return eval_F_log(spec, log_r, t);
        case ProfileKind::EK: return eval_EK_log(spec, log_r, t);
        case ProfileKind::BD: return eval_BD_log(spec, log_r, t);
        default: return eval_tilde_log(spec, log_r, t);
    }
}

}  // namespace

RadialField sample_radial(const ProfileSpec& spec, const RadialGrid& grid, double t) {
    if (is_line_profile(spec.kind)) throw ValidationError("sample_radial: W and V live on the s-line");
    validate(grid);
    std::vector<double> v(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) v[i] = eval_radial_log(spec, grid.log_node(i), t);
    return RadialField(grid, std::move(v), t);
}

LineField sample_line(const ProfileSpec& spec, const LineGrid& grid, double tau) {
    if (!is_line_profile(spec.kind)) throw ValidationError("sample_line: only W and V live on the s-line");
    validate(grid);
    std::vector<double> v(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) v[j] = eval_profile(spec, grid.center(j), tau);
    return LineField(grid, std::move(v), tau);
}

namespace {

// Ramp g(x) for x < jump, 0 beyond, vertical segment at x = jump.
MultiGraph ramp_with_jump(std::span<const double> xs, double jump, double (*ramp)(double, const void*),
                          const void* ctx) {
    std::vector<GraphSample> out;
    out.reserve(xs.size() + 1);
    bool inserted = false;
    for (double x : xs) {
        if (!inserted && x >= jump) {
            const double hi = ramp(jump, ctx);
            out.push_back({jump, 0.0, hi});
            inserted = true;
            if (x == jump) continue;
        }
        const double v = x < jump ? ramp(x, ctx) : 0.0;
        out.push_back({x, v, v});
    }
    return MultiGraph(std::move(out));
}

}  // namespace

MultiGraph stationary_graph_Fbar(const ProfileSpec& spec, std::span<const double> y) {
    require_kind(spec, {ProfileKind::F}, "stationary_graph_Fbar");
    const auto& p = spec.params;
    struct Ctx { double c, e; } ctx{c_m(p), 1.0 / (p.m - 1.0)};
    return ramp_with_jump(
        y, k_radial(*spec.k, p),
        [](double x, const void* c) {
            const auto* q = static_cast<const Ctx*>(c);
            return pos_pow(x / q->c, q->e);
        },
        &ctx);
}

MultiGraph graph_W(const ProfileSpec& spec, double tau, std::span<const double> s) {
    require_kind(spec, {ProfileKind::W}, "graph_W");
    require_time(tau, "graph_W");
    const auto& p = spec.params;
    const double root = std::pow(tau, 1.0 / p.m);
    struct Ctx { double root, m; } ctx{root, p.m};
    return ramp_with_jump(
        s, *spec.k * root,
        [](double x, const void* c) {
            const auto* q = static_cast<const Ctx*>(c);
            return pos_pow(x / (q->root * q->m), 1.0 / (q->m - 1.0)) / q->root;
        },
        &ctx);
}

// ----------------------------------------------------------------------------

double mass_W(double k, const Parameters& params) {
    const double m = params.m;
    return (m - 1.0) / m * std::pow(m, -1.0 / (m - 1.0)) * std::pow(k, m / (m - 1.0));
}

double solve_k(double M_u0, const Parameters& params) {
    if (!(M_u0 > 0.0)) throw ValidationError("solve_k: M_u0 must be > 0");
    const double m = params.m;
    const double Mw = (params.N - 2) * M_u0 / params.omega1;
    return m * std::pow(Mw / (m - 1.0), (m - 1.0) / m);
}

double solve_k_quadrature(double M_u0, const Parameters& params, double tol) {
    if (!(M_u0 > 0.0)) throw ValidationError("solve_k: M_u0 must be > 0");
    const double m = params.m;
    const double target = (params.N - 2) * M_u0 / params.omega1;
    // Substituting y = k z^2 removes the endpoint singularity of the integrand.
    auto mass = [&](double k) {
        return integrate_adaptive(
            [&](double z) { return 2.0 * k * z * std::pow(k * z * z / m, 1.0 / (m - 1.0)); }, 0.0, 1.0,
            tol * std::max(target, 1e-300));
    };
    double lo = 0.0, hi = 1.0;
    while (mass(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw ValidationError("solve_k: bracket expansion failed");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mass(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double l12_mass_BD(double D, const Parameters& params, double t_ref) {
    require_time(t_ref, "l12_mass_BD");
    const auto spec = ProfileSpec::make(ProfileKind::BD, params, D);
    const double c = c_m(params);
    const double a = 1.0 / ((params.m - 1.0) * (params.N - 2));
    const double x_top = c * D + a * std::log(t_ref);  // log r at the free boundary
    const double depth = 80.0 / (params.N - 2);        // weight e^{(N-2)x} below e^{-80}
    // integral of r^{N-3} B dr = integral of e^{(N-2)x} B(e^x) dx, x = x_top - depth z^2
    auto integrand = [&](double z) {
        const double x = x_top - depth * z * z;
        return std::exp((params.N - 2) * x) * eval_BD_log(spec, x, t_ref) * 2.0 * depth * z;
    };
    const double rough = integrate_adaptive(integrand, 0.0, 1.0, 1e-300, 6);
    const double value = integrate_adaptive(integrand, 0.0, 1.0, 1e-14 * std::abs(rough));
    return params.omega1 * value;
}

double solve_D(double l12_mass, const Parameters& params, double t_ref) {
    if (!(l12_mass > 0.0)) throw ValidationError("solve_D: mass must be > 0");
    require_time(t_ref, "solve_D");
    double lo = -1.0, hi = 1.0;
    int expansions = 0;
    while (l12_mass_BD(lo, params, t_ref) > l12_mass || l12_mass_BD(hi, params, t_ref) < l12_mass) {
        if (++expansions > 60) {
            std::ostringstream os;
            os << "solve_D: bracket expansion failed for mass " << l12_mass << ", last bracket [" << lo
               << ", " << hi << "]";
            throw ValidationError(os.str());
        }
        const double w = hi - lo;
        if (l12_mass_BD(lo, params, t_ref) > l12_mass) lo -= w;
        if (l12_mass_BD(hi, params, t_ref) < l12_mass) hi += w;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (l12_mass_BD(mid, params, t_ref) < l12_mass ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace pmelab
