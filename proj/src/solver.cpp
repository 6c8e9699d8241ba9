#include "pmelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace pmelab {

void SolverConfig::validate() const {
    if (!(cfl > 0.0) || cfl > 1.0) throw ValidationError("SolverConfig: cfl must lie in (0, 1]");
    if (!(t_end >= 0.0)) throw ValidationError("SolverConfig: t_end must be >= 0");
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        const double t = snapshot_times[i];
        if (!(t >= 0.0) || t > t_end) throw ValidationError("SolverConfig: snapshot time outside [0, t_end]");
        if (i > 0 && !(t > snapshot_times[i - 1])) {
            throw ValidationError("SolverConfig: snapshot times must be strictly increasing");
        }
    }
    for (const auto* bc : {&bc_left, &bc_right}) {
        if (bc->kind == BoundaryKind::Dirichlet && (!(bc->value >= 0.0) || !std::isfinite(bc->value))) {
            throw ValidationError("SolverConfig: Dirichlet value must be finite and >= 0");
        }
    }
}

namespace {

/// w -> w^m with a multiply-only path for small integer m.
class PowerLaw {
public:
    explicit PowerLaw(double m) : m_(m) {
        const double r = std::round(m);
        if (r == m && r >= 2.0 && r <= 8.0) int_m_ = static_cast<int>(r);
    }

    void apply(std::span<const double> in, std::span<double> out) const {
        const std::size_t n = in.size();
        switch (int_m_) {
            case 2:
                for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * in[i];
                return;
            case 3:
                for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * in[i] * in[i];
                return;
            case 4:
                for (std::size_t i = 0; i < n; ++i) {
                    const double q = in[i] * in[i];
                    out[i] = q * q;
                }
                return;
            default:
                for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(in[i]);
        }
    }

    double operator()(double w) const {
        if (int_m_ > 0) {
            double r = w;
            for (int k = 1; k < int_m_; ++k) r *= w;
            return r;
        }
        return w > 0.0 ? std::pow(w, m_) : 0.0;
    }

private:
    double m_;
    int int_m_ = 0;
};

double ghost_value(const BoundaryCondition& bc, double interior) {
    return bc.kind == BoundaryKind::Dirichlet ? bc.value : interior;
}

double max_state(std::span<const double> v, const BoundaryCondition& a, const BoundaryCondition& b) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, x);
    if (a.kind == BoundaryKind::Dirichlet) mx = std::max(mx, a.value);
    if (b.kind == BoundaryKind::Dirichlet) mx = std::max(mx, b.value);
    return mx;
}

double wave_speed_bound(double max_w, double m) {
    return max_w > 0.0 ? m * std::pow(max_w, m - 1.0) : 0.0;
}

constexpr double kDtSlack = 1.0 + 1e-12;

/// In-place stepping with reusable scratch, shared by step_line and run_line.
class LineStepper {
public:
    LineStepper(const Parameters& params, double eps, BoundaryCondition left, BoundaryCondition right)
        : power_(params.m), m_(params.m), eps_(eps), left_(left), right_(right) {}

    double max_dt(std::span<const double> w, double ds) const {
        const double a = wave_speed_bound(max_state(w, left_, right_), m_);
        if (a == 0.0) return std::numeric_limits<double>::infinity();
        return ds * ds / (a * (2.0 * eps_ + ds));
    }

    /// Advances w by dt; returns the net mass that left through the two ends.
    double step(std::span<double> w, double ds, double dt) {
        const std::size_t n = w.size();
        padded_.resize(n + 2);
        U_.resize(n + 2);
        padded_[0] = ghost_value(left_, w[0]);
        std::copy(w.begin(), w.end(), padded_.begin() + 1);
        padded_[n + 1] = ghost_value(right_, w[n - 1]);
        power_.apply(padded_, U_);

        const double lam = dt / ds;
        const double mu = eps_ * dt / (ds * ds);
        const double* U = U_.data();
        double* out = w.data();
        for (std::size_t j = 0; j < n; ++j) {
            const double next = out[j] + lam * (U[j] - U[j + 1]) + mu * (U[j + 2] - 2.0 * U[j + 1] + U[j]);
            out[j] = next > 0.0 ? next : 0.0;
        }
        // Face fluxes at the two ends: upwind value minus diffusive flux.
        const double flux_in = U[0] - eps_ * (U[1] - U[0]) / ds;
        const double flux_out = U[n] - eps_ * (U[n + 1] - U[n]) / ds;
        return dt * (flux_out - flux_in);
    }

private:
    PowerLaw power_;
    double m_;
    double eps_;
    BoundaryCondition left_;
    BoundaryCondition right_;
    std::vector<double> padded_;
    std::vector<double> U_;
};

void check_eps(double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw ValidationError("eps_diff must be finite and >= 0");
}

}  // namespace

double cfl_dt(const LineField& w, const Parameters& params, double eps_diff, double cfl,
              const BoundaryCondition& left, const BoundaryCondition& right) {
    check_eps(eps_diff);
    LineStepper stepper(params, eps_diff, left, right);
    return cfl * stepper.max_dt(w.values(), w.grid().ds());
}

LineField step_line(const LineField& w, double dt, const Parameters& params, double eps_diff,
                    const BoundaryCondition& left, const BoundaryCondition& right) {
    check_eps(eps_diff);
    if (!(dt >= 0.0)) throw ValidationError("step_line: dt must be >= 0");
    LineStepper stepper(params, eps_diff, left, right);
    const double bound = stepper.max_dt(w.values(), w.grid().ds());
    if (dt > bound * kDtSlack) {
        std::ostringstream os;
        os << "step_line: dt = " << dt << " exceeds the monotone bound " << bound;
        throw ValidationError(os.str());
    }
    LineField out = w;
    stepper.step(out.mutable_values(), w.grid().ds(), dt);
    out.set_tau(w.tau() + dt);
    return out;
}

// ----------------------------------------------------------------------------

namespace {

/// Geometry of the radial finite-volume scheme.
struct RadialGeometry {
    std::vector<double> volume;     // r_i^{N-3} times trapezoid half-widths
    std::vector<double> face_coef;  // r_{i+1/2}^{N-1} / (r_{i+1} - r_i), i = 0..n-2

    RadialGeometry(const RadialGrid& g, const Parameters& p) : volume(g.n), face_coef(g.n - 1) {
        std::vector<double> r(g.n);
        for (std::size_t i = 0; i < g.n; ++i) r[i] = g.node(i);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double left = i > 0 ? r[i] - r[i - 1] : 0.0;
            const double right = i + 1 < g.n ? r[i + 1] - r[i] : 0.0;
            volume[i] = std::pow(r[i], p.N - 3) * 0.5 * (left + right);
        }
        for (std::size_t i = 0; i + 1 < g.n; ++i) {
            const double mid = 0.5 * (r[i] + r[i + 1]);
            face_coef[i] = std::pow(mid, p.N - 1) / (r[i + 1] - r[i]);
        }
    }

    /// max over updated nodes of (sum of adjacent face coefficients)/volume.
    double stiffness(const BoundaryCondition& inner, const BoundaryCondition& outer) const {
        const std::size_t n = volume.size();
        double mx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0 && inner.kind == BoundaryKind::Dirichlet) continue;
            if (i + 1 == n && outer.kind == BoundaryKind::Dirichlet) continue;
            double c = 0.0;
            if (i > 0) c += face_coef[i - 1];
            if (i + 1 < n) c += face_coef[i];
            mx = std::max(mx, c / volume[i]);
        }
        return mx;
    }
};

class RadialStepper {
public:
    RadialStepper(const RadialGrid& g, const Parameters& p, BoundaryCondition inner, BoundaryCondition outer)
        : geo_(g, p), power_(p.m), m_(p.m), inner_(inner), outer_(outer),
          stiffness_(geo_.stiffness(inner, outer)) {}

    double max_dt(std::span<const double> u) const {
        const double a = wave_speed_bound(max_state(u, inner_, outer_), m_);
        if (a == 0.0 || stiffness_ == 0.0) return std::numeric_limits<double>::infinity();
        return 1.0 / (a * stiffness_);
    }

    void step(std::span<double> u, double dt) {
        const std::size_t n = u.size();
        if (inner_.kind == BoundaryKind::Dirichlet) u[0] = inner_.value;
        if (outer_.kind == BoundaryKind::Dirichlet) u[n - 1] = outer_.value;
        U_.resize(n);
        flux_.resize(n - 1);
        power_.apply(u, U_);
        for (std::size_t i = 0; i + 1 < n; ++i) flux_[i] = geo_.face_coef[i] * (U_[i + 1] - U_[i]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0 && inner_.kind == BoundaryKind::Dirichlet) continue;
            if (i + 1 == n && outer_.kind == BoundaryKind::Dirichlet) continue;
            const double right = i + 1 < n ? flux_[i] : 0.0;
            const double left = i > 0 ? flux_[i - 1] : 0.0;
            const double next = u[i] + dt * (right - left) / geo_.volume[i];
            u[i] = next > 0.0 ? next : 0.0;
        }
    }

    const RadialGeometry& geometry() const { return geo_; }

private:
    RadialGeometry geo_;
    PowerLaw power_;
    double m_;
    BoundaryCondition inner_;
    BoundaryCondition outer_;
    double stiffness_;
    std::vector<double> U_;
    std::vector<double> flux_;
};

double discrete_l12(const RadialGeometry& geo, std::span<const double> u, const Parameters& p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += geo.volume[i] * u[i];
    return p.omega1 * sum;
}

}  // namespace

double cfl_dt_radial(const RadialField& u, const Parameters& params, double cfl,
                     const BoundaryCondition& inner, const BoundaryCondition& outer) {
    RadialStepper stepper(u.grid(), params, inner, outer);
    return cfl * stepper.max_dt(u.values());
}

RadialField step_radial(const RadialField& u, double dt, const Parameters& params,
                        const BoundaryCondition& inner, const BoundaryCondition& outer) {
    if (!(dt >= 0.0)) throw ValidationError("step_radial: dt must be >= 0");
    RadialStepper stepper(u.grid(), params, inner, outer);
    const double bound = stepper.max_dt(u.values());
    if (dt > bound * kDtSlack) {
        std::ostringstream os;
        os << "step_radial: dt = " << dt << " exceeds the monotone bound " << bound;
        throw ValidationError(os.str());
    }
    RadialField out = u;
    stepper.step(out.mutable_values(), dt);
    out.set_t(u.t() + dt);
    return out;
}

std::vector<double> radial_rhs(const RadialGrid& grid, std::span<const double> U, const Parameters& params) {
    validate(grid);
    if (U.size() != grid.n) throw ValidationError("radial_rhs: size mismatch");
    RadialGeometry geo(grid, params);
    std::vector<double> out(grid.n, 0.0);
    for (std::size_t i = 1; i + 1 < grid.n; ++i) {
        const double right = geo.face_coef[i] * (U[i + 1] - U[i]);
        const double left = geo.face_coef[i - 1] * (U[i] - U[i - 1]);
        out[i] = (right - left) / geo.volume[i];
    }
    return out;
}

// ----------------------------------------------------------------------------

namespace {

/// Adaptive explicit loop landing exactly on snapshot times. `advance`
/// performs one step of the given size, `bound` returns the allowed step.
template <typename Bound, typename Advance, typename Record>
std::size_t integrate(double t0, const SolverConfig& cfg, Bound bound, Advance advance, Record record) {
    std::size_t steps = 0;
    double t = t0;
    std::vector<double> targets = cfg.snapshot_times;
    if (targets.empty() || targets.back() < cfg.t_end) targets.push_back(cfg.t_end);
    for (double target : targets) {
        if (target <= t0) continue;
        while (t < target) {
            if (steps >= cfg.max_steps) {
                std::ostringstream os;
                os << "max_steps (" << cfg.max_steps << ") exceeded at time " << t;
                throw std::runtime_error(os.str());
            }
            double dt = cfg.cfl * bound();
            bool land = false;
            if (!(dt < target - t) || target - t - dt <= 1e-13 * std::max(1.0, target)) {
                dt = target - t;
                land = true;
            }
            advance(dt);
            t = land ? target : t + dt;
            ++steps;
        }
        record(target);
    }
    return steps;
}

}  // namespace

LineRun run_line(LineField w0, const SolverConfig& cfg, const Parameters& params, double eps_diff) {
    cfg.validate();
    check_eps(eps_diff);
    LineRun out;
    const double ds = w0.grid().ds();
    LineStepper stepper(params, eps_diff, cfg.bc_left, cfg.bc_right);
    LineField w = std::move(w0);
    out.snapshots.push_back(w);
    auto mass = [&](const LineField& f) {
        double s = 0.0;
        for (double v : f.values()) s += v;
        return s * ds;
    };
    out.initial_mass = mass(w);
    const double t0 = w.tau();
    out.steps = integrate(
        t0, cfg, [&] { return stepper.max_dt(w.values(), ds); },
        [&](double dt) { out.boundary_outflow += stepper.step(w.mutable_values(), ds, dt); },
        [&](double target) {
            w.set_tau(target);
            out.snapshots.push_back(w);
        });
    out.final_mass = mass(w);
    const double scale = std::max(out.initial_mass, std::numeric_limits<double>::min());
    if (std::abs(out.boundary_outflow) > cfg.leakage_threshold * scale) {
        std::ostringstream os;
        os << "boundary mass exchange " << out.boundary_outflow << " exceeds " << cfg.leakage_threshold
           << " of the initial mass " << out.initial_mass;
        out.warnings.push_back(os.str());
    }
    return out;
}

RadialRun run_radial(RadialField u0, const SolverConfig& cfg, const Parameters& params) {
    cfg.validate();
    RadialRun out;
    RadialStepper stepper(u0.grid(), params, cfg.bc_left, cfg.bc_right);
    RadialField u = std::move(u0);
    out.snapshots.push_back(u);
    out.initial_l12 = discrete_l12(stepper.geometry(), u.values(), params);
    out.steps = integrate(
        u.t(), cfg, [&] { return stepper.max_dt(u.values()); },
        [&](double dt) { stepper.step(u.mutable_values(), dt); },
        [&](double target) {
            u.set_t(target);
            out.snapshots.push_back(u);
        });
    out.final_l12 = discrete_l12(stepper.geometry(), u.values(), params);
    const double drift = std::abs(out.final_l12 - out.initial_l12);
    if (drift > cfg.leakage_threshold * std::max(out.initial_l12, std::numeric_limits<double>::min())) {
        std::ostringstream os;
        os << "L12 mass drift " << drift << " exceeds " << cfg.leakage_threshold << " of " << out.initial_l12;
        out.warnings.push_back(os.str());
    }
    return out;
}

RadialRun run(const InitialCondition& ic, const RadialGrid& grid, const SolverConfig& cfg,
              const Parameters& params, Equation equation) {
    cfg.validate();
    auto u0 = ic.sample(grid);
    if (equation.kind == Equation::Kind::Radial) return run_radial(std::move(u0), cfg, params);

    SolverConfig line_cfg = cfg;
    line_cfg.t_end = tr1_tau(cfg.t_end, params);
    for (auto& t : line_cfg.snapshot_times) t = tr1_tau(t, params);
    // s increases toward r_min, so the radial ends swap.
    line_cfg.bc_left = cfg.bc_right;
    line_cfg.bc_right = cfg.bc_left;
    auto line = run_line(tr1_forward(u0, params), line_cfg, params, equation.eps_diff);

    std::vector<double> recorded;
    for (double t : cfg.snapshot_times) {
        if (t > 0.0) recorded.push_back(t);
    }
    if (cfg.t_end > 0.0 && (recorded.empty() || recorded.back() < cfg.t_end)) recorded.push_back(cfg.t_end);

    RadialRun out;
    out.steps = line.steps;
    out.warnings = std::move(line.warnings);
    out.snapshots.reserve(line.snapshots.size());
    for (std::size_t i = 0; i < line.snapshots.size(); ++i) {
        auto snap = tr1_inverse(line.snapshots[i], params);
        // Report the requested physical time rather than theta^2 tau.
        snap.set_t(i == 0 ? 0.0 : recorded[i - 1]);
        out.snapshots.push_back(std::move(snap));
    }
    auto l12 = [&](const RadialField& f) {
        return params.omega1 * quad_trapezoid(f, [&](double r) { return std::pow(r, params.N - 3); });
    };
    out.initial_l12 = l12(out.snapshots.front());
    out.final_l12 = l12(out.snapshots.back());
    return out;
}

SolutionEvaluator history_evaluator(const LineRun& run) {
    auto snaps = std::make_shared<std::vector<LineField>>(run.snapshots);
    return [snaps](double s, double tau) {
        const LineField* hit = nullptr;
        for (const auto& f : *snaps) {
            if (std::abs(f.tau() - tau) <= 1e-12 * std::max(1.0, tau)) {
                hit = &f;
                break;
            }
        }
        if (!hit) {
            std::ostringstream os;
            os << "no snapshot at tau = " << tau;
            throw ValidationError(os.str());
        }
        const auto& g = hit->grid();
        if (s < g.s_min || s > g.s_max) {
            std::ostringstream os;
            os << "s = " << s << " outside the computed window [" << g.s_min << ", " << g.s_max << "]";
            throw ValidationError(os.str());
        }
        const double x = (s - g.s_min) / g.ds() - 0.5;
        if (x <= 0.0) return (*hit)[0];
        if (x >= static_cast<double>(g.n - 1)) return (*hit)[g.n - 1];
        const auto j = static_cast<std::size_t>(x);
        const double f = x - static_cast<double>(j);
        return (1.0 - f) * (*hit)[j] + f * (*hit)[j + 1];
    };
}

// ----------------------------------------------------------------------------

double riemann_exact(const RiemannProblem& rp, double s, double tau) {
    if (!(tau > 0.0)) throw ValidationError("riemann_exact: tau must be > 0");
    if (!(rp.w_left >= 0.0) || !(rp.w_right >= 0.0)) throw ValidationError("riemann_exact: states must be >= 0");
    if (!(rp.m > 1.0)) throw ValidationError("riemann_exact: m must be > 1");
    const double m = rp.m;
    const double wl = rp.w_left;
    const double wr = rp.w_right;
    const double xi = s / tau;
    if (wl == wr) return wl;
    if (wl < wr) {
        // Rarefaction fan between the characteristic speeds m w^{m-1}.
        const double sl = m * std::pow(wl, m - 1.0);
        const double sr = m * std::pow(wr, m - 1.0);
        if (xi <= sl) return wl;
        if (xi >= sr) return wr;
        return std::pow(xi / m, 1.0 / (m - 1.0));
    }
    const double sigma = (std::pow(wl, m) - std::pow(wr, m)) / (wl - wr);
    return xi < sigma ? wl : wr;
}

}  // namespace pmelab
