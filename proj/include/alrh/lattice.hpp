#pragma once

// Defocusing Ablowitz-Ladik lattice on a finite window with zero exterior:
//   i dq_n/dt = q_{n+1} - 2 q_n + q_{n-1} - |q_n|^2 (q_{n+1} + q_{n-1})

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "alrh/errors.hpp"

namespace alrh {

using cplx = std::complex<double>;

/// Amplitudes must stay below this modulus; ln(1-|q|^2) is unusable past it.
inline constexpr double kAdmissibleBound = 1.0 - 1e-9;

struct LatticeField {
    int n_min = 0;
    std::vector<cplx> q;
    double time = 0.0;

    [[nodiscard]] int n_max() const { return n_min + static_cast<int>(q.size()) - 1; }
    [[nodiscard]] std::size_t size() const { return q.size(); }
    [[nodiscard]] bool contains(int n) const { return n >= n_min && n <= n_max(); }

    /// q_n, zero outside the window.
    [[nodiscard]] cplx at(int n) const {
        return contains(n) ? q[static_cast<std::size_t>(n - n_min)] : cplx{};
    }

    [[nodiscard]] double sup_abs() const {
        double m = 0.0;
        for (const auto& v : q) m = std::max(m, std::abs(v));
        return m;
    }

    [[nodiscard]] double edge_abs() const {
        if (q.empty()) return 0.0;
        return std::max(std::abs(q.front()), std::abs(q.back()));
    }
};

struct SimConfig {
    double dt = 0.01;
    double t_end = 1.0;
    int record_every = 1;
    double truncation_tol = 1e-12;
};

struct SimResult {
    std::vector<LatticeField> snapshots;
    double log_mass_initial = 0.0;
    double log_mass_final = 0.0;
    double max_log_mass_drift = 0.0;
    double max_edge_abs = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

inline void check_admissible(std::span<const cplx> q, int n_min, const char* where) {
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double m = std::abs(q[k]);
        if (!(m < kAdmissibleBound)) {
            std::ostringstream os;
            os << where << ": |q_" << (n_min + static_cast<int>(k)) << "| = " << m
               << " violates sup|q| < 1";
            throw AdmissibilityError(os.str());
        }
    }
}

// dq/dt into out; no admissibility check.
inline void al_rhs_into(std::span<const cplx> q, std::span<cplx> out) {
    const std::size_t n = q.size();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx left = k > 0 ? q[k - 1] : cplx{};
        const cplx right = k + 1 < n ? q[k + 1] : cplx{};
        const cplx c = q[k];
        const double m2 = c.real() * c.real() + c.imag() * c.imag();
        const cplx s = left + right;
        const cplx bracket = s - 2.0 * c - m2 * s;
        // -i * bracket
        out[k] = cplx{bracket.imag(), -bracket.real()};
    }
}

}  // namespace detail

/// Time derivative of every window site; neighbours outside the window are zero.
inline std::vector<cplx> al_rhs(const LatticeField& field) {
    detail::check_admissible(field.q, field.n_min, "al_rhs");
    std::vector<cplx> out(field.q.size());
    detail::al_rhs_into(field.q, out);
    return out;
}

/// Σ_n ln(1 - |q_n|^2); equals ln c_{-∞} for a compactly supported field.
inline double conserved_log_mass(const LatticeField& field) {
    detail::check_admissible(field.q, field.n_min, "conserved_log_mass");
    double s = 0.0;
    for (const auto& v : field.q) s += std::log1p(-std::norm(v));
    return s;
}

/// Classical RK4 with reusable stage buffers.
class Rk4Stepper {
public:
    explicit Rk4Stepper(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

    void advance(std::vector<cplx>& q, double dt) {
        const std::size_t n = q.size();
        if (k1_.size() != n) *this = Rk4Stepper(n);
        detail::al_rhs_into(q, k1_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = q[i] + 0.5 * dt * k1_[i];
        detail::al_rhs_into(tmp_, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = q[i] + 0.5 * dt * k2_[i];
        detail::al_rhs_into(tmp_, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = q[i] + dt * k3_[i];
        detail::al_rhs_into(tmp_, k4_);
        const double w = dt / 6.0;
        for (std::size_t i = 0; i < n; ++i)
            q[i] += w * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

private:
    std::vector<cplx> k1_, k2_, k3_, k4_, tmp_;
};

/// One RK4 step of size dt.
inline LatticeField step(const LatticeField& field, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("step: dt must be positive and finite");
    detail::check_admissible(field.q, field.n_min, "step (input)");
    LatticeField next = field;
    Rk4Stepper stepper(next.q.size());
    stepper.advance(next.q, dt);
    next.time = field.time + dt;
    try {
        detail::check_admissible(next.q, next.n_min, "step");
    } catch (const AdmissibilityError& e) {
        throw AdmissibilityError(std::string(e.what()) + " after a step of dt = " + std::to_string(dt) +
                                 " (step too large or blow-up)");
    }
    return next;
}

/// Number of uniform sub-steps of size <= dt covering a span.
inline long step_count(double span, double dt) {
    if (span <= 0.0) return 0;
    return std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
}

/// Integrate to `t_target` with uniform steps no larger than dt. `observer`
/// (optional) sees the state after every step.
inline LatticeField advance_to(LatticeField field, double t_target, double dt,
                               const std::function<void(const LatticeField&)>& observer = {}) {
    if (!(dt > 0.0)) throw DomainError("advance_to: dt must be positive");
    if (t_target < field.time) throw DomainError("advance_to: integration runs forward in time only");
    detail::check_admissible(field.q, field.n_min, "advance_to");
    const double t0 = field.time;
    const long steps = step_count(t_target - t0, dt);
    if (steps == 0) return field;
    const double h = (t_target - t0) / static_cast<double>(steps);
    Rk4Stepper stepper(field.q.size());
    for (long s = 1; s <= steps; ++s) {
        stepper.advance(field.q, h);
        field.time = (s == steps) ? t_target : t0 + static_cast<double>(s) * h;
        // sup|q| is checked every step; cheap relative to the RHS.
        detail::check_admissible(field.q, field.n_min, "advance_to");
        if (observer) observer(field);
    }
    return field;
}

/// Integrate from field.time to config.t_end, keeping every record_every-th
/// state plus the initial and final ones.
inline SimResult simulate(const LatticeField& field, const SimConfig& config) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw ConfigError("simulate: dt must be positive");
    if (!std::isfinite(config.t_end) || config.t_end < field.time)
        throw ConfigError("simulate: t_end must be finite and not before the field time");
    if (config.record_every < 1) throw ConfigError("simulate: record_every must be >= 1");

    SimResult res;
    res.log_mass_initial = conserved_log_mass(field);
    res.snapshots.push_back(field);
    res.max_edge_abs = field.edge_abs();

    const long steps = step_count(config.t_end - field.time, config.dt);
    long count = 0;
    LatticeField last = advance_to(field, config.t_end, config.dt, [&](const LatticeField& f) {
        ++count;
        res.max_edge_abs = std::max(res.max_edge_abs, f.edge_abs());
        if (count % config.record_every == 0 || count == steps) {
            res.snapshots.push_back(f);
            const double drift = std::abs(conserved_log_mass(f) - res.log_mass_initial);
            res.max_log_mass_drift = std::max(res.max_log_mass_drift, drift);
        }
    });
    res.log_mass_final = conserved_log_mass(last);
    res.max_log_mass_drift = std::max(res.max_log_mass_drift, std::abs(res.log_mass_final - res.log_mass_initial));
    if (res.max_edge_abs > config.truncation_tol) {
        std::ostringstream os;
        os << "window edge amplitude reached " << res.max_edge_abs << " > truncation_tol "
           << config.truncation_tol << "; widen the window";
        res.warnings.push_back(os.str());
    }
    return res;
}

// Common initial fields.

inline LatticeField gaussian_field(double amplitude, double width, int half_window) {
    LatticeField f;
    f.n_min = -half_window;
    f.q.resize(static_cast<std::size_t>(2 * half_window + 1));
    for (int n = -half_window; n <= half_window; ++n) {
        const double x = n / width;
        f.q[static_cast<std::size_t>(n + half_window)] = amplitude * std::exp(-x * x);
    }
    return f;
}

inline LatticeField single_site_field(cplx c, int site = 0) {
    return LatticeField{site, {c}, 0.0};
}

/// Zero-pad a field to [n_lo, n_hi] (must contain the current window).
inline LatticeField padded(const LatticeField& f, int n_lo, int n_hi) {
    if (n_lo > f.n_min || n_hi < f.n_max()) throw ConfigError("padded: target window must contain the field");
    LatticeField g{n_lo, std::vector<cplx>(static_cast<std::size_t>(n_hi - n_lo + 1)), f.time};
    for (int n = f.n_min; n <= f.n_max(); ++n) g.q[static_cast<std::size_t>(n - n_lo)] = f.at(n);
    return g;
}

}  // namespace alrh
