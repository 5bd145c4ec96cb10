#pragma once

// Direct scattering for the Ablowitz-Ladik spectral problem
//   X(z, n+1) = [[z, q_n], [conj(q_n), 1/z]] X(z, n)
// on a compactly supported window. With X^- = z^{nσ3} left of the window and
// X^+ = z^{nσ3} right of it, S(z) = z^{-(n_max+1)σ3} T_{n_max} ... T_{n_min} z^{n_min σ3}
// = [[a, b̆], [b, ă]] and r(λ) = z b(z) / a(z) with λ = z^2.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "alrh/errors.hpp"
#include "alrh/lattice.hpp"

namespace alrh {

using Mat2 = Eigen::Matrix2cd;

/// Tolerance for accepting z as a point of the unit circle.
inline constexpr double kUnitCircleTol = 1e-12;

struct TransferMatrix {
    Mat2 entries;
    [[nodiscard]] cplx det() const { return entries.determinant(); }
};

struct ScatteringCoeffs {
    cplx a;
    cplx b;
};

struct ReflectionGrid {
    std::vector<double> thetas;
    std::vector<cplx> r;
    std::vector<cplx> a;
    double c_minus_inf = 1.0;
    double t_ref = 0.0;

    [[nodiscard]] std::size_t size() const { return r.size(); }

    [[nodiscard]] double sup_abs_r() const {
        double m = 0.0;
        for (const auto& v : r) m = std::max(m, std::abs(v));
        return m;
    }
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::vector<double> uniform_thetas(std::size_t n) {
    std::vector<double> th(n);
    for (std::size_t k = 0; k < n; ++k) th[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    return th;
}

inline TransferMatrix transfer_matrix(cplx q, cplx z) {
    if (z == cplx{}) throw DomainError("transfer_matrix: z = 0");
    TransferMatrix t;
    t.entries << z, q, std::conj(q), 1.0 / z;
    return t;
}

namespace detail {

inline void require_unimodular(cplx z, const char* where) {
    if (std::abs(std::abs(z) - 1.0) > kUnitCircleTol) {
        std::ostringstream os;
        os << where << ": |z| = " << std::abs(z) << " is not on the unit circle";
        throw DomainError(os.str());
    }
}

}  // namespace detail

/// Full scattering matrix S(z) for |z| = 1.
///
/// Each factor is conjugated into the free frame,
///   z^{-(n+1)σ3} T_n z^{nσ3} = [[1, q_n z^{-(2n+1)}], [conj(q_n) z^{2n+1}, 1]],
/// so the product telescopes and no large powers of z are accumulated.
inline Mat2 scattering_matrix(const LatticeField& field, cplx z) {
    detail::require_unimodular(z, "scattering_matrix");
    detail::check_admissible(field.q, field.n_min, "scattering_matrix");
    Mat2 s = Mat2::Identity();
    const cplx z2 = z * z;
    // z^{2n+1} for n = n_min, advanced by z^2 per site.
    cplx zp = std::pow(z, 2 * field.n_min + 1);
    for (std::size_t k = 0; k < field.q.size(); ++k) {
        const cplx q = field.q[k];
        if (q != cplx{}) {
            const cplx upper = q * std::conj(zp);  // |z| = 1: z^{-m} = conj(z^m)
            const cplx lower = std::conj(q) * zp;
            const cplx s00 = s(0, 0) + upper * s(1, 0);
            const cplx s01 = s(0, 1) + upper * s(1, 1);
            const cplx s10 = lower * s(0, 0) + s(1, 0);
            const cplx s11 = lower * s(0, 1) + s(1, 1);
            s << s00, s01, s10, s11;
        }
        zp *= z2;
        // Renormalize to the circle so rounding drift in |zp| stays bounded.
        if ((k & 63U) == 63U) zp /= std::abs(zp);
    }
    return s;
}

/// a(z) = S_11, b(z) = S_21.
inline ScatteringCoeffs scattering_coeffs(const LatticeField& field, cplx z) {
    const Mat2 s = scattering_matrix(field, z);
    return {s(0, 0), s(1, 0)};
}

/// Π (1 - |q_n|^2) over the window.
inline double c_minus_inf(const LatticeField& field) {
    detail::check_admissible(field.q, field.n_min, "c_minus_inf");
    double s = 0.0;
    for (const auto& v : field.q) s += std::log1p(-std::norm(v));
    return std::exp(s);
}

/// Relative residual of |a|^2 - |b|^2 = c_{-∞} (det S on the circle).
inline double unitarity_residual(cplx a, cplx b, double c) {
    return std::abs(std::norm(a) - std::norm(b) - c) / std::norm(a);
}

/// Reflection coefficient on θ_k = 2πk/N, λ_k = e^{iθ_k}, via z = e^{iθ_k/2}.
inline ReflectionGrid reflection_grid(const LatticeField& field, std::size_t n_nodes) {
    if (n_nodes < 4 || !is_power_of_two(n_nodes))
        throw DomainError("reflection_grid: N must be a power of two >= 4");
    ReflectionGrid g;
    g.thetas = uniform_thetas(n_nodes);
    g.r.resize(n_nodes);
    g.a.resize(n_nodes);
    g.c_minus_inf = c_minus_inf(field);
    g.t_ref = field.time;
    for (std::size_t k = 0; k < n_nodes; ++k) {
        const cplx z = std::polar(1.0, 0.5 * g.thetas[k]);
        const auto [a, b] = scattering_coeffs(field, z);
        const cplx r = z * b / a;
        if (!(std::abs(r) < 1.0)) {
            std::ostringstream os;
            os << "reflection_grid: |r| = " << std::abs(r) << " >= 1 at θ = " << g.thetas[k];
            throw InconsistencyError(os.str());
        }
        // det S = c_{-∞}; rounding scales with |a|^2 when |r| is close to 1.
        if (unitarity_residual(a, b, g.c_minus_inf) > 1e-9) {
            std::ostringstream os;
            os << "reflection_grid: (1-|r|^2)|a|^2 != c_{-inf} at θ = " << g.thetas[k];
            throw InconsistencyError(os.str());
        }
        g.a[k] = a;
        g.r[k] = r;
    }
    return g;
}

/// r(λ, t) = r(λ, t_ref) exp(2i (cos θ - 1)(t - t_ref)).
inline ReflectionGrid evolve_reflection(const ReflectionGrid& grid, double t) {
    if (!std::isfinite(t) || t < 0.0) throw DomainError("evolve_reflection: t must be finite and >= 0");
    ReflectionGrid out = grid;
    const double dt = t - grid.t_ref;
    for (std::size_t k = 0; k < grid.size(); ++k)
        out.r[k] = grid.r[k] * std::polar(1.0, 2.0 * (std::cos(grid.thetas[k]) - 1.0) * dt);
    out.t_ref = t;
    return out;
}

/// Deviation of S from ă(z) = conj(a(1/z̄)), b̆(z) = conj(b(1/z̄)) on |z| = 1.
inline double symmetry_check(const LatticeField& field, cplx z) {
    detail::require_unimodular(z, "symmetry_check");
    const Mat2 s = scattering_matrix(field, z);
    const Mat2 reflected = scattering_matrix(field, 1.0 / std::conj(z));
    return std::max(std::abs(s(1, 1) - std::conj(reflected(0, 0))),
                    std::abs(s(0, 1) - std::conj(reflected(1, 0))));
}

/// |det S(z) - c_{-∞}|.
inline double det_residual(const LatticeField& field, cplx z) {
    return std::abs(scattering_matrix(field, z).determinant() - c_minus_inf(field));
}

/// ln(1 - |r_k|^2) per node. Close to |r| = 1 the value comes from
/// ln c_{-∞} - 2 ln|a_k|, which does not cancel.
inline std::vector<double> log_transmission(const ReflectionGrid& grid) {
    std::vector<double> f(grid.size());
    const bool have_a = grid.a.size() == grid.size();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double r2 = std::norm(grid.r[k]);
        if (r2 >= 1.0) throw DomainError("log_transmission: |r| >= 1");
        if (have_a && r2 > 0.5 && grid.a[k] != cplx{})
            f[k] = std::log(grid.c_minus_inf) - 2.0 * std::log(std::abs(grid.a[k]));
        else
            f[k] = std::log1p(-r2);
    }
    return f;
}

/// Grid with prescribed r, t_ref = 0, and a chosen real so that
/// (1 - |r|^2)|a|^2 = c_{-∞} holds for the given c.
inline ReflectionGrid make_reflection_grid(std::vector<cplx> r, double c = 1.0) {
    if (!is_power_of_two(r.size()) || r.size() < 4) throw DomainError("make_reflection_grid: N must be a power of two");
    ReflectionGrid g;
    g.thetas = uniform_thetas(r.size());
    g.a.resize(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double r2 = std::norm(r[k]);
        if (r2 >= 1.0) throw DomainError("make_reflection_grid: |r| >= 1");
        g.a[k] = std::sqrt(c / (1.0 - r2));
    }
    g.r = std::move(r);
    g.c_minus_inf = c;
    return g;
}

}  // namespace alrh
