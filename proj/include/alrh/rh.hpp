#pragma once

// Reconstruction Riemann-Hilbert problem on the unit circle (clockwise, + side
// outside):
//   M_+ = M_- V,  V = [[1-|r|^2, -conj(r) e^{-itφ}], [r e^{itφ}, 1]],  M -> I at ∞,
// solved through the Beals-Coifman equation
//   μ = I + C_+(μ w_-) + C_-(μ w_+),   V = (I - w_-)^{-1} (I + w_+),
//   w_- = [[0, -conj(r) e^{-itφ}], [0, 0]],  w_+ = [[0, 0], [r e^{itφ}, 0]],
// and M(0) = I - mean_θ(μ (w_+ + w_-)). Then q_n(t) = M_12(0, n+1, t).
//
// On the circle t φ(λ, n, t) = t(2cos θ - 2) - nθ, so e^{itφ} = e^{2it(cos θ - 1)} λ^{-n}.

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "alrh/cauchy.hpp"
#include "alrh/errors.hpp"
#include "alrh/scattering.hpp"

namespace alrh {

struct JumpData {
    std::vector<double> thetas;
    std::vector<cplx> w_minus_12;  // only nonzero entry of w_-
    std::vector<cplx> w_plus_21;   // only nonzero entry of w_+
    int n = 0;
    double t = 0.0;

    [[nodiscard]] std::size_t size() const { return thetas.size(); }

    [[nodiscard]] Mat2 w_minus(std::size_t k) const {
        Mat2 m = Mat2::Zero();
        m(0, 1) = w_minus_12[k];
        return m;
    }
    [[nodiscard]] Mat2 w_plus(std::size_t k) const {
        Mat2 m = Mat2::Zero();
        m(1, 0) = w_plus_21[k];
        return m;
    }
    /// V_k = (I - w_-)^{-1} (I + w_+) = (I + w_-)(I + w_+).
    [[nodiscard]] Mat2 jump(std::size_t k) const {
        return (Mat2::Identity() + w_minus(k)) * (Mat2::Identity() + w_plus(k));
    }
};

struct RhOptions {
    /// Require N >= oversampling * (2|t| + |n|) so e^{itφ} is resolved.
    double oversampling = 8.0;
    /// Iterative-refinement sweeps after the dense LU solve.
    int refinement_steps = 1;
    /// Reject the solve if the LU reciprocal-condition estimate falls below this.
    double min_rcond = 1e-14;
};

struct BealsCoifmanSolve {
    std::vector<Mat2> mu;
    Mat2 M_at_zero = Mat2::Identity();
    double residual = 0.0;        // max_k |((1 - C_w)μ - I)_k|
    double condition_estimate = 1.0;
    double det_deviation = 0.0;   // |det M(0) - 1|
};

/// Exponent e^{itφ} at node θ for jump index n (reflection data at time t_ref).
inline cplx jump_exponential(double theta, int n, double t_elapsed) {
    return std::polar(1.0, 2.0 * t_elapsed * (std::cos(theta) - 1.0) - static_cast<double>(n) * theta);
}

inline JumpData build_jump(const ReflectionGrid& grid, int n, double t, const RhOptions& opt = {}) {
    const std::size_t nn = grid.size();
    if (!is_power_of_two(nn)) throw DomainError("build_jump: N must be a power of two");
    const double elapsed = t - grid.t_ref;
    const double bandwidth = 2.0 * std::abs(elapsed) + std::abs(static_cast<double>(n));
    if (static_cast<double>(nn) < opt.oversampling * bandwidth) {
        std::ostringstream os;
        os << "build_jump: N = " << nn << " under-resolves e^{itφ} (needs N >= " << opt.oversampling * bandwidth
           << " for n = " << n << ", t = " << t << ")";
        throw ResolutionError(os.str());
    }
    JumpData j;
    j.thetas = grid.thetas;
    j.n = n;
    j.t = t;
    j.w_minus_12.resize(nn);
    j.w_plus_21.resize(nn);
    for (std::size_t k = 0; k < nn; ++k) {
        const cplx r = grid.r[k];
        if (!(std::abs(r) < 1.0)) throw DomainError("build_jump: |r| >= 1");
        const cplx e = jump_exponential(grid.thetas[k], n, elapsed);
        if (std::abs(std::abs(e) - 1.0) > 1e-12) throw InconsistencyError("build_jump: exponent not unimodular");
        j.w_minus_12[k] = -std::conj(r) * std::conj(e);
        j.w_plus_21[k] = r * e;
    }
    return j;
}

namespace detail {

// Apply (1 - C_w) to the density rows (mu1, mu2) of one matrix row.
inline void apply_bc_operator(CauchyProjector& proj, const JumpData& jump, const std::vector<cplx>& mu1,
                              const std::vector<cplx>& mu2, std::vector<cplx>& out1, std::vector<cplx>& out2) {
    const std::size_t n = jump.size();
    std::vector<cplx> tmp(n), proj_out(n);
    // (μ w_-) has only a (·,2) entry: μ_1 w_-12; (μ w_+) only (·,1): μ_2 w_+21.
    for (std::size_t k = 0; k < n; ++k) tmp[k] = mu2[k] * jump.w_plus_21[k];
    proj.project(tmp, Side::minus, proj_out);
    for (std::size_t k = 0; k < n; ++k) out1[k] = mu1[k] - proj_out[k];
    for (std::size_t k = 0; k < n; ++k) tmp[k] = mu1[k] * jump.w_minus_12[k];
    proj.project(tmp, Side::plus, proj_out);
    for (std::size_t k = 0; k < n; ++k) out2[k] = mu2[k] - proj_out[k];
}

}  // namespace detail

/// Solve (1 - C_w) μ = I with C_w f = C_+(f w_-) + C_-(f w_+).
///
/// Eliminating the off-diagonal density component leaves, for each row,
///   (I - K) μ_{·1} = rhs,   K g = C_-( w_+21 · C_+( w_-12 · g ) ),
/// an N x N dense system factored once and shared by both rows.
inline BealsCoifmanSolve solve_beals_coifman(const JumpData& jump, const RhOptions& opt = {}) {
    const std::size_t n = jump.size();
    if (!is_power_of_two(n)) throw DomainError("solve_beals_coifman: N must be a power of two");
    CauchyProjector proj(n);
    const auto& wm = jump.w_minus_12;
    const auto& wp = jump.w_plus_21;

    // C_+ is circulant: C_+ e_j is the shift of C_+ e_0.
    std::vector<cplx> unit(n, cplx{}), cplus0(n);
    unit[0] = 1.0;
    proj.project(unit, Side::plus, cplus0);

    Eigen::MatrixXcd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<cplx> col(n), projected(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx wj = wm[j];
        for (std::size_t i = 0; i < n; ++i) col[i] = wp[i] * wj * cplus0[(i + n - j) % n];
        proj.project(col, Side::minus, projected);
        for (std::size_t i = 0; i < n; ++i)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (i == j ? 1.0 : 0.0) - projected[i];
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > opt.min_rcond)) {
        std::ostringstream os;
        os << "solve_beals_coifman: system is numerically singular (condition estimate " << 1.0 / rcond << ")";
        throw SolverError(os.str());
    }

    // Row 1: μ11 = 1 + C_-(μ12 w_+21), μ12 = C_+(μ11 w_-12)  -> rhs = 1.
    // Row 2: μ21 = C_-(μ22 w_+21), μ22 = 1 + C_+(μ21 w_-12)  -> rhs = C_-(w_+21).
    Eigen::MatrixXcd rhs(static_cast<Eigen::Index>(n), 2);
    const std::vector<cplx> cm_wp = proj.project(wp, Side::minus);
    for (std::size_t i = 0; i < n; ++i) {
        rhs(static_cast<Eigen::Index>(i), 0) = 1.0;
        rhs(static_cast<Eigen::Index>(i), 1) = cm_wp[i];
    }
    Eigen::MatrixXcd x = lu.solve(rhs);
    for (int sweep = 0; sweep < opt.refinement_steps; ++sweep) {
        const Eigen::MatrixXcd resid = rhs - a * x;
        x += lu.solve(resid);
    }

    std::vector<cplx> mu11(n), mu12(n), mu21(n), mu22(n), tmp(n);
    for (std::size_t i = 0; i < n; ++i) {
        mu11[i] = x(static_cast<Eigen::Index>(i), 0);
        mu21[i] = x(static_cast<Eigen::Index>(i), 1);
    }
    for (std::size_t i = 0; i < n; ++i) tmp[i] = mu11[i] * wm[i];
    proj.project(tmp, Side::plus, mu12);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = mu21[i] * wm[i];
    proj.project(tmp, Side::plus, mu22);
    for (auto& v : mu22) v += 1.0;

    BealsCoifmanSolve out;
    out.condition_estimate = 1.0 / rcond;
    out.mu.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.mu[i] << mu11[i], mu12[i], mu21[i], mu22[i];

    // Residual of the full (uneliminated) equation.
    std::vector<cplx> o1(n), o2(n);
    double res = 0.0;
    detail::apply_bc_operator(proj, jump, mu11, mu12, o1, o2);
    for (std::size_t i = 0; i < n; ++i) res = std::max({res, std::abs(o1[i] - 1.0), std::abs(o2[i])});
    detail::apply_bc_operator(proj, jump, mu21, mu22, o1, o2);
    for (std::size_t i = 0; i < n; ++i) res = std::max({res, std::abs(o1[i]), std::abs(o2[i] - 1.0)});
    out.residual = res;

    // M(0) = I + (1/2πi) ∮_clockwise μ w s^{-1} ds = I - mean(μ w).
    cplx s11{}, s12{}, s21{}, s22{};
    for (std::size_t i = 0; i < n; ++i) {
        s11 += mu12[i] * wp[i];
        s12 += mu11[i] * wm[i];
        s21 += mu22[i] * wp[i];
        s22 += mu21[i] * wm[i];
    }
    const double inv = 1.0 / static_cast<double>(n);
    out.M_at_zero << 1.0 - s11 * inv, -s12 * inv, -s21 * inv, 1.0 - s22 * inv;
    out.det_deviation = std::abs(out.M_at_zero.determinant() - 1.0);
    return out;
}

struct Reconstruction {
    cplx q;
    double residual = 0.0;
    double det_deviation = 0.0;
    double condition_estimate = 1.0;
};

/// q_n(t) = M_12(0, n+1, t), with diagnostics.
inline Reconstruction reconstruct(const ReflectionGrid& grid, int n, double t, const RhOptions& opt = {}) {
    const auto sol = solve_beals_coifman(build_jump(grid, n + 1, t, opt), opt);
    return {sol.M_at_zero(0, 1), sol.residual, sol.det_deviation, sol.condition_estimate};
}

inline cplx reconstruct_q(const ReflectionGrid& grid, int n, double t, const RhOptions& opt = {}) {
    return reconstruct(grid, n, t, opt).q;
}

/// Trigonometric resampling of nodal data to a different power-of-two size.
inline std::vector<cplx> resample_periodic(const std::vector<cplx>& values, std::size_t n_out) {
    const std::size_t n_in = values.size();
    if (!is_power_of_two(n_in) || !is_power_of_two(n_out)) throw DomainError("resample_periodic: sizes must be powers of two");
    if (n_in == n_out) return values;
    CauchyProjector p(n_in);
    std::vector<cplx> c(n_in);
    p.coefficients(values, c);
    std::vector<cplx> spec(n_out, cplx{});
    const long half = static_cast<long>(std::min(n_in, n_out) / 2);
    for (long m = -half + 1; m < half; ++m) {
        const auto src = static_cast<std::size_t>((m + static_cast<long>(n_in)) % static_cast<long>(n_in));
        const auto dst = static_cast<std::size_t>((m + static_cast<long>(n_out)) % static_cast<long>(n_out));
        spec[dst] = c[src] * static_cast<double>(n_out);
    }
    Eigen::FFT<double> fft;
    std::vector<cplx> out(n_out);
    fft.inv(out, spec);
    return out;
}

inline ReflectionGrid resample_grid(const ReflectionGrid& grid, std::size_t n_out) {
    ReflectionGrid g = grid;
    g.thetas = uniform_thetas(n_out);
    g.r = resample_periodic(grid.r, n_out);
    if (grid.a.size() == grid.size()) g.a = resample_periodic(grid.a, n_out);
    return g;
}

}  // namespace alrh
