#pragma once

// Long-time asymptotics of the defocusing Ablowitz-Ladik lattice.
//
// For a ray ξ = n/(2t) with |ξ| < 1 the phase
//   φ(λ) = λ + 1/λ + 2iξ log λ - 2
// has two stationary points S_1, S_2 on the unit circle, and q_n(t) is given to
// leading order by a Zakharov-Manakov sum over them. For |ξ| > 1 the solution
// decays like 1/t.
//
// Branch conventions:
//   * log λ and arg for the phase use arg ∈ [0, 2π), the θ-parametrization of
//     the circle.
//   * powers w^{iν} use the principal logarithm, arg ∈ (-π, π].
//   * the integration arc "from S_2 to S_1" is the arc not containing λ = 1.
//     For ξ >= 0 it runs clockwise through -i. For ξ < 0 it runs
//     counterclockwise through +i, and predictions are flagged as
//     convention-dependent.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <tuple>
#include <utility>
#include <vector>

#include "alrh/errors.hpp"
#include "alrh/scattering.hpp"
#include "alrh/special.hpp"

namespace alrh {

inline constexpr double kPi = std::numbers::pi;

/// arg z in [0, 2π).
inline double arg_circle(cplx z) {
    double a = std::arg(z);
    if (a < 0.0) a += 2.0 * kPi;
    if (a >= 2.0 * kPi) a -= 2.0 * kPi;
    return a;
}

/// φ(λ) = λ + λ^{-1} + 2iξ log λ - 2 with arg λ ∈ [0, 2π).
inline cplx phase(cplx lambda, double xi) {
    if (lambda == cplx{}) throw DomainError("phase: λ = 0");
    const cplx log_l{std::log(std::abs(lambda)), arg_circle(lambda)};
    return lambda + 1.0 / lambda + cplx{0.0, 2.0 * xi} * log_l - 2.0;
}

/// φ'(λ) = 1 - λ^{-2} + 2iξ/λ.
inline cplx phase_derivative(cplx lambda, double xi) {
    if (lambda == cplx{}) throw DomainError("phase_derivative: λ = 0");
    return 1.0 - 1.0 / (lambda * lambda) + cplx{0.0, 2.0 * xi} / lambda;
}

/// φ''(λ) = 2λ^{-3} - 2iξλ^{-2}; at S_j this is 2(-1)^j S_j^{-2} sqrt(1-ξ^2).
inline cplx phase_second_derivative(cplx lambda, double xi) {
    if (lambda == cplx{}) throw DomainError("phase_second_derivative: λ = 0");
    const cplx l2 = lambda * lambda;
    return 2.0 / (l2 * lambda) - cplx{0.0, 2.0 * xi} / l2;
}

/// S_j = -iξ + (-1)^j sqrt(1-ξ^2), returned as (S_1, S_2).
inline std::pair<cplx, cplx> stationary_points(double xi) {
    if (!(std::abs(xi) < 1.0))
        throw DomainError("stationary_points: |ξ| >= 1, the points leave the circle (use the fast-decay path)");
    const double s = std::sqrt((1.0 - xi) * (1.0 + xi));
    return {cplx{-s, -xi}, cplx{s, -xi}};
}

inline cplx stationary_point(double xi, int j) {
    const auto [s1, s2] = stationary_points(xi);
    return j == 1 ? s1 : s2;
}

/// ν = -ln(1 - |r|^2) / 2π.
inline double nu(cplx r_at_s) {
    const double r2 = std::norm(r_at_s);
    if (!(r2 < 1.0)) throw DomainError("nu: |r| >= 1");
    return -std::log1p(-r2) / (2.0 * kPi);
}

/// φ(S_j) = 2((-1)^j sqrt(1-ξ^2) - ξ arg S_j - 1), arg ∈ [0, 2π).
inline double phi_at_S(double xi, int j) {
    if (j != 1 && j != 2) throw DomainError("phi_at_S: j must be 1 or 2");
    const cplx s = stationary_point(xi, j);
    const double sign = (j == 1) ? -1.0 : 1.0;
    return 2.0 * (sign * std::sqrt((1.0 - xi) * (1.0 + xi)) - xi * arg_circle(s) - 1.0);
}

/// Local scale at S_j: β_j = i (2t)^{-1/2} (1-ξ^2)^{-1/4} S_j, so that
/// t φ''(S_j)(λ - S_j)^2 / 2 = ±ζ^2/2 for λ = S_j + β_j ζ.
inline cplx beta(double xi, double t, int j) {
    if (!(t > 0.0)) throw DomainError("beta: t must be positive");
    const double scale = 1.0 / (std::sqrt(2.0 * t) * std::pow((1.0 - xi) * (1.0 + xi), 0.25));
    return cplx{0.0, scale} * stationary_point(xi, j);
}

/// β_j / sqrt(2) = (i/2) t^{-1/2} (1-ξ^2)^{-1/4} S_j, the scale obtained when
/// φ''(S_j) is taken without its factor 2. Reported for comparison only.
inline cplx beta_reduced(double xi, double t, int j) { return beta(xi, t, j) / std::sqrt(2.0); }

struct PhaseGeometry {
    double xi = 0.0;
    double t = 0.0;
    cplx S1, S2;
    cplx r_S1, r_S2;
    double nu1 = 0.0, nu2 = 0.0;
    double phiS1 = 0.0, phiS2 = 0.0;
    cplx beta1, beta2;
};

/// Periodic 4-point Lagrange interpolation of nodal data on θ_k = 2πk/N.
template <class T>
T interpolate_periodic(const std::vector<T>& values, double theta) {
    const std::size_t n = values.size();
    if (n < 4) throw DomainError("interpolate_periodic: need at least 4 nodes");
    const double h = 2.0 * kPi / static_cast<double>(n);
    double x = std::fmod(theta, 2.0 * kPi);
    if (x < 0.0) x += 2.0 * kPi;
    x /= h;
    const double fl = std::floor(x);
    const double u = x - fl;
    const long i0 = static_cast<long>(fl);
    if (u == 0.0) return values[static_cast<std::size_t>(i0 % static_cast<long>(n))];
    const double w[4] = {
        -u * (u - 1.0) * (u - 2.0) / 6.0,
        (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
        -(u + 1.0) * u * (u - 2.0) / 2.0,
        (u + 1.0) * u * (u - 1.0) / 6.0,
    };
    T acc{};
    const long nn = static_cast<long>(n);
    for (int k = 0; k < 4; ++k) {
        const long idx = ((i0 - 1 + k) % nn + nn) % nn;
        acc += w[k] * values[static_cast<std::size_t>(idx)];
    }
    return acc;
}

/// The arc from S_2 to S_1 not containing λ = 1, as θ ∈ [lo, hi] with a
/// traversal direction (-1 clockwise, +1 counterclockwise).
struct IntegrationArc {
    double lo = 0.0;
    double hi = 0.0;
    double direction = -1.0;
    [[nodiscard]] double length() const { return hi - lo; }
};

inline IntegrationArc integration_arc(double xi) {
    const auto [s1, s2] = stationary_points(xi);
    const double th1 = arg_circle(s1);
    double th2 = arg_circle(s2);
    if (xi >= 0.0) {
        // S_2 in the fourth quadrant (or at 1 when ξ = 0); clockwise via -i.
        if (th2 < kPi) th2 += 2.0 * kPi;
        return {th1, th2, -1.0};
    }
    return {th2, th1, 1.0};
}

namespace detail {

// 8-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 8> kGlNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363,
};
inline constexpr std::array<double, 8> kGlWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763,
};

inline std::vector<double> arc_breakpoints(const IntegrationArc& arc, std::size_t n_nodes, int graded) {
    const double h = 2.0 * kPi / static_cast<double>(n_nodes);
    std::vector<double> bp;
    const double edge = std::min(h, 0.25 * arc.length());
    bp.push_back(arc.lo);
    for (int k = 1; k <= graded; ++k) {
        const double s = static_cast<double>(k) / graded;
        bp.push_back(arc.lo + edge * s * s);
    }
    const double first = std::ceil((arc.lo + edge) / h) * h;
    for (double x = first; x < arc.hi - edge - 1e-14; x += h)
        if (x > bp.back() + 1e-14) bp.push_back(x);
    for (int k = graded; k >= 1; --k) {
        const double s = static_cast<double>(k) / graded;
        const double x = arc.hi - edge * s * s;
        if (x > bp.back() + 1e-14) bp.push_back(x);
    }
    if (arc.hi > bp.back()) bp.push_back(arc.hi);
    return bp;
}

inline std::size_t nodes_inside(const IntegrationArc& arc, std::size_t n_nodes) {
    const double h = 2.0 * kPi / static_cast<double>(n_nodes);
    const double first = std::floor(arc.lo / h) + 1.0;
    const double last = std::ceil(arc.hi / h) - 1.0;
    return last >= first ? static_cast<std::size_t>(last - first + 1.0) : 0;
}

}  // namespace detail

struct ArcQuadratureOptions {
    int graded_nodes = 64;       // graded sub-panels at each endpoint
    std::size_t min_arc_nodes = 16;
};

/// (1/2πi) ∫_{S_2}^{S_1} F(s, θ) ds along the arc, where ds = i s dθ.
template <class Integrand>
cplx arc_cauchy_integral(const IntegrationArc& arc, std::size_t n_nodes, Integrand&& integrand,
                         const ArcQuadratureOptions& opt = {}) {
    if (detail::nodes_inside(arc, n_nodes) < opt.min_arc_nodes) {
        std::ostringstream os;
        os << "arc between the stationary points holds " << detail::nodes_inside(arc, n_nodes)
           << " grid nodes, fewer than " << opt.min_arc_nodes << "; increase N or move |ξ| away from 1";
        throw ResolutionError(os.str());
    }
    const auto bp = detail::arc_breakpoints(arc, n_nodes, opt.graded_nodes);
    cplx sum{};
    for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
        const double mid = 0.5 * (bp[p] + bp[p + 1]);
        const double half = 0.5 * (bp[p + 1] - bp[p]);
        cplx panel{};
        for (std::size_t g = 0; g < detail::kGlNodes.size(); ++g) {
            const double th = mid + half * detail::kGlNodes[g];
            const cplx s = std::polar(1.0, th);
            panel += detail::kGlWeights[g] * integrand(s, th) * s;
        }
        sum += half * panel;
    }
    return arc.direction * sum / (2.0 * kPi);
}

/// δ(λ) = exp((1/2πi) ∫_{S_2}^{S_1} ln(1-|r(s)|^2) / (s - λ) ds) for λ off the arc.
inline cplx delta(const ReflectionGrid& grid, double xi, cplx lambda, const ArcQuadratureOptions& opt = {}) {
    const auto f = log_transmission(grid);
    const auto arc = integration_arc(xi);
    const cplx e = arc_cauchy_integral(
        arc, grid.size(), [&](cplx s, double th) { return interpolate_periodic(f, th) / (s - lambda); }, opt);
    return std::exp(e);
}

/// δ(0). With the arc as above this equals exp(-(1/2π) ∫ ln(1-|r|^2) dθ) over
/// the arc for ξ >= 0, which is real and >= 1.
inline cplx delta_at_zero(const ReflectionGrid& grid, double xi, const ArcQuadratureOptions& opt = {}) {
    return delta(grid, xi, cplx{}, opt);
}

/// The factor entering the leading-order term: 1/δ(0).
inline cplx delta0_inv(const ReflectionGrid& grid, double xi, const ArcQuadratureOptions& opt = {}) {
    return 1.0 / delta_at_zero(grid, xi, opt);
}

/// α_j(S_j) = (1/2πi) ∫_{S_2}^{S_1} [f(s) - f(S_j)] / (s - S_j) ds, f = ln(1-|r|^2).
inline cplx alpha_at_S(const ReflectionGrid& grid, double xi, int j, const ArcQuadratureOptions& opt = {}) {
    if (j != 1 && j != 2) throw DomainError("alpha_at_S: j must be 1 or 2");
    const auto f = log_transmission(grid);
    const auto arc = integration_arc(xi);
    const cplx sj = stationary_point(xi, j);
    const double fj = interpolate_periodic(f, arg_circle(sj));
    return arc_cauchy_integral(
        arc, grid.size(),
        [&](cplx s, double th) {
            const cplx d = s - sj;
            if (std::abs(d) < 1e-15) return cplx{};
            return (interpolate_periodic(f, th) - fj) / d;
        },
        opt);
}

/// [M_1^{L,j}]_{12} = -i (2π)^{1/2} e^{iπ/4} e^{-πν/2} / (r(S_j) Γ(-iν)).
inline cplx m1_entry(double nu_j, cplx r_at_s) {
    if (r_at_s == cplx{}) throw DomainError("m1_entry: r(S_j) = 0, the term is absent");
    if (!(nu_j >= 0.0) || !std::isfinite(nu_j)) throw DomainError("m1_entry: ν must be finite and >= 0");
    const cplx lg = log_gamma(cplx{0.0, -nu_j});
    const cplx pref = cplx{0.0, -1.0} * std::sqrt(2.0 * kPi) * std::polar(1.0, kPi / 4.0);
    return pref * std::exp(-kPi * nu_j / 2.0 - lg) / r_at_s;
}

struct ZMPrediction {
    int n = 0;
    double t = 0.0;
    PhaseGeometry geometry;
    cplx delta0;      // δ(0)
    cplx delta0_inv;  // 1/δ(0)
    cplx alpha1, alpha2;
    cplx delta10, delta20;
    cplx m1_1, m1_2;
    cplx prefactor;   // β_j / S_j
    cplx q_pred;
    double error_scale = 0.0;  // t^{-3/4}
    bool convention_dependent = false;
};

/// Phase geometry for the ray through (n, t), using r(S_j) from the grid.
inline PhaseGeometry phase_geometry(const ReflectionGrid& grid, double xi, double t) {
    PhaseGeometry g;
    g.xi = xi;
    g.t = t;
    std::tie(g.S1, g.S2) = stationary_points(xi);
    const auto f = log_transmission(grid);
    g.r_S1 = interpolate_periodic(grid.r, arg_circle(g.S1));
    g.r_S2 = interpolate_periodic(grid.r, arg_circle(g.S2));
    g.nu1 = std::max(0.0, -interpolate_periodic(f, arg_circle(g.S1)) / (2.0 * kPi));
    g.nu2 = std::max(0.0, -interpolate_periodic(f, arg_circle(g.S2)) / (2.0 * kPi));
    g.phiS1 = phi_at_S(xi, 1);
    g.phiS2 = phi_at_S(xi, 2);
    g.beta1 = beta(xi, t, 1);
    g.beta2 = beta(xi, t, 2);
    return g;
}

/// Zakharov-Manakov leading term
///   q_n(t) ≈ (1/δ(0)) Σ_j (β_j/S_j) δ_{j0}^2 [M_1^{L,j}]_{12},
///   δ_{j0} = exp(α_j(S_j) - (it/2) φ(S_j)) ((-1)^{j-1} β_j / (S_1 - S_2))^{(-1)^{j-1} iν_j}.
/// A term with r(S_j) = 0 or ν_j = 0 contributes zero.
inline ZMPrediction zm_predict(const ReflectionGrid& grid_in, int n, double t, const ArcQuadratureOptions& opt = {}) {
    if (!(t > 0.0)) throw DomainError("zm_predict: t must be positive");
    const double xi = n / (2.0 * t);
    if (!(std::abs(xi) < 1.0)) throw DomainError("zm_predict: |ξ| >= 1 is outside the Zakharov-Manakov region");
    const ReflectionGrid grid = grid_in.t_ref == 0.0 ? grid_in : evolve_reflection(grid_in, 0.0);

    ZMPrediction p;
    p.n = n;
    p.t = t;
    p.geometry = phase_geometry(grid, xi, t);
    p.convention_dependent = xi < 0.0;
    p.delta0 = delta_at_zero(grid, xi, opt);
    p.delta0_inv = 1.0 / p.delta0;
    p.alpha1 = alpha_at_S(grid, xi, 1, opt);
    p.alpha2 = alpha_at_S(grid, xi, 2, opt);
    p.error_scale = std::pow(t, -0.75);

    const auto& g = p.geometry;
    const cplx gap = g.S1 - g.S2;
    const cplx i{0.0, 1.0};
    auto delta_j0 = [&](cplx alpha, double phi_s, cplx beta_j, double nu_j, double sign) {
        const cplx base = sign * beta_j / gap;
        return std::exp(alpha - i * t * 0.5 * phi_s) * std::exp(sign * i * nu_j * std::log(base));
    };
    p.delta10 = delta_j0(p.alpha1, g.phiS1, g.beta1, g.nu1, 1.0);
    p.delta20 = delta_j0(p.alpha2, g.phiS2, g.beta2, g.nu2, -1.0);
    p.m1_1 = (g.r_S1 != cplx{} && g.nu1 > 0.0) ? m1_entry(g.nu1, g.r_S1) : cplx{};
    p.m1_2 = (g.r_S2 != cplx{} && g.nu2 > 0.0) ? m1_entry(g.nu2, g.r_S2) : cplx{};
    p.prefactor = g.beta1 / g.S1;  // identical for j = 1, 2
    p.q_pred = p.prefactor * p.delta0_inv * (p.delta10 * p.delta10 * p.m1_1 + p.delta20 * p.delta20 * p.m1_2);
    return p;
}

/// Envelope scale 1/t for rays with |n/(2t)| > 1.
inline double fast_region_scale(int n, double t) {
    if (!(t > 0.0)) throw DomainError("fast_region_scale: t must be positive");
    if (!(std::abs(n / (2.0 * t)) > 1.0)) throw DomainError("fast_region_scale: |ξ| <= 1 is not the fast-decay region");
    return 1.0 / t;
}

}  // namespace alrh
