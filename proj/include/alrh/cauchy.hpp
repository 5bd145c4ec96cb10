#pragma once

// Boundary values of the Cauchy transform on the unit circle.
//
// The circle is oriented clockwise, so its left (+) side is |λ| > 1. For nodal
// data f(λ_k) = Σ f̂_m λ_k^m on λ_k = e^{2πik/N},
//   C_+ f = Σ_{m<0} f̂_m λ^m     (boundary value from outside)
//   C_- f = -Σ_{m>=0} f̂_m λ^m   (boundary value from inside)
// and C_+ - C_- = identity. The Nyquist mode m = -N/2 is assigned to C_+.

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "alrh/errors.hpp"
#include "alrh/scattering.hpp"

namespace alrh {

enum class Side { plus, minus };

/// FFT-based projector for one grid size; reusable across calls.
class CauchyProjector {
public:
    explicit CauchyProjector(std::size_t n) : n_(n), spectrum_(n) {
        if (n < 2 || !is_power_of_two(n)) throw DomainError("CauchyProjector: N must be a power of two");
    }

    [[nodiscard]] std::size_t size() const { return n_; }

    /// Fourier coefficients f̂_m, stored at index m mod N.
    void coefficients(const std::vector<cplx>& f, std::vector<cplx>& out) {
        check(f);
        fft_.fwd(out, f);
        const double inv = 1.0 / static_cast<double>(n_);
        for (auto& v : out) v *= inv;
    }

    void project(const std::vector<cplx>& f, Side side, std::vector<cplx>& out) {
        check(f);
        fft_.fwd(spectrum_, f);
        const std::size_t half = n_ / 2;
        if (side == Side::plus) {
            for (std::size_t m = 0; m < half; ++m) spectrum_[m] = 0.0;
        } else {
            for (std::size_t m = half; m < n_; ++m) spectrum_[m] = 0.0;
            for (std::size_t m = 0; m < half; ++m) spectrum_[m] = -spectrum_[m];
        }
        fft_.inv(out, spectrum_);  // Eigen's inverse includes the 1/N
    }

    [[nodiscard]] std::vector<cplx> project(const std::vector<cplx>& f, Side side) {
        std::vector<cplx> out(n_);
        project(f, side, out);
        return out;
    }

private:
    void check(const std::vector<cplx>& f) const {
        if (f.size() != n_) throw DomainError("CauchyProjector: data size does not match N");
    }

    std::size_t n_;
    Eigen::FFT<double> fft_;
    std::vector<cplx> spectrum_;
};

/// C_± applied to scalar nodal data.
inline std::vector<cplx> cauchy_project(const std::vector<cplx>& values, Side side) {
    CauchyProjector p(values.size());
    return p.project(values, side);
}

/// C_± applied entrywise to per-node 2x2 matrices.
inline std::vector<Mat2> cauchy_project(const std::vector<Mat2>& values, Side side) {
    const std::size_t n = values.size();
    CauchyProjector p(n);
    std::vector<Mat2> out(n);
    std::vector<cplx> column(n), projected(n);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (std::size_t k = 0; k < n; ++k) column[k] = values[k](i, j);
            p.project(column, side, projected);
            for (std::size_t k = 0; k < n; ++k) out[k](i, j) = projected[k];
        }
    }
    return out;
}

}  // namespace alrh
