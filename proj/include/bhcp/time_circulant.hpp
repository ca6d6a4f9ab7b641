#pragma once

// The omega-circulant backward-Euler time matrix
//
//         [  1                  -omega ]
//         [ -1   1                     ]
//   C  =  [     -1   1                 ]      (N_t x N_t)
//         [          .    .            ]
//         [              -1    1       ]
//
// and its explicit diagonalization C = V D V^{-1} with V = G^{-1} F^*,
// V^{-1} = F G, G = diag(1, omega^{1/N_t}, ..., omega^{(N_t-1)/N_t}) and F
// the unitary DFT matrix with theta = exp(2 pi i / N_t).

#include "bhcp/fft.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace bhcp {

using cplx = std::complex<double>;

class TimeGrid {
public:
    /// Throws std::invalid_argument unless T > 0 and N >= 1.
    static TimeGrid build(double final_time, int steps);

    double final_time() const noexcept { return final_time_; }
    int steps() const noexcept { return steps_; }
    double tau() const noexcept { return tau_; }
    /// N + 1 unknown time levels y^0 .. y^N.
    std::size_t levels() const noexcept { return static_cast<std::size_t>(steps_) + 1; }

    bool operator==(const TimeGrid&) const = default;

private:
    TimeGrid(double final_time, int steps)
        : final_time_(final_time), steps_(steps), tau_(final_time / steps) {}

    double final_time_;
    int steps_;
    double tau_;
};

/// Dense C_omega, for tests and small checks. Throws std::invalid_argument
/// for omega == 0 or N_t < 2.
Eigen::MatrixXd build_comega(std::size_t levels, double omega);

/// First column (1, -1, 0, ..., 0).
std::vector<double> comega_first_column(std::size_t levels);

class CirculantDiagonalization {
public:
    CirculantDiagonalization(std::size_t levels, double omega);

    std::size_t levels() const noexcept { return levels_; }
    double omega() const noexcept { return omega_; }

    /// gamma_j = omega^{j / N_t}, principal branch.
    std::span<const cplx> gamma() const noexcept { return gamma_; }
    /// d_j = sqrt(N_t) (F G c_1)_j.
    std::span<const cplx> eigenvalues() const noexcept { return eigenvalues_; }

    /// max(|omega|, 1/|omega|)^{(N_t-1)/N_t}: cond(G), the roundoff
    /// amplification of the transform pair.
    double gamma_condition() const noexcept;

    Eigen::MatrixXcd dense_v() const;
    Eigen::MatrixXcd dense_v_inverse() const;

private:
    std::size_t levels_;
    double omega_;
    std::vector<cplx> gamma_;
    std::vector<cplx> eigenvalues_;
};

CirculantDiagonalization diagonalize(std::size_t levels, double omega);

class ImaginaryResidueError : public std::runtime_error {
public:
    ImaginaryResidueError(double ratio, double limit);
    double ratio() const noexcept { return ratio_; }

private:
    double ratio_;
};

/// Time-direction transforms on a column-major rows x N_t block (time is the
/// strided axis). Both directions cost O(rows N_t log N_t) and can split the
/// rows across workers.
class TimeTransform {
public:
    TimeTransform(std::shared_ptr<const CirculantDiagonalization> diag, std::size_t rows);

    std::size_t rows() const noexcept { return rows_; }
    const CirculantDiagonalization& diagonalization() const noexcept { return *diag_; }

    /// out = in (V^{-1})^T: scale column j by gamma_j, then a unitary
    /// e^{+i} DFT along time for each row.
    void to_eigenspace(std::span<const double> in, std::span<cplx> out, unsigned workers = 1) const;
    void to_eigenspace(std::span<cplx> block, unsigned workers = 1) const;

    /// out = Re(block V^T): unitary e^{-i} DFT along time, scale column j by
    /// 1 / gamma_j. `block` is overwritten. Returns ||Im|| / ||Re|| of the
    /// complex product; throws ImaginaryResidueError when it exceeds
    /// `imag_limit`.
    double from_eigenspace(std::span<cplx> block, std::span<double> out, unsigned workers = 1,
                           double imag_limit = 1e-8) const;

    /// Complex variant without the real-part projection.
    void from_eigenspace(std::span<cplx> block, unsigned workers = 1) const;

private:
    void check(std::size_t n) const;

    std::shared_ptr<const CirculantDiagonalization> diag_;
    std::size_t rows_;
    fft::TimeDft dft_;
};

}  // namespace bhcp
