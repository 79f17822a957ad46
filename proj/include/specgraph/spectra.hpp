#pragma once

#include "specgraph/reduction.hpp"

#include <Eigen/Dense>
#include <lapacke.h>

#include <complex>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

namespace specgraph {

using Complex = std::complex<double>;

struct ToleranceConfig {
    double zero_mod_tol = 1e-6;        ///< |lambda| below this is zero
    double one_tol = 1e-6;             ///< |lambda - 1| below this is one
    double real_axis_tol = 1e-9;       ///< |Im lambda| at most this with Re > 0 means theta = 0
    double generator_match_tol = 1e-4; ///< extra generating eigenvalues lie this close to the primary

    void validate() const {
        if (!(zero_mod_tol > 0) || !(one_tol > 0) || !(real_axis_tol > 0) || !(generator_match_tol > 0))
            throw ValidationError("all tolerances must be strictly positive");
    }
};

struct Spectrum {
    std::vector<Complex> eigenvalues;
    /// Column j pairs with eigenvalue j; unit norm, largest-modulus entry real positive.
    std::optional<Eigen::MatrixXcd> right_eigenvectors;

    std::size_t size() const noexcept { return eigenvalues.size(); }
    bool has_vectors() const noexcept { return right_eigenvectors.has_value(); }
};

enum class EigenClass { Zero, One, ThetaZero, ThetaNonzero };

inline const char *to_string(EigenClass c) {
    switch (c) {
    case EigenClass::Zero: return "zero";
    case EigenClass::One: return "one";
    case EigenClass::ThetaZero: return "theta_zero";
    case EigenClass::ThetaNonzero: return "theta_nonzero";
    }
    return "?";
}

struct PolarEigen {
    double r = 0.0;
    double theta = 0.0; ///< in [0, 2pi)
    bool theta_is_zero = false;
    EigenClass cls = EigenClass::ThetaNonzero;
};

struct PolarSummary {
    std::vector<PolarEigen> eigen;
    std::size_t n_zero = 0;
    std::size_t n_one = 0;
    std::size_t n_theta_nonzero = 0;
    double max_modulus = 0.0;
    double min_nonzero_modulus = 0.0;
};

/// Argument mapped into [0, 2pi).
inline double angle_0_2pi(Complex z) {
    double a = std::arg(z);
    if (a < 0.0)
        a += 2.0 * std::numbers::pi;
    if (a >= 2.0 * std::numbers::pi)
        a -= 2.0 * std::numbers::pi;
    return a;
}

/// FNV-1a over the raw matrix bytes; identifies a matrix in solver failure reports.
inline std::uint64_t matrix_hash(const Eigen::MatrixXd &m) {
    std::uint64_t h = 1469598103934665603ull;
    const auto *bytes = reinterpret_cast<const unsigned char *>(m.data());
    const std::size_t len = static_cast<std::size_t>(m.size()) * sizeof(double);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ull;
    }
    return h;
}

/// Rotates v so its largest-modulus component is real positive (first such index on ties).
inline void normalize_phase(Eigen::Ref<Eigen::VectorXcd> v) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    if (best_abs > 0.0)
        v *= std::conj(v(best)) / best_abs;
}

/**
 * All eigenvalues (and optionally right eigenvectors) of a dense real
 * nonsymmetric matrix via LAPACK dgeev. Complex pairs come back as
 * conjugates of each other bit-for-bit.
 */
inline Spectrum eig(const Eigen::MatrixXd &m, bool want_vectors) {
    const auto n = m.rows();
    if (n < 1 || m.cols() != n)
        throw ValidationError("eig: matrix must be square with dimension >= 1");
    if (!m.allFinite())
        throw ValidationError("eig: matrix has NaN or Inf entries");

    Eigen::MatrixXd work = m;
    std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
    Eigen::MatrixXd vr;
    if (want_vectors)
        vr.resize(n, n);
    const lapack_int ln = static_cast<lapack_int>(n);
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', ln, work.data(), ln,
                                          wr.data(), wi.data(), nullptr, 1, want_vectors ? vr.data() : nullptr,
                                          want_vectors ? ln : 1);
    if (info != 0) {
        std::ostringstream msg;
        msg << "eigensolver failed (dgeev info=" << info << ") on " << n << "x" << n << " matrix, hash 0x" << std::hex
            << matrix_hash(m);
        throw NumericalError(msg.str());
    }

    Spectrum s;
    s.eigenvalues.resize(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j)
        s.eigenvalues[static_cast<std::size_t>(j)] = {wr[static_cast<std::size_t>(j)], wi[static_cast<std::size_t>(j)]};

    if (want_vectors) {
        Eigen::MatrixXcd v(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double im = wi[static_cast<std::size_t>(j)];
            if (im == 0.0) {
                v.col(j) = vr.col(j).cast<Complex>();
            } else if (im > 0.0 && j + 1 < n) {
                v.col(j).real() = vr.col(j);
                v.col(j).imag() = vr.col(j + 1);
                v.col(j + 1) = v.col(j).conjugate();
                ++j;
            }
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const double nrm = v.col(j).norm();
            if (nrm > 0.0)
                v.col(j) /= nrm;
            normalize_phase(v.col(j));
        }
        s.right_eigenvectors = std::move(v);
    }
    return s;
}

inline Spectrum eig(const RecurrenceMatrix &r, bool want_vectors) { return eig(r.entries(), want_vectors); }

inline PolarEigen classify(Complex lambda, const ToleranceConfig &tol) {
    PolarEigen p;
    p.r = std::abs(lambda);
    p.theta = angle_0_2pi(lambda);
    if (p.r < tol.zero_mod_tol) {
        p.cls = EigenClass::Zero;
        p.theta_is_zero = false;
        return p;
    }
    p.theta_is_zero = std::abs(lambda.imag()) <= tol.real_axis_tol && lambda.real() > 0.0;
    if (std::abs(lambda - 1.0) < tol.one_tol)
        p.cls = EigenClass::One;
    else
        p.cls = p.theta_is_zero ? EigenClass::ThetaZero : EigenClass::ThetaNonzero;
    return p;
}

inline PolarSummary polar_classify(const Spectrum &s, const ToleranceConfig &tol) {
    tol.validate();
    PolarSummary out;
    out.eigen.reserve(s.size());
    double min_nz = 0.0;
    bool have_nz = false;
    for (const Complex &lambda : s.eigenvalues) {
        PolarEigen p = classify(lambda, tol);
        switch (p.cls) {
        case EigenClass::Zero: ++out.n_zero; break;
        case EigenClass::One: ++out.n_one; break;
        case EigenClass::ThetaNonzero: ++out.n_theta_nonzero; break;
        case EigenClass::ThetaZero: break;
        }
        out.max_modulus = std::max(out.max_modulus, p.r);
        if (p.cls != EigenClass::Zero && (!have_nz || p.r < min_nz)) {
            min_nz = p.r;
            have_nz = true;
        }
        out.eigen.push_back(p);
    }
    out.min_nonzero_modulus = min_nz;
    return out;
}

} // namespace specgraph
