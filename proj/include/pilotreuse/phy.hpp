// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include <Eigen/Cholesky>

#include "pilotreuse/assignment.hpp"

namespace pilotreuse {

/// Orthogonal pilot book; column p is pilot p. Phi^H Phi = tau I, unit-modulus
/// entries.
struct PilotBook {
    CMatrix phi;
    bool binary = false;  // entries are +-1 (BPSK alphabet)

    int length() const { return static_cast<int>(phi.rows()); }
    CVector pilot(int p) const { return phi.col(p); }
};

/// Sylvester-Hadamard (BPSK) book when tau is a power of two, DFT book otherwise.
inline PilotBook build_pilot_book(int tau) {
    if (tau < 1) throw DomainError("build_pilot_book: tau must be >= 1");
    PilotBook book;
    if ((tau & (tau - 1)) == 0) {
        RMatrix h = RMatrix::Ones(1, 1);
        while (h.rows() < tau) {
            const auto n = h.rows();
            RMatrix next(2 * n, 2 * n);
            next << h, h, h, -h;
            h = std::move(next);
        }
        book.phi = h.cast<cplx>();
        book.binary = true;
    } else {
        book.phi.resize(tau, tau);
        for (int t = 0; t < tau; ++t)
            for (int p = 0; p < tau; ++p)
                book.phi(t, p) = std::polar(1.0, -kTwoPi * static_cast<double>((t * p) % tau) / tau);
    }
    return book;
}

/// K x tau pilot signal matrix, row k = sqrt(p_u) phi_{pi_k}^T.
inline CMatrix pilot_signal_matrix(const PilotBook& book, const PilotAssignment& assignment,
                                   const ActiveSet& active, double tx_power) {
    CMatrix psi(static_cast<Eigen::Index>(active.size()), book.length());
    for (std::size_t i = 0; i < active.size(); ++i)
        psi.row(static_cast<Eigen::Index>(i)) =
            std::sqrt(tx_power) * book.phi.col(assignment.pilot[active.indices[i]]).transpose();
    return psi;
}

/// Received pilot block Y = H Psi + N for a given noise block.
inline CMatrix pilot_rx(const CMatrix& channels, const CMatrix& psi, const CMatrix& noise) {
    if (channels.cols() != psi.rows() || noise.rows() != channels.rows() || noise.cols() != psi.cols())
        throw DomainError("pilot_rx: dimension mismatch");
    return channels * psi + noise;
}

inline CMatrix complex_noise(Eigen::Index rows, Eigen::Index cols, double variance, RandomStream& rng) {
    CMatrix n(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) n(i, j) = rng.complex_normal(variance);
    return n;
}

/// Received pilot block with fresh CN(0, noise_power) noise.
inline CMatrix pilot_rx(const CMatrix& channels, const CMatrix& psi, double noise_power, RandomStream& rng) {
    return pilot_rx(channels, psi, complex_noise(channels.rows(), psi.cols(), noise_power, rng));
}

/// Correlates the pilot block with UE k's pilot: y_k = Y psi_k^* / (p_u tau).
inline CVector correlate(const CMatrix& y, const CVector& psi, double tx_power, int tau) {
    return y * psi.conjugate() / (tx_power * tau);
}

/// Linear solver setup shared by estimator and combiner. Adds a tiny ridge
/// only when the noise term is exactly zero.
struct HermitianSolve {
    Eigen::LLT<CMatrix> llt;
    bool regularized = false;
    double rcond = 0.0;

    explicit HermitianSolve(CMatrix a, double noise_term, const char* who) {
        if (noise_term == 0.0) {
            const double ridge = 1e-12 * a.trace().real() / static_cast<double>(a.rows());
            a.diagonal().array() += ridge;
            regularized = true;
        } else {
            a.diagonal().array() += noise_term;
        }
        llt.compute(a);
        if (llt.info() != Eigen::Success)
            throw NumericalError(std::string(who) + ": matrix not positive definite");
        rcond = llt.rcond();
    }
};

/// Precomputed LMMSE gain R Q^{-1} and error covariance R - R Q^{-1} R for
/// one UE and a fixed interferer set.
struct LmmseFilter {
    CMatrix gain;
    CMatrix error_cov;
    bool regularized = false;
    double rcond = 0.0;  // reciprocal condition estimate of Q

    CVector apply(const CVector& y) const { return gain * y; }
};

inline LmmseFilter lmmse_filter(const CMatrix& cov, std::span<const CMatrix> interferer_covs, double tx_power,
                                int tau, double noise_power) {
    CMatrix q = cov;
    for (const auto& r : interferer_covs) q += r;
    const HermitianSolve solve(std::move(q), noise_power / (tx_power * tau), "lmmse_estimate");
    LmmseFilter f;
    // R and Q are Hermitian, so R Q^{-1} = (Q^{-1} R)^H.
    f.gain = solve.llt.solve(cov).adjoint();
    f.error_cov = hermitian_part(cov - f.gain * cov);
    f.regularized = solve.regularized;
    f.rcond = solve.rcond;
    return f;
}

struct Estimate {
    CVector channel;
    CMatrix error_cov;
    bool regularized = false;
    double rcond = 0.0;
};

/// LMMSE channel estimate from the correlated pilot observation.
inline Estimate lmmse_estimate(const CMatrix& cov, std::span<const CMatrix> interferer_covs, const CVector& y,
                               double tx_power, int tau, double noise_power) {
    auto f = lmmse_filter(cov, interferer_covs, tx_power, tau, noise_power);
    return {f.apply(y), std::move(f.error_cov), f.regularized, f.rcond};
}

struct Combiner {
    CMatrix weights;  // MS x K, column k = w_k
    bool regularized = false;
};

/// LMMSE receive combiner (H H^H + sum R_err + sigma^2/p_u I)^{-1} H, one
/// factorization for all columns.
inline Combiner lmmse_combiner(const CMatrix& estimates, const CMatrix& error_sum, double tx_power,
                               double noise_power) {
    CMatrix a = estimates * estimates.adjoint() + error_sum;
    const HermitianSolve solve(std::move(a), noise_power / tx_power, "lmmse_combiner");
    return {solve.llt.solve(estimates), solve.regularized};
}

/// Unit-average-energy constellation with Gray labels.
struct Constellation {
    std::vector<cplx> points;

    static Constellation bpsk() { return {{cplx(1.0, 0.0), cplx(-1.0, 0.0)}}; }

    /// Label bit 0 picks the sign of I, bit 1 the sign of Q.
    static Constellation qpsk() {
        const double a = 1.0 / std::sqrt(2.0);
        return {{cplx(a, a), cplx(-a, a), cplx(a, -a), cplx(-a, -a)}};
    }

    int nearest(cplx r) const {
        int best = 0;
        double best_d = std::norm(r - points[0]);
        for (std::size_t i = 1; i < points.size(); ++i) {
            const double d = std::norm(r - points[i]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        return best;
    }
};

struct DetectionResult {
    CVector soft;
    std::vector<int> decisions;
};

/// Soft symbols W^H y and minimum-distance hard decisions. The slicer is
/// insensitive to positive real scaling, so the combiner bias and p_u do not
/// need to be removed first.
inline DetectionResult detect(const CMatrix& weights, const CVector& y, const Constellation& constellation) {
    DetectionResult out;
    out.soft = weights.adjoint() * y;
    out.decisions.resize(static_cast<std::size_t>(out.soft.size()));
    for (Eigen::Index k = 0; k < out.soft.size(); ++k)
        out.decisions[static_cast<std::size_t>(k)] = constellation.nearest(out.soft(k));
    return out;
}

/// Instantaneous uplink SINR of UE k for combiner column w_k.
inline double instantaneous_sinr(Eigen::Index k, const CMatrix& weights, const CMatrix& estimates,
                                 const CMatrix& error_sum, double tx_power, double noise_power) {
    const CVector w = weights.col(k);
    const CVector proj = estimates.adjoint() * w;  // entry j = h_j^H w
    const double signal = std::norm(proj(k));
    const double interference = proj.squaredNorm() - signal;
    const double residual = (w.adjoint() * error_sum * w)(0).real();
    const double noise = noise_power / tx_power * w.squaredNorm();
    return signal / (interference + residual + noise);
}

}  // namespace pilotreuse
