// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "support.hpp"

using namespace pilotreuse;
using namespace pilotreuse::testing;

namespace {

// Mean of beta over the AoA interval by adaptive Gauss-Kronrod.
double mean_gain(const UserRecord& u, int sector, const SystemConfig& cfg) {
    const auto& iv = u.aoa[static_cast<std::size_t>(sector)];
    auto f = [&](double theta) {
        double offset = std::fmod(theta - kPi / 2.0, kTwoPi);
        if (offset > kPi) offset -= kTwoPi;
        if (offset <= -kPi) offset += kTwoPi;
        const double att = std::min(12.0 * std::pow(offset / cfg.beamwidth_3db(), 2), cfg.max_attenuation_db);
        const double g = std::pow(10.0, (cfg.max_gain_db - att) / 10.0);
        const double k = cfg.wavelength / (4.0 * kPi * u.distance);
        return g * k * k;
    };
    // Break at the attenuation clip and the back-lobe wrap so each piece is smooth.
    const double clip = cfg.beamwidth_3db() * std::sqrt(cfg.max_attenuation_db / 12.0);
    std::vector<double> cuts{iv.lo, iv.hi};
    for (int turn = -2; turn <= 2; ++turn)
        for (double offset : {-clip, clip, kPi}) {
            const double c = kPi / 2.0 + offset + turn * kTwoPi;
            if (c > iv.lo && c < iv.hi) cuts.push_back(c);
        }
    std::sort(cuts.begin(), cuts.end());
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        integral += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 10, 1e-14);
    return integral / iv.width();
}

double hermitian_defect(const CMatrix& r) { return (r - r.adjoint()).norm() / r.norm(); }

}  // namespace

TEST(ArrayResponse, Examples) {
    const CVector broadside = array_response(kPi / 2.0, 8, 0.5);
    for (Eigen::Index m = 0; m < 8; ++m) EXPECT_NEAR(std::abs(broadside(m) - cplx(1.0, 0.0)), 0.0, 1e-12);

    const CVector endfire = array_response(0.0, 2, 0.5);
    EXPECT_NEAR(std::abs(endfire(0) - cplx(1, 0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(endfire(1) - cplx(-1, 0)), 0.0, 1e-12);

    const CVector sixty = array_response(kPi / 3.0, 4, 0.5);
    const cplx expected[] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(std::abs(sixty(m) - expected[m]), 0.0, 1e-12);
}

TEST(ArrayResponse, UnitModulusAndPhase) {
    auto rng = stream(10);
    for (int t = 0; t < 100; ++t) {
        const double theta = rng.uniform(0.0, kTwoPi);
        const CVector a = array_response(theta, 32, 0.5);
        for (Eigen::Index m = 0; m < a.size(); ++m) {
            EXPECT_NEAR(std::abs(a(m)), 1.0, 1e-12);
            const cplx ref = std::exp(cplx(0.0, -kTwoPi * m * 0.5 * std::cos(theta)));
            EXPECT_NEAR(std::abs(a(m) - ref), 0.0, 1e-9);
        }
    }
}

TEST(AntennaGain, Examples) {
    const AntennaPattern p{0.0, 30.0, deg_to_rad(65.0)};
    EXPECT_DOUBLE_EQ(antenna_gain_db(1.0, 1.0, p), 0.0);
    EXPECT_NEAR(antenna_gain_db(1.0 + p.beamwidth_3db, 1.0, p), -12.0, 1e-12);
    EXPECT_NEAR(antenna_gain_db(1.0 - p.beamwidth_3db, 1.0, p), -12.0, 1e-12);
    EXPECT_DOUBLE_EQ(antenna_gain_db(kPi / 2.0 + kPi, kPi / 2.0, p), -30.0);
    // Offsets wrap, so 350 degrees is 10 degrees off boresight.
    EXPECT_NEAR(antenna_gain_db(deg_to_rad(350.0), 0.0, p), -12.0 * std::pow(10.0 / 65.0, 2), 1e-12);
    const AntennaPattern boosted{5.0, 30.0, deg_to_rad(65.0)};
    EXPECT_DOUBLE_EQ(antenna_gain_db(0.0, 0.0, boosted), 5.0);
}

TEST(PathGain, Examples) {
    const double lambda = 0.15;
    const double d0 = lambda / (4.0 * kPi);
    EXPECT_NEAR(path_gain(d0, lambda, 0.0), 1.0, 1e-12);
    EXPECT_NEAR(path_gain(d0, lambda, -30.0), 1e-3, 1e-15);
    EXPECT_DOUBLE_EQ(path_gain(40.0, lambda, 0.0) / path_gain(80.0, lambda, 0.0), 4.0);
    EXPECT_THROW(path_gain(0.0, lambda, 0.0), DomainError);
    EXPECT_THROW(path_gain(-1.0, lambda, 0.0), DomainError);
}

TEST(SampleChannel, ZeroSpreadIsRankOne) {
    SystemConfig cfg = desk_config();
    cfg.angular_std_deg = 0.0;
    const auto u = user_at(0.3, 120.0, cfg);
    auto rng = stream(11);
    for (int s = 0; s < cfg.sectors; ++s) {
        const CVector h = sample_channel(u, s, cfg, rng);
        const CVector a = array_response(u.incidence[static_cast<std::size_t>(s)], cfg.antennas, cfg.antenna_spacing);
        const double cos2 = std::norm(a.dot(h)) / (a.squaredNorm() * h.squaredNorm());
        EXPECT_NEAR(cos2, 1.0, 1e-12);
    }
}

TEST(SampleChannel, FullScaleIsFinite) {
    const SystemConfig cfg = default_config();
    const auto u = user_at(1.0, 250.0, cfg);
    auto rng = stream(12);
    const CVector h = sample_channel(u, 0, cfg, rng);
    EXPECT_EQ(h.size(), 64);
    EXPECT_TRUE(h.allFinite());
    const CVector c = sample_compound_channel(u, cfg, rng);
    EXPECT_EQ(c.size(), 192);
}

TEST(SampleChannel, CompoundIsSectorConcatenation) {
    const SystemConfig cfg = tiny_config();
    const auto u = user_at(2.0, 80.0, cfg);
    auto r1 = stream(13), r2 = stream(13);
    const CVector c = sample_compound_channel(u, cfg, r1);
    for (int s = 0; s < cfg.sectors; ++s)
        EXPECT_EQ(CVector(c.segment(s * cfg.antennas, cfg.antennas)), sample_channel(u, s, cfg, r2));
}

TEST(SampleChannel, EnergyMatchesMeanGain) {
    SystemConfig cfg = desk_config();
    const auto u = user_at(deg_to_rad(20.0), 200.0, cfg);
    auto rng = stream(14);
    const int draws = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int t = 0; t < draws; ++t) {
        const double e = sample_channel(u, 0, cfg, rng).squaredNorm();
        sum += e;
        sum2 += e * e;
    }
    const double mean = sum / draws;
    const double expected = cfg.antennas * mean_gain(u, 0, cfg);
    EXPECT_NEAR(mean / expected, 1.0, 0.01);
    // Same check against the analytic trace, at three Monte Carlo standard errors.
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    const double trace = analytic_covariance(u, 0, cfg, cfg.quadrature_points).trace().real();
    EXPECT_NEAR(mean, trace, 3.0 * se);
}

TEST(AnalyticCovariance, ZeroSpreadRankOne) {
    SystemConfig cfg = desk_config();
    cfg.angular_std_deg = 0.0;
    const auto u = user_at(1.1, 90.0, cfg);
    for (int s = 0; s < cfg.sectors; ++s) {
        const CMatrix r = analytic_covariance(u, s, cfg, cfg.quadrature_points);
        const double theta = u.incidence[static_cast<std::size_t>(s)];
        EXPECT_NEAR(r.trace().real() / (cfg.antennas * link_gain(u, theta, cfg)), 1.0, 1e-12);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
        EXPECT_LE(es.eigenvalues().head(cfg.antennas - 1).cwiseAbs().maxCoeff(), 1e-12 * r.trace().real());
    }
}

TEST(AnalyticCovariance, TraceMatchesIndependentQuadrature) {
    const SystemConfig cfg = desk_config();
    // Azimuths chosen so some intervals straddle the attenuation clip and the back lobe.
    for (double az_deg : {0.0, 37.0, 100.0, 175.0, 200.0, 299.0}) {
        const auto u = user_at(deg_to_rad(az_deg), 150.0, cfg);
        for (int s = 0; s < cfg.sectors; ++s) {
            const double tr = analytic_covariance(u, s, cfg, cfg.quadrature_points).trace().real();
            const double ref = cfg.antennas * mean_gain(u, s, cfg);
            EXPECT_NEAR(tr / ref, 1.0, 1e-10) << "azimuth " << az_deg << " sector " << s;
        }
    }
}

TEST(AnalyticCovariance, QuadratureConverges) {
    const SystemConfig cfg = default_config();
    for (double az_deg : {0.0, 55.0, 100.0, 190.0, 260.0}) {
        const auto u = user_at(deg_to_rad(az_deg), 300.0, cfg);
        for (int s = 0; s < cfg.sectors; ++s) {
            const CMatrix a = analytic_covariance(u, s, cfg, cfg.quadrature_points);
            const CMatrix b = analytic_covariance(u, s, cfg, 2 * cfg.quadrature_points);
            EXPECT_LE((a - b).norm() / b.norm(), 1e-8) << "azimuth " << az_deg << " sector " << s;
        }
    }
}

TEST(AnalyticCovariance, HermitianPsdToeplitz) {
    const SystemConfig cfg = desk_config();
    auto rng = stream(15);
    const auto sc = build_scenario(cfg, rng);
    const auto covs = covariance_set(sc);
    for (std::size_t n = 0; n < covs.size(); ++n) {
        for (int s = 0; s < cfg.sectors; ++s) {
            const CMatrix& r = covs.block(n, s);
            EXPECT_LE(hermitian_defect(r), 1e-12);
            Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
            EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * r.trace().real());
            for (Eigen::Index i = 1; i < r.rows(); ++i)
                for (Eigen::Index j = 1; j < r.cols(); ++j) EXPECT_EQ(r(i, j), r(i - 1, j - 1));
        }
    }
}

TEST(AnalyticCovariance, RejectsTooFewNodes) {
    const SystemConfig cfg = tiny_config();
    const auto u = user_at(0.0, 50.0, cfg);
    EXPECT_THROW(analytic_covariance(u, 0, cfg, 1), DomainError);
}

TEST(CompoundCovariance, BlockStructure) {
    SystemConfig cfg = desk_config();
    const auto u = user_at(0.7, 100.0, cfg);
    const auto blocks = user_covariance_blocks(u, cfg, cfg.quadrature_points);
    const CMatrix r = compound_covariance(blocks);
    ASSERT_EQ(r.rows(), cfg.antennas * cfg.sectors);
    double tr = 0.0;
    for (int s = 0; s < cfg.sectors; ++s) {
        tr += blocks[static_cast<std::size_t>(s)].trace().real();
        for (int t = 0; t < cfg.sectors; ++t) {
            const CMatrix b = r.block(s * cfg.antennas, t * cfg.antennas, cfg.antennas, cfg.antennas);
            if (s == t) EXPECT_EQ(b, blocks[static_cast<std::size_t>(s)]);
            else EXPECT_TRUE(b.isZero(0.0));
        }
    }
    EXPECT_NEAR(r.trace().real(), tr, 1e-15 * tr);

    const std::vector<CMatrix> one{blocks[0]};
    EXPECT_EQ(compound_covariance(one), blocks[0]);
}

TEST(CompoundCovariance, FullScaleSize) {
    const SystemConfig cfg = default_config();
    const auto u = user_at(0.2, 100.0, cfg);
    const CMatrix r = compound_covariance(user_covariance_blocks(u, cfg, cfg.quadrature_points));
    EXPECT_EQ(r.rows(), 192);
    EXPECT_TRUE(r.block(0, 64, 64, 128).isZero(0.0));
}

TEST(CovarianceSet, RejectsWrongShapes) {
    CovarianceSet set(4, 2);
    EXPECT_THROW(set.add({CMatrix::Identity(4, 4)}), DomainError);
    EXPECT_THROW(set.add({CMatrix::Identity(4, 4), CMatrix::Identity(3, 3)}), DomainError);
    set.add({CMatrix::Identity(4, 4), 2.0 * CMatrix::Identity(4, 4)});
    EXPECT_DOUBLE_EQ(set.trace(0), 12.0);
    EXPECT_EQ(set.dim(), 8);
}

TEST(SampleCovariance, SingleSampleIsOuterProduct) {
    auto rng = stream(16);
    const CVector h = random_vector(6, rng);
    const std::vector<CVector> one{h};
    EXPECT_LE((sample_covariance(one) - h * h.adjoint()).norm(), 1e-15 * h.squaredNorm());
    EXPECT_THROW(sample_covariance(std::span<const CVector>{}), DomainError);
}

TEST(SampleCovariance, WhiteNoiseConvergesToIdentity) {
    auto rng = stream(17);
    CovarianceAccumulator acc(8);
    for (int t = 0; t < 100000; ++t) acc.add(random_vector(8, rng));
    const CMatrix r = acc.covariance();
    EXPECT_LE((r - CMatrix::Identity(8, 8)).norm() / std::sqrt(8.0), 0.05);
    EXPECT_LE(hermitian_defect(r), 1e-15);
}

TEST(CovarianceIo, RoundTripIsLossless) {
    const SystemConfig cfg = tiny_config();
    auto rng = stream(18);
    const auto sc = build_scenario(cfg, rng);
    const auto covs = covariance_set(sc);
    std::stringstream buf;
    write_covariances(buf, covs);
    const auto back = read_covariances(buf);
    ASSERT_EQ(back.size(), covs.size());
    ASSERT_EQ(back.sectors(), covs.sectors());
    for (std::size_t n = 0; n < covs.size(); ++n)
        for (int s = 0; s < cfg.sectors; ++s) EXPECT_EQ(back.block(n, s), covs.block(n, s));
}

TEST(CovarianceIo, RejectsMalformedInput) {
    std::stringstream bad_header("pilotreuse-features 1\n");
    EXPECT_THROW(read_covariances(bad_header), DomainError);
    std::stringstream truncated("pilotreuse-covariance 1\n1 2 1\n1 0 0 0\n");
    EXPECT_THROW(read_covariances(truncated), DomainError);
}
