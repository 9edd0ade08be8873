// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "support.hpp"

using namespace pilotreuse;
using namespace pilotreuse::testing;

namespace {

RMatrix line_dissimilarity(int n) {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(static_cast<double>(i), 0.0);
    return point_dissimilarity(pts);
}

std::vector<double> column(const FeatureSet& f, Eigen::Index c) {
    return {f.vectors.col(c).data(), f.vectors.col(c).data() + f.vectors.rows()};
}

}  // namespace

TEST(Cmd, Examples) {
    auto rng = stream(20);
    const CMatrix r = random_psd(5, rng);
    EXPECT_EQ(cmd(r, r), 0.0);
    EXPECT_NEAR(cmd(r, 3.7 * r), 0.0, 1e-15);
    CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    b(1, 1) = 1.0;
    EXPECT_EQ(cmd(a, b), 1.0);
    EXPECT_THROW(cmd(a, CMatrix::Zero(2, 2)), DomainError);
    EXPECT_THROW(cmd(a, CMatrix::Identity(3, 3)), DomainError);
}

TEST(Cmd, MatchesDenseProduct) {
    auto rng = stream(21);
    for (int t = 0; t < 50; ++t) {
        const CMatrix a = random_psd(6, rng, 1 + t % 6), b = random_psd(6, rng, 1 + (t / 6) % 6);
        EXPECT_NEAR(cmd(a, b), oracle::dense_cmd(a, b), 1e-12);
    }
}

TEST(Dissimilarity, IdenticalCovariancesGiveZero) {
    auto rng = stream(22);
    const CMatrix r = random_psd(4, rng);
    CovarianceSet set(4, 2);
    for (int i = 0; i < 5; ++i) set.add({r, 2.0 * r});
    const RMatrix d = dissimilarity_matrix(set);
    EXPECT_TRUE(d.isZero(0.0));
    const auto f = cmd_feature(d);
    EXPECT_EQ(f.dim(), 5);
    EXPECT_TRUE(f.vectors.isZero(0.0));
}

TEST(Dissimilarity, OppositeUsersMatchDenseOracle) {
    SystemConfig cfg = desk_config();
    const auto a = user_at(0.0, 200.0, cfg);
    const auto b = user_at(kPi, 200.0, cfg);
    CovarianceSet set(cfg.antennas, cfg.sectors);
    set.add(user_covariance_blocks(a, cfg, cfg.quadrature_points));
    set.add(user_covariance_blocks(b, cfg, cfg.quadrature_points));
    const RMatrix d = dissimilarity_matrix(set);
    EXPECT_NEAR(d(0, 1), oracle::dense_cmd(set.compound(0), set.compound(1)), 1e-6);
    EXPECT_EQ(d(0, 1), d(1, 0));
    EXPECT_EQ(d(0, 0), 0.0);
}

TEST(Dissimilarity, SymmetricBoundedZeroDiagonal) {
    const SystemConfig cfg = desk_config();
    auto rng = stream(23);
    const auto sc = build_scenario(cfg, rng);
    const RMatrix d = dissimilarity_matrix(covariance_set(sc));
    EXPECT_EQ(d, d.transpose());
    EXPECT_TRUE(d.diagonal().isZero(0.0));
    EXPECT_GE(d.minCoeff(), 0.0);
    EXPECT_LE(d.maxCoeff(), 1.0);
}

TEST(Dissimilarity, FullScale) {
    const SystemConfig cfg = default_config();
    auto rng = stream(24);
    const auto sc = build_scenario(cfg, rng);
    const RMatrix d = dissimilarity_matrix(covariance_set(sc));
    EXPECT_EQ(d.rows(), 512);
    EXPECT_LE(d.maxCoeff(), 1.0);
    const auto chart = laplacian_eigenmaps(d, cfg.chart_neighbors, 2);
    EXPECT_EQ(chart.chart.size(), 512u);
    EXPECT_EQ(chart.chart.dim(), 2);
}

TEST(Dissimilarity, NeedsTwoUsers) {
    CovarianceSet set(2, 1);
    set.add({CMatrix::Identity(2, 2)});
    EXPECT_THROW(dissimilarity_matrix(set), DomainError);
}

TEST(LaplacianEigenmaps, LineIsMonotone) {
    // With nu=1 and lower-index ties the kNN graph of a line is exactly the path graph.
    for (int n : {10, 25, 60}) {
        const auto res = laplacian_eigenmaps(line_dissimilarity(n), 1, 1);
        std::vector<double> pos(static_cast<std::size_t>(n));
        std::iota(pos.begin(), pos.end(), 0.0);
        EXPECT_EQ(std::abs(spearman(column(res.chart, 0), pos)), 1.0) << "N=" << n;
        EXPECT_GE(chart_quality(res.chart, line_dissimilarity(n), 3), 0.95);
    }
}

TEST(LaplacianEigenmaps, DuplicatesShareCoordinates) {
    // Swapping a duplicate pair is a graph automorphism unless some node's nu-th
    // neighbor slot splits the pair; the lower-index tie rule then picks one.
    auto rng = stream(24);
    const int n = 30;
    const Eigen::Index a = 7, b = n;
    int symmetric = 0;
    for (int t = 0; t < 40; ++t) {
        std::vector<Eigen::Vector2d> pts;
        for (int i = 0; i < n; ++i) pts.emplace_back(rng.uniform01(), rng.uniform01());
        pts.push_back(pts[static_cast<std::size_t>(a)]);
        const auto res = laplacian_eigenmaps(point_dissimilarity(pts), 5, 2);
        bool automorphism = true;
        for (Eigen::Index j = 0; j <= n; ++j)
            if (j != a && j != b && res.adjacency(a, j) != res.adjacency(b, j)) automorphism = false;
        if (!automorphism) continue;
        ++symmetric;
        EXPECT_LE((res.chart.vectors.row(a) - res.chart.vectors.row(b)).norm(), 1e-8) << "trial " << t;
    }
    EXPECT_GE(symmetric, 10);
}

TEST(LaplacianEigenmaps, PermutationEquivariant) {
    auto rng = stream(25);
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 40; ++i) pts.emplace_back(rng.uniform01(), rng.uniform01());
    const RMatrix d = point_dissimilarity(pts);
    std::vector<int> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    RMatrix dp(40, 40);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) dp(i, j) = d(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    const auto a = laplacian_eigenmaps(d, 6, 2).chart.vectors;
    const auto b = laplacian_eigenmaps(dp, 6, 2).chart.vectors;
    for (Eigen::Index c = 0; c < 2; ++c) {
        RVector ap(40);
        for (int i = 0; i < 40; ++i) ap(i) = a(perm[static_cast<std::size_t>(i)], c);
        const double err = std::min((ap - b.col(c)).norm(), (ap + b.col(c)).norm());
        EXPECT_LE(err, 1e-8) << "coordinate " << c;
    }
}

TEST(LaplacianEigenmaps, DegreeOrthogonalToConstant) {
    const SystemConfig cfg = desk_config();
    auto rng = stream(26);
    const auto sc = build_scenario(cfg, rng);
    const auto res = laplacian_eigenmaps(dissimilarity_matrix(covariance_set(sc)), 15, 3);
    const RVector degree = res.adjacency.rowwise().sum();
    for (Eigen::Index c = 0; c < 3; ++c) {
        EXPECT_LE(std::abs(degree.dot(res.chart.vectors.col(c))) / degree.norm(), 1e-8);
        EXPECT_NEAR(res.chart.vectors.col(c).norm(), 1.0, 1e-12);
    }
    EXPECT_TRUE(res.chart.vectors.allFinite());
    EXPECT_NEAR(res.eigenvalues(0), 0.0, 1e-10);
}

TEST(LaplacianEigenmaps, SignConvention) {
    const auto res = laplacian_eigenmaps(line_dissimilarity(15), 2, 2);
    for (Eigen::Index c = 0; c < 2; ++c) {
        for (Eigen::Index i = 0; i < 15; ++i) {
            const double v = res.chart.vectors(i, c);
            if (std::abs(v) > 1e-10) {
                EXPECT_GT(v, 0.0);
                break;
            }
        }
    }
}

TEST(LaplacianEigenmaps, BridgesDisconnectedClusters) {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 6; ++i) pts.emplace_back(0.1 * i, 0.0);
    for (int i = 0; i < 6; ++i) pts.emplace_back(10.0 + 0.1 * i, 0.0);
    const RMatrix d = point_dissimilarity(pts);
    const auto res = laplacian_eigenmaps(d, 2, 1);
    ASSERT_EQ(res.bridges.size(), 1u);
    EXPECT_EQ(res.bridges[0].first, 5u);
    EXPECT_EQ(res.bridges[0].second, 6u);
    int components = 0;
    detail::connected_components(res.adjacency, components);
    EXPECT_EQ(components, 1);
    EXPECT_TRUE(res.chart.vectors.allFinite());
}

TEST(LaplacianEigenmaps, RejectsBadParameters) {
    const RMatrix d = line_dissimilarity(6);
    EXPECT_THROW(laplacian_eigenmaps(d, 6, 1), DomainError);
    EXPECT_THROW(laplacian_eigenmaps(d, 0, 1), DomainError);
    EXPECT_THROW(laplacian_eigenmaps(d, 2, 5), DomainError);
    EXPECT_THROW(laplacian_eigenmaps(d, 2, 0), DomainError);
}

TEST(ChartQuality, IsometryScoresOne) {
    auto rng = stream(27);
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 50; ++i) pts.emplace_back(rng.uniform01(), rng.uniform01());
    FeatureSet chart{FeatureKind::Chart, RMatrix(50, 2)};
    for (int i = 0; i < 50; ++i) chart.vectors.row(i) = 3.0 * pts[static_cast<std::size_t>(i)].transpose();
    EXPECT_DOUBLE_EQ(chart_quality(chart, point_dissimilarity(pts), 7), 1.0);
}

TEST(ChartQuality, RandomChartScoresLow) {
    auto rng = stream(28);
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 100; ++i) pts.emplace_back(rng.uniform01(), rng.uniform01());
    const RMatrix d = point_dissimilarity(pts);
    double worst = 0.0, mean = 0.0;
    for (int t = 0; t < 100; ++t) {
        FeatureSet chart{FeatureKind::Chart, RMatrix(100, 2)};
        for (int i = 0; i < 100; ++i) chart.vectors.row(i) << rng.uniform01(), rng.uniform01();
        const double q = chart_quality(chart, d, 10);
        worst = std::max(worst, q);
        mean += q / 100.0;
    }
    EXPECT_LT(worst, 0.7);
    EXPECT_NEAR(mean, 0.5, 0.05);
}

TEST(ChartQuality, RejectsBadNeighborhood) {
    const RMatrix d = line_dissimilarity(10);
    const auto chart = laplacian_eigenmaps(d, 2, 1).chart;
    EXPECT_THROW(chart_quality(chart, d, 0), DomainError);
    EXPECT_THROW(chart_quality(chart, d, 10), DomainError);
}

TEST(FeatureSet, RowsMustAgree) {
    EXPECT_THROW(feature_set_from_rows(FeatureKind::Chart, {{1.0, 2.0}, {3.0}}), DomainError);
    const auto f = feature_set_from_rows(FeatureKind::Chart, {{1.0, 2.0}, {3.0, 4.0}});
    EXPECT_EQ(f.size(), 2u);
    EXPECT_EQ(f.vectors(1, 0), 3.0);
}

TEST(PositionFeature, CartesianAndAzimuth) {
    SystemConfig cfg = tiny_config();
    Scenario sc;
    sc.config = cfg;
    const auto o = sector_orientations(cfg.sectors);
    sc.users.push_back(make_user(0, {30.0, 40.0}, o, cfg.angular_std()));
    sc.users.push_back(make_user(1, {60.0, 80.0}, o, cfg.angular_std()));
    const auto cart = position_feature(sc, PositionMode::Cartesian);
    EXPECT_EQ(cart.vectors(0, 0), 30.0);
    EXPECT_EQ(cart.vectors(0, 1), 40.0);
    EXPECT_GT((cart.vectors.row(0) - cart.vectors.row(1)).norm(), 0.0);
    const auto az = position_feature(sc, PositionMode::Azimuth);
    EXPECT_NEAR((az.vectors.row(0) - az.vectors.row(1)).norm(), 0.0, 1e-15);
    EXPECT_NEAR(az.vectors.row(0).norm(), 1.0, 1e-15);
}

TEST(FeatureIo, RoundTripIsLossless) {
    auto rng = stream(29);
    FeatureSet f{FeatureKind::Chart, RMatrix(7, 3)};
    for (Eigen::Index i = 0; i < f.vectors.size(); ++i) f.vectors.data()[i] = rng.normal() * 1e-3;
    std::stringstream buf;
    write_features(buf, f);
    const auto back = read_features(buf);
    EXPECT_EQ(back.kind, FeatureKind::Chart);
    EXPECT_EQ(back.vectors, f.vectors);

    std::ostringstream csv;
    write_chart_csv(csv, f);
    const auto rows = lines(csv.str());
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[0], "ue_index,coord_1,coord_2,coord_3");
    EXPECT_EQ(rows[1].substr(0, 2), "0,");
}
