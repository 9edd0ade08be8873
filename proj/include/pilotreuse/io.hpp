// SPDX-License-Identifier: Apache-2.0
//
// Text matrix formats. Numbers are written with 17 significant digits so a
// write/read cycle is lossless.
//
//   pilotreuse-covariance 1
//   <N> <M> <S>
//   then, for each user n and sector s, M lines of 2M numbers:
//   re(R[r,0]) im(R[r,0]) ... re(R[r,M-1]) im(R[r,M-1])     (row-major)
//
//   pilotreuse-features 1
//   <kind> <N> <dim>
//   then N lines of dim numbers.
#pragma once

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "pilotreuse/assignment.hpp"

namespace pilotreuse {

namespace detail {

inline std::ostream& precise(std::ostream& os) {
    return os << std::setprecision(std::numeric_limits<double>::max_digits10);
}

inline void expect_header(std::istream& in, const std::string& magic) {
    std::string word;
    int version = 0;
    if (!(in >> word >> version) || word != magic || version != 1)
        throw DomainError("expected '" + magic + " 1' header");
}

}  // namespace detail

inline void write_covariances(std::ostream& os, const CovarianceSet& set) {
    detail::precise(os) << "pilotreuse-covariance 1\n"
                        << set.size() << ' ' << set.antennas() << ' ' << set.sectors() << '\n';
    for (std::size_t n = 0; n < set.size(); ++n) {
        for (int s = 0; s < set.sectors(); ++s) {
            const auto& b = set.block(n, s);
            for (Eigen::Index r = 0; r < b.rows(); ++r) {
                for (Eigen::Index c = 0; c < b.cols(); ++c) {
                    if (c) os << ' ';
                    os << b(r, c).real() << ' ' << b(r, c).imag();
                }
                os << '\n';
            }
        }
    }
}

inline CovarianceSet read_covariances(std::istream& in) {
    detail::expect_header(in, "pilotreuse-covariance");
    std::size_t n = 0;
    int m = 0, s = 0;
    if (!(in >> n >> m >> s) || m < 1 || s < 1) throw DomainError("covariance file: bad dimensions");
    CovarianceSet set(m, s);
    for (std::size_t u = 0; u < n; ++u) {
        std::vector<CMatrix> blocks;
        for (int sec = 0; sec < s; ++sec) {
            CMatrix b(m, m);
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) {
                    double re = 0.0, im = 0.0;
                    if (!(in >> re >> im)) throw DomainError("covariance file: truncated at user " + std::to_string(u));
                    b(r, c) = {re, im};
                }
            }
            blocks.push_back(std::move(b));
        }
        set.add(std::move(blocks));
    }
    return set;
}

inline void write_features(std::ostream& os, const FeatureSet& f) {
    detail::precise(os) << "pilotreuse-features 1\n"
                        << to_string(f.kind) << ' ' << f.size() << ' ' << f.dim() << '\n';
    for (Eigen::Index i = 0; i < f.vectors.rows(); ++i) {
        for (Eigen::Index c = 0; c < f.vectors.cols(); ++c) {
            if (c) os << ' ';
            os << f.vectors(i, c);
        }
        os << '\n';
    }
}

inline FeatureSet read_features(std::istream& in) {
    detail::expect_header(in, "pilotreuse-features");
    std::string kind;
    Eigen::Index n = 0, dim = 0;
    if (!(in >> kind >> n >> dim)) throw DomainError("feature file: bad dimensions");
    FeatureSet f;
    if (kind == "cmd_row") f.kind = FeatureKind::CmdRow;
    else if (kind == "chart") f.kind = FeatureKind::Chart;
    else if (kind == "position") f.kind = FeatureKind::Position;
    else throw DomainError("feature file: unknown kind '" + kind + "'");
    f.vectors.resize(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index c = 0; c < dim; ++c)
            if (!(in >> f.vectors(i, c))) throw DomainError("feature file: truncated at row " + std::to_string(i));
    return f;
}

/// ue_index,coord_1,...,coord_C
inline void write_chart_csv(std::ostream& os, const FeatureSet& chart) {
    os << "ue_index";
    for (Eigen::Index c = 0; c < chart.dim(); ++c) os << ",coord_" << c + 1;
    os << '\n';
    detail::precise(os);
    for (Eigen::Index i = 0; i < chart.vectors.rows(); ++i) {
        os << i;
        for (Eigen::Index c = 0; c < chart.dim(); ++c) os << ',' << chart.vectors(i, c);
        os << '\n';
    }
}

/// ue_index,pilot_index,method,seed with 1-based pilot indices.
inline void write_assignment_csv(std::ostream& os, const PilotAssignment& a) {
    os << "ue_index,pilot_index,method,seed\n";
    for (std::size_t i = 0; i < a.size(); ++i)
        os << i << ',' << a.pilot[i] + 1 << ',' << to_string(a.method) << ',' << a.seed << '\n';
}

template <class Writer, class Value>
void write_file(const std::string& path, Writer&& writer, const Value& value) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    writer(os, value);
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace pilotreuse
