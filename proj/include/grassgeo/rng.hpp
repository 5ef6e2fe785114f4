#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace grassgeo {

/// Deterministic random source. All randomized operations in the library
/// draw from this class so that a seed fully determines a run. Gaussian
/// samples are produced by an explicit Box-Muller transform on top of
/// mt19937_64 rather than std::normal_distribution, whose output sequence
/// is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Standard real normal N(0, 1).
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] so the log is finite.
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Complex normal with i.i.d. N(0,1) real and imaginary parts.
    std::complex<double> cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

    Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXcd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                m(i, j) = cgaussian();
        return m;
    }

    /// Uniform index in [0, bound).
    Eigen::Index uniform_index(Eigen::Index bound) {
        return static_cast<Eigen::Index>(gen_() % static_cast<std::uint64_t>(bound));
    }

    /// Fisher-Yates permutation of {0, ..., m-1}.
    std::vector<int> permutation(int m) {
        std::vector<int> p(m);
        for (int i = 0; i < m; ++i) p[i] = i;
        for (int i = m - 1; i > 0; --i) {
            const int j = static_cast<int>(uniform_index(i + 1));
            std::swap(p[i], p[j]);
        }
        return p;
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace grassgeo
