// Eigensolver and orthonormalization checks: reconstruction residuals,
// orthonormality and known 2x2 spectra.

#include <doctest.h>

#include <cmath>

#include "ontic/linalg.hpp"
#include "ontic/rng.hpp"

using namespace ontic;

namespace {

CMat random_hermitian(std::size_t n, Xoshiro256& rng) {
    CMat a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a.at(i, i) = cx{rng.uniform(-1.0, 1.0), 0.0};
        for (std::size_t j = i + 1; j < n; ++j) {
            const cx z{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            a.at(i, j) = z;
            a.at(j, i) = std::conj(z);
        }
    }
    return a;
}

} // namespace

TEST_CASE("2x2 Hermitian eigenvalues match the closed form") {
    CMat a(2);
    a.at(0, 0) = cx{1.0, 0.0};
    a.at(1, 1) = cx{3.0, 0.0};
    a.at(0, 1) = cx{0.5, -0.25};
    a.at(1, 0) = cx{0.5, 0.25};
    const auto eig = hermitian_eigen(a);
    const double mean = 2.0;
    const double rad = std::sqrt(1.0 + 0.5 * 0.5 + 0.25 * 0.25);
    CHECK(eig.values[0] == doctest::Approx(mean - rad).epsilon(1e-12));
    CHECK(eig.values[1] == doctest::Approx(mean + rad).epsilon(1e-12));
}

TEST_CASE("eigenpairs reconstruct random Hermitian matrices") {
    Xoshiro256 rng(7);
    for (std::size_t n : {2, 3, 5, 8, 16}) {
        CMat a = random_hermitian(n, rng);
        const auto eig = hermitian_eigen(a);
        for (std::size_t i = 0; i < n; ++i) {
            // residual || A v - lambda v ||
            CVec av = a.apply(eig.vectors[i]);
            double res = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                res = std::max(res, std::abs(av[r] - eig.values[i] * eig.vectors[i][r]));
            CHECK(res < 1e-10);
            for (std::size_t j = 0; j < n; ++j) {
                const double ip = std::abs(inner(eig.vectors[i], eig.vectors[j]));
                CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-10);
            }
        }
        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(eig.values[i] <= eig.values[i + 1] + 1e-12);
    }
}

TEST_CASE("orthonormalize produces an orthonormal set") {
    Xoshiro256 rng(11);
    std::vector<CVec> basis(6, CVec(6));
    for (auto& v : basis)
        for (auto& z : v) z = cx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    orthonormalize(basis);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const double ip = std::abs(inner(basis[i], basis[j]));
            CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("orthonormalize rejects dependent vectors") {
    std::vector<CVec> basis{{cx{1, 0}, cx{0, 0}}, {cx{2, 0}, cx{0, 0}}};
    CHECK_THROWS_AS(orthonormalize(basis), validation_error);
}

TEST_CASE("kron layout: left factor is most significant") {
    CVec a{cx{1, 0}, cx{2, 0}};
    CVec b{cx{3, 0}, cx{5, 0}, cx{7, 0}};
    CVec k = kron(a, b);
    REQUIRE(k.size() == 6);
    CHECK(k[0] == cx{3, 0});
    CHECK(k[2] == cx{7, 0});
    CHECK(k[3] == cx{6, 0});
    CHECK(k[5] == cx{14, 0});
}
