// States, tensor products, Born probabilities and the Helstrom bound.
// Derived values are frozen from the brute-force oracles defined here.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "ontic/quantum.hpp"

using namespace ontic;

namespace {

// Independent element-by-element Kronecker oracle: the amplitude at global
// index i is the product of factor amplitudes at i's mixed-radix digits.
CVec kron_oracle(const std::vector<PureState>& states) {
    std::size_t dim = 1;
    for (const auto& s : states) dim *= s.dim();
    CVec out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        cx amp{1.0, 0.0};
        std::size_t rest = i;
        for (std::size_t f = states.size(); f-- > 0;) {
            const std::size_t d = states[f].dim();
            amp *= states[f][rest % d];
            rest /= d;
        }
        out[i] = amp;
    }
    return out;
}

Measurement z_basis() {
    return Measurement::from_basis({{cx{1, 0}, cx{0, 0}}, {cx{0, 0}, cx{1, 0}}},
                                   {"0", "1"});
}

PureState plus() { return PureState::normalized({cx{1, 0}, cx{1, 0}}); }

} // namespace

TEST_CASE("pure state validation") {
    CHECK_THROWS_AS(PureState(CVec{cx{1, 0}}), validation_error);
    CHECK_THROWS_AS(PureState(CVec{cx{1, 0}, cx{1, 0}}), validation_error);
    CHECK_NOTHROW(PureState(CVec{cx{1, 0}, cx{0, 0}}));
    const PureState s = PureState::normalized({cx{3, 0}, cx{4, 0}});
    CHECK(std::abs(std::sqrt(norm2(s.amplitudes())) - 1.0) < 1e-15);
}

TEST_CASE("phase-invariant equality") {
    const PureState a = PureState::basis(2, 0);
    const PureState b(CVec{std::polar(1.0, 1.2345), cx{0, 0}});
    CHECK(a.equal_up_to_phase(b));
    CHECK_FALSE(a.equal_up_to_phase(plus()));
}

TEST_CASE("tensor product of basis states") {
    const auto p = tensor_product({PureState::basis(2, 0), PureState::basis(2, 0)});
    REQUIRE(p.dim() == 4);
    CHECK(std::abs(p[0] - cx{1, 0}) < 1e-15);
    CHECK(std::abs(p[1]) < 1e-15);
    CHECK(std::abs(p[2]) < 1e-15);
    CHECK(std::abs(p[3]) < 1e-15);
}

TEST_CASE("tensor product |0> x |+>") {
    const auto p = tensor_product({PureState::basis(2, 0), plus()});
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(p[0] - cx{s, 0}) < 1e-15);
    CHECK(std::abs(p[1] - cx{s, 0}) < 1e-15);
    CHECK(std::abs(p[2]) < 1e-15);
    CHECK(std::abs(p[3]) < 1e-15);
}

TEST_CASE("tensor product matches the Kronecker oracle on random states") {
    Xoshiro256 rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        const PureState a = PureState::random(2, rng);
        const PureState b = PureState::random(2, rng);
        const auto p = tensor_product({a, b});
        const CVec expect = kron_oracle({a, b});
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(p[i] - expect[i]) < 1e-12);
    }
}

TEST_CASE("tensor product associativity up to flattening") {
    Xoshiro256 rng(43);
    const PureState a = PureState::random(2, rng);
    const PureState b = PureState::random(3, rng);
    const PureState c = PureState::random(2, rng);
    const auto flat = tensor_product({a, b, c});
    const auto nested = tensor_product({tensor_product({a, b}), c});
    for (std::size_t i = 0; i < flat.dim(); ++i)
        CHECK(std::abs(flat[i] - nested[i]) < 1e-12);
}

TEST_CASE("tensor product dimension cap") {
    const std::vector<PureState> many(15, PureState::basis(2, 0));
    CHECK_THROWS_AS(tensor_product(many), dimension_overflow);
    CHECK_NOTHROW(tensor_product(std::vector<PureState>(14, PureState::basis(2, 0))));
}

TEST_CASE("enumerate_product_states ordering for orthogonal states") {
    const auto list =
        enumerate_product_states(PureState::basis(2, 0), PureState::basis(2, 1), 2);
    REQUIRE(list.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(list[k].first.k() == k + 1);
        // |00>, |01>, |10>, |11> in order
        CHECK(std::abs(list[k].second[k] - cx{1, 0}) < 1e-15);
    }
}

TEST_CASE("enumerate_product_states endpoints are psi^n and phi^n") {
    Xoshiro256 rng(44);
    const PureState psi = PureState::random(2, rng);
    const PureState phi = PureState::random(2, rng);
    const auto list = enumerate_product_states(psi, phi, 2);
    CHECK(list.front().second.equal_up_to_phase(tensor_product({psi, psi})));
    CHECK(list.back().second.equal_up_to_phase(tensor_product({phi, phi})));
}

TEST_CASE("enumerate_product_states bit 010 is psi x phi x psi") {
    Xoshiro256 rng(45);
    const PureState psi = PureState::random(2, rng);
    const PureState phi = PureState::random(2, rng);
    const auto list = enumerate_product_states(psi, phi, 3);
    REQUIRE(list.size() == 8);
    const auto& entry = list[2];  // bits 010 -> k = 3
    CHECK(entry.first.bits == std::vector<int>{0, 1, 0});
    const CVec expect = kron_oracle({psi, phi, psi});
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(std::abs(entry.second[i] - expect[i]) < 1e-12);
}

TEST_CASE("zero-bit count fixes the overlap with psi^n") {
    Xoshiro256 rng(46);
    const PureState psi = PureState::random(2, rng);
    const PureState phi = PureState::random(2, rng);
    const double ip = std::abs(psi.inner_with(phi));
    const std::size_t n = 3;
    const auto list = enumerate_product_states(psi, phi, n);
    const PureState psi_n = tensor_product(std::vector<PureState>(n, psi));
    for (const auto& [idx, state] : list) {
        const double expect = std::pow(ip, double(n - idx.zero_bits()));
        CHECK(std::abs(std::abs(psi_n.inner_with(state)) - expect) < 1e-10);
    }
}

TEST_CASE("born probabilities in the Z basis") {
    const auto meas = z_basis();
    CHECK(born_probability(PureState::basis(2, 0), meas, "0") == doctest::Approx(1.0));
    CHECK(born_probability(plus(), meas, "0") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(born_probability(PureState::basis(4, 0), meas, "0"),
                    dimension_mismatch);
}

TEST_CASE("born distribution sums to one over any measurement") {
    Xoshiro256 rng(47);
    std::vector<CVec> basis(4, CVec(4));
    for (auto& v : basis)
        for (auto& z : v) z = cx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    orthonormalize(basis);
    const auto meas = Measurement::from_basis(basis);
    meas.validate();
    for (int rep = 0; rep < 10; ++rep) {
        const PureState s = PureState::random(4, rng);
        CHECK(std::abs(born_distribution(s, meas).sum() - 1.0) < 1e-10);
    }
}

TEST_CASE("measurement validation catches broken effect sets") {
    auto meas = z_basis();
    meas.effects.pop_back();
    CHECK_THROWS_AS(meas.validate(), validation_error);
}

TEST_CASE("helstrom bound values") {
    const auto [psi0, phi0] = qubit_pair_with_overlap2(0.0);
    CHECK(helstrom_error_bound(psi0, phi0) == doctest::Approx(0.0).epsilon(1e-15));
    const PureState same = PureState::basis(2, 0);
    CHECK(helstrom_error_bound(same, same) == doctest::Approx(0.5).epsilon(1e-15));
    const auto [psi, phi] = qubit_pair_with_overlap2(0.5);
    // (1 - 1/sqrt(2)) / 2
    CHECK(helstrom_error_bound(psi, phi) ==
          doctest::Approx(0.14644660940672624).epsilon(1e-12));
}

TEST_CASE("helstrom bound is monotone in the squared overlap") {
    double prev = -1.0;
    for (int i = 0; i < 100; ++i) {
        const double o = double(i) / 99.0;
        const auto [psi, phi] = qubit_pair_with_overlap2(o);
        const double bound = helstrom_error_bound(psi, phi);
        CHECK(bound >= prev - 1e-15);
        CHECK(bound >= 0.0);
        CHECK(bound <= 0.5 + 1e-15);
        prev = bound;
    }
}
