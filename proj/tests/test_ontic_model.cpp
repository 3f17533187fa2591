// Ontic model representation, predicted statistics and the assumption
// checkers, including the hand-countable overlap oracle values.

#include <doctest.h>

#include <cmath>

#include "ontic/antidistinguish.hpp"
#include "ontic/ontic_model.hpp"

using namespace ontic;

namespace {

PureState plus() { return PureState::normalized({cx{1, 0}, cx{1, 0}}); }

Measurement z_basis() {
    return Measurement::from_basis({{cx{1, 0}, cx{0, 0}}, {cx{0, 0}, cx{1, 0}}},
                                   {"0", "1"});
}

// Two-factor model scaffold: factor vectors plus a joint built by the caller.
struct ProductFixture {
    OnticModel model;
    std::vector<std::string> factors{"P_a", "P_b"};
    std::string joint = "P_ab";
};

ProductFixture product_fixture(const std::vector<double>& fa, const std::vector<double>& fb,
                               const std::vector<double>& joint_vec) {
    ProductFixture fx;
    auto& m = fx.model;
    m.space.size = fa.size() * fb.size();
    m.space.factors = {fa.size(), fb.size()};
    const PureState a = PureState::basis(2, 0);
    const PureState b = PureState::basis(2, 1);
    m.preparations.push_back({"P_a", a, {}});
    m.preparations.push_back({"P_b", b, {}});
    m.preparations.push_back({"P_ab", tensor_product({a, b}), {"P_a", "P_b"}});
    m.factor_epistemic["M"]["P_a"] = fa;
    m.factor_epistemic["M"]["P_b"] = fb;
    m.epistemic["M"]["P_ab"] = joint_vec;
    // Joint-level vectors for the factor preparations: factor marginal times
    // a uniform distribution over the other slot.
    std::vector<double> ja(m.space.size), jb(m.space.size);
    for (std::size_t i = 0; i < fa.size(); ++i)
        for (std::size_t j = 0; j < fb.size(); ++j) {
            ja[i * fb.size() + j] = fa[i] / double(fb.size());
            jb[i * fb.size() + j] = fb[j] / double(fa.size());
        }
    m.epistemic["M"]["P_a"] = ja;
    m.epistemic["M"]["P_b"] = jb;
    ResponseTable table;
    table.labels = {"0", "1"};
    table.rows.assign(m.space.size, {0.5, 0.5});
    m.response["M"] = table;
    return fx;
}

std::vector<double> product_joint(const std::vector<double>& fa,
                                  const std::vector<double>& fb) {
    std::vector<double> out(fa.size() * fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i)
        for (std::size_t j = 0; j < fb.size(); ++j) out[i * fb.size() + j] = fa[i] * fb[j];
    return out;
}

} // namespace

TEST_CASE("single-atom psi-ontic model reproduces Born statistics exactly") {
    const auto meas = z_basis();
    const auto model = build_psi_ontic_model({plus()}, meas);
    const auto stats = predicted_statistics(model, "P1", "M");
    CHECK(stats.probabilities[0] == born_probability(plus(), meas, std::size_t{0}));
    CHECK(stats.probabilities[1] == born_probability(plus(), meas, std::size_t{1}));
}

TEST_CASE("deterministic responses turn statistics into counting") {
    OnticModel m;
    m.space.size = 4;
    m.preparations.push_back({"P", PureState::basis(2, 0), {}});
    m.epistemic["M"]["P"] = {0.25, 0.25, 0.25, 0.25};
    ResponseTable table;
    table.labels = {"0", "1"};
    table.rows = {{1, 0}, {1, 0}, {0, 1}, {1, 0}};
    m.response["M"] = table;
    m.validate_model();
    const auto stats = predicted_statistics(m, "P", "M");
    CHECK(stats.probabilities[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(stats.probabilities[1] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("predicted statistics match a brute-force double loop") {
    Xoshiro256 rng(31);
    OnticModel m;
    const std::size_t L = 7, K = 3;
    m.space.size = L;
    m.preparations.push_back({"P", PureState::basis(2, 0), {}});
    std::vector<double> epi(L);
    double sum = 0.0;
    for (auto& x : epi) sum += (x = rng.u01());
    for (auto& x : epi) x /= sum;
    m.epistemic["M"]["P"] = epi;
    ResponseTable table;
    table.labels = {"a", "b", "c"};
    for (std::size_t l = 0; l < L; ++l) {
        std::vector<double> row(K);
        double rs = 0.0;
        for (auto& x : row) rs += (x = rng.u01());
        for (auto& x : row) x /= rs;
        table.rows.push_back(row);
    }
    m.response["M"] = table;
    m.validate_model();
    const auto stats = predicted_statistics(m, "P", "M");
    for (std::size_t k = 0; k < K; ++k) {
        double expect = 0.0;
        for (std::size_t l = 0; l < L; ++l) expect += m.response["M"].rows[l][k] * epi[l];
        CHECK(std::abs(stats.probabilities[k] - expect) < 1e-12);
    }
    CHECK(std::abs(stats.sum() - 1.0) < 1e-10);
}

TEST_CASE("markov property: statistics depend on P only through the epistemic vector") {
    const auto meas = z_basis();
    auto model = build_psi_ontic_model({plus(), PureState::basis(2, 0)}, meas);
    model.preparations.push_back({"P_copy", plus(), {}});
    model.epistemic["M"]["P_copy"] = model.epistemic["M"]["P1"];
    const auto a = predicted_statistics(model, "P1", "M");
    const auto b = predicted_statistics(model, "P_copy", "M");
    for (std::size_t k = 0; k < a.probabilities.size(); ++k)
        CHECK(a.probabilities[k] == b.probabilities[k]);  // bitwise
}

TEST_CASE("missing pairs raise missing_pair errors") {
    const auto model = build_psi_ontic_model({plus()}, z_basis());
    CHECK_THROWS_AS(predicted_statistics(model, "nope", "M"), missing_pair_error);
    CHECK_THROWS_AS(predicted_statistics(model, "P1", "M2"), missing_pair_error);
}

TEST_CASE("statistical completeness: canonical models pass with zero discrepancy") {
    const auto model = build_psi_ontic_model({plus()}, z_basis());
    const auto v = check_statistical_completeness(model);
    CHECK(v.pass);
    CHECK(v.magnitude == 0.0);
}

TEST_CASE("statistical completeness: planted violation is found") {
    auto model = build_psi_ontic_model({plus(), PureState::basis(2, 0)}, z_basis());
    ResponseTable t1 = model.response["M"];
    ResponseTable t2 = t1;
    t2.rows[1][0] += 0.2;
    t2.rows[1][1] -= 0.2;
    model.response_by_preparation["M"]["P1"] = t1;
    model.response_by_preparation["M"]["P2"] = t2;
    const auto v = check_statistical_completeness(model);
    CHECK_FALSE(v.pass);
    CHECK(v.magnitude == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(*v.lambda == 1);
}

TEST_CASE("statistical completeness: coinciding imported tables pass") {
    auto model = build_psi_ontic_model({plus(), PureState::basis(2, 0)}, z_basis());
    model.response_by_preparation["M"]["P1"] = model.response["M"];
    model.response_by_preparation["M"]["P2"] = model.response["M"];
    CHECK(check_statistical_completeness(model).pass);
}

TEST_CASE("compatible is a strict support test") {
    OnticModel m;
    m.space.size = 4;
    m.support_tol = 0.1;
    m.preparations.push_back({"U", PureState::basis(2, 0), {}});
    m.preparations.push_back({"D", PureState::basis(2, 0), {}});
    m.preparations.push_back({"B", PureState::basis(2, 0), {}});
    m.epistemic["M"]["U"] = {0.25, 0.25, 0.25, 0.25};
    m.epistemic["M"]["D"] = {1.0, 0.0, 0.0, 0.0};
    m.epistemic["M"]["B"] = {0.1, 0.3, 0.3, 0.3};  // entry exactly at support_tol
    ResponseTable table;
    table.labels = {"0"};
    table.rows.assign(4, {1.0});
    m.response["M"] = table;
    for (std::size_t l = 0; l < 4; ++l) CHECK(compatible(m, l, "M", "U"));
    CHECK(compatible(m, 0, "M", "D"));
    for (std::size_t l = 1; l < 4; ++l) CHECK_FALSE(compatible(m, l, "M", "D"));
    CHECK_FALSE(compatible(m, 0, "M", "B"));  // strict inequality at the boundary
}

TEST_CASE("compatibility checker on joint supports") {
    const PureState a = PureState::basis(2, 0), b = PureState::basis(2, 1);
    OnticModel m;
    m.space.size = 3;
    m.preparations.push_back({"P_a", a, {}});
    m.preparations.push_back({"P_b", b, {}});
    m.preparations.push_back({"P_ab", tensor_product({a, b}), {"P_a", "P_b"}});
    m.epistemic["M"]["P_a"] = {0.5, 0.5, 0.0};
    m.epistemic["M"]["P_b"] = {0.0, 0.5, 0.5};
    ResponseTable table;
    table.labels = {"0"};
    table.rows.assign(3, {1.0});
    m.response["M"] = table;

    SUBCASE("joint support contains the intersection") {
        m.epistemic["M"]["P_ab"] = {0.0, 1.0, 0.0};
        const auto v = check_compatibility(m, "M", {"P_a", "P_b"}, "P_ab");
        CHECK(v.pass);
    }
    SUBCASE("joint missing a shared atom fails with that witness") {
        m.epistemic["M"]["P_ab"] = {0.5, 0.0, 0.5};
        const auto v = check_compatibility(m, "M", {"P_a", "P_b"}, "P_ab");
        CHECK_FALSE(v.pass);
        CHECK(*v.lambda == 1);
    }
    SUBCASE("factor list must match the joint links") {
        m.epistemic["M"]["P_ab"] = {0.0, 1.0, 0.0};
        CHECK_THROWS_AS(check_compatibility(m, "M", {"P_a"}, "P_ab"), structure_error);
        CHECK_THROWS_AS(check_compatibility(m, "M", {"P_a", "P_b"}, "P_a"), structure_error);
    }
}

TEST_CASE("local compatibility on product spaces") {
    const std::vector<double> fa{0.5, 0.5}, fb{0.25, 0.75};
    SUBCASE("full-support product joint passes") {
        auto fx = product_fixture(fa, fb, product_joint(fa, fb));
        const auto v = check_local_compatibility(fx.model, "M", fx.factors, fx.joint);
        CHECK(v.pass);
    }
    SUBCASE("diagonal-only joint fails with an off-diagonal witness") {
        auto fx = product_fixture(fa, fb, {0.4, 0.0, 0.0, 0.6});
        const auto v = check_local_compatibility(fx.model, "M", fx.factors, fx.joint);
        CHECK_FALSE(v.pass);
        REQUIRE(v.tuple.size() == 2);
        CHECK(v.tuple[0] != v.tuple[1]);
    }
    SUBCASE("correlated but strictly positive joint passes") {
        auto joint = product_joint(fa, fb);
        // 10% diagonal boost, renormalized: still positive everywhere.
        std::vector<double> diag{0.5 * 0.5, 0.0, 0.0, 0.5 * 0.5};
        double sum = 0.0;
        for (std::size_t i = 0; i < joint.size(); ++i)
            sum += (joint[i] = 0.9 * joint[i] + 0.4 * diag[i]);
        for (auto& x : joint) x /= sum;
        auto fx = product_fixture(fa, fb, joint);
        CHECK(check_local_compatibility(fx.model, "M", fx.factors, fx.joint).pass);
        CHECK_FALSE(check_factorisability(fx.model, "M", fx.factors, fx.joint).pass);
    }
    SUBCASE("missing product structure is a structure error") {
        auto fx = product_fixture(fa, fb, product_joint(fa, fb));
        fx.model.space.factors.clear();
        CHECK_THROWS_AS(check_local_compatibility(fx.model, "M", fx.factors, fx.joint),
                        structure_error);
    }
}

TEST_CASE("factorisability checker") {
    const std::vector<double> fa{0.3, 0.7}, fb{0.6, 0.4};
    SUBCASE("exact product passes with tiny deviation") {
        auto fx = product_fixture(fa, fb, product_joint(fa, fb));
        const auto v = check_factorisability(fx.model, "M", fx.factors, fx.joint);
        CHECK(v.pass);
        CHECK(v.magnitude <= 1e-15);
    }
    SUBCASE("diagonal-correlated joint fails with positive deviation") {
        auto fx = product_fixture({0.5, 0.5}, {0.5, 0.5}, {0.5, 0.0, 0.0, 0.5});
        const auto v = check_factorisability(fx.model, "M", fx.factors, fx.joint);
        CHECK_FALSE(v.pass);
        CHECK(v.magnitude == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("factorisability implies compatibility and local compatibility") {
    Xoshiro256 rng(77);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> fa(3), fb(3);
        double sa = 0.0, sb = 0.0;
        for (auto& x : fa) sa += (x = rng.u01() < 0.3 ? 0.0 : rng.u01());
        for (auto& x : fb) sb += (x = rng.u01() < 0.3 ? 0.0 : rng.u01());
        if (sa <= 0.0 || sb <= 0.0) continue;
        for (auto& x : fa) x /= sa;
        for (auto& x : fb) x /= sb;
        auto fx = product_fixture(fa, fb, product_joint(fa, fb));
        CHECK(check_factorisability(fx.model, "M", fx.factors, fx.joint).pass);
        CHECK(check_compatibility(fx.model, "M", fx.factors, fx.joint).pass);
        CHECK(check_local_compatibility(fx.model, "M", fx.factors, fx.joint).pass);
    }
}

TEST_CASE("measurement independence checker") {
    const auto meas = z_basis();
    SUBCASE("shared vectors pass") {
        auto model = build_psi_ontic_model({plus()}, meas);
        model.epistemic["M2"]["P1"] = model.epistemic["M"]["P1"];
        model.response["M2"] = model.response["M"];
        CHECK(check_measurement_independence(model).pass);
        CHECK_NOTHROW(model.validate_model());
    }
    SUBCASE("0.3 deviation at one atom fails with that magnitude") {
        auto model = build_psi_ontic_model({plus(), PureState::basis(2, 0)}, meas);
        model.response["M2"] = model.response["M"];
        model.epistemic["M2"]["P1"] = {0.7, 0.3};
        model.epistemic["M2"]["P2"] = model.epistemic["M"]["P2"];
        model.measurement_independent = false;
        const auto v = check_measurement_independence(model);
        CHECK_FALSE(v.pass);
        CHECK(v.magnitude == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(v.prep_a == "P1");
    }
}

TEST_CASE("overlap values and support sets") {
    OnticModel m;
    m.space.size = 15;
    m.preparations.push_back({"P", PureState::basis(2, 0), {}});
    m.preparations.push_back({"Q", PureState::basis(2, 1), {}});
    std::vector<double> p(15, 0.0), q(15, 0.0);
    for (std::size_t i = 0; i < 10; ++i) p[i] = 0.1;       // atoms 0..9
    for (std::size_t i = 5; i < 15; ++i) q[i] = 0.1;       // atoms 5..14
    m.epistemic["M"]["P"] = p;
    m.epistemic["M"]["Q"] = q;
    ResponseTable table;
    table.labels = {"0"};
    table.rows.assign(15, {1.0});
    m.response["M"] = table;

    SUBCASE("half-overlapping uniform vectors: 5 shared atoms at 0.01 each") {
        const auto ov = overlap(m, "M", "P", "Q");
        CHECK(ov.value == doctest::Approx(0.05).epsilon(1e-12));
        CHECK(ov.support.size() == 5);
    }
    SUBCASE("self overlap is the purity, support the full support") {
        const auto ov = overlap(m, "M", "P", "P");
        CHECK(ov.value == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(ov.support.size() == 10);
    }
    SUBCASE("disjoint point masses have zero overlap and empty support") {
        m.epistemic["M"]["P"] = std::vector<double>(15, 0.0);
        m.epistemic["M"]["Q"] = std::vector<double>(15, 0.0);
        m.epistemic["M"]["P"][0] = 1.0;
        m.epistemic["M"]["Q"][14] = 1.0;
        const auto ov = overlap(m, "M", "P", "Q");
        CHECK(ov.value == 0.0);
        CHECK(ov.support.empty());
    }
    SUBCASE("symmetry is exact") {
        const auto a = overlap(m, "M", "P", "Q");
        const auto b = overlap(m, "M", "Q", "P");
        CHECK(a.value == b.value);
    }
    SUBCASE("zero overlap iff empty support at support_tol zero") {
        const auto ov = overlap(m, "M", "P", "Q");
        CHECK((ov.value <= 1e-15) == ov.support.empty());
    }
}

TEST_CASE("psi-ontic builder invariants") {
    const auto [psi, phi] = qubit_pair_with_overlap2(0.5);
    const auto meas = z_basis();
    const auto model = build_psi_ontic_model({psi, phi}, meas);
    model.validate_model();
    CHECK(check_statistical_completeness(model).pass);
    CHECK(check_measurement_independence(model).pass);
    CHECK(overlap(model, "M", "P1", "P2").value == 0.0);
    const auto stats = predicted_statistics(model, "P1", "M");
    CHECK(stats.probabilities[0] ==
          doctest::Approx(born_probability(psi, meas, std::size_t{0})).epsilon(1e-15));
}

TEST_CASE("psi-ontic model over the four products reproduces the zeros") {
    const PureState psi = PureState::basis(2, 0);
    const PureState phi = plus();
    const auto anti = build_half_overlap_measurement(psi, phi);
    std::vector<PureState> prods;
    for (auto& [idx, st] : enumerate_product_states(psi, phi, 2)) prods.push_back(st);
    const auto model = build_psi_ontic_model(prods, anti.measurement);
    for (std::size_t k = 0; k < 4; ++k) {
        const auto stats = predicted_statistics(model, "P" + std::to_string(k + 1), "M");
        CHECK(stats.probabilities[k] <= 1e-12);
    }
}

TEST_CASE("overlapping toy model arithmetic") {
    const PureState psi = PureState::basis(2, 0);
    const PureState phi = plus();
    const auto anti = build_half_overlap_measurement(psi, phi);
    SUBCASE("mix 0.5 gives overlap 0.25 with one shared atom") {
        const auto model = build_overlapping_toy_model(psi, phi, anti.measurement, 0.5);
        model.validate_model();
        const auto ov = overlap(model, "M", "P_psi", "P_phi");
        CHECK(ov.value == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(ov.support.size() == 1);
    }
    SUBCASE("overlap vanishes as mix goes to zero") {
        double prev = 1.0;
        for (double mix : {0.5, 0.1, 0.01, 0.001}) {
            const auto model = build_overlapping_toy_model(psi, phi, anti.measurement, mix);
            const double v = overlap(model, "M", "P_psi", "P_phi").value;
            CHECK(v == doctest::Approx(mix * mix).epsilon(1e-12));
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("model validation rejects broken vectors") {
    auto model = build_psi_ontic_model({plus()}, z_basis());
    SUBCASE("epistemic sum") {
        model.epistemic["M"]["P1"] = {0.7, 0.7};
        CHECK_THROWS_AS(model.validate_model(), validation_error);
    }
    SUBCASE("negative entries") {
        model.epistemic["M"]["P1"] = {1.5, -0.5};
        CHECK_THROWS_AS(model.validate_model(), validation_error);
    }
    SUBCASE("response row sum, strict vs relaxed") {
        model.response["M"].rows[0] = {0.0, 0.0};
        CHECK_THROWS_AS(model.validate_model(), validation_error);
        model.validation = Validation::relaxed;
        CHECK_NOTHROW(model.validate_model());
    }
    SUBCASE("factor-linked state mismatch") {
        model.preparations.push_back(
            {"J", PureState::basis(4, 1), {"P1", "P1"}});
        CHECK_THROWS_AS(model.validate_model(), validation_error);
    }
    SUBCASE("factor vectors without product structure") {
        model.factor_epistemic["M"]["P1"] = {1.0};
        CHECK_THROWS_AS(model.validate_model(), validation_error);
    }
}
