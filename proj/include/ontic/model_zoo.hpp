// model_zoo.hpp
// Named fixture models: scenario-complete ontological models that exercise
// every branch of the theorem verifiers, plus seeded random generators for
// the property suites. Each fixture records its scenario (which preparations
// play psi, phi and the joints) under the measurement id.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ontic/antidistinguish.hpp"
#include "ontic/ontic_model.hpp"
#include "ontic/quantum.hpp"
#include "ontic/rng.hpp"

namespace ontic::zoo {

inline std::string joint_id(std::size_t k) { return "P_joint" + std::to_string(k + 1); }

namespace detail {

inline std::vector<std::string> factor_ids_for(const ProductStateIndex& idx) {
    std::vector<std::string> out;
    for (int b : idx.bits) out.push_back(b == 0 ? "P_psi" : "P_phi");
    return out;
}

inline std::vector<double> point_mass(std::size_t size, std::size_t at) {
    std::vector<double> v(size, 0.0);
    v[at] = 1.0;
    return v;
}

inline std::vector<double> uniform_except(std::size_t size, std::size_t skip) {
    std::vector<double> v(size, 1.0 / double(size - 1));
    v[skip] = 0.0;
    return v;
}

} // namespace detail

// Lambda is the prepared product state itself: one atom per Psi_k, point-mass
// epistemic vectors, Born response rows. P_psi and P_phi sit on the all-psi
// and all-phi atoms.
inline OnticModel psi_ontic_scenario(const PureState& psi, const PureState& phi,
                                     const Measurement& meas, const std::string& mid = "M") {
    const auto products = enumerate_product_states(psi, phi, [&] {
        std::size_t n = 0;
        while ((std::size_t{1} << n) < meas.outcome_count()) ++n;
        return n;
    }());
    OnticModel m;
    m.space.size = products.size();
    m.measurement_independent = true;
    m.preparations.push_back({"P_psi", psi, {}});
    m.preparations.push_back({"P_phi", phi, {}});
    m.epistemic[mid]["P_psi"] = detail::point_mass(products.size(), 0);
    m.epistemic[mid]["P_phi"] = detail::point_mass(products.size(), products.size() - 1);
    Scenario scen{"P_psi", "P_phi", {}};
    ResponseTable table;
    table.labels = meas.labels;
    for (std::size_t k = 0; k < products.size(); ++k) {
        m.preparations.push_back(
            {joint_id(k), products[k].second, detail::factor_ids_for(products[k].first)});
        m.epistemic[mid][joint_id(k)] = detail::point_mass(products.size(), k);
        table.rows.push_back(born_distribution(products[k].second, meas).probabilities);
        scen.joint_ids.push_back(joint_id(k));
    }
    m.response[mid] = std::move(table);
    m.scenarios[mid] = std::move(scen);
    return m;
}

// Overlapping-ensembles fixture extended with joint preparations. The shared
// atom carries weight `mix` under both P_psi and P_phi and weight mix^2 under
// every joint; each mixed joint anchors its remaining mass on a private atom
// whose response row avoids the forbidden outcome. With exact_zeros the
// shared atom's row is identically zero (relaxed validation), which realizes
// the forbidden statistics exactly and forces the row-sum contradiction.
inline OnticModel overlapping_scenario(const PureState& psi, const PureState& phi,
                                       const Measurement& meas, double mix,
                                       bool exact_zeros, const std::string& mid = "M") {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < meas.outcome_count()) ++n;
    const std::size_t outcomes = meas.outcome_count();
    const auto products = enumerate_product_states(psi, phi, n);
    const std::size_t size = 3 + (outcomes - 2);  // psi, shared, phi + mixed anchors
    const std::size_t atom_psi = 0, atom_shared = 1, atom_phi = 2;
    const auto anchor = [&](std::size_t k) { return 3 + k - 1; };  // mixed k in [1, 2^n-2]

    OnticModel m;
    m.space.size = size;
    m.measurement_independent = true;
    if (exact_zeros) m.validation = Validation::relaxed;
    m.preparations.push_back({"P_psi", psi, {}});
    m.preparations.push_back({"P_phi", phi, {}});
    std::vector<double> epi_psi(size, 0.0), epi_phi(size, 0.0);
    epi_psi[atom_psi] = 1.0 - mix;
    epi_psi[atom_shared] = mix;
    epi_phi[atom_shared] = mix;
    epi_phi[atom_phi] = 1.0 - mix;
    m.epistemic[mid]["P_psi"] = epi_psi;
    m.epistemic[mid]["P_phi"] = epi_phi;

    const PureState psi_n = tensor_product(std::vector<PureState>(n, psi));
    const PureState phi_n = tensor_product(std::vector<PureState>(n, phi));
    auto row_psi = born_distribution(psi_n, meas).probabilities;
    auto row_phi = born_distribution(phi_n, meas).probabilities;
    if (exact_zeros) {
        // Snap the analytically vanishing entries to exactly zero.
        row_psi[0] = 0.0;
        row_phi[outcomes - 1] = 0.0;
        double s1 = 0.0, s2 = 0.0;
        for (double x : row_psi) s1 += x;
        for (double x : row_phi) s2 += x;
        for (double& x : row_psi) x /= s1;
        for (double& x : row_phi) x /= s2;
    }
    ResponseTable table;
    table.labels = meas.labels;
    table.rows.assign(size, {});
    table.rows[atom_psi] = row_psi;
    table.rows[atom_shared] =
        exact_zeros ? std::vector<double>(outcomes, 0.0)
                    : std::vector<double>(outcomes, 1.0 / double(outcomes));
    table.rows[atom_phi] = row_phi;

    Scenario scen{"P_psi", "P_phi", {}};
    const double mix2 = mix * mix;
    for (std::size_t k = 0; k < outcomes; ++k) {
        m.preparations.push_back(
            {joint_id(k), products[k].second, detail::factor_ids_for(products[k].first)});
        std::vector<double> epi(size, 0.0);
        epi[atom_shared] = mix2;
        if (k == 0) {
            epi[atom_psi] = 1.0 - mix2;
        } else if (k == outcomes - 1) {
            epi[atom_phi] = 1.0 - mix2;
        } else {
            epi[anchor(k)] = 1.0 - mix2;
            table.rows[anchor(k)] = detail::uniform_except(outcomes, k);
        }
        m.epistemic[mid][joint_id(k)] = std::move(epi);
        scen.joint_ids.push_back(joint_id(k));
    }
    m.response[mid] = std::move(table);
    m.scenarios[mid] = std::move(scen);
    return m;
}

namespace detail {

// Shared scaffold for two-device product-space fixtures. Factor vectors for
// psi and phi sit on disjoint halves of the factor space, so every tuple
// identifies its joint uniquely and the response rows can avoid the
// forbidden outcome exactly.
inline OnticModel two_device_product_model(const PureState& psi, const PureState& phi,
                                           const Measurement& meas,
                                           const std::vector<double>& f_psi,
                                           const std::vector<double>& f_phi,
                                           double coupling_weight,
                                           const std::string& mid) {
    const std::size_t F = f_psi.size();
    const std::size_t outcomes = meas.outcome_count();
    if (outcomes != 4)
        throw validation_error("outcome_count", "two-device fixture needs 4 outcomes");
    const auto products = enumerate_product_states(psi, phi, 2);

    OnticModel m;
    m.space.size = F * F;
    m.space.factors = {F, F};
    m.measurement_independent = true;
    m.preparations.push_back({"P_psi", psi, {}});
    m.preparations.push_back({"P_phi", phi, {}});
    m.factor_epistemic[mid]["P_psi"] = f_psi;
    m.factor_epistemic[mid]["P_phi"] = f_phi;

    const auto owner = [&](std::size_t a) { return f_psi[a] > 0.0 ? 0 : 1; };
    ResponseTable table;
    table.labels = meas.labels;
    for (std::size_t a = 0; a < F; ++a)
        for (std::size_t b = 0; b < F; ++b) {
            const std::size_t k = std::size_t(owner(a)) * 2 + std::size_t(owner(b));
            table.rows.push_back(uniform_except(outcomes, k));
        }
    m.response[mid] = std::move(table);

    Scenario scen{"P_psi", "P_phi", {}};
    for (std::size_t k = 0; k < outcomes; ++k) {
        const auto& idx = products[k].first;
        const auto& fa = idx.bits[0] == 0 ? f_psi : f_phi;
        const auto& fb = idx.bits[1] == 0 ? f_psi : f_phi;
        std::vector<double> joint(F * F, 0.0);
        for (std::size_t a = 0; a < F; ++a)
            for (std::size_t b = 0; b < F; ++b)
                joint[a * F + b] += (1.0 - coupling_weight) * fa[a] * fb[b];
        if (coupling_weight > 0.0) {
            // Comonotone coupling via a common quantile.
            std::vector<double> cuts{1.0};
            double c = 0.0;
            for (double x : fa)
                if (x > 0.0) cuts.push_back(c += x);
            c = 0.0;
            for (double x : fb)
                if (x > 0.0) cuts.push_back(c += x);
            std::sort(cuts.begin(), cuts.end());
            double lo = 0.0;
            for (double hi : cuts) {
                if (hi - lo > 1e-15) {
                    const double u = 0.5 * (lo + hi);
                    std::size_t a = 0, b = 0;
                    double acc = 0.0;
                    for (std::size_t l = 0; l < F; ++l) {
                        acc += fa[l];
                        if (u < acc) {
                            a = l;
                            break;
                        }
                    }
                    acc = 0.0;
                    for (std::size_t l = 0; l < F; ++l) {
                        acc += fb[l];
                        if (u < acc) {
                            b = l;
                            break;
                        }
                    }
                    joint[a * F + b] += coupling_weight * (hi - lo);
                }
                lo = hi;
            }
        }
        m.preparations.push_back(
            {joint_id(k), products[k].second, factor_ids_for(idx)});
        m.epistemic[mid][joint_id(k)] = std::move(joint);
        scen.joint_ids.push_back(joint_id(k));
    }
    // P_psi / P_phi joint-level vectors alias the all-psi / all-phi contexts.
    m.epistemic[mid]["P_psi"] = m.epistemic[mid][joint_id(0)];
    m.epistemic[mid]["P_phi"] = m.epistemic[mid][joint_id(outcomes - 1)];
    m.scenarios[mid] = std::move(scen);
    return m;
}

} // namespace detail

// Reductionist model built from psi-ontic factors: each device's lambda_j is
// a point mass, joints factor exactly.
inline OnticModel factorisable_product_scenario(const PureState& psi, const PureState& phi,
                                                const Measurement& meas,
                                                const std::string& mid = "M") {
    return detail::two_device_product_model(psi, phi, meas, {1.0, 0.0}, {0.0, 1.0}, 0.0,
                                            mid);
}

// Device lambdas drawn from shared randomness: half product, half comonotone
// coupling. Compatibility and local compatibility hold, factorisability
// fails.
inline OnticModel shared_randomness_scenario(const PureState& psi, const PureState& phi,
                                             const Measurement& meas,
                                             const std::string& mid = "M") {
    return detail::two_device_product_model(psi, phi, meas, {0.5, 0.5, 0.0, 0.0},
                                            {0.0, 0.0, 0.5, 0.5}, 0.5, mid);
}

// Overlapping factor marginals with a diagonal boost, all joint entries
// positive: local compatibility holds, factorisability fails, and the exact
// forbidden zeros force identically zero response rows (relaxed validation).
// theorem1_check_local finds the row-sum contradiction on the diagonal.
inline OnticModel diagonal_correlated_scenario(const PureState& psi, const PureState& phi,
                                               const Measurement& meas,
                                               const std::string& mid = "M") {
    const std::size_t F = 2;
    const std::size_t outcomes = meas.outcome_count();
    if (outcomes != 4)
        throw validation_error("outcome_count", "fixture needs 4 outcomes");
    const std::vector<double> f_psi{0.6, 0.4}, f_phi{0.3, 0.7};
    const auto products = enumerate_product_states(psi, phi, 2);

    OnticModel m;
    m.validation = Validation::relaxed;
    m.space.size = F * F;
    m.space.factors = {F, F};
    m.measurement_independent = true;
    m.preparations.push_back({"P_psi", psi, {}});
    m.preparations.push_back({"P_phi", phi, {}});
    m.factor_epistemic[mid]["P_psi"] = f_psi;
    m.factor_epistemic[mid]["P_phi"] = f_phi;
    ResponseTable table;
    table.labels = meas.labels;
    table.rows.assign(F * F, std::vector<double>(outcomes, 0.0));
    m.response[mid] = std::move(table);

    Scenario scen{"P_psi", "P_phi", {}};
    for (std::size_t k = 0; k < outcomes; ++k) {
        const auto& idx = products[k].first;
        const auto& fa = idx.bits[0] == 0 ? f_psi : f_phi;
        const auto& fb = idx.bits[1] == 0 ? f_psi : f_phi;
        std::vector<double> joint(F * F, 0.0);
        for (std::size_t a = 0; a < F; ++a)
            for (std::size_t b = 0; b < F; ++b) {
                joint[a * F + b] = 0.9 * fa[a] * fb[b];
                if (a == b) joint[a * F + b] += 0.1 * 0.5 * (fa[a] + fb[b]);
            }
        double sum = 0.0;
        for (double x : joint) sum += x;
        for (double& x : joint) x /= sum;
        m.preparations.push_back(
            {joint_id(k), products[k].second, detail::factor_ids_for(idx)});
        m.epistemic[mid][joint_id(k)] = std::move(joint);
        scen.joint_ids.push_back(joint_id(k));
    }
    m.epistemic[mid]["P_psi"] = m.epistemic[mid][joint_id(0)];
    m.epistemic[mid]["P_phi"] = m.epistemic[mid][joint_id(outcomes - 1)];
    m.scenarios[mid] = std::move(scen);
    return m;
}

// Two measurements whose hidden-variable decompositions live on different
// atoms: statistics reproduce the Born rule for both, but the epistemic
// vectors depend on the measurement. The antidistinguishing scenario holds
// for `mid` while measurement independence fails.
inline OnticModel measurement_dependent_scenario(const PureState& psi, const PureState& phi,
                                                 const Measurement& meas,
                                                 const Measurement& second,
                                                 const std::string& mid = "M",
                                                 const std::string& mid2 = "M2") {
    const std::size_t outcomes = meas.outcome_count();
    std::size_t n = 0;
    while ((std::size_t{1} << n) < outcomes) ++n;
    const auto products = enumerate_product_states(psi, phi, n);
    const std::size_t size = outcomes + second.outcome_count();
    const auto omega = [&](std::size_t j) { return outcomes + j; };

    OnticModel m;
    m.space.size = size;
    m.measurement_independent = false;
    m.preparations.push_back({"P_psi", psi, {}});
    m.preparations.push_back({"P_phi", phi, {}});

    ResponseTable t1, t2;
    t1.labels = meas.labels;
    t2.labels = second.labels;
    t1.rows.assign(size, {});
    t2.rows.assign(size, {});
    for (std::size_t k = 0; k < outcomes; ++k) {
        t1.rows[k] = born_distribution(products[k].second, meas).probabilities;
        t2.rows[k] = born_distribution(products[k].second, second).probabilities;
    }
    for (std::size_t j = 0; j < second.outcome_count(); ++j) {
        t1.rows[omega(j)] =
            std::vector<double>(outcomes, 1.0 / double(outcomes));
        t2.rows[omega(j)] = detail::point_mass(second.outcome_count(), j);
    }

    Scenario scen{"P_psi", "P_phi", {}};
    for (std::size_t k = 0; k < outcomes; ++k) {
        m.preparations.push_back(
            {joint_id(k), products[k].second, detail::factor_ids_for(products[k].first)});
        m.epistemic[mid][joint_id(k)] = detail::point_mass(size, k);
        // Under the second measurement the hidden variable is the outcome
        // atom, weighted by the Born rule.
        std::vector<double> w(size, 0.0);
        const auto born = born_distribution(products[k].second, second).probabilities;
        for (std::size_t j = 0; j < born.size(); ++j) w[omega(j)] = born[j];
        m.epistemic[mid2][joint_id(k)] = std::move(w);
        scen.joint_ids.push_back(joint_id(k));
    }
    m.epistemic[mid]["P_psi"] = detail::point_mass(size, 0);
    m.epistemic[mid]["P_phi"] = detail::point_mass(size, outcomes - 1);
    m.epistemic[mid2]["P_psi"] = detail::point_mass(size, omega(0));
    m.epistemic[mid2]["P_phi"] = detail::point_mass(size, omega(second.outcome_count() - 1));
    m.response[mid] = std::move(t1);
    m.response[mid2] = std::move(t2);
    m.scenarios[mid] = std::move(scen);
    return m;
}

// ---------------------------------------------------------------------------
// Seeded random model generators for the property suites.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> random_distribution(Xoshiro256& rng, std::size_t size,
                                               const std::vector<std::size_t>& support) {
    std::vector<double> v(size, 0.0);
    double sum = 0.0;
    for (std::size_t i : support) sum += (v[i] = 0.05 + rng.u01());
    for (std::size_t i : support) v[i] /= sum;
    return v;
}

} // namespace detail

// A valid model satisfying completeness, compatibility and the forbidden
// zeros exactly, with disjoint psi/phi supports. theorem1_check must return
// overlap_zero on every one of these.
inline OnticModel random_exact_zero_scenario(std::uint64_t seed, std::size_t n = 2,
                                             const std::string& mid = "M") {
    Xoshiro256 rng(derive_seed(seed, 101));
    const std::size_t outcomes = std::size_t{1} << n;
    const std::size_t block = 2 + rng.index(3);           // psi / phi block sizes
    const std::size_t free_atoms = 1 + rng.index(4);
    const std::size_t size = 2 * block + free_atoms;

    std::vector<std::size_t> b_psi, b_phi, b_free;
    for (std::size_t i = 0; i < block; ++i) b_psi.push_back(i);
    for (std::size_t i = 0; i < block; ++i) b_phi.push_back(block + i);
    for (std::size_t i = 0; i < free_atoms; ++i) b_free.push_back(2 * block + i);

    const auto [psi, phi] = qubit_pair_with_overlap2(0.5);
    const auto products = enumerate_product_states(psi, phi, n);

    OnticModel m;
    m.space.size = size;
    m.measurement_independent = true;
    m.preparations.push_back({"P_psi", psi, {}});
    m.preparations.push_back({"P_phi", phi, {}});
    m.epistemic[mid]["P_psi"] = detail::random_distribution(rng, size, b_psi);
    m.epistemic[mid]["P_phi"] = detail::random_distribution(rng, size, b_phi);

    // Joint supports. Every atom gets one designated safe outcome whose joint
    // never touches it, so its response row always has somewhere to put mass:
    // psi-block atoms are safe for the all-phi joint and vice versa, free
    // atoms for one fixed mixed joint. The all-psi joint must cover the psi
    // block (compatibility), mirrored for all-phi.
    std::vector<std::size_t> safe(size);
    for (std::size_t l = 0; l < size; ++l) {
        if (l < block) safe[l] = outcomes - 1;
        else if (l < 2 * block) safe[l] = 0;
        else safe[l] = 1 + rng.index(outcomes - 2);
    }
    std::vector<std::vector<std::size_t>> supports(outcomes);
    for (std::size_t k = 0; k < outcomes; ++k) {
        std::vector<std::size_t> sup;
        if (k == 0) sup = b_psi;
        else if (k == outcomes - 1) sup = b_phi;
        for (std::size_t l : b_free)
            if (safe[l] != k && rng.bernoulli(0.6)) sup.push_back(l);
        if (sup.empty()) {
            for (std::size_t l = 0; l < size; ++l)
                if (safe[l] != k) {
                    sup.push_back(l);
                    break;
                }
        }
        supports[k] = sup;
    }
    std::vector<std::vector<bool>> forbidden(size, std::vector<bool>(outcomes, false));
    Scenario scen{"P_psi", "P_phi", {}};
    for (std::size_t k = 0; k < outcomes; ++k) {
        m.preparations.push_back(
            {joint_id(k), products[k].second, detail::factor_ids_for(products[k].first)});
        m.epistemic[mid][joint_id(k)] = detail::random_distribution(rng, size, supports[k]);
        for (std::size_t l : supports[k]) forbidden[l][k] = true;
        scen.joint_ids.push_back(joint_id(k));
    }

    ResponseTable table;
    table.labels = Measurement::default_labels(outcomes);
    for (std::size_t l = 0; l < size; ++l) {
        std::vector<std::size_t> allowed;
        for (std::size_t k = 0; k < outcomes; ++k)
            if (!forbidden[l][k]) allowed.push_back(k);
        std::vector<double> weights = detail::random_distribution(rng, outcomes, allowed);
        table.rows.push_back(std::move(weights));
    }
    m.response[mid] = std::move(table);
    m.scenarios[mid] = std::move(scen);
    return m;
}

enum class Violation { compatibility, forbidden_statistic, completeness, row_deficit };

// Plants one violation into an otherwise exact random scenario.
inline OnticModel random_planted_violation(std::uint64_t seed, Violation kind,
                                           const std::string& mid = "M") {
    OnticModel m = random_exact_zero_scenario(seed, 2, mid);
    Xoshiro256 rng(derive_seed(seed, 202));
    const std::size_t outcomes = m.response[mid].labels.size();
    switch (kind) {
        case Violation::compatibility: {
            // Overlap psi and phi on one shared atom, then hide it from a
            // mixed joint.
            auto& p = m.epistemic[mid]["P_psi"];
            auto& q = m.epistemic[mid]["P_phi"];
            const std::size_t shared = 0;
            p[shared] = std::max(p[shared], 0.25);
            q[shared] = 0.25;
            double sp = 0.0, sq = 0.0;
            for (double x : p) sp += x;
            for (double x : q) sq += x;
            for (double& x : p) x /= sp;
            for (double& x : q) x /= sq;
            auto& joint = m.epistemic[mid][joint_id(1)];
            joint[shared] = 0.0;
            double sj = 0.0;
            for (double x : joint) sj += x;
            for (double& x : joint) x /= sj;
            break;
        }
        case Violation::forbidden_statistic: {
            const std::size_t k = rng.index(outcomes);
            const auto& joint = m.epistemic[mid][joint_id(k)];
            for (std::size_t l = 0; l < joint.size(); ++l) {
                if (joint[l] > 0.0) {
                    auto& row = m.response[mid].rows[l];
                    const double bump = 0.1 + 0.4 * rng.u01();
                    for (double& x : row) x *= (1.0 - bump);
                    row[k] += bump;
                    break;
                }
            }
            break;
        }
        case Violation::completeness: {
            ResponseTable base = m.response[mid];
            ResponseTable other = base;
            const std::size_t l = rng.index(other.rows.size());
            auto& row = other.rows[l];
            const std::size_t a = rng.index(row.size());
            const std::size_t b = (a + 1) % row.size();
            const double shift = 0.05 + 0.2 * rng.u01();
            row[a] = std::max(0.0, row[a] - shift);
            row[b] += shift;
            double s = 0.0;
            for (double x : row) s += x;
            for (double& x : row) x /= s;
            m.response_by_preparation[mid]["P_psi"] = base;
            m.response_by_preparation[mid]["P_phi"] = other;
            break;
        }
        case Violation::row_deficit: {
            // Create a genuinely shared atom whose joints all charge it and
            // whose response row is identically zero.
            m.validation = Validation::relaxed;
            const std::size_t shared = m.space.size - 1;
            for (auto& [pid, vec] : m.epistemic[mid]) {
                vec[shared] = 0.3;
                double s = 0.0;
                for (double x : vec) s += x;
                for (double& x : vec) x /= s;
            }
            m.response[mid].rows[shared].assign(outcomes, 0.0);
            break;
        }
    }
    return m;
}

// Random two-device product model for the assumption-hierarchy property:
// per-slot factor preparations, joint either exactly factorised or
// perturbed, joint-level factor vectors extended uniformly over the other
// slot.
struct ProductModelCase {
    OnticModel model;
    std::vector<std::string> factor_preps;  // one per slot
    std::string joint_prep = "P_joint";
    bool built_factorised = false;
};

inline ProductModelCase random_product_model(std::uint64_t seed,
                                             const std::string& mid = "M") {
    Xoshiro256 rng(derive_seed(seed, 303));
    const std::size_t fa_size = 2 + rng.index(3);
    const std::size_t fb_size = 2 + rng.index(3);

    const auto random_factor = [&](std::size_t size) {
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < size; ++i)
            if (rng.bernoulli(0.7)) support.push_back(i);
        if (support.empty()) support.push_back(rng.index(size));
        return detail::random_distribution(rng, size, support);
    };
    const auto fa = random_factor(fa_size);
    const auto fb = random_factor(fb_size);

    ProductModelCase out;
    auto& m = out.model;
    m.space.size = fa_size * fb_size;
    m.space.factors = {fa_size, fb_size};
    const PureState sa = PureState::basis(2, 0), sb = PureState::basis(2, 1);
    m.preparations.push_back({"P_dev1", sa, {}});
    m.preparations.push_back({"P_dev2", sb, {}});
    m.preparations.push_back({"P_joint", tensor_product({sa, sb}), {"P_dev1", "P_dev2"}});
    out.factor_preps = {"P_dev1", "P_dev2"};
    m.factor_epistemic[mid]["P_dev1"] = fa;
    m.factor_epistemic[mid]["P_dev2"] = fb;

    std::vector<double> ja(m.space.size), jb(m.space.size);
    for (std::size_t a = 0; a < fa_size; ++a)
        for (std::size_t b = 0; b < fb_size; ++b) {
            ja[a * fb_size + b] = fa[a] / double(fb_size);
            jb[a * fb_size + b] = fb[b] / double(fa_size);
        }
    m.epistemic[mid]["P_dev1"] = ja;
    m.epistemic[mid]["P_dev2"] = jb;

    std::vector<double> joint(m.space.size);
    for (std::size_t a = 0; a < fa_size; ++a)
        for (std::size_t b = 0; b < fb_size; ++b) joint[a * fb_size + b] = fa[a] * fb[b];
    out.built_factorised = rng.bernoulli(0.5);
    if (!out.built_factorised) {
        // Perturb within the support, keeping normalization.
        std::vector<std::size_t> sup;
        for (std::size_t i = 0; i < joint.size(); ++i)
            if (joint[i] > 0.0) sup.push_back(i);
        if (sup.size() >= 2) {
            const std::size_t i = sup[rng.index(sup.size())];
            std::size_t j = sup[rng.index(sup.size())];
            while (j == i) j = sup[rng.index(sup.size())];
            const double shift = std::min(joint[i], 0.02 + 0.3 * rng.u01() * joint[i]);
            joint[i] -= shift;
            joint[j] += shift;
        }
    }
    m.epistemic[mid]["P_joint"] = joint;

    ResponseTable table;
    table.labels = {"0", "1"};
    table.rows.assign(m.space.size, {0.5, 0.5});
    m.response[mid] = std::move(table);
    return out;
}

} // namespace ontic::zoo
