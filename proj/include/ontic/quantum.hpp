// quantum.hpp
// Finite-dimensional pure states, tensor products, measurements as positive
// effect sets, Born-rule outcome distributions and the Helstrom two-state
// discrimination bound.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ontic/common.hpp"
#include "ontic/linalg.hpp"
#include "ontic/rng.hpp"

namespace ontic {

// Unit complex amplitude vector. Immutable after construction.
class PureState {
public:
    explicit PureState(CVec amplitudes) : amp_(std::move(amplitudes)) {
        if (amp_.size() < 2)
            throw validation_error("state_dim", "pure state needs dimension >= 2");
        const double n2 = norm2(amp_);
        if (std::abs(std::sqrt(n2) - 1.0) > kNormTol)
            throw validation_error("state_norm",
                                   "pure state amplitudes are not normalized: |norm-1| = " +
                                       format17(std::abs(std::sqrt(n2) - 1.0)));
    }

    // Normalizes the input amplitudes first.
    static PureState normalized(CVec amplitudes) {
        const double nn = std::sqrt(norm2(amplitudes));
        if (nn < 1e-300)
            throw validation_error("state_norm", "cannot normalize the zero vector");
        scale(amplitudes, cx{1.0 / nn, 0.0});
        return PureState(std::move(amplitudes));
    }

    static PureState basis(std::size_t dim, std::size_t index) {
        CVec a(dim, cx{0.0, 0.0});
        a.at(index) = cx{1.0, 0.0};
        return PureState(std::move(a));
    }

    // Qubit cos(theta)|0> + sin(theta)e^{i phase}|1>.
    static PureState qubit(double theta, double phase = 0.0) {
        return PureState(CVec{cx{std::cos(theta), 0.0},
                              std::polar(std::sin(theta), phase)});
    }

    // Haar-like random state from a seeded generator.
    static PureState random(std::size_t dim, Xoshiro256& rng) {
        CVec a(dim);
        for (auto& z : a) {
            // Box-Muller for complex Gaussian entries.
            const double u1 = std::max(rng.u01(), 1e-300);
            const double u2 = rng.u01();
            const double r = std::sqrt(-2.0 * std::log(u1));
            z = cx{r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
        }
        return normalized(std::move(a));
    }

    std::size_t dim() const { return amp_.size(); }
    const CVec& amplitudes() const { return amp_; }
    const cx& operator[](std::size_t i) const { return amp_[i]; }

    cx inner_with(const PureState& o) const { return inner(amp_, o.amp_); }
    double overlap2(const PureState& o) const { return std::norm(inner_with(o)); }

    // Equality up to a global phase: | |<a|b>| - 1 | <= tol.
    bool equal_up_to_phase(const PureState& o, double tol = kPhaseEqTol) const {
        if (dim() != o.dim()) return false;
        return std::abs(std::abs(inner_with(o)) - 1.0) <= tol;
    }

private:
    CVec amp_;
};

// One of the 2^n products of psi/phi copies: bit 0 selects psi, bit 1 phi.
struct ProductStateIndex {
    std::vector<int> bits;  // bits[0] is the first (leftmost) factor

    std::size_t n() const { return bits.size(); }

    // 1-based index in lexicographic bit order: k=1 is all-psi.
    std::size_t k() const {
        std::size_t v = 0;
        for (int b : bits) v = (v << 1) | static_cast<std::size_t>(b);
        return v + 1;
    }

    std::size_t zero_bits() const {
        std::size_t r = 0;
        for (int b : bits) r += (b == 0);
        return r;
    }

    static ProductStateIndex from_k(std::size_t k, std::size_t n) {
        ProductStateIndex idx;
        idx.bits.resize(n);
        std::size_t v = k - 1;
        for (std::size_t j = 0; j < n; ++j)
            idx.bits[n - 1 - j] = static_cast<int>((v >> j) & 1);
        return idx;
    }
};

// Complete set of positive effects on a d-dimensional space.
struct Measurement {
    std::size_t dim = 0;
    std::vector<CMat> effects;
    std::vector<std::string> labels;

    static std::vector<std::string> default_labels(std::size_t k) {
        std::vector<std::string> out(k);
        for (std::size_t i = 0; i < k; ++i) out[i] = std::to_string(i + 1);
        return out;
    }

    // Rank-1 projector measurement from an orthonormal basis.
    static Measurement from_basis(const std::vector<CVec>& basis,
                                  std::vector<std::string> labels = {}) {
        Measurement m;
        m.dim = basis.empty() ? 0 : basis.front().size();
        for (const auto& v : basis) m.effects.push_back(CMat::outer(v));
        m.labels = labels.empty() ? default_labels(basis.size()) : std::move(labels);
        return m;
    }

    // Effects built by summing basis projectors per outcome group.
    static Measurement from_grouped_basis(const std::vector<CVec>& basis,
                                          const std::vector<std::size_t>& group,
                                          std::size_t outcomes) {
        Measurement m;
        m.dim = basis.empty() ? 0 : basis.front().size();
        m.effects.assign(outcomes, CMat(m.dim));
        for (std::size_t i = 0; i < basis.size(); ++i)
            m.effects[group[i]] += CMat::outer(basis[i]);
        m.labels = default_labels(outcomes);
        return m;
    }

    std::size_t outcome_count() const { return effects.size(); }

    std::size_t label_index(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return i;
        throw validation_error("unknown_label", "no outcome labeled '" + label + "'");
    }

    // Effects sum to identity and each effect is positive semidefinite.
    void validate(double sum_tol = kEffectSumTol, double eig_tol = kEffectEigTol) const {
        if (effects.empty())
            throw validation_error("measurement_empty", "measurement has no effects");
        CMat sum(dim);
        for (const auto& e : effects) {
            if (e.n != dim)
                throw dimension_mismatch("effect dimension differs from measurement dimension");
            sum += e;
        }
        const double dev = sum.max_abs_diff(CMat::identity(dim));
        if (dev > sum_tol)
            throw validation_error("effects_not_complete",
                                   "effects deviate from identity by " + format17(dev));
        for (const auto& e : effects) {
            const auto eig = hermitian_eigen(e);
            if (!eig.values.empty() && eig.values.front() < -eig_tol)
                throw validation_error("effect_not_positive",
                                       "effect has eigenvalue " + format17(eig.values.front()));
        }
    }
};

// Probabilities keyed by outcome label, aligned with the measurement order.
struct OutcomeDistribution {
    std::vector<std::string> labels;
    std::vector<double> probabilities;

    double at(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return probabilities[i];
        throw validation_error("unknown_label", "no outcome labeled '" + label + "'");
    }

    double sum() const {
        double s = 0.0;
        for (double p : probabilities) s += p;
        return s;
    }
};

inline PureState tensor_product(const std::vector<PureState>& states,
                                std::size_t dim_cap = kDefaultDimCap) {
    if (states.empty())
        throw validation_error("empty_product", "tensor product of an empty list");
    std::size_t dim = 1;
    for (const auto& s : states) {
        dim *= s.dim();
        if (dim > dim_cap)
            throw dimension_overflow("tensor product dimension exceeds cap " +
                                     std::to_string(dim_cap));
    }
    CVec acc = states.front().amplitudes();
    for (std::size_t i = 1; i < states.size(); ++i)
        acc = kron(acc, states[i].amplitudes());
    return PureState::normalized(std::move(acc));
}

// All 2^n products of psi/phi in lexicographic bit order; k=1 is psi^n,
// k=2^n is phi^n.
inline std::vector<std::pair<ProductStateIndex, PureState>>
enumerate_product_states(const PureState& psi, const PureState& phi, std::size_t n,
                         std::size_t dim_cap = kDefaultDimCap) {
    if (psi.dim() != phi.dim())
        throw dimension_mismatch("psi and phi have different dimensions");
    if (n < 2)
        throw validation_error("bad_copy_count", "need n > 1 copies");
    std::size_t dim = 1;
    for (std::size_t j = 0; j < n; ++j) {
        dim *= psi.dim();
        if (dim > dim_cap)
            throw dimension_overflow("product dimension exceeds cap " +
                                     std::to_string(dim_cap));
    }
    const std::size_t count = std::size_t{1} << n;
    std::vector<std::pair<ProductStateIndex, PureState>> out;
    out.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) {
        auto idx = ProductStateIndex::from_k(k, n);
        std::vector<PureState> factors;
        factors.reserve(n);
        for (int b : idx.bits) factors.push_back(b == 0 ? psi : phi);
        out.emplace_back(std::move(idx), tensor_product(factors, dim_cap));
    }
    return out;
}

inline double born_probability(const PureState& state, const Measurement& meas,
                               std::size_t outcome_index) {
    if (state.dim() != meas.dim)
        throw dimension_mismatch("state dimension differs from measurement dimension");
    return clamp01(meas.effects.at(outcome_index).quad_form(state.amplitudes()));
}

inline double born_probability(const PureState& state, const Measurement& meas,
                               const std::string& label) {
    return born_probability(state, meas, meas.label_index(label));
}

inline OutcomeDistribution born_distribution(const PureState& state,
                                             const Measurement& meas) {
    OutcomeDistribution d;
    d.labels = meas.labels;
    d.probabilities.resize(meas.outcome_count());
    for (std::size_t m = 0; m < meas.outcome_count(); ++m)
        d.probabilities[m] = born_probability(state, meas, m);
    return d;
}

// Minimum error probability for discriminating two equiprobable pure states:
// (1/2)[1 - sqrt(1 - |<psi|phi>|^2)].
inline double helstrom_error_bound(const PureState& psi, const PureState& phi) {
    if (psi.dim() != phi.dim())
        throw dimension_mismatch("psi and phi have different dimensions");
    const double o = psi.overlap2(phi);
    return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - o)));
}

// A qubit pair with the requested squared overlap: psi = |0>,
// phi = sqrt(o)|0> + sqrt(1-o)|1>.
inline std::pair<PureState, PureState> qubit_pair_with_overlap2(double overlap2) {
    if (overlap2 < 0.0 || overlap2 > 1.0)
        throw validation_error("bad_overlap", "overlap squared must lie in [0,1]");
    PureState psi = PureState::basis(2, 0);
    PureState phi(CVec{cx{std::sqrt(overlap2), 0.0}, cx{std::sqrt(1.0 - overlap2), 0.0}});
    return {psi, phi};
}

} // namespace ontic
