// antidistinguish.hpp
// Measurements where outcome k has zero Born probability on the k-th
// psi/phi product state: an explicit four-outcome construction for qubit
// pairs at squared overlap 1/2, and a seeded numerical search over
// orthonormal bases for the general case.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ontic/common.hpp"
#include "ontic/linalg.hpp"
#include "ontic/quantum.hpp"
#include "ontic/rng.hpp"

namespace ontic {

enum class AntidistinguishMethod { explicit_half_overlap, numerical_search };

inline const char* to_string(AntidistinguishMethod m) {
    return m == AntidistinguishMethod::explicit_half_overlap ? "explicit_half_overlap"
                                                             : "numerical_search";
}

struct AntidistinguishingResult {
    std::size_t n = 0;
    Measurement measurement;
    double residual = 0.0;  // max over k of <Psi_k|M_k|Psi_k>
    AntidistinguishMethod method = AntidistinguishMethod::numerical_search;
    bool achieved = true;
    std::vector<double> residual_history;  // one entry per search sweep
};

struct SearchOptions {
    int restarts = 32;
    int iterations = 2000;      // individual two-level rotation updates
    std::uint64_t seed = 1;
    double target_residual = 1e-8;
    bool stop_at_target = true; // stop launching restarts once the target is met
};

struct AntidistinguishReport {
    std::vector<double> residuals;  // <Psi_k|M_k|Psi_k> per k
    double max_residual = 0.0;
    double completeness_deviation = 0.0;
    bool pass = false;
};

// Recomputes per-outcome residuals and effect completeness for a candidate
// measurement against the matched product states.
inline AntidistinguishReport verify_antidistinguishing(
    const Measurement& meas, const std::vector<PureState>& states, double tol) {
    if (states.size() != meas.outcome_count())
        throw dimension_mismatch("state count differs from outcome count");
    AntidistinguishReport rep;
    rep.residuals.resize(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].dim() != meas.dim)
            throw dimension_mismatch("product state dimension differs from measurement");
        rep.residuals[k] = born_probability(states[k], meas, k);
        rep.max_residual = std::max(rep.max_residual, rep.residuals[k]);
    }
    CMat sum(meas.dim);
    for (const auto& e : meas.effects) sum += e;
    rep.completeness_deviation = sum.max_abs_diff(CMat::identity(meas.dim));
    rep.pass = rep.max_residual <= tol && rep.completeness_deviation <= kEffectSumTol;
    return rep;
}

namespace detail {

// 2x2 unitary that sends psi to |0> and phi to a phase times |+>.
inline CMat half_overlap_frame(const PureState& psi, const PureState& phi) {
    const CVec& p = psi.amplitudes();
    CVec perp{-std::conj(p[1]), std::conj(p[0])};
    const cx a = psi.inner_with(phi);
    const cx b = inner(perp, phi.amplitudes());
    // Rotate perp's phase so <perp'|phi> aligns with <psi|phi>.
    const cx align = (std::abs(b) < 1e-15) ? cx{1.0, 0.0}
                                           : (a / std::abs(a)) * (std::abs(b) / b);
    CMat v(2);
    v.at(0, 0) = std::conj(p[0]);
    v.at(0, 1) = std::conj(p[1]);
    v.at(1, 0) = align * std::conj(perp[0]);
    v.at(1, 1) = align * std::conj(perp[1]);
    return v;
}

} // namespace detail

// Four-outcome orthonormal-basis measurement for qubit pairs with squared
// overlap 1/2. In the frame psi = |0>, phi = |+> the basis is the Bell-like
//   (|01>+|10>)/sqrt2, (|0->+|1+>)/sqrt2, (|+1>+|-0>)/sqrt2, (|+->+|-+>)/sqrt2,
// which annihilates psi*psi, psi*phi, phi*psi, phi*phi in outcome order.
inline AntidistinguishingResult build_half_overlap_measurement(const PureState& psi,
                                                               const PureState& phi) {
    if (psi.dim() != 2 || phi.dim() != 2)
        throw dimension_mismatch("half-overlap construction needs qubit states");
    const double o = psi.overlap2(phi);
    if (std::abs(o - 0.5) > 1e-9)
        throw validation_error("overlap_mismatch",
                               "squared overlap is " + format17(o) +
                                   ", construction needs 1/2 within 1e-9");

    const CMat v = detail::half_overlap_frame(psi, phi);
    // Columns of V^dagger: images of |0>, |1> back in the original frame.
    const CVec u0{std::conj(v.at(0, 0)), std::conj(v.at(0, 1))};
    const CVec u1{std::conj(v.at(1, 0)), std::conj(v.at(1, 1))};
    const double s = 1.0 / std::sqrt(2.0);
    CVec up(2), um(2);
    for (int i = 0; i < 2; ++i) {
        up[i] = s * (u0[i] + u1[i]);
        um[i] = s * (u0[i] - u1[i]);
    }

    auto pair_sum = [&](const CVec& a1, const CVec& b1, const CVec& a2, const CVec& b2) {
        CVec t1 = kron(a1, b1), t2 = kron(a2, b2);
        for (std::size_t i = 0; i < t1.size(); ++i) t1[i] = s * (t1[i] + t2[i]);
        return t1;
    };
    std::vector<CVec> basis{
        pair_sum(u0, u1, u1, u0),
        pair_sum(u0, um, u1, up),
        pair_sum(up, u1, um, u0),
        pair_sum(up, um, um, up),
    };
    orthonormalize(basis);

    AntidistinguishingResult res;
    res.n = 2;
    res.method = AntidistinguishMethod::explicit_half_overlap;
    res.measurement = Measurement::from_basis(basis);
    auto products = enumerate_product_states(psi, phi, 2);
    for (std::size_t k = 0; k < products.size(); ++k)
        res.residual = std::max(res.residual,
                                born_probability(products[k].second, res.measurement, k));
    res.achieved = true;
    return res;
}

namespace detail {

// One restart of the penalty search: exact coordinate descent over two-level
// rotations of an orthonormal basis. T[k][i] caches <Psi_k|b_i>; each pair
// update is the closed-form minimizer of the pair's penalty contribution
// (smallest eigenvector of a 2x2 Hermitian difference).
struct BasisSearch {
    std::size_t dim;
    std::size_t outcomes;
    std::vector<CVec> basis;
    std::vector<std::size_t> group;          // basis vector -> outcome
    std::vector<CVec> t;                     // t[k][i] = <Psi_k|b_i>
    const std::vector<PureState>* targets;

    void init(const std::vector<PureState>& psis, Xoshiro256& rng) {
        targets = &psis;
        dim = psis.front().dim();
        outcomes = psis.size();
        basis.assign(dim, CVec(dim));
        for (auto& v : basis)
            for (auto& z : v) {
                const double u1 = std::max(rng.u01(), 1e-300);
                const double u2 = rng.u01();
                const double r = std::sqrt(-2.0 * std::log(u1));
                z = cx{r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
            }
        orthonormalize(basis);
        group.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) group[i] = i % outcomes;
        t.assign(outcomes, CVec(dim));
        for (std::size_t k = 0; k < outcomes; ++k)
            for (std::size_t i = 0; i < dim; ++i)
                t[k][i] = inner(psis[k].amplitudes(), basis[i]);
    }

    double penalty() const {
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) s += std::norm(t[group[i]][i]);
        return s;
    }

    double residual() const {
        std::vector<double> per_k(outcomes, 0.0);
        for (std::size_t i = 0; i < dim; ++i) per_k[group[i]] += std::norm(t[group[i]][i]);
        double r = 0.0;
        for (double v : per_k) r = std::max(r, v);
        return r;
    }

    // Exact minimizer over rotations in span{b_i, b_j}; returns true if the
    // basis changed.
    bool update_pair(std::size_t i, std::size_t j) {
        const std::size_t gi = group[i], gj = group[j];
        if (gi == gj) return false;
        const cx p1 = t[gi][i], p2 = t[gi][j];
        const cx q1 = t[gj][i], q2 = t[gj][j];
        const double h11 = std::norm(p1) - std::norm(q1);
        const double h22 = std::norm(p2) - std::norm(q2);
        const cx h12 = std::conj(p1) * p2 - std::conj(q1) * q2;
        const double half_gap = 0.5 * (h11 - h22);
        const double disc = std::sqrt(half_gap * half_gap + std::norm(h12));
        const double lam = 0.5 * (h11 + h22) - disc;
        cx alpha, beta;
        if (std::abs(h12) < 1e-300) {
            if (h11 <= h22) return false;  // already at the minimizer
            alpha = cx{0.0, 0.0};
            beta = cx{1.0, 0.0};
        } else {
            alpha = h12;
            beta = cx{lam - h11, 0.0};
            const double nn = std::sqrt(std::norm(alpha) + std::norm(beta));
            alpha /= nn;
            beta /= nn;
        }
        if (std::norm(beta) < 1e-32) return false;
        const cx nalpha = std::conj(alpha), nbeta = -std::conj(beta);
        for (std::size_t r = 0; r < basis[i].size(); ++r) {
            const cx bi = basis[i][r], bj = basis[j][r];
            basis[i][r] = alpha * bi + beta * bj;
            basis[j][r] = nbeta * bi + nalpha * bj;
        }
        for (std::size_t k = 0; k < outcomes; ++k) {
            const cx ti = t[k][i], tj = t[k][j];
            t[k][i] = alpha * ti + beta * tj;
            t[k][j] = nbeta * ti + nalpha * tj;
        }
        return true;
    }

    // Runs up to max_iterations pair updates; appends the residual after each
    // sweep to history. Returns the final penalty. A sweep that improves the
    // penalty by less than 1e-15 is a fixed point of the exact updates.
    double run(int max_iterations, std::vector<double>& history) {
        int used = 0;
        double prev = penalty();
        while (used < max_iterations) {
            for (std::size_t i = 0; i < dim && used < max_iterations; ++i)
                for (std::size_t j = i + 1; j < dim && used < max_iterations; ++j) {
                    update_pair(i, j);
                    ++used;
                }
            history.push_back(residual());
            const double cur = penalty();
            if (prev - cur < 1e-15) break;
            prev = cur;
        }
        return penalty();
    }

    void refresh_cache() {
        for (std::size_t k = 0; k < outcomes; ++k)
            for (std::size_t i = 0; i < dim; ++i)
                t[k][i] = inner((*targets)[k].amplitudes(), basis[i]);
    }

    // Newton finisher near a penalty-zero basis. The annihilation constraints
    // <Psi_{g(i)}|B V e_i> = 0 are linear in the unitary update V, so zeroing
    // the first-order term in V = cayley(X) over anti-Hermitian X leaves a
    // second-order error: quadratic convergence inside the basin. The caller
    // keeps whichever of the pre/post bases scores better.
    void polish(int max_rounds) {
        double prev = penalty();
        for (int round = 0; round < max_rounds; ++round) {
            if (prev < 1e-30) return;
            auto saved = basis;
            if (!newton_step()) return;
            refresh_cache();
            const double cur = penalty();
            if (cur >= prev) {  // left the basin, undo
                basis = std::move(saved);
                refresh_cache();
                return;
            }
            prev = cur;
        }
    }

private:
    // Minimum-norm anti-Hermitian X with sum_r t[g(i)][r] X[r,i] = -w_i for
    // every basis vector i, applied through the exactly unitary Cayley map.
    bool newton_step() {
        const std::size_t d = dim;
        const std::size_t unknowns = d * d;  // a_{rs}, b_{rs} (r<s), c_r
        const std::size_t eqs = 2 * d;
        const auto a_idx = [&](std::size_t r, std::size_t s) {
            return 2 * (r * d - r * (r + 1) / 2 + (s - r - 1));
        };
        const std::size_t diag_base = d * (d - 1);

        std::vector<std::vector<double>> J(eqs, std::vector<double>(unknowns, 0.0));
        std::vector<double> rhs(eqs, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            const CVec& m = t[group[i]];
            rhs[2 * i] = -m[i].real();
            rhs[2 * i + 1] = -m[i].imag();
            for (std::size_t r = 0; r < d; ++r) {
                if (r == i) {
                    // X[i,i] = i*c_i contributes i*m_i
                    J[2 * i][diag_base + i] = -m[i].imag();
                    J[2 * i + 1][diag_base + i] = m[i].real();
                } else if (r < i) {
                    // X[r,i] = a + ib
                    J[2 * i][a_idx(r, i)] = m[r].real();
                    J[2 * i + 1][a_idx(r, i)] = m[r].imag();
                    J[2 * i][a_idx(r, i) + 1] = -m[r].imag();
                    J[2 * i + 1][a_idx(r, i) + 1] = m[r].real();
                } else {
                    // X[r,i] = -a + ib for the (i,r) pair
                    J[2 * i][a_idx(i, r)] = -m[r].real();
                    J[2 * i + 1][a_idx(i, r)] = -m[r].imag();
                    J[2 * i][a_idx(i, r) + 1] = -m[r].imag();
                    J[2 * i + 1][a_idx(i, r) + 1] = m[r].real();
                }
            }
        }

        // y = J^T (J J^T + ridge)^{-1} rhs
        std::vector<std::vector<double>> gram(eqs, std::vector<double>(eqs + 1, 0.0));
        double trace = 0.0;
        for (std::size_t i = 0; i < eqs; ++i)
            for (std::size_t j = 0; j < eqs; ++j) {
                double s = 0.0;
                for (std::size_t u = 0; u < unknowns; ++u) s += J[i][u] * J[j][u];
                gram[i][j] = s;
                if (i == j) trace += s;
            }
        const double ridge = std::max(1e-13 * trace / double(eqs), 1e-300);
        for (std::size_t i = 0; i < eqs; ++i) {
            gram[i][i] += ridge;
            gram[i][eqs] = rhs[i];
        }
        // Gaussian elimination with partial pivoting.
        for (std::size_t col = 0; col < eqs; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < eqs; ++r)
                if (std::abs(gram[r][col]) > std::abs(gram[piv][col])) piv = r;
            if (std::abs(gram[piv][col]) < 1e-300) return false;
            std::swap(gram[col], gram[piv]);
            for (std::size_t r = 0; r < eqs; ++r) {
                if (r == col) continue;
                const double f = gram[r][col] / gram[col][col];
                if (f == 0.0) continue;
                for (std::size_t c2 = col; c2 <= eqs; ++c2) gram[r][c2] -= f * gram[col][c2];
            }
        }
        std::vector<double> mult(eqs);
        for (std::size_t i = 0; i < eqs; ++i) mult[i] = gram[i][eqs] / gram[i][i];
        std::vector<double> y(unknowns, 0.0);
        for (std::size_t u = 0; u < unknowns; ++u) {
            double s = 0.0;
            for (std::size_t i = 0; i < eqs; ++i) s += J[i][u] * mult[i];
            y[u] = s;
        }

        CMat x(d);
        for (std::size_t r = 0; r < d; ++r) {
            x.at(r, r) = cx{0.0, y[diag_base + r]};
            for (std::size_t s = r + 1; s < d; ++s) {
                const cx v{y[a_idx(r, s)], y[a_idx(r, s) + 1]};
                x.at(r, s) = v;
                x.at(s, r) = -std::conj(v);
            }
        }
        // V = (I - X/2)^{-1} (I + X/2), exactly unitary for anti-Hermitian X.
        CMat lhs(d), v(d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t s = 0; s < d; ++s) {
                const cx h = 0.5 * x.at(r, s);
                lhs.at(r, s) = (r == s ? cx{1.0, 0.0} : cx{0.0, 0.0}) - h;
                v.at(r, s) = (r == s ? cx{1.0, 0.0} : cx{0.0, 0.0}) + h;
            }
        if (!solve_in_place(lhs, v)) return false;
        std::vector<CVec> next(d, CVec(basis.front().size(), cx{0.0, 0.0}));
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t r = 0; r < d; ++r) axpy(next[j], v.at(r, j), basis[r]);
        basis = std::move(next);
        return true;
    }

    // Solves lhs * out = rhs, overwriting rhs with the solution columns.
    static bool solve_in_place(CMat lhs, CMat& rhs) {
        const std::size_t d = lhs.n;
        for (std::size_t col = 0; col < d; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < d; ++r)
                if (std::abs(lhs.at(r, col)) > std::abs(lhs.at(piv, col))) piv = r;
            if (std::abs(lhs.at(piv, col)) < 1e-300) return false;
            if (piv != col)
                for (std::size_t c2 = 0; c2 < d; ++c2) {
                    std::swap(lhs.at(col, c2), lhs.at(piv, c2));
                    std::swap(rhs.at(col, c2), rhs.at(piv, c2));
                }
            for (std::size_t r = 0; r < d; ++r) {
                if (r == col) continue;
                const cx f = lhs.at(r, col) / lhs.at(col, col);
                if (f == cx{0.0, 0.0}) continue;
                for (std::size_t c2 = col; c2 < d; ++c2) lhs.at(r, c2) -= f * lhs.at(col, c2);
                for (std::size_t c2 = 0; c2 < d; ++c2) rhs.at(r, c2) -= f * rhs.at(col, c2);
            }
        }
        for (std::size_t r = 0; r < d; ++r) {
            const cx f = lhs.at(r, r);
            for (std::size_t c2 = 0; c2 < d; ++c2) rhs.at(r, c2) /= f;
        }
        return true;
    }

public:
};

} // namespace detail

// Minimizes sum_k <Psi_k|M_k|Psi_k> over complete measurements built from
// unitarily rotated orthonormal bases, with seeded multi-restart. Returns the
// best attempt whether or not the target residual is met; the measurement is
// re-orthonormalized so its invariants hold exactly.
inline AntidistinguishingResult search_measurement(const PureState& psi,
                                                   const PureState& phi,
                                                   std::size_t n,
                                                   const SearchOptions& opts = {}) {
    if (psi.equal_up_to_phase(phi))
        throw validation_error("states_equal", "psi and phi coincide up to phase");
    auto products = enumerate_product_states(psi, phi, n);
    std::vector<PureState> targets;
    targets.reserve(products.size());
    for (auto& [idx, st] : products) targets.push_back(st);

    AntidistinguishingResult best;
    best.n = n;
    best.method = AntidistinguishMethod::numerical_search;
    double best_residual = 2.0;
    std::vector<CVec> best_basis;
    std::vector<std::size_t> best_group;

    for (int r = 0; r < opts.restarts; ++r) {
        Xoshiro256 rng = Xoshiro256::stream(opts.seed, static_cast<std::uint64_t>(r));
        detail::BasisSearch search;
        search.init(targets, rng);
        std::vector<double> history;
        search.run(opts.iterations, history);
        const double swept = search.residual();
        const auto swept_basis = search.basis;
        search.polish(40);
        double res = search.residual();
        if (swept < res) {
            search.basis = swept_basis;
            res = swept;
        }
        history.push_back(res);
        best.residual_history.insert(best.residual_history.end(), history.begin(),
                                     history.end());
        if (res < best_residual) {
            best_residual = res;
            best_basis = search.basis;
            best_group = search.group;
        }
        if (opts.stop_at_target && best_residual <= opts.target_residual) break;
    }

    orthonormalize(best_basis);
    best.measurement = (best_basis.size() == targets.size())
                           ? Measurement::from_basis(best_basis)
                           : Measurement::from_grouped_basis(best_basis, best_group,
                                                             targets.size());
    best.residual = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k)
        best.residual =
            std::max(best.residual, born_probability(targets[k], best.measurement, k));
    best.achieved = best.residual <= opts.target_residual;
    return best;
}

// Smallest copy count n in [2, n_max] whose search hits target_residual;
// otherwise the best attempt with achieved = false.
inline AntidistinguishingResult minimal_copies(const PureState& psi, const PureState& phi,
                                               double target_residual = 1e-8,
                                               std::size_t n_max = 5,
                                               SearchOptions opts = {}) {
    if (psi.equal_up_to_phase(phi))
        throw validation_error("states_equal", "psi and phi coincide up to phase");
    opts.target_residual = target_residual;
    AntidistinguishingResult best;
    double best_residual = 2.0;
    for (std::size_t n = 2; n <= n_max; ++n) {
        auto res = search_measurement(psi, phi, n, opts);
        if (res.residual <= target_residual) {
            res.achieved = true;
            return res;
        }
        if (res.residual < best_residual) {
            best_residual = res.residual;
            best = std::move(res);
        }
    }
    best.achieved = false;
    return best;
}

} // namespace ontic
