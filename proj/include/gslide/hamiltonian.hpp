// hamiltonian.hpp — ring (and ring+trap) Hamiltonians, manifold-resolved
// diagonalization, ladder-state identification and transition tables.
//
// Site-basis convention: basis index s has bit i set when site i is excited;
// the trap, when present, occupies the highest bit. sigma_z |e> = +|e>, so
// H carries (omega_a / 2) sigma_z per site and adjacent excitation manifolds
// are split by omega_a.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gslide/geometry.hpp"

namespace gslide {

inline constexpr int default_dimension_cap = 1 << 11;

enum class LadderConvention { guide_slide, parallel };

struct Eigenbasis {
    Eigen::VectorXd energies;      // eV, ascending globally
    Eigen::MatrixXd transform;     // column a = eigenvector a in the site basis
    std::vector<int> manifold;     // excitation number per eigenstate
    std::vector<bool> ladder_flag; // exactly one per manifold once identified
    std::vector<int> ladder;       // per manifold: eigenstate index of the ladder state
    int dim = 0;
    int max_manifold = 0;
};

// Dipole vector of a site in units of the reference dipole moment
// |d(tau_l_ref, omega_a_ref)|; identical sites give unit vectors.
inline Eigen::Vector3d relative_dipole(int site, const RingSpec& spec) {
    const double scale = dipole_moment(spec.tau_l[site], spec.omega_a[site]) /
                         dipole_moment(spec.tau_l_ref, spec.omega_a_ref);
    return scale * dipole_orientation(site, spec);
}

// H = sum_i (omega_a_i / 2) sigma_i^z + sum_{i<k} J_ik (s_i^+ s_k^- + s_i^- s_k^+)
inline Eigen::MatrixXd build_hamiltonian(const RingSpec& spec, const CouplingMatrix& j,
                                         int dimension_cap = default_dimension_cap) {
    const int n = spec.n_sites;
    const int dim = 1 << n;
    if (dim > dimension_cap) throw std::runtime_error("build_hamiltonian: dimension cap exceeded");
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (int i = 0; i < n; ++i) diag += 0.5 * spec.omega_a[i] * ((s >> i & 1) ? 1.0 : -1.0);
        h(s, s) = diag;
        for (int i = 0; i < n; ++i) {
            if (!(s >> i & 1)) continue;
            for (int k = 0; k < n; ++k) {
                if (k == i || (s >> k & 1)) continue;
                const int t = s ^ (1 << i) ^ (1 << k);  // hop excitation i -> k
                h(t, s) += j(i, k);
            }
        }
    }
    return h;
}

// Ring plus trap two-level system on the highest bit. The coherent-extraction
// coupling c_x sum_i (s_i^+ s_t^- + h.c.) is added only when requested.
inline Eigen::MatrixXd build_full_hamiltonian(const RingSpec& spec, const CouplingMatrix& j,
                                              double omega_t, double c_x,
                                              int dimension_cap = default_dimension_cap) {
    const int n = spec.n_sites;
    const int ring_dim = 1 << n;
    const int dim = ring_dim << 1;
    if (dim > dimension_cap)
        throw std::runtime_error("build_full_hamiltonian: dimension cap exceeded");
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    const Eigen::MatrixXd hr = build_hamiltonian(spec, j, dimension_cap);
    h.topLeftCorner(ring_dim, ring_dim) = hr;
    h.bottomRightCorner(ring_dim, ring_dim) = hr;
    for (int s = 0; s < ring_dim; ++s) {
        h(s, s) -= 0.5 * omega_t;
        h(s + ring_dim, s + ring_dim) += 0.5 * omega_t;
    }
    if (c_x != 0.0) {
        for (int s = 0; s < ring_dim; ++s) {
            for (int i = 0; i < n; ++i) {
                if (s >> i & 1) continue;
                // |..1_i..> |trap g> <..0_i..| <trap e|
                const int from = s + ring_dim;
                const int to = s ^ (1 << i);
                h(to, from) += c_x;
                h(from, to) += c_x;
            }
        }
    }
    return h;
}

// Diagonalizes sector by sector: [H, total excitation] = 0, so grouping basis
// states by popcount yields exact manifold labels even across degeneracies.
inline Eigenbasis diagonalize(const Eigen::MatrixXd& h) {
    const int dim = static_cast<int>(h.rows());
    if (h.cols() != dim) throw std::invalid_argument("diagonalize: square matrix required");
    if (!h.isApprox(h.transpose(), 1e-12))
        throw std::invalid_argument("diagonalize: non-Hermitian input");

    int bits = 0;
    while ((1 << bits) < dim) ++bits;
    if ((1 << bits) != dim) throw std::invalid_argument("diagonalize: dimension not a power of 2");

    std::vector<std::vector<int>> sectors(bits + 1);
    for (int s = 0; s < dim; ++s) sectors[std::popcount(static_cast<unsigned>(s))].push_back(s);

    struct State {
        double energy;
        int manifold;
        Eigen::VectorXd vec;
    };
    std::vector<State> states;
    states.reserve(dim);
    for (int m = 0; m <= bits; ++m) {
        const auto& idx = sectors[m];
        const int sz = static_cast<int>(idx.size());
        if (sz == 0) continue;
        Eigen::MatrixXd block(sz, sz);
        for (int a = 0; a < sz; ++a)
            for (int b = 0; b < sz; ++b) block(a, b) = h(idx[a], idx[b]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
        if (solver.info() != Eigen::Success) throw std::runtime_error("diagonalize: solver failed");
        for (int a = 0; a < sz; ++a) {
            Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
            for (int b = 0; b < sz; ++b) full(idx[b]) = solver.eigenvectors()(b, a);
            states.push_back({solver.eigenvalues()(a), m, std::move(full)});
        }
    }
    std::stable_sort(states.begin(), states.end(),
                     [](const State& a, const State& b) { return a.energy < b.energy; });

    Eigenbasis basis;
    basis.dim = dim;
    basis.max_manifold = bits;
    basis.energies.resize(dim);
    basis.transform.resize(dim, dim);
    basis.manifold.resize(dim);
    basis.ladder_flag.assign(dim, false);
    for (int a = 0; a < dim; ++a) {
        basis.energies(a) = states[a].energy;
        basis.transform.col(a) = states[a].vec;
        basis.manifold[a] = states[a].manifold;
    }
    return basis;
}

// Guide-slide rings relax to the lowest state of each manifold, parallel
// rings place the collective ladder at the top. Ties break to the first index.
inline void identify_ladder(Eigenbasis& basis, LadderConvention convention) {
    const int nm = basis.max_manifold + 1;
    basis.ladder.assign(nm, -1);
    basis.ladder_flag.assign(basis.dim, false);
    std::vector<double> best(nm, 0.0);
    for (int a = 0; a < basis.dim; ++a) {
        const int m = basis.manifold[a];
        const double e = basis.energies(a);
        if (basis.ladder[m] < 0) {
            basis.ladder[m] = a;
            best[m] = e;
            continue;
        }
        const bool better = convention == LadderConvention::guide_slide ? e < best[m] - 1e-12
                                                                        : e > best[m] + 1e-12;
        if (better) {
            basis.ladder[m] = a;
            best[m] = e;
        }
    }
    for (int m = 0; m < nm; ++m)
        if (basis.ladder[m] >= 0) basis.ladder_flag[basis.ladder[m]] = true;
}

struct TargetTransition {
    int btts = -1;
    int ttts = -1;
    int btts_rung = 0;
    double omega_good = 0.0;
    std::optional<double> omega_bad;  // absent when the BTTS is the ground state
};

// BTTS sits at rung floor((N-1)/2) of the ladder; the TTTS one rung above.
inline TargetTransition target_transition(const Eigenbasis& basis) {
    if (basis.ladder.empty()) throw std::logic_error("target_transition: ladder not identified");
    const int n = basis.max_manifold;
    TargetTransition t;
    t.btts_rung = (n - 1) / 2;
    t.btts = basis.ladder[t.btts_rung];
    t.ttts = basis.ladder[t.btts_rung + 1];
    t.omega_good = basis.energies(t.ttts) - basis.energies(t.btts);
    if (t.btts_rung >= 1) {
        const int below = basis.ladder[t.btts_rung - 1];
        t.omega_bad = basis.energies(t.btts) - basis.energies(below);
    }
    return t;
}

struct TransitionEntry {
    int upper = 0;   // higher-energy eigenstate
    int lower = 0;   // lower-energy eigenstate, adjacent manifold
    double omega = 0.0;        // eV, emission convention (> 0)
    Eigen::Vector3d dvec;      // transition dipole in reference-dipole units
    double strength = 0.0;     // |dvec|^2 omega^3
};

struct TransitionTable {
    std::vector<TransitionEntry> entries;
};

// Transition-dipole matrices: component c of sum_i d_i sigma_i^x in the
// eigenbasis. Works for ring-only and ring+trap bases (trap carries no dipole).
inline std::array<Eigen::MatrixXd, 3> dipole_operator_eigenbasis(const Eigenbasis& basis,
                                                                 const RingSpec& spec) {
    const int dim = basis.dim;
    std::array<Eigen::MatrixXd, 3> out;
    std::array<Eigen::MatrixXd, 3> acc;
    for (auto& m : acc) m = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < spec.n_sites; ++i) {
        const Eigen::Vector3d d = relative_dipole(i, spec);
        const int mask = 1 << i;
        for (int s = 0; s < dim; ++s) {
            // (sigma_i^x U) row s = U row s^mask
            for (int c = 0; c < 3; ++c) acc[c].row(s) += d(c) * basis.transform.row(s ^ mask);
        }
    }
    for (int c = 0; c < 3; ++c) out[c] = basis.transform.transpose() * acc[c];
    return out;
}

inline TransitionTable transition_table(const Eigenbasis& basis, const RingSpec& spec) {
    const auto dops = dipole_operator_eigenbasis(basis, spec);
    TransitionTable table;
    double max_norm = 0.0;
    for (int b = 0; b < basis.dim; ++b) {
        for (int a = b + 1; a < basis.dim; ++a) {
            if (std::abs(basis.manifold[a] - basis.manifold[b]) != 1) continue;
            const Eigen::Vector3d dvec(dops[0](b, a), dops[1](b, a), dops[2](b, a));
            const double norm = dvec.norm();
            if (norm == 0.0) continue;
            max_norm = std::max(max_norm, norm);
            // order by energy, not by index, so unsorted bases work too
            const bool a_upper = basis.energies(a) >= basis.energies(b);
            const double omega = std::abs(basis.energies(a) - basis.energies(b));
            TransitionEntry e;
            e.upper = a_upper ? a : b;
            e.lower = a_upper ? b : a;
            e.omega = omega;
            e.dvec = dvec;
            e.strength = norm * norm * omega * omega * omega;
            table.entries.push_back(e);
        }
    }
    const double floor = 1e-14 * max_norm;
    std::erase_if(table.entries, [floor](const TransitionEntry& e) { return e.dvec.norm() < floor; });
    return table;
}

// Total oscillator strength of transitions leaving the BTTS upward.
inline double target_strength(const TargetTransition& target, const TransitionTable& table) {
    double sum = 0.0;
    for (const auto& e : table.entries)
        if (e.lower == target.btts) sum += e.strength;
    return sum;
}

// Mean frequency of intra-manifold transitions; feeds kappa_vib calibration.
inline double mean_intra_manifold_frequency(const Eigenbasis& basis) {
    double sum = 0.0;
    long count = 0;
    for (int b = 0; b < basis.dim; ++b) {
        for (int a = b + 1; a < basis.dim; ++a) {
            if (basis.manifold[a] != basis.manifold[b]) continue;
            const double w = basis.energies(a) - basis.energies(b);
            if (w > 1e-14) {
                sum += w;
                ++count;
            }
        }
    }
    if (count == 0)
        throw std::runtime_error("mean_intra_manifold_frequency: no intra-manifold transitions");
    return sum / static_cast<double>(count);
}

}  // namespace gslide
