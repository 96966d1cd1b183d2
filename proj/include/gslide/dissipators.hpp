// dissipators.hpp — non-secular Bloch-Redfield tensors for the optical and
// vibrational baths plus directional (Heaviside-selected) heat-engine blocks.
//
// A process is a single nonzero matrix element of an interaction operator in
// the system eigenbasis: a rank-1 jump |to><from| with frequency
// omega = E_from - E_to (positive for decay) and a scalar or 3-vector weight.
// Dissipators are assembled as sums over ordered process pairs (n, m) of
//   w_n w_m * Gamma(omega_m) * ( A_m rho A_n^+ + A_n rho A_m^+
//                                - rho A_m^+ A_n - A_n^+ A_m rho )
// with Gamma(omega) = gamma(omega) / 2 (imaginary parts neglected).
//
// Superoperators act on column-stacked density operators in the eigenbasis.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <string>
#include <vector>

#include "gslide/environment.hpp"
#include "gslide/hamiltonian.hpp"

namespace gslide {

using Complex = std::complex<double>;
using Superop = Eigen::SparseMatrix<Complex>;
using Triplets = std::vector<Eigen::Triplet<Complex>>;

struct Process {
    int to = 0;
    int from = 0;
    double omega = 0.0;   // eV, E_from - E_to
    double weight = 1.0;  // matrix element (scalar interactions)
};

struct VectorProcess {
    int to = 0;
    int from = 0;
    double omega = 0.0;
    Eigen::Vector3d weight;  // vector matrix element (optical dipoles)
};

struct DissipatorBlock {
    Superop superop;
    std::string label;
};

namespace detail {

// c * [A_m rho A_n^+ + A_n rho A_m^+ - rho A_m^+ A_n - A_n^+ A_m rho]
// for unit-amplitude rank-1 A = |to><from|; weights are folded into c.
inline void add_pair_term(Triplets& trip, int d, int n_to, int n_from, int m_to, int m_from,
                          double c) {
    trip.emplace_back(m_to + n_to * d, m_from + n_from * d, c);
    trip.emplace_back(n_to + m_to * d, n_from + m_from * d, c);
    if (n_to == m_to) {
        for (int i = 0; i < d; ++i) trip.emplace_back(i + n_from * d, i + m_from * d, -c);
        for (int j = 0; j < d; ++j) trip.emplace_back(n_from + j * d, m_from + j * d, -c);
    }
}

inline Superop compress(Triplets& trip, int d) {
    Superop s(d * d, d * d);
    s.setFromTriplets(trip.begin(), trip.end());
    Triplets().swap(trip);
    return s;
}

}  // namespace detail

// Extracts the process list of a scalar interaction operator already
// expressed in the eigenbasis. Diagonal elements become omega = 0 processes.
inline std::vector<Process> process_list(const Eigen::MatrixXd& op_eigenbasis,
                                         const Eigen::VectorXd& energies,
                                         bool include_diagonal = true, double floor = 1e-12) {
    const int d = static_cast<int>(energies.size());
    std::vector<Process> out;
    for (int to = 0; to < d; ++to) {
        for (int from = 0; from < d; ++from) {
            if (to == from && !include_diagonal) continue;
            const double w = op_eigenbasis(to, from);
            if (std::abs(w) < floor) continue;
            const double omega = to == from ? 0.0 : energies(from) - energies(to);
            out.push_back({to, from, omega, w});
        }
    }
    return out;
}

// Full non-secular optical Bloch-Redfield tensor. Pair weights are the dot
// products of the 3-vector transition dipoles (the delta_ij Cartesian rule);
// rates carry the band-gap suppression per frequency.
inline DissipatorBlock optical_tensor(const Eigenbasis& basis, const RingSpec& spec,
                                      const OpticalBath& bath) {
    const int d = basis.dim;
    const auto dops = dipole_operator_eigenbasis(basis, spec);

    std::vector<VectorProcess> procs;
    double max_norm = 0.0;
    for (int to = 0; to < d; ++to) {
        for (int from = 0; from < d; ++from) {
            if (to == from) continue;
            const Eigen::Vector3d w(dops[0](to, from), dops[1](to, from), dops[2](to, from));
            const double nrm = w.norm();
            if (nrm == 0.0) continue;
            max_norm = std::max(max_norm, nrm);
            procs.push_back({to, from, basis.energies(from) - basis.energies(to), w});
        }
    }
    const double floor = 1e-12 * max_norm;
    std::erase_if(procs, [floor](const VectorProcess& p) { return p.weight.norm() < floor; });

    Triplets trip;
    trip.reserve(2 * procs.size() * procs.size());
    std::vector<double> half_rate(procs.size());
    for (std::size_t m = 0; m < procs.size(); ++m)
        half_rate[m] = 0.5 * optical_rate(procs[m].omega, bath);
    for (std::size_t n = 0; n < procs.size(); ++n) {
        for (std::size_t m = 0; m < procs.size(); ++m) {
            const double c = procs[n].weight.dot(procs[m].weight) * half_rate[m];
            if (c == 0.0) continue;
            detail::add_pair_term(trip, d, procs[n].to, procs[n].from, procs[m].to, procs[m].from,
                                  c);
        }
    }
    return {detail::compress(trip, d), "optical"};
}

// Per-site vibrational tensor from sigma_i^z: intra-manifold relaxation plus
// the omega = 0 (pure dephasing) processes at the analytic Ohmic limit rate.
inline DissipatorBlock vibrational_tensor_site(const Eigenbasis& basis, int site,
                                               const PhononBath& bath) {
    const int d = basis.dim;
    const int mask = 1 << site;
    // sigma_i^z in the eigenbasis: U^T Z U with Z diagonal +-1
    Eigen::MatrixXd zu = basis.transform;
    for (int s = 0; s < d; ++s)
        if (!(s & mask)) zu.row(s) *= -1.0;
    const Eigen::MatrixXd z_eig = basis.transform.transpose() * zu;

    const auto procs = process_list(z_eig, basis.energies);
    std::vector<double> half_rate(procs.size());
    for (std::size_t m = 0; m < procs.size(); ++m)
        half_rate[m] = 0.5 * (procs[m].omega == 0.0 ? phonon_rate_zero_frequency(bath)
                                                    : phonon_rate(procs[m].omega, bath));
    Triplets trip;
    for (std::size_t n = 0; n < procs.size(); ++n) {
        for (std::size_t m = 0; m < procs.size(); ++m) {
            const double c = procs[n].weight * procs[m].weight * half_rate[m];
            if (c == 0.0) continue;
            detail::add_pair_term(trip, d, procs[n].to, procs[n].from, procs[m].to, procs[m].from,
                                  c);
        }
    }
    return {detail::compress(trip, d), "vibrational(site " + std::to_string(site) + ")"};
}

inline std::vector<DissipatorBlock> vibrational_tensor(const Eigenbasis& basis,
                                                       const RingSpec& spec,
                                                       const PhononBath& bath) {
    std::vector<DissipatorBlock> out;
    out.reserve(spec.n_sites);
    for (int i = 0; i < spec.n_sites; ++i)
        out.push_back(vibrational_tensor_site(basis, i, bath));
    return out;
}

// Directional Bloch-Redfield dissipator: only pairs of processes running in
// the same direction are retained (partial secular approximation);
// sigma = +1 keeps decay, sigma = -1 keeps excitation. Theta(0) = 1.
inline DissipatorBlock directional_dissipator(const std::vector<Process>& procs, double gamma,
                                              int sigma, int dim, const std::string& label) {
    bool any = false;
    Triplets trip;
    auto kept = [sigma](double omega) { return sigma > 0 ? omega >= 0.0 : omega <= 0.0; };
    for (const auto& n : procs) {
        if (!kept(n.omega)) continue;
        for (const auto& m : procs) {
            if (!kept(m.omega)) continue;
            any = true;
            const double c = 0.5 * gamma * n.weight * m.weight;
            if (c == 0.0) continue;
            detail::add_pair_term(trip, dim, n.to, n.from, m.to, m.from, c);
        }
    }
    if (!any) throw std::invalid_argument("directional_dissipator: no transition content");
    return {detail::compress(trip, dim), label};
}

// Convenience overload: interaction matrix given in the eigenbasis.
inline DissipatorBlock directional_dissipator(const Eigen::MatrixXd& m_eigenbasis, double gamma,
                                              int sigma, const Eigenbasis& basis,
                                              const std::string& label) {
    const auto procs = process_list(m_eigenbasis, basis.energies, /*include_diagonal=*/false);
    return directional_dissipator(procs, gamma, sigma, basis.dim, label);
}

// Plain Lindblad dissipator gamma (L rho L^+ - 1/2 {L^+L, rho}) for a sparse
// jump operator expressed in the eigenbasis.
inline DissipatorBlock lindblad_block(const Eigen::SparseMatrix<double>& jump, double gamma,
                                      int dim, const std::string& label) {
    Triplets trip;
    using It = Eigen::SparseMatrix<double>::InnerIterator;
    for (int ka = 0; ka < jump.outerSize(); ++ka) {
        for (It a(jump, ka); a; ++a) {
            for (int kb = 0; kb < jump.outerSize(); ++kb) {
                for (It b(jump, kb); b; ++b) {
                    trip.emplace_back(static_cast<int>(a.row()) + static_cast<int>(b.row()) * dim,
                                      static_cast<int>(a.col()) + static_cast<int>(b.col()) * dim,
                                      gamma * a.value() * b.value());
                }
            }
        }
    }
    const Eigen::SparseMatrix<double> ll = (jump.transpose() * jump).pruned();
    for (int k = 0; k < ll.outerSize(); ++k) {
        for (It c(ll, k); c; ++c) {
            const int i = static_cast<int>(c.row());
            const int a = static_cast<int>(c.col());
            for (int j = 0; j < dim; ++j) {
                trip.emplace_back(i + j * dim, a + j * dim, -0.5 * gamma * c.value());
                trip.emplace_back(j + a * dim, j + i * dim, -0.5 * gamma * c.value());
            }
        }
    }
    return {detail::compress(trip, dim), label};
}

}  // namespace gslide
