// geometry.hpp — ring geometry, dipole orientations and dipole-dipole couplings

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gslide/constants.hpp"

namespace gslide {

enum class TrapMode { incoherent, coherent };

struct TrapSpec {
    double omega_t = 0.0;  // eV; set equal to omega_good at build time
    TrapMode mode = TrapMode::incoherent;
    double gamma_x = 1e-2;  // eV, extraction rate (incoherent mode)
    double c_x = 1e-4;      // eV, coupling strength (coherent mode)
};

// Full physical scenario of the ring: geometry, per-site dipole parameters
// and the optional heat-engine trap.
struct RingSpec {
    int n_sites = 0;
    double r_nn = 0.0;               // nearest-neighbour separation, m
    std::vector<double> omega_a;     // per-site 2LS splitting, eV
    std::vector<double> tau_l;       // per-site natural lifetime, s
    std::vector<double> theta_eq;    // per-site equatorial angle, rad
    std::vector<double> theta_zen;   // per-site zenith angle, rad
    std::vector<Eigen::Vector3d> positions;  // m
    std::optional<TrapSpec> trap;

    // nominal (pre-disorder) values; used for rate calibration and for the
    // reference dipole moment that normalises transition-dipole weights
    double omega_a_ref = 0.0;
    double tau_l_ref = 0.0;
};

using CouplingMatrix = Eigen::MatrixXd;  // eV, symmetric, zero diagonal

// |d| = sqrt(3 pi eps0 hbar c^3 / (tau_L w^3)), w = omega_a/hbar in rad/s.
inline double dipole_moment(double tau_l, double omega_a) {
    if (tau_l <= 0.0 || omega_a <= 0.0)
        throw std::invalid_argument("dipole_moment: tau_l and omega_a must be positive");
    namespace k = constants;
    const double w = omega_a / k::hbar_ev_s;
    return std::sqrt(3.0 * M_PI * k::eps0_f_m * k::hbar_j_s * k::c_m_s * k::c_m_s * k::c_m_s /
                     (tau_l * w * w * w));
}

// Regular polygon in the z=0 plane, circumradius r_nn / (2 sin(pi/N)).
// Every site starts with the same dipole angles; disorder is applied later.
inline RingSpec make_ring(int n_sites, double omega_a, double tau_l, double r_nn,
                          double theta_eq, double theta_zen,
                          std::optional<TrapSpec> trap = std::nullopt) {
    if (n_sites < 1) throw std::invalid_argument("make_ring: n_sites must be >= 1");
    if (omega_a <= 0.0 || tau_l <= 0.0 || r_nn <= 0.0)
        throw std::invalid_argument("make_ring: omega_a, tau_l, r_nn must be positive");
    RingSpec s;
    s.n_sites = n_sites;
    s.r_nn = r_nn;
    s.omega_a.assign(n_sites, omega_a);
    s.tau_l.assign(n_sites, tau_l);
    s.theta_eq.assign(n_sites, theta_eq);
    s.theta_zen.assign(n_sites, theta_zen);
    s.omega_a_ref = omega_a;
    s.tau_l_ref = tau_l;
    const double radius = n_sites > 1 ? r_nn / (2.0 * std::sin(M_PI / n_sites)) : 0.0;
    for (int i = 0; i < n_sites; ++i) {
        const double phi = 2.0 * M_PI * i / n_sites;
        s.positions.emplace_back(radius * std::cos(phi), radius * std::sin(phi), 0.0);
    }
    s.trap = trap;
    return s;
}

// Local frame at a site: outward radial, tangential, and the ring normal.
// Built from the in-plane projection of the site position.
inline void local_frame(const RingSpec& spec, int site, Eigen::Vector3d& radial,
                        Eigen::Vector3d& tangential, Eigen::Vector3d& normal) {
    normal = Eigen::Vector3d::UnitZ();
    Eigen::Vector3d in_plane = spec.positions[site];
    in_plane.z() = 0.0;
    if (in_plane.norm() < 1e-300) {
        // single site at the origin: fall back to the x axis
        radial = Eigen::Vector3d::UnitX();
    } else {
        radial = in_plane.normalized();
    }
    tangential = normal.cross(radial);
}

// d_hat = cos(zen) (cos(eq) r_out + sin(eq) t) + sin(zen) z
inline Eigen::Vector3d dipole_orientation(int site, const RingSpec& spec) {
    Eigen::Vector3d r, t, z;
    local_frame(spec, site, r, t, z);
    const double eq = spec.theta_eq[site];
    const double zen = spec.theta_zen[site];
    return std::cos(zen) * (std::cos(eq) * r + std::sin(eq) * t) + std::sin(zen) * z;
}

// Full physical dipole vector at a site, C m.
inline Eigen::Vector3d dipole_vector(int site, const RingSpec& spec) {
    return dipole_moment(spec.tau_l[site], spec.omega_a[site]) * dipole_orientation(site, spec);
}

// Pairwise dipole-dipole couplings in eV.
// J_ik = (1 / 4 pi eps0 |r|^3) (d_i . d_k - 3 (r_hat . d_i)(r_hat . d_k))
inline CouplingMatrix coupling(const RingSpec& spec) {
    const int n = spec.n_sites;
    CouplingMatrix j = CouplingMatrix::Zero(n, n);
    std::vector<Eigen::Vector3d> d(n);
    for (int i = 0; i < n; ++i) d[i] = dipole_vector(i, spec);
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            const Eigen::Vector3d r = spec.positions[k] - spec.positions[i];
            const double dist = r.norm();
            if (dist <= 0.0) throw std::runtime_error("coupling: degenerate geometry");
            const Eigen::Vector3d rh = r / dist;
            const double val_j = (d[i].dot(d[k]) - 3.0 * rh.dot(d[i]) * rh.dot(d[k])) /
                                 (4.0 * M_PI * constants::eps0_f_m * dist * dist * dist);
            j(i, k) = j(k, i) = constants::joule_to_ev(val_j);
        }
    }
    return j;
}

}  // namespace gslide
