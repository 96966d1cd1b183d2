// environment.hpp — spectral densities, occupation factors and band-gap
// suppression for the optical and vibrational baths.
//
// Rate convention: a positive frequency denotes emission into the bath,
// gamma(w) = kappa-weighted spectral density times (1 + n(w)); a negative
// frequency denotes the detailed-balance absorption partner with occupation
// factor n(|w|).

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "gslide/constants.hpp"

namespace gslide {

enum class BandgapSide { below, above };

struct Bandgap {
    double cutoff = 0.0;       // eV
    double suppression = 0.0;  // S in [0, 1]
    BandgapSide side = BandgapSide::below;
};

struct OpticalBath {
    double temperature = 5800.0;  // K
    double kappa_opt = 0.0;       // eV^-2, calibrated so gamma(omega_a) = hbar/tau_l at T=0
    std::optional<Bandgap> bandgap;
};

enum class PhononModel { ohmic, superohmic };

struct PhononBath {
    PhononModel model = PhononModel::ohmic;
    double temperature = 300.0;  // K
    double kappa_vib = 0.0;      // ohmic prefactor (dimensionless); see calibrate_kappa_vib
    double lambda = 0.0;         // eV, superohmic reorganisation energy
    double omega_crit = 0.0;     // eV, superohmic cutoff
};

inline double bose_einstein(double omega, double temperature) {
    if (omega <= 0.0) throw std::invalid_argument("bose_einstein: omega must be positive");
    if (temperature < 0.0) throw std::invalid_argument("bose_einstein: negative temperature");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / (constants::kb_ev_k * temperature));
}

inline double calibrate_kappa_opt(double tau_l, double omega_a) {
    const double gamma_a = constants::hbar_ev_s / tau_l;  // eV
    return gamma_a / (omega_a * omega_a * omega_a);
}

inline bool bandgap_suppresses(const Bandgap& gap, double abs_omega) {
    return gap.side == BandgapSide::below ? abs_omega < gap.cutoff : abs_omega > gap.cutoff;
}

// gamma_opt(w) = kappa_opt w^3 (1 + n(w)); w < 0 is the absorption partner.
// The band gap applies a multiplicative (1 - S) on the suppressed side.
inline double optical_rate(double omega, const OpticalBath& bath) {
    if (omega == 0.0) throw std::invalid_argument("optical_rate: omega must be nonzero");
    const double w = std::abs(omega);
    const double occ = bose_einstein(w, bath.temperature);
    double rate = bath.kappa_opt * w * w * w * (omega > 0.0 ? 1.0 + occ : occ);
    if (bath.bandgap && bandgap_suppresses(*bath.bandgap, w))
        rate *= 1.0 - bath.bandgap->suppression;
    return rate;
}

// Superohmic spectral density J(w) = lambda w^3 / (2 w_crit^3) exp(-w / w_crit).
inline double superohmic_spectral_density(double omega, const PhononBath& bath) {
    const double x = omega / bath.omega_crit;
    return bath.lambda * 0.5 * x * x * x * std::exp(-x);
}

inline double phonon_rate(double omega, const PhononBath& bath) {
    if (omega == 0.0) throw std::invalid_argument("phonon_rate: omega must be nonzero");
    const double w = std::abs(omega);
    const double occ = bose_einstein(w, bath.temperature);
    const double j = bath.model == PhononModel::ohmic ? bath.kappa_vib * w
                                                      : superohmic_spectral_density(w, bath);
    return j * (omega > 0.0 ? 1.0 + occ : occ);
}

// Analytic w -> 0 limit of gamma(w)(1 + n(w)): pure-dephasing rate.
// Ohmic: kappa kB T; superohmic: 0.
inline double phonon_rate_zero_frequency(const PhononBath& bath) {
    if (bath.model == PhononModel::superohmic) return 0.0;
    return bath.kappa_vib * constants::kb_ev_k * bath.temperature;
}

// kappa_vib = multiplier x gamma_opt(omega_a) / mean intra-manifold frequency.
// The default multiplier 10^3 makes spontaneous phonon emission at the mean
// phonon energy 1000x faster than spontaneous photon emission.
inline double calibrate_kappa_vib(double mean_intra_manifold_omega, double tau_l,
                                  double multiplier = 1e3) {
    if (mean_intra_manifold_omega <= 0.0)
        throw std::invalid_argument("calibrate_kappa_vib: no intra-manifold transitions");
    return multiplier * (constants::hbar_ev_s / tau_l) / mean_intra_manifold_omega;
}

// Midpoint cutoff between the target transition and the one below it.
// GS rings suppress below the cutoff, parallel rings above.
inline double bandgap_cutoff(double omega_good, double omega_bad, BandgapSide side,
                             bool* separable = nullptr) {
    if (omega_good <= 0.0 || omega_bad <= 0.0)
        throw std::invalid_argument("bandgap_cutoff: frequencies must be positive");
    const bool ok = side == BandgapSide::below ? omega_bad < omega_good : omega_bad > omega_good;
    if (separable) *separable = ok;
    return 0.5 * (omega_good + omega_bad);
}

}  // namespace gslide
