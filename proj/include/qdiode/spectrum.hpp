#ifndef QDIODE_SPECTRUM_HPP
#define QDIODE_SPECTRUM_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "qdiode/operators.hpp"

// Thermal bath spectral response.  Rates obey the detailed-balance relation
// G(w)/G(-w) = exp(w/T): positive frequencies emit into the bath with weight
// proportional to 1 + nbar, negative frequencies absorb with weight nbar.

namespace qdiode {

enum class SpectralDensity { flat, ohmic };

inline std::string to_string(SpectralDensity kind) {
  return kind == SpectralDensity::flat ? "flat" : "ohmic";
}

inline SpectralDensity parse_spectral_density(const std::string& name) {
  if (name == "flat") return SpectralDensity::flat;
  if (name == "ohmic") return SpectralDensity::ohmic;
  throw std::invalid_argument("unknown spectral density '" + name + "' (expected flat or ohmic)");
}

// Bose-Einstein occupation 1/(exp(w/T) - 1).  Requires w > 0; T = 0 gives an
// empty bath.  Implemented with expm1 so small w/T does not cancel; huge w/T
// overflows expm1 to +inf and the occupation cleanly underflows to zero.
inline double mean_occupation(double omega, double temperature) {
  if (omega <= 0.0) throw std::domain_error("mean_occupation: omega must be positive");
  if (temperature < 0.0) throw std::domain_error("mean_occupation: negative temperature");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / temperature);
}

// Bare coupling rate at transition frequency w > 0.
inline double rate(double kappa, double omega, SpectralDensity kind) {
  if (omega <= 0.0) throw std::domain_error("rate: omega must be positive");
  return kind == SpectralDensity::flat ? kappa : kappa * omega;
}

// Thermal response at signed frequency.  G(0) = 0: a zero-frequency channel
// exchanges no energy and is dropped by the secular construction.
inline double response(double kappa, double omega, double temperature, SpectralDensity kind) {
  if (omega > 0.0) return rate(kappa, omega, kind) * (1.0 + mean_occupation(omega, temperature));
  if (omega < 0.0) return rate(kappa, -omega, kind) * mean_occupation(-omega, temperature);
  return 0.0;
}

// Two baths, one per side, each coupled to both qubits in general.
// kappa_qb: first index is the qubit whose coupling operator the channel
// descends from, second index is the bath supplying the quanta.
struct BathSpec {
  double t_left = 1.0;
  double t_right = 1.0;
  SpectralDensity kind = SpectralDensity::flat;
  double kappa_ll = 0.0;
  double kappa_lr = 0.0;
  double kappa_rl = 0.0;
  double kappa_rr = 0.0;

  double temperature(Site bath) const { return bath == Site::left ? t_left : t_right; }

  double kappa(Site qubit, Site bath) const {
    if (qubit == Site::left) return bath == Site::left ? kappa_ll : kappa_lr;
    return bath == Site::left ? kappa_rl : kappa_rr;
  }

  bool local() const { return kappa_lr == 0.0 && kappa_rl == 0.0; }

  double max_kappa() const {
    return std::max(std::max(kappa_ll, kappa_lr), std::max(kappa_rl, kappa_rr));
  }

  void validate() const {
    if (t_left < 0.0 || t_right < 0.0)
      throw std::invalid_argument("BathSpec: temperatures must be nonnegative");
    if (kappa_ll < 0.0 || kappa_lr < 0.0 || kappa_rl < 0.0 || kappa_rr < 0.0)
      throw std::invalid_argument("BathSpec: couplings must be nonnegative");
  }
};

}  // namespace qdiode

#endif  // QDIODE_SPECTRUM_HPP
