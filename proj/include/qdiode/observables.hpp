#ifndef QDIODE_OBSERVABLES_HPP
#define QDIODE_OBSERVABLES_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "qdiode/solver.hpp"

// Heat currents, entropy production, and the rectification factor.  Sign
// convention: J_bath = Tr[L_bath(rho) H_tilde] is the energy flow out of that
// bath into the system; at a steady state J_left + J_right = 0.

namespace qdiode {

struct HeatReport {
  double j_left = 0.0;
  double j_right = 0.0;
  double first_law_residual = 0.0;  // |j_left + j_right|
  double entropy_production = 0.0;  // -j_left/T_left - j_right/T_right
};

struct UnsupportedConfigurationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UndefinedRectificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tr[L_bath(rho) H_tilde].  The trace is real up to roundoff; anything above
// 1e-10 imaginary signals a corrupted generator or state.
inline double heat_current(const Generator& gen, const Mat4& rho, Site bath) {
  const Mat4 flow = unvec(gen.bath_part(bath) * vec(rho));
  const complexd q = (flow * dressed_hamiltonian(gen.system)).trace();
  if (std::abs(q.imag()) > 1e-10)
    throw std::runtime_error("heat_current: non-real current, generator or state corrupted");
  return q.real();
}

inline double entropy_production(double j_left, double j_right, double t_left, double t_right) {
  if (t_left <= 0.0 || t_right <= 0.0)
    throw std::domain_error("entropy_production: temperatures must be positive");
  return -j_left / t_left - j_right / t_right;
}

inline HeatReport heat_report(const Generator& gen, const Mat4& rho) {
  HeatReport report;
  report.j_left = heat_current(gen, rho, Site::left);
  report.j_right = heat_current(gen, rho, Site::right);
  report.first_law_residual = std::abs(report.j_left + report.j_right);
  report.entropy_production =
      entropy_production(report.j_left, report.j_right, gen.baths.t_left, gen.baths.t_right);
  return report;
}

namespace detail {

// Expectations of sLz, sRz and sLz sRz in the dressed basis, plus the four
// projector combinations A/B = 1 -/+ sLz, C/D = 1 -/+ sRz and their products.
struct LevelMoments {
  double zl, zr, zz;
  double a() const { return 1.0 - zl; }
  double b() const { return 1.0 + zl; }
  double c() const { return 1.0 - zr; }
  double d() const { return 1.0 + zr; }
  double ac() const { return 1.0 - zl - zr + zz; }
  double ad() const { return 1.0 - zl + zr - zz; }
  double bc() const { return 1.0 + zl - zr - zz; }
  double bd() const { return 1.0 + zl + zr + zz; }
};

inline LevelMoments level_moments(const Mat4& rho) {
  const Mat4 zl_op = embed(pauli(Axis::z), Site::left);
  const Mat4 zr_op = embed(pauli(Axis::z), Site::right);
  LevelMoments m{};
  m.zl = (rho * zl_op).trace().real();
  m.zr = (rho * zr_op).trace().real();
  m.zz = (rho * zl_op * zr_op).trace().real();
  return m;
}

inline void require_local(const BathSpec& baths, const char* who) {
  if (!baths.local())
    throw UnsupportedConfigurationError(std::string(who) +
                                        ": closed forms require local baths (no cross couplings)");
}

}  // namespace detail

// Closed-form currents from the dressed-level populations.  Each channel
// pairs absorption at -w against emission at +w weighted by the occupation of
// the levels it connects; composite channels at wL +/- Omega carry the
// product projectors.  Local baths only.
inline std::pair<double, double> heat_current_dressed_form(const SystemSpec& spec,
                                                           const BathSpec& baths,
                                                           const Mat4& rho) {
  detail::require_local(baths, "heat_current_dressed_form");
  const DressedFrame frame = eigensystem(spec);
  const double c2 = std::cos(frame.theta) * std::cos(frame.theta);
  const double s2 = std::sin(frame.theta) * std::sin(frame.theta);
  const double w_l = spec.omega_l;
  const double om = frame.omega_big;
  const double w_sum = w_l + om;
  const double w_diff = w_l - om;
  const detail::LevelMoments m = detail::level_moments(rho);

  auto gl = [&](double w) { return response(baths.kappa_ll, w, baths.t_left, baths.kind); };
  auto gr = [&](double w) { return response(baths.kappa_rr, w, baths.t_right, baths.kind); };

  const double j_left =
      0.5 * w_l * c2 * (gl(-w_l) * m.a() - gl(w_l) * m.b()) +
      0.25 * s2 *
          (w_sum * (gl(-w_sum) * m.ac() - gl(w_sum) * m.bd()) +
           w_diff * (gl(-w_diff) * m.ad() - gl(w_diff) * m.bc()));
  const double j_right = 0.5 * om * c2 * (gr(-om) * m.c() - gr(om) * m.d());
  return {j_left, j_right};
}

// Right-bath current from bare-basis expectation values:
// J_R = -(1/2) kappa_R Omega cos^2(theta)
//       [1 + (2 nbar_R + 1)(cos(theta) <sRz> + sin(theta) <sLz sRx>)],
// with kappa_R the right-bath rate evaluated at Omega.  rho is the
// dressed-basis state; it is rotated back before taking expectations.
inline double heat_current_bare_form(const SystemSpec& spec, const BathSpec& baths,
                                     const Mat4& rho) {
  detail::require_local(baths, "heat_current_bare_form");
  const DressedFrame frame = eigensystem(spec);
  const double om = frame.omega_big;
  const double c2 = std::cos(frame.theta) * std::cos(frame.theta);
  const double kappa_r = rate(baths.kappa_rr, om, baths.kind);
  const double nbar = baths.t_right == 0.0 ? 0.0 : mean_occupation(om, baths.t_right);

  const Mat4 v = frame.unitary.adjoint();
  const Mat4 rho_bare = v * rho * v.adjoint();
  const double zr = (rho_bare * embed(pauli(Axis::z), Site::right)).trace().real();
  const double zx = (rho_bare * embed(pauli(Axis::z), Site::left) *
                     embed(pauli(Axis::x), Site::right))
                        .trace()
                        .real();
  const double aligned = std::cos(frame.theta) * zr + std::sin(frame.theta) * zx;
  return -0.5 * kappa_r * om * c2 * (1.0 + (2.0 * nbar + 1.0) * aligned);
}

// |J1 + J2| / max(|J1|, |J2|) for the right-bath current under the two
// orientations of the thermal bias.  0 for a symmetric conductor, 1 for a
// perfect diode.  Undefined when both currents are exactly zero.
inline double rectification_factor(double j_one, double j_other) {
  if (j_one == 0.0 && j_other == 0.0)
    throw UndefinedRectificationError("rectification_factor: both currents vanish");
  return std::abs(j_one + j_other) / std::max(std::abs(j_one), std::abs(j_other));
}

struct RectificationResult {
  double j_forward = 0.0;   // right-bath current with the right bath hot
  double j_backward = 0.0;  // right-bath current with the bias swapped
  double r = 0.0;
};

inline RectificationResult rectification(double j_forward, double j_backward) {
  return {j_forward, j_backward, rectification_factor(j_forward, j_backward)};
}

// Closed-form time derivatives of <sLz>, <sRz>, <sLz sRz> in the dressed
// basis.  Pure population kinetics: every jump operator here is a product of
// ladder operators, so these three expectations close on themselves.  Local
// baths only; order matches the observable list above.
inline std::array<double, 3> dynamics_rhs(const SystemSpec& spec, const BathSpec& baths,
                                          const Mat4& rho) {
  detail::require_local(baths, "dynamics_rhs");
  const DressedFrame frame = eigensystem(spec);
  const double c2 = std::cos(frame.theta) * std::cos(frame.theta);
  const double s2 = std::sin(frame.theta) * std::sin(frame.theta);
  const double w_l = spec.omega_l;
  const double om = frame.omega_big;
  const double w_sum = w_l + om;
  const double w_diff = w_l - om;
  const detail::LevelMoments m = detail::level_moments(rho);

  auto gl = [&](double w) { return response(baths.kappa_ll, w, baths.t_left, baths.kind); };
  auto gr = [&](double w) { return response(baths.kappa_rr, w, baths.t_right, baths.kind); };

  const double dzl =
      c2 * (gl(-w_l) * m.a() - gl(w_l) * m.b()) +
      0.5 * s2 *
          (gl(-w_diff) * m.ad() - gl(w_diff) * m.bc() + gl(-w_sum) * m.ac() - gl(w_sum) * m.bd());
  const double dzr =
      c2 * (gr(-om) * m.c() - gr(om) * m.d()) +
      0.5 * s2 *
          (gl(w_diff) * m.bc() - gl(-w_diff) * m.ad() + gl(-w_sum) * m.ac() - gl(w_sum) * m.bd());
  const double dzz = c2 * (gl(-w_l) * (m.zr - m.zz) - gl(w_l) * (m.zr + m.zz) +
                           gr(-om) * (m.zl - m.zz) - gr(om) * (m.zl + m.zz));
  return {dzl, dzr, dzz};
}

}  // namespace qdiode

#endif  // QDIODE_OBSERVABLES_HPP
