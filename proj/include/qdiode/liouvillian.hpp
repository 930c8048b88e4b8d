#ifndef QDIODE_LIOUVILLIAN_HPP
#define QDIODE_LIOUVILLIAN_HPP

#include <array>
#include <vector>

#include "qdiode/operators.hpp"
#include "qdiode/spectrum.hpp"

// Secular Lindblad generator assembled in the dressed eigenbasis.  The state
// it propagates is the density matrix written in the |1>..|4> basis; since
// that basis is itself a product basis of two effective qubits, the jump
// operators below are plain embedded ladder matrices.  All superoperators use
// column-stacking vectorization: vec(A X B) = (B^T (x) A) vec(X).

namespace qdiode {

using Mat16 = Eigen::Matrix<complexd, 16, 16>;
using Vec16 = Eigen::Matrix<complexd, 16, 1>;

inline Mat16 kron(const Mat4& a, const Mat4& b) {
  Mat16 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

// D[A] rho = A rho A^dag - (1/2){A^dag A, rho}
inline Mat4 dissipator(const Mat4& jump, const Mat4& rho) {
  const Mat4 ada = jump.adjoint() * jump;
  return jump * rho * jump.adjoint() - 0.5 * (ada * rho + rho * ada);
}

inline Mat16 dissipator_superoperator(const Mat4& jump) {
  const Mat4 ada = jump.adjoint() * jump;
  const Mat4 conj = jump.conjugate();
  const Mat4 ada_t = ada.transpose();
  const Mat4 eye = Mat4::Identity();
  return kron(conj, jump) - 0.5 * kron(eye, ada) - 0.5 * kron(ada_t, eye);
}

// One secular dissipative channel.  omega is the signed transition frequency
// fed to the bath response: positive for emission (lowering) channels,
// negative for the matching absorption (raising) channels.
struct Channel {
  Mat4 jump;            // dressed-basis jump operator
  double weight = 0.0;  // nonnegative rate, zero-weight channels are kept
  Site qubit = Site::left;
  Site bath = Site::left;
  double omega = 0.0;
};

// Channels descending from the left-qubit coupling operator sLx, driven by
// one bath.  The dressed decomposition splits it into a direct flip at wL
// (weight cos^2 theta) and two composite flips at wL -/+ Omega that also flip
// the dressed right qubit (weight sin^2 theta each); every frequency comes in
// an emission/absorption pair, six channels total.
inline std::vector<Channel> left_qubit_channels(const SystemSpec& spec, const BathSpec& baths,
                                                Site bath) {
  const DressedFrame frame = eigensystem(spec);
  const double c2 = std::cos(frame.theta) * std::cos(frame.theta);
  const double s2 = std::sin(frame.theta) * std::sin(frame.theta);
  const double kappa = baths.kappa(Site::left, bath);
  const double temp = baths.temperature(bath);
  const double w_l = spec.omega_l;
  const double w_sum = frame.transition(1, 4);   // wL + Omega
  const double w_diff = frame.transition(2, 3);  // wL - Omega

  const Mat4 lm = embed(pauli(Axis::minus), Site::left);
  const Mat4 lp = embed(pauli(Axis::plus), Site::left);
  const Mat4 rm = embed(pauli(Axis::minus), Site::right);
  const Mat4 rp = embed(pauli(Axis::plus), Site::right);

  auto make = [&](const Mat4& jump, double share, double omega) {
    return Channel{jump, share * response(kappa, omega, temp, baths.kind), Site::left, bath, omega};
  };
  return {
      make(lm, c2, w_l),           make(lp, c2, -w_l),
      make(lm * rp, s2, w_diff),   make(lp * rm, s2, -w_diff),
      make(lm * rm, s2, w_sum),    make(lp * rp, s2, -w_sum),
  };
}

// Channels descending from the right-qubit coupling operator sRx: a direct
// dressed flip at Omega with weight cos^2 theta (the sin^2 theta remainder of
// sRx is diagonal, sits at zero frequency, and carries no response).
inline std::vector<Channel> right_qubit_channels(const SystemSpec& spec, const BathSpec& baths,
                                                 Site bath) {
  const DressedFrame frame = eigensystem(spec);
  const double c2 = std::cos(frame.theta) * std::cos(frame.theta);
  const double kappa = baths.kappa(Site::right, bath);
  const double temp = baths.temperature(bath);
  const double om = frame.omega_big;

  const Mat4 rm = embed(pauli(Axis::minus), Site::right);
  const Mat4 rp = embed(pauli(Axis::plus), Site::right);
  return {
      Channel{rm, c2 * response(kappa, om, temp, baths.kind), Site::right, bath, om},
      Channel{rp, c2 * response(kappa, -om, temp, baths.kind), Site::right, bath, -om},
  };
}

struct Generator {
  SystemSpec system;
  BathSpec baths;
  Mat16 superoperator = Mat16::Zero();             // everything, Hamiltonian part included
  std::array<Mat16, 2> per_bath{};                 // dissipative parts, indexed by Site
  Mat16 hamiltonian_part = Mat16::Zero();          // -i[H_tilde, .] when requested, else zero
  std::vector<Channel> channels;                   // all 16, audit order: bath L then bath R
  bool includes_hamiltonian = false;
  bool near_degenerate = false;                    // |wL - Omega| within 10x the largest kappa

  const Mat16& bath_part(Site bath) const {
    return per_bath[bath == Site::left ? 0 : 1];
  }
};

// Assemble the full generator.  The default leaves the Hamiltonian commutator
// out (the dressed frame makes it act only on coherences, which decouple from
// the populations here); include_hamiltonian adds -i[H_tilde, .] for
// picture-independence checks.
inline Generator assemble(const SystemSpec& spec, const BathSpec& baths,
                          bool include_hamiltonian = false) {
  baths.validate();
  Generator gen;
  gen.system = spec;
  gen.baths = baths;
  gen.includes_hamiltonian = include_hamiltonian;

  for (Site bath : {Site::left, Site::right}) {
    Mat16 part = Mat16::Zero();
    for (const auto& group : {left_qubit_channels(spec, baths, bath),
                              right_qubit_channels(spec, baths, bath)}) {
      for (const Channel& ch : group) {
        part += ch.weight * dissipator_superoperator(ch.jump);
        gen.channels.push_back(ch);
      }
    }
    gen.per_bath[bath == Site::left ? 0 : 1] = part;
  }
  gen.superoperator = gen.per_bath[0] + gen.per_bath[1];

  if (include_hamiltonian) {
    const Mat4 h = dressed_hamiltonian(spec);
    const Mat4 h_t = h.transpose();
    const Mat4 eye = Mat4::Identity();
    gen.hamiltonian_part = complexd(0.0, -1.0) * (kron(eye, h) - kron(h_t, eye));
    gen.superoperator += gen.hamiltonian_part;
  }

  const double gap = std::abs(spec.omega_l - dressed_splitting(spec));
  gen.near_degenerate = gap < 10.0 * baths.max_kappa();
  return gen;
}

}  // namespace qdiode

#endif  // QDIODE_LIOUVILLIAN_HPP
