#pragma once

#include <Eigen/Dense>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "codes.hpp"
#include "errors.hpp"
#include "pauli.hpp"
#include "ptm.hpp"

namespace pauliconj {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

// i^phase X^x Z^z as a matrix on computational basis states (qubit 1 = bit 0).
struct PhasedPauli {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int phase = 0;
};

inline PhasedPauli hermitian(const PauliOp& p) {
  return {p.x_bits(), p.z_bits(), std::popcount(p.x_bits() & p.z_bits()) & 3};
}

inline PhasedPauli operator*(const PhasedPauli& a, const PhasedPauli& b) {
  return {a.x ^ b.x, a.z ^ b.z, (a.phase + b.phase + 2 * std::popcount(a.z & b.x)) & 3};
}

inline cplx i_pow(int k) {
  static constexpr std::array<cplx, 4> t{cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  return t[k & 3];
}

inline double parity_sign(std::uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

inline void apply_pauli(const PhasedPauli& p, const StateVector& in, StateVector& out) {
  out.resize(in.size());
  const cplx ph = i_pow(p.phase);
  for (std::size_t i = 0; i < in.size(); ++i) out[i ^ p.x] = ph * parity_sign(p.z & i) * in[i];
}

inline StateVector apply_pauli(const PhasedPauli& p, const StateVector& in) {
  StateVector out;
  apply_pauli(p, in, out);
  return out;
}

inline cplx inner(const StateVector& a, const StateVector& b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm2(const StateVector& a) {
  double s = 0;
  for (const auto& v : a) s += std::norm(v);
  return s;
}

// <psi|P|psi> without normalisation.
inline cplx expectation(const PhasedPauli& p, const StateVector& psi) {
  cplx s = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) s += std::conj(psi[i ^ p.x]) * parity_sign(p.z & i) * psi[i];
  return i_pow(p.phase) * s;
}

// Diagonal of prod_j exp(-i theta Z_j).
inline StateVector global_z_phases(int n, double theta) {
  StateVector d(std::size_t{1} << n);
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = std::polar(1.0, -theta * (n - 2 * std::popcount(i)));
  return d;
}

struct DensityMatrix {
  int n = 0;
  Eigen::MatrixXcd rho;

  static DensityMatrix pure(int n, const StateVector& psi) {
    Eigen::Map<const Eigen::VectorXcd> v(psi.data(), static_cast<Eigen::Index>(psi.size()));
    return {n, v * v.adjoint()};
  }

  // Throws ToleranceError when hermiticity, trace or positivity drift beyond tol.
  void check(double tol = 1e-10) const {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw ToleranceError("density matrix not Hermitian");
    if (std::abs(rho.trace() - cplx(1, 0)) > tol) throw ToleranceError("density matrix trace drifted from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) throw ToleranceError("density matrix not positive");
  }
};

// Returns the map rho -> N(theta) rho N(theta)^dagger.
inline std::function<void(DensityMatrix&)> global_z_state_map(int n, double theta) {
  StateVector d = global_z_phases(n, theta);
  return [n, d = std::move(d)](DensityMatrix& dm) {
    if (dm.n != n) throw DimensionError("global Z map size mismatch");
    for (Eigen::Index j = 0; j < dm.rho.cols(); ++j)
      for (Eigen::Index i = 0; i < dm.rho.rows(); ++i) dm.rho(i, j) *= d[i] * std::conj(d[j]);
  };
}

inline void conjugate(DensityMatrix& dm, const PhasedPauli& p) {
  Eigen::MatrixXcd out(dm.rho.rows(), dm.rho.cols());
  const std::size_t dim = static_cast<std::size_t>(dm.rho.rows());
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i)
      out(i ^ p.x, j ^ p.x) = parity_sign(p.z & i) * parity_sign(p.z & j) * dm.rho(i, j);
  dm.rho = std::move(out);
}

// Same single-qubit PTM on one qubit, acting blockwise on the 2x2 sub-blocks.
inline void apply_qubit_channel(DensityMatrix& dm, int qubit, const Eigen::Matrix4d& t) {
  const std::size_t b = std::size_t{1} << qubit, dim = static_cast<std::size_t>(dm.rho.rows());
  const cplx I(0, 1);
  const Eigen::Matrix4cd tc = t.cast<cplx>();
  for (std::size_t j = 0; j < dim; ++j) {
    if (j & b) continue;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & b) continue;
      const cplx b00 = dm.rho(i, j), b01 = dm.rho(i, j | b), b10 = dm.rho(i | b, j), b11 = dm.rho(i | b, j | b);
      const Eigen::Vector4cd r(b00 + b11, b01 + b10, I * (b01 - b10), b00 - b11);
      const Eigen::Vector4cd o = tc * r;
      dm.rho(i, j) = (o[0] + o[3]) / 2.0;
      dm.rho(i | b, j | b) = (o[0] - o[3]) / 2.0;
      dm.rho(i, j | b) = (o[1] - I * o[2]) / 2.0;
      dm.rho(i | b, j) = (o[1] + I * o[2]) / 2.0;
    }
  }
}

inline cplx trace_product(const PhasedPauli& p, const DensityMatrix& dm) {
  cplx s = 0;
  const std::size_t dim = static_cast<std::size_t>(dm.rho.rows());
  for (std::size_t j = 0; j < dim; ++j) s += parity_sign(p.z & j) * dm.rho(j, j ^ p.x);
  return i_pow(p.phase) * s;
}

// --- noise models ----------------------------------------------------------

// prod_j exp(-i theta Z_j) on every data qubit.
struct GlobalZRotation {
  double theta = 0;
};

// The same single-qubit channel on every data qubit.
struct ProductChannel {
  Eigen::Matrix4d ptm = Eigen::Matrix4d::Identity();
};

using Noise = std::variant<GlobalZRotation, ProductChannel>;

// Syndrome-resolved logical Z rotation.
struct SyndromeEntry {
  Syndrome syndrome;
  double probability = 0;
  double phi = 0;
};

struct SyndromeDecomposition {
  std::vector<SyndromeEntry> entries;
  double total_probability() const {
    double s = 0;
    for (const auto& e : entries) s += e.probability;
    return s;
  }
};

inline LogicalPTM reconstruct_ptm(const SyndromeDecomposition& d) {
  LogicalPTM t;
  t.m.setZero();
  for (const auto& e : d.entries) t.m += e.probability * z_rotation_ptm(e.phi);
  return t;
}

// Precomputed per-code data: decoder, code basis, phase-tracked stabilizer group.
class CodeSimulator {
 public:
  explicit CodeSimulator(StabilizerCode code) : code_(std::move(code)), decoder_(build_decoder(code_)) {
    if (code_.n > 16) throw DimensionError("dense simulation limited to 16 qubits");
    dim_ = std::size_t{1} << code_.n;
    for (const auto& s : code_.stabilizer_gens) gens_.push_back(hermitian(s));
    lx_ = hermitian(code_.logical_x);
    lz_ = hermitian(code_.logical_z);
    ly_ = PhasedPauli{0, 0, 1} * lx_ * lz_;
    ly_op_ = compose(code_.logical_x, code_.logical_z);
    build_basis();
    group_.resize(std::size_t{1} << gens_.size());
    for (std::size_t k = 1; k < group_.size(); ++k) group_[k] = group_[k & (k - 1)] * gens_[std::countr_zero(k)];
    for (std::size_t m = 0; m < decoder_.size(); ++m) recovery_.push_back(hermitian(decoder_.recovery(m)));
  }

  const StabilizerCode& code() const { return code_; }
  const DecoderTable& decoder() const { return decoder_; }
  const StateVector& zero_l() const { return zero_; }
  const StateVector& one_l() const { return one_; }
  PhasedPauli logical(int k) const { return k == 1 ? lx_ : k == 2 ? ly_ : lz_; }

  // Inputs |0_L>, |1_L>, |+_L>, |+i_L>.
  std::array<StateVector, 4> tomography_inputs() const {
    StateVector plus(dim_), plus_i(dim_);
    const double r = 1 / std::sqrt(2.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      plus[i] = r * (zero_[i] + one_[i]);
      plus_i[i] = r * (zero_[i] + cplx(0, 1) * one_[i]);
    }
    return {zero_, one_, plus, plus_i};
  }

  // Visits every syndrome branch of (1 +- S_i)/2 applied in generator order.
  // Leaves receive the unnormalised projected vectors, one per input.
  template <class Leaf>
  void project(const std::vector<StateVector>& inputs, Leaf&& leaf, double prune = 1e-30) const {
    const std::size_t s = gens_.size(), k = inputs.size();
    std::vector<std::vector<StateVector>> buf(s + 1, std::vector<StateVector>(k, StateVector(dim_)));
    buf[0] = inputs;
    StateVector tmp(dim_);
    std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t level, std::uint64_t bits) {
      if (level == s) {
        leaf(bits, buf[s]);
        return;
      }
      for (int outcome = 0; outcome < 2; ++outcome) {
        const double sign = outcome ? -1.0 : 1.0;
        double total = 0;
        for (std::size_t a = 0; a < k; ++a) {
          apply_pauli(gens_[level], buf[level][a], tmp);
          auto& dst = buf[level + 1][a];
          for (std::size_t i = 0; i < dim_; ++i) dst[i] = 0.5 * (buf[level][a][i] + sign * tmp[i]);
          total += norm2(dst);
        }
        if (total < prune) continue;
        rec(level + 1, bits | (static_cast<std::uint64_t>(outcome) << level));
      }
    };
    rec(0, 0);
  }

  // (trace, <X>, <Y>, <Z>) after ideal syndrome projection and table recovery.
  std::array<double, 4> corrected_bloch(const StateVector& psi) const {
    std::array<double, 4> out{0, 0, 0, 0};
    const std::array<PauliOp, 3> ls{code_.logical_x, ly_op_, code_.logical_z};
    const std::array<PhasedPauli, 3> lp{lx_, ly_, lz_};
    project({psi}, [&](std::uint64_t bits, const std::vector<StateVector>& v) {
      const PauliOp& r = decoder_.recovery(bits);
      out[0] += norm2(v[0]);
      for (int l = 0; l < 3; ++l) out[l + 1] += commutes(r, ls[l]) * expectation(lp[l], v[0]).real();
    });
    return out;
  }

  // Readout through the stabilizer-group Walsh sum; used for mixed states.
  std::array<double, 4> corrected_bloch(const DensityMatrix& dm) const {
    const std::size_t g = group_.size();
    const std::array<PauliOp, 4> ls{PauliOp(code_.n), code_.logical_x, ly_op_, code_.logical_z};
    const std::array<PhasedPauli, 4> lp{PhasedPauli{}, lx_, ly_, lz_};
    std::array<double, 4> out{0, 0, 0, 0};
    std::vector<cplx> t(g);
    for (int l = 0; l < 4; ++l) {
      for (std::size_t k = 0; k < g; ++k) t[k] = trace_product(lp[l] * group_[k], dm);
      for (std::size_t h = 1; h < g; h <<= 1)
        for (std::size_t i = 0; i < g; i += 2 * h)
          for (std::size_t j = i; j < i + h; ++j) {
            const cplx a = t[j], b = t[j + h];
            t[j] = a + b;
            t[j + h] = a - b;
          }
      double acc = 0;
      for (std::size_t m = 0; m < g; ++m) acc += commutes(decoder_.recovery(m), ls[l]) * t[m].real();
      out[l] = acc / static_cast<double>(g);
    }
    return out;
  }

  // Evolves each tomography input with `evolve` and reads out the corrected logical PTM.
  template <class Evolve>
  LogicalPTM channel_from_states(Evolve&& evolve) const {
    auto inputs = tomography_inputs();
    std::array<std::array<double, 4>, 4> out;
    for (int a = 0; a < 4; ++a) out[a] = corrected_bloch(evolve(inputs[a]));
    return assemble(out);
  }

  template <class Evolve>
  LogicalPTM channel_from_density(Evolve&& evolve) const {
    auto inputs = tomography_inputs();
    std::array<std::array<double, 4>, 4> out;
    for (int a = 0; a < 4; ++a) {
      DensityMatrix dm = DensityMatrix::pure(code_.n, inputs[a]);
      evolve(dm);
      out[a] = corrected_bloch(dm);
    }
    return assemble(out);
  }

  LogicalPTM effective_channel(const Noise& noise, const PauliOp& conj) const {
    check_size(conj);
    const PhasedPauli w = hermitian(conj);
    if (const auto* gz = std::get_if<GlobalZRotation>(&noise)) {
      const StateVector d = global_z_phases(code_.n, gz->theta);
      return channel_from_states([&](const StateVector& psi) {
        StateVector a = apply_pauli(w, psi);
        for (std::size_t i = 0; i < dim_; ++i) a[i] *= d[i];
        return apply_pauli(w, a);
      });
    }
    const auto& pc = std::get<ProductChannel>(noise);
    return channel_from_density([&](DensityMatrix& dm) {
      conjugate(dm, w);
      for (int q = 0; q < code_.n; ++q) apply_qubit_channel(dm, q, pc.ptm);
      conjugate(dm, w);
    });
  }

  // Density-matrix route for any noise; cross-checks the state-vector route.
  LogicalPTM effective_channel_dense(const Noise& noise, const PauliOp& conj) const {
    check_size(conj);
    const PhasedPauli w = hermitian(conj);
    return channel_from_density([&](DensityMatrix& dm) {
      conjugate(dm, w);
      if (const auto* gz = std::get_if<GlobalZRotation>(&noise)) {
        global_z_state_map(code_.n, gz->theta)(dm);
      } else {
        for (int q = 0; q < code_.n; ++q) apply_qubit_channel(dm, q, std::get<ProductChannel>(noise).ptm);
      }
      conjugate(dm, w);
    });
  }

  // W_1, N, W_2, N, ..., W_K, N, then the product of all W_k.
  LogicalPTM plan_channel(double theta_step, const std::vector<PauliOp>& plan) const {
    PauliOp total(code_.n);
    std::vector<PhasedPauli> ws;
    for (const auto& w : plan) {
      check_size(w);
      ws.push_back(hermitian(w));
      total = compose(total, w);
    }
    const PhasedPauli last = hermitian(total);
    const StateVector d = global_z_phases(code_.n, theta_step);
    return channel_from_states([&](const StateVector& psi) {
      StateVector a = psi;
      for (const auto& w : ws) {
        a = apply_pauli(w, a);
        for (std::size_t i = 0; i < dim_; ++i) a[i] *= d[i];
      }
      return apply_pauli(last, a);
    });
  }

  SyndromeDecomposition syndrome_decomposition(double theta, const PauliOp& conj) const {
    check_size(conj);
    const PhasedPauli w = hermitian(conj);
    const StateVector d = global_z_phases(code_.n, theta);
    std::vector<StateVector> in{zero_, one_};
    for (auto& v : in) {
      v = apply_pauli(w, v);
      for (std::size_t i = 0; i < dim_; ++i) v[i] *= d[i];
      v = apply_pauli(w, v);
    }
    SyndromeDecomposition out;
    project(in, [&](std::uint64_t bits, const std::vector<StateVector>& v) {
      const PhasedPauli& r = recovery_[bits];
      const StateVector c0 = apply_pauli(r, v[0]), c1 = apply_pauli(r, v[1]);
      const cplx k00 = inner(zero_, c0), k01 = inner(zero_, c1), k10 = inner(one_, c0), k11 = inner(one_, c1);
      const double leak = std::abs(norm2(c0) - std::norm(k00) - std::norm(k10)) + std::abs(norm2(c1) - std::norm(k01) - std::norm(k11));
      if (std::abs(k01) > 1e-8 || std::abs(k10) > 1e-8 || std::abs(std::abs(k00) - std::abs(k11)) > 1e-8 || leak > 1e-8)
        throw StructuralError(code_.name + ": syndrome " + Syndrome{bits, code_.num_checks()}.to_string() +
                              " does not give a pure logical Z rotation");
      const double p = 0.5 * (std::norm(k00) + std::norm(k11));
      if (p < 1e-28) return;
      out.entries.push_back({Syndrome{bits, code_.num_checks()}, p, std::arg(k11 * std::conj(k00))});
    });
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SyndromeEntry& a, const SyndromeEntry& b) { return a.syndrome.bits < b.syndrome.bits; });
    if (std::abs(out.total_probability() - 1.0) > 1e-10) throw ToleranceError("syndrome probabilities do not sum to 1");
    return out;
  }

 private:
  void check_size(const PauliOp& p) const {
    if (p.num_qubits() != code_.n) throw DimensionError("conjugation Pauli size does not match the code");
  }

  // |0_L> from the first basis state with non-zero overlap on the +1 code space of Z_L.
  void build_basis() {
    std::vector<PhasedPauli> projectors = gens_;
    projectors.push_back(lz_);
    StateVector tmp(dim_);
    for (std::size_t seed = 0; seed < dim_; ++seed) {
      StateVector v(dim_, 0.0);
      v[seed] = 1.0;
      for (const auto& p : projectors) {
        apply_pauli(p, v, tmp);
        for (std::size_t i = 0; i < dim_; ++i) v[i] = 0.5 * (v[i] + tmp[i]);
      }
      const double nn = norm2(v);
      if (nn < 1e-6) continue;
      for (auto& a : v) a /= std::sqrt(nn);
      zero_ = v;
      one_ = apply_pauli(lx_, zero_);
      return;
    }
    throw StructuralError(code_.name + ": empty code space");
  }

  LogicalPTM assemble(const std::array<std::array<double, 4>, 4>& out) const {
    for (const auto& o : out)
      if (std::abs(o[0] - 1.0) > 1e-10) throw ToleranceError("logical channel is not trace preserving");
    LogicalPTM t;
    for (int r = 0; r < 4; ++r) {
      const double mean = 0.5 * (out[0][r] + out[1][r]);
      t.m(r, 0) = mean;
      t.m(r, 3) = 0.5 * (out[0][r] - out[1][r]);
      t.m(r, 1) = out[2][r] - mean;
      t.m(r, 2) = out[3][r] - mean;
    }
    t.m.row(0) << 1, 0, 0, 0;
    return t;
  }

  StabilizerCode code_;
  DecoderTable decoder_;
  std::size_t dim_ = 0;
  std::vector<PhasedPauli> gens_;
  std::vector<PhasedPauli> group_;
  std::vector<PhasedPauli> recovery_;
  PhasedPauli lx_, ly_, lz_;
  PauliOp ly_op_;
  StateVector zero_, one_;
};

// --- free-function interface -------------------------------------------------

inline LogicalPTM effective_logical_channel(const StabilizerCode& code, const Noise& noise, const PauliOp& conj) {
  return CodeSimulator(code).effective_channel(noise, conj);
}

inline LogicalPTM effective_logical_channel(const StabilizerCode& code, const Noise& noise) {
  return effective_logical_channel(code, noise, PauliOp(code.n));
}

inline double avg_fidelity(const LogicalPTM& t) { return t.fidelity(); }

inline SyndromeDecomposition syndrome_decomposition(const StabilizerCode& code, double theta) {
  return CodeSimulator(code).syndrome_decomposition(theta, PauliOp(code.n));
}

// Average of L E L over the four logical Paulis. Conjugating the physical noise by a
// logical operator L turns the logical channel E into exactly L E L.
inline LogicalPTM logical_pauli_twirl(const LogicalPTM& e) {
  LogicalPTM t;
  t.m.setZero();
  for (int l = 0; l < 4; ++l) {
    Eigen::Vector4d d = Eigen::Vector4d::Ones();
    for (int k = 1; k < 4; ++k)
      if (l != 0 && k != l) d(k) = -1;
    t.m += d.asDiagonal() * e.m * d.asDiagonal();
  }
  t.m /= 4;
  return t;
}

// Full physical twirl. The reduced set omits logical generators, so the average over it
// is followed by a logical Pauli twirl; the diagonal (and the fidelity) is unchanged by that step.
inline LogicalPTM twirled_channel(const CodeSimulator& sim, const Noise& noise, const std::vector<PauliOp>& twirl_set) {
  if (twirl_set.empty()) throw DimensionError("twirl set is empty");
  LogicalPTM t;
  t.m.setZero();
  for (const auto& w : twirl_set) t.m += sim.effective_channel(noise, w).m;
  t.m /= static_cast<double>(twirl_set.size());
  return logical_pauli_twirl(t);
}

inline LogicalPTM twirled_channel(const StabilizerCode& code, const Noise& noise, const std::vector<PauliOp>& twirl_set) {
  return twirled_channel(CodeSimulator(code), noise, twirl_set);
}

}  // namespace pauliconj
