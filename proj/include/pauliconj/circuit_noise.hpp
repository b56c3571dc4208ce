#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "channel_sim.hpp"
#include "codes.hpp"
#include "multiround.hpp"
#include "pauli.hpp"

namespace pauliconj {

enum class GateKind {
  one_qubit,         // H, S, X, Y or Z on q0
  controlled_pauli,  // control q0, target q1, Pauli op
  measure,           // Z-basis measurement of ancilla q0 into record (round, bit), then ideal reset
  recovery,          // decoder Paulis conditioned on the record of `round`
  environment,       // global Z rotation on the data qubits; not a gate, never faulty
};

struct Gate {
  GateKind kind = GateKind::one_qubit;
  int q0 = -1;
  int q1 = -1;
  char op = 'I';
  int round = 0;
  int bit = 0;
  // recovery: 0 plain table lookup; 1, 2, 3 keep the X, Y or Z logical eigenvalue (state preparation)
  int preserve = 0;
  double theta = 0;
  bool error_location = false;
};

struct Circuit {
  int n_data = 0;
  int n_ancilla = 0;
  int rounds = 0;
  std::vector<Gate> gates;

  int register_size() const { return n_data + n_ancilla; }
  std::size_t count(GateKind k) const {
    return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [k](const Gate& g) { return g.kind == k; }));
  }
  // Recovery gates are excluded; their Pauli count depends on the syndrome.
  std::size_t static_error_locations() const {
    return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [](const Gate& g) {
      return g.error_location && g.kind != GateKind::recovery;
    }));
  }
};

// The six logical axis states used for tomography.
enum class InputState { zero, one, plus, minus, plus_i, minus_i };

inline constexpr std::array<InputState, 6> kAllInputs{InputState::zero, InputState::one,    InputState::plus,
                                                      InputState::minus, InputState::plus_i, InputState::minus_i};

// Logical Pauli (1 X, 2 Y, 3 Z) whose eigenstate the input is.
inline int input_axis(InputState s) {
  switch (s) {
    case InputState::zero:
    case InputState::one: return 3;
    case InputState::plus:
    case InputState::minus: return 1;
    default: return 2;
  }
}

struct CircuitOptions {
  InputState input = InputState::zero;
  std::optional<PauliOp> conj;
  double theta = 0;
};

namespace detail {

inline void push_one_qubit(Circuit& c, char op, int q) {
  Gate g;
  g.kind = GateKind::one_qubit;
  g.op = op;
  g.q0 = q;
  g.error_location = true;
  c.gates.push_back(g);
}

inline void push_pauli_layer(Circuit& c, const PauliOp& w) {
  for (int q = 1; q <= w.num_qubits(); ++q)
    if (w.at(q) != 'I') push_one_qubit(c, w.at(q), q - 1);
}

inline void push_extraction(Circuit& c, const StabilizerCode& code, int round) {
  for (int i = 0; i < code.num_checks(); ++i) {
    const int anc = code.n + i;
    push_one_qubit(c, 'H', anc);
    const PauliOp& s = code.stabilizer_gens[i];
    for (int q = 1; q <= code.n; ++q) {
      if (s.at(q) == 'I') continue;
      Gate g;
      g.kind = GateKind::controlled_pauli;
      g.q0 = anc;
      g.q1 = q - 1;
      g.op = s.at(q);
      g.error_location = true;
      c.gates.push_back(g);
    }
    push_one_qubit(c, 'H', anc);
    Gate m;
    m.kind = GateKind::measure;
    m.q0 = anc;
    m.round = round;
    m.bit = i;
    c.gates.push_back(m);
  }
}

inline void push_recovery(Circuit& c, int round, int preserve) {
  Gate g;
  g.kind = GateKind::recovery;
  g.round = round;
  g.preserve = preserve;
  g.error_location = true;
  c.gates.push_back(g);
}

}  // namespace detail

// Product-state preparation, one extraction round with a fix-up that keeps the prepared
// logical eigenvalue, W, global Z(theta), W, a second extraction round and table recovery.
// Ancilla i (register index n+i) measures stabilizer generator i.
inline Circuit build_qec_circuit(const StabilizerCode& code, const CircuitOptions& opt = {}) {
  Circuit c;
  c.n_data = code.n;
  c.n_ancilla = code.num_checks();
  c.rounds = 2;
  for (int q = 0; q < code.n; ++q) {
    switch (opt.input) {
      case InputState::zero: break;
      case InputState::one: detail::push_one_qubit(c, 'X', q); break;
      case InputState::plus: detail::push_one_qubit(c, 'H', q); break;
      case InputState::minus:
        detail::push_one_qubit(c, 'X', q);
        detail::push_one_qubit(c, 'H', q);
        break;
      case InputState::plus_i:
        detail::push_one_qubit(c, 'H', q);
        detail::push_one_qubit(c, 'S', q);
        break;
      case InputState::minus_i:
        detail::push_one_qubit(c, 'X', q);
        detail::push_one_qubit(c, 'H', q);
        detail::push_one_qubit(c, 'S', q);
        break;
    }
  }
  detail::push_extraction(c, code, 0);
  detail::push_recovery(c, 0, input_axis(opt.input));
  const PauliOp w = opt.conj.value_or(PauliOp(code.n));
  if (w.num_qubits() != code.n) throw DimensionError("conjugation Pauli size does not match the code");
  detail::push_pauli_layer(c, w);
  Gate env;
  env.kind = GateKind::environment;
  env.theta = opt.theta;
  c.gates.push_back(env);
  detail::push_pauli_layer(c, w);
  detail::push_extraction(c, code, 1);
  detail::push_recovery(c, 1, 0);
  return c;
}

struct DepolarizingModel {
  double p1 = 0;
  double p2 = 0;
  static DepolarizingModel uniform(double p) { return {p, p}; }
};

inline PauliOp fault_on(int register_size, int q, int letter) {
  static constexpr char names[] = {'I', 'X', 'Y', 'Z'};
  return PauliOp::single(register_size, names[letter], q + 1);
}

// With probability p, a uniformly random non-identity Pauli on the gate's support.
template <class Rng>
std::optional<PauliOp> sample_pauli_fault(const DepolarizingModel& model, const Gate& gate, int register_size, Rng& rng) {
  if (!gate.error_location) return std::nullopt;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const bool two = gate.kind == GateKind::controlled_pauli;
  const double p = two ? model.p2 : model.p1;
  if (p <= 0 || u(rng) >= p) return std::nullopt;
  if (!two) return fault_on(register_size, gate.q0, std::uniform_int_distribution<int>(1, 3)(rng));
  const int k = std::uniform_int_distribution<int>(1, 15)(rng);
  return compose(fault_on(register_size, gate.q0, k & 3), fault_on(register_size, gate.q1, k >> 2));
}

// Trajectory executor. Ancillas are packed into as few simulated slots as their
// measure-and-reset lifetimes allow.
class CircuitRunner {
 public:
  CircuitRunner(const CodeSimulator& sim, Circuit circuit) : sim_(sim), circuit_(std::move(circuit)) {
    const int n = circuit_.n_data;
    std::map<int, int> open;
    std::set<int> free_slots;
    int slots = 0;
    auto slot_for = [&](int q) {
      if (q < n) return q;
      auto it = open.find(q);
      if (it != open.end()) return it->second;
      int s;
      if (!free_slots.empty()) {
        s = *free_slots.begin();
        free_slots.erase(free_slots.begin());
      } else {
        s = n + slots++;
      }
      open[q] = s;
      return s;
    };
    for (Gate g : circuit_.gates) {
      if (g.q0 >= 0) g.q0 = slot_for(g.q0);
      if (g.q1 >= 0) g.q1 = slot_for(g.q1);
      if (g.kind == GateKind::measure) {
        const int original = circuit_.gates[compiled_.size()].q0;
        free_slots.insert(open.at(original));
        open.erase(original);
      }
      compiled_.push_back(g);
    }
    width_ = n + slots;
    if (width_ > 24) throw DimensionError("trajectory register too large");
    const auto& code = sim_.code();
    // Logical eigenvalue each recovery must preserve is fixed by the prepared axis.
    for (int a = 1; a <= 3; ++a) axis_op_[a] = a == 1 ? code.logical_x : a == 3 ? code.logical_z : compose(code.logical_x, code.logical_z);
    flip_[1] = code.logical_z;
    flip_[2] = code.logical_z;
    flip_[3] = code.logical_x;
  }

  int simulated_width() const { return width_; }

  // Returns the data-qubit state after the final gate.
  template <class Rng>
  StateVector run(const DepolarizingModel& model, Rng& rng) const {
    const int n = circuit_.n_data;
    StateVector psi(std::size_t{1} << width_, 0.0);
    psi[0] = 1.0;
    std::vector<std::uint64_t> record(circuit_.rounds, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const Gate& g : compiled_) {
      switch (g.kind) {
        case GateKind::one_qubit: one_qubit(psi, g.op, g.q0); break;
        case GateKind::controlled_pauli: controlled(psi, g.q0, g.q1, g.op); break;
        case GateKind::measure: {
          const std::size_t b = std::size_t{1} << g.q0;
          double p1 = 0;
          for (std::size_t i = 0; i < psi.size(); ++i)
            if (i & b) p1 += std::norm(psi[i]);
          const bool one = u(rng) < p1;
          const double keep = std::sqrt(one ? p1 : 1 - p1);
          for (std::size_t i = 0; i < psi.size(); ++i) {
            if (static_cast<bool>(i & b) != one) psi[i] = 0;
            else psi[i] /= keep;
          }
          if (one) {
            record[g.round] |= std::uint64_t{1} << g.bit;
            one_qubit(psi, 'X', g.q0);
          }
          break;
        }
        case GateKind::recovery: {
          PauliOp r = sim_.decoder().recovery(record[g.round]);
          if (g.preserve && commutes(r, axis_op_[g.preserve]) < 0) r = compose(r, flip_[g.preserve]);
          for (int q = 1; q <= n; ++q) {
            if (r.at(q) == 'I') continue;
            one_qubit(psi, r.at(q), q - 1);
            Gate loc;
            loc.q0 = q - 1;
            loc.error_location = true;
            maybe_fault(psi, model, loc, rng);
          }
          continue;
        }
        case GateKind::environment: {
          const std::uint64_t data = PauliOp::mask(n);
          for (std::size_t i = 0; i < psi.size(); ++i)
            psi[i] *= std::polar(1.0, -g.theta * (n - 2 * std::popcount(i & data)));
          break;
        }
      }
      maybe_fault(psi, model, g, rng);
    }
    psi.resize(std::size_t{1} << n);
    return psi;
  }

 private:
  template <class Rng>
  void maybe_fault(StateVector& psi, const DepolarizingModel& model, const Gate& g, Rng& rng) const {
    if (auto f = sample_pauli_fault(model, g, width_, rng)) {
      StateVector tmp;
      apply_pauli(hermitian(*f), psi, tmp);
      psi.swap(tmp);
    }
  }

  static void one_qubit(StateVector& psi, char op, int q) {
    const std::size_t b = std::size_t{1} << q;
    const double r = 1 / std::sqrt(2.0);
    for (std::size_t i = 0; i < psi.size(); ++i) {
      if (i & b) continue;
      const cplx a0 = psi[i], a1 = psi[i | b];
      switch (op) {
        case 'H': psi[i] = r * (a0 + a1); psi[i | b] = r * (a0 - a1); break;
        case 'S': psi[i | b] = cplx(0, 1) * a1; break;
        case 'X': psi[i] = a1; psi[i | b] = a0; break;
        case 'Y': psi[i] = cplx(0, -1) * a1; psi[i | b] = cplx(0, 1) * a0; break;
        case 'Z': psi[i | b] = -a1; break;
        default: throw LookupError(std::string("unknown one-qubit gate ") + op);
      }
    }
  }

  static void controlled(StateVector& psi, int c, int t, char op) {
    const std::size_t cb = std::size_t{1} << c, tb = std::size_t{1} << t;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      if (!(i & cb) || (i & tb)) continue;
      const cplx a0 = psi[i], a1 = psi[i | tb];
      switch (op) {
        case 'X': psi[i] = a1; psi[i | tb] = a0; break;
        case 'Y': psi[i] = cplx(0, -1) * a1; psi[i | tb] = cplx(0, 1) * a0; break;
        case 'Z': psi[i | tb] = -a1; break;
        default: throw LookupError(std::string("unknown controlled gate ") + op);
      }
    }
  }

  const CodeSimulator& sim_;
  Circuit circuit_;
  std::vector<Gate> compiled_;
  int width_ = 0;
  std::array<PauliOp, 4> axis_op_;
  std::array<PauliOp, 4> flip_;
};

// Average over the six axis inputs of (1 + s<L>)/2 after an ideal final decode.
inline Estimate noisy_fidelity(const CodeSimulator& sim, double theta, const PauliOp& w, const DepolarizingModel& model,
                               std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw DimensionError("need at least one trial");
  if (model.p1 < 0 || model.p1 > 1 || model.p2 < 0 || model.p2 > 1) throw DimensionError("gate error rate outside [0, 1]");
  const auto& code = sim.code();
  std::vector<CircuitRunner> runners;
  std::vector<double> sign;
  runners.reserve(kAllInputs.size());
  for (InputState s : kAllInputs) {
    runners.emplace_back(sim, build_qec_circuit(code, {s, w, theta}));
    // Target eigenvalue from the noiseless product state.
    std::mt19937_64 probe(0);
    const auto ideal = CircuitRunner(sim, build_qec_circuit(code, {s, PauliOp(code.n), 0.0})).run(DepolarizingModel{}, probe);
    const double v = sim.corrected_bloch(ideal)[input_axis(s)];
    if (std::abs(std::abs(v) - 1) > 1e-9) throw StructuralError(code.name + ": product-state preparation does not give a logical eigenstate");
    sign.push_back(v > 0 ? 1.0 : -1.0);
  }
  const auto samples = parallel_trials(trials, [&](std::size_t t) {
    std::mt19937_64 rng(mix_seed(seed, t));
    const std::size_t which = t % runners.size();
    const auto out = runners[which].run(model, rng);
    const double l = sim.corrected_bloch(out)[input_axis(kAllInputs[which])];
    return 0.5 * (1 + sign[which] * l);
  });
  return summarize(samples);
}

inline Estimate noisy_fidelity(const StabilizerCode& code, double theta, const PauliOp& w, const DepolarizingModel& model,
                               std::size_t trials, std::uint64_t seed) {
  return noisy_fidelity(CodeSimulator(code), theta, w, model, trials, seed);
}

}  // namespace pauliconj
