#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "pauli.hpp"

namespace pauliconj {

struct StabilizerCode {
  std::string name;
  int n = 0;
  std::vector<PauliOp> stabilizer_gens;
  PauliOp logical_x;
  PauliOp logical_z;
  std::vector<Permutation> symmetry_gens;
  // Qubit scan and tie-break preference, most preferred first (0-based). Empty means index order.
  std::vector<int> qubit_priority;

  int num_checks() const { return static_cast<int>(stabilizer_gens.size()); }

  std::vector<int> priority() const {
    if (!qubit_priority.empty()) return qubit_priority;
    return identity_permutation(n);
  }
};

// Bit i (0-based) holds the outcome of stabilizer generator i+1.
struct Syndrome {
  std::uint64_t bits = 0;
  int size = 0;

  bool is_trivial() const { return bits == 0; }
  // Generator 1 leftmost.
  std::string to_string() const {
    std::string s(size, '0');
    for (int i = 0; i < size; ++i)
      if ((bits >> i) & 1u) s[i] = '1';
    return s;
  }
  friend bool operator==(const Syndrome&, const Syndrome&) = default;
};

inline Syndrome syndrome(const StabilizerCode& code, const PauliOp& p) {
  if (p.num_qubits() != code.n)
    throw DimensionError("Pauli on " + std::to_string(p.num_qubits()) + " qubits, code " + code.name + " has " +
                         std::to_string(code.n));
  Syndrome s{0, code.num_checks()};
  for (int i = 0; i < code.num_checks(); ++i)
    if (symplectic_form(p, code.stabilizer_gens[i])) s.bits |= std::uint64_t{1} << i;
  return s;
}

inline bool in_stabilizer_group(const StabilizerCode& code, const PauliOp& p) {
  if (!syndrome(code, p).is_trivial()) return false;
  std::vector<PauliOp> ext = code.stabilizer_gens;
  ext.push_back(p);
  return gf2_rank(ext) == code.num_checks();
}

enum class PauliClass { stabilizer, logical, error };

inline const char* to_string(PauliClass c) {
  switch (c) {
    case PauliClass::stabilizer: return "stabilizer";
    case PauliClass::logical: return "logical";
    default: return "error";
  }
}

inline PauliClass classify(const StabilizerCode& code, const PauliOp& p) {
  if (!syndrome(code, p).is_trivial()) return PauliClass::error;
  return in_stabilizer_group(code, p) ? PauliClass::stabilizer : PauliClass::logical;
}

// Checks every StabilizerCode invariant; throws StructuralError naming the first violation.
inline void validate(const StabilizerCode& code) {
  auto fail = [&](const std::string& what) { throw StructuralError(code.name + ": " + what); };
  if (code.n < 1 || code.n > 16) fail("qubit count must be in 1..16");
  auto check_size = [&](const PauliOp& p, const std::string& what) {
    if (p.num_qubits() != code.n) fail(what + " has wrong qubit count");
  };
  for (const auto& s : code.stabilizer_gens) check_size(s, "stabilizer " + s.to_dense());
  check_size(code.logical_x, "logical_x");
  check_size(code.logical_z, "logical_z");
  if (code.num_checks() != code.n - 1) fail("expected n-1 stabilizer generators");
  if (!is_independent(code.stabilizer_gens)) fail("stabilizer generators are dependent");
  for (int i = 0; i < code.num_checks(); ++i)
    for (int j = i + 1; j < code.num_checks(); ++j)
      if (commutes(code.stabilizer_gens[i], code.stabilizer_gens[j]) < 0)
        fail("generators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " anticommute");
  if (!syndrome(code, code.logical_x).is_trivial()) fail("logical_x anticommutes with a stabilizer");
  if (!syndrome(code, code.logical_z).is_trivial()) fail("logical_z anticommutes with a stabilizer");
  if (commutes(code.logical_x, code.logical_z) > 0) fail("logical_x and logical_z commute");
  if (in_stabilizer_group(code, code.logical_x) || in_stabilizer_group(code, code.logical_z))
    fail("logical operator lies in the stabilizer group");
  for (const auto& perm : code.symmetry_gens) {
    if (static_cast<int>(perm.size()) != code.n || !is_permutation(perm)) fail("malformed symmetry permutation");
    for (const auto& s : code.stabilizer_gens)
      if (!in_stabilizer_group(code, permute(s, perm))) fail("symmetry does not preserve the stabilizer group");
  }
  if (!code.qubit_priority.empty()) {
    if (static_cast<int>(code.qubit_priority.size()) != code.n || !is_permutation(code.qubit_priority))
      fail("qubit_priority must be a permutation of the qubits");
  }
}

// Smaller key wins ties between equal-weight Paulis. Qubit at priority rank r sits at bit r.
inline std::pair<std::uint64_t, std::uint64_t> tie_break_key(const PauliOp& p, const std::vector<int>& priority) {
  std::uint64_t x = 0, z = 0;
  for (std::size_t r = 0; r < priority.size(); ++r) {
    x |= ((p.x_bits() >> priority[r]) & 1u) << r;
    z |= ((p.z_bits() >> priority[r]) & 1u) << r;
  }
  return {x, z};
}

// (weight, tie-break key) ordering used for every "smallest representative" choice.
struct PauliOrder {
  std::vector<int> priority;
  explicit PauliOrder(const StabilizerCode& code) : priority(code.priority()) {}
  bool operator()(const PauliOp& a, const PauliOp& b) const {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return tie_break_key(a, priority) < tie_break_key(b, priority);
  }
};

// Single-qubit errors that each flip exactly one new check, grown frontier by frontier.
inline std::vector<PauliOp> build_error_generators(const StabilizerCode& code) {
  const int s = code.num_checks();
  const std::vector<int> order = code.priority();
  std::vector<PauliOp> candidates;
  for (int q : order) {
    candidates.push_back(PauliOp::single(code.n, 'X', q + 1));
    candidates.push_back(PauliOp::single(code.n, 'Z', q + 1));
  }
  std::uint64_t covered = 0;  // S_E as a check mask
  std::vector<PauliOp> gens;
  const std::uint64_t all = PauliOp::mask(s);

  auto covered_support = [&] {
    std::uint64_t sup = 0;
    for (int i = 0; i < s; ++i)
      if ((covered >> i) & 1u) sup |= code.stabilizer_gens[i].support();
    return sup;
  };

  for (int fails = 1; fails <= s && covered != all; ++fails) {
    bool added = true;
    while (added && covered != all) {
      added = false;
      const std::uint64_t allowed = fails == 1 ? PauliOp::mask(code.n) : covered_support();
      for (const auto& c : candidates) {
        if (!(c.support() & allowed)) continue;
        const std::uint64_t viol = syndrome(code, c).bits;
        if (std::popcount(viol) != fails) continue;
        const std::uint64_t fresh = viol & ~covered;
        if (std::popcount(fresh) != 1) continue;
        gens.push_back(c);
        covered |= viol;
        added = true;
        if (fails > 1) break;  // frontier grew; rescan with the new support
      }
    }
  }
  if (covered != all) {
    std::string stalled;
    for (int i = 0; i < s; ++i)
      if (!((covered >> i) & 1u)) stalled += (stalled.empty() ? "" : ",") + std::to_string(i + 1);
    throw StructuralError(code.name + ": error-generator construction stalled; uncovered checks {" + stalled + "}");
  }
  return gens;
}

class DecoderTable {
 public:
  DecoderTable() = default;
  DecoderTable(int num_checks, std::vector<PauliOp> table) : checks_(num_checks), table_(std::move(table)) {}

  const PauliOp& recovery(const Syndrome& m) const {
    if (m.size != checks_) throw DimensionError("syndrome length mismatch");
    return table_.at(m.bits);
  }
  const PauliOp& recovery(std::uint64_t bits) const { return table_.at(bits); }
  std::size_t size() const { return table_.size(); }
  int num_checks() const { return checks_; }

 private:
  int checks_ = 0;
  std::vector<PauliOp> table_;
};

// Lowest-weight Pauli per syndrome, ties broken by tie_break_key.
inline DecoderTable build_decoder(const StabilizerCode& code) {
  const int s = code.num_checks();
  if (s > 20) throw DimensionError("decoder table too large");
  const std::size_t total = std::size_t{1} << s;
  std::vector<std::optional<PauliOp>> best(total);
  std::size_t filled = 0;
  const PauliOrder less(code);

  std::vector<std::uint64_t> single_x(code.n), single_z(code.n);
  for (int q = 0; q < code.n; ++q) {
    single_x[q] = syndrome(code, PauliOp::single(code.n, 'X', q + 1)).bits;
    single_z[q] = syndrome(code, PauliOp::single(code.n, 'Z', q + 1)).bits;
  }

  for (int w = 0; w <= code.n && filled < total; ++w) {
    // Choose a support of size w, then one of 3^w letter assignments.
    std::vector<int> idx(w);
    for (int i = 0; i < w; ++i) idx[i] = i;
    while (true) {
      std::size_t combos = 1;
      for (int i = 0; i < w; ++i) combos *= 3;
      for (std::size_t a = 0; a < combos; ++a) {
        std::uint64_t x = 0, z = 0, syn = 0;
        std::size_t digits = a;
        for (int i = 0; i < w; ++i) {
          const int letter = static_cast<int>(digits % 3);  // 0 X, 1 Y, 2 Z
          digits /= 3;
          const std::uint64_t b = std::uint64_t{1} << idx[i];
          if (letter != 2) { x |= b; syn ^= single_x[idx[i]]; }
          if (letter != 0) { z |= b; syn ^= single_z[idx[i]]; }
        }
        const PauliOp p(code.n, x, z);
        auto& slot = best[syn];
        if (!slot) {
          slot = p;
          ++filled;
        } else if (slot->weight() == w && less(p, *slot)) {
          slot = p;
        }
      }
      int k = w - 1;
      while (k >= 0 && idx[k] == code.n - w + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int i = k + 1; i < w; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  std::vector<PauliOp> table;
  table.reserve(total);
  for (auto& e : best) table.push_back(*e);
  return DecoderTable(s, std::move(table));
}

// --- registry -------------------------------------------------------------

namespace detail {

inline PauliOp typed(int n, char letter, std::initializer_list<int> qubits) {
  PauliOp p(n);
  for (int q : qubits) p = compose(p, PauliOp::single(n, letter, q));
  return p;
}

inline PauliOp all_of(int n, char letter) {
  PauliOp p(n);
  for (int q = 1; q <= n; ++q) p = compose(p, PauliOp::single(n, letter, q));
  return p;
}

// 1-based cycle notation to a 0-based image array.
inline Permutation cycles(int n, std::initializer_list<std::initializer_list<int>> cs) {
  Permutation p = identity_permutation(n);
  for (const auto& c : cs) {
    std::vector<int> v(c);
    for (std::size_t i = 0; i < v.size(); ++i) p[v[i] - 1] = v[(i + 1) % v.size()] - 1;
  }
  return p;
}

inline StabilizerCode make_steane() {
  const int n = 7;
  StabilizerCode c;
  c.name = "steane";
  c.n = n;
  for (char t : {'X', 'Z'}) {
    c.stabilizer_gens.push_back(typed(n, t, {1, 4, 6, 7}));
    c.stabilizer_gens.push_back(typed(n, t, {2, 4, 5, 7}));
    c.stabilizer_gens.push_back(typed(n, t, {3, 5, 6, 7}));
  }
  c.logical_x = all_of(n, 'X');
  c.logical_z = all_of(n, 'Z');
  // Generate the order-168 automorphism group of the Fano plane on these plaquettes.
  c.symmetry_gens = {cycles(n, {{3, 5}, {6, 7}}), cycles(n, {{1, 2, 3}, {4, 5, 6}})};
  return c;
}

inline StabilizerCode make_five_qubit() {
  const int n = 5;
  StabilizerCode c;
  c.name = "five_qubit";
  c.n = n;
  for (const char* s : {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"}) c.stabilizer_gens.push_back(parse_pauli(s));
  c.logical_x = all_of(n, 'X');
  c.logical_z = all_of(n, 'Z');
  c.symmetry_gens = {cycles(n, {{1, 2, 3, 4, 5}})};
  return c;
}

// Rows {1,2,3},{4,5,6},{7,8,9}; symmetric group within rows and across rows.
inline std::vector<Permutation> shor_symmetries() {
  const int n = 9;
  return {cycles(n, {{1, 2}}), cycles(n, {{2, 3}}), cycles(n, {{4, 5}}), cycles(n, {{5, 6}}),
          cycles(n, {{7, 8}}), cycles(n, {{8, 9}}), cycles(n, {{1, 4}, {2, 5}, {3, 6}}),
          cycles(n, {{4, 7}, {5, 8}, {6, 9}})};
}

// long_type on the two weight-6 row checks, short_type on the in-row pairs.
inline StabilizerCode make_shor(const std::string& name, char long_type, char short_type) {
  const int n = 9;
  StabilizerCode c;
  c.name = name;
  c.n = n;
  std::vector<PauliOp> rows = {typed(n, long_type, {1, 2, 3, 4, 5, 6}), typed(n, long_type, {4, 5, 6, 7, 8, 9})};
  std::vector<PauliOp> pairs;
  for (int i : {1, 2, 4, 5, 7, 8}) pairs.push_back(typed(n, short_type, {i, i + 1}));
  // X-type checks first.
  if (long_type == 'X') {
    c.stabilizer_gens = rows;
    c.stabilizer_gens.insert(c.stabilizer_gens.end(), pairs.begin(), pairs.end());
  } else {
    c.stabilizer_gens = pairs;
    c.stabilizer_gens.insert(c.stabilizer_gens.end(), rows.begin(), rows.end());
  }
  c.logical_x = all_of(n, 'X');
  c.logical_z = all_of(n, 'Z');
  c.symmetry_gens = shor_symmetries();
  return c;
}

// Distance-3 rotated surface code on a row-major 3x3 grid:
//   1 2 3
//   4 5 6
//   7 8 9
// X plaquettes {1,2,4,5},{5,6,8,9}; X boundary {4,7},{3,6}.
// Z plaquettes {2,3,5,6},{4,5,7,8}; Z boundary {1,2},{8,9}.
// Ties prefer corners, then edges, then the centre.
inline StabilizerCode make_surface3() {
  const int n = 9;
  StabilizerCode c;
  c.name = "surface3";
  c.n = n;
  c.stabilizer_gens = {typed(n, 'X', {1, 2, 4, 5}), typed(n, 'X', {5, 6, 8, 9}), typed(n, 'X', {4, 7}),
                       typed(n, 'X', {3, 6}),       typed(n, 'Z', {1, 2}),       typed(n, 'Z', {2, 3, 5, 6}),
                       typed(n, 'Z', {4, 5, 7, 8}), typed(n, 'Z', {8, 9})};
  c.logical_x = all_of(n, 'X');
  c.logical_z = all_of(n, 'Z');
  c.symmetry_gens = {cycles(n, {{1, 9}, {2, 8}, {3, 7}, {4, 6}}), cycles(n, {{1, 2}}), cycles(n, {{8, 9}})};
  c.qubit_priority = {0, 2, 6, 8, 1, 3, 5, 7, 4};
  return c;
}

}  // namespace detail

inline std::vector<std::string> registry_names() { return {"five_qubit", "steane", "shor_z", "shor_x", "surface3"}; }

inline StabilizerCode registry(const std::string& name) {
  StabilizerCode c;
  if (name == "steane") c = detail::make_steane();
  else if (name == "five_qubit") c = detail::make_five_qubit();
  else if (name == "shor_z") c = detail::make_shor("shor_z", 'X', 'Z');
  else if (name == "shor_x") c = detail::make_shor("shor_x", 'Z', 'X');
  else if (name == "surface3") c = detail::make_surface3();
  else throw LookupError("unknown code '" + name + "'");
  validate(c);
  return c;
}

}  // namespace pauliconj
