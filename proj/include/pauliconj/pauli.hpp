#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace pauliconj {

// Phase-free n-qubit Pauli in symplectic form. Qubit 1 is bit 0.
class PauliOp {
 public:
  static constexpr int kMaxQubits = 64;

  PauliOp() = default;
  explicit PauliOp(int n, std::uint64_t x = 0, std::uint64_t z = 0) : n_(n), x_(x), z_(z) {
    if (n < 0 || n > kMaxQubits) throw DimensionError("qubit count out of range: " + std::to_string(n));
    const std::uint64_t m = mask(n);
    if ((x & ~m) || (z & ~m)) throw DimensionError("Pauli bits beyond qubit count");
  }

  static PauliOp identity(int n) { return PauliOp(n); }

  // Single-qubit Pauli on qubit q (1-based).
  static PauliOp single(int n, char p, int q) {
    if (q < 1 || q > n) throw DimensionError("qubit index out of range: " + std::to_string(q));
    const std::uint64_t b = std::uint64_t{1} << (q - 1);
    switch (std::toupper(static_cast<unsigned char>(p))) {
      case 'I': return PauliOp(n);
      case 'X': return PauliOp(n, b, 0);
      case 'Z': return PauliOp(n, 0, b);
      case 'Y': return PauliOp(n, b, b);
      default: throw ParseError(std::string("not a Pauli letter: ") + p);
    }
  }

  int num_qubits() const { return n_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }
  std::uint64_t support() const { return x_ | z_; }
  bool is_identity() const { return (x_ | z_) == 0; }
  int weight() const { return std::popcount(x_ | z_); }

  // 'I','X','Y','Z' on qubit q (1-based).
  char at(int q) const {
    const bool xb = (x_ >> (q - 1)) & 1u, zb = (z_ >> (q - 1)) & 1u;
    return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }

  std::string to_dense() const {
    std::string s;
    s.reserve(n_);
    for (int q = 1; q <= n_; ++q) s.push_back(at(q));
    return s;
  }

  // "X1X4X7"; the identity prints as "I".
  std::string to_indexed() const {
    if (is_identity()) return "I";
    std::string s;
    for (int q = 1; q <= n_; ++q) {
      const char c = at(q);
      if (c != 'I') {
        s.push_back(c);
        s += std::to_string(q);
      }
    }
    return s;
  }

  friend bool operator==(const PauliOp&, const PauliOp&) = default;

  static std::uint64_t mask(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

inline void require_same_size(const PauliOp& a, const PauliOp& b) {
  if (a.num_qubits() != b.num_qubits())
    throw DimensionError("Pauli size mismatch: " + std::to_string(a.num_qubits()) + " vs " +
                         std::to_string(b.num_qubits()));
}

// Product up to phase.
inline PauliOp compose(const PauliOp& a, const PauliOp& b) {
  require_same_size(a, b);
  return PauliOp(a.num_qubits(), a.x_bits() ^ b.x_bits(), a.z_bits() ^ b.z_bits());
}

inline int symplectic_form(const PauliOp& a, const PauliOp& b) {
  require_same_size(a, b);
  return (std::popcount(a.x_bits() & b.z_bits()) + std::popcount(a.z_bits() & b.x_bits())) & 1;
}

// +1 if a and b commute, -1 otherwise.
inline int commutes(const PauliOp& a, const PauliOp& b) { return symplectic_form(a, b) ? -1 : 1; }

// Dense "XZZXI" form, or indexed "X1X4X7" form (needs n).
inline PauliOp parse_pauli(std::string_view text, int n = -1) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (s.empty()) throw ParseError("empty Pauli string");
  const bool dense = std::all_of(s.begin(), s.end(), [](char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; });
  if (dense && (n < 0 || static_cast<int>(s.size()) == n)) {
    const int m = static_cast<int>(s.size());
    if (m > PauliOp::kMaxQubits) throw DimensionError("Pauli string longer than 64 qubits");
    PauliOp p(m);
    for (int q = 1; q <= m; ++q) p = compose(p, PauliOp::single(m, s[q - 1], q));
    return p;
  }
  if (n < 0) throw ParseError("indexed Pauli '" + std::string(text) + "' needs a qubit count");
  if (s == "I") return PauliOp(n);
  PauliOp p(n);
  std::size_t i = 0;
  while (i < s.size()) {
    const char letter = s[i++];
    if (letter != 'X' && letter != 'Y' && letter != 'Z') throw ParseError("bad Pauli string: " + std::string(text));
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) throw ParseError("missing qubit index in: " + std::string(text));
    const int q = std::stoi(s.substr(i, j - i));
    if (q < 1 || q > n) throw DimensionError("qubit index " + std::to_string(q) + " out of range in " + std::string(text));
    const PauliOp single = PauliOp::single(n, letter, q);
    if (p.support() & single.support()) throw ParseError("qubit repeated in: " + std::string(text));
    p = compose(p, single);
    i = j;
  }
  return p;
}

// Rank over GF(2) of the symplectic vectors.
inline int gf2_rank(const std::vector<PauliOp>& ops) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;
  rows.reserve(ops.size());
  for (const auto& p : ops) rows.emplace_back(p.x_bits(), p.z_bits());
  int rank = 0;
  for (int col = 0; col < 128; ++col) {
    auto bit = [col](const std::pair<std::uint64_t, std::uint64_t>& r) {
      return col < 64 ? (r.first >> col) & 1u : (r.second >> (col - 64)) & 1u;
    };
    auto pivot = std::find_if(rows.begin() + rank, rows.end(), bit);
    if (pivot == rows.end()) continue;
    std::iter_swap(rows.begin() + rank, pivot);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) != rank && bit(rows[r])) {
        rows[r].first ^= rows[rank].first;
        rows[r].second ^= rows[rank].second;
      }
    }
    ++rank;
  }
  return rank;
}

inline bool is_independent(const std::vector<PauliOp>& ops) {
  for (std::size_t i = 1; i < ops.size(); ++i) require_same_size(ops[0], ops[i]);
  return gf2_rank(ops) == static_cast<int>(ops.size());
}

// All 2^k products; element m is the product of gens[i] for set bits i of m.
inline std::vector<PauliOp> span(const std::vector<PauliOp>& gens, int n) {
  if (gens.size() > 24) throw DimensionError("span of more than 24 generators");
  for (const auto& g : gens)
    if (g.num_qubits() != n) throw DimensionError("generator size does not match n");
  std::vector<PauliOp> out(std::size_t{1} << gens.size(), PauliOp(n));
  for (std::size_t m = 1; m < out.size(); ++m) {
    const int low = std::countr_zero(m);
    out[m] = compose(out[m & (m - 1)], gens[low]);
  }
  return out;
}

inline std::vector<PauliOp> span(const std::vector<PauliOp>& gens) {
  if (gens.empty()) throw DimensionError("span of empty list needs explicit n");
  return span(gens, gens[0].num_qubits());
}

// Qubit permutation; perm[i] is the 0-based image of qubit i.
using Permutation = std::vector<int>;

inline Permutation identity_permutation(int n) {
  Permutation p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

inline bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

// (a*b)(i) = a(b(i))
inline Permutation compose_permutations(const Permutation& a, const Permutation& b) {
  Permutation c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

inline Permutation invert_permutation(const Permutation& p) {
  Permutation inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<int>(i);
  return inv;
}

// Moves the Pauli on qubit i to qubit perm[i].
inline PauliOp permute(const PauliOp& p, const Permutation& perm) {
  if (static_cast<int>(perm.size()) != p.num_qubits()) throw DimensionError("permutation size mismatch");
  std::uint64_t x = 0, z = 0;
  for (int i = 0; i < p.num_qubits(); ++i) {
    x |= ((p.x_bits() >> i) & 1u) << perm[i];
    z |= ((p.z_bits() >> i) & 1u) << perm[i];
  }
  return PauliOp(p.num_qubits(), x, z);
}

// Group generated by gens, identity first, breadth-first order.
inline std::vector<Permutation> permutation_closure(const std::vector<Permutation>& gens, int n,
                                                    std::size_t cap = 1'000'000) {
  std::vector<Permutation> group{identity_permutation(n)};
  std::set<Permutation> seen{group[0]};
  for (std::size_t head = 0; head < group.size(); ++head) {
    for (const auto& g : gens) {
      if (static_cast<int>(g.size()) != n) throw DimensionError("symmetry generator size mismatch");
      Permutation next = compose_permutations(g, group[head]);
      if (seen.count(next)) continue;
      if (group.size() >= cap) throw StructuralError("symmetry group exceeds closure cap");
      seen.insert(next);
      group.push_back(std::move(next));
    }
  }
  return group;
}

}  // namespace pauliconj
