#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "channel_sim.hpp"
#include "codes.hpp"
#include "pauli.hpp"

namespace pauliconj {

// Paulis spanning the noise expansion; a conjugation commuting with all of them acts trivially.
struct NoiseSupport {
  std::vector<PauliOp> generators;

  static NoiseSupport global_z(int n) {
    NoiseSupport s;
    for (int q = 1; q <= n; ++q) s.generators.push_back(PauliOp::single(n, 'Z', q));
    return s;
  }

  bool acts_trivially(const PauliOp& w) const {
    return std::all_of(generators.begin(), generators.end(), [&](const PauliOp& g) { return commutes(w, g) > 0; });
  }
};

struct TwirlSet {
  std::vector<PauliOp> generators;
  std::vector<PauliOp> members;
};

struct EquivClass {
  PauliOp representative;
  std::vector<PauliOp> members;
  // witness[i] maps the representative onto members[i] (up to a stabilizer);
  // empty for members that act trivially on the noise.
  std::vector<std::optional<Permutation>> witness;
};

struct ConjugationPlan {
  std::vector<PauliOp> gates;
  friend bool operator==(const ConjugationPlan&, const ConjugationPlan&) = default;
};

inline std::vector<PauliOp> reduce_generators(const StabilizerCode& code, const NoiseSupport& support) {
  std::vector<PauliOp> out;
  for (const auto& e : build_error_generators(code))
    if (!support.acts_trivially(e)) out.push_back(e);
  return out;
}

inline TwirlSet build_twirl_set(const StabilizerCode& code, const DecoderTable& decoder, const std::vector<PauliOp>& gens) {
  for (const auto& g : gens)
    if (g.num_qubits() != code.n) throw DimensionError("twirl generator size mismatch");
  std::vector<PauliOp> syn_vectors;
  for (const auto& g : gens) {
    const Syndrome s = syndrome(code, g);
    syn_vectors.push_back(PauliOp(code.n, s.bits, 0));
  }
  if (!gens.empty() && gf2_rank(syn_vectors) != static_cast<int>(gens.size()))
    throw StructuralError("twirl generators do not have independent syndromes");
  TwirlSet t{gens, {}};
  for (const auto& p : span(gens, code.n)) t.members.push_back(decoder.recovery(syndrome(code, p)));
  std::sort(t.members.begin(), t.members.end(), PauliOrder(code));
  return t;
}

inline TwirlSet build_twirl_set(const StabilizerCode& code, const std::vector<PauliOp>& gens) {
  return build_twirl_set(code, build_decoder(code), gens);
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Maps p into the twirl set if the image differs from a member by a stabilizer.
inline std::optional<int> member_index(const StabilizerCode& code, const DecoderTable& decoder,
                                       const std::map<std::uint64_t, int>& by_syndrome, const PauliOp& p) {
  const Syndrome s = syndrome(code, p);
  auto it = by_syndrome.find(s.bits);
  if (it == by_syndrome.end()) return std::nullopt;
  if (!in_stabilizer_group(code, compose(p, decoder.recovery(s)))) return std::nullopt;
  return it->second;
}

}  // namespace detail

// Orbits of the twirl set under the code's symmetry group, up to stabilizers.
// Members acting trivially on the noise join the identity class.
inline std::vector<EquivClass> equivalence_classes(const StabilizerCode& code, const DecoderTable& decoder,
                                                   const TwirlSet& twirl, const NoiseSupport& support) {
  const auto group = permutation_closure(code.symmetry_gens, code.n);
  const int m = static_cast<int>(twirl.members.size());
  std::map<std::uint64_t, int> by_syndrome;
  for (int i = 0; i < m; ++i) by_syndrome[syndrome(code, twirl.members[i]).bits] = i;

  detail::UnionFind uf(m);
  std::optional<int> identity;
  for (int i = 0; i < m; ++i)
    if (twirl.members[i].is_identity()) identity = i;
  for (int i = 0; i < m; ++i) {
    if (identity && support.acts_trivially(twirl.members[i])) uf.unite(i, *identity);
    for (const auto& g : group)
      if (auto j = detail::member_index(code, decoder, by_syndrome, permute(twirl.members[i], g))) uf.unite(i, *j);
  }

  const PauliOrder less(code);
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < m; ++i) groups[uf.find(i)].push_back(i);
  std::vector<EquivClass> out;
  for (auto& [root, idx] : groups) {
    EquivClass c;
    for (int i : idx) c.members.push_back(twirl.members[i]);
    std::sort(c.members.begin(), c.members.end(), less);
    c.representative = c.members.front();
    for (const auto& mem : c.members) {
      std::optional<Permutation> w;
      for (const auto& g : group) {
        const PauliOp img = permute(c.representative, g);
        if (syndrome(code, img) == syndrome(code, mem) && in_stabilizer_group(code, compose(img, mem))) {
          w = g;
          break;
        }
      }
      c.witness.push_back(w);
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [&](const EquivClass& a, const EquivClass& b) { return less(a.representative, b.representative); });
  return out;
}

inline std::vector<EquivClass> equivalence_classes(const StabilizerCode& code, const TwirlSet& twirl) {
  return equivalence_classes(code, build_decoder(code), twirl, NoiseSupport::global_z(code.n));
}

struct ClassReport {
  PauliOp representative;
  std::size_t size = 0;
  double fidelity = 0;
};

struct SearchReport {
  std::string code;
  double theta = 0;
  std::vector<ClassReport> classes;
  double f_twirl = 0;
  double f_none = 0;
  PauliOp w_max;
  double f_max = 0;
  // Every class within 1e-12 of F_0.
  bool all_equal = false;
};

// Evaluates one channel per class; F_T is the class-size-weighted mean (uniform over the twirl set).
inline SearchReport search_optimal(const CodeSimulator& sim, const Noise& noise, const std::vector<EquivClass>& classes) {
  const auto& code = sim.code();
  SearchReport r;
  r.code = code.name;
  if (const auto* gz = std::get_if<GlobalZRotation>(&noise)) r.theta = gz->theta;
  r.f_none = sim.effective_channel(noise, PauliOp(code.n)).fidelity();
  std::size_t total = 0;
  double weighted = 0;
  for (const auto& c : classes) {
    const double f = c.representative.is_identity() ? r.f_none : sim.effective_channel(noise, c.representative).fidelity();
    r.classes.push_back({c.representative, c.members.size(), f});
    weighted += f * static_cast<double>(c.members.size());
    total += c.members.size();
  }
  if (total == 0) throw DimensionError("no equivalence classes to search");
  r.f_twirl = weighted / static_cast<double>(total);
  double best = -1;
  for (const auto& c : r.classes) best = std::max(best, c.fidelity);
  // First class in representative order that reaches the maximum.
  for (const auto& c : r.classes)
    if (c.fidelity >= best - 1e-12) {
      r.w_max = c.representative;
      r.f_max = c.fidelity;
      break;
    }
  r.all_equal = std::all_of(r.classes.begin(), r.classes.end(),
                            [&](const ClassReport& c) { return std::abs(c.fidelity - r.f_none) < 1e-12; });
  return r;
}

// --- multi-round reduction ---------------------------------------------------

namespace detail {

inline bool plan_less(const std::vector<PauliOp>& a, const std::vector<PauliOp>& b, const PauliOrder& less) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), less);
}

}  // namespace detail

// Round 1 ranges over the stabilizer-reduced twirl set, later rounds over the span of
// noise-nontrivial single-qubit Paulis. One permutation acts on all rounds at once.
class MultiroundReducer {
 public:
  MultiroundReducer(const StabilizerCode& code, const NoiseSupport& support, int rounds)
      : code_(code), decoder_(build_decoder(code)), support_(support), rounds_(rounds), less_(code) {
    if (rounds < 1) throw DimensionError("round count must be at least 1");
    outer_ = build_twirl_set(code_, decoder_, reduce_generators(code_, support_)).members;
    std::vector<PauliOp> per_round_gens;
    for (int q = 1; q <= code.n; ++q)
      for (char c : {'X', 'Z'}) {
        const PauliOp p = PauliOp::single(code.n, c, q);
        if (!support_.acts_trivially(p)) per_round_gens.push_back(p);
      }
    if (gf2_rank(per_round_gens) > 20) throw DimensionError("per-round conjugation space too large");
    inner_ = span(per_round_gens, code.n);
    std::sort(inner_.begin(), inner_.end(), less_);
    for (int i = 0; i < static_cast<int>(outer_.size()); ++i) outer_index_[syndrome(code_, outer_[i]).bits] = i;
    group_ = permutation_closure(code.symmetry_gens, code.n);
  }

  const std::vector<PauliOp>& outer_set() const { return outer_; }
  const std::vector<PauliOp>& per_round_set() const { return inner_; }

  // Lexicographically smallest equivalent plan.
  ConjugationPlan canonical(const ConjugationPlan& plan) const {
    if (static_cast<int>(plan.gates.size()) != rounds_) throw DimensionError("plan length does not match round count");
    const auto base = normalise(plan.gates);
    auto best = base;
    for (const auto& g : group_) {
      std::vector<PauliOp> img;
      img.reserve(base.size());
      for (const auto& w : base) img.push_back(permute(w, g));
      const auto first = detail::member_index(code_, decoder_, outer_index_, img[0]);
      if (!first) continue;
      img[0] = outer_[*first];
      img = normalise(img);
      if (detail::plan_less(img, best, less_)) best = img;
    }
    return {best};
  }

  // Canonical plans, enumerated exhaustively or by seeded sampling; at most sample_budget returned.
  std::vector<ConjugationPlan> reduce(std::size_t sample_budget, std::uint64_t seed, std::size_t exhaustive_limit = 1u << 20) const {
    if (sample_budget == 0) return {};
    std::set<std::vector<PauliOp>, PlanLess> seen{PlanLess{less_}};
    const double space = static_cast<double>(outer_.size()) * std::pow(static_cast<double>(inner_.size()), rounds_ - 1);
    std::mt19937_64 rng(seed);
    if (space <= static_cast<double>(exhaustive_limit)) {
      std::vector<std::size_t> idx(rounds_, 0);
      while (true) {
        ConjugationPlan p;
        p.gates.push_back(outer_[idx[0]]);
        for (int k = 1; k < rounds_; ++k) p.gates.push_back(inner_[idx[k]]);
        seen.insert(canonical(p).gates);
        int k = rounds_ - 1;
        while (k >= 0 && ++idx[k] == (k == 0 ? outer_.size() : inner_.size())) idx[k--] = 0;
        if (k < 0) break;
      }
    } else {
      std::uniform_int_distribution<std::size_t> pick_outer(0, outer_.size() - 1), pick_inner(0, inner_.size() - 1);
      const std::size_t draws = std::max<std::size_t>(4 * sample_budget, 1024);
      for (std::size_t d = 0; d < draws && seen.size() < sample_budget; ++d) {
        ConjugationPlan p;
        p.gates.push_back(outer_[pick_outer(rng)]);
        for (int k = 1; k < rounds_; ++k) p.gates.push_back(inner_[pick_inner(rng)]);
        seen.insert(canonical(p).gates);
      }
    }
    std::vector<ConjugationPlan> out;
    if (seen.size() <= sample_budget) {
      for (const auto& s : seen) out.push_back({s});
      return out;
    }
    std::vector<std::vector<PauliOp>> all(seen.begin(), seen.end()), picked;
    std::sample(all.begin(), all.end(), std::back_inserter(picked), sample_budget, rng);
    for (auto& s : picked) out.push_back({std::move(s)});
    return out;
  }

 private:
  struct PlanLess {
    PauliOrder less;
    bool operator()(const std::vector<PauliOp>& a, const std::vector<PauliOp>& b) const {
      return detail::plan_less(a, b, less);
    }
  };

  // Round 1 reduced to its twirl-set representative; trivial rounds become I.
  std::vector<PauliOp> normalise(std::vector<PauliOp> gates) const {
    for (auto& w : gates)
      if (support_.acts_trivially(w)) w = PauliOp(code_.n);
    if (auto i = detail::member_index(code_, decoder_, outer_index_, gates[0])) gates[0] = outer_[*i];
    if (support_.acts_trivially(gates[0])) gates[0] = PauliOp(code_.n);
    return gates;
  }

  StabilizerCode code_;
  DecoderTable decoder_;
  NoiseSupport support_;
  int rounds_;
  PauliOrder less_;
  std::vector<PauliOp> outer_;
  std::vector<PauliOp> inner_;
  std::map<std::uint64_t, int> outer_index_;
  std::vector<Permutation> group_;
};

inline std::vector<ConjugationPlan> multiround_reduce(const StabilizerCode& code, const NoiseSupport& support, int rounds,
                                                      std::size_t sample_budget, std::uint64_t seed = 0) {
  return MultiroundReducer(code, support, rounds).reduce(sample_budget, seed);
}

}  // namespace pauliconj
