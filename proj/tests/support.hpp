#pragma once

#include "oracle.hpp"
#include "pauliconj/codes.hpp"

// Plain-string copy of a registry code for the reference implementations.
inline oracle::Code to_oracle(const pauliconj::StabilizerCode& c) {
  oracle::Code o;
  o.n = c.n;
  for (const auto& s : c.stabilizer_gens) o.stabs.push_back(s.to_dense());
  o.lx = c.logical_x.to_dense();
  o.lz = c.logical_z.to_dense();
  o.priority = c.priority();
  return o;
}

inline const std::map<std::uint64_t, std::string>& oracle_decoder(const std::string& name) {
  static std::map<std::string, std::map<std::uint64_t, std::string>> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    const auto o = to_oracle(pauliconj::registry(name));
    it = cache.emplace(name, oracle::decoder(o.stabs, o.n, o.priority)).first;
  }
  return it->second;
}
