#pragma once

// Reference implementations for the tests. Pauli strings are handled as plain text and
// states as dense vectors; nothing here calls into the library's simulation code.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;

// Dense string, qubit 1 first. Qubit q sits at bit q-1 of the basis index.
inline Vec act(const std::string& p, const Vec& v) {
  const std::size_t dim = static_cast<std::size_t>(v.size());
  Vec out = Vec::Zero(v.size());
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t j = i;
    cplx amp = 1;
    for (std::size_t q = 0; q < p.size(); ++q) {
      const bool bit = (i >> q) & 1u;
      switch (p[q]) {
        case 'X': j ^= std::size_t{1} << q; break;
        case 'Y':
          j ^= std::size_t{1} << q;
          amp *= bit ? cplx(0, -1) : cplx(0, 1);
          break;
        case 'Z':
          if (bit) amp = -amp;
          break;
        default: break;
      }
    }
    out[static_cast<Eigen::Index>(j)] += amp * v[static_cast<Eigen::Index>(i)];
  }
  return out;
}

inline bool anticommute(const std::string& a, const std::string& b) {
  int c = 0;
  for (std::size_t q = 0; q < a.size(); ++q)
    if (a[q] != 'I' && b[q] != 'I' && a[q] != b[q]) ++c;
  return c % 2;
}

inline char mul(char a, char b) {
  if (a == 'I') return b;
  if (b == 'I') return a;
  if (a == b) return 'I';
  const std::string s = "XYZ";
  return s[3 - s.find(a) - s.find(b)];
}

inline std::string product(const std::string& a, const std::string& b) {
  std::string s(a.size(), 'I');
  for (std::size_t q = 0; q < a.size(); ++q) s[q] = mul(a[q], b[q]);
  return s;
}

inline int weight(const std::string& p) {
  int w = 0;
  for (char c : p) w += c != 'I';
  return w;
}

inline std::uint64_t syndrome(const std::vector<std::string>& stabs, const std::string& p) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < stabs.size(); ++i)
    if (anticommute(stabs[i], p)) m |= std::uint64_t{1} << i;
  return m;
}

inline std::string from_index(std::uint64_t k, int n) {
  std::string s(n, 'I');
  for (int q = 0; q < n; ++q) s[q] = "IXYZ"[(k >> (2 * q)) & 3u];
  return s;
}

// Tie-break: rank the qubits by priority (0-based), read X then Z bits at those ranks.
inline std::pair<std::uint64_t, std::uint64_t> key(const std::string& p, const std::vector<int>& priority) {
  std::uint64_t x = 0, z = 0;
  for (std::size_t r = 0; r < priority.size(); ++r) {
    const char c = p[priority[r]];
    if (c == 'X' || c == 'Y') x |= std::uint64_t{1} << r;
    if (c == 'Z' || c == 'Y') z |= std::uint64_t{1} << r;
  }
  return {x, z};
}

// Minimum-weight Pauli for every syndrome, by scanning all 4^n strings.
inline std::map<std::uint64_t, std::string> decoder(const std::vector<std::string>& stabs, int n,
                                                    const std::vector<int>& priority) {
  std::map<std::uint64_t, std::string> best;
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  for (std::uint64_t k = 0; k < total; ++k) {
    const std::string p = from_index(k, n);
    const std::uint64_t m = syndrome(stabs, p);
    auto it = best.find(m);
    if (it == best.end()) {
      best[m] = p;
      continue;
    }
    const int wp = weight(p), wb = weight(it->second);
    if (wp < wb || (wp == wb && key(p, priority) < key(it->second, priority))) it->second = p;
  }
  return best;
}

struct Code {
  int n = 0;
  std::vector<std::string> stabs;
  std::string lx, lz;
  std::vector<int> priority;
};

inline Vec project_code(const Code& c, Vec v) {
  for (const auto& s : c.stabs) v = 0.5 * (v + act(s, v));
  return v;
}

// |0_L> from the first computational basis state with nonzero projection.
inline Vec zero_logical(const Code& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.n;
  for (Eigen::Index k = 0; k < dim; ++k) {
    Vec v = Vec::Zero(dim);
    v[k] = 1;
    v = project_code(c, v);
    v = 0.5 * (v + act(c.lz, v));
    if (v.norm() > 1e-6) return v / v.norm();
  }
  return {};
}

inline Vec global_z(int n, double theta, const Vec& v) {
  Vec out = v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const int ones = __builtin_popcountll(static_cast<unsigned long long>(i));
    out[i] *= std::polar(1.0, -theta * (n - 2 * ones));
  }
  return out;
}

inline Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd p;
  switch (k) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: p << 1, 0, 0, -1; break;
  }
  return p;
}

// Logical Kraus operator per syndrome: K_m(a, b) = <a_L| R_m Pi_m U |b_L>.
template <class U>
std::vector<Eigen::Matrix2cd> kraus(const Code& c, const std::map<std::uint64_t, std::string>& dec, U&& u) {
  const Vec z0 = zero_logical(c);
  const Vec z1 = act(c.lx, z0);
  const Vec in[2] = {u(z0), u(z1)};
  std::vector<Eigen::Matrix2cd> out;
  const std::uint64_t count = std::uint64_t{1} << c.stabs.size();
  for (std::uint64_t m = 0; m < count; ++m) {
    Eigen::Matrix2cd k;
    for (int b = 0; b < 2; ++b) {
      Vec v = in[b];
      for (std::size_t i = 0; i < c.stabs.size(); ++i) {
        const double s = ((m >> i) & 1u) ? -1.0 : 1.0;
        v = 0.5 * (v + s * act(c.stabs[i], v));
      }
      v = act(dec.at(m), v);
      k(0, b) = z0.dot(v);
      k(1, b) = z1.dot(v);
    }
    out.push_back(k);
  }
  return out;
}

inline Eigen::Matrix4d ptm_from_kraus(const std::vector<Eigen::Matrix2cd>& ks) {
  Eigen::Matrix4d r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
      for (const auto& k : ks) out += k * pauli(j) * k.adjoint();
      r(i, j) = 0.5 * (pauli(i) * out).trace().real();
    }
  return r;
}

// Effective logical PTM for global Z(theta) sandwiched by the Pauli string w.
inline Eigen::Matrix4d global_z_channel(const Code& c, const std::map<std::uint64_t, std::string>& dec, double theta,
                                        const std::string& w) {
  return ptm_from_kraus(kraus(c, dec, [&](const Vec& v) { return act(w, global_z(c.n, theta, act(w, v))); }));
}

inline double fidelity(const Eigen::Matrix4d& r) { return (r.trace() + 2) / 6; }

}  // namespace oracle
