// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact Fourier analysis over F2^n for small n.
//
// Characters are chi_alpha(x) = (-1)^{alpha . x} and coefficients use the
// expectation inner product: fhat(alpha) = 2^{-n} sum_x f(x) chi_alpha(x).
// Both x and alpha are encoded as integers with coordinate i in bit i.

#ifndef F2SKETCH_FOURIER_HPP_
#define F2SKETCH_FOURIER_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "f2sketch/error.hpp"
#include "f2sketch/gf2.hpp"
#include "f2sketch/random.hpp"

namespace f2sketch {

constexpr std::size_t kMaxTransformBits = 24;
constexpr std::size_t kMaxExhaustiveDimensionBits = 8;

struct Spectrum {
  std::size_t n = 0;
  std::vector<double> coeffs;  // 2^n entries indexed by alpha

  double at(std::uint64_t alpha) const { return coeffs[alpha]; }

  // ||f||_2^2 = sum of squared coefficients (Parseval).
  double l2_squared() const {
    double s = 0.0;
    for (double c : coeffs) s += c * c;
    return s;
  }
};

namespace internal {

inline std::size_t log2_exact(std::size_t size) {
  if (size == 0 || !std::has_single_bit(size)) {
    throw UsageError("transform length " + std::to_string(size) +
                     " is not a power of two");
  }
  const auto n = static_cast<std::size_t>(std::countr_zero(size));
  if (n > kMaxTransformBits) {
    throw CapacityError("transform over n=" + std::to_string(n) +
                        " exceeds limit " + std::to_string(kMaxTransformBits));
  }
  return n;
}

// Unnormalized in-place butterfly.
inline void hadamard_in_place(std::vector<double>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double u = a[j];
        const double v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
    }
  }
}

}  // namespace internal

inline Spectrum wht(std::span<const double> values) {
  Spectrum s;
  s.n = internal::log2_exact(values.size());
  s.coeffs.assign(values.begin(), values.end());
  internal::hadamard_in_place(s.coeffs);
  const double scale = std::ldexp(1.0, -static_cast<int>(s.n));
  for (double& c : s.coeffs) c *= scale;
  return s;
}

// f(x) = sum_alpha fhat(alpha) chi_alpha(x).
inline std::vector<double> inverse_wht(const Spectrum& s) {
  std::vector<double> values = s.coeffs;
  internal::hadamard_in_place(values);
  return values;
}

inline double spectral_norm(const Spectrum& s) {
  double total = 0.0;
  for (double c : s.coeffs) total += std::abs(c);
  return total;
}

inline double energy_on_subspace(const Spectrum& s, const SubspaceBasis& basis) {
  if (basis.n() != s.n) throw UsageError("basis and spectrum dimensions differ");
  double energy = 0.0;
  for (const auto& alpha : span_enumerate(basis)) {
    const double c = s.coeffs[alpha.to_index()];
    energy += c * c;
  }
  return energy;
}

enum class DimensionMethod { kExhaustive, kGreedy };

inline const char* to_string(DimensionMethod m) {
  return m == DimensionMethod::kExhaustive ? "exhaustive" : "greedy";
}

struct DimensionResult {
  std::size_t dim = 0;
  SubspaceBasis basis{0};
  double captured_energy = 0.0;
  DimensionMethod method = DimensionMethod::kExhaustive;
};

namespace internal {

// A subspace of F2^n (n <= 8) in reduced row echelon form: one vector per
// pivot (its highest bit), pivots cleared from every other vector, sorted in
// decreasing order. Two subspaces are equal iff their forms are.
struct EchelonForm {
  std::vector<std::uint32_t> rows;

  bool contains(std::uint32_t v) const {
    for (std::uint32_t r : rows) {
      if (v & std::bit_floor(r)) v ^= r;
    }
    return v == 0;
  }

  // Requires !contains(v).
  EchelonForm with(std::uint32_t v) const {
    EchelonForm out = *this;
    for (std::uint32_t r : out.rows) {
      if (v & std::bit_floor(r)) v ^= r;
    }
    const std::uint32_t pivot = std::bit_floor(v);
    for (std::uint32_t& r : out.rows) {
      if (r & pivot) r ^= v;
    }
    out.rows.push_back(v);
    std::sort(out.rows.rbegin(), out.rows.rend());
    return out;
  }

  // Unique among forms of equal dimension (rows are < 256).
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (std::uint32_t r : rows) k = (k << 8) | r;
    return k;
  }

  double energy(const std::vector<double>& coeffs) const {
    std::vector<std::uint32_t> span{0};
    span.reserve(std::size_t{1} << rows.size());
    for (std::uint32_t r : rows) {
      const std::size_t sz = span.size();
      for (std::size_t i = 0; i < sz; ++i) span.push_back(span[i] ^ r);
    }
    double e = 0.0;
    for (std::uint32_t a : span) e += coeffs[a] * coeffs[a];
    return e;
  }

  SubspaceBasis to_basis(std::size_t n) const {
    std::vector<BitVector> vs;
    for (std::uint32_t r : rows) vs.push_back(BitVector::from_index(n, r));
    return SubspaceBasis(n, std::move(vs));
  }
};

// Nonzero characters carrying non-negligible energy.
inline std::vector<std::uint32_t> fourier_support(const Spectrum& s) {
  const double floor = 1e-24 * std::max(s.l2_squared(), 1e-300);
  std::vector<std::uint32_t> support;
  for (std::size_t a = 1; a < s.coeffs.size(); ++a) {
    if (s.coeffs[a] * s.coeffs[a] > floor) {
      support.push_back(static_cast<std::uint32_t>(a));
    }
  }
  return support;
}

inline double energy_tolerance(const Spectrum& s) {
  return 1e-12 * std::max(1.0, s.l2_squared());
}

// Best subspace at each dimension, searching only subspaces spanned by
// support vectors. Level d+1 is generated from level d by adjoining one
// support vector outside the span; duplicates are removed by echelon key.
// Calls visit(dim, best_energy, best_form) per level and stops when visit
// returns false or no new subspace can be formed.
template <typename Visit>
void search_support_subspaces(const Spectrum& s, Visit&& visit) {
  if (s.n > kMaxExhaustiveDimensionBits) {
    throw CapacityError("exhaustive dimension search requires n <= " +
                        std::to_string(kMaxExhaustiveDimensionBits));
  }
  const auto support = fourier_support(s);
  std::vector<EchelonForm> level{EchelonForm{}};
  for (std::size_t d = 0;; ++d) {
    double best = -1.0;
    const EchelonForm* best_form = nullptr;
    for (const auto& form : level) {
      const double e = form.energy(s.coeffs);
      if (e > best) {
        best = e;
        best_form = &form;
      }
    }
    if (!visit(d, best, *best_form)) return;
    std::vector<EchelonForm> next;
    std::unordered_set<std::uint64_t> seen;
    for (const auto& form : level) {
      for (std::uint32_t v : support) {
        if (form.contains(v)) continue;
        EchelonForm grown = form.with(v);
        if (seen.insert(grown.key()).second) next.push_back(std::move(grown));
      }
    }
    if (next.empty()) return;
    level = std::move(next);
  }
}

}  // namespace internal

// Smallest d such that some d-dimensional subspace captures target_energy.
// kExhaustive is exact (n <= 8). kGreedy adds, one at a time, the support
// vector with the largest marginal gain and reports an upper bound on d.
inline DimensionResult approx_fourier_dimension(const Spectrum& s,
                                                double target_energy,
                                                DimensionMethod method) {
  const double total = s.l2_squared();
  const double tol = internal::energy_tolerance(s);
  if (!(target_energy > 0.0) || target_energy > total + tol) {
    throw DomainError("target energy " + std::to_string(target_energy) +
                      " outside (0, ||f||^2 = " + std::to_string(total) + "]");
  }
  if (s.n > 31) throw CapacityError("dimension search requires n <= 31");

  DimensionResult result;
  result.method = method;
  if (method == DimensionMethod::kExhaustive) {
    bool found = false;
    internal::search_support_subspaces(
        s, [&](std::size_t d, double best, const internal::EchelonForm& form) {
          if (best + tol >= target_energy) {
            result.dim = d;
            result.basis = form.to_basis(s.n);
            result.captured_energy = energy_on_subspace(s, result.basis);
            found = true;
            return false;
          }
          return true;
        });
    if (!found) throw DomainError("target energy unreachable");
    return result;
  }

  const auto support = internal::fourier_support(s);
  internal::EchelonForm form;
  double captured = form.energy(s.coeffs);
  while (captured + tol < target_energy) {
    double best = -1.0;
    std::uint32_t best_v = 0;
    for (std::uint32_t v : support) {
      if (form.contains(v)) continue;
      const double e = form.with(v).energy(s.coeffs);
      if (e > best) {
        best = e;
        best_v = v;
      }
    }
    if (best < 0.0) throw DomainError("target energy unreachable");
    form = form.with(best_v);
    captured = best;
  }
  result.basis = form.to_basis(s.n);
  result.dim = result.basis.dim();
  result.captured_energy = energy_on_subspace(s, result.basis);
  return result;
}

// Maximum captured energy for every dimension 0..n (exhaustive, n <= 8),
// with a witnessing basis. Past the rank of the support the best subspace is
// the support span itself.
inline std::vector<DimensionResult> best_subspaces_by_dimension(const Spectrum& s) {
  std::vector<DimensionResult> out;
  internal::search_support_subspaces(
      s, [&](std::size_t d, double, const internal::EchelonForm& form) {
        DimensionResult r;
        r.dim = d;
        r.basis = form.to_basis(s.n);
        r.captured_energy = energy_on_subspace(s, r.basis);
        out.push_back(std::move(r));
        return true;
      });
  while (out.size() < s.n + 1) out.push_back(out.back());
  return out;
}

struct HockeyStickStats {
  double l2_squared = 0.0;  // ||hs||_2^2
  double c_empty = 0.0;     // hs^(empty)
  double c_full = 0.0;      // hs^([n])
  double middle_energy = 0.0;
};

// Closed forms for hs_alpha(x) = min(alpha, (2 alpha / n) |x|), n odd.
// With S1 = sum_{i <= n/2} i C(n,i) and S2 = sum_{i <= n/2} i^2 C(n,i):
//   c_empty   = alpha (n 2^{n-1} + 2 S1) / (n 2^n)
//   l2        = alpha^2 (n^2 2^{n-1} + 4 S2) / (n^2 2^n)
//   middle    = alpha^2 [(n^2 2^{n-1} + 4 S2) 2^n - (n 2^{n-1} + 2 S1)^2]
//               / (n^2 2^{2n})
// Numerators are exact 128-bit integers. For odd n >= 3 the alternating
// binomial sums cancel and c_full is exactly zero; n = 1 is handled apart.
inline HockeyStickStats hockey_stick_spectrum_stats(int n, double alpha) {
  if (n <= 0 || n % 2 == 0) throw UsageError("hockey stick requires odd n");
  if (n > 39) throw CapacityError("hockey stick closed form requires n <= 39");
  using u128 = uint128_t;
  using i128 = int128_t;
  u128 s1 = 0;
  u128 s2 = 0;
  u128 binom = 1;  // C(n, i)
  for (int i = 0; i <= n / 2; ++i) {
    s1 += static_cast<u128>(i) * binom;
    s2 += static_cast<u128>(i) * static_cast<u128>(i) * binom;
    binom = binom * static_cast<u128>(n - i) / static_cast<u128>(i + 1);
  }
  const auto nn = static_cast<u128>(n);
  const u128 half = u128{1} << (n - 1);
  const u128 full = u128{1} << n;
  const u128 sum_num = nn * half + 2 * s1;             // / (n 2^n)
  const u128 sq_num = nn * nn * half + 4 * s2;         // / (n^2 2^n)
  const i128 middle_num = static_cast<i128>(sq_num * full) -
                          static_cast<i128>(sum_num * sum_num);

  using ld = long double;
  const ld a = alpha;
  HockeyStickStats st;
  st.c_empty = static_cast<double>(a * static_cast<ld>(sum_num) /
                                   (static_cast<ld>(nn) * static_cast<ld>(full)));
  st.l2_squared = static_cast<double>(
      a * a * static_cast<ld>(sq_num) /
      (static_cast<ld>(nn) * static_cast<ld>(nn) * static_cast<ld>(full)));
  if (n == 1) {
    // hs(x) = alpha x_1: the top coefficient is the only nonempty one.
    st.c_full = -alpha / 2.0;
    st.middle_energy = 0.0;
    return st;
  }
  st.c_full = 0.0;
  st.middle_energy = static_cast<double>(
      a * a * static_cast<ld>(middle_num) /
      (static_cast<ld>(nn) * static_cast<ld>(nn) * static_cast<ld>(full) *
       static_cast<ld>(full)));
  return st;
}

}  // namespace f2sketch

#endif  // F2SKETCH_FOURIER_HPP_
