#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "cho/errors.hpp"
#include "cho/polyalg.hpp"

namespace cho {

/// Largest n1 + n2 the enumerator accepts. Beyond it the common denominator
/// (2N)! 2^(2N) no longer fits the 64-bit exact accumulator.
inline constexpr int kMaxCap = 8;

/// Exponents (i, j, k, l, r) of the kernel monomial u^i v^j w^k t^l s^r.
struct PrincipalIndex
{
  int i = 0;
  int j = 0;
  int k = 0;
  int l = 0;
  int r = 0;

  int total() const { return i + j + k + l + r; }
  friend auto operator<=>(const PrincipalIndex&, const PrincipalIndex&) = default;
};

/// One coefficient C_{n1 n2}(i, j, k, l, r). The value is rational; it is kept
/// both exactly (numerator / denominator, reduced) and as a double.
struct CoefficientTerm
{
  PrincipalIndex index;
  double value = 0.0;
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
};

using CoefficientTable = std::vector<CoefficientTerm>;

namespace detail {

enum class Family : std::uint8_t { u = 0, v, w, t, s };

/// A mixed term z_a z_b of the generating exponent. With the common factor
/// 2/rho pulled out, every mixed term carries weight +-1 times its kernel
/// parameter; each square z_a^2 carries +-u/2 (alpha squares +, beta squares -).
struct CrossTerm
{
  Family family;
  std::uint8_t a;
  std::uint8_t b;
  bool negative;
};

// Ordered as the nested label chains: the u list matches the parts
// (i - i1), (i1 - i2), (i2 - i3), (i3 - i4); the t list the parts
// (l - l1) ... (l6 - l7), l7; and likewise for v, w, s.
inline constexpr std::array<CrossTerm, 28> kCrossTerms = {{
    // u
    {Family::u, beta_slot(2), beta_slot(4), false},
    {Family::u, beta_slot(1), beta_slot(3), false},
    {Family::u, alpha_slot(2), alpha_slot(4), true},
    {Family::u, alpha_slot(1), alpha_slot(3), true},
    // v
    {Family::v, beta_slot(2), beta_slot(3), false},
    {Family::v, beta_slot(1), beta_slot(4), false},
    {Family::v, alpha_slot(3), alpha_slot(4), false},
    {Family::v, alpha_slot(1), alpha_slot(2), false},
    // w
    {Family::w, alpha_slot(1), alpha_slot(4), false},
    {Family::w, beta_slot(3), beta_slot(4), false},
    {Family::w, beta_slot(1), beta_slot(2), false},
    {Family::w, alpha_slot(2), alpha_slot(3), false},
    // t
    {Family::t, alpha_slot(1), beta_slot(4), false},
    {Family::t, alpha_slot(1), beta_slot(2), true},
    {Family::t, alpha_slot(4), beta_slot(3), true},
    {Family::t, alpha_slot(4), beta_slot(1), false},
    {Family::t, alpha_slot(3), beta_slot(4), true},
    {Family::t, alpha_slot(3), beta_slot(2), false},
    {Family::t, alpha_slot(2), beta_slot(1), true},
    {Family::t, alpha_slot(2), beta_slot(3), false},
    // s
    {Family::s, alpha_slot(1), beta_slot(3), true},
    {Family::s, alpha_slot(1), beta_slot(1), false},
    {Family::s, alpha_slot(4), beta_slot(4), false},
    {Family::s, alpha_slot(4), beta_slot(2), true},
    {Family::s, alpha_slot(3), beta_slot(1), true},
    {Family::s, alpha_slot(2), beta_slot(2), false},
    {Family::s, alpha_slot(2), beta_slot(4), true},
    {Family::s, alpha_slot(3), beta_slot(3), false},
}};

using wide_int = __int128;

inline wide_int factorial(int n)
{
  wide_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline wide_int gcd(wide_int a, wide_int b)
{
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const wide_int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Depth-first enumeration of the secondary labels.
///
/// Every admissible assignment gives each of the 28 mixed terms a
/// multiplicity ("part"). The per-variable degree constraints then fix the
/// eight square parts: variable z needs total degree n_z, so its square part
/// is (n_z - mixed degree of z) / 2, which must be a non-negative integer.
/// The summand is
///     (-1)^(negative parts + beta squares) 2^(-sum of squares) / prod(parts!)
/// and its principal index is (u mixed + squares, v, w, t, s).
///
/// Accumulation is exact: every summand is scaled by D = (2N)! 2^(2N), which
/// turns it into a signed multinomial times a power of two.
class CoefficientEnumerator
{
 public:
  CoefficientEnumerator(int n1, int n2, std::optional<PrincipalIndex> only, bool pair_factorials)
      : n_total_(n1 + n2), only_(only), pair_factorials_(pair_factorials)
  {
    for (int a = 1; a <= 4; ++a) {
      remaining_[alpha_slot(a)] = n1;
      remaining_[beta_slot(a)] = n2;
    }
    const int budget = 2 * n_total_;
    if (only_) {
      family_cap_ = {only_->i, only_->j, only_->k, only_->l, only_->r};
    } else {
      family_cap_.fill(budget);
    }
    last_touch_.fill(-1);
    for (std::size_t t = 0; t < kCrossTerms.size(); ++t) {
      last_touch_[kCrossTerms[t].a] = static_cast<int>(t);
      last_touch_[kCrossTerms[t].b] = static_cast<int>(t);
    }
    scale_ = factorial(budget) * (wide_int{1} << budget);
  }

  /// Accumulated numerators (scaled by D) for every principal index reached.
  std::map<PrincipalIndex, wide_int> run()
  {
    sums_.clear();
    dfs(0);
    return sums_;
  }

  wide_int scale() const { return scale_; }

 private:
  void dfs(std::size_t t)
  {
    if (t == kCrossTerms.size()) {
      leaf();
      return;
    }
    const auto& term = kCrossTerms[t];
    const auto fam = static_cast<std::size_t>(term.family);
    const int limit = std::min({remaining_[term.a], remaining_[term.b],
                                family_cap_[fam] - family_count_[fam]});
    for (int m = 0; m <= limit; ++m) {
      parts_[t] = m;
      remaining_[term.a] -= m;
      remaining_[term.b] -= m;
      family_count_[fam] += m;
      if (term.negative) negative_parity_ += m;

      // Once a variable sees its last mixed term its square part is fixed;
      // an odd remainder can never be absorbed.
      const bool ok = (last_touch_[term.a] != static_cast<int>(t) || remaining_[term.a] % 2 == 0) &&
                      (last_touch_[term.b] != static_cast<int>(t) || remaining_[term.b] % 2 == 0);
      if (ok) dfs(t + 1);

      remaining_[term.a] += m;
      remaining_[term.b] += m;
      family_count_[fam] -= m;
      if (term.negative) negative_parity_ -= m;
    }
    parts_[t] = 0;
  }

  void leaf()
  {
    int squares = 0;
    int beta_squares = 0;
    std::array<int, kFormalVariables> square_parts{};
    for (std::size_t z = 0; z < kFormalVariables; ++z) {
      if (remaining_[z] < 0 || remaining_[z] % 2 != 0) return;
      square_parts[z] = remaining_[z] / 2;
      squares += square_parts[z];
      if (z >= beta_slot(1)) beta_squares += square_parts[z];
    }

    const PrincipalIndex index{family_count_[0] + squares, family_count_[1], family_count_[2],
                               family_count_[3], family_count_[4]};
    if (index.total() != 2 * n_total_) return;
    if (only_ && index != *only_) return;

    // (2N)! / prod(parts!) stays integral after each division.
    wide_int weight = factorial(2 * n_total_);
    for (std::size_t t = 0; t < kCrossTerms.size(); ++t) {
      const auto fam = kCrossTerms[t].family;
      if (!pair_factorials_ && (fam == Family::v || fam == Family::w)) continue;
      weight /= factorial(parts_[t]);
    }
    for (int sq : square_parts) weight /= factorial(sq);
    weight <<= (2 * n_total_ - squares);
    if ((negative_parity_ + beta_squares) % 2 != 0) weight = -weight;
    sums_[index] += weight;
  }

  int n_total_;
  std::optional<PrincipalIndex> only_;
  bool pair_factorials_;
  std::array<int, kFormalVariables> remaining_{};
  std::array<int, 5> family_cap_{};
  std::array<int, 5> family_count_{};
  std::array<int, kFormalVariables> last_touch_{};
  std::array<int, kCrossTerms.size()> parts_{};
  int negative_parity_ = 0;
  wide_int scale_ = 1;
  std::map<PrincipalIndex, wide_int> sums_;
};

inline CoefficientTerm make_term(const PrincipalIndex& index, wide_int scaled, wide_int scale)
{
  const wide_int g = gcd(scaled, scale);
  CoefficientTerm term;
  term.index = index;
  term.numerator = static_cast<std::int64_t>(scaled / g);
  term.denominator = static_cast<std::int64_t>(scale / g);
  term.value = static_cast<double>(term.numerator) / static_cast<double>(term.denominator);
  return term;
}

inline void check_quantum_numbers(int n1, int n2, int cap)
{
  if (n1 < 0 || n2 < 0) throw domain_error("quantum numbers must be non-negative");
  if (cap > kMaxCap) {
    throw cap_exceeded("configured cap " + std::to_string(cap) + " exceeds the supported maximum " +
                       std::to_string(kMaxCap));
  }
  if (n1 + n2 > cap) {
    throw cap_exceeded("n1 + n2 = " + std::to_string(n1 + n2) + " exceeds the configured cap " +
                       std::to_string(cap));
  }
}

}  // namespace detail

/// All nonzero coefficients of P_{n1 n2}, sorted by principal index.
/// `pair_factorials = false` drops the multinomial factorials of the v and w
/// mixed parts; that variant agrees with the full one only while every such
/// part is at most 1 (n1, n2 <= 1) and is kept for regression tests.
inline CoefficientTable enumerate_coefficients(int n1, int n2, bool pair_factorials = true)
{
  detail::check_quantum_numbers(n1, n2, kMaxCap);
  detail::CoefficientEnumerator en(n1, n2, std::nullopt, pair_factorials);
  CoefficientTable table;
  for (const auto& [index, scaled] : en.run()) {
    if (scaled == 0) continue;
    table.push_back(detail::make_term(index, scaled, en.scale()));
  }
  return table;
}

/// Single coefficient C_{n1 n2}(index), enumerating only the secondary labels
/// compatible with that principal index.
inline CoefficientTerm coefficient_c(int n1, int n2, const PrincipalIndex& index)
{
  detail::check_quantum_numbers(n1, n2, kMaxCap);
  if (index.i < 0 || index.j < 0 || index.k < 0 || index.l < 0 || index.r < 0 ||
      index.total() != 2 * (n1 + n2)) {
    throw constraint_violation("principal labels must be non-negative and sum to 2(n1 + n2) = " +
                               std::to_string(2 * (n1 + n2)));
  }
  detail::CoefficientEnumerator en(n1, n2, index, true);
  const auto sums = en.run();
  const auto it = sums.find(index);
  if (it == sums.end() || it->second == 0) return CoefficientTerm{index, 0.0, 0, 1};
  return detail::make_term(index, it->second, en.scale());
}

/// Memoized enumerate_coefficients(n1, n2). Safe for concurrent callers;
/// entries are never evicted, so returned references stay valid.
inline const CoefficientTable& coefficient_table(int n1, int n2)
{
  static std::shared_mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<const CoefficientTable>> cache;

  const auto key = std::make_pair(n1, n2);
  {
    std::shared_lock lock(mutex);
    if (const auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto table = std::make_unique<const CoefficientTable>(enumerate_coefficients(n1, n2));
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace(key, std::move(table));
  return *it->second;
}

}  // namespace cho
