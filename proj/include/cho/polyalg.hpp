#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace cho {

/// Formal variables of the generating function: alpha1..alpha4 occupy slots
/// 0..3 and beta1..beta4 slots 4..7.
inline constexpr std::size_t kFormalVariables = 8;

inline constexpr std::size_t alpha_slot(int i) { return static_cast<std::size_t>(i - 1); }
inline constexpr std::size_t beta_slot(int i) { return static_cast<std::size_t>(i + 3); }

using MultiDegree = std::array<std::uint8_t, kFormalVariables>;

inline int total_degree(const MultiDegree& d)
{
  return std::accumulate(d.begin(), d.end(), 0);
}

/// Which terms survive a product. Terms whose total degree exceeds `cap`, or
/// whose degree in any single variable exceeds the matching entry of `box`,
/// are dropped.
struct Truncation
{
  int cap = std::numeric_limits<int>::max();
  MultiDegree box = filled_box(std::numeric_limits<std::uint8_t>::max());

  static constexpr MultiDegree filled_box(std::uint8_t v)
  {
    MultiDegree d{};
    d.fill(v);
    return d;
  }

  bool admits(const MultiDegree& d) const
  {
    if (total_degree(d) > cap) return false;
    for (std::size_t i = 0; i < kFormalVariables; ++i)
      if (d[i] > box[i]) return false;
    return true;
  }
};

/// Sparse polynomial in the eight formal variables with integer exponents and
/// Scalar coefficients. Zero coefficients are never stored.
template <class Scalar = double>
class SparsePoly
{
 public:
  using term_map = std::map<MultiDegree, Scalar>;

  SparsePoly() = default;

  static SparsePoly constant(Scalar c)
  {
    SparsePoly p;
    p.add_term(MultiDegree{}, c);
    return p;
  }

  static SparsePoly monomial(const MultiDegree& d, Scalar c = Scalar(1))
  {
    SparsePoly p;
    p.add_term(d, c);
    return p;
  }

  static SparsePoly variable(std::size_t slot, Scalar c = Scalar(1))
  {
    if (slot >= kFormalVariables) throw std::out_of_range("formal variable slot out of range");
    MultiDegree d{};
    d[slot] = 1;
    return monomial(d, c);
  }

  void add_term(const MultiDegree& d, const Scalar& c)
  {
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.try_emplace(d, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  Scalar coefficient(const MultiDegree& d) const
  {
    const auto it = terms_.find(d);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  const term_map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  int degree() const
  {
    int deg = 0;
    for (const auto& [d, c] : terms_) deg = std::max(deg, total_degree(d));
    return deg;
  }

  SparsePoly& operator+=(const SparsePoly& other)
  {
    for (const auto& [d, c] : other.terms_) add_term(d, c);
    return *this;
  }

  SparsePoly& operator*=(const Scalar& s)
  {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [d, c] : terms_) c *= s;
    return *this;
  }

  SparsePoly& operator/=(const Scalar& s)
  {
    for (auto& [d, c] : terms_) c /= s;
    return *this;
  }

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator*(SparsePoly a, const Scalar& s) { return a *= s; }

  friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

 private:
  term_map terms_;
};

/// Product of a and b keeping only the terms admitted by `trunc`.
template <class Scalar>
SparsePoly<Scalar> poly_mul(const SparsePoly<Scalar>& a, const SparsePoly<Scalar>& b,
                            const Truncation& trunc)
{
  SparsePoly<Scalar> out;
  for (const auto& [da, ca] : a.terms()) {
    for (const auto& [db, cb] : b.terms()) {
      MultiDegree d{};
      bool overflow = false;
      for (std::size_t i = 0; i < kFormalVariables; ++i) {
        const int e = da[i] + db[i];
        if (e > std::numeric_limits<std::uint8_t>::max()) overflow = true;
        d[i] = static_cast<std::uint8_t>(e);
      }
      if (overflow || !trunc.admits(d)) continue;
      out.add_term(d, ca * cb);
    }
  }
  return out;
}

template <class Scalar>
SparsePoly<Scalar> poly_mul(const SparsePoly<Scalar>& a, const SparsePoly<Scalar>& b, int cap)
{
  return poly_mul(a, b, Truncation{.cap = cap});
}

/// Homogeneous quadratic form q(z) = sum_{i <= j} c_ij z_i z_j over the eight
/// formal variables. Storage is symmetric: coefficient(i, j) and
/// coefficient(j, i) name the same monomial z_i z_j.
template <class Scalar = double>
class QuadraticForm8
{
 public:
  QuadraticForm8() { for (auto& row : c_) row.fill(Scalar(0)); }

  Scalar coefficient(std::size_t i, std::size_t j) const { return c_[std::min(i, j)][std::max(i, j)]; }

  void set(std::size_t i, std::size_t j, Scalar value) { c_[std::min(i, j)][std::max(i, j)] = value; }

  QuadraticForm8& operator+=(const QuadraticForm8& other)
  {
    for (std::size_t i = 0; i < kFormalVariables; ++i)
      for (std::size_t j = i; j < kFormalVariables; ++j) c_[i][j] += other.c_[i][j];
    return *this;
  }

  /// Number of monomials with a nonzero coefficient.
  std::size_t term_count() const
  {
    std::size_t n = 0;
    for (std::size_t i = 0; i < kFormalVariables; ++i)
      for (std::size_t j = i; j < kFormalVariables; ++j)
        if (c_[i][j] != Scalar(0)) ++n;
    return n;
  }

  SparsePoly<Scalar> to_poly() const
  {
    SparsePoly<Scalar> p;
    for (std::size_t i = 0; i < kFormalVariables; ++i) {
      for (std::size_t j = i; j < kFormalVariables; ++j) {
        MultiDegree d{};
        ++d[i];
        ++d[j];
        p.add_term(d, c_[i][j]);
      }
    }
    return p;
  }

  Scalar evaluate(const std::array<Scalar, kFormalVariables>& z) const
  {
    Scalar acc(0);
    for (std::size_t i = 0; i < kFormalVariables; ++i)
      for (std::size_t j = i; j < kFormalVariables; ++j) acc += c_[i][j] * z[i] * z[j];
    return acc;
  }

 private:
  std::array<std::array<Scalar, kFormalVariables>, kFormalVariables> c_;
};

/// sum_{p=0}^{P} q^p / p! with every intermediate product truncated by
/// `trunc`. Since q is homogeneous of degree 2, P = cap / 2 captures every
/// admitted term.
template <class Scalar>
SparsePoly<Scalar> exp_truncated(const QuadraticForm8<Scalar>& q, const Truncation& trunc)
{
  const auto qp = q.to_poly();
  auto result = SparsePoly<Scalar>::constant(Scalar(1));
  auto power = result;
  int max_power = trunc.cap / 2;
  const int box_degree = total_degree(trunc.box);
  max_power = std::min(max_power, box_degree / 2);
  for (int p = 1; p <= max_power; ++p) {
    power = poly_mul(power, qp, trunc);
    if (power.is_zero()) break;
    power /= Scalar(p);
    result += power;
  }
  return result;
}

template <class Scalar>
SparsePoly<Scalar> exp_truncated(const QuadraticForm8<Scalar>& q, int cap)
{
  return exp_truncated(q, Truncation{.cap = cap});
}

/// Coefficient of the monomial z^d. Multiplying by prod_i d_i! turns it into
/// the mixed partial derivative at the origin.
template <class Scalar>
Scalar extract_coefficient(const SparsePoly<Scalar>& p, const MultiDegree& d)
{
  return p.coefficient(d);
}

}  // namespace cho
