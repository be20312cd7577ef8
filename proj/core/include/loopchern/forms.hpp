#pragma once

// T-invariant forms on X x T for X = T^n: theta = theta' + vartheta ^ theta'',
// both parts trigonometric polynomials. Basis elements carry the part, the
// Fourier mode and the (increasing) index set.
//
// Degree of a basis element: |I| for theta', |I| - 1 for theta''.
// Product (a' + vartheta a'')(b' + vartheta b'') has parts
//   a'b'  and  (-1)^{|a'|} a'b'' + a''b',
// and the DGA differential is d(theta', theta'') = (d theta' - theta'', -d theta'').

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "loopchern/clifford.hpp"
#include "loopchern/errors.hpp"
#include "loopchern/scalar.hpp"

namespace loopchern {

using Mode = std::array<std::int8_t, kMaxDimension>;

enum class Part : std::uint8_t { prime = 0, dblprime = 1 };

struct BasisElem {
  Mode mode{};
  std::uint8_t mask = 0;  // IndexMask restricted to n <= 8
  Part part = Part::prime;

  int degree() const { return mask_size(mask) - static_cast<int>(part); }
  std::uint64_t mode_bits() const { return std::bit_cast<std::uint64_t>(mode); }
  bool is_unit() const { return mask == 0 && part == Part::prime && mode_bits() == 0; }

  // Total order on the packed representation (deterministic, not numeric).
  friend bool operator==(const BasisElem& a, const BasisElem& b) {
    return a.mode_bits() == b.mode_bits() && a.mask == b.mask && a.part == b.part;
  }
  friend std::strong_ordering operator<=>(const BasisElem& a, const BasisElem& b) {
    if (auto c = a.mode_bits() <=> b.mode_bits(); c != 0) return c;
    if (auto c = a.mask <=> b.mask; c != 0) return c;
    return a.part <=> b.part;
  }
};

inline BasisElem unit_elem() { return BasisElem{}; }

inline std::int8_t add_mode_component(int a, int b) {
  const int s = a + b;
  if (s < -127 || s > 127) throw OverflowError("Fourier mode component out of range");
  return static_cast<std::int8_t>(s);
}

inline Mode add_modes(const Mode& a, const Mode& b) {
  Mode out{};
  for (int k = 0; k < kMaxDimension; ++k) out[k] = add_mode_component(a[k], b[k]);
  return out;
}

inline Mode make_mode_array(const std::vector<int>& m) {
  if (m.size() > static_cast<std::size_t>(kMaxDimension)) throw DimensionError("mode has too many components");
  Mode out{};
  for (std::size_t k = 0; k < m.size(); ++k) out[k] = add_mode_component(m[k], 0);
  return out;
}

/// Product of basis elements; returns the sign (0 if the product vanishes).
inline int multiply(const BasisElem& a, const BasisElem& b, BasisElem& out) {
  if (a.part == Part::dblprime && b.part == Part::dblprime) return 0;
  int sign = wedge_sign(a.mask, b.mask);
  if (sign == 0) return 0;
  out.mode = add_modes(a.mode, b.mode);
  out.mask = static_cast<std::uint8_t>(a.mask | b.mask);
  if (a.part == Part::prime && b.part == Part::dblprime) {
    out.part = Part::dblprime;
    if (mask_size(a.mask) & 1) sign = -sign;
  } else {
    out.part = (a.part == Part::prime && b.part == Part::prime) ? Part::prime : Part::dblprime;
  }
  return sign;
}

/// Calls emit(elem, coeff) for each term of the exterior derivative of
/// e^{i<m,.>} dx^I inside the same part.
template <class S, class Emit>
void exterior_d_elem(const BasisElem& e, int n, Emit&& emit) {
  for (int k = 0; k < n; ++k) {
    if (e.mode[k] == 0) continue;
    const IndexMask bit = IndexMask{1} << k;
    const int s = wedge_sign(bit, e.mask);
    if (s == 0) continue;
    BasisElem x = e;
    x.mask = static_cast<std::uint8_t>(x.mask | bit);
    S c = ScalarTraits<S>::derivative_factor(e.mode[k]);
    if (s < 0) c = -c;
    emit(x, c);
  }
}

/// The DGA differential on one basis element.
template <class S, class Emit>
void dga_differential_elem(const BasisElem& e, int n, Emit&& emit) {
  if (e.part == Part::prime) {
    exterior_d_elem<S>(e, n, emit);
    return;
  }
  BasisElem p = e;
  p.part = Part::prime;
  emit(p, S(-1));
  exterior_d_elem<S>(e, n, [&](const BasisElem& x, const S& c) { emit(x, -c); });
}

// ---------------------------------------------------------------------------

/// Finite sum of c * e^{i<m,.>} dx^I (physical or angular coordinates, see scalar.hpp).
template <class S>
class TrigPolyForm {
 public:
  using Key = std::pair<Mode, IndexMask>;

  TrigPolyForm() = default;
  explicit TrigPolyForm(int n) : n_(n) {
    if (n < 1 || n > kMaxDimension) throw DimensionError("TrigPolyForm: dimension out of range");
  }

  static TrigPolyForm monomial(int n, const std::vector<int>& mode, const std::vector<int>& indices, S coeff) {
    TrigPolyForm f(n);
    if (static_cast<int>(mode.size()) != n) throw DimensionError("TrigPolyForm: mode length must equal n");
    IndexMask mask = 0;
    int sign = 1;
    for (int k : indices) {
      if (k < 0 || k >= n) throw DimensionError("TrigPolyForm: index out of range");
      const int s = wedge_sign(mask, IndexMask{1} << k);
      if (s == 0) return f;
      sign *= s;
      mask |= IndexMask{1} << k;
    }
    f.add_term(make_mode_array(mode), mask, sign < 0 ? S(-coeff) : coeff);
    return f;
  }

  int n() const { return n_; }
  const std::map<Key, S>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(const Mode& m, IndexMask mask, const S& c) {
    if (ScalarTraits<S>::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(Key{m, mask}, c);
    if (!inserted) {
      it->second += c;
      if (ScalarTraits<S>::is_zero(it->second)) terms_.erase(it);
    }
  }

  TrigPolyForm& operator+=(const TrigPolyForm& o) {
    check_same(o);
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
  }
  TrigPolyForm operator-() const {
    TrigPolyForm out(n_);
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
    return out;
  }
  friend TrigPolyForm operator+(TrigPolyForm a, const TrigPolyForm& b) { return a += b; }
  friend TrigPolyForm operator-(TrigPolyForm a, const TrigPolyForm& b) { return a += -b; }
  TrigPolyForm scaled(const S& s) const {
    TrigPolyForm out(n_);
    for (const auto& [k, c] : terms_) out.add_term(k.first, k.second, c * s);
    return out;
  }
  friend bool operator==(const TrigPolyForm& a, const TrigPolyForm& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  void check_same(const TrigPolyForm& o) const {
    if (n_ != o.n_) throw DimensionError("TrigPolyForm: dimension mismatch");
  }

 private:
  int n_ = 0;
  std::map<Key, S> terms_;
};

template <class S>
TrigPolyForm<S> wedge(const TrigPolyForm<S>& a, const TrigPolyForm<S>& b) {
  a.check_same(b);
  TrigPolyForm<S> out(a.n());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      const int s = wedge_sign(ka.second, kb.second);
      if (s == 0) continue;
      const S c = ca * cb;
      out.add_term(add_modes(ka.first, kb.first), ka.second | kb.second, s > 0 ? c : S(-c));
    }
  }
  return out;
}

template <class S>
TrigPolyForm<S> exterior_d(const TrigPolyForm<S>& a) {
  TrigPolyForm<S> out(a.n());
  for (const auto& [k, c] : a.terms()) {
    BasisElem e{k.first, static_cast<std::uint8_t>(k.second), Part::prime};
    exterior_d_elem<S>(e, a.n(), [&](const BasisElem& x, const S& f) { out.add_term(x.mode, x.mask, c * f); });
  }
  return out;
}

/// Mode-0 coefficient of the dx^1 ^ ... ^ dx^n component (unit cell of volume 1).
template <class S>
S integrate_top(const TrigPolyForm<S>& a) {
  const IndexMask top = (IndexMask{1} << a.n()) - 1;
  auto it = a.terms().find({Mode{}, top});
  return it == a.terms().end() ? ScalarTraits<S>::zero() : it->second;
}

template <class S>
struct EquivariantForm {
  TrigPolyForm<S> prime;
  TrigPolyForm<S> dblprime;

  EquivariantForm() = default;
  explicit EquivariantForm(int n) : prime(n), dblprime(n) {}
  EquivariantForm(TrigPolyForm<S> p, TrigPolyForm<S> d) : prime(std::move(p)), dblprime(std::move(d)) {
    prime.check_same(dblprime);
  }
  int n() const { return prime.n(); }

  /// Expansion into basis elements.
  std::vector<std::pair<BasisElem, S>> basis_terms() const {
    std::vector<std::pair<BasisElem, S>> out;
    for (const auto& [k, c] : prime.terms()) out.push_back({BasisElem{k.first, static_cast<std::uint8_t>(k.second), Part::prime}, c});
    for (const auto& [k, c] : dblprime.terms()) out.push_back({BasisElem{k.first, static_cast<std::uint8_t>(k.second), Part::dblprime}, c});
    return out;
  }
  friend bool operator==(const EquivariantForm& a, const EquivariantForm& b) {
    return a.prime == b.prime && a.dblprime == b.dblprime;
  }
};

template <class S>
EquivariantForm<S> dga_differential(const EquivariantForm<S>& th) {
  EquivariantForm<S> out(th.n());
  for (const auto& [e, c] : th.basis_terms()) {
    dga_differential_elem<S>(e, th.n(), [&](const BasisElem& x, const S& f) {
      auto& target = x.part == Part::prime ? out.prime : out.dblprime;
      target.add_term(x.mode, x.mask, c * f);
    });
  }
  return out;
}

template <class S>
EquivariantForm<S> multiply(const EquivariantForm<S>& a, const EquivariantForm<S>& b) {
  EquivariantForm<S> out(a.n());
  for (const auto& [ea, ca] : a.basis_terms()) {
    for (const auto& [eb, cb] : b.basis_terms()) {
      BasisElem x;
      const int s = multiply(ea, eb, x);
      if (s == 0) continue;
      const S c = ca * cb;
      auto& target = x.part == Part::prime ? out.prime : out.dblprime;
      target.add_term(x.mode, x.mask, s > 0 ? c : S(-c));
    }
  }
  return out;
}

}  // namespace loopchern
