#pragma once

// Normalized cyclic chains theta_0 (x) theta_1 (x) ... (x) theta_N of
// equivariant forms, expanded in basis words. Slots i >= 1 live modulo
// constants: a word carrying the unit in such a slot is zero.
//
// Shifted degrees: eps_k = |a_0| + sum_{j=1..k} (|a_j| - 1).
//   D (slot i)   sign +1 for i = 0, -(-1)^{eps_{i-1}} for i >= 1
//   b            sum_{i<N} (-1)^{eps_i} (.., a_i a_{i+1}, ..)
//                  - (-1)^{(|a_N|-1) eps_{N-1}} (a_N a_0, a_1, .., a_{N-1})
//   B            sum_i sigma_i (1, a_i, .., a_N, a_0, .., a_{i-1}),
//                  sigma_0 = 1, sigma_i = (-1)^{(eps_{i-1}+1)(eps_N - eps_{i-1})}
// delta = D + b + B squares to zero, and so does each piece and anticommutator.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <span>
#include <type_traits>
#include <vector>

#include <initializer_list>

#include "loopchern/forms.hpp"

namespace loopchern {

inline constexpr int kMaxWordSlots = 12;

/// Fixed-capacity, trivially copyable tensor word.
class Word {
 public:
  Word() {}
  explicit Word(std::size_t n) { resize(n); }
  Word(std::initializer_list<BasisElem> elems) {
    for (const auto& e : elems) push_back(e);
  }

  std::size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }
  BasisElem& operator[](std::size_t i) { return s_.e[i]; }
  const BasisElem& operator[](std::size_t i) const { return s_.e[i]; }
  BasisElem* begin() { return s_.e; }
  BasisElem* end() { return s_.e + len_; }
  const BasisElem* begin() const { return s_.e; }
  const BasisElem* end() const { return s_.e + len_; }
  const BasisElem& front() const { return s_.e[0]; }
  const BasisElem& back() const { return s_.e[len_ - 1]; }

  void resize(std::size_t n) {
    if (n > kMaxWordSlots) throw ResourceError("Word: too many tensor slots", double(n), kMaxWordSlots);
    for (std::size_t i = len_; i < n; ++i) s_.e[i] = BasisElem{};
    len_ = static_cast<std::uint8_t>(n);
  }
  void push_back(const BasisElem& e) {
    if (len_ == kMaxWordSlots) throw ResourceError("Word: too many tensor slots", len_ + 1.0, kMaxWordSlots);
    s_.e[len_++] = e;
  }
  void reserve(std::size_t) {}
  /// Appends [first, last).
  void append(const BasisElem* first, const BasisElem* last) {
    const auto k = static_cast<std::size_t>(last - first);
    if (len_ + k > kMaxWordSlots) throw ResourceError("Word: too many tensor slots", double(len_ + k), kMaxWordSlots);
    std::copy(first, last, s_.e + len_);
    len_ = static_cast<std::uint8_t>(len_ + k);
  }

  friend bool operator==(const Word& a, const Word& b) {
    if (a.len_ != b.len_) return false;
    for (std::size_t i = 0; i < a.len_; ++i)
      if (!(a.s_.e[i] == b.s_.e[i])) return false;
    return true;
  }

 private:
  // Slots past len_ are left uninitialized; words are built on hot paths.
  union Slots {
    Slots() {}
    BasisElem e[kMaxWordSlots];
  };
  std::uint8_t len_ = 0;
  Slots s_;
};

inline bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c < 0;
  }
  return false;
}

/// Tensor length minus one.
inline int word_length(const Word& w) { return static_cast<int>(w.size()) - 1; }

inline bool has_unit_tail(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i].is_unit()) return true;
  return false;
}

/// eps_0, ..., eps_N.
inline std::array<int, kMaxWordSlots> shifted_degrees(const Word& w) {
  std::array<int, kMaxWordSlots> e{};
  e[0] = w[0].degree();
  for (std::size_t i = 1; i < w.size(); ++i) e[i] = e[i - 1] + w[i].degree() - 1;
  return e;
}

inline int word_degree(const Word& w) { return w.empty() ? 0 : shifted_degrees(w)[w.size() - 1]; }

inline int parity_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

template <class S>
struct Term {
  Term() {}  // user-provided, so emplace_back() does not zero the word storage
  Term(const Word& w, const S& c) : word(w), coeff(c) {}
  Word word;
  S coeff{};
};

/// Test hook for negative controls: perturbations of the calibrated signs.
struct SignConventions {
  /// Negates the cyclic terms i >= 1 of B.
  bool flip_connes_cyclic = false;
};

template <class S>
using TermBuffer = std::vector<Term<S>>;

/// Appends coeff * w unless w is degenerate.
template <class S>
inline void emit_term(TermBuffer<S>& out, Word&& w, const S& coeff) {
  if (ScalarTraits<S>::is_zero(coeff) || has_unit_tail(w)) return;
  out.push_back({std::move(w), coeff});
}

/// Builds the word in place with fill(Word&) and keeps it unless degenerate.
template <class S, class Fill>
inline void emit_built(TermBuffer<S>& out, const S& coeff, Fill&& fill) {
  if (ScalarTraits<S>::is_zero(coeff)) return;
  auto& t = out.emplace_back();
  fill(t.word);
  if (has_unit_tail(t.word)) {
    out.pop_back();
    return;
  }
  t.coeff = coeff;
}

/// Sorts, merges equal words and drops zeros.
template <class S>
void canonicalize(TermBuffer<S>& terms) {
  if (terms.empty()) return;
  // Sort an index permutation so that each word is moved only once.
  thread_local std::vector<std::uint32_t> order;
  thread_local TermBuffer<S> out;
  order.resize(terms.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return word_less(terms[a].word, terms[b].word); });
  out.clear();
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    S acc = terms[order[i]].coeff;
    while (j < order.size() && terms[order[j]].word == terms[order[i]].word) acc += terms[order[j++]].coeff;
    if (!ScalarTraits<S>::is_zero(acc)) out.push_back({terms[order[i]].word, std::move(acc)});
    i = j;
  }
  terms.swap(out);
}

// --- word-level operators, appending to a buffer --------------------------

template <class S>
void apply_tensor_d(const Word& w, const S& coeff, int n, TermBuffer<S>& out) {
  const auto e = shifted_degrees(w);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int sign = i == 0 ? 1 : -parity_sign(e[i - 1]);
    dga_differential_elem<S>(w[i], n, [&](const BasisElem& x, const S& c) {
      S k = coeff * c;
      emit_built(out, sign > 0 ? k : S(-k), [&](Word& v) {
        v = w;
        v[i] = x;
      });
    });
  }
}

template <class S>
void apply_hochschild_b(const Word& w, const S& coeff, TermBuffer<S>& out) {
  const int N = word_length(w);
  if (N < 1) return;
  const auto e = shifted_degrees(w);
  for (int i = 0; i < N; ++i) {
    BasisElem x;
    const int s = multiply(w[i], w[i + 1], x);
    if (s == 0) continue;
    const int sign = s * parity_sign(e[i]);
    emit_built(out, sign > 0 ? coeff : S(-coeff), [&](Word& v) {
      v.append(w.begin(), w.begin() + i);
      v.push_back(x);
      v.append(w.begin() + i + 2, w.end());
    });
  }
  BasisElem x;
  const int s = multiply(w[N], w[0], x);
  if (s == 0) return;
  const int sign = -s * parity_sign((w[N].degree() - 1) * e[N - 1]);
  emit_built(out, sign > 0 ? coeff : S(-coeff), [&](Word& v) {
    v.push_back(x);
    v.append(w.begin() + 1, w.begin() + N);
  });
}

template <class S>
void apply_connes_B(const Word& w, const S& coeff, TermBuffer<S>& out, const SignConventions& conv = {}) {
  if (w[0].is_unit()) return;
  const int N = word_length(w);
  const auto e = shifted_degrees(w);
  for (int i = 0; i <= N; ++i) {
    int sign = 1;
    if (i > 0) {
      const int em = e[i - 1];
      sign = parity_sign((em + 1) * (e[N] - em));
      if (conv.flip_connes_cyclic) sign = -sign;
    }
    emit_built(out, sign > 0 ? coeff : S(-coeff), [&](Word& v) {
      v.push_back(unit_elem());
      v.append(w.begin() + i, w.end());
      v.append(w.begin(), w.begin() + i);
    });
  }
}

// --- chains ---------------------------------------------------------------

template <class S>
class Chain {
 public:
  Chain() = default;
  explicit Chain(int n) : n_(n) {
    if (n < 1 || n > kMaxDimension) throw DimensionError("Chain: dimension out of range");
  }
  Chain(int n, TermBuffer<S> terms) : Chain(n) {
    for (auto& t : terms)
      if (!t.word.empty()) emit_term(terms_, std::move(t.word), t.coeff);
    canonicalize(terms_);
  }

  static Chain from_word(int n, const Word& w, const S& coeff = S(1)) {
    Chain c(n);
    if (w.empty()) throw ContractError("Chain: a word needs at least one slot");
    Word v = w;
    emit_term(c.terms_, std::move(v), coeff);
    return c;
  }

  /// Multilinear expansion of theta_0 (x) ... (x) theta_N.
  static Chain from_forms(const std::vector<EquivariantForm<S>>& slots, const S& coeff = S(1)) {
    if (slots.empty()) throw ContractError("Chain: a word needs at least one slot");
    const int n = slots.front().n();
    for (const auto& f : slots)
      if (f.n() != n) throw DimensionError("Chain: slots have different dimensions");
    TermBuffer<S> acc{{Word{}, coeff}};
    for (const auto& f : slots) {
      TermBuffer<S> next;
      const auto basis = f.basis_terms();
      for (const auto& t : acc) {
        for (const auto& [e, c] : basis) {
          Word v = t.word;
          v.push_back(e);
          next.push_back({std::move(v), t.coeff * c});
        }
      }
      acc = std::move(next);
    }
    return Chain(n, std::move(acc));
  }

  int n() const { return n_; }
  const TermBuffer<S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Chain& operator+=(const Chain& o) {
    check_same(o);
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canonicalize(terms_);
    return *this;
  }
  Chain operator-() const {
    Chain out = *this;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
  }
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a += -b; }
  Chain scaled(const S& s) const {
    Chain out(n_);
    for (const auto& t : terms_) {
      Word v = t.word;
      emit_term(out.terms_, std::move(v), t.coeff * s);
    }
    return out;
  }
  friend bool operator==(const Chain& a, const Chain& b) {
    if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].word == b.terms_[i].word) || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
    return true;
  }

  void check_same(const Chain& o) const {
    if (n_ != o.n_) throw DimensionError("Chain: dimension mismatch");
  }

 private:
  int n_ = 0;
  TermBuffer<S> terms_;
};

namespace detail {

template <class S, class F>
Chain<S> map_terms(const Chain<S>& c, F&& f) {
  TermBuffer<S> out;
  for (const auto& t : c.terms()) f(t.word, t.coeff, out);
  canonicalize(out);
  return Chain<S>(c.n(), std::move(out));
}

}  // namespace detail

/// Tensor extension of the DGA differential.
template <class S>
Chain<S> tensor_d(const Chain<S>& c) {
  return detail::map_terms(c, [&](const Word& w, const S& k, TermBuffer<S>& out) { apply_tensor_d(w, k, c.n(), out); });
}

template <class S>
Chain<S> hochschild_b(const Chain<S>& c) {
  return detail::map_terms(c, [](const Word& w, const S& k, TermBuffer<S>& out) { apply_hochschild_b(w, k, out); });
}

template <class S>
Chain<S> connes_B(const Chain<S>& c, const SignConventions& conv = {}) {
  return detail::map_terms(c, [&](const Word& w, const S& k, TermBuffer<S>& out) { apply_connes_B(w, k, out, conv); });
}

template <class S>
Chain<S> total_differential(const Chain<S>& c, const SignConventions& conv = {}) {
  return detail::map_terms(c, [&](const Word& w, const S& k, TermBuffer<S>& out) {
    apply_tensor_d(w, k, c.n(), out);
    apply_hochschild_b(w, k, out);
    apply_connes_B(w, k, out, conv);
  });
}

/// Z-degree of a homogeneous chain, or nullopt-like sentinel (INT_MIN) if mixed.
template <class S>
int chain_degree(const Chain<S>& c) {
  int deg = 0;
  bool first = true;
  for (const auto& t : c.terms()) {
    const int d = word_degree(t.word);
    if (first) {
      deg = d;
      first = false;
    } else if (d != deg) {
      return std::numeric_limits<int>::min();
    }
  }
  return deg;
}

inline double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

/// Sum over lengths N of (sum_words |c| prod_slots (1 + |m|)^k) / floor(N/2)!.
template <class S>
double entire_norm(const Chain<S>& c, double k = 0.0) {
  if (k < 0.0) throw ContractError("entire_norm: weight exponent must be >= 0");
  double total = 0.0;
  for (const auto& t : c.terms()) {
    double w = std::abs(ScalarTraits<S>::to_complex(t.coeff));
    for (const auto& e : t.word) {
      double m2 = 0.0;
      for (auto m : e.mode) m2 += static_cast<double>(m) * m;
      w *= std::pow(1.0 + std::sqrt(m2), k);
    }
    total += w / factorial(word_length(t.word) / 2);
  }
  return total;
}

/// (1/N!) theta_0' ^ theta_1'' ^ ... ^ theta_N'' for one basis word.
template <class S>
TrigPolyForm<S> restrict_to_constants(const Word& w, const S& coeff, int n) {
  TrigPolyForm<S> out(n);
  if (w.empty() || w[0].part != Part::prime) return out;
  Mode m = w[0].mode;
  IndexMask mask = w[0].mask;
  int sign = 1;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i].part != Part::dblprime) return out;
    const int s = wedge_sign(mask, w[i].mask);
    if (s == 0) return out;
    sign *= s;
    mask |= w[i].mask;
    m = add_modes(m, w[i].mode);
  }
  S c = coeff;
  if constexpr (std::is_same_v<S, GaussInt>) {
    if (w.size() > 2) throw ContractError("restrict_to_constants: 1/N! is not integral; use GaussQ or Complex");
  } else {
    c = c / S(static_cast<long>(factorial(word_length(w))));
  }
  out.add_term(m, mask, sign > 0 ? c : S(-c));
  return out;
}

template <class S>
TrigPolyForm<S> restrict_to_constants(const Chain<S>& c) {
  TrigPolyForm<S> out(c.n());
  for (const auto& t : c.terms()) out += restrict_to_constants(t.word, t.coeff, c.n());
  return out;
}

/// Angular-coordinate exact chain to physical floating-point coefficients:
/// each dx^I picks up (2 pi)^{|I|}.
template <class S>
Chain<Complex> to_float(const Chain<S>& c) {
  if constexpr (std::is_same_v<S, Complex>) {
    return c;
  } else {
    TermBuffer<Complex> out;
    for (const auto& t : c.terms()) {
      int total = 0;
      for (const auto& e : t.word) total += mask_size(e.mask);
      out.push_back({t.word, ScalarTraits<S>::to_complex(t.coeff) * std::pow(2.0 * std::numbers::pi, total)});
    }
    return Chain<Complex>(c.n(), std::move(out));
  }
}

}  // namespace loopchern
