#include "loopchern/cocycles.hpp"

#include <algorithm>
#include <map>

#include "loopchern/algebra_suite.hpp"

namespace loopchern {

namespace {

bool parity_matches(int degree, Parity p) {
  const bool even = (degree % 2 + 2) % 2 == 0;
  return p == Parity::both || (p == Parity::even) == even;
}

// Sparse vector over GaussQ indexed by row ids, sorted by index.
using SparseVec = std::vector<std::pair<std::uint32_t, GaussQ>>;

// a - f * b
SparseVec axpy(const SparseVec& a, const GaussQ& f, const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back({b[j].first, -(f * b[j].second)});
      ++j;
    } else {
      GaussQ v = a[i].second - f * b[j].second;
      if (!v.is_zero()) out.push_back({a[i].first, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

std::vector<Word> truncation_words(const CocycleTruncation& t) {
  if (t.max_length < 0) throw ContractError("solve_cocycles: N_max must be >= 0");
  const auto basis = basis_elements(t.n, t.mode_box);
  std::vector<BasisElem> tail;
  for (const auto& e : basis)
    if (!e.is_unit()) tail.push_back(e);
  std::vector<Word> out;
  for (int N = 0; N <= t.max_length; ++N) {
    std::vector<std::size_t> idx(N + 1, 0);
    Word w(N + 1);
    while (true) {
      w[0] = basis[idx[0]];
      for (int s = 1; s <= N; ++s) w[s] = tail[idx[s]];
      bool keep = parity_matches(word_degree(w), t.parity);
      if (keep && t.zero_total_mode) {
        for (int k = 0; k < t.n && keep; ++k) {
          int total = 0;
          for (const auto& e : w) total += e.mode[k];
          keep = total == 0;
        }
      }
      if (keep) out.push_back(w);
      int s = N;
      while (s >= 0) {
        const std::size_t lim = s == 0 ? basis.size() : tail.size();
        if (++idx[s] < lim) break;
        idx[s--] = 0;
      }
      if (s < 0) break;
      if (out.size() > t.budget)
        throw ResourceError("solve_cocycles: truncation has too many words", static_cast<double>(out.size()),
                            static_cast<double>(t.budget));
    }
  }
  std::sort(out.begin(), out.end(), word_less);
  return out;
}

CocycleBasis solve_cocycles(const CocycleTruncation& t) {
  if (t.max_length > 4 || t.mode_box > 1)
    throw ResourceError("solve_cocycles: truncation beyond N_max <= 4, mode_box <= 1",
                        static_cast<double>(std::max(t.max_length, t.mode_box)), 4.0);
  const auto domain = truncation_words(t);
  CocycleBasis out;
  out.domain_dim = domain.size();

  // Columns delta(w_j) with rows numbered by first appearance (deterministic).
  std::map<Word, std::uint32_t, decltype(&word_less)> row_id(&word_less);
  std::vector<SparseVec> columns;
  columns.reserve(domain.size());
  std::uint64_t nnz = 0;
  for (const auto& w : domain) {
    TermBuffer<GaussInt> buf;
    const GaussInt one(1);
    apply_tensor_d(w, one, t.n, buf);
    apply_hochschild_b(w, one, buf);
    apply_connes_B(w, one, buf);
    canonicalize(buf);
    SparseVec col;
    for (auto& term : buf) {
      out.image_max_length = std::max(out.image_max_length, word_length(term.word));
      auto [it, inserted] = row_id.try_emplace(term.word, static_cast<std::uint32_t>(row_id.size()));
      col.push_back({it->second, GaussQ(term.coeff)});
    }
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    nnz += col.size();
    if (nnz > t.budget)
      throw ResourceError("solve_cocycles: delta matrix too large", static_cast<double>(nnz),
                          static_cast<double>(t.budget));
    columns.push_back(std::move(col));
  }
  out.image_words = row_id.size();

  // Incremental column reduction: reduce each column against earlier pivots
  // (pivot = largest row index) while tracking the combination of domain words.
  std::map<std::uint32_t, std::size_t> pivot_of;  // row -> index into reduced
  std::vector<SparseVec> reduced, combos;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    SparseVec v = columns[j];
    SparseVec combo{{static_cast<std::uint32_t>(j), GaussQ(1)}};
    while (!v.empty()) {
      auto it = pivot_of.find(v.back().first);
      if (it == pivot_of.end()) break;
      const SparseVec& p = reduced[it->second];
      const GaussQ f = v.back().second / p.back().second;
      v = axpy(v, f, p);
      combo = axpy(combo, f, combos[it->second]);
    }
    if (v.empty()) {
      TermBuffer<GaussQ> terms;
      for (const auto& [k, c] : combo) terms.push_back({domain[k], c});
      out.cocycles.emplace_back(t.n, std::move(terms));
    } else {
      pivot_of[v.back().first] = reduced.size();
      reduced.push_back(std::move(v));
      combos.push_back(std::move(combo));
    }
  }
  out.rank = reduced.size();

  for (const auto& c : out.cocycles)
    if (!total_differential(c).is_zero()) throw std::logic_error("solve_cocycles: kernel vector is not closed");
  return out;
}

}  // namespace loopchern
