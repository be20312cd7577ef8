#include "loopchern/algebra_suite.hpp"


namespace loopchern {

const char* identity_name(Identity id) {
  switch (id) {
    case Identity::delta_sq: return "delta^2";
    case Identity::d_sq: return "D^2";
    case Identity::b_sq: return "b^2";
    case Identity::B_sq: return "B^2";
    case Identity::bB: return "bB+Bb";
    case Identity::Db: return "Db+bD";
    case Identity::DB: return "DB+BD";
  }
  return "?";
}

std::vector<BasisElem> basis_elements(int n, int mode_box) {
  if (n < 1 || n > kMaxDimension) throw DimensionError("basis_elements: dimension out of range");
  if (mode_box < 0) throw ContractError("basis_elements: mode box must be >= 0");
  std::vector<BasisElem> out;
  std::vector<int> m(n, -mode_box);
  while (true) {
    for (int part = 0; part < 2; ++part) {
      for (IndexMask mask = 0; mask < (IndexMask{1} << n); ++mask) {
        BasisElem e;
        e.mode = make_mode_array(m);
        e.mask = static_cast<std::uint8_t>(mask);
        e.part = static_cast<Part>(part);
        out.push_back(e);
      }
    }
    int i = n - 1;
    while (i >= 0 && m[i] == mode_box) m[i--] = -mode_box;
    if (i < 0) break;
    ++m[i];
  }
  return out;
}

namespace {

using S = GaussInt;


// Exact accumulation of terms keyed by the full word; a nonzero remainder
// after all terms are added is a violation.
class ZeroAccumulator {
 public:
  ZeroAccumulator() : keys_(kSize), vals_(kSize), used_(kSize, 0) {}

  /// Appends the nonzero combined terms of buf to remainder; true if none.
  bool sums_to_zero(const TermBuffer<S>& buf, TermBuffer<S>& remainder) {
    if (buf.empty()) return true;
    if (buf.size() * 2 > kSize) {
      TermBuffer<S> copy = buf;
      canonicalize(copy);
      remainder.insert(remainder.end(), copy.begin(), copy.end());
      return copy.empty();
    }
    for (const auto& t : buf) {
      std::size_t h = hash(t.word) & (kSize - 1);
      while (used_[h] && !(*keys_[h] == t.word)) h = (h + 1) & (kSize - 1);
      if (!used_[h]) {
        used_[h] = 1;
        keys_[h] = &t.word;
        vals_[h] = t.coeff;
        touched_.push_back(h);
      } else {
        vals_[h] += t.coeff;
      }
    }
    bool zero = true;
    for (auto h : touched_) {
      if (!vals_[h].is_zero()) {
        zero = false;
        remainder.push_back({*keys_[h], vals_[h]});
      }
      used_[h] = 0;
    }
    touched_.clear();
    return zero;
  }

 private:
  static constexpr std::size_t kSize = 4096;
  static std::size_t hash(const Word& w) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ w.size();
    for (const auto& e : w) {
      h ^= e.mode_bits() + (std::uint64_t{e.mask} << 1) + static_cast<std::uint64_t>(e.part);
      h *= 0xff51afd7ed558ccdULL;
      h ^= h >> 32;
    }
    return static_cast<std::size_t>(h);
  }
  std::vector<const Word*> keys_;  // point into the buffer being reduced
  std::vector<S> vals_;
  std::vector<std::uint8_t> used_;
  std::vector<std::size_t> touched_;
};

struct Workspace {
  ZeroAccumulator acc;
  TermBuffer<S> d1, b1, B1;
  std::array<TermBuffer<S>, kIdentityCount> out;
};

void check(Identity id, const TermBuffer<S>& buf, const Word& w, int n, ZeroAccumulator& acc,
           TermBuffer<S>& remainder, AlgebraSuiteResult& res) {
  auto& r = res.identities[static_cast<int>(id)];
  ++r.words_checked;
  if (!acc.sums_to_zero(buf, remainder) && r.failures++ == 0) r.first_violation = describe(w, n);
}

void run_word(const Word& w, int n, const SignConventions& conv, Workspace& ws, AlgebraSuiteResult& res) {
  const S one(1);
  ws.d1.clear();
  ws.b1.clear();
  ws.B1.clear();
  apply_tensor_d(w, one, n, ws.d1);
  apply_hochschild_b(w, one, ws.b1);
  apply_connes_B(w, one, ws.B1, conv);
  for (auto& o : ws.out) o.clear();

  auto& dsq = ws.out[static_cast<int>(Identity::d_sq)];
  auto& bsq = ws.out[static_cast<int>(Identity::b_sq)];
  auto& Bsq = ws.out[static_cast<int>(Identity::B_sq)];
  auto& bB = ws.out[static_cast<int>(Identity::bB)];
  auto& Db = ws.out[static_cast<int>(Identity::Db)];
  auto& DB = ws.out[static_cast<int>(Identity::DB)];
  for (const auto& t : ws.d1) {
    apply_tensor_d(t.word, t.coeff, n, dsq);
    apply_hochschild_b(t.word, t.coeff, Db);
    apply_connes_B(t.word, t.coeff, DB, conv);
  }
  for (const auto& t : ws.b1) {
    apply_tensor_d(t.word, t.coeff, n, Db);
    apply_hochschild_b(t.word, t.coeff, bsq);
    apply_connes_B(t.word, t.coeff, bB, conv);
  }
  for (const auto& t : ws.B1) {
    apply_tensor_d(t.word, t.coeff, n, DB);
    apply_hochschild_b(t.word, t.coeff, bB);
    apply_connes_B(t.word, t.coeff, Bsq, conv);
  }
  // Each piece is reduced exactly; delta^2 = D^2 + b^2 + B^2 + [D,b] + [D,B] + [b,B]
  // is then the exact sum of the reduced pieces.
  auto& all = ws.out[static_cast<int>(Identity::delta_sq)];
  for (int k = 1; k < kIdentityCount; ++k) check(static_cast<Identity>(k), ws.out[k], w, n, ws.acc, all, res);
  TermBuffer<S> unused;
  check(Identity::delta_sq, all, w, n, ws.acc, unused, res);
}

}  // namespace

AlgebraSuiteResult verify_algebra_exhaustive(int n, int max_length, int mode_box, const SignConventions& conv,
                                             std::uint64_t word_budget) {
  if (max_length < 0) throw ContractError("verify_algebra_exhaustive: max length must be >= 0");
  const auto basis = basis_elements(n, mode_box);
  std::vector<BasisElem> tail;
  for (const auto& e : basis)
    if (!e.is_unit()) tail.push_back(e);

  AlgebraSuiteResult res;
  res.n = n;
  res.max_length = max_length;
  res.mode_box = mode_box;
  res.basis_size = basis.size();
  double count = 0.0;
  for (int N = 0; N <= max_length; ++N) count += static_cast<double>(basis.size()) * std::pow(tail.size(), N);
  if (count > static_cast<double>(word_budget))
    throw ResourceError("verify_algebra_exhaustive: truncation too large", count, static_cast<double>(word_budget));

  Workspace ws;
  for (int N = 0; N <= max_length; ++N) {
    std::vector<std::size_t> idx(N + 1, 0);
    Word w(N + 1);
    while (true) {
      w[0] = basis[idx[0]];
      for (int s = 1; s <= N; ++s) w[s] = tail[idx[s]];
      run_word(w, n, conv, ws, res);
      ++res.words;
      int s = N;
      while (s >= 0) {
        const std::size_t lim = s == 0 ? basis.size() : tail.size();
        if (++idx[s] < lim) break;
        idx[s--] = 0;
      }
      if (s < 0) break;
    }
  }
  return res;
}

}  // namespace loopchern
