#include "loopchern/random_chains.hpp"

#include <cmath>
#include <numbers>

namespace loopchern {

Word random_word(std::mt19937_64& rng, const RandomWordSpec& spec) {
  if (spec.n < 1 || spec.n > kMaxDimension) throw DimensionError("random_word: dimension out of range");
  if (spec.min_length < 0 || spec.max_length < spec.min_length || spec.max_length + 1 > kMaxWordSlots)
    throw ContractError("random_word: invalid length range");
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int N = uniform(spec.min_length, spec.max_length);
  const IndexMask masks = IndexMask{1} << spec.n;
  while (true) {
    Word w;
    std::vector<int> total(spec.n, 0);
    for (int s = 0; s <= N; ++s) {
      BasisElem e;
      do {
        for (int i = 0; i < spec.n; ++i) e.mode[i] = static_cast<std::int8_t>(uniform(-spec.mode_box, spec.mode_box));
        e.mask = static_cast<std::uint8_t>(uniform(0, static_cast<int>(masks) - 1));
        e.part = uniform(0, 1) ? Part::dblprime : Part::prime;
      } while (s > 0 && e.is_unit());
      for (int i = 0; i < spec.n; ++i) total[i] += e.mode[i];
      w.push_back(e);
    }
    if (!spec.zero_total) return w;
    // Absorb the total mode into theta_0 and keep the word if it stays in the box.
    bool ok = true;
    for (int i = 0; i < spec.n; ++i) {
      const int m = w[0].mode[i] - total[i];
      if (std::abs(m) > spec.mode_box) ok = false;
      w[0].mode[i] = static_cast<std::int8_t>(m);
    }
    w[0].part = Part::prime;
    if (ok && !(N > 0 && has_unit_tail(w))) return w;
  }
}

Chain<Complex> random_chain(std::mt19937_64& rng, const RandomWordSpec& spec, int max_words) {
  if (max_words < 1) throw ContractError("random_chain: need at least one word");
  const int words = std::uniform_int_distribution<int>(1, max_words)(rng);
  std::uniform_real_distribution<double> mod(0.5, 2.0), arg(0.0, 2.0 * std::numbers::pi);
  Chain<Complex> c(spec.n);
  for (int i = 0; i < words; ++i) {
    const Word w = random_word(rng, spec);
    c += Chain<Complex>::from_word(spec.n, w, std::polar(mod(rng), arg(rng)));
  }
  return c;
}

}  // namespace loopchern
