#pragma once

// JSON chain format.
//
//   chain  := [word, ...]
//   word   := [form, ...]                        (theta_0, ..., theta_N)
//   form   := {"prime": [term, ...], "dblprime": [term, ...]}
//   term   := {"mode": [m_1, ..., m_n], "indices": [i_1, ..., i_k], "re": v, "im": v}
//
// Indices are 1-based. A value is a JSON number or a decimal-free rational
// string "p/q". The exact reader accepts integers and rational strings only and
// reads coefficients in angular coordinates (see scalar.hpp).

#include <json.hpp>

#include "loopchern/chain.hpp"

namespace loopchern {

Chain<Complex> chain_from_json(const nlohmann::json& j, int n);
Chain<GaussQ> exact_chain_from_json(const nlohmann::json& j, int n);

EquivariantForm<Complex> form_from_json(const nlohmann::json& j, int n);

nlohmann::json chain_to_json(const Chain<Complex>& c);
nlohmann::json chain_to_json(const Chain<GaussQ>& c);

/// Compact single-line rendering of a basis word, e.g. ('[0,0]dx{1,2} | "[1,0]dx{}).
std::string describe(const Word& w, int n);

}  // namespace loopchern
