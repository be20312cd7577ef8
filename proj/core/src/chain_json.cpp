#include "loopchern/chain_json.hpp"

#include <sstream>
#include <string>

namespace loopchern {

namespace {

using nlohmann::json;

double float_value(const json& v, const char* field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return GaussQ::parse_rational(v.get<std::string>()).get_d();
  throw ContractError(std::string("chain DSL: '") + field + "' must be a number or a rational string");
}

mpq_class exact_value(const json& v, const char* field) {
  if (v.is_number_integer()) return mpq_class(v.get<long>());
  if (v.is_string()) return GaussQ::parse_rational(v.get<std::string>());
  throw ContractError(std::string("chain DSL: exact '") + field +
                      "' must be an integer or a rational string \"p/q\" (no decimals)");
}

template <class S>
S read_coeff(const json& term) {
  const json zero = 0;
  const json& re = term.contains("re") ? term.at("re") : zero;
  const json& im = term.contains("im") ? term.at("im") : zero;
  if constexpr (std::is_same_v<S, Complex>) {
    return {float_value(re, "re"), float_value(im, "im")};
  } else {
    return GaussQ(exact_value(re, "re"), exact_value(im, "im"));
  }
}

template <class S>
TrigPolyForm<S> read_part(const json& terms, int n) {
  TrigPolyForm<S> f(n);
  if (terms.is_null()) return f;
  if (!terms.is_array()) throw ContractError("chain DSL: form parts must be arrays of terms");
  for (const auto& t : terms) {
    if (!t.is_object()) throw ContractError("chain DSL: a term must be an object");
    std::vector<int> mode = t.contains("mode") ? t.at("mode").get<std::vector<int>>() : std::vector<int>(n, 0);
    if (static_cast<int>(mode.size()) != n)
      throw DimensionError("chain DSL: mode has " + std::to_string(mode.size()) + " components, expected " +
                           std::to_string(n));
    std::vector<int> idx = t.contains("indices") ? t.at("indices").get<std::vector<int>>() : std::vector<int>{};
    IndexMask seen = 0;
    for (int& k : idx) {
      if (k < 1 || k > n) throw DimensionError("chain DSL: index " + std::to_string(k) + " out of range 1.." + std::to_string(n));
      if (seen & (IndexMask{1} << (k - 1))) throw ContractError("chain DSL: repeated index in a term");
      seen |= IndexMask{1} << (k - 1);
      --k;
    }
    f += TrigPolyForm<S>::monomial(n, mode, idx, read_coeff<S>(t));
  }
  return f;
}

template <class S>
EquivariantForm<S> read_form(const json& j, int n) {
  if (!j.is_object()) throw ContractError("chain DSL: a form must be an object with 'prime'/'dblprime'");
  for (const auto& [key, _] : j.items())
    if (key != "prime" && key != "dblprime") throw ContractError("chain DSL: unknown form field '" + key + "'");
  return EquivariantForm<S>(read_part<S>(j.value("prime", json()), n), read_part<S>(j.value("dblprime", json()), n));
}

template <class S>
Chain<S> read_chain(const json& j, int n) {
  if (!j.is_array()) throw ContractError("chain DSL: a chain must be an array of words");
  Chain<S> out(n);
  for (const auto& w : j) {
    if (!w.is_array() || w.empty()) throw ContractError("chain DSL: a word must be a non-empty array of forms");
    std::vector<EquivariantForm<S>> slots;
    for (const auto& f : w) slots.push_back(read_form<S>(f, n));
    out += Chain<S>::from_forms(slots);
  }
  return out;
}

json value_json(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }
json value_json(const GaussQ& z) { return json{{"re", z.re().get_str()}, {"im", z.im().get_str()}}; }

template <class S>
json write_chain(const Chain<S>& c) {
  json out = json::array();
  for (const auto& t : c.terms()) {
    json word = json::array();
    for (std::size_t s = 0; s < t.word.size(); ++s) {
      const auto& e = t.word[s];
      json term;
      std::vector<int> mode(e.mode.begin(), e.mode.begin() + c.n());
      std::vector<int> idx;
      for (int k = 0; k < c.n(); ++k)
        if (e.mask & (IndexMask{1} << k)) idx.push_back(k + 1);
      term["mode"] = mode;
      term["indices"] = idx;
      const json v = s == 0 ? value_json(t.coeff) : value_json(S(1));
      term["re"] = v["re"];
      term["im"] = v["im"];
      json form = {{"prime", json::array()}, {"dblprime", json::array()}};
      form[e.part == Part::prime ? "prime" : "dblprime"].push_back(term);
      word.push_back(form);
    }
    out.push_back(word);
  }
  return out;
}

}  // namespace

std::string describe(const Word& w, int n) {
  std::ostringstream os;
  os << "(";
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (s) os << " | ";
    const auto& e = w[s];
    os << (e.part == Part::prime ? "'" : "\"") << "[";
    for (int k = 0; k < n; ++k) os << (k ? "," : "") << static_cast<int>(e.mode[k]);
    os << "]dx{";
    bool first = true;
    for (int k = 0; k < n; ++k)
      if (e.mask & (IndexMask{1} << k)) {
        os << (first ? "" : ",") << (k + 1);
        first = false;
      }
    os << "}";
  }
  os << ")";
  return os.str();
}

Chain<Complex> chain_from_json(const json& j, int n) { return read_chain<Complex>(j, n); }
Chain<GaussQ> exact_chain_from_json(const json& j, int n) { return read_chain<GaussQ>(j, n); }
EquivariantForm<Complex> form_from_json(const json& j, int n) { return read_form<Complex>(j, n); }
json chain_to_json(const Chain<Complex>& c) { return write_chain(c); }
json chain_to_json(const Chain<GaussQ>& c) { return write_chain(c); }

}  // namespace loopchern
