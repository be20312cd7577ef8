#include "loopchern/scalar.hpp"

#include <cctype>

namespace loopchern {

std::string GaussInt::str() const {
  return std::to_string(re_) + (im_ < 0 ? "-" : "+") + std::to_string(im_ < 0 ? -im_ : im_) + "i";
}

GaussQ GaussQ::inverse() const {
  const mpq_class n = re_ * re_ + im_ * im_;
  if (sgn(n) == 0) throw std::domain_error("GaussQ: division by zero");
  return {re_ / n, -im_ / n};
}

GaussQ& GaussQ::operator/=(const GaussQ& o) { return *this *= o.inverse(); }

mpq_class GaussQ::parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
      throw std::invalid_argument("rational literal must be of the form p/q: '" + text + "'");
  }
  if (s.front() == '+') s.erase(s.begin());
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal: '" + text + "'");
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

std::string GaussQ::str() const {
  return re_.get_str() + (sgn(im_) < 0 ? "-" : "+") + mpq_class(abs(im_)).get_str() + "i";
}

}  // namespace loopchern
