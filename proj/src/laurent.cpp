#include "arcring/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace arcring {

LaurentPoly LaurentPoly::mono(int exp, long long coeff) {
  LaurentPoly p;
  p.set(exp, coeff);
  return p;
}

LaurentPoly LaurentPoly::circle_weight(int k) {
  if (k < 0) throw std::invalid_argument("circle_weight: negative count");
  LaurentPoly p = one();
  const LaurentPoly c = mono(1) + mono(-1);
  for (int i = 0; i < k; ++i) p = p * c;
  return p;
}

long long LaurentPoly::coeff(int exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? 0 : it->second;
}

int LaurentPoly::min_exp() const {
  if (terms_.empty()) throw std::logic_error("min_exp of zero polynomial");
  return terms_.begin()->first;
}

int LaurentPoly::max_exp() const {
  if (terms_.empty()) throw std::logic_error("max_exp of zero polynomial");
  return terms_.rbegin()->first;
}

void LaurentPoly::set(int exp, long long coeff) {
  if (coeff == 0)
    terms_.erase(exp);
  else
    terms_[exp] = coeff;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (auto& [e, c] : o.terms_) set(e, coeff(e) + c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (auto& [e, c] : o.terms_) set(e, coeff(e) - c);
  return *this;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  r += o;
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  r -= o;
  return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  for (auto& [e1, c1] : terms_)
    for (auto& [e2, c2] : o.terms_) r.set(e1 + e2, r.coeff(e1 + e2) + c1 * c2);
  return r;
}

LaurentPoly LaurentPoly::operator-() const { return scaled(-1); }

LaurentPoly LaurentPoly::shifted(int dexp) const {
  LaurentPoly r;
  for (auto& [e, c] : terms_) r.terms_[e + dexp] = c;
  return r;
}

LaurentPoly LaurentPoly::scaled(long long k) const {
  LaurentPoly r;
  if (k == 0) return r;
  for (auto& [e, c] : terms_) r.terms_[e] = c * k;
  return r;
}

std::string LaurentPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    if (first && c < 0) os << "-";
    first = false;
    long long a = c < 0 ? -c : c;
    if (a != 1 || e == 0) os << a;
    if (e != 0) {
      if (a != 1) os << "*";
      os << "q";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

}  // namespace arcring
