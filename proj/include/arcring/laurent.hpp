#pragma once

// Sparse integer Laurent polynomials in one variable q.

#include <map>
#include <string>

namespace arcring {

class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly zero() { return LaurentPoly(); }
  static LaurentPoly one() { return mono(0, 1); }
  static LaurentPoly mono(int exp, long long coeff = 1);
  // (q + q^{-1})^k, the weight of k disjoint circles.
  static LaurentPoly circle_weight(int k);

  bool is_zero() const { return terms_.empty(); }
  long long coeff(int exp) const;
  int min_exp() const;  // requires nonzero
  int max_exp() const;  // requires nonzero

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator-() const;
  LaurentPoly shifted(int dexp) const;         // multiply by q^dexp
  LaurentPoly scaled(long long c) const;

  bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const LaurentPoly& o) const { return terms_ != o.terms_; }
  bool operator<(const LaurentPoly& o) const { return terms_ < o.terms_; }

  const std::map<int, long long>& terms() const { return terms_; }
  std::string str() const;

 private:
  void set(int exp, long long coeff);
  std::map<int, long long> terms_;  // exponent -> coefficient, no zeros stored
};

}  // namespace arcring
