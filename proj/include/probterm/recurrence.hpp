#pragma once

#include "probterm/exp_polynomial.hpp"

namespace probterm {

// y(0) = initial, y(i+1) = coefficient * y(i) + inhomogeneous(i)
struct FirstOrderRecurrence {
  Rational coefficient;
  ExpPolynomial inhomogeneous;
  SymCoeff initial;
};

ExpPolynomial solve(const FirstOrderRecurrence& rec);

}  // namespace probterm
