"""permquad: permutation-quadrinomial verification over F_{q^2}.

Submodules:
  ff          field contexts and element arithmetic
  poly        polynomials, rational maps on P^1, ramification
  criteria    closed-form permutation criterion and fiber geometry
  oracle      brute-force permutation tests and reductions
  families    constructive generation of all permutation quadrinomials
  identities  exact bivariate/univariate product identities
  conjectures parametric-family checkers with oracle cross-checks
  sweeps      vectorized exhaustive/random criterion-vs-oracle sweeps
  cli         command-line front end
"""

from .ff import FieldCtx, build_field, gcd_power_rule, ord2

__all__ = ["FieldCtx", "build_field", "gcd_power_rule", "ord2"]
__version__ = "0.1.0"
