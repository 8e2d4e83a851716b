"""Gaussian-rational roots of univariate polynomials.

The rational root theorem lifts to Z[i] because it is a Euclidean domain: a
root written in lowest terms b/g has b dividing the trailing and g dividing
the leading Gaussian-integer coefficient.  Divisor enumeration factors the
integer norm (trial division plus Pollard rho) and splits each rational
prime into Gaussian primes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from ..errors import ResourceLimit
from .poly import SparsePoly
from .scalars import GaussianRational, ZERO

_TRIAL_LIMIT = 100_000
_CANDIDATE_BUDGET = 400_000


# -- Gaussian integers as complex int pairs -----------------------------------


def _gi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gi_norm(a):
    return a[0] * a[0] + a[1] * a[1]


def _gi_divmod(a, b):
    """Nearest-quotient division making Z[i] Euclidean."""
    nb = _gi_norm(b)
    xr = a[0] * b[0] + a[1] * b[1]
    xi = a[1] * b[0] - a[0] * b[1]
    qr = (2 * xr + nb) // (2 * nb)
    qi = (2 * xi + nb) // (2 * nb)
    q = (qr, qi)
    r = (a[0] - (q[0] * b[0] - q[1] * b[1]), a[1] - (q[0] * b[1] + q[1] * b[0]))
    return q, r


def _gi_exact_div(a, b):
    q, r = _gi_divmod(a, b)
    return q if r == (0, 0) else None


# -- integer factorization ------------------------------------------------------


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    x, c = 2, 1
    while True:
        y = x
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = int_gcd(abs(x - y), n)
        if d != n:
            return d
        x, c = x + 1, c + 1
        if c > 50:
            raise ResourceLimit(f"could not factor {n}")


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor_int(n: int) -> dict:
    """Prime factorization of a positive integer."""
    if n <= 0:
        raise ValueError("factor_int needs a positive integer")
    factors = {}
    for p in range(2, _TRIAL_LIMIT):
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return factors


def _sqrt_minus_one_mod(p: int) -> int:
    """A square root of -1 mod p for a prime p = 1 (mod 4)."""
    for q in range(2, p):
        s = pow(q, (p - 1) // 4, p)
        if s * s % p == p - 1:
            return s
    raise ArithmeticError(f"no sqrt(-1) mod {p}")


def _gaussian_primes_above(p: int):
    """Gaussian primes dividing the rational prime p."""
    if p == 2:
        return [(1, 1)]
    if p % 4 == 3:
        return [(p, 0)]
    s = _sqrt_minus_one_mod(p)
    # gcd(p, s + i) in Z[i]
    a, b = (p, 0), (s, 1)
    while b != (0, 0):
        _, r = _gi_divmod(a, b)
        a, b = b, r
    pi = a
    return [pi, (pi[0], -pi[1])]


def gaussian_divisors(z) -> list:
    """All divisors of a nonzero Gaussian integer, one per associate class."""
    if z == (0, 0):
        raise ValueError("zero has no divisor list")
    norm = _gi_norm(z)
    prime_powers = []
    for p in factor_int(norm) if norm > 1 else {}:
        for pi in _gaussian_primes_above(p):
            e = 0
            w = z
            while True:
                q = _gi_exact_div(w, pi)
                if q is None:
                    break
                w = q
                e += 1
            if e:
                prime_powers.append((pi, e))
    divisors = [(1, 0)]
    for pi, e in prime_powers:
        grown = []
        power = (1, 0)
        for k in range(e + 1):
            grown.extend(_gi_mul(d, power) for d in divisors)
            power = _gi_mul(power, pi)
        divisors = grown
    if len(divisors) > _CANDIDATE_BUDGET:
        raise ResourceLimit("too many Gaussian divisors")
    return divisors


# -- univariate root extraction ------------------------------------------------


def _univariate_coeffs(p: SparsePoly, var: str) -> list:
    """Dense coefficient list c[0..deg] of a univariate polynomial."""
    used = p.used_variables()
    if [v for v in used if v != var]:
        raise ValueError(f"{p} is not univariate in {var}")
    deg = p.degree_in(var)
    coeffs = [ZERO] * (deg + 1)
    if var in p.variables:
        k = p.variables.index(var)
        for exps, c in p.terms.items():
            coeffs[exps[k]] = c
    elif not p.is_zero:
        coeffs[0] = p.constant_value()
    return coeffs


def _eval_coeffs(coeffs, x: GaussianRational) -> GaussianRational:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs, root):
    """Divide by (t - root); returns quotient coefficients (exact)."""
    deg = len(coeffs) - 1
    out = [ZERO] * deg
    acc = ZERO
    for k in range(deg, 0, -1):
        acc = coeffs[k] + acc * root
        out[k - 1] = acc
    if coeffs[0] + acc * root:
        raise ArithmeticError("deflation by a non-root")
    return out


def _clear_to_gaussian_integers(coeffs):
    """Scale to Gaussian-integer coefficient pairs (a, b)."""
    denom = 1
    for c in coeffs:
        denom = denom * c.re.denominator // int_gcd(denom, c.re.denominator)
        denom = denom * c.im.denominator // int_gcd(denom, c.im.denominator)
    return [(int(c.re * denom), int(c.im * denom)) for c in coeffs]


_UNITS = (
    GaussianRational(1),
    GaussianRational(-1),
    GaussianRational(0, 1),
    GaussianRational(0, -1),
)


def gaussian_rational_roots(p: SparsePoly, var: str):
    """All Q(i) roots of p with multiplicities.

    Returns (roots, fully_factored) where roots is a list of
    (root, multiplicity) sorted deterministically, and fully_factored is
    True iff the product of the found linear factors has the full degree.
    """
    coeffs = _univariate_coeffs(p, var)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    if len(coeffs) <= 1:
        return [], True
    roots = []
    # strip roots at zero first
    zero_mult = 0
    while not coeffs[0]:
        coeffs = coeffs[1:]
        zero_mult += 1
    if zero_mult:
        roots.append((ZERO, zero_mult))
    if len(coeffs) > 1:
        ints = _clear_to_gaussian_integers(coeffs)
        candidates = set()
        for num in gaussian_divisors(ints[0]):
            for den in gaussian_divisors(ints[-1]):
                base = GaussianRational(Fraction(num[0]), Fraction(num[1])) / GaussianRational(
                    Fraction(den[0]), Fraction(den[1])
                )
                for u in _UNITS:
                    candidates.add(base * u)
        if len(candidates) > _CANDIDATE_BUDGET:
            raise ResourceLimit("root candidate budget exceeded")
        for cand in sorted(candidates, key=lambda c: c.sort_key()):
            mult = 0
            while len(coeffs) > 1 and not _eval_coeffs(coeffs, cand):
                coeffs = _deflate(coeffs, cand)
                mult += 1
            if mult:
                roots.append((cand, mult))
    fully = len(coeffs) <= 1
    roots.sort(key=lambda rm: rm[0].sort_key())
    return roots, fully
