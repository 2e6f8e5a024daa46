"""Integer polynomials in several variables and the symbolic invariance check.

The two-variable ring uses lex order with ``s > S``; exponent tuples are
ordered by the variable list, so ordinary tuple comparison is the monomial
order.  :func:`verify_invariance` substitutes an assignment of the sixteen
model variables into the move equations and reduces each difference modulo
the Groebner basis :data:`GROEBNER_BASIS`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Sequence

from .cyclotomic import ONE, CycloInt, zeta_pow

MODEL_VARIABLES = ("f0", "f1", "x0", "X0", "x1", "X1", "x2", "X2",
                   "x4", "X4", "x5", "X5", "x8", "X8", "x10", "X10")
RING_VARIABLES = ("s", "S")

Exponent = tuple[int, ...]


class PolynomialError(ValueError):
    pass


class MultiPoly:
    """Sparse polynomial with integer coefficients over a fixed variable list.

    ``terms`` maps exponent tuples to nonzero coefficients.  Instances are
    treated as immutable.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, int] | None = None):
        self.variables = tuple(variables)
        nvars = len(self.variables)
        clean: dict[Exponent, int] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise PolynomialError(f"bad exponent {exp} for variables {self.variables}")
            if coef:
                clean[exp] = clean.get(exp, 0) + coef
        self.terms = {e: c for e, c in clean.items() if c}

    # construction ---------------------------------------------------------
    @classmethod
    def constant(cls, variables, c: int) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str) -> "MultiPoly":
        variables = tuple(variables)
        if name not in variables:
            raise PolynomialError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exp: 1})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] = RING_VARIABLES) -> "MultiPoly":
        return parse_poly(text, variables)

    # ring operations ------------------------------------------------------
    def _check(self, other: "MultiPoly") -> None:
        if self.variables != other.variables:
            raise PolynomialError(f"variable mismatch: {self.variables} vs {other.variables}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, int):
            return MultiPoly.constant(self.variables, other)
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolynomialError("negative exponent")
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = MultiPoly.constant(self.variables, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    # monomial order -------------------------------------------------------
    def leading(self) -> tuple[Exponent, int]:
        """Leading (exponent, coefficient) in lex order along ``variables``."""
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        exp = max(self.terms)
        return exp, self.terms[exp]

    def occurring_variables(self) -> set[str]:
        return {v for e in self.terms for v, k in zip(self.variables, e) if k}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exp in sorted(self.terms, reverse=True):
            coef = self.terms[exp]
            mono = " ".join(v if k == 1 else f"{v}^{k}"
                            for v, k in zip(self.variables, exp) if k)
            mag = abs(coef)
            body = mono if (mono and mag == 1) else (f"{mag} {mono}".strip())
            sign = "-" if coef < 0 else "+"
            pieces.append((sign, body))
        head_sign, head = pieces[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({str(self)!r}, variables={self.variables})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|([+\-*])|(\S))")


def parse_poly(text: str, variables: Sequence[str] = RING_VARIABLES) -> MultiPoly:
    """Parse e.g. ``"f0^3 x0 X0 + 2 f1 - 1"``; juxtaposition multiplies."""
    variables = tuple(variables)
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, name, caret, op, junk = m.groups()
        if junk:
            raise PolynomialError(f"unexpected character {junk!r} in {text!r}")
        tokens.append(("num", int(num)) if num else
                      ("name", name) if name else
                      ("^", None) if caret else ("op", op))
    if not tokens:
        raise PolynomialError("empty polynomial")

    result = MultiPoly(variables)
    i = 0
    sign = 1
    pending = False
    while i < len(tokens):
        if tokens[i] == ("op", "+"):
            pending = True
            i += 1
            continue
        if tokens[i] == ("op", "-"):
            sign = -sign
            pending = True
            i += 1
            continue
        pending = False
        term = MultiPoly.constant(variables, sign)
        sign = 1
        saw_factor = False
        while i < len(tokens) and tokens[i][0] in ("num", "name", "op") and tokens[i][1] not in ("+", "-"):
            kind, val = tokens[i]
            if kind == "op":  # explicit '*'
                i += 1
                continue
            i += 1
            if kind == "num":
                factor = MultiPoly.constant(variables, val)
            else:
                if val not in variables:
                    raise PolynomialError(f"unknown variable {val!r}")
                factor = MultiPoly.var(variables, val)
            if i < len(tokens) and tokens[i][0] == "^":
                if i + 1 >= len(tokens) or tokens[i + 1][0] != "num":
                    raise PolynomialError(f"exponent expected after '^' in {text!r}")
                factor = factor ** tokens[i + 1][1]
                i += 2
            term = term * factor
            saw_factor = True
        if not saw_factor:
            raise PolynomialError(f"dangling sign in {text!r}")
        result = result + term
    if pending:
        raise PolynomialError(f"dangling sign in {text!r}")
    return result


# ---------------------------------------------------------------------------
# Division and the fixed Groebner basis

def reduce(p: MultiPoly, basis: Sequence[MultiPoly]) -> MultiPoly:
    """Remainder of ``p`` under multivariate division by the ordered ``basis``.

    Always divides by the first basis element whose leading monomial divides
    the current leading term.  Coefficients stay integral, so each basis
    leading coefficient must divide the coefficient it cancels.
    """
    if not basis:
        raise PolynomialError("reduce() needs a non-empty basis")
    leads = []
    for b in basis:
        b._check(p)
        if b.is_zero():
            raise PolynomialError("basis contains the zero polynomial")
        leads.append(b.leading())

    rem: dict[Exponent, int] = {}
    work = dict(p.terms)
    while work:
        exp = max(work)
        coef = work[exp]
        for b, (bexp, bcoef) in zip(basis, leads):
            if all(x >= y for x, y in zip(exp, bexp)):
                if coef % bcoef:
                    raise PolynomialError(
                        f"leading coefficient {bcoef} does not divide {coef}")
                q = coef // bcoef
                shift = tuple(x - y for x, y in zip(exp, bexp))
                for e, c in b.terms.items():
                    t = tuple(a + s for a, s in zip(e, shift))
                    v = work.get(t, 0) - q * c
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            rem[exp] = coef
            del work[exp]
    return MultiPoly(p.variables, rem)


def _ring(text: str) -> MultiPoly:
    return parse_poly(text, RING_VARIABLES)


GROEBNER_BASIS = (
    _ring("S^4 + S^3 + S^2 + S + 1"),
    _ring("s^3 + s^2 S + s^2 + s S^2 + s S + s + S^3 + S^2 + S + 1"),
)

IDEAL_GENERATORS = (
    _ring("1 + s + s^2 + s^3 + s^4"),
    _ring("1 + S + S^2 + S^3 + S^4"),
    _ring("s^4 + s^3 S + s^2 S^2 + s S^3 + S^4"),
)


def evaluate(p: MultiPoly, values: Mapping[str, CycloInt] | None = None) -> CycloInt:
    """Evaluate a polynomial at cyclotomic values (default ``s=zeta, S=zeta^4``)."""
    if values is None:
        values = {"s": zeta_pow(1, 1, 1), "S": zeta_pow(1, 4, 1)}
    missing = [v for v in p.occurring_variables() if v not in values]
    if missing:
        raise PolynomialError(f"no value for variable {sorted(missing)[0]!r}")
    acc = [0, 0, 0, 0]
    cache: dict[tuple[str, int], CycloInt] = {}
    for exp, coef in p.terms.items():
        term = ONE
        for v, k in zip(p.variables, exp):
            if k:
                key = (v, k)
                if key not in cache:
                    cache[key] = values[v] ** k
                term = term * cache[key]
        acc = [a + coef * t for a, t in zip(acc, term.as_tuple())]
    return CycloInt(*acc)


# ---------------------------------------------------------------------------
# Assignments and equations

@dataclass(frozen=True)
class Assignment:
    """Value in ``Z[s, S]`` for each of the sixteen model variables."""

    values: Mapping[str, MultiPoly]

    def __post_init__(self):
        missing = [v for v in MODEL_VARIABLES if v not in self.values]
        extra = [v for v in self.values if v not in MODEL_VARIABLES]
        if missing or extra:
            raise PolynomialError(f"assignment must cover exactly the 16 model variables "
                                  f"(missing={missing}, unexpected={extra})")

    def __getitem__(self, name: str) -> MultiPoly:
        return self.values[name]

    def replace(self, **changes: str | MultiPoly) -> "Assignment":
        new = dict(self.values)
        for k, v in changes.items():
            new[k] = _ring(v) if isinstance(v, str) else v
        return Assignment(new)

    def numeric(self) -> dict[str, CycloInt]:
        return {k: evaluate(v) for k, v in self.values.items()}


DEFAULT_ASSIGNMENT = Assignment({name: _ring(text) for name, text in {
    "f0": "s^2 S^2",
    "f1": "s^4 + S^4",
    "x0": "s + S",
    "X0": "s + S",
    "x1": "S",
    "X1": "s",
    "x10": "-s^4 S^2",
    "X10": "-s^2 S^4",
    "x2": "s",
    "X2": "S",
    "x4": "S",
    "X4": "s",
    "x5": "-s^2 S^4",
    "X5": "-s^4 S^2",
    "x8": "s",
    "X8": "S",
}.items()})


@dataclass(frozen=True)
class Equation:
    lhs: MultiPoly
    rhs: MultiPoly
    text: str

    @property
    def difference(self) -> MultiPoly:
        return self.lhs - self.rhs


def parse_equations(text: str) -> list[Equation]:
    """One ``LHS = RHS`` per line; ``#`` starts a comment."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count("=") != 1:
            raise PolynomialError(f"line {lineno}: expected exactly one '=' in {line!r}")
        lhs, rhs = line.split("=")
        try:
            out.append(Equation(parse_poly(lhs, MODEL_VARIABLES),
                                parse_poly(rhs, MODEL_VARIABLES), line))
        except PolynomialError as exc:
            raise PolynomialError(f"line {lineno}: {exc}") from None
    return out


def load_equations(path=None) -> list[Equation]:
    if path is None:
        text = resources.files("facesum").joinpath("data/equations.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_equations(text)


def substitute(eq: MultiPoly, a: Assignment | Mapping[str, MultiPoly]) -> MultiPoly:
    """Substitute ``a`` into a polynomial in the model variables and expand."""
    values = a.values if isinstance(a, Assignment) else a
    for v in sorted(eq.occurring_variables()):
        if v not in values:
            raise PolynomialError(f"assignment has no value for variable {v!r}")
    result = MultiPoly(RING_VARIABLES)
    powers: dict[tuple[str, int], MultiPoly] = {}
    for exp, coef in eq.terms.items():
        term = MultiPoly.constant(RING_VARIABLES, coef)
        for v, k in zip(eq.variables, exp):
            if k:
                if (v, k) not in powers:
                    powers[(v, k)] = values[v] ** k
                term = term * powers[(v, k)]
        result = result + term
    return result


# ---------------------------------------------------------------------------
# Verification report

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "status": "PASS" if self.passed else "FAIL",
                "detail": self.detail}


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    lambda_plus: CycloInt | None = None
    lambda_minus: CycloInt | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "lambda_plus": self.lambda_plus.to_json() if self.lambda_plus else None,
            "lambda_minus": self.lambda_minus.to_json() if self.lambda_minus else None,
        }


_CHAINS = (
    ("curl chain (+): f0 X0 + f1 X4 = f0 X10", "f0 X0 + f1 X4 - f0 X10"),
    ("curl chain (+): f0 X10 = f0 X1 + f1 X5", "f0 X10 - f0 X1 - f1 X5"),
    ("curl chain (-): f0 x0 + f1 x4 = f0 x10", "f0 x0 + f1 x4 - f0 x10"),
    ("curl chain (-): f0 x10 = f0 x1 + f1 x5", "f0 x10 - f0 x1 - f1 x5"),
)


def verify_invariance(a: Assignment = DEFAULT_ASSIGNMENT,
                      equations: Sequence[Equation] | None = None,
                      basis: Sequence[MultiPoly] = GROEBNER_BASIS) -> VerificationReport:
    """Check the move equations and curl identities for an assignment.

    Each equation passes when ``LHS - RHS`` reduces to zero modulo ``basis``
    and also vanishes at ``s = zeta, S = zeta^4``.  The last entry checks that
    the two curl factors are mutually inverse.
    """
    if equations is None:
        equations = load_equations()
    report = VerificationReport()
    for i, eq in enumerate(equations, 1):
        diff = substitute(eq.difference, a)
        rem = reduce(diff, basis)
        num = evaluate(diff)
        ok = rem.is_zero() and num.is_zero()
        detail = "" if ok else f"remainder {rem}; value at zeta {num}"
        report.checks.append(Check(f"equation {i}: {eq.text}", ok, detail))

    for name, text in _CHAINS:
        diff = substitute(parse_poly(text, MODEL_VARIABLES), a)
        rem = reduce(diff, basis)
        report.checks.append(Check(name, rem.is_zero(), "" if rem.is_zero() else f"remainder {rem}"))

    lam_p = evaluate(substitute(parse_poly("f0 X0 + f1 X4", MODEL_VARIABLES), a))
    lam_m = evaluate(substitute(parse_poly("f0 x0 + f1 x4", MODEL_VARIABLES), a))
    prod = lam_p * lam_m
    report.lambda_plus, report.lambda_minus = lam_p, lam_m
    report.checks.append(Check("curl factors: lambda+ * lambda- = 1", prod == ONE,
                               f"lambda+ = {lam_p}, lambda- = {lam_m}, product = {prod}"))
    return report
