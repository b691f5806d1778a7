"""Rational transfer functions in s with real coefficients.

Coefficients are stored in ascending powers of s.  After every arithmetic
operation the fraction is reduced by cancelling matching root pairs of the
numerator and denominator and the denominator is normalised to a monic
leading coefficient, which keeps representations canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import DEFAULT_GEOMETRY, GeometryConfig
from .roots import durand_kerner, polyval_ascending


class TransferFunctionError(ValueError):
    pass


class DegreeOverflowError(TransferFunctionError):
    pass


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.nonzero(np.abs(c) > 0)[0]
    if len(nz) == 0:
        return np.zeros(1)
    return c[: nz[-1] + 1]


def _polymul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)


def _polyadd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(len(a), len(b))
    out = np.zeros(n)
    out[: len(a)] += a
    out[: len(b)] += b
    return out


@dataclass(frozen=True)
class TransferFunction:
    """Real-coefficient rational function of s, reduced and normalised."""

    num: np.ndarray
    den: np.ndarray
    label: str = ""
    # diagnostics produced during reduction (near-cancellations not removed)
    warnings: tuple = field(default_factory=tuple, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "num", np.atleast_1d(np.asarray(self.num, dtype=float)))
        object.__setattr__(self, "den", np.atleast_1d(np.asarray(self.den, dtype=float)))

    # --- basic queries -------------------------------------------------

    @property
    def num_degree(self) -> int:
        return len(_trim(self.num)) - 1

    @property
    def den_degree(self) -> int:
        return len(_trim(self.den)) - 1

    def is_proper(self) -> bool:
        return self.num_degree <= self.den_degree

    def is_strictly_proper(self) -> bool:
        return self.num_degree < self.den_degree

    def is_constant(self) -> bool:
        return self.num_degree == 0 and self.den_degree == 0

    def constant_value(self) -> float:
        if not self.is_constant():
            raise TransferFunctionError("not a constant transfer function")
        return float(self.num[0] / self.den[0])

    def __call__(self, s):
        """Evaluate at (an array of) complex frequencies."""
        s = np.asarray(s, dtype=complex)
        n = polyval_ascending(self.num.astype(complex), s)
        d = polyval_ascending(self.den.astype(complex), s)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = n / d
        return out

    def poles(self, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> np.ndarray:
        den = _trim(self.den)
        if len(den) == 1:
            return np.zeros(0, dtype=complex)
        return durand_kerner(den, tol=cfg.root_tol, max_iter=cfg.root_max_iter)

    def zeros(self, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> np.ndarray:
        num = _trim(self.num)
        if len(num) == 1:
            return np.zeros(0, dtype=complex)
        return durand_kerner(num, tol=cfg.root_tol, max_iter=cfg.root_max_iter)

    def unstable_pole_count(self, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> int:
        """Poles with Re > tolerance; imaginary-axis poles do not count."""
        return int(np.sum(self.poles(cfg).real > cfg.pole_class_tol))

    def imag_axis_poles(self, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> np.ndarray:
        p = self.poles(cfg)
        return p[np.abs(p.real) <= cfg.pole_class_tol]

    def is_stable(self, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> bool:
        p = self.poles(cfg)
        return bool(np.all(p.real < -cfg.pole_class_tol))

    def __repr__(self):
        lbl = f" {self.label!r}" if self.label else ""
        return f"TransferFunction({list(self.num)}, {list(self.den)}{lbl})"

    def text(self) -> str:
        return f"({_poly_text(self.num)})/({_poly_text(self.den)})"


def _poly_text(c: np.ndarray) -> str:
    terms = []
    for k, a in enumerate(c):
        if a == 0:
            continue
        if k == 0:
            terms.append(f"{a:g}")
        elif k == 1:
            terms.append(f"{a:g}*s")
        else:
            terms.append(f"{a:g}*s^{k}")
    return " + ".join(terms) if terms else "0"


def make_tf(num, den=(1.0,), label: str = "",
            cfg: GeometryConfig = DEFAULT_GEOMETRY) -> TransferFunction:
    """Build a reduced, denominator-normalised transfer function."""
    num = _trim(np.atleast_1d(np.asarray(num, dtype=float)))
    den = _trim(np.atleast_1d(np.asarray(den, dtype=float)))
    if len(den) == 1 and den[0] == 0.0:
        raise TransferFunctionError("denominator is the zero polynomial")
    if max(len(num), len(den)) - 1 > cfg.degree_cap:
        raise DegreeOverflowError(
            f"polynomial degree exceeds the configured cap of {cfg.degree_cap}")
    num, den, warn = _reduce(num, den, cfg)
    lead = den[-1]
    return TransferFunction(num / lead, den / lead, label=label, warnings=tuple(warn))


def _reduce(num: np.ndarray, den: np.ndarray, cfg: GeometryConfig):
    """Cancel common num/den root pairs within cfg.cancel_tol."""
    warn: list[str] = []
    if np.all(num == 0):
        return np.zeros(1), np.ones(1), warn
    if len(num) == 1 or len(den) == 1:
        return num, den, warn
    zs = list(durand_kerner(num, tol=cfg.root_tol, max_iter=cfg.root_max_iter))
    ps = list(durand_kerner(den, tol=cfg.root_tol, max_iter=cfg.root_max_iter))
    kept_z = []
    cancelled = 0
    for z in zs:
        scale = max(1.0, abs(z))
        hit = None
        best = np.inf
        for i, p in enumerate(ps):
            d = abs(z - p)
            if d < best:
                best, hit = d, i
        if hit is not None and best <= cfg.cancel_tol * scale:
            ps.pop(hit)
            cancelled += 1
        else:
            if hit is not None and best <= cfg.near_cancel_tol * scale:
                warn.append(
                    f"near pole/zero cancellation at {z:.6g} (mismatch {best:.3g})")
            kept_z.append(z)
    if cancelled == 0:
        return num, den, warn
    new_num = num[-1] * _poly_from_roots(kept_z)
    new_den = den[-1] * _poly_from_roots(ps)
    return new_num, new_den, warn


def _poly_from_roots(roots) -> np.ndarray:
    c = np.array([1.0 + 0j])
    for r in roots:
        c = np.convolve(c, np.array([-r, 1.0 + 0j]))
    if np.max(np.abs(c.imag)) > 1e-8 * max(1.0, np.max(np.abs(c.real))):
        # conjugate pairs should have cancelled; fall back to the real part
        pass
    return c.real


# --- arithmetic --------------------------------------------------------


def tf_add(f: TransferFunction, g, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> TransferFunction:
    g = as_tf(g)
    num = _polyadd(_polymul(f.num, g.den), _polymul(g.num, f.den))
    den = _polymul(f.den, g.den)
    return make_tf(num, den, cfg=cfg)


def tf_sub(f: TransferFunction, g, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> TransferFunction:
    return tf_add(f, tf_scale(-1.0, as_tf(g), cfg=cfg), cfg=cfg)


def tf_mul(f: TransferFunction, g, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> TransferFunction:
    g = as_tf(g)
    return make_tf(_polymul(f.num, g.num), _polymul(f.den, g.den), cfg=cfg)


def tf_inverse(f: TransferFunction, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> TransferFunction:
    if np.all(f.num == 0):
        raise TransferFunctionError("cannot invert the zero transfer function")
    return make_tf(f.den, f.num, cfg=cfg)


def tf_scale(alpha: float, f: TransferFunction,
             cfg: GeometryConfig = DEFAULT_GEOMETRY) -> TransferFunction:
    if alpha == 0:
        raise TransferFunctionError("scale factor must be nonzero")
    return make_tf(alpha * f.num, f.den, cfg=cfg)


def tf_div(f: TransferFunction, g, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> TransferFunction:
    return tf_mul(f, tf_inverse(as_tf(g), cfg=cfg), cfg=cfg)


def tf_pow(f: TransferFunction, k: int, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> TransferFunction:
    if k == 0:
        return make_tf([1.0])
    base = f if k > 0 else tf_inverse(f, cfg=cfg)
    out = base
    for _ in range(abs(k) - 1):
        out = tf_mul(out, base, cfg=cfg)
    return out


def as_tf(x) -> TransferFunction:
    if isinstance(x, TransferFunction):
        return x
    if isinstance(x, (int, float)):
        return make_tf([float(x)])
    raise TypeError(f"cannot interpret {x!r} as a transfer function")


TF_ONE = make_tf([1.0])
TF_S = make_tf([0.0, 1.0])


# --- text syntax --------------------------------------------------------
# ratio of polynomials in s, e.g. "(3)/((s-2)*(s/10+1))"


class TFSyntaxError(TransferFunctionError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def parse_tf(text: str, cfg: GeometryConfig = DEFAULT_GEOMETRY,
             label: str = "") -> TransferFunction:
    """Parse transfer-function text with +, -, *, /, ^int, parentheses and s."""
    parser = _TFParser(text, cfg)
    tf = parser.parse()
    return make_tf(tf.num, tf.den, label=label or text.strip(), cfg=cfg)


class _TFParser:
    def __init__(self, text: str, cfg: GeometryConfig):
        self.text = text
        self.pos = 0
        self.cfg = cfg

    def parse(self) -> TransferFunction:
        tf = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise TFSyntaxError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return tf

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> TransferFunction:
        left = self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                left = tf_add(left, self.term(), cfg=self.cfg)
            elif ch == "-":
                self.pos += 1
                left = tf_sub(left, self.term(), cfg=self.cfg)
            else:
                return left

    def term(self) -> TransferFunction:
        left = self.unary()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                left = tf_mul(left, self.unary(), cfg=self.cfg)
            elif ch == "/":
                self.pos += 1
                left = tf_div(left, self.unary(), cfg=self.cfg)
            else:
                return left

    def unary(self) -> TransferFunction:
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return tf_scale(-1.0, self.unary(), cfg=self.cfg)
        if ch == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self) -> TransferFunction:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            sign = 1
            if self.peek() == "-":
                sign = -1
                self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == start:
                raise TFSyntaxError("expected integer exponent", self.pos)
            k = sign * int(self.text[start:self.pos])
            return tf_pow(base, k, cfg=self.cfg)
        return base

    def atom(self) -> TransferFunction:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            tf = self.expr()
            if self.peek() != ")":
                raise TFSyntaxError("expected ')'", self.pos)
            self.pos += 1
            return tf
        if ch in ("s", "S"):
            self.pos += 1
            return TF_S
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isdigit() or
                                             self.text[self.pos] in ".eE" or
                                             (self.text[self.pos] in "+-" and
                                              self.pos > start and
                                              self.text[self.pos - 1] in "eE")):
            self.pos += 1
        if self.pos == start:
            raise TFSyntaxError(f"unexpected {ch!r}" if ch else "unexpected end of input",
                                self.pos)
        try:
            value = float(self.text[start:self.pos])
        except ValueError:
            raise TFSyntaxError(f"bad number {self.text[start:self.pos]!r}", start) from None
        return make_tf([value])
