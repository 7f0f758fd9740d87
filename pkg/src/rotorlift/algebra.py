"""Dense real Clifford algebra Cl(p,q) over bitmask-indexed blades.

A basis blade with ascending generator indices a_1 < ... < a_k is stored at
array index ``mask`` where bit (a-1) of ``mask`` is set iff generator e_a
occurs.  A multivector is a dense float64 array of 2**n coefficients.  All
values are immutable after construction and every operation is a pure
function, so everything here is safe to share across threads.

Multiplication signs are looked up in per-signature tables that are built
once, frozen (read-only arrays), and cached for the lifetime of the process.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .errors import NotAVersorError, SignatureMismatchError

DEFAULT_TOLERANCE = 1e-10

# Dense storage is 2**n coefficients and the sign table is 4**n bytes, so the
# dimension is capped.  The default cap keeps the largest algebra at 4096
# coefficients / 16 MiB of tables.
DEFAULT_MAX_DIMENSION = 12
_HARD_MAX_DIMENSION = 14

_max_dimension = DEFAULT_MAX_DIMENSION


def max_dimension() -> int:
    """Current cap on n = p + q."""
    return _max_dimension


def set_max_dimension(n: int) -> None:
    """Raise or lower the dimension cap (table memory grows as 4**n)."""
    if not 1 <= n <= _HARD_MAX_DIMENSION:
        raise ValueError(f"max dimension must be in 1..{_HARD_MAX_DIMENSION}, got {n}")
    global _max_dimension
    _max_dimension = n


@dataclass(frozen=True)
class Signature:
    """Metric signature (p, q): p generators squaring to +1, then q to -1."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"signature counts must be non-negative, got ({self.p}, {self.q})")
        n = self.p + self.q
        if n < 1:
            raise ValueError("need at least one generator")
        if n > _max_dimension:
            raise ValueError(
                f"n = {n} exceeds the dimension cap {_max_dimension}; "
                "raise it with set_max_dimension()"
            )

    @property
    def n(self) -> int:
        return self.p + self.q

    def metric(self) -> np.ndarray:
        """Diagonal of the metric as a length-n array of +-1."""
        return _get_tables(self).metric.copy()

    def __str__(self) -> str:
        return f"Cl({self.p},{self.q})"


class _SignatureTables:
    """Read-only multiplication tables for one signature."""

    __slots__ = (
        "sig", "n", "size", "full_mask", "metric", "grades", "masks",
        "signs", "grade_signs", "reverse_signs", "conjugate_signs",
        "blade_square", "xor_flat",
    )

    # Above this dimension the flattened XOR index for the dense product
    # would dominate memory; fall back to the row-loop product.
    _XOR_TABLE_MAX_N = 10

    def __init__(self, sig: Signature):
        n = sig.n
        size = 1 << n
        masks16 = np.arange(size, dtype=np.uint16)

        grades = np.zeros(size, dtype=np.uint8)
        for a in range(n):
            grades += ((masks16 >> a) & 1).astype(np.uint8)

        # Parity of the transposition count needed to sort e_A e_B, plus the
        # metric signs of the annihilated common generators.
        parity = np.zeros((size, size), dtype=np.uint8)
        for k in range(1, n):
            parity ^= grades[(masks16[:, None] >> k) & masks16[None, :]] & 1
        negative_bits = (((1 << n) - 1) >> sig.p) << sig.p
        parity ^= grades[(masks16[:, None] & masks16[None, :]) & negative_bits] & 1
        signs = (1 - 2 * parity.astype(np.int8)).astype(np.int8)

        k = grades.astype(np.int64)
        grade_signs = np.where(k % 2 == 0, 1, -1).astype(np.int8)
        reverse_signs = np.where((k * (k - 1) // 2) % 2 == 0, 1, -1).astype(np.int8)
        conjugate_signs = np.where((k * (k + 1) // 2) % 2 == 0, 1, -1).astype(np.int8)
        blade_square = signs.diagonal().copy()

        metric = np.ones(n, dtype=np.float64)
        metric[sig.p:] = -1.0

        xor_flat = None
        if n <= self._XOR_TABLE_MAX_N:
            xor_flat = (masks16[:, None] ^ masks16[None, :]).ravel().astype(np.intp)

        self.sig = sig
        self.n = n
        self.size = size
        self.full_mask = size - 1
        self.metric = metric
        self.grades = grades
        self.masks = np.arange(size)
        self.signs = signs
        self.grade_signs = grade_signs
        self.reverse_signs = reverse_signs
        self.conjugate_signs = conjugate_signs
        self.blade_square = blade_square
        self.xor_flat = xor_flat
        for name in ("metric", "grades", "masks", "signs", "grade_signs",
                     "reverse_signs", "conjugate_signs", "blade_square"):
            getattr(self, name).setflags(write=False)
        if xor_flat is not None:
            xor_flat.setflags(write=False)


_tables_lock = threading.Lock()
_tables: dict[tuple[int, int], _SignatureTables] = {}


def _get_tables(sig: Signature) -> _SignatureTables:
    key = (sig.p, sig.q)
    tables = _tables.get(key)
    if tables is None:
        with _tables_lock:
            tables = _tables.get(key)
            if tables is None:
                tables = _SignatureTables(sig)
                _tables[key] = tables
    return tables


def blade_product(a: int, b: int, sig: Signature) -> tuple[int, float]:
    """Product of two basis blades: returns (result mask, sign in {+1, -1})."""
    t = _get_tables(sig)
    if not (0 <= a < t.size and 0 <= b < t.size):
        raise ValueError(f"blade mask out of range for {sig}")
    return a ^ b, float(t.signs[a, b])


def blade_label(mask: int, n: int) -> str:
    """Human-readable blade name: ascending generator indices, '' for the scalar.

    Indices are joined directly up to n = 9 and comma-separated beyond.
    """
    indices = [a + 1 for a in range(n) if mask >> a & 1]
    joiner = "," if n >= 10 else ""
    return joiner.join(str(a) for a in indices)


class Multivector:
    """Immutable element of Cl(p,q) as a dense coefficient array.

    ``*`` is the geometric product (or scaling when one side is a number),
    ``~`` is reversion, ``+``/``-`` are componentwise.
    """

    __slots__ = ("sig", "coeffs")

    def __init__(self, sig: Signature, coeffs):
        arr = np.array(coeffs, dtype=np.float64)
        if arr.shape != (1 << sig.n,):
            raise ValueError(
                f"{sig} needs exactly {1 << sig.n} coefficients, got shape {arr.shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, sig: Signature) -> "Multivector":
        return cls(sig, np.zeros(1 << sig.n))

    @classmethod
    def scalar(cls, sig: Signature, value: float) -> "Multivector":
        arr = np.zeros(1 << sig.n)
        arr[0] = value
        return cls(sig, arr)

    @classmethod
    def basis_vector(cls, sig: Signature, a: int) -> "Multivector":
        """Generator e_a, 1-based."""
        if not 1 <= a <= sig.n:
            raise ValueError(f"generator index {a} out of range 1..{sig.n}")
        arr = np.zeros(1 << sig.n)
        arr[1 << (a - 1)] = 1.0
        return cls(sig, arr)

    @classmethod
    def basis_blade(cls, sig: Signature, mask: int) -> "Multivector":
        if not 0 <= mask < (1 << sig.n):
            raise ValueError(f"blade mask {mask} out of range for {sig}")
        arr = np.zeros(1 << sig.n)
        arr[mask] = 1.0
        return cls(sig, arr)

    @classmethod
    def pseudoscalar(cls, sig: Signature) -> "Multivector":
        return cls.basis_blade(sig, (1 << sig.n) - 1)

    @classmethod
    def from_vector(cls, sig: Signature, coords) -> "Multivector":
        """Grade-1 element from n coordinates."""
        coords = np.asarray(coords, dtype=np.float64)
        if coords.shape != (sig.n,):
            raise ValueError(f"expected {sig.n} coordinates, got shape {coords.shape}")
        arr = np.zeros(1 << sig.n)
        for a in range(sig.n):
            arr[1 << a] = coords[a]
        return cls(sig, arr)

    @classmethod
    def from_terms(cls, sig: Signature, terms: dict) -> "Multivector":
        """Build from {(1, 2): -0.5, (): 1.0} style index tuples."""
        arr = np.zeros(1 << sig.n)
        for indices, value in terms.items():
            mask = 0
            prev = 0
            for a in indices:
                if not (isinstance(a, int) and prev < a <= sig.n):
                    raise ValueError(f"bad blade index tuple {indices!r} for {sig}")
                mask |= 1 << (a - 1)
                prev = a
            arr[mask] += value
        return cls(sig, arr)

    # -- inspection --------------------------------------------------------

    def __getitem__(self, mask: int) -> float:
        return float(self.coeffs[mask])

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    @property
    def pseudoscalar_part(self) -> float:
        return float(self.coeffs[-1])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def norm(self) -> float:
        """Euclidean norm of the coefficient array."""
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self, tol: float = DEFAULT_TOLERANCE) -> bool:
        return self.max_abs() <= tol

    def approx_eq(self, other: "Multivector", tol: float = DEFAULT_TOLERANCE) -> bool:
        return self.sig == other.sig and float(np.max(np.abs(self.coeffs - other.coeffs))) <= tol

    def grades_present(self, tol: float = DEFAULT_TOLERANCE) -> set[int]:
        t = _get_tables(self.sig)
        return {int(k) for k in np.unique(t.grades[np.abs(self.coeffs) > tol])}

    def terms(self, tol: float = 0.0) -> dict[int, float]:
        """Mask -> coefficient for entries with |c| > tol, ascending mask."""
        out = {}
        for mask in np.flatnonzero(np.abs(self.coeffs) > tol):
            out[int(mask)] = float(self.coeffs[mask])
        return out

    def __repr__(self) -> str:
        parts = []
        for mask, value in self.terms(tol=0.0).items():
            label = blade_label(mask, self.sig.n)
            parts.append(f"{value:+g}*e{label}" if label else f"{value:+g}")
            if len(parts) == 10:
                parts.append("...")
                break
        body = " ".join(parts) if parts else "0"
        return f"<{self.sig} {body}>"

    # -- arithmetic --------------------------------------------------------

    def _check_sig(self, other: "Multivector") -> None:
        if self.sig != other.sig:
            raise SignatureMismatchError(f"cannot combine {self.sig} with {other.sig}")

    def __add__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check_sig(other)
        return Multivector(self.sig, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check_sig(other)
        return Multivector(self.sig, self.coeffs - other.coeffs)

    def __neg__(self):
        return Multivector(self.sig, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if isinstance(other, (int, float)):
            return Multivector(self.sig, self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Multivector(self.sig, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Multivector(self.sig, self.coeffs / float(other))
        return NotImplemented

    def __invert__(self):
        return involution(self, "reverse")

    def grade(self, k: int) -> "Multivector":
        return grade_project(self, k)

    def even_part(self) -> "Multivector":
        t = _get_tables(self.sig)
        return Multivector(self.sig, np.where(t.grades % 2 == 0, self.coeffs, 0.0))

    def odd_part(self) -> "Multivector":
        t = _get_tables(self.sig)
        return Multivector(self.sig, np.where(t.grades % 2 == 1, self.coeffs, 0.0))


# -- product kernels -------------------------------------------------------

# Below this many nonzero coefficients an operand is treated as sparse and the
# product runs as a short loop over its support instead of the dense kernel.
_SPARSE_CUTOFF = 8


def _product_arrays(t: _SignatureTables, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    nu = int(np.count_nonzero(u))
    nv = int(np.count_nonzero(v))
    result_dtype = np.result_type(u, v)
    if nu == 0 or nv == 0:
        return np.zeros(t.size, dtype=result_dtype)
    if (
        t.xor_flat is not None
        and result_dtype == np.float64
        and min(nu, nv) > _SPARSE_CUTOFF
    ):
        outer = (u[:, None] * v[None, :]) * t.signs
        return np.bincount(t.xor_flat, weights=outer.ravel(), minlength=t.size)
    out = np.zeros(t.size, dtype=result_dtype)
    if nu <= nv:
        for a in np.flatnonzero(u):
            out[a ^ t.masks] += u[a] * (t.signs[a, :] * v)
    else:
        for b in np.flatnonzero(v):
            out[t.masks ^ b] += (u * t.signs[:, b]) * v[b]
    return out


def _blade_mul_right(t: _SignatureTables, arr: np.ndarray, mask: int, scale: float = 1.0) -> np.ndarray:
    """arr * (scale * e_mask); a signed permutation of the coefficients."""
    out = np.empty_like(arr)
    out[t.masks ^ mask] = arr * t.signs[:, mask]
    if scale != 1.0:
        out *= scale
    return out


def _blade_mul_left(t: _SignatureTables, arr: np.ndarray, mask: int, scale: float = 1.0) -> np.ndarray:
    """(scale * e_mask) * arr."""
    out = np.empty_like(arr)
    out[t.masks ^ mask] = arr * t.signs[mask, :]
    if scale != 1.0:
        out *= scale
    return out


def _vector_mul_right(t: _SignatureTables, arr: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """arr * v for the grade-1 element v with the given coordinates."""
    out = np.zeros_like(arr)
    for b in range(t.n):
        c = coords[b]
        if c != 0.0:
            bit = 1 << b
            out[t.masks ^ bit] += (arr * t.signs[:, bit]) * c
    return out


# -- operations ------------------------------------------------------------

def geometric_product(u: Multivector, v: Multivector) -> Multivector:
    """Geometric (Clifford) product of two multivectors of the same signature."""
    if u.sig != v.sig:
        raise SignatureMismatchError(f"cannot multiply {u.sig} by {v.sig}")
    t = _get_tables(u.sig)
    return Multivector(u.sig, _product_arrays(t, u.coeffs, v.coeffs))


def grade_project(u: Multivector, k: int) -> Multivector:
    """Keep only the grade-k coefficients."""
    if not 0 <= k <= u.sig.n:
        raise ValueError(f"grade {k} out of range 0..{u.sig.n}")
    t = _get_tables(u.sig)
    return Multivector(u.sig, np.where(t.grades == k, u.coeffs, 0.0))


_INVOLUTION_KINDS = ("grade", "reverse", "conjugate")


def involution(u: Multivector, kind: str) -> Multivector:
    """Apply one of the three standard involutions.

    Per grade k the sign is (-1)^k for "grade", (-1)^(k(k-1)/2) for
    "reverse", and (-1)^(k(k+1)/2) for "conjugate" (their composition).
    """
    t = _get_tables(u.sig)
    if kind == "grade":
        signs = t.grade_signs
    elif kind == "reverse":
        signs = t.reverse_signs
    elif kind == "conjugate":
        signs = t.conjugate_signs
    else:
        raise ValueError(f"unknown involution {kind!r}; expected one of {_INVOLUTION_KINDS}")
    return Multivector(u.sig, u.coeffs * signs)


@dataclass(frozen=True)
class CenterElement:
    """Element of the center: scalar part plus (for odd n) a pseudoscalar part."""

    sig: Signature
    scalar_part: float
    pseudo_part: float = 0.0

    def __post_init__(self):
        if self.sig.n % 2 == 0 and self.pseudo_part != 0.0:
            raise ValueError("the center has no pseudoscalar component in even dimension")

    def embed(self) -> Multivector:
        arr = np.zeros(1 << self.sig.n)
        arr[0] = self.scalar_part
        if self.sig.n % 2 == 1:
            arr[-1] = self.pseudo_part
        return Multivector(self.sig, arr)


def center_project(u: Multivector) -> CenterElement:
    """Project onto the center: the scalar, plus the pseudoscalar when n is odd."""
    if u.sig.n % 2 == 1:
        return CenterElement(u.sig, u.scalar_part, u.pseudoscalar_part)
    return CenterElement(u.sig, u.scalar_part)


def average_over_basis(u: Multivector) -> Multivector:
    """Average of e_A U e^A over all 2**n basis blades.

    Equals the embedding of ``center_project(u)``; computed here literally,
    term by term, so the two routes can cross-validate each other.
    """
    t = _get_tables(u.sig)
    acc = np.zeros(t.size)
    for mask in range(t.size):
        term = _blade_mul_right(t, u.coeffs, mask, float(t.blade_square[mask]))
        acc += _blade_mul_left(t, term, mask)
    return Multivector(u.sig, acc / t.size)


def generator_conjugation(u: Multivector) -> Multivector:
    """Sum of e_a U e^a over the n generators.

    On a pure grade-k input this is (-1)^k (n - 2k) times the input.
    """
    t = _get_tables(u.sig)
    acc = np.zeros(t.size)
    for a in range(t.n):
        bit = 1 << a
        term = _blade_mul_right(t, u.coeffs, bit, float(t.metric[a]))
        acc += _blade_mul_left(t, term, bit)
    return Multivector(u.sig, acc)


def versor_inverse(s: Multivector, tol: float = 1e-8) -> Multivector:
    """Inverse of a unit versor, computed as sign(reverse(S)S) * reverse(S)."""
    reversed_s = involution(s, "reverse")
    product = geometric_product(reversed_s, s)
    sigma = product.scalar_part
    rest = product.coeffs.copy()
    rest[0] = 0.0
    if abs(abs(sigma) - 1.0) > tol or float(np.max(np.abs(rest))) > tol * max(1.0, abs(sigma)):
        raise NotAVersorError(
            f"reverse(S)*S is not a unit scalar (scalar {sigma:.6g}, "
            f"off-scalar {float(np.max(np.abs(rest))):.3e})"
        )
    return reversed_s * (1.0 if sigma > 0 else -1.0)


def pseudoscalar_square(sig: Signature) -> float:
    """Square of the unit pseudoscalar: (-1)^(n(n-1)/2 + q)."""
    return -1.0 if (sig.n * (sig.n - 1) // 2 + sig.q) % 2 else 1.0
