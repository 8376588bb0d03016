"""Marked length spectra, their multiplicative distance, and the approximation experiment."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .currents import WeightedCurrent, intersection_number, pair_with_hyperbolic, weakly_filling_up_to
from .errors import CubeCurrentsError, IdentityClass, NotStabilized
from .fuchsian import FuchsianRep
from .linking import SearchOptions, steps
from .words import ConjugacyClass, Word, dehn_reduce, enumerate_classes

Value = float | Fraction


@dataclass(frozen=True)
class LengthSpectrum:
    entries: tuple[tuple[ConjugacyClass, Value], ...]
    label: str
    L: int

    def as_dict(self) -> dict[ConjugacyClass, Value]:
        return dict(self.entries)

    def scaled(self, t: float) -> "LengthSpectrum":
        return LengthSpectrum(tuple((c, v * t) for c, v in self.entries), self.label, self.L)


def hyperbolic_spectrum(rep: FuchsianRep, L: int) -> LengthSpectrum:
    classes = enumerate_classes(rep.genus, L)
    return LengthSpectrum(tuple((c, pair_with_hyperbolic(c, rep)) for c in classes), "hyperbolic", L)


def cubical_spectrum(alpha: WeightedCurrent, rep: FuchsianRep, L: int,
                     opts: SearchOptions = SearchOptions(), threads: int = 1) -> LengthSpectrum:
    """i(alpha, c) for every class of length <= L; raises if any count is unsettled."""
    classes = enumerate_classes(rep.genus, L)

    def one(c: ConjugacyClass):
        return intersection_number(alpha, c, rep, opts)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, classes))
    else:
        results = [one(c) for c in classes]
    bad = [str(c) for c, r in zip(classes, results) if not r.stabilized]
    if bad:
        raise NotStabilized("unsettled classes: " + ", ".join(bad))
    return LengthSpectrum(tuple((c, r.value) for c, r in zip(classes, results)),
                          f"cubical:{alpha.digest()}", L)


def spectrum(source: FuchsianRep | tuple[WeightedCurrent, FuchsianRep], L: int,
             opts: SearchOptions = SearchOptions(), threads: int = 1) -> LengthSpectrum:
    if isinstance(source, FuchsianRep):
        return hyperbolic_spectrum(source, L)
    alpha, rep = source
    return cubical_spectrum(alpha, rep, L, opts, threads)


@dataclass(frozen=True)
class MetricComparison:
    """exp of the truncated distance, with the classes attaining both suprema.

    ``infinite`` marks a zero entry of one spectrum against a positive entry of
    the other; ``zero_witnesses`` then lists every such class.
    """

    exp_delta: float
    sup_forward: float
    witness_forward: ConjugacyClass | None
    sup_backward: float
    witness_backward: ConjugacyClass | None
    L: int
    infinite: bool = False
    zero_witnesses: tuple[ConjugacyClass, ...] = field(default=())


class SpectrumMismatch(CubeCurrentsError):
    pass


def _sup(pairs: list[tuple[ConjugacyClass, float, float]]) -> tuple[float, ConjugacyClass | None]:
    best, arg = -math.inf, None
    for c, num, den in pairs:
        r = num / den
        if r > best:   # strict, so ties keep the earliest class in canonical order
            best, arg = r, c
    return best, arg


def delta_estimate(s1: LengthSpectrum, s2: LengthSpectrum) -> MetricComparison:
    """Product of sup s1/s2 and sup s2/s1 over the common classes."""
    c1 = [c for c, _ in s1.entries]
    c2 = [c for c, _ in s2.entries]
    if c1 != c2:
        raise SpectrumMismatch("spectra must be over identical class lists")
    fwd, bwd, zeros = [], [], []
    for (c, v1), (_, v2) in zip(s1.entries, s2.entries):
        a, b = float(v1), float(v2)
        if a == 0.0 and b == 0.0:
            continue
        if a == 0.0 or b == 0.0:
            zeros.append(c)
            continue
        fwd.append((c, a, b))
        bwd.append((c, b, a))
    L = min(s1.L, s2.L)
    if zeros:
        first = zeros[0]
        return MetricComparison(math.inf, math.inf, first, math.inf, first, L, True, tuple(zeros))
    f, wf = _sup(fwd)
    b, wb = _sup(bwd)
    return MetricComparison(f * b, f, wf, b, wb, L)


@dataclass(frozen=True)
class NonDiscreteness:
    witnesses: tuple[tuple[ConjugacyClass, ConjugacyClass, float], ...]
    pairs_tested: int

    @property
    def found(self) -> bool:
        return bool(self.witnesses)


def nondiscreteness_check(s: LengthSpectrum, max_den: int = 20, tol: float = 1e-6) -> NonDiscreteness:
    """Pairs of entries whose ratio has no rational approximation p/q with q <= max_den."""
    pos = [(c, float(v)) for c, v in s.entries if float(v) > 0]
    if len(pos) < 3:
        raise ValueError("need at least three positive entries")
    wits = []
    tested = 0
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            tested += 1
            r = pos[i][1] / pos[j][1]
            q = Fraction(r).limit_denominator(max_den)
            if abs(r - float(q)) > tol:
                wits.append((pos[i][0], pos[j][0], r))
    return NonDiscreteness(tuple(wits), tested)


# -- approximation experiment -------------------------------------------------

@dataclass(frozen=True)
class ExperimentRow:
    index: int
    current: WeightedCurrent
    filling_ok: bool
    comparison: MetricComparison | None
    stabilized_all: bool
    error: str | None = None


def approximation_experiment(rep: FuchsianRep, sequence: Sequence[WeightedCurrent], L: int,
                             opts: SearchOptions = SearchOptions(), threads: int = 1) -> list[ExperimentRow]:
    """Compare the cubical spectrum of each current with the hyperbolic one up to length L."""
    hyp = hyperbolic_spectrum(rep, L)
    classes = [c for c, _ in hyp.entries]
    rows = []
    for k, alpha in enumerate(sequence):
        try:
            report = weakly_filling_up_to(alpha, L, rep, opts, classes)
            stable = not report.unstabilized
            cub = LengthSpectrum(report.values, f"cubical:{alpha.digest()}", L)
            comp = delta_estimate(hyp, cub) if stable else None
            rows.append(ExperimentRow(k, alpha, report.ok, comp, stable))
        except CubeCurrentsError as exc:
            rows.append(ExperimentRow(k, alpha, False, None, False, f"{type(exc).__name__}: {exc}"))
    return rows


def ray_class(rng: np.random.Generator, rep: FuchsianRep, length: int,
              dt: float = 0.05) -> ConjugacyClass | None:
    """Class read off a geodesic ray from a random unit tangent vector near the base point.

    The start is uniform in the covering ball, with a uniform direction.  The
    ray is followed through the orbit tiling; whenever it enters the region
    nearer to a neighbouring orbit point ``s x0`` it is pulled back by ``s^-1``
    and ``s`` is appended to the word.  Long such words follow the geodesic
    flow, so their currents approach the Liouville current, unlike uniformly
    random words.  The result is kept only when its class is primitive with
    exactly the requested length.
    """
    st = steps(rep)
    pts = (st.mats[:, 0, 0] * 1j + st.mats[:, 0, 1]) / (st.mats[:, 1, 0] * 1j + st.mats[:, 1, 1])
    inv = np.stack([np.stack([st.mats[:, 1, 1], -st.mats[:, 0, 1]], -1),
                    np.stack([-st.mats[:, 1, 0], st.mats[:, 0, 0]], -1)], -2)

    def rotation(angle: float) -> np.ndarray:
        c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
        return np.array([[c, s], [-s, c]])

    # hyperbolic area measure: cosh r is uniform
    r = math.acosh(1.0 + float(rng.uniform()) * (math.cosh(rep.covering_radius) - 1.0))
    frame = (rotation(float(rng.uniform(0.0, 2.0 * math.pi)))
             @ np.diag([math.exp(r / 2.0), math.exp(-r / 2.0)])
             @ rotation(float(rng.uniform(0.0, 2.0 * math.pi))))
    push = np.diag([math.exp(dt / 2.0), math.exp(-dt / 2.0)])
    word: Word = ()
    started = False    # moves before the first push only find the start's home tile
    while not started or len(word) < length:
        q = (frame[0, 0] * 1j + frame[0, 1]) / (frame[1, 0] * 1j + frame[1, 1])
        # compare distances through the monotone quantity |q - p|^2 / Im p
        there = np.abs(q - pts) ** 2 / pts.imag
        k = int(np.argmin(there))
        if there[k] < abs(q - 1j) ** 2:
            frame = inv[k] @ frame
            if started:
                word = dehn_reduce(word + st.words[k], rep.genus)
            continue
        started = True
        frame = frame @ push
    try:
        cls = ConjugacyClass.of(word, rep.genus)
    except IdentityClass:
        return None
    if cls.length != length or not cls.is_primitive:
        return None
    return cls


def random_class(rng: np.random.Generator, genus: int, length: int) -> ConjugacyClass | None:
    """Class of a uniformly random cyclically reduced word, kept only if already canonical-length."""
    letters = [x for i in range(1, 2 * genus + 1) for x in (i, -i)]
    w: list[int] = []
    while len(w) < length:
        x = letters[int(rng.integers(len(letters)))]
        if w and w[-1] == -x:
            continue
        if len(w) == length - 1 and w and x == -w[0]:
            continue
        w.append(x)
    try:
        c = ConjugacyClass.of(w, genus)
    except IdentityClass:
        return None
    if c.length != length or not c.is_primitive:
        return None
    return c


def builtin_sequence(rep: FuchsianRep, L: int = 4, count: int = 5, seed: int = 20240607,
                     opts: SearchOptions = SearchOptions(), ray_tries: int = 300,
                     max_tries: int = 10_000) -> list[WeightedCurrent]:
    """Single-atom currents on classes of length 4, 8, ..., each certified filling up to L.

    Classes come from :func:`ray_class`.  Short ray classes rarely fill (no
    length 4 one does in genus 2), so after ``ray_tries`` unsuccessful ray
    draws at a length the search continues with uniformly random words.
    """
    rng = np.random.default_rng(seed)
    classes = enumerate_classes(rep.genus, L)
    out = []
    for m in range(1, count + 1):
        for k in range(max_tries):
            if k < ray_tries:
                c = ray_class(rng, rep, 4 * m)
            else:
                c = random_class(rng, rep.genus, 4 * m)
            if c is None:
                continue
            alpha = WeightedCurrent.single(c)
            if weakly_filling_up_to(alpha, L, rep, opts, classes, early_exit=True).ok:
                out.append(alpha)
                break
        else:
            raise RuntimeError(f"no filling class of length {4 * m} found in {max_tries} draws")
    return out
