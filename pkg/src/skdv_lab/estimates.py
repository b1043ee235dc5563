"""Catalog of the linear and bilinear inequalities used by the well-posedness
theory, each evaluated numerically as ``lhs / rhs_core`` (the right-hand side
with its unknown constant stripped).

Space-time norms stream over chunks of time samples so long horizons never
materialize the full ``(n_t, N)`` array.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Dict, Optional

import numpy as np

from .errors import ParameterError
from .groups import AIRY, SCHRODINGER, phase, weighted_remainder
from .spectral import Field, NormSpec, l2, norm

SAMPLES_PER_UNIT = 256
MIN_SAMPLES = 257
CHUNK = 128


class EstimateId(enum.Enum):
    KATO_KDV = "sup_x ||d_x V(t) f||_{L2_T} <= c ||f||_2"
    DUAL_KATO_KDV = "||d_x int_0^t V(t-s) F(s) ds||_{L2_x} <= c ||F||_{L1_x L2_T}"
    KATO_SCH = "sup_x ||D^{1/2} S(t) f||_{L2_T} <= c ||f||_2"
    DUAL_KATO_SCH_L2X = "||D^{1/2} int_0^t S(t-s) F(s) ds||_{L2_x} <= c ||F||_{L1_x L2_T}"
    DUAL_KATO_SCH_SUPX = "sup_x ||d_x int_0^t S(t-s) F(s) ds||_{L2_T} <= c ||F||_{L1_x L2_T}"
    STRICHARTZ_SCH = "||S(t) f||_{Lq_t Lp_x} <= c ||f||_2,  2/q = 1/2 - 1/p"
    STRICHARTZ_KDV = "||D^{k m/2} V(t) f||_{Lq_t Lp_x} <= c ||f||_2,  q = 6/(m(k+1)), p = 2/(1-m)"
    MAX_SCH_L2 = "||S(t) f||_{L2_x Linf_T} <= c (1+T)^g ||f||_{H^s},  s > 1/2, g > 1/4"
    MAX_SCH_L4 = "||S(t) f||_{L4_x Linf_T} <= c ||f||_{H^s},  s >= 1/4"
    MAX_KDV_L2 = "||V(t) f||_{L2_x Linf_T} <= c (1+T)^g ||f||_{H^s},  s > 3/4, g > 3/4"
    MAX_KDV_L4 = "||V(t) f||_{L4_x Linf_T} <= c ||D^{1/4} f||_2"
    INTER_KDV_1 = "||V(t) f||_{L5_x L10_t} <= c ||f||_2"
    INTER_KDV_2 = "||D^{1/2} V(t) f||_{L(20/3)_x L5_T} <= c ||D^{1/4} f||_2"
    INTERP_WEIGHT_1 = "||<x>^{m b} J^{(1-m) a} f||_2 <= c ||<x>^b f||^m ||J^a f||^{1-m}"
    INTERP_WEIGHT_2 = "||<x>^{(1-m) b} D^{m a} f||_2 <= c ||<x>^b f||^{1-m} ||D^a f||^m"
    COMMUTATOR_LP = "||D^s(fg) - f D^s g - g D^s f||_p <= c ||f||_inf ||D^s g||_p"
    LEIBNITZ_L1L2 = ("||D^a(FG) - F D^a G - G D^a F||_{L1_x L2_T}"
                     " <= c ||D^{a1} F||_{Lp1_x Lq1_T} ||D^{a2} G||_{Lp2_x Lq2_T}")
    WEIGHTED_REM_KDV = "||V(-t)[|x|^w V(t) f] - |x|^w f||_2 <= c (1+|t|) ||f||_{H^{2w}}"
    WEIGHTED_REM_SCH = "||S(-t)[|x|^w S(t) f] - |x|^w f||_2 <= c (1+|t|) (||f||_2 + ||D^w f||_2)"
    WEIGHTED_STRICHARTZ_SCH = ("|| |x|^w S(t) f ||_{Lq_t Lp_x} <= c || |x|^w f ||_2"
                               " + c (1+T)(||f||_2 + ||D^w f||_2)")
    CONTRACTION_SMALLNESS = "Picard contraction factor <= c T^{1/2} (B + B^2),  B = free-evolution bundle"

    @property
    def statement(self) -> str:
        return self.value

    @property
    def bilinear(self) -> bool:
        return self in (EstimateId.COMMUTATOR_LP, EstimateId.LEIBNITZ_L1L2,
                        EstimateId.CONTRACTION_SMALLNESS)

    @property
    def group(self) -> Optional[str]:
        return _GROUP.get(self)


_GROUP = {
    EstimateId.KATO_KDV: AIRY, EstimateId.DUAL_KATO_KDV: AIRY, EstimateId.STRICHARTZ_KDV: AIRY,
    EstimateId.MAX_KDV_L2: AIRY, EstimateId.MAX_KDV_L4: AIRY, EstimateId.INTER_KDV_1: AIRY,
    EstimateId.INTER_KDV_2: AIRY, EstimateId.WEIGHTED_REM_KDV: AIRY,
    EstimateId.KATO_SCH: SCHRODINGER, EstimateId.DUAL_KATO_SCH_L2X: SCHRODINGER,
    EstimateId.DUAL_KATO_SCH_SUPX: SCHRODINGER, EstimateId.STRICHARTZ_SCH: SCHRODINGER,
    EstimateId.MAX_SCH_L2: SCHRODINGER, EstimateId.MAX_SCH_L4: SCHRODINGER,
    EstimateId.WEIGHTED_REM_SCH: SCHRODINGER, EstimateId.WEIGHTED_STRICHARTZ_SCH: SCHRODINGER,
}


@dataclass(frozen=True)
class EstimateParams:
    """Every tunable exponent of the catalog; each entry reads the ones it needs."""
    horizon: float = 1.0
    samples_per_unit: int = SAMPLES_PER_UNIT
    p: float = 6.0
    q: float = 6.0
    kdv_order: float = 0.5
    interp: float = 2.0 / 3.0
    sobolev_order: Optional[float] = None
    growth: Optional[float] = None
    smooth_order: float = 1.0
    weight_order: float = 1.0
    weight_interp: float = 0.5
    commutator_order: float = 0.5
    lebesgue: float = 2.0
    leibniz_order: float = 0.5
    leibniz_split: float = 0.25
    p1: float = 2.0
    p2: float = 2.0
    q1: float = 4.0
    q2: float = 4.0
    weight_power: float = 0.5
    bundle_order: float = 0.8
    picard_iter: int = 4
    picard_panel: float = 0.05
    contraction_scale: float = 0.25

    def times(self) -> np.ndarray:
        n = max(MIN_SAMPLES, int(math.ceil(self.samples_per_unit * self.horizon)) + 1)
        return np.linspace(0.0, self.horizon, n)

    def with_(self, **kw) -> "EstimateParams":
        return replace(self, **kw)


_DEFAULT_S = {EstimateId.MAX_SCH_L2: 0.75, EstimateId.MAX_SCH_L4: 0.25, EstimateId.MAX_KDV_L2: 1.0}
_DEFAULT_GROWTH = {EstimateId.MAX_SCH_L2: 0.3, EstimateId.MAX_KDV_L2: 0.8}


def resolved(eid: EstimateId, params: EstimateParams) -> EstimateParams:
    kw = {}
    if params.sobolev_order is None and eid in _DEFAULT_S:
        kw["sobolev_order"] = _DEFAULT_S[eid]
    if params.growth is None and eid in _DEFAULT_GROWTH:
        kw["growth"] = _DEFAULT_GROWTH[eid]
    return params.with_(**kw) if kw else params


def strichartz_kdv_exponents(kdv_order: float, interp: float):
    """``(q, p)`` paired with ``(kdv_order, interp)``."""
    q = math.inf if interp == 0 else 6.0 / (interp * (kdv_order + 1.0))
    p = math.inf if interp == 1 else 2.0 / (1.0 - interp)
    return q, p


def _inv(x):
    return 0.0 if x == math.inf else 1.0 / x


def _fail(eid, msg):
    raise ParameterError(f"{eid.name}: {msg}")


def check_params(eid: EstimateId, params: EstimateParams):
    """Raise a ParameterError naming the violated validity predicate."""
    P = resolved(eid, params)
    if eid in (EstimateId.WEIGHTED_REM_KDV, EstimateId.WEIGHTED_REM_SCH):
        # the horizon is the evaluation time here; t = 0 is allowed
        if not P.horizon >= 0:
            _fail(eid, "time t >= 0")
    elif not P.horizon > 0:
        _fail(eid, "horizon T > 0")
    if eid == EstimateId.STRICHARTZ_SCH:
        if not (2 <= P.p <= math.inf and 2 <= P.q <= math.inf):
            _fail(eid, "2 <= p, q <= inf")
        if abs(2 * _inv(P.q) - (0.5 - _inv(P.p))) > 1e-12:
            _fail(eid, "2/q = 1/2 - 1/p")
    elif eid == EstimateId.STRICHARTZ_KDV:
        if not (0 <= P.kdv_order <= 0.5 and 0 <= P.interp <= 1):
            _fail(eid, "(order, interp) in [0, 1/2] x [0, 1]")
    elif eid == EstimateId.MAX_SCH_L2:
        if not (P.sobolev_order > 0.5 and P.growth > 0.25):
            _fail(eid, "s > 1/2 and growth exponent > 1/4")
    elif eid == EstimateId.MAX_SCH_L4:
        if not P.sobolev_order >= 0.25:
            _fail(eid, "s >= 1/4")
    elif eid == EstimateId.MAX_KDV_L2:
        if not (P.sobolev_order > 0.75 and P.growth > 0.75):
            _fail(eid, "s > 3/4 and growth exponent > 3/4")
    elif eid in (EstimateId.INTERP_WEIGHT_1, EstimateId.INTERP_WEIGHT_2):
        if not (P.smooth_order > 0 and P.weight_order > 0):
            _fail(eid, "a > 0 and b > 0")
        if not 0 <= P.weight_interp <= 1:
            _fail(eid, "interpolation parameter in [0, 1]")
    elif eid == EstimateId.COMMUTATOR_LP:
        if not P.commutator_order > 0:
            _fail(eid, "s > 0")
        if not 1 < P.lebesgue < math.inf:
            _fail(eid, "1 < p < inf")
    elif eid == EstimateId.LEIBNITZ_L1L2:
        a, a1 = P.leibniz_order, P.leibniz_split
        a2 = a - a1
        if not 0 < a < 1:
            _fail(eid, "order in (0, 1)")
        if not (0 <= a1 <= a and 0 <= a2 <= a):
            _fail(eid, "a1, a2 in [0, a] with a1 + a2 = a")
        for name in ("p1", "p2", "q1", "q2"):
            if not 1 < getattr(P, name) < math.inf:
                _fail(eid, f"{name} in (1, inf)")
        if abs(1 / P.p1 + 1 / P.p2 - 1) > 1e-12:
            _fail(eid, "1 = 1/p1 + 1/p2")
        if abs(1 / P.q1 + 1 / P.q2 - 0.5) > 1e-12:
            _fail(eid, "1/2 = 1/q1 + 1/q2")
    elif eid in (EstimateId.WEIGHTED_REM_KDV, EstimateId.WEIGHTED_REM_SCH,
                 EstimateId.WEIGHTED_STRICHARTZ_SCH):
        if not 0 < P.weight_power < 1:
            _fail(eid, "weight power in (0, 1)")
        if eid == EstimateId.WEIGHTED_STRICHARTZ_SCH:
            if abs(2 * _inv(P.q) - (0.5 - _inv(P.p))) > 1e-12:
                _fail(eid, "2/q = 1/2 - 1/p")
    elif eid == EstimateId.CONTRACTION_SMALLNESS:
        if not P.bundle_order > 0.75:
            _fail(eid, "bundle order s > 3/4")
        if not (int(P.picard_iter) == P.picard_iter and P.picard_iter >= 2):
            _fail(eid, "at least 2 Picard sweeps")
        if not P.picard_panel > 0:
            _fail(eid, "Picard panel > 0")
        if not P.contraction_scale > 0:
            _fail(eid, "data scale > 0")
    return P


def estimate_key(eid: EstimateId, params: EstimateParams = EstimateParams()) -> str:
    """Token naming an entry and its shape-defining exponents (no spaces)."""
    P = resolved(eid, params)
    if eid in (EstimateId.STRICHARTZ_SCH, EstimateId.WEIGHTED_STRICHARTZ_SCH):
        return f"{eid.name}[p={P.p:g};q={P.q:g}]"
    if eid == EstimateId.STRICHARTZ_KDV:
        return f"{eid.name}[order={P.kdv_order:g};interp={P.interp:.6g}]"
    return eid.name


# -- streamed space-time norms ------------------------------------------------

def trapezoid_weights(times: np.ndarray) -> np.ndarray:
    w = np.zeros_like(times)
    if times.size > 1:
        d = np.diff(times)
        w[:-1] += 0.5 * d
        w[1:] += 0.5 * d
    return w


def _lp_x(values, p, dx, axis=-1):
    a = np.abs(values)
    if p == math.inf:
        return np.max(a, axis=axis)
    return (dx * np.sum(a ** p, axis=axis)) ** (1.0 / p)


class _Accumulator:
    """Streams slices ``F(t_k, .)`` into a mixed norm.

    ``x_then_t``: ``|| ||F||_{Lq_T} ||_{Lp_x}``; ``t_then_x``: ``|| ||F||_{Lp_x} ||_{Lq_T}``.
    """

    def __init__(self, times, p, q, order, dx, n):
        self.w = trapezoid_weights(times)
        self.p, self.q, self.order, self.dx = p, q, order, dx
        self.acc = np.zeros(n)
        self.per_t = []
        self.pos = 0

    def add(self, block):
        a = np.abs(block)
        k = block.shape[0]
        w = self.w[self.pos:self.pos + k]
        self.pos += k
        if self.order == "x_then_t":
            if self.q == math.inf:
                self.acc = np.maximum(self.acc, a.max(axis=0))
            else:
                self.acc += np.einsum("t,tx->x", w, a ** self.q)
        else:
            self.per_t.append(_lp_x(a, self.p, self.dx))

    def result(self):
        if self.order == "x_then_t":
            inner = self.acc if self.q == math.inf else self.acc ** (1.0 / self.q)
            return float(_lp_x(inner, self.p, self.dx))
        g = np.concatenate(self.per_t)
        if self.q == math.inf:
            return float(g.max())
        return float(np.sum(self.w * g ** self.q) ** (1.0 / self.q))


def _chunks(times, chunk=CHUNK):
    for start in range(0, times.size, chunk):
        yield times[start:start + chunk]


def stream_norm(fhat: np.ndarray, grid, times, symbol_fn: Callable, p, q, order,
                weight: Optional[np.ndarray] = None) -> float:
    """Mixed norm of ``F(t) = ifft(symbol_fn(t) * fhat)`` (times ``weight(x)``)."""
    acc = _Accumulator(times, p, q, order, grid.dx, grid.n_points)
    for tt in _chunks(times):
        block = np.fft.ifft(symbol_fn(tt) * fhat[None, :], axis=1)
        if weight is not None:
            block = block * weight[None, :]
        acc.add(block)
    return acc.result()


def group_symbol(grid, kind, pre=None):
    om = phase(grid, kind)
    pre = 1.0 if pre is None else pre

    def fn(tt):
        return np.exp(1j * tt[:, None] * om[None, :]) * pre
    return fn


def abs_xi(grid, s):
    xi = np.abs(grid.frequencies)
    if s == 0:
        return np.ones_like(xi)
    return xi ** s


def bracket(grid, s):
    return (1.0 + grid.frequencies ** 2) ** (s / 2.0)


def _spectral(f: Field, symbol) -> np.ndarray:
    return np.fft.ifft(symbol * np.fft.fft(f.values))


def _l1_l2T(f: Field, T: float) -> float:
    """``||F||_{L1_x L2_T}`` for the time-constant forcing ``F(x, t) = f(x)``."""
    return float(np.sum(np.abs(f.values)) * f.grid.dx * math.sqrt(T))


def _duhamel_constant_symbol(grid, kind):
    """Multiplier of ``int_0^t G(t - s) ds`` for the group ``G`` (time-constant forcing)."""
    om = phase(grid, kind)
    zero = om == 0
    safe = np.where(zero, 1.0, om)

    def fn(tt):
        t = tt[:, None]
        m = (np.exp(1j * t * om[None, :]) - 1.0) / (1j * safe[None, :])
        return np.where(zero[None, :], t + 0j, m)
    return fn


# -- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class EstimateReport:
    id: EstimateId
    lhs: float
    rhs_core: float
    ratio: float
    trial_seed: int = -1
    params: Dict[str, float] = field(default_factory=dict)
    skipped: bool = False

    @property
    def key(self) -> str:
        return self.params.get("key", self.id.name)


def _report(eid, lhs, rhs, P, seed):
    lhs, rhs = float(lhs), float(rhs)
    skipped = False
    if rhs == 0:
        if lhs == 0:
            ratio, skipped = math.nan, True
        else:
            ratio = math.inf
    else:
        ratio = lhs / rhs
    d = {k: v for k, v in asdict(P).items() if v is not None}
    d["key"] = estimate_key(eid, P)
    return EstimateReport(eid, lhs, rhs, ratio, seed, d, skipped)


# -- evaluation ---------------------------------------------------------------

def evaluate_estimate(eid: EstimateId, f: Field, g: Optional[Field] = None,
                      params: EstimateParams = EstimateParams(), seed: int = -1) -> EstimateReport:
    """Compute ``lhs`` and ``rhs_core`` of entry ``eid`` for data ``f`` (and ``g``)."""
    if not isinstance(eid, EstimateId):
        eid = EstimateId[eid]
    P = check_params(eid, params)
    if eid.bilinear and g is None:
        raise ParameterError(f"{eid.name} needs a second field")
    fn = _EVAL[eid]
    lhs, rhs = fn(f, g, P) if eid.bilinear else fn(f, P)
    return _report(eid, lhs, rhs, P, seed)


def _kato_kdv(f, P):
    g = f.grid
    sym = group_symbol(g, AIRY, 1j * g.odd_frequencies)
    return stream_norm(np.fft.fft(f.values), g, P.times(), sym, math.inf, 2, "x_then_t"), l2(f)


def _kato_sch(f, P):
    g = f.grid
    sym = group_symbol(g, SCHRODINGER, abs_xi(g, 0.5))
    return stream_norm(np.fft.fft(f.values), g, P.times(), sym, math.inf, 2, "x_then_t"), l2(f)


def _dual_kato_kdv(f, P):
    g = f.grid
    base = _duhamel_constant_symbol(g, AIRY)
    ik = 1j * g.odd_frequencies
    lhs = stream_norm(np.fft.fft(f.values), g, P.times(), lambda tt: base(tt) * ik, 2, math.inf, "t_then_x")
    return lhs, _l1_l2T(f, P.horizon)


def _dual_kato_sch_l2x(f, P):
    g = f.grid
    base = _duhamel_constant_symbol(g, SCHRODINGER)
    d = abs_xi(g, 0.5)
    lhs = stream_norm(np.fft.fft(f.values), g, P.times(), lambda tt: base(tt) * d, 2, math.inf, "t_then_x")
    return lhs, _l1_l2T(f, P.horizon)


def _dual_kato_sch_supx(f, P):
    g = f.grid
    base = _duhamel_constant_symbol(g, SCHRODINGER)
    ik = 1j * g.odd_frequencies
    lhs = stream_norm(np.fft.fft(f.values), g, P.times(), lambda tt: base(tt) * ik, math.inf, 2, "x_then_t")
    return lhs, _l1_l2T(f, P.horizon)


def _strichartz_sch(f, P):
    g = f.grid
    lhs = stream_norm(np.fft.fft(f.values), g, P.times(), group_symbol(g, SCHRODINGER), P.p, P.q, "t_then_x")
    return lhs, l2(f)


def _strichartz_kdv(f, P):
    g = f.grid
    q, p = strichartz_kdv_exponents(P.kdv_order, P.interp)
    pre = abs_xi(g, P.kdv_order * P.interp / 2.0)
    lhs = stream_norm(np.fft.fft(f.values), g, P.times(), group_symbol(g, AIRY, pre), p, q, "t_then_x")
    return lhs, l2(f)


def _maximal(kind, p, with_growth, rhs_kind="sobolev"):
    def fn(f, P):
        g = f.grid
        lhs = stream_norm(np.fft.fft(f.values), g, P.times(), group_symbol(g, kind), p, math.inf, "x_then_t")
        if rhs_kind == "sobolev":
            rhs = norm(f, NormSpec.sobolev(P.sobolev_order))
        else:
            rhs = norm(f, NormSpec.homogeneous(0.25))
        if with_growth:
            rhs *= (1.0 + P.horizon) ** P.growth
        return lhs, rhs
    return fn


def _inter_kdv_1(f, P):
    g = f.grid
    lhs = stream_norm(np.fft.fft(f.values), g, P.times(), group_symbol(g, AIRY), 5, 10, "x_then_t")
    return lhs, l2(f)


def _inter_kdv_2(f, P):
    g = f.grid
    lhs = stream_norm(np.fft.fft(f.values), g, P.times(), group_symbol(g, AIRY, abs_xi(g, 0.5)),
                      20.0 / 3.0, 5, "x_then_t")
    return lhs, norm(f, NormSpec.homogeneous(0.25))


def _bracket_x(grid, r):
    return (1.0 + grid.x ** 2) ** (r / 2.0)


def _interp_weight_1(f, P):
    g, m, a, b = f.grid, P.weight_interp, P.smooth_order, P.weight_order
    inner = _spectral(f, bracket(g, (1 - m) * a))
    lhs = math.sqrt(g.dx * np.sum(np.abs(_bracket_x(g, m * b) * inner) ** 2))
    wb = math.sqrt(g.dx * np.sum(np.abs(_bracket_x(g, b) * f.values) ** 2))
    ja = norm(f, NormSpec.sobolev(a))
    return lhs, wb ** m * ja ** (1 - m)


def _interp_weight_2(f, P):
    g, m, a, b = f.grid, P.weight_interp, P.smooth_order, P.weight_order
    inner = _spectral(f, abs_xi(g, m * a))
    lhs = math.sqrt(g.dx * np.sum(np.abs(_bracket_x(g, (1 - m) * b) * inner) ** 2))
    wb = math.sqrt(g.dx * np.sum(np.abs(_bracket_x(g, b) * f.values) ** 2))
    da = norm(f, NormSpec.homogeneous(a))
    return lhs, wb ** (1 - m) * da ** m


def commutator_term(f: np.ndarray, g: np.ndarray, symbol: np.ndarray, axis=-1) -> np.ndarray:
    """``D(fg) - f Dg - g Df`` for the multiplier ``D`` given by ``symbol``."""
    def D(h):
        return np.fft.ifft(symbol * np.fft.fft(h, axis=axis), axis=axis)
    return D(f * g) - f * D(g) - g * D(f)


def _commutator_lp(f, h, P):
    grid = f.grid
    if h.grid != grid:
        raise ParameterError("fields must share one grid")
    sym = abs_xi(grid, P.commutator_order)
    c = commutator_term(f.values, h.values, sym)
    lhs = _lp_x(c, P.lebesgue, grid.dx)
    rhs = np.max(np.abs(f.values)) * _lp_x(_spectral(h, sym), P.lebesgue, grid.dx)
    return float(lhs), float(rhs)


def _leibnitz(f0, g0, P):
    grid = f0.grid
    if g0.grid != grid:
        raise ParameterError("fields must share one grid")
    times = P.times()
    a, a1 = P.leibniz_order, P.leibniz_split
    a2 = a - a1
    sa = abs_xi(grid, a)
    symF = group_symbol(grid, SCHRODINGER)
    symG = group_symbol(grid, AIRY)
    fh, gh = np.fft.fft(f0.values), np.fft.fft(g0.values)
    lhs_acc = _Accumulator(times, 1, 2, "x_then_t", grid.dx, grid.n_points)
    F_acc = _Accumulator(times, P.p1, P.q1, "x_then_t", grid.dx, grid.n_points)
    G_acc = _Accumulator(times, P.p2, P.q2, "x_then_t", grid.dx, grid.n_points)
    for tt in _chunks(times):
        Fh = symF(tt) * fh[None, :]
        Gh = symG(tt) * gh[None, :]
        F = np.fft.ifft(Fh, axis=1)
        G = np.fft.ifft(Gh, axis=1)
        lhs_acc.add(commutator_term(F, G, sa[None, :], axis=1))
        F_acc.add(np.fft.ifft(abs_xi(grid, a1)[None, :] * Fh, axis=1))
        G_acc.add(np.fft.ifft(abs_xi(grid, a2)[None, :] * Gh, axis=1))
    return lhs_acc.result(), F_acc.result() * G_acc.result()


def _weighted_rem(kind):
    def fn(f, P):
        t = P.horizon
        rem = weighted_remainder(f, P.weight_power, t, kind).field
        if kind == AIRY:
            rhs = (1 + abs(t)) * norm(f, NormSpec.sobolev(2 * P.weight_power))
        else:
            rhs = (1 + abs(t)) * (l2(f) + norm(f, NormSpec.homogeneous(P.weight_power)))
        return l2(rem), rhs
    return fn


def _weighted_strichartz(f, P):
    g = f.grid
    w = np.abs(g.x) ** P.weight_power
    lhs = stream_norm(np.fft.fft(f.values), g, P.times(), group_symbol(g, SCHRODINGER),
                      P.p, P.q, "t_then_x", weight=w)
    rhs = (math.sqrt(g.dx * np.sum(np.abs(w * f.values) ** 2))
           + (1 + P.horizon) * (l2(f) + norm(f, NormSpec.homogeneous(P.weight_power))))
    return lhs, rhs


def free_bundle(u0: Field, v0: Field, P: EstimateParams):
    """Solution-space bundle of the free evolutions on the dense time grid."""
    from .groups import evolve_series
    from .solver import bundle_from_fields
    times = P.times()
    U = evolve_series(u0, times, SCHRODINGER)
    V = evolve_series(v0, times, AIRY)
    return bundle_from_fields(U, V, P.bundle_order, 0.0, 0.0)


def _contraction(u0, v0, P):
    from .picard import contraction_factor
    from .solver import SKdVParams
    k = P.contraction_scale
    u0 = Field(u0.grid, k * u0.values, "complex")
    v0 = Field(v0.grid, k * v0.values.real, "real")
    b = free_bundle(u0, v0, P)
    B = b.mu1 + b.mu2
    factor = contraction_factor(u0, v0, P.horizon, SKdVParams(), n_iter=int(P.picard_iter),
                                s=P.bundle_order, panel=P.picard_panel)
    return factor, math.sqrt(P.horizon) * (B + B * B)


_EVAL = {
    EstimateId.KATO_KDV: _kato_kdv,
    EstimateId.DUAL_KATO_KDV: _dual_kato_kdv,
    EstimateId.KATO_SCH: _kato_sch,
    EstimateId.DUAL_KATO_SCH_L2X: _dual_kato_sch_l2x,
    EstimateId.DUAL_KATO_SCH_SUPX: _dual_kato_sch_supx,
    EstimateId.STRICHARTZ_SCH: _strichartz_sch,
    EstimateId.STRICHARTZ_KDV: _strichartz_kdv,
    EstimateId.MAX_SCH_L2: _maximal(SCHRODINGER, 2, True),
    EstimateId.MAX_SCH_L4: _maximal(SCHRODINGER, 4, False),
    EstimateId.MAX_KDV_L2: _maximal(AIRY, 2, True),
    EstimateId.MAX_KDV_L4: _maximal(AIRY, 4, False, rhs_kind="quarter"),
    EstimateId.INTER_KDV_1: _inter_kdv_1,
    EstimateId.INTER_KDV_2: _inter_kdv_2,
    EstimateId.INTERP_WEIGHT_1: _interp_weight_1,
    EstimateId.INTERP_WEIGHT_2: _interp_weight_2,
    EstimateId.COMMUTATOR_LP: _commutator_lp,
    EstimateId.LEIBNITZ_L1L2: _leibnitz,
    EstimateId.WEIGHTED_REM_KDV: _weighted_rem(AIRY),
    EstimateId.WEIGHTED_REM_SCH: _weighted_rem(SCHRODINGER),
    EstimateId.WEIGHTED_STRICHARTZ_SCH: _weighted_strichartz,
    EstimateId.CONTRACTION_SMALLNESS: _contraction,
}

# sharp constants over the whole time line (change of variables in the time integral)
KATO_KDV_SHARP = 1.0 / math.sqrt(3.0)
KATO_SCH_SHARP = 1.0
