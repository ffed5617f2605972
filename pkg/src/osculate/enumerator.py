"""Exact counting of non-crossing configurations of 2 or 3 directed walkers.

The dynamic programme works on gap vectors (distances between consecutive
walkers, in units of two ordinate steps).  ``enumerate_naive`` is an
independent exhaustive oracle that generates every step sequence and checks
the definitions directly on ordinates.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .series import Laurent, TruncSeries


class Mode(enum.Enum):
    NON_CROSSING = "noncrossing"
    OSCULATING = "osculating"
    VICIOUS = "vicious"
    QUASI_VICIOUS = "quasivicious"


@dataclass(frozen=True)
class WalkerSystem:
    """p walkers; walker k+1 starts 2*start_gaps[k] above walker k.

    A vicious system with a zero start gap is accepted and simply has no
    configurations at all.
    """

    start_gaps: tuple
    mode: Mode

    def __post_init__(self):
        gaps = tuple(int(g) for g in self.start_gaps)
        object.__setattr__(self, "start_gaps", gaps)
        object.__setattr__(self, "mode", Mode(self.mode))
        if len(gaps) not in (1, 2):
            raise ValueError("only 2 or 3 walkers are supported")
        if any(g < 0 for g in gaps):
            raise ValueError(f"start gaps must be nonnegative, got {gaps}")

    @property
    def p(self):
        return len(self.start_gaps) + 1


class Move(NamedTuple):
    delta: tuple
    contacts: int
    steps: tuple


@lru_cache(maxsize=None)
def _moves(zero_pattern, one_pattern, mode, p):
    out = []
    for steps in itertools.product((1, -1), repeat=p):
        delta = tuple((steps[k + 1] - steps[k]) // 2 for k in range(p - 1))
        contacts = sum(zero_pattern)
        if mode is Mode.VICIOUS or mode is Mode.QUASI_VICIOUS:
            # no move once two walkers have met
            if contacts:
                continue
            if mode is Mode.VICIOUS and any(one and d == -1 for one, d in zip(one_pattern, delta)):
                continue
        else:
            if any(z and d < 0 for z, d in zip(zero_pattern, delta)):
                continue
            if mode is Mode.OSCULATING and any(z and d != 1 for z, d in zip(zero_pattern, delta)):
                continue
        out.append(Move(delta, contacts, steps))
    return tuple(out)


def legal_steps(state, mode):
    """Step vectors allowed from gap vector ``state``.

    Returns one :class:`Move` per legal step vector (so repeated deltas
    appear once per walker-step combination), with ``contacts`` the number
    of zero gaps the step leaves from.
    """
    mode = Mode(mode)
    state = tuple(state)
    zero = tuple(g == 0 for g in state)
    one = tuple(g == 1 for g in state)
    return list(_moves(zero, one, mode, len(state) + 1))


@dataclass
class CountTable:
    """Counts keyed by (n, gaps, osc), or (n, gaps, osc, r) when positional.

    ``r`` is the number of up-steps of the lowest walker, so it ends at
    ordinate -n + 2r.
    """

    system: WalkerSystem
    n_max: int
    counts: dict = field(default_factory=dict)
    positional: bool = False

    def __eq__(self, other):
        if not isinstance(other, CountTable):
            return NotImplemented
        return (
            self.system == other.system
            and self.n_max == other.n_max
            and self.positional == other.positional
            and self.counts == other.counts
        )

    def rows(self):
        """Rows ``(n, *gaps, osc[, r], count)`` in lexicographic order."""
        out = []
        for key, c in self.counts.items():
            n, gaps, osc = key[:3]
            extra = key[3:]
            out.append((n, *gaps, osc, *extra, c))
        out.sort()
        return out

    def total(self, n):
        return sum(c for key, c in self.counts.items() if key[0] == n)

    def totals(self):
        return [self.total(n) for n in range(self.n_max + 1)]

    def osculation_histogram(self, n):
        hist = defaultdict(int)
        for key, c in self.counts.items():
            if key[0] == n:
                hist[key[2]] += c
        return dict(sorted(hist.items()))

    def count(self, n, gaps, osc=None, r=None):
        """Count at length n and final gaps, summed over unspecified stats."""
        gaps = tuple(gaps)
        total = 0
        for key, c in self.counts.items():
            if key[0] != n or key[1] != gaps:
                continue
            if osc is not None and key[2] != osc:
                continue
            if r is not None and key[3] != r:
                continue
            total += c
        return total

    def without_position(self):
        if not self.positional:
            return self
        merged = defaultdict(int)
        for key, c in self.counts.items():
            merged[key[:3]] += c
        return CountTable(self.system, self.n_max, dict(merged), False)

    def header(self):
        gaps = [f"gap{k + 1}" for k in range(self.system.p - 1)]
        return ["n", *gaps, "osc", *(["r"] if self.positional else []), "count"]

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header())
        for row in self.rows():
            writer.writerow([str(v) for v in row])
        return buf.getvalue()

    def to_json(self):
        return {
            "start_gaps": list(self.system.start_gaps),
            "mode": self.system.mode.value,
            "n_max": self.n_max,
            "positional": self.positional,
            "columns": self.header(),
            "rows": [[str(v) for v in row] for row in self.rows()],
        }

    @classmethod
    def from_json(cls, obj):
        system = WalkerSystem(tuple(obj["start_gaps"]), Mode(obj["mode"]))
        ngaps = system.p - 1
        counts = {}
        for row in obj["rows"]:
            row = [int(v) for v in row]
            n, gaps, osc = row[0], tuple(row[1 : 1 + ngaps]), row[1 + ngaps]
            rest = tuple(row[2 + ngaps : -1])
            counts[(n, gaps, osc, *rest)] = row[-1]
        return cls(system, obj["n_max"], counts, obj["positional"])

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _initial_count(system):
    if system.mode is Mode.VICIOUS and 0 in system.start_gaps:
        return 0
    return 1


def enumerate_dp(system, n_max, track_position=False, track_osculations=True):
    """Layer-by-layer transfer over gap vectors.

    Leaving a state with a zero gap counts one osculation per zero gap; the
    contact at the final time is never counted since no step leaves it.
    With ``track_osculations=False`` every count is filed under osc=0.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    mode = system.mode
    start = (system.start_gaps, 0, 0) if track_position else (system.start_gaps, 0)
    layer = {start: 1} if _initial_count(system) else {}
    counts = {}
    for n in range(n_max + 1):
        for key, c in layer.items():
            counts[(n, *key)] = c
        if n == n_max:
            break
        nxt = defaultdict(int)
        for key, c in layer.items():
            gaps, osc = key[0], key[1]
            for move in legal_steps(gaps, mode):
                new = tuple(g + d for g, d in zip(gaps, move.delta))
                new_osc = osc + move.contacts if track_osculations else 0
                if track_position:
                    r = key[2] + (move.steps[0] == 1)
                    nxt[(new, new_osc, r)] += c
                else:
                    nxt[(new, new_osc)] += c
        layer = nxt
    return CountTable(system, n_max, counts, track_position)


# -- exhaustive oracle ------------------------------------------------------

def _pair_status(lower, upper, n, mode):
    """Literal definitions on one adjacent pair of ordinate trajectories.

    ``lower``/``upper``: (paths, n+1) ordinate arrays.  Returns arrays of
    shape (len(lower), len(upper)): legal mask, final gap, osculations.
    """
    diff = upper[None, :, :] - lower[:, None, :]  # j_{m,k+1} - j_{m,k}
    ordered = (diff >= 0).all(axis=2)
    if mode is Mode.NON_CROSSING:
        legal = ordered
    elif mode is Mode.VICIOUS:
        legal = (diff > 0).all(axis=2)
    elif mode is Mode.OSCULATING:
        meet = diff[:, :, :-1] == 0
        separate = diff[:, :, 1:] > 0
        legal = ordered & ~(meet & ~separate).any(axis=2)
    else:
        legal = (diff[:, :, :-1] > 0).all(axis=2) & (diff[:, :, -1] >= 0)
    osc = (diff[:, :, :-1] == 0).sum(axis=2)
    final = diff[:, :, -1] // 2
    return legal, final, osc


def enumerate_naive(system, n_max, track_position=False):
    """Exhaustive oracle: every one of the 2^(p*n) step sequences is checked."""
    p = system.p
    if p * n_max > 30:
        raise ValueError("exhaustive enumeration is limited to 2^30 configurations")
    starts = [0]
    for g in system.start_gaps:
        starts.append(starts[-1] + 2 * g)
    counts = {}
    for n in range(n_max + 1):
        # every single-walker path of length n as ordinate offsets
        if n:
            steps = np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int32)
            offsets = np.concatenate([np.zeros((len(steps), 1), np.int32), np.cumsum(steps, axis=1)], axis=1)
        else:
            offsets = np.zeros((1, 1), np.int32)
        ups = (offsets[:, -1] + n) // 2
        traj = [offsets + s for s in starts]
        pairs = [_pair_status(traj[k], traj[k + 1], n, system.mode) for k in range(p - 1)]
        gap_span = max(system.start_gaps) + n + 1
        osc_span = 2 * n + 1
        r_span = n + 1 if track_position else 1
        if p == 2:
            legal, final, osc = pairs[0]
            key = (final * osc_span + osc) * r_span
            if track_position:
                key = key + ups[:, None]
            hist = np.bincount(key[legal].ravel(), minlength=1)
            for code in np.nonzero(hist)[0]:
                code = int(code)
                r = code % r_span
                rest = code // r_span
                k = (n, (rest // osc_span,), rest % osc_span)
                counts[k + ((r,) if track_position else ())] = int(hist[code])
            continue
        (leg1, fin1, osc1), (leg2, fin2, osc2) = pairs
        # additive key: key(a,b,c) = A[a,b] + C[b,c]
        A = ((fin1 * gap_span) * osc_span + osc1) * r_span
        if track_position:
            A = A + ups[:, None]
        C = (fin2 * osc_span + osc2) * r_span
        size = gap_span * gap_span * osc_span * r_span
        hist = np.zeros(size, dtype=np.int64)
        npaths = len(offsets)
        chunk = max(1, (1 << 22) // (npaths * npaths))
        for b0 in range(0, npaths, chunk):
            bs = slice(b0, b0 + chunk)
            legal = leg1[:, bs].T[:, :, None] & leg2[bs, :][:, None, :]
            keys = A[:, bs].T[:, :, None] + C[bs, :][:, None, :]
            hist += np.bincount(keys[legal], minlength=size)
        for code in np.nonzero(hist)[0]:
            code = int(code)
            r = code % r_span
            rest = code // r_span
            osc = rest % osc_span
            rest //= osc_span
            g2 = rest % gap_span
            g1 = rest // gap_span
            k = (n, (g1, g2), osc)
            counts[k + ((r,) if track_position else ())] = int(hist[code])
    return CountTable(system, n_max, counts, track_position)


def complete_gf(table, weight_u=False):
    """Counts as a series in t with x^k y^l (and u^osc) coefficients."""
    coeffs = [defaultdict(int) for _ in range(table.n_max + 1)]
    for key, c in table.counts.items():
        n, gaps, osc = key[:3]
        exps = tuple(gaps) + (0,) * (2 - len(gaps)) + ((osc,) if weight_u else (0,))
        coeffs[n][exps] += c
    return TruncSeries([Laurent.from_exponents(dict(d)).simplify() for d in coeffs])


def length_gf(table):
    return TruncSeries(table.totals())
