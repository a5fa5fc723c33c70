"""Bit-exact block-Markov simulation of feedback cooperation on the LDIC.

Each block is a single use of the channel. Every transmit level carries one
of: a fresh private bit, a fresh non-cooperative common bit, a fresh
cooperative bit (one that interferes at the other receiver and is learned by
the other transmitter through feedback), a relayed copy of the other user's
cooperative bit from two blocks earlier, or nothing.

Decoding is symbolic peeling. Every received row is an XOR of named message
bits, and any row with a single unknown bit resolves it. The order in which
rows are peeled depends only on the scheme and ``B``, so it is compiled once
into a plan and replayed for every seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .ldic_model import BitVec, LdicParams, channel_output, feedback_rows
from .region_core import RatePair

__all__ = [
    "TxLayout",
    "SchemeConfig",
    "SimResult",
    "BlockTrace",
    "UnsupportedRegimeError",
    "SchemeMismatchError",
    "DecodingAmbiguityError",
    "build_scheme",
    "simulate",
    "run_motivating_example",
    "trace_to_text",
    "trace_from_text",
    "MOTIVATING_PARAMS",
]

MOTIVATING_PARAMS = LdicParams(4, 4, 2, 2, 1, 1)

KINDS = ("private", "nc", "coop")


class UnsupportedRegimeError(ValueError):
    """The simulator has no scheme for these parameters."""


class SchemeMismatchError(ValueError):
    """A scheme was used with parameters it was not built for."""


class DecodingAmbiguityError(RuntimeError):
    """Peeling left a wanted bit undetermined; the scheme is broken."""


@dataclass(frozen=True)
class TxLayout:
    """Level roles of one transmitter. Levels are 1-based, 1 = top.

    ``relay[i]`` carries the other transmitter's ``coop[i]`` bit from two
    blocks earlier.
    """

    private: tuple = ()
    nc: tuple = ()
    coop: tuple = ()
    relay: tuple = ()
    silent: tuple = ()

    def roles(self) -> dict:
        out = {}
        for kind in ("private", "nc", "coop", "relay"):
            for i, lvl in enumerate(getattr(self, kind)):
                out[lvl] = (kind, i)
        return out

    def fresh_count(self) -> int:
        return len(self.private) + len(self.nc) + len(self.coop)


@dataclass(frozen=True)
class SchemeConfig:
    """Level map for both transmitters plus the rows each receiver feeds back."""

    params: tuple
    q: int
    tx: tuple                 # (TxLayout, TxLayout)
    feedback_rows: tuple      # rows of y1 fed back to TX1, rows of y2 to TX2
    variant: str = "symmetric"

    @property
    def rates(self) -> tuple:
        """``(r1cc, r1nc, r1p, r2cc, r2nc, r2p)`` in bits per channel use."""
        a, b = self.tx
        return (len(a.coop), len(a.nc), len(a.private),
                len(b.coop), len(b.nc), len(b.private))

    @property
    def rate_pair(self) -> RatePair:
        return RatePair(self.tx[0].fresh_count(), self.tx[1].fresh_count())

    @property
    def sum_rate(self) -> int:
        return self.tx[0].fresh_count() + self.tx[1].fresh_count()

    def swapped(self) -> "SchemeConfig":
        """The same scheme with the users' roles exchanged."""
        n11, n22, n12, n21, c1, c2 = self.params
        return SchemeConfig((n22, n11, n21, n12, c2, c1), self.q,
                            (self.tx[1], self.tx[0]),
                            (self.feedback_rows[1], self.feedback_rows[0]),
                            self.variant)

    def validate(self) -> None:
        """Check the structural invariants; raise ``ValueError`` on violation."""
        g = LdicParams(*self.params)
        cross = (g.n12, g.n21)   # gain of TX k into the other receiver
        direct = (g.n11, g.n22)
        cfb = (g.cfb1, g.cfb2)
        for k in (0, 1):
            lay = self.tx[k]
            seen = []
            for kind in ("private", "nc", "coop", "relay", "silent"):
                seen.extend(getattr(lay, kind))
            if len(seen) != len(set(seen)):
                raise ValueError(f"transmitter {k + 1}: level sets overlap")
            if any(not 1 <= lvl <= self.q for lvl in seen):
                raise ValueError(f"transmitter {k + 1}: level outside 1..{self.q}")
            if any(lvl > direct[k] for lvl in lay.private + lay.nc + lay.coop):
                raise ValueError(f"transmitter {k + 1}: fresh bit above the direct gain")
            j = 1 - k
            if len(lay.relay) != len(self.tx[j].coop):
                raise ValueError(f"transmitter {k + 1}: relay count differs from coop count")
            # coop bits must reach the other receiver on fed-back rows
            shift = self.q - cross[k]
            for lvl in lay.coop:
                if lvl > cross[k] or lvl + shift not in self.feedback_rows[j]:
                    raise ValueError(f"transmitter {k + 1}: coop level {lvl} is not fed back")
        for j in (0, 1):
            rows = self.feedback_rows[j]
            incoming = cross[1 - j]
            if len(rows) > min(incoming, cfb[j]):
                raise ValueError(f"receiver {j + 1}: feedback exceeds its budget")
            if any(r <= self.q - incoming for r in rows):
                raise ValueError(f"receiver {j + 1}: feedback outside the interference window")


@dataclass
class BlockTrace:
    block: int
    x: tuple
    y: tuple
    feedback: tuple          # feedback delivered at the start of this block
    decoded: tuple = (None, None)   # per receiver: {kind: "0101"}


@dataclass
class SimResult:
    blocks: int
    achieved: RatePair
    decode_ok: bool
    trace: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# scheme construction


def _levels(lo, hi):
    return tuple(range(lo, hi + 1))


def _symmetric_scheme(g: LdicParams) -> SchemeConfig:
    n, m, c = g.n11, g.n12, int(g.cfb1)
    q = g.q
    p = n - m
    k = max(0, 2 * m - n)
    top = min(p, m)                       # free positions are k+1..top
    e = min(2 * c, top - k)
    share = ((e + 1) // 2, e // 2)
    tx = []
    fb_rows = [(), ()]
    for u in (0, 1):
        mine, other = share[u], share[1 - u]
        coop = _levels(top - mine + 1, top)
        relay = _levels(k + 1, k + other)
        nc = _levels(1, k)
        private = _levels(m + 1, n)
        used = set(coop + relay + nc + private)
        silent = tuple(lvl for lvl in range(1, q + 1) if lvl not in used)
        tx.append(TxLayout(private, nc, coop, relay, silent))
        # coop level i of TX u lands on row i + (n - m) at the other receiver
        fb_rows[1 - u] = tuple(lvl + p for lvl in coop)
    return SchemeConfig(g.as_tuple(), q, tuple(tx), tuple(fb_rows))


def _motivating_scheme() -> SchemeConfig:
    tx1 = TxLayout(private=(3, 4), nc=(2,), coop=(1,))
    tx2 = TxLayout(private=(3,), relay=(2,), silent=(1, 4))
    # TX1's top bit meets TX2's fresh bit on row 3 of receiver 2
    return SchemeConfig(MOTIVATING_PARAMS.as_tuple(), 4, (tx1, tx2), ((), (3,)),
                        variant="motivating")


def build_scheme(g: LdicParams, variant: str = "symmetric") -> SchemeConfig:
    """Level map achieving the sum capacity for ``g``.

    ``variant="motivating"`` returns the asymmetric (4, 1) schedule for the
    channel ``(4, 4, 2, 2, 1, 1)``.
    """
    if variant == "motivating":
        if g != MOTIVATING_PARAMS:
            raise UnsupportedRegimeError("the motivating schedule needs (4,4,2,2,1,1)")
        return _motivating_scheme()
    if variant != "symmetric":
        raise ValueError(f"unknown variant {variant!r}")
    if g.n11 != g.n22 or g.n12 != g.n21 or g.cfb1 != g.cfb2:
        raise UnsupportedRegimeError("only symmetric parameters are simulated")
    if not g.integer_feedback:
        raise UnsupportedRegimeError("feedback capacity must be an integer")
    if 3 * g.n12 > 2 * g.n11:
        raise UnsupportedRegimeError("cross gain above 2/3 of the direct gain")
    scheme = _symmetric_scheme(g)
    scheme.validate()
    return scheme


# ---------------------------------------------------------------------------
# symbolic structure and decoding plans
#
# A message bit is identified by (user, block, kind, index). Within a plan
# bits are numbered densely.


class _Symbols:
    def __init__(self):
        self.ids = {}
        self.keys = []

    def get(self, key):
        sid = self.ids.get(key)
        if sid is None:
            sid = len(self.keys)
            self.ids[key] = sid
            self.keys.append(key)
        return sid


def _level_symbols(scheme: SchemeConfig, syms: _Symbols, u: int, b: int, B: int):
    """``{level: symbol id}`` for transmitter ``u`` in block ``b`` (1-based)."""
    out = {}
    for lvl, (kind, i) in scheme.tx[u].roles().items():
        if kind == "relay":
            if b >= 3:
                out[lvl] = syms.get((1 - u, b - 2, "coop", i))
        elif b <= B - 2:
            out[lvl] = syms.get((u, b, kind, i))
    return out


def _row_equations(scheme: SchemeConfig, levels, rx: int):
    """Symbol sets on each row of receiver ``rx``; ``levels`` is per transmitter."""
    n11, n22, n12, n21 = scheme.params[:4]
    q = scheme.q
    gain_own = (n11, n22)[rx]
    gain_cross = (n21, n12)[rx]        # from the other transmitter into rx
    rows = []
    for r in range(1, q + 1):
        s = set()
        for u, gain in ((rx, gain_own), (1 - rx, gain_cross)):
            lvl = r - (q - gain)
            if lvl >= 1:
                sid = levels[u].get(lvl)
                if sid is not None:
                    s ^= {sid}
        rows.append(frozenset(s))
    return rows


def _peel(equations, known, wanted):
    """Peel ``equations`` (list of (tag, frozenset)) starting from ``known``.

    Returns ``(steps, known)`` where each step is ``(target, tag, others)``.
    Equations are scanned in the given order; newly solvable ones are handled
    from a worklist.
    """
    known = set(known)
    pending = {}
    by_symbol = {}
    for idx, (_, s) in enumerate(equations):
        unk = set(s) - known
        pending[idx] = unk
        for sid in unk:
            by_symbol.setdefault(sid, []).append(idx)
    steps = []
    work = [idx for idx in range(len(equations)) if len(pending[idx]) == 1]
    work.reverse()
    while work:
        idx = work.pop()
        unk = pending[idx]
        if len(unk) != 1:
            continue
        (target,) = unk
        tag, s = equations[idx]
        steps.append((target, tag, tuple(x for x in s if x != target)))
        known.add(target)
        newly = []
        for other in by_symbol.get(target, ()):
            pu = pending[other]
            pu.discard(target)
            if len(pu) == 1:
                newly.append(other)
        # keep the scan order: earlier equations first
        for other in reversed(sorted(newly)):
            work.append(other)
    missing = [w for w in wanted if w not in known]
    return steps, known, missing


@dataclass(frozen=True)
class _Plan:
    nsym: int
    keys: tuple
    levels: tuple        # levels[b-1][u] -> tuple of (level, sid)
    rows: tuple          # rows[b-1][rx] -> tuple of frozensets
    tx_steps: tuple      # tx_steps[b-1][u] -> steps solving the other's coop bits
    rx_steps: tuple      # rx_steps[rx] -> steps
    wanted: tuple        # wanted[rx] -> tuple of sids (own fresh bits)


@lru_cache(maxsize=256)
def _compile(scheme: SchemeConfig, B: int) -> _Plan:
    syms = _Symbols()
    levels, rows = [], []
    for b in range(1, B + 1):
        lv = (_level_symbols(scheme, syms, 0, b, B), _level_symbols(scheme, syms, 1, b, B))
        levels.append(lv)
        rows.append((_row_equations(scheme, lv, 0), _row_equations(scheme, lv, 1)))
    own = ([], [])
    for sid, (u, _, kind, _) in enumerate(syms.keys):
        own[u].append(sid)

    # transmitters: learn the other user's coop bits from this block's feedback
    tx_steps = []
    known_tx = [set(own[0]), set(own[1])]
    for b in range(1, B + 1):
        per = []
        for u in (0, 1):
            eqs = [((b, r), rows[b - 1][u][r - 1]) for r in scheme.feedback_rows[u]]
            wanted = [syms.ids[(1 - u, b, "coop", i)]
                      for i in range(len(scheme.tx[1 - u].coop)) if b <= B - 2]
            steps, known, missing = _peel(eqs, known_tx[u], wanted)
            if missing:
                raise DecodingAmbiguityError(
                    f"transmitter {u + 1} cannot recover coop bits of block {b} from feedback")
            known_tx[u] = known
            per.append(tuple(steps))
        tx_steps.append(tuple(per))

    # receivers: backward over blocks, rows top-down
    rx_steps, wanted_all = [], []
    for rx in (0, 1):
        eqs = []
        for b in range(B, 0, -1):
            for r, s in enumerate(rows[b - 1][rx], start=1):
                if s:
                    eqs.append(((b, r), s))
        wanted = tuple(sid for sid in own[rx] if syms.keys[sid][2] in KINDS)
        steps, _, missing = _peel(eqs, (), wanted)
        if missing:
            key = syms.keys[missing[0]]
            raise DecodingAmbiguityError(
                f"receiver {rx + 1} cannot resolve {len(missing)} bits, e.g. {key}")
        rx_steps.append(tuple(steps))
        wanted_all.append(wanted)

    return _Plan(
        nsym=len(syms.keys),
        keys=tuple(syms.keys),
        levels=tuple((tuple(l0.items()), tuple(l1.items())) for l0, l1 in levels),
        rows=tuple(tuple(r) for r in rows),
        tx_steps=tuple(tx_steps),
        rx_steps=tuple(rx_steps),
        wanted=tuple(wanted_all),
    )


def _gf2_determined(equations, values, nsym):
    """Full GF(2) elimination; returns ``{sid: bit}`` for every determined symbol."""
    pivots = {}   # pivot bit -> (mask, value)
    for s, v in zip(equations, values):
        mask = 0
        for sid in s:
            mask |= 1 << sid
        for piv, (pm, pv) in pivots.items():
            if mask >> piv & 1:
                mask ^= pm
                v ^= pv
        if not mask:
            continue
        piv = mask.bit_length() - 1
        for other, (om, ov) in list(pivots.items()):
            if om >> piv & 1:
                pivots[other] = (om ^ mask, ov ^ v)
        pivots[piv] = (mask, v)
    return {piv: v for piv, (m, v) in pivots.items() if m == 1 << piv}


# ---------------------------------------------------------------------------
# execution


def _bits_to_int(q, pairs, val):
    x = 0
    for lvl, sid in pairs:
        if val[sid]:
            x |= 1 << (q - lvl)
    return x


def simulate(g: LdicParams, scheme: SchemeConfig, B: int, seed: int = 0, *,
             zero_messages: bool = False, trace: bool = True,
             gf2_check: bool = False) -> SimResult:
    """Run ``B`` blocks of the scheme and decode backwards.

    ``achieved`` counts correctly decoded fresh bits per user divided by
    ``B``. With ``gf2_check`` every receiver also solves its full unrolled
    linear system and the two answers are compared.
    """
    if B < 3:
        raise ValueError("need at least three blocks")
    if tuple(scheme.params) != g.as_tuple() or scheme.q != g.q:
        raise SchemeMismatchError("scheme was built for different parameters")
    plan = _compile(scheme, B)
    q = scheme.q
    rng = random.Random(seed)

    truth = [0] * plan.nsym
    if not zero_messages:
        draws = rng.getrandbits(plan.nsym) if plan.nsym else 0
        truth = [(draws >> i) & 1 for i in range(plan.nsym)]

    # transmitter-side estimates of the other user's coop bits
    est = [dict(), dict()]
    records = []
    yvals = []
    pending_fb = (0, 0)
    for b in range(1, B + 1):
        xs = []
        for u in (0, 1):
            # relay levels use this transmitter's estimate, not the truth
            x = 0
            for lvl, sid in plan.levels[b - 1][u]:
                key = plan.keys[sid]
                bit = est[u][sid] if key[0] != u else truth[sid]
                if bit:
                    x |= 1 << (q - lvl)
            xs.append(BitVec(q, x))
        y1, y2 = channel_output(xs[0], xs[1], g)
        yvals.append((y1, y2))
        fb = (feedback_rows(y1, scheme.feedback_rows[0]),
              feedback_rows(y2, scheme.feedback_rows[1]))
        if trace:
            records.append(BlockTrace(b, (xs[0], xs[1]), (y1, y2),
                                      (BitVec(q, pending_fb[0]), BitVec(q, pending_fb[1]))))
        pending_fb = (fb[0].value, fb[1].value)
        # transmitters read the feedback after the block
        for u in (0, 1):
            fv = fb[u]
            for target, (_, r), others in plan.tx_steps[b - 1][u]:
                bit = (fv.value >> (q - r)) & 1
                for o in others:
                    bit ^= truth[o] if plan.keys[o][0] == u else est[u][o]
                est[u][target] = bit

    correct = [0, 0]
    ok = True
    for rx in (0, 1):
        val = {}
        for target, (b, r), others in plan.rx_steps[rx]:
            bit = (yvals[b - 1][rx].value >> (q - r)) & 1
            for o in others:
                bit ^= val[o]
            val[target] = bit
        if gf2_check:
            eqs, vals = [], []
            for b in range(1, B + 1):
                for r, s in enumerate(plan.rows[b - 1][rx], start=1):
                    if s:
                        eqs.append(s)
                        vals.append((yvals[b - 1][rx].value >> (q - r)) & 1)
            solved = _gf2_determined(eqs, vals, plan.nsym)
            for sid in plan.wanted[rx]:
                if solved.get(sid) != val[sid]:
                    raise DecodingAmbiguityError(
                        f"peeling and elimination disagree on {plan.keys[sid]}")
        for sid in plan.wanted[rx]:
            if val[sid] == truth[sid]:
                correct[rx] += 1
            else:
                ok = False
        if trace:
            _attach_decoded(records, plan, rx, val)

    achieved = RatePair(Fraction(correct[0], B), Fraction(correct[1], B))
    return SimResult(B, achieved, ok, records)


def _attach_decoded(records, plan, rx, val):
    per_block = {}
    for sid in plan.wanted[rx]:
        u, b, kind, i = plan.keys[sid]
        per_block.setdefault(b, {}).setdefault(kind, {})[i] = val[sid]
    for rec in records:
        got = per_block.get(rec.block, {})
        msg = {kind: "".join(str(bits[i]) for i in sorted(bits))
               for kind, bits in got.items()}
        dec = list(rec.decoded)
        dec[rx] = msg
        rec.decoded = tuple(dec)


def run_motivating_example(B: int, seed: int = 0, **kw) -> SimResult:
    """TX1 sends four fresh bits per block, TX2 one, on ``(4,4,2,2,1,1)``."""
    scheme = build_scheme(MOTIVATING_PARAMS, variant="motivating")
    return simulate(MOTIVATING_PARAMS, scheme, B, seed, **kw)


# ---------------------------------------------------------------------------
# trace text format


def trace_to_text(trace) -> str:
    """One stanza per block; vectors are MSB-first 0/1 strings."""
    lines = []
    for rec in trace:
        lines.append(f"block {rec.block}")
        lines.append(f"  x1 {rec.x[0]}")
        lines.append(f"  x2 {rec.x[1]}")
        lines.append(f"  y1 {rec.y[0]}")
        lines.append(f"  y2 {rec.y[1]}")
        lines.append(f"  fb1 {rec.feedback[0]}")
        lines.append(f"  fb2 {rec.feedback[1]}")
        for k, dec in enumerate(rec.decoded, start=1):
            if dec is not None:
                parts = " ".join(f"{kind}={dec[kind]}" for kind in KINDS if kind in dec)
                lines.append(f"  dec{k} {parts}".rstrip())
        lines.append("")
    return "\n".join(lines)


def trace_from_text(text: str) -> list:
    out = []
    cur: Optional[dict] = None

    def flush():
        if cur is not None:
            out.append(BlockTrace(cur["block"], (cur["x1"], cur["x2"]), (cur["y1"], cur["y2"]),
                                  (cur["fb1"], cur["fb2"]),
                                  (cur.get("dec1"), cur.get("dec2"))))

    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "block":
            flush()
            cur = {"block": int(rest)}
        elif head.startswith("dec"):
            cur[head] = dict(part.split("=", 1) for part in rest.split()) if rest else {}
        else:
            cur[head] = BitVec.from_str(rest)
    flush()
    return out
