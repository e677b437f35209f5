"""Pure-Python trial kernels.

Each kernel runs trials ``start .. stop-1`` (trial index = stream index) and
returns the integer accumulator

    (completed, sum_tau, sum_tau_sq, truncated, errors, dropped, decode_errors)

where sums run over completed (non-truncated) trials. The compiled module
``_kernels`` exposes the same functions with identical draw order, so both
backends return identical tuples for identical arguments.
"""

from __future__ import annotations

from .channel import ChannelSpec, RngStream, Symbol, q_output, transmit
from .gf2 import Gf2Basis, Gf2Vector, basis_insert, inner_product, sample_nonzero_vector
from .huffman import equiprobable_code

IID, BALANCED, LINEAR = 0, 1, 2
VARIANTS = ("closed", "open-lower", "open-upper", "open-both")


class _Acc:
    __slots__ = ("completed", "total", "total_sq", "truncated", "errors", "dropped", "decode_errors")

    def __init__(self):
        self.completed = self.total = self.total_sq = 0
        self.truncated = self.errors = self.dropped = self.decode_errors = 0

    def add(self, tau: int) -> None:
        self.completed += 1
        self.total += tau
        self.total_sq += tau * tau

    def result(self) -> tuple[int, ...]:
        return (self.completed, self.total, self.total_sq, self.truncated,
                self.errors, self.dropped, self.decode_errors)


def huffman_repeat(key: int, start: int, stop: int, M: int, eps: float, delta: float,
                   cap: int) -> tuple[int, ...]:
    code = equiprobable_code(M)
    spec = ChannelSpec(delta)
    acc = _Acc()
    for t in range(start, stop):
        rng = RngStream(key, t)
        drop = rng.uniform() < eps
        w = rng.bounded(M)
        if drop:
            acc.dropped += 1
            acc.add(0)
            if w != 0:
                acc.errors += 1
            continue
        word = code.encode(w)
        received: list[int] = []
        n = 0
        truncated = False
        for ch in word:
            while True:
                if n == cap:
                    truncated = True
                    break
                n += 1
                sym = transmit(spec, int(ch), rng)
                if sym is not Symbol.ERASURE:
                    received.append(int(sym))
                    break
            if truncated:
                break
        if truncated:
            acc.truncated += 1
            continue
        decoded, _ = code.decode(received)
        acc.add(n)
        if decoded != w:
            acc.errors += 1
            acc.decode_errors += 1
    return acc.result()


def q_channel(key: int, start: int, stop: int, M: int, delta: float, cap: int) -> tuple[int, ...]:
    """Huffman-repeat code whose outputs come from Q; ``errors`` counts failures."""
    code = equiprobable_code(M)
    f = M.bit_length() - 1
    n_short = (1 << (f + 1)) - M
    spec = ChannelSpec(delta)
    acc = _Acc()
    for t in range(start, stop):
        rng = RngStream(key, t)
        w = rng.bounded(M)
        # The encoder still repeats each codeword bit until unerased, but Q's
        # output ignores the input, so only the decoder's parse matters.
        received: list[int] = []
        n = 0
        while not _complete(received, f, n_short):
            if n == cap:
                break
            n += 1
            sym = q_output(spec, rng)
            if sym is not Symbol.ERASURE:
                received.append(int(sym))
        if not _complete(received, f, n_short):
            acc.truncated += 1
            continue
        decoded, _ = code.decode(received)
        acc.add(n)
        if decoded != w:
            acc.errors += 1
    return acc.result()


def _complete(bits: list[int], f: int, n_short: int) -> bool:
    if len(bits) < f:
        return False
    if len(bits) > f:
        return True
    value = 0
    for b in bits:
        value = (value << 1) | b
    return value < n_short


def iid_column(M: int, rng: RngStream) -> int:
    """One iid Bernoulli(1/2) codebook column; bit ``r`` belongs to message ``r``."""
    col = 0
    for i in range((M + 63) // 64):
        col |= rng.next_u64() << (64 * i)
    return col & ((1 << M) - 1)


def balanced_column(M: int, rng: RngStream) -> int:
    """Column drawn uniformly among those with exactly ``ceil(M/2)`` zeros."""
    zeros_left = (M + 1) // 2
    col = 0
    for r in range(M):
        if rng.bounded(M - r) < zeros_left:
            zeros_left -= 1
        else:
            col |= 1 << r
    assert zeros_left == 0
    return col


def _solve(basis: Gf2Basis, k: int) -> int:
    """Message from a full-rank augmented echelon basis of rows ``[g | y]``."""
    solution = 0
    for row in reversed(basis.rows):
        p = row.leading
        g, y = row.word >> 1, row.word & 1
        # coordinates after the pivot are already solved
        known = g & ((1 << (k - 1 - p)) - 1)
        solution |= (y ^ ((known & solution).bit_count() & 1)) << (k - 1 - p)
    return solution


def vlsf(key: int, start: int, stop: int, ensemble: int, M: int, eps: float, delta: float,
         cap: int) -> tuple[int, ...]:
    spec = ChannelSpec(delta)
    k = M.bit_length() - 1
    acc = _Acc()
    for t in range(start, stop):
        rng = RngStream(key, t)
        drop = rng.uniform() < eps
        w = rng.bounded(M)
        if drop:
            acc.dropped += 1
            acc.add(0)
            if w != 0:
                acc.errors += 1
            continue
        n = 0
        decoded = -1
        if ensemble == LINEAR:
            message = Gf2Vector(k, w)
            basis = Gf2Basis.empty(k + 1)
        else:
            survivors = list(range(M))
        while True:
            if n == cap:
                break
            n += 1
            # the column at an erased position is never observed, so it is never drawn
            if rng.uniform() < spec.delta:
                continue
            if ensemble == LINEAR:
                g = sample_nonzero_vector(k, rng)
                y = inner_product(message, g)
                basis, _ = basis_insert(basis, Gf2Vector(k + 1, (g.word << 1) | y))
                if basis.rank == k:
                    decoded = _solve(basis, k)
                    break
            else:
                col = iid_column(M, rng) if ensemble == IID else balanced_column(M, rng)
                b = (col >> w) & 1
                survivors = [r for r in survivors if (col >> r) & 1 == b]
                if len(survivors) == 1:
                    decoded = survivors[0]
                    break
        if decoded < 0:
            acc.truncated += 1
            continue
        acc.add(n)
        if decoded != w:
            acc.errors += 1
            acc.decode_errors += 1
    return acc.result()


def sprt(key: int, start: int, stop: int, m: int, cum_weights: tuple[float, float, float, float],
         hypothesis: int, delta: float, cap: int) -> tuple[int, ...]:
    """Extended SPRT runs; ``errors`` counts wrong decisions (hypothesis 0 = P, 1 = Q)."""
    from .sprt import run_one

    acc = _Acc()
    for t in range(start, stop):
        rng = RngStream(key, t)
        u = rng.uniform()
        variant = next((i for i in range(3) if u < cum_weights[i]), 3)
        decision, tau = run_one(m, variant, hypothesis, delta, rng, cap)
        if decision < 0:
            acc.truncated += 1
            continue
        acc.add(tau)
        if decision != hypothesis:
            acc.errors += 1
    return acc.result()
