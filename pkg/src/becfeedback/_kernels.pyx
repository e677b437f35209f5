# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trial kernels; same signatures, draw order and results as _kernels_py."""

from libc.stdint cimport uint64_t, int64_t, uint8_t, int32_t
from libc.stdlib cimport malloc, free

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TWO_POW_M53 = 1.0 / 9007199254740992.0

cdef enum:
    IID = 0
    BALANCED = 1
    LINEAR = 2


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t stream_state(uint64_t key, uint64_t stream) noexcept nogil:
    return mix64(key ^ mix64(stream + GOLDEN))


cdef inline uint64_t next_u64(uint64_t* s) noexcept nogil:
    s[0] += GOLDEN
    return mix64(s[0])


cdef inline double uniform(uint64_t* s) noexcept nogil:
    return (next_u64(s) >> 11) * TWO_POW_M53


cdef inline uint64_t bounded(uint64_t* s, uint64_t n) noexcept nogil:
    cdef uint64_t threshold = (0 - n) % n
    cdef uint64_t x
    while True:
        x = next_u64(s)
        if x >= threshold:
            return x % n


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int parity(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x) & 1


cdef struct Acc:
    int64_t completed
    int64_t total
    int64_t total_sq
    int64_t truncated
    int64_t errors
    int64_t dropped
    int64_t decode_errors


cdef inline void acc_add(Acc* a, int64_t tau) noexcept nogil:
    a.completed += 1
    a.total += tau
    a.total_sq += tau * tau


cdef tuple acc_result(Acc* a):
    return (a.completed, a.total, a.total_sq, a.truncated, a.errors, a.dropped, a.decode_errors)


cdef inline void acc_zero(Acc* a) noexcept nogil:
    a.completed = 0
    a.total = 0
    a.total_sq = 0
    a.truncated = 0
    a.errors = 0
    a.dropped = 0
    a.decode_errors = 0


def huffman_repeat(uint64_t key, int64_t start, int64_t stop, uint64_t M, double eps,
                   double delta, int64_t cap):
    cdef Acc acc
    cdef uint64_t s, w, value, received, decoded
    cdef int f = 0, length, j, bit, truncated
    cdef bint drop
    cdef uint64_t n_short
    cdef int64_t t, n
    acc_zero(&acc)
    while (M >> (f + 1)) != 0:
        f += 1
    n_short = (1ULL << (f + 1)) - M
    with nogil:
        for t in range(start, stop):
            s = stream_state(key, <uint64_t>t)
            drop = uniform(&s) < eps
            w = bounded(&s, M)
            if drop:
                acc.dropped += 1
                acc_add(&acc, 0)
                if w != 0:
                    acc.errors += 1
                continue
            if w < n_short:
                value = w
                length = f
            else:
                value = w + n_short
                length = f + 1
            received = 0
            n = 0
            truncated = 0
            for j in range(length):
                bit = (value >> (length - 1 - j)) & 1
                while True:
                    if n == cap:
                        truncated = 1
                        break
                    n += 1
                    if uniform(&s) < delta:
                        continue
                    received = (received << 1) | bit
                    break
                if truncated:
                    break
            if truncated:
                acc.truncated += 1
                continue
            # prefix parse: f bits decide unless they start a long codeword
            if (received >> (length - f)) < n_short:
                decoded = received >> (length - f)
            else:
                decoded = received - n_short
            acc_add(&acc, n)
            if decoded != w:
                acc.errors += 1
                acc.decode_errors += 1
    return acc_result(&acc)


def q_channel(uint64_t key, int64_t start, int64_t stop, uint64_t M, double delta, int64_t cap):
    cdef Acc acc
    cdef uint64_t s, w, received, decoded, n_short
    cdef int f = 0, nrecv, complete
    cdef int64_t t, n
    acc_zero(&acc)
    while (M >> (f + 1)) != 0:
        f += 1
    n_short = (1ULL << (f + 1)) - M
    with nogil:
        for t in range(start, stop):
            s = stream_state(key, <uint64_t>t)
            w = bounded(&s, M)
            received = 0
            nrecv = 0
            n = 0
            complete = 0
            while True:
                if nrecv == f + 1 or (nrecv == f and received < n_short):
                    complete = 1
                    break
                if n == cap:
                    break
                n += 1
                if uniform(&s) < delta:
                    continue
                received = (received << 1) | (next_u64(&s) >> 63)
                nrecv += 1
            if not complete:
                acc.truncated += 1
                continue
            decoded = received if nrecv == f else received - n_short
            acc_add(&acc, n)
            if decoded != w:
                acc.errors += 1
    return acc_result(&acc)


def vlsf(uint64_t key, int64_t start, int64_t stop, int ensemble, uint64_t M, double eps,
         double delta, int64_t cap):
    cdef Acc acc
    cdef uint64_t s, w, g, v, sol, row
    cdef int k = 0, p, rank, yy, b, zeros_left
    cdef bint drop
    cdef int64_t t, n, r, count, kept, nwords, i
    cdef int64_t decoded
    cdef uint64_t basis[64]
    cdef uint8_t rhs[64]
    cdef int32_t* survivors = NULL
    cdef uint8_t* col = NULL
    cdef uint64_t* words = NULL
    acc_zero(&acc)
    while (M >> (k + 1)) != 0:
        k += 1
    nwords = (M + 63) // 64
    if ensemble != LINEAR:
        survivors = <int32_t*> malloc(M * sizeof(int32_t))
        col = <uint8_t*> malloc(M * sizeof(uint8_t))
        words = <uint64_t*> malloc(nwords * sizeof(uint64_t))
        if survivors == NULL or col == NULL or words == NULL:
            free(survivors)
            free(col)
            free(words)
            raise MemoryError()
    try:
        with nogil:
            for t in range(start, stop):
                s = stream_state(key, <uint64_t>t)
                drop = uniform(&s) < eps
                w = bounded(&s, M)
                if drop:
                    acc.dropped += 1
                    acc_add(&acc, 0)
                    if w != 0:
                        acc.errors += 1
                    continue
                n = 0
                decoded = -1
                if ensemble == LINEAR:
                    for p in range(k):
                        basis[p] = 0
                        rhs[p] = 0
                    rank = 0
                else:
                    for r in range(<int64_t>M):
                        survivors[r] = <int32_t>r
                    count = <int64_t>M
                while True:
                    if n == cap:
                        break
                    n += 1
                    if uniform(&s) < delta:
                        continue
                    if ensemble == LINEAR:
                        while True:
                            g = next_u64(&s) >> (64 - k)
                            if g != 0:
                                break
                        v = g
                        yy = parity(w & g)
                        for p in range(k - 1, -1, -1):
                            if (v >> p) & 1:
                                if basis[p] != 0:
                                    v ^= basis[p]
                                    yy ^= rhs[p]
                                else:
                                    basis[p] = v
                                    rhs[p] = <uint8_t>yy
                                    rank += 1
                                    break
                        if rank == k:
                            sol = 0
                            for p in range(k):
                                row = basis[p] & ((1ULL << p) - 1)
                                sol |= (<uint64_t>(rhs[p] ^ parity(row & sol))) << p
                            decoded = <int64_t>sol
                            break
                    else:
                        if ensemble == IID:
                            for i in range(nwords):
                                words[i] = next_u64(&s)
                            for r in range(<int64_t>M):
                                col[r] = (words[r >> 6] >> (r & 63)) & 1
                        else:
                            zeros_left = <int>((M + 1) // 2)
                            for r in range(<int64_t>M):
                                if bounded(&s, M - <uint64_t>r) < <uint64_t>zeros_left:
                                    zeros_left -= 1
                                    col[r] = 0
                                else:
                                    col[r] = 1
                        b = col[w]
                        kept = 0
                        for i in range(count):
                            if col[survivors[i]] == b:
                                survivors[kept] = survivors[i]
                                kept += 1
                        count = kept
                        if count == 1:
                            decoded = survivors[0]
                            break
                if decoded < 0:
                    acc.truncated += 1
                    continue
                acc_add(&acc, n)
                if <uint64_t>decoded != w:
                    acc.errors += 1
                    acc.decode_errors += 1
    finally:
        free(survivors)
        free(col)
        free(words)
    return acc_result(&acc)


def sprt(uint64_t key, int64_t start, int64_t stop, int m, tuple cum_weights, int hypothesis,
         double delta, int64_t cap):
    cdef Acc acc
    cdef uint64_t s
    cdef double u
    cdef double c0 = cum_weights[0], c1 = cum_weights[1], c2 = cum_weights[2]
    cdef int variant, upper, minus_inf, decision
    cdef int64_t t, n, steps
    acc_zero(&acc)
    with nogil:
        for t in range(start, stop):
            s = stream_state(key, <uint64_t>t)
            u = uniform(&s)
            if u < c0:
                variant = 0
            elif u < c1:
                variant = 1
            elif u < c2:
                variant = 2
            else:
                variant = 3
            if variant == 0 or variant == 2:
                acc_add(&acc, 0)
                if hypothesis != 1:
                    acc.errors += 1
                continue
            upper = m if variant == 1 else m + 1
            steps = 0
            minus_inf = 0
            n = 0
            decision = -1
            while True:
                if minus_inf:
                    decision = 1
                    break
                if steps >= upper:
                    decision = 0
                    break
                if n == cap:
                    break
                n += 1
                if uniform(&s) < delta:
                    continue
                if hypothesis == 0 or (next_u64(&s) >> 63):
                    steps += 1
                else:
                    minus_inf = 1
            if decision < 0:
                acc.truncated += 1
                continue
            acc_add(&acc, n)
            if decision != hypothesis:
                acc.errors += 1
    return acc_result(&acc)
