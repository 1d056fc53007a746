# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled skip-gram negative-sampling kernel.

Typed transliteration of `_sgns_pure.train_kernel`; the two must stay in
lockstep so both backends produce bit-identical embeddings. Keep any
change here mirrored in the pure module.
"""

from libc.math cimport exp, log

import numpy as np


cdef unsigned long long _MASK = 0xFFFFFFFFFFFFFFFFULL
cdef double _INV_2_53 = 1.0 / 9007199254740992.0
cdef double _MAX_DOT = 6.0
cdef double _MIN_ALPHA_FRAC = 1e-4


cdef inline unsigned long long _mix(unsigned long long state) nogil:
    cdef unsigned long long z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline long _bisect(double[::1] cum, double value) nogil:
    cdef long lo = 0
    cdef long hi = cum.shape[0] - 1
    cdef long mid
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid] <= value:
            lo = mid + 1
        else:
            hi = mid
    return lo


def train_kernel(sentences, long vocab_size, long dim, long window,
                 long negatives, long epochs, double lr,
                 unsigned long long seed, neg_cum_list):
    """Returns (flat input vectors, per-epoch mean losses)."""
    cdef unsigned long long state = seed ^ 0xD1B54A32D192ED03ULL
    cdef unsigned long long z

    cdef double[::1] w_in = np.zeros(vocab_size * dim, dtype=np.float64)
    cdef double[::1] w_out = np.zeros(vocab_size * dim, dtype=np.float64)
    cdef double[::1] neg_cum = np.asarray(neg_cum_list, dtype=np.float64)
    cdef double[::1] err = np.zeros(dim, dtype=np.float64)

    cdef long i
    for i in range(vocab_size * dim):
        state = (state + 0x9E3779B97F4A7C15ULL) & _MASK
        z = _mix(state)
        w_in[i] = ((z >> 11) * _INV_2_53 - 0.5) / dim

    # flatten the corpus for typed iteration
    lengths = [len(sent) for sent in sentences]
    flat = [word for sent in sentences for word in sent]
    cdef long[::1] sent_len = np.asarray(lengths, dtype=np.int64)
    cdef long[::1] words = np.asarray(flat if flat else [0], dtype=np.int64)
    cdef long n_sent = sent_len.shape[0]

    cdef long n_pairs = 0
    cdef long s, n, lo, hi, j, k, d, center, context, target
    cdef long offset
    for s in range(n_sent):
        n = sent_len[s]
        for i in range(n):
            lo = i - window if i - window > 0 else 0
            hi = i + window if i + window < n - 1 else n - 1
            n_pairs += hi - lo
    cdef long total_updates = n_pairs * epochs
    if total_updates == 0:
        return list(w_in), [0.0] * epochs

    cdef double neg_total = neg_cum[neg_cum.shape[0] - 1]
    cdef double frac, alpha, dot, sig, g, label, u, epoch_loss
    cdef long done = 0, epoch_terms, cbase, tbase, epoch
    losses = []
    for epoch in range(epochs):
        epoch_loss = 0.0
        epoch_terms = 0
        offset = 0
        for s in range(n_sent):
            n = sent_len[s]
            for i in range(n):
                center = words[offset + i]
                lo = i - window if i - window > 0 else 0
                hi = i + window if i + window < n - 1 else n - 1
                for j in range(lo, hi + 1):
                    if j == i:
                        continue
                    context = words[offset + j]
                    frac = 1.0 - (<double>done) / (<double>total_updates)
                    if frac < _MIN_ALPHA_FRAC:
                        frac = _MIN_ALPHA_FRAC
                    alpha = lr * frac
                    done += 1
                    for d in range(dim):
                        err[d] = 0.0
                    for k in range(negatives + 1):
                        if k == 0:
                            target = context
                            label = 1.0
                        else:
                            state = (state + 0x9E3779B97F4A7C15ULL) & _MASK
                            z = _mix(state)
                            u = ((z >> 11) * _INV_2_53) * neg_total
                            target = _bisect(neg_cum, u)
                            if target == context:
                                continue
                            label = 0.0
                        cbase = center * dim
                        tbase = target * dim
                        dot = 0.0
                        for d in range(dim):
                            dot += w_in[cbase + d] * w_out[tbase + d]
                        if dot > _MAX_DOT:
                            dot = _MAX_DOT
                        elif dot < -_MAX_DOT:
                            dot = -_MAX_DOT
                        sig = 1.0 / (1.0 + exp(-dot))
                        g = (label - sig) * alpha
                        if label == 1.0:
                            epoch_loss -= log(sig)
                        else:
                            epoch_loss -= log(1.0 - sig)
                        epoch_terms += 1
                        for d in range(dim):
                            err[d] += g * w_out[tbase + d]
                            w_out[tbase + d] += g * w_in[cbase + d]
                    cbase = center * dim
                    for d in range(dim):
                        w_in[cbase + d] += err[d]
            offset += n
        losses.append(epoch_loss / epoch_terms if epoch_terms else 0.0)
    return list(w_in), losses
