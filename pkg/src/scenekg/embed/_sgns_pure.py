"""Pure-Python skip-gram negative-sampling kernel.

Reference implementation of the hot loop; `scenekg.embed._sgns_cy` is a
typed transliteration of exactly this code. Both use the same splitmix64
stream and the same operation order, so their output is bit-identical
(the extension is compiled with floating-point contraction disabled).
"""

import math

_MASK = (1 << 64) - 1
_INV_2_53 = 1.0 / (1 << 53)
_MAX_DOT = 6.0
_MIN_ALPHA_FRAC = 1e-4


def _next_u64(state):
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, (z ^ (z >> 31))


def train_kernel(sentences, vocab_size, dim, window, negatives, epochs,
                 lr, seed, neg_cum):
    """Returns (flat input vectors, per-epoch mean losses)."""
    state = (seed ^ 0xD1B54A32D192ED03) & _MASK

    w_in = [0.0] * (vocab_size * dim)
    w_out = [0.0] * (vocab_size * dim)
    for i in range(vocab_size * dim):
        state, z = _next_u64(state)
        w_in[i] = ((z >> 11) * _INV_2_53 - 0.5) / dim

    n_pairs = 0
    for sent in sentences:
        n = len(sent)
        for i in range(n):
            lo = i - window if i - window > 0 else 0
            hi = i + window if i + window < n - 1 else n - 1
            n_pairs += hi - lo  # every j in [lo, hi] except j == i
    total_updates = n_pairs * epochs
    if total_updates == 0:
        return w_in, [0.0] * epochs

    neg_total = neg_cum[-1]
    err = [0.0] * dim
    losses = []
    done = 0
    for _epoch in range(epochs):
        epoch_loss = 0.0
        epoch_terms = 0
        for sent in sentences:
            n = len(sent)
            for i in range(n):
                center = sent[i]
                lo = i - window if i - window > 0 else 0
                hi = i + window if i + window < n - 1 else n - 1
                for j in range(lo, hi + 1):
                    if j == i:
                        continue
                    context = sent[j]
                    frac = 1.0 - done / total_updates
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
                            state, z = _next_u64(state)
                            u = (z >> 11) * _INV_2_53 * neg_total
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
                        sig = 1.0 / (1.0 + math.exp(-dot))
                        g = (label - sig) * alpha
                        epoch_loss -= math.log(sig if label == 1.0
                                               else 1.0 - sig)
                        epoch_terms += 1
                        for d in range(dim):
                            err[d] += g * w_out[tbase + d]
                            w_out[tbase + d] += g * w_in[cbase + d]
                    cbase = center * dim
                    for d in range(dim):
                        w_in[cbase + d] += err[d]
        losses.append(epoch_loss / epoch_terms if epoch_terms else 0.0)
    return w_in, losses


def _bisect(cum, value):
    lo, hi = 0, len(cum) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid] <= value:
            lo = mid + 1
        else:
            hi = mid
    return lo
