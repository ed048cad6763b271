"""Compiled inner loops for the collapsed Gibbs sampler."""

import numpy as np
from numba import njit


@njit(cache=True)
def sweep(words, docs, z, n_dk, n_kw, n_k, alpha, beta, uniforms):
    """Resample every token once, in corpus order, using one uniform per token."""
    K = n_k.shape[0]
    vbeta = n_kw.shape[1] * beta
    cumulative = np.empty(K)
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        k = z[i]
        n_dk[d, k] -= 1
        n_kw[k, w] -= 1
        n_k[k] -= 1
        total = 0.0
        for t in range(K):
            total += (n_dk[d, t] + alpha) * (n_kw[t, w] + beta) / (n_k[t] + vbeta)
            cumulative[t] = total
        target = uniforms[i] * total
        k = K - 1
        for t in range(K):
            if target < cumulative[t]:
                k = t
                break
        z[i] = k
        n_dk[d, k] += 1
        n_kw[k, w] += 1
        n_k[k] += 1


@njit(cache=True)
def log_likelihood(words, docs, doc_len, n_dk, n_kw, n_k, alpha, beta):
    """Sum of log p(w) under the smoothed point estimates of the current counts."""
    K = n_k.shape[0]
    V = n_kw.shape[1]
    total = 0.0
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        p = 0.0
        for t in range(K):
            theta = (n_dk[d, t] + alpha) / (doc_len[d] + K * alpha)
            phi = (n_kw[t, w] + beta) / (n_k[t] + V * beta)
            p += theta * phi
        total += np.log(p)
    return total
