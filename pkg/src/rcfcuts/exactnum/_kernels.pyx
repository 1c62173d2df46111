# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernels; same contract as ``_kernels_py``."""


cpdef int sign_at(list coeffs, object num, object den):
    cdef Py_ssize_t n = len(coeffs)
    cdef Py_ssize_t i
    cdef object acc, dpow
    if n == 0:
        return 0
    acc = coeffs[n - 1]
    dpow = 1
    for i in range(n - 2, -1, -1):
        dpow = dpow * den
        acc = acc * num + coeffs[i] * dpow
    if acc > 0:
        return 1
    if acc < 0:
        return -1
    return 0


cpdef int sign_variations(list seq, object num, object den):
    cdef int count = 0
    cdef int last = 0
    cdef int s
    for coeffs in seq:
        s = sign_at(coeffs, num, den)
        if s == 0:
            continue
        if last != 0 and s != last:
            count += 1
        last = s
    return count


cdef tuple _pow_range(object lo, object hi, long k):
    cdef object a, b
    if k == 0:
        return 1, 1
    a = lo ** k
    b = hi ** k
    if k % 2 == 1 or lo >= 0:
        return a, b
    if hi <= 0:
        return b, a
    return 0, (a if a > b else b)


cpdef tuple box_eval(list terms, list lo_nums, list hi_nums, list dens):
    cdef Py_ssize_t dims = len(dens)
    cdef Py_ssize_t j
    cdef long k, rest
    cdef list top = [0] * dims
    cdef object den, total_lo, total_hi, mlo, mhi, scale, plo, phi
    cdef object p1, p2, p3, p4, c
    cdef tuple exps
    for c, exps in terms:
        for j in range(dims):
            if exps[j] > top[j]:
                top[j] = exps[j]
    den = 1
    for j in range(dims):
        den = den * dens[j] ** top[j]
    total_lo = 0
    total_hi = 0
    for c, exps in terms:
        mlo = 1
        mhi = 1
        scale = 1
        for j in range(dims):
            k = exps[j]
            if k:
                plo, phi = _pow_range(lo_nums[j], hi_nums[j], k)
                p1 = mlo * plo
                p2 = mlo * phi
                p3 = mhi * plo
                p4 = mhi * phi
                mlo = min(p1, p2, p3, p4)
                mhi = max(p1, p2, p3, p4)
            rest = top[j] - k
            if rest:
                scale = scale * dens[j] ** rest
        if c >= 0:
            total_lo += c * mlo * scale
            total_hi += c * mhi * scale
        else:
            total_lo += c * mhi * scale
            total_hi += c * mlo * scale
    return total_lo, total_hi, den
