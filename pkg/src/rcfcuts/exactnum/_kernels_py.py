"""Pure-Python integer kernels.

Everything here works on Python ints only. A rational point is passed as a
``(num, den)`` pair with ``den > 0``; a box as parallel lists of lower and
upper numerators over one denominator per coordinate.
"""


def sign_at(coeffs, num, den):
    """Sign of the polynomial with ``coeffs`` (low to high) at ``num/den``."""
    n = len(coeffs)
    if n == 0:
        return 0
    # homogenized Horner: sum c_i num^i den^(d-i)
    acc = coeffs[n - 1]
    dpow = 1
    for i in range(n - 2, -1, -1):
        dpow *= den
        acc = acc * num + coeffs[i] * dpow
    if acc > 0:
        return 1
    if acc < 0:
        return -1
    return 0


def sign_variations(seq, num, den):
    """Sign changes of a polynomial sequence evaluated at ``num/den``."""
    count = 0
    last = 0
    for coeffs in seq:
        s = sign_at(coeffs, num, den)
        if s == 0:
            continue
        if last != 0 and s != last:
            count += 1
        last = s
    return count


def _pow_range(lo, hi, k):
    if k == 0:
        return 1, 1
    a = lo ** k
    b = hi ** k
    if k % 2 == 1:
        return a, b
    if lo >= 0:
        return a, b
    if hi <= 0:
        return b, a
    return 0, (a if a > b else b)


def box_eval(terms, lo_nums, hi_nums, dens):
    """Interval enclosure of a polynomial over a closed box.

    ``terms`` is a list of ``(coeff, exps)`` with ``len(exps) == len(dens)``.
    Returns ``(lo_num, hi_num, den)``: the enclosure is ``[lo_num/den,
    hi_num/den]``.
    """
    dims = len(dens)
    top = [0] * dims
    for _, exps in terms:
        for j in range(dims):
            if exps[j] > top[j]:
                top[j] = exps[j]
    den = 1
    for j in range(dims):
        den *= dens[j] ** top[j]
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
                scale *= dens[j] ** rest
        if c >= 0:
            total_lo += c * mlo * scale
            total_hi += c * mhi * scale
        else:
            total_lo += c * mhi * scale
            total_hi += c * mlo * scale
    return total_lo, total_hi, den
