"""Structure-constant tables and the sign conventions of the bar differential.

A product block collapses consecutive tensor factors of a chain word.  Three
kinds occur:

  AA  composition of consecutive morphisms between collection objects,
  AN  composition of trailing morphisms into the Serre-twisted factor,
  NA  the cyclic wrap: the Serre-twisted factor composed with leading
      morphisms transported through the inverse Serre functor.

Words carry bar-complex Koszul signs computed from reduced degrees: a
morphism factor of internal degree d counts d - 1, the twisted factor counts
its full degree.  Any consistent convention yields the same cohomology; the
one fixed here is verified operationally by the d . d = 0 check at complex
build time, so structure constants supplied for higher products must satisfy
the relations in exactly this convention.
"""

from __future__ import annotations

from fractions import Fraction

AA = "AA"
AN = "AN"
NA = "NA"


def key_aa(chain, degs):
    return (AA, None, tuple(chain), tuple(degs))


def key_an(twist_src, chain, degs):
    return (AN, twist_src, tuple(chain), tuple(degs))


def key_na(from_obj, chain, degs):
    return (NA, from_obj, tuple(chain), tuple(degs))


def arity_of(key):
    kind, _, chain, degs = key
    return len(degs)


def check_key_shape(key, n):
    """Structural sanity of a product key; raises ValueError on nonsense."""
    kind, aux, chain, degs = key
    arity = len(degs)
    if arity < 2:
        raise ValueError(f"product arity must be >= 2, got {arity}")
    if any(not (1 <= c <= n) for c in chain):
        raise ValueError(f"chain {chain} out of range 1..{n}")
    if any(chain[i] >= chain[i + 1] for i in range(len(chain) - 1)):
        raise ValueError(f"chain {chain} not strictly increasing")
    if kind == AA:
        if aux is not None:
            raise ValueError("AA products carry no twist parameter")
        if len(chain) != arity + 1:
            raise ValueError(f"AA chain {chain} does not match arity {arity}")
    elif kind == AN:
        if len(chain) != arity:
            raise ValueError(f"AN chain {chain} does not match arity {arity}")
        if not (1 <= aux <= chain[0]):
            raise ValueError(f"AN twist source {aux} must be <= {chain[0]}")
    elif kind == NA:
        if len(chain) != arity:
            raise ValueError(f"NA chain {chain} does not match arity {arity}")
        if not (chain[-1] <= aux <= n):
            raise ValueError(f"NA target object {aux} must be >= {chain[-1]}")
    else:
        raise ValueError(f"unknown product kind {kind!r}")


def source_spaces(key):
    """The factor spaces consumed by the block, in word order.

    Yields ("A", i, j, deg) or ("N", i, j, deg) tuples.
    """
    kind, aux, chain, degs = key
    if kind == AA:
        return [("A", chain[t], chain[t + 1], degs[t]) for t in range(len(degs))]
    if kind == AN:
        out = [("A", chain[t], chain[t + 1], degs[t]) for t in range(len(chain) - 1)]
        out.append(("N", aux, chain[-1], degs[-1]))
        return out
    out = [("N", chain[0], aux, degs[0])]
    out.extend(
        ("A", chain[t], chain[t + 1], degs[t + 1]) for t in range(len(chain) - 1)
    )
    return out


def target_space(key):
    """The space the block lands in, as ("A"|"N", i, j, deg)."""
    kind, aux, chain, degs = key
    deg = sum(degs) + 2 - len(degs)
    if kind == AA:
        return ("A", chain[0], chain[-1], deg)
    if kind == AN:
        return ("N", aux, chain[0], deg)
    return ("N", chain[-1], aux, deg)


def normalize_table(table):
    """Drop zero coefficients; reject malformed entries."""
    out = {}
    for src, row in table.items():
        cleaned = {o: v for o, v in row.items() if v != 0}
        if cleaned:
            out[tuple(src)] = cleaned
    return out


# -- Koszul signs -----------------------------------------------------------
#
# A word over the chain a_0 < ... < a_p is (x_0, ..., x_{p-1}, nu) with
# x_r in Ext(E_{a_r}, E_{a_r+1}) and nu in the Serre-twisted factor.
# reduced(x_r) = deg - 1, reduced(nu) = deg.


def _parity(x):
    return x & 1


def sign_aa(a_degs, n_deg, r, k):
    """Sign of the block applying the arity-k product to letters r..r+k-1."""
    exp = sum(d - 1 for d in a_degs[:r])
    exp += sum((k - 1 - t) * (a_degs[r + t] - 1) for t in range(k))
    return -1 if _parity(exp) else 1


def sign_an(a_degs, n_deg, k):
    """Sign of the block composing the last k-1 letters into the twisted one."""
    p = len(a_degs)
    exp = sum(d - 1 for d in a_degs[: p - k + 1])
    exp += sum((k - s) * (a_degs[p - k + s] - 1) for s in range(1, k))
    return -1 if _parity(exp) else 1


def sign_na(a_degs, n_deg, k):
    """Sign of the cyclic wrap consuming the twisted factor and k-1 letters.

    Built from three moves: rotate the twisted factor to the front, apply the
    product there, rotate the output back past the surviving letters.
    """
    p = len(a_degs)
    out_deg = n_deg + sum(a_degs[: k - 1]) + 2 - k
    exp = n_deg * sum(d - 1 for d in a_degs)
    exp += (k - 1) * n_deg + sum((k - 2 - t) * (a_degs[t] - 1) for t in range(k - 2))
    exp += out_deg * sum(d - 1 for d in a_degs[k - 1 :])
    return -1 if _parity(exp) else 1
