"""The normal complex of an exceptional collection and its spectral sequence.

For a collection E_1, ..., E_n the bigraded space in bidegree (-p, q) is the
sum, over strictly increasing chains a_0 < ... < a_p and degree splits
k_0 + ... + k_p = q, of

    Ext^{k_0}(E_{a_0}, E_{a_1}) (x) ... (x) Ext^{k_p}(E_{a_p}, S^{-1} E_{a_0})

with the twisted factor always last.  Since the input is a minimal model the
internal differential vanishes, so this bigraded space is already the first
page.  The differential is the signed sum of product blocks: compositions of
adjacent factors, the composition of the trailing factor into the twisted
one, the cyclic wrap through the inverse Serre functor, and one block per
supplied higher product; an arity-k block moves column -p to -p + (k-1).
d . d = 0 is verified exactly at build time and failures name the offending
source terms.

Total degree is t = q - p.  The decreasing column filtration by -p gives the
spectral sequence; its page-r differential is exactly the arity-(r+1) part,
computed through nested subquotients Z_r / B_r with explicit bases so that
surviving cocycles can be extracted later.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import products as pr
from .exactlin import (
    Matrix,
    Subspace,
    field_by_name,
    kernel_basis,
    rank,
    subquotient_dim,
)
from .model import SpecError
from .pseudoheight import iter_chains


class DifferentialError(ValueError):
    """d . d != 0: inconsistent structure constants or a relation violation."""


@dataclass(frozen=True)
class ChainTerm:
    """One tensor-product summand: a chain with a degree split."""

    chain: tuple
    degs: tuple  # internal degrees, the twisted factor last
    factor_dims: tuple

    @property
    def p(self):
        return len(self.chain) - 1

    @property
    def mp(self):
        return -self.p

    @property
    def q(self):
        return sum(self.degs)

    @property
    def t(self):
        return self.q - self.p

    @property
    def dim(self):
        out = 1
        for d in self.factor_dims:
            out *= d
        return out

    def strides(self):
        s = [1] * len(self.factor_dims)
        for i in range(len(self.factor_dims) - 2, -1, -1):
            s[i] = s[i + 1] * self.factor_dims[i + 1]
        return s

    def index_of(self, combo):
        return sum(b * s for b, s in zip(combo, self.strides()))


def enumerate_terms(spec):
    """All nonzero chain terms of the bigraded space."""
    terms = []
    for chain in iter_chains(spec.n):
        p = len(chain) - 1
        spaces = [spec.a_space(chain[s], chain[s + 1]) for s in range(p)]
        spaces.append(spec.n_space(chain[0], chain[-1]))
        if any(not sp for sp in spaces):
            continue
        for degs in itertools.product(*[sorted(sp) for sp in spaces]):
            dims = tuple(sp[d] for sp, d in zip(spaces, degs))
            terms.append(ChainTerm(chain, tuple(degs), dims))
    return terms


def build_e1(spec):
    """First-page table (-p, q) -> dim, with the contributing terms.

    Needs exact dims; the minimal total degree of a nonzero entry is the
    pseudoheight by construction.
    """
    if not spec.is_exact:
        raise SpecError("the first page needs exact Ext dimensions")
    table = {}
    index = {}
    for term in enumerate_terms(spec):
        key = (term.mp, term.q)
        table[key] = table.get(key, 0) + term.dim
        index.setdefault(key, []).append(term)
    for terms in index.values():
        terms.sort(key=lambda tm: (tm.chain, tm.degs))
    return table, index


@dataclass
class Block:
    """One signed product block of the differential."""

    source: ChainTerm
    target: ChainTerm
    key: tuple
    sign: int

    @property
    def arity(self):
        return pr.arity_of(self.key)


def _term_blocks(spec, term, term_lookup):
    """All differential blocks leaving a term, absent products skipped."""
    p = term.p
    a_degs = term.degs[:p]
    n_deg = term.degs[p]
    chain = term.chain
    blocks = []
    for m in range(2, spec.max_arity + 1):
        # adjacent compositions inside the morphism letters
        for r in range(0, p - m + 1):
            key = pr.key_aa(chain[r : r + m + 1], a_degs[r : r + m])
            table = spec.product_table(key)
            if not table:
                continue
            out_deg = sum(a_degs[r : r + m]) + 2 - m
            new_chain = chain[: r + 1] + chain[r + m :]
            new_degs = a_degs[:r] + (out_deg,) + a_degs[r + m :] + (n_deg,)
            target = term_lookup.get((new_chain, new_degs))
            if target is None:
                continue
            sign = pr.sign_aa(a_degs, n_deg, r, m)
            blocks.append((Block(term, target, key, sign), ("AA", r, m)))
        if m - 1 <= p:
            # trailing letters composed into the twisted factor
            key = pr.key_an(
                chain[0], chain[p - m + 1 :], a_degs[p - m + 1 :] + (n_deg,)
            )
            table = spec.product_table(key)
            if table:
                out_deg = sum(a_degs[p - m + 1 :]) + n_deg + 2 - m
                new_chain = chain[: p - m + 2]
                new_degs = a_degs[: p - m + 1] + (out_deg,)
                target = term_lookup.get((new_chain, new_degs))
                if target is not None:
                    sign = pr.sign_an(a_degs, n_deg, m)
                    blocks.append((Block(term, target, key, sign), ("AN", None, m)))
            # the cyclic wrap: twisted factor, then leading letters
            key = pr.key_na(chain[-1], chain[:m], (n_deg,) + a_degs[: m - 1])
            table = spec.product_table(key)
            if table:
                out_deg = n_deg + sum(a_degs[: m - 1]) + 2 - m
                new_chain = chain[m - 1 :]
                new_degs = a_degs[m - 1 :] + (out_deg,)
                target = term_lookup.get((new_chain, new_degs))
                if target is not None:
                    sign = pr.sign_na(a_degs, n_deg, m)
                    blocks.append((Block(term, target, key, sign), ("NA", None, m)))
    return blocks


def _block_entries(spec, block, placement, fld):
    """Yield (target_index, source_index, coefficient) over the block."""
    term = block.source
    target = block.target
    p = term.p
    kind, r, m = placement
    table = spec.product_table(block.key)
    dims = term.factor_dims
    if kind == "AA":
        consumed = list(range(r, r + m))
    elif kind == "AN":
        consumed = list(range(p - m + 1, p + 1))
    else:
        consumed = [p] + list(range(0, m - 1))
    untouched = [i for i in range(p + 1) if i not in consumed]
    sign = fld.one if block.sign > 0 else fld.neg(fld.one)
    for src_combo, row in table.items():
        for rest in itertools.product(*[range(dims[i]) for i in untouched]):
            full = [0] * (p + 1)
            for i, b in zip(untouched, rest):
                full[i] = b
            for i, b in zip(consumed, src_combo):
                full[i] = b
            src_idx = term.index_of(tuple(full))
            for out, coeff in row.items():
                if kind == "AA":
                    tgt_combo = full[:r] + [out] + full[r + m : p + 1]
                elif kind == "AN":
                    tgt_combo = full[: p - m + 1] + [out]
                else:
                    tgt_combo = full[m - 1 : p] + [out]
                tgt_idx = target.index_of(tuple(tgt_combo))
                yield tgt_idx, src_idx, fld.mul(sign, fld.of(coeff))


class NormalComplex:
    """The assembled total complex, graded by total degree."""

    def __init__(self, spec, fld, terms, by_t, offsets, t_dims, diffs, blocks):
        self.spec = spec
        self.field = fld
        self.terms = terms
        self.by_t = by_t
        self.offsets = offsets
        self.t_dims = t_dims
        self.diffs = diffs  # t -> Matrix from T^t to T^{t+1}
        self.blocks = blocks
        self._mp_cache = {}

    def degrees(self):
        return sorted(self.by_t)

    def differential(self, t):
        got = self.diffs.get(t)
        if got is not None:
            return got
        return Matrix.zero(self.t_dims.get(t + 1, 0), self.t_dims.get(t, 0), self.field)

    def term_offset(self, term):
        return self.offsets[(term.chain, term.degs)]

    def coordinate_mp(self, t):
        """For each coordinate of T^t, the column index -p it belongs to."""
        got = self._mp_cache.get(t)
        if got is None:
            got = [0] * self.t_dims.get(t, 0)
            for term in self.by_t.get(t, ()):
                off = self.term_offset(term)
                for i in range(term.dim):
                    got[off + i] = term.mp
            self._mp_cache[t] = got
        return got


def assemble_differential(spec, check=True):
    """Build the full differential; verifies d . d = 0 unless check=False."""
    fld = field_by_name(spec.field_name)
    terms = enumerate_terms(spec)
    term_lookup = {(tm.chain, tm.degs): tm for tm in terms}
    by_t = {}
    for tm in terms:
        by_t.setdefault(tm.t, []).append(tm)
    offsets = {}
    t_dims = {}
    for t, tms in by_t.items():
        tms.sort(key=lambda tm: (tm.mp, tm.chain, tm.degs))
        off = 0
        for tm in tms:
            offsets[(tm.chain, tm.degs)] = off
            off += tm.dim
        t_dims[t] = off
    diffs = {}
    all_blocks = []
    for tm in terms:
        for block, placement in _term_blocks(spec, tm, term_lookup):
            all_blocks.append(block)
            t = tm.t
            mat = diffs.get(t)
            if mat is None:
                mat = Matrix.zero(t_dims.get(t + 1, 0), t_dims[t], fld)
                diffs[t] = mat
            src_off = offsets[(tm.chain, tm.degs)]
            tgt_off = offsets[(block.target.chain, block.target.degs)]
            for ti, si, coeff in _block_entries(spec, block, placement, fld):
                mat.add_to(tgt_off + ti, src_off + si, coeff)
    cx = NormalComplex(spec, fld, terms, by_t, offsets, t_dims, diffs, all_blocks)
    if check:
        _check_square_zero(cx)
    return cx


def _check_square_zero(cx):
    for t in sorted(cx.diffs):
        first = cx.diffs[t]
        second = cx.diffs.get(t + 1)
        if second is None:
            continue
        sq = second.compose(first)
        if sq.is_zero():
            continue
        bad_cols = sorted({c for (_, c) in sq.entries})
        offenders = []
        for tm in cx.by_t[t]:
            off = cx.term_offset(tm)
            if any(off <= c < off + tm.dim for c in bad_cols):
                offenders.append(f"chain {tm.chain} degrees {tm.degs}")
            if len(offenders) >= 4:
                break
        raise DifferentialError(
            "d.d != 0 at total degree "
            f"{t}; inconsistent structure constants on: " + "; ".join(offenders)
        )


def total_cohomology(cx):
    """dim ker/im of the total differential in every populated degree."""
    out = {}
    ranks = {t: rank(m) for t, m in cx.diffs.items()}
    for t, dim in sorted(cx.t_dims.items()):
        r_out = ranks.get(t, 0)
        r_in = ranks.get(t - 1, 0)
        out[t] = dim - r_out - r_in
    return out


# -- spectral sequence -------------------------------------------------------


class SpectralSequencePages:
    """Page tables E_r (r >= 1), the limit page, and survivor bases."""

    def __init__(self, pages, infinity, stable_page, survivors):
        self.pages = pages  # r -> {(mp, q): dim}
        self.infinity = infinity
        self.stable_page = stable_page
        self._survivors = survivors  # (mp, q) -> (Z, B) subspaces of T^t

    def page(self, r):
        top = max(self.pages)
        return self.pages[min(r, top)]

    def survivors(self, mp, q):
        """Cocycle space and boundary space presenting E_inf at (mp, q)."""
        return self._survivors.get((mp, q))


def _filtration_columns(cx, t, j):
    """Coordinates of T^t lying in filtration level >= j."""
    mps = cx.coordinate_mp(t)
    return [i for i, mp in enumerate(mps) if mp >= j]


def _restricted_kernel(cx, t, j, bound):
    """{x in F^j T^t : d x in F^bound T^{t+1}} as a Subspace of T^t."""
    cols = _filtration_columns(cx, t, j)
    dim_t = cx.t_dims.get(t, 0)
    if not cols:
        return Subspace(dim_t, [], cx.field)
    d = cx.diffs.get(t)
    if d is None:
        return Subspace(
            dim_t, [{c: cx.field.one} for c in cols], cx.field
        )
    rows = [
        i
        for i, mp in enumerate(cx.coordinate_mp(t + 1))
        if mp < bound
    ]
    row_pos = {r: i for i, r in enumerate(rows)}
    col_pos = {c: i for i, c in enumerate(cols)}
    m = Matrix.zero(len(rows), len(cols), cx.field)
    for (r, c), v in d.entries.items():
        if r in row_pos and c in col_pos:
            m.entries[(row_pos[r], col_pos[c])] = v
    small = kernel_basis(m)
    lifted = [{cols[i]: v for i, v in vec.items()} for vec in small.basis]
    return Subspace(dim_t, lifted, cx.field)


def _apply_d(cx, t, sub):
    d = cx.diffs.get(t)
    dim_next = cx.t_dims.get(t + 1, 0)
    if d is None or sub.dim == 0:
        return Subspace(dim_next, [], cx.field)
    return Subspace(dim_next, [d.apply(v) for v in sub.basis], cx.field)


def spectral_sequence(cx, max_page=None):
    """Run the column-filtration spectral sequence page by page.

    Pages are computed through stabilization (never fewer than max_page when
    that is reachable); the limit page always comes from the closed formulas
    ker-cap-filtration over boundaries, so convergence can be checked.
    """
    if max_page is not None and max_page < 1:
        raise SpecError(f"max_page must be >= 1, got {max_page}")
    bidegrees = {}
    for t, tms in cx.by_t.items():
        for tm in tms:
            key = (tm.mp, tm.q)
            bidegrees[key] = bidegrees.get(key, 0) + tm.dim
    if not bidegrees:
        return SpectralSequencePages({1: {}}, {}, 1, {})
    mp_values = sorted({mp for mp, _ in bidegrees})
    width = mp_values[-1] - mp_values[0]
    r_inf = width + 1
    r_top = max(r_inf, max_page or 1)

    # Z_r caches: (r, j, t) -> Subspace of T^t
    zcache = {}

    def z_space(r, j, t):
        """{x in F^j T^t : d x in F^{j+r}}; r = 0 degenerates to F^j itself."""
        if t not in cx.t_dims:
            return Subspace(0, [], cx.field)
        key = (r, j, t)
        got = zcache.get(key)
        if got is None:
            if r > 0:
                got = _restricted_kernel(cx, t, j, j + r)
            else:
                got = Subspace(
                    cx.t_dims[t],
                    [{c: cx.field.one} for c in _filtration_columns(cx, t, j)],
                    cx.field,
                )
            zcache[key] = got
        return got

    pages = {}
    for r in range(1, min(r_top, r_inf) + 1):
        table = {}
        for (mp, q) in bidegrees:
            t = q + mp
            z = z_space(r, mp, t)
            border = z_space(r - 1, mp + 1, t).sum(
                _apply_d(cx, t - 1, z_space(r - 1, mp - r + 1, t - 1))
            )
            dim = subquotient_dim(z, border)
            if dim:
                table[(mp, q)] = dim
        pages[r] = table

    infinity = {}
    survivors = {}
    for (mp, q) in bidegrees:
        t = q + mp
        z = z_space(r_inf, mp, t)  # = ker d cap F^mp: width exceeded
        border = z_space(r_inf, mp + 1, t).sum(
            _apply_d(cx, t - 1, z_space(r_inf, mp - r_inf, t - 1))
        )
        dim = subquotient_dim(z, border)
        survivors[(mp, q)] = (z, border)
        if dim:
            infinity[(mp, q)] = dim

    stable = 1
    for r in sorted(pages, reverse=True):
        if pages[r] != infinity:
            stable = r + 1
            break
    last = max(pages)
    for r in range(last + 1, (max_page or 0) + 1):
        pages[r] = dict(infinity)
    return SpectralSequencePages(pages, infinity, min(stable, r_inf), survivors)
