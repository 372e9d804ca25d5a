"""Height of a collection and the induced Hochschild-cohomology comparison.

The height is the minimal degree in which the cohomology of the normal
complex is nonzero.  It bounds the restriction map from the Hochschild
cohomology of the ambient variety to that of the orthogonal complement: an
isomorphism up to height - 2 and a monomorphism in height - 1; height >= 4
makes the formal deformation spaces agree.

Exact data gives a point value.  If higher products are declared truncated,
only pages up to the supplied arity are trusted: the minimal nonzero total
degree of the last trusted page is a lower bound, and it is attained exactly
when a class in the -p = 0 column sits at that minimal degree (nothing maps
out of that column and nothing of smaller degree can hit it).  Qualitative
data goes through the pseudoheight interval; a pinned interval attained on a
length-0 chain is again exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import INF, SpecError
from .nhh import assemble_differential, spectral_sequence, total_cohomology
from .pseudoheight import PhBounds, pseudoheight, qualitative_ph_bounds


@dataclass(frozen=True)
class Height:
    """A height value: a point when lo == hi, else the interval [lo, hi]."""

    lo: float
    hi: float
    nhh_vanishes: bool = False  # all cohomology zero: possible full collection

    @property
    def is_point(self):
        return self.lo == self.hi

    def shifted(self, amount):
        lo = self.lo - amount if self.lo != INF else INF
        hi = self.hi - amount if self.hi != INF else INF
        return Height(lo, hi, self.nhh_vanishes)

    def __str__(self):
        def fmt(v):
            if v == INF:
                return "inf"
            if v == -INF:
                return "-inf"
            return str(int(v))

        if self.is_point:
            return fmt(self.lo)
        return f"[{fmt(self.lo)}, {fmt(self.hi)}]"


def heph_shortcut(spec):
    """Height equals pseudoheight when the witness chain has length 0.

    A class on a length-0 chain at the minimal total degree receives no
    differential and emits none, so it survives to the limit page.
    """
    ph = pseudoheight(spec)
    if ph.witness is not None and len(ph.witness) == 1:
        return ph.value
    return None


def height(spec, cx=None):
    """Height of the collection, as a point or an interval.

    Returns (Height, nhh_dims | None); nhh dims are only available on the
    exact route.
    """
    if spec.is_exact:
        if cx is None:
            cx = assemble_differential(spec)
        nhh = total_cohomology(cx)
        if spec.higher_complete:
            nonzero = [t for t, d in nhh.items() if d > 0]
            if not nonzero:
                return Height(INF, INF, nhh_vanishes=True), nhh
            h = min(nonzero)
            return Height(h, h), nhh
        # trusted through the page driven by the largest supplied arity
        trusted = spec.max_arity
        ss = spectral_sequence(cx, max_page=trusted)
        page = ss.page(trusted)
        degrees = [mp + q for (mp, q), d in page.items() if d > 0]
        if not degrees:
            return Height(INF, INF, nhh_vanishes=True), nhh
        lo = min(degrees)
        survivor_at_zero = any(
            mp == 0 and mp + q == lo and d > 0 for (mp, q), d in page.items()
        )
        if survivor_at_zero or heph_shortcut(spec) == lo:
            return Height(lo, lo), nhh
        return Height(lo, INF), nhh
    bounds = qualitative_ph_bounds(spec)
    lo = bounds.lower
    if (
        bounds.pinned
        and bounds.witness_chain is not None
        and len(bounds.witness_chain) == 1
    ):
        v = bounds.lower + spec.dim_x
        return Height(v, v), None
    lo_abs = lo + spec.dim_x if lo not in (INF, -INF) else lo
    return Height(lo_abs, INF), None


def hkr_total(h_table):
    """Collapse a Hodge-type table (q, p) -> h^q(Lambda^p T) to total dims."""
    if not h_table:
        return []
    top = max(q + p for (q, p) in h_table)
    out = [0] * (top + 1)
    for (q, p), d in h_table.items():
        out[q + p] += d
    return out


@dataclass
class HeightReport:
    ph: float | None
    ph_ac: float | None
    height: Height
    height_ac: Height
    used_shortcut: str  # none | heph | qualitative
    iso_range: float  # restriction map is an isomorphism for k <= iso_range
    mono_degree: float  # and a monomorphism at k = mono_degree
    deformation_equivalent: bool
    nhh_dims: dict | None = None
    hoh_x_dims: list | None = None
    hoh_a_dims: list | None = None
    ph_bounds: PhBounds | None = None
    witness: tuple | None = None


def comparison_report(spec, h, hoh_x_dims=None, nhh_dims=None, **extra):
    """Assemble the full report from a computed height.

    Only the proven lower bound drives the comparison: iso range h.lo - 2,
    monomorphism at h.lo - 1, deformation equivalence at h.lo >= 4.
    """
    lo = h.lo
    iso = lo - 2 if lo != INF else INF
    mono = lo - 1 if lo != INF else INF
    hoh_a = None
    if hoh_x_dims is not None:
        hoh_a = [
            d if (iso == INF or k <= iso) else None
            for k, d in enumerate(hoh_x_dims)
        ]
    return HeightReport(
        height=h,
        height_ac=h.shifted(spec.dim_x),
        iso_range=iso,
        mono_degree=mono,
        deformation_equivalent=(lo != INF and lo >= 4) or lo == INF,
        hoh_x_dims=hoh_x_dims,
        hoh_a_dims=hoh_a,
        nhh_dims=nhh_dims,
        **extra,
    )


def build_report(spec, hoh_x_dims=None):
    """End-to-end report: pseudoheight, height, comparison ranges."""
    if spec.is_exact:
        ph = pseudoheight(spec)
        h, nhh = height(spec)
        shortcut = "none"
        if heph_shortcut(spec) is not None:
            shortcut = "heph"
        return comparison_report(
            spec,
            h,
            hoh_x_dims,
            nhh_dims=nhh,
            ph=ph.value,
            ph_ac=ph.value_ac,
            used_shortcut=shortcut,
            witness=ph.witness,
        )
    bounds = qualitative_ph_bounds(spec)
    h, _ = height(spec)
    return comparison_report(
        spec,
        h,
        hoh_x_dims,
        nhh_dims=None,
        ph=(bounds.lower + spec.dim_x) if bounds.pinned else None,
        ph_ac=bounds.lower if bounds.pinned else None,
        used_shortcut="qualitative",
        witness=bounds.witness_chain,
        ph_bounds=bounds,
    )
