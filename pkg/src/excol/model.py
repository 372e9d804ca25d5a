"""Data model for exceptional-collection inputs.

A collection document records, for objects E_1, ..., E_n on a variety of
dimension dim_x:

  * graded dimensions of Ext(E_i, E_j) for i < j          ("ext"),
  * graded dimensions of Ext(E_j, S^{-1} E_i) for i <= j  ("serre_ext"),
    where S^{-1} F = F (x) omega^{-1} [-dim_x] is the inverse Serre functor,
  * structure constants of the composition products and, optionally, of
    higher products                                        ("products",
    "higher_products"),
  * optional three-valued Ext-vanishing knowledge on the anticanonically
    extended collection                                    ("qualitative"),
  * optional labels, canonical degrees, geometric flags, and fullness
    certificate data.

Ext(E_i, E_i) = k.id is implicit and never stored; documents mentioning a
backwards Ext space are rejected.  Unspecified spaces are zero, unspecified
products are zero maps.  Serialization is canonical: sorted keys, sorted
entry lists, rationals as "p/q" strings, so serialize . parse is the
identity on canonical documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import products as pr

ZERO = "ZERO"
NONZERO = "NONZERO"
UNKNOWN = "UNKNOWN"

INF = float("inf")

KNOWN_FLAGS = {
    "is_surface",
    "ample_canonical",
    "line_bundles",
    "h2_anticanonical_nonzero",
    "higher_products_complete",
    "k_squared",
}


class SpecError(ValueError):
    """Malformed collection document."""


def _frac(value):
    if isinstance(value, bool):
        raise SpecError(f"bad rational {value!r}")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"bad rational {value!r}") from exc
    raise SpecError(f"bad rational {value!r}")


@dataclass
class QualitativeExtTable:
    """Three-valued Ext knowledge on the anticanonically extended collection.

    Keys are (src, dst, deg) with src in 1..n and dst in 1..2n; dst = n + i
    stands for E_i (x) omega^{-1}.  Degrees outside degree_window are ZERO
    when a window is declared, UNKNOWN otherwise.
    """

    n: int
    statuses: dict = field(default_factory=dict)
    degree_window: tuple | None = None

    def status(self, src, dst, deg):
        got = self.statuses.get((src, dst, deg))
        if got is not None:
            return got
        if self.degree_window is not None:
            lo, hi = self.degree_window
            if deg < lo or deg > hi:
                return ZERO
        return UNKNOWN

    def se_interval(self, src, dst):
        """Interval [lo, hi] for the minimal degree with nonzero Ext.

        lo = first degree not known ZERO (or +inf when everything is ZERO),
        hi = first degree known NONZERO (or +inf).  Without a degree window
        the lower end is -inf: finitely many statuses cannot bound first
        possible nonvanishing from below.
        """
        declared = sorted(d for (s, t, d) in self.statuses if s == src and t == dst)
        if self.degree_window is None:
            hi = INF
            for d in declared:
                if self.statuses[(src, dst, d)] == NONZERO:
                    hi = d
                    break
            return (-INF, hi)
        lo_deg, hi_deg = self.degree_window
        lo = INF
        hi = INF
        for d in range(lo_deg, hi_deg + 1):
            st = self.status(src, dst, d)
            if st != ZERO and lo == INF:
                lo = d
            if st == NONZERO:
                hi = d
                break
        return (lo, hi)

    def merged_with(self, updates):
        """New table with extra ZERO/NONZERO facts; conflicts raise SpecError."""
        statuses = dict(self.statuses)
        for key, st in updates.items():
            old = statuses.get(key)
            if old is not None and old != st:
                raise SpecError(f"qualitative conflict at {key}: {old} vs {st}")
            if self.degree_window is not None and st == NONZERO:
                lo, hi = self.degree_window
                if key[2] < lo or key[2] > hi:
                    raise SpecError(
                        f"NONZERO status at {key} outside degree window"
                    )
            statuses[key] = st
        return QualitativeExtTable(self.n, statuses, self.degree_window)


@dataclass
class Cochain:
    """An element of (or functional on) a sum of chain-tensor spaces.

    terms: list of (chain, degs, {basis_index: Fraction}); degs lists the
    internal degrees of the word factors, twisted factor last.
    """

    terms: list

    def sorted_terms(self):
        return sorted(
            ((tuple(c), tuple(d), dict(v)) for c, d, v in self.terms),
            key=lambda t: (t[0], t[1]),
        )


@dataclass
class FullnessData:
    xi: Cochain | None = None
    pairings: dict = field(default_factory=dict)  # object index -> Cochain


@dataclass
class CollectionSpec:
    n: int
    dim_x: int
    field_name: str = "Q"
    a_dims: dict = field(default_factory=dict)  # (i, j) -> {deg: dim}, i < j
    n_dims: dict = field(default_factory=dict)  # (i, j) -> {deg: dim}, i <= j
    products: dict = field(default_factory=dict)  # arity-2 key -> table
    higher: dict = field(default_factory=dict)  # arity >= 3 key -> table
    qualitative: QualitativeExtTable | None = None
    labels: list | None = None
    canonical_degrees: list | None = None
    flags: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    fullness_data: FullnessData | None = None

    def a_space(self, i, j):
        return self.a_dims.get((i, j), {})

    def n_space(self, i, j):
        return self.n_dims.get((i, j), {})

    def space(self, kind, i, j):
        return self.a_space(i, j) if kind == "A" else self.n_space(i, j)

    def space_dim(self, kind, i, j, deg):
        return self.space(kind, i, j).get(deg, 0)

    def product_table(self, key):
        if pr.arity_of(key) == 2:
            return self.products.get(key)
        return self.higher.get(key)

    @property
    def is_exact(self):
        """Exact dims are the primary data whenever any are supplied."""
        return bool(self.a_dims or self.n_dims) or self.qualitative is None

    @property
    def max_arity(self):
        if not self.higher:
            return 2
        return max(pr.arity_of(k) for k in self.higher)

    @property
    def higher_complete(self):
        """Whether absent higher products are known zero (vs merely unknown)."""
        return bool(self.flags.get("higher_products_complete", True))


# -- parsing ----------------------------------------------------------------


def _require(cond, msg):
    if not cond:
        raise SpecError(msg)


def _parse_graded(records, n, key_fields, lo_le_hi):
    """Shared reader for ext / serre_ext lists."""
    out = {}
    fsrc, fdst = key_fields
    for rec in records:
        _require(isinstance(rec, dict), f"bad record {rec!r}")
        try:
            a, b, deg, dim = rec[fsrc], rec[fdst], rec["deg"], rec["dim"]
        except KeyError as exc:
            raise SpecError(f"missing key {exc} in {rec!r}") from None
        for v in (a, b, deg, dim):
            _require(isinstance(v, int), f"non-integer field in {rec!r}")
        _require(1 <= a <= n and 1 <= b <= n, f"object index out of range in {rec!r}")
        _require(dim >= 1, f"dims must be >= 1, got {dim}")
        if lo_le_hi:
            _require(a <= b, f"twist source must be <= source object in {rec!r}")
        else:
            _require(a < b, f"no backwards or diagonal Ext allowed: {rec!r}")
        space = out.setdefault((a, b), {})
        _require(deg not in space, f"duplicate degree in {rec!r}")
        space[deg] = dim
    return out


def _parse_product(rec, n, spec_dims, arity_two):
    _require(isinstance(rec, dict), f"bad product record {rec!r}")
    kind = rec.get("kind")
    _require(kind in (pr.AA, pr.AN, pr.NA), f"bad product kind {kind!r}")
    chain = tuple(rec.get("chain", ()))
    degs = tuple(rec.get("degs", ()))
    _require(
        all(isinstance(x, int) for x in chain + degs),
        f"chain and degs must be integers in {rec!r}",
    )
    if kind == pr.AA:
        key = pr.key_aa(chain, degs)
    elif kind == pr.AN:
        _require("twist_src" in rec, f"AN product needs twist_src: {rec!r}")
        key = pr.key_an(rec["twist_src"], chain, degs)
    else:
        _require("from" in rec, f"NA product needs 'from': {rec!r}")
        key = pr.key_na(rec["from"], chain, degs)
    try:
        pr.check_key_shape(key, n)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    arity = pr.arity_of(key)
    if arity_two:
        _require(arity == 2, f"products must have arity 2, got {arity}")
    else:
        _require(arity >= 3, f"higher products must have arity >= 3")
        _require(rec.get("arity") == arity, f"arity field mismatch in {rec!r}")
    a_dims, n_dims = spec_dims
    srcs = pr.source_spaces(key)
    dims = []
    for kind_s, i, j, deg in srcs:
        space = a_dims.get((i, j), {}) if kind_s == "A" else n_dims.get((i, j), {})
        d = space.get(deg, 0)
        _require(d > 0, f"product references the zero space {kind_s}({i},{j})^{deg}")
        dims.append(d)
    tk, ti, tj, tdeg = pr.target_space(key)
    tspace = a_dims.get((ti, tj), {}) if tk == "A" else n_dims.get((ti, tj), {})
    tdim = tspace.get(tdeg, 0)
    _require(
        tdim > 0,
        f"product lands in the zero space {tk}({ti},{tj})^{tdeg}",
    )
    table = {}
    for entry in rec.get("entries", ()):
        _require(
            isinstance(entry, list) and len(entry) == arity + 2,
            f"bad entry {entry!r} (want {arity} source indices, out, value)",
        )
        *src_idx, out, val = entry
        _require(
            all(isinstance(x, int) for x in src_idx) and isinstance(out, int),
            f"bad entry indices {entry!r}",
        )
        for t, idx in enumerate(src_idx):
            _require(0 <= idx < dims[t], f"dangling source index in {entry!r}")
        _require(0 <= out < tdim, f"dangling target index in {entry!r}")
        row = table.setdefault(tuple(src_idx), {})
        _require(out not in row, f"duplicate entry {entry!r}")
        row[out] = _frac(val)
    return key, pr.normalize_table(table)


def _parse_qualitative(rec, n):
    _require(isinstance(rec, dict), "qualitative must be an object")
    window = rec.get("degree_window")
    if window is not None:
        _require(
            isinstance(window, list) and len(window) == 2 and window[0] <= window[1],
            f"bad degree_window {window!r}",
        )
        window = tuple(window)
    statuses = {}
    for row in rec.get("statuses", ()):
        try:
            src, dst, deg, st = row["src"], row["dst"], row["deg"], row["status"]
        except (KeyError, TypeError):
            raise SpecError(f"bad qualitative row {row!r}") from None
        _require(st in (ZERO, NONZERO), f"bad status {st!r}")
        _require(1 <= src <= n and 1 <= dst <= 2 * n, f"bad pair in {row!r}")
        _require(isinstance(deg, int), f"bad degree in {row!r}")
        key = (src, dst, deg)
        _require(statuses.get(key, st) == st, f"conflicting statuses at {key}")
        if window is not None and st == NONZERO:
            _require(
                window[0] <= deg <= window[1],
                f"NONZERO status at {key} outside degree window",
            )
        statuses[key] = st
    return QualitativeExtTable(n, statuses, window)


def _parse_cochain(rec):
    _require(isinstance(rec, dict) and "terms" in rec, f"bad cochain {rec!r}")
    terms = []
    for t in rec["terms"]:
        try:
            chain, degs, values = t["chain"], t["degs"], t["values"]
        except (KeyError, TypeError):
            raise SpecError(f"bad cochain term {t!r}") from None
        vals = {}
        for pair in values:
            _require(
                isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], int),
                f"bad cochain value {pair!r}",
            )
            vals[pair[0]] = _frac(pair[1])
        terms.append((tuple(chain), tuple(degs), vals))
    return Cochain(terms)


TOP_KEYS = {
    "n",
    "dim_x",
    "field",
    "objects",
    "ext",
    "serre_ext",
    "products",
    "higher_products",
    "qualitative",
    "flags",
    "metadata",
    "fullness",
}


def parse(document):
    """Parse a document (JSON text or dict tree) into a CollectionSpec."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed JSON: {exc}") from None
    _require(isinstance(document, dict), "document must be a JSON object")
    unknown = set(document) - TOP_KEYS
    _require(not unknown, f"unknown top-level keys {sorted(unknown)}")
    n = document.get("n")
    dim_x = document.get("dim_x")
    _require(isinstance(n, int) and n >= 1, f"n must be a count >= 1, got {n!r}")
    _require(
        isinstance(dim_x, int) and dim_x >= 0, f"dim_x must be >= 0, got {dim_x!r}"
    )
    field_name = document.get("field", "Q")
    _require(
        field_name == "Q" or (field_name.startswith("F") and field_name[1:].isdigit()),
        f"bad field {field_name!r}",
    )

    a_dims = _parse_graded(document.get("ext", ()), n, ("src", "dst"), False)
    n_dims = _parse_graded(
        document.get("serre_ext", ()), n, ("twist_src", "from"), True
    )

    spec_dims = (a_dims, n_dims)
    prods = {}
    for rec in document.get("products", ()):
        key, table = _parse_product(rec, n, spec_dims, arity_two=True)
        _require(key not in prods, f"duplicate product {key}")
        if table:
            prods[key] = table
    higher = {}
    for rec in document.get("higher_products", ()):
        key, table = _parse_product(rec, n, spec_dims, arity_two=False)
        _require(key not in higher, f"duplicate higher product {key}")
        if table:
            higher[key] = table

    qualitative = None
    if "qualitative" in document:
        qualitative = _parse_qualitative(document["qualitative"], n)

    labels = None
    degrees = None
    if "objects" in document:
        objs = document["objects"]
        _require(isinstance(objs, list) and len(objs) == n, "objects must list n items")
        labels = [o.get("label", f"E{i + 1}") for i, o in enumerate(objs)]
        if any("canonical_degree" in o for o in objs):
            _require(
                all("canonical_degree" in o for o in objs),
                "canonical_degree must be given for all objects or none",
            )
            degrees = [o["canonical_degree"] for o in objs]
            _require(
                all(isinstance(d, int) for d in degrees), "bad canonical degrees"
            )

    flags = dict(document.get("flags", {}))
    unknown = set(flags) - KNOWN_FLAGS
    _require(not unknown, f"unknown flags {sorted(unknown)}")

    fullness = None
    if "fullness" in document:
        rec = document["fullness"]
        fullness = FullnessData()
        if "xi" in rec:
            fullness.xi = _parse_cochain(rec["xi"])
        for prec in rec.get("pairings", ()):
            _require("obj" in prec, f"pairing needs obj: {prec!r}")
            fullness.pairings[prec["obj"]] = _parse_cochain(prec)

    return CollectionSpec(
        n=n,
        dim_x=dim_x,
        field_name=field_name,
        a_dims=a_dims,
        n_dims=n_dims,
        products=prods,
        higher=higher,
        qualitative=qualitative,
        labels=labels,
        canonical_degrees=degrees,
        flags=flags,
        metadata=dict(document.get("metadata", {})),
        fullness_data=fullness,
    )


# -- serialization ----------------------------------------------------------


def _graded_records(dims, key_fields):
    fsrc, fdst = key_fields
    out = []
    for (a, b), space in sorted(dims.items()):
        for deg, dim in sorted(space.items()):
            out.append({fsrc: a, fdst: b, "deg": deg, "dim": dim})
    return out


def _product_records(tables, with_arity):
    recs = []
    for key in sorted(tables, key=lambda k: (k[0], k[1] or 0, k[2], k[3])):
        kind, aux, chain, degs = key
        rec = {"kind": kind, "chain": list(chain), "degs": list(degs)}
        if kind == pr.AN:
            rec["twist_src"] = aux
        elif kind == pr.NA:
            rec["from"] = aux
        if with_arity:
            rec["arity"] = pr.arity_of(key)
        entries = []
        for src, row in sorted(tables[key].items()):
            for out, val in sorted(row.items()):
                entries.append(list(src) + [out, str(val)])
        rec["entries"] = entries
        recs.append(rec)
    return recs


def _cochain_record(cochain):
    terms = []
    for chain, degs, vals in cochain.sorted_terms():
        terms.append(
            {
                "chain": list(chain),
                "degs": list(degs),
                "values": [[i, str(v)] for i, v in sorted(vals.items())],
            }
        )
    return {"terms": terms}


def to_document(spec):
    """Canonical dict tree for a spec."""
    doc = {"n": spec.n, "dim_x": spec.dim_x, "field": spec.field_name}
    if spec.labels is not None:
        objs = []
        for i, label in enumerate(spec.labels):
            o = {"label": label}
            if spec.canonical_degrees is not None:
                o["canonical_degree"] = spec.canonical_degrees[i]
            objs.append(o)
        doc["objects"] = objs
    if spec.a_dims:
        doc["ext"] = _graded_records(spec.a_dims, ("src", "dst"))
    if spec.n_dims:
        doc["serre_ext"] = _graded_records(spec.n_dims, ("twist_src", "from"))
    if spec.products:
        doc["products"] = _product_records(spec.products, with_arity=False)
    if spec.higher:
        doc["higher_products"] = _product_records(spec.higher, with_arity=True)
    if spec.qualitative is not None:
        q = {}
        if spec.qualitative.degree_window is not None:
            q["degree_window"] = list(spec.qualitative.degree_window)
        q["statuses"] = [
            {"src": s, "dst": t, "deg": d, "status": st}
            for (s, t, d), st in sorted(spec.qualitative.statuses.items())
        ]
        doc["qualitative"] = q
    if spec.flags:
        doc["flags"] = dict(sorted(spec.flags.items()))
    if spec.metadata:
        doc["metadata"] = spec.metadata
    if spec.fullness_data is not None:
        rec = {}
        if spec.fullness_data.xi is not None:
            rec["xi"] = _cochain_record(spec.fullness_data.xi)
        if spec.fullness_data.pairings:
            rec["pairings"] = [
                dict(_cochain_record(c), obj=i)
                for i, c in sorted(spec.fullness_data.pairings.items())
            ]
        doc["fullness"] = rec
    return doc


def serialize(spec):
    return json.dumps(to_document(spec), sort_keys=True, indent=1) + "\n"


# -- degree bookkeeping (surface lemmas) -------------------------------------


def extend_degrees(degrees, k_squared):
    """Canonical degrees of the anticanonically extended collection.

    Twisting by omega^{-1} shifts the canonical degree down by K^2.
    """
    return list(degrees) + [d - k_squared for d in degrees]


def hom_vanishing_updates(extended_degrees, n):
    """ZERO deductions for degree-0 Ext from non-increasing canonical degree.

    On a surface with ample canonical class, a nonzero map between
    non-isomorphic line bundles forces the canonical degree to go up, so
    deg(src) >= deg(dst) kills all Homs.  Only ZERO facts are produced.
    """
    if len(extended_degrees) != 2 * n:
        raise SpecError("need one degree per object of the extended collection")
    updates = {}
    for src in range(1, n + 1):
        for dst in range(1, 2 * n + 1):
            if dst == src:
                continue
            if extended_degrees[src - 1] >= extended_degrees[dst - 1]:
                updates[(src, dst, 0)] = ZERO
    return updates


def hom_vanishing_from_degrees(spec):
    """Apply the degree criterion to a spec, returning table updates.

    Refuses unless the spec declares a surface with ample canonical class
    consisting of line bundles, with canonical degrees and K^2 supplied.
    """
    flags = spec.flags
    if not (
        flags.get("is_surface")
        and flags.get("ample_canonical")
        and flags.get("line_bundles")
    ):
        raise SpecError(
            "degree criterion needs is_surface, ample_canonical and "
            "line_bundles flags"
        )
    if spec.canonical_degrees is None or "k_squared" not in flags:
        raise SpecError("degree criterion needs canonical degrees and k_squared")
    ext = extend_degrees(spec.canonical_degrees, flags["k_squared"])
    return hom_vanishing_updates(ext, spec.n)


# -- validation --------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]


def _check_structure(spec):
    problems = []
    for (i, j), space in spec.a_dims.items():
        if not (1 <= i < j <= spec.n):
            problems.append(f"bad Ext pair ({i},{j})")
        if any(d < 1 for d in space.values()):
            problems.append(f"non-positive dim in Ext({i},{j})")
    for (i, j), space in spec.n_dims.items():
        if not (1 <= i <= j <= spec.n):
            problems.append(f"bad twisted pair ({i},{j})")
        if any(d < 1 for d in space.values()):
            problems.append(f"non-positive dim in twisted Ext({i},{j})")
    return problems


def _check_products_structure(spec):
    problems = []
    for key, table in list(spec.products.items()) + list(spec.higher.items()):
        try:
            pr.check_key_shape(key, spec.n)
        except ValueError as exc:
            problems.append(str(exc))
            continue
        srcs = pr.source_spaces(key)
        dims = [spec.space_dim(k, i, j, d) for k, i, j, d in srcs]
        tk, ti, tj, tdeg = pr.target_space(key)
        tdim = spec.space_dim(tk, ti, tj, tdeg)
        if any(d == 0 for d in dims):
            problems.append(f"product {key} references a zero space")
            continue
        if tdim == 0:
            problems.append(
                f"product {key} raises degree into the zero space "
                f"{tk}({ti},{tj})^{tdeg}"
            )
            continue
        for src, row in table.items():
            if len(src) != len(dims) or any(
                not (0 <= s < d) for s, d in zip(src, dims)
            ):
                problems.append(f"product {key} has dangling source {src}")
            if any(not (0 <= o < tdim) for o in row):
                problems.append(f"product {key} has dangling target in {row}")
    return problems


def _apply2(table, x, y):
    """Apply an arity-2 table to basis indices, as {out: coeff}."""
    if table is None:
        return {}
    return table.get((x, y), {})


def _compose_assoc(spec, key_ab, key_bc, key_a_bc, key_ab_c, dims):
    """Residuals of one associativity square, as a list of strings."""
    t_ab = spec.product_table(key_ab)
    t_bc = spec.product_table(key_bc)
    t_outer_l = spec.product_table(key_ab_c)
    t_outer_r = spec.product_table(key_a_bc)
    if t_ab is None and t_bc is None:
        return []
    da, db, dc = dims
    bad = []
    for x in range(da):
        for y in range(db):
            for z in range(dc):
                lhs = {}
                if t_ab is not None and t_outer_l is not None:
                    for m, c in _apply2(t_ab, x, y).items():
                        for o, c2 in _apply2(t_outer_l, m, z).items():
                            lhs[o] = lhs.get(o, 0) + c * c2
                rhs = {}
                if t_bc is not None and t_outer_r is not None:
                    for m, c in _apply2(t_bc, y, z).items():
                        for o, c2 in _apply2(t_outer_r, x, m).items():
                            rhs[o] = rhs.get(o, 0) + c * c2
                keys = set(lhs) | set(rhs)
                if any(lhs.get(k, 0) != rhs.get(k, 0) for k in keys):
                    bad.append(f"{key_ab} / {key_bc} disagree on ({x},{y},{z})")
    return bad


def _iter_degree_triples(s1, s2, s3):
    for d1 in s1:
        for d2 in s2:
            for d3 in s3:
                yield d1, d2, d3


def _check_associativity(spec):
    """Plain associativity of composition on every composable triple.

    Four shapes: three collection morphisms; two morphisms into the twisted
    factor; a morphism, the twisted factor and a wrapped morphism; the
    twisted factor and two wrapped morphisms.
    """
    problems = []
    n = spec.n
    keys_a = sorted(spec.a_dims)
    # (x: i->j, y: j->l, z: l->m)
    for (i, j) in keys_a:
        for l in range(j + 1, n + 1):
            if (j, l) not in spec.a_dims:
                continue
            for m in range(l + 1, n + 1):
                if (l, m) not in spec.a_dims:
                    continue
                for d1, d2, d3 in _iter_degree_triples(
                    spec.a_dims[(i, j)], spec.a_dims[(j, l)], spec.a_dims[(l, m)]
                ):
                    problems += _compose_assoc(
                        spec,
                        pr.key_aa((i, j, l), (d1, d2)),
                        pr.key_aa((j, l, m), (d2, d3)),
                        pr.key_aa((i, j, m), (d1, d2 + d3)),
                        pr.key_aa((i, l, m), (d1 + d2, d3)),
                        (
                            spec.a_dims[(i, j)][d1],
                            spec.a_dims[(j, l)][d2],
                            spec.a_dims[(l, m)][d3],
                        ),
                    )
    # (x: i->j, y: j->l, nu: l ~> tw) with twist source tw <= i
    for (i, j) in keys_a:
        for l in range(j + 1, n + 1):
            if (j, l) not in spec.a_dims:
                continue
            for tw in range(1, i + 1):
                if (tw, l) not in spec.n_dims:
                    continue
                for d1, d2, d3 in _iter_degree_triples(
                    spec.a_dims[(i, j)], spec.a_dims[(j, l)], spec.n_dims[(tw, l)]
                ):
                    problems += _compose_assoc(
                        spec,
                        pr.key_aa((i, j, l), (d1, d2)),
                        pr.key_an(tw, (j, l), (d2, d3)),
                        pr.key_an(tw, (i, j), (d1, d2 + d3)),
                        pr.key_an(tw, (i, l), (d1 + d2, d3)),
                        (
                            spec.a_dims[(i, j)][d1],
                            spec.a_dims[(j, l)][d2],
                            spec.n_dims[(tw, l)][d3],
                        ),
                    )
    # (x: i->j, nu: j ~> tw1, z: tw1->tw2 wrapped), tw2 <= i
    for (i, j) in keys_a:
        for tw1 in range(1, i + 1):
            if (tw1, j) not in spec.n_dims:
                continue
            for tw2 in range(tw1 + 1, i + 1):
                if (tw1, tw2) not in spec.a_dims:
                    continue
                for d1, d2, d3 in _iter_degree_triples(
                    spec.a_dims[(i, j)], spec.n_dims[(tw1, j)], spec.a_dims[(tw1, tw2)]
                ):
                    # lhs: compose into twisted factor first, then wrap;
                    # rhs: wrap first, then compose in.
                    problems += _compose_assoc(
                        spec,
                        pr.key_an(tw1, (i, j), (d1, d2)),
                        pr.key_na(j, (tw1, tw2), (d2, d3)),
                        pr.key_an(tw2, (i, j), (d1, d2 + d3)),
                        pr.key_na(i, (tw1, tw2), (d1 + d2, d3)),
                        (
                            spec.a_dims[(i, j)][d1],
                            spec.n_dims[(tw1, j)][d2],
                            spec.a_dims[(tw1, tw2)][d3],
                        ),
                    )
    # (nu: j ~> i1, y: i1->i2 wrapped, z: i2->i3 wrapped), i3 <= j
    for (i1, j) in sorted(spec.n_dims):
        for i2 in range(i1 + 1, j + 1):
            if (i1, i2) not in spec.a_dims:
                continue
            for i3 in range(i2 + 1, j + 1):
                if (i2, i3) not in spec.a_dims:
                    continue
                for d1, d2, d3 in _iter_degree_triples(
                    spec.n_dims[(i1, j)], spec.a_dims[(i1, i2)], spec.a_dims[(i2, i3)]
                ):
                    problems += _compose_assoc(
                        spec,
                        pr.key_na(j, (i1, i2), (d1, d2)),
                        pr.key_aa((i1, i2, i3), (d2, d3)),
                        pr.key_na(j, (i1, i3), (d1, d2 + d3)),
                        pr.key_na(j, (i2, i3), (d1 + d2, d3)),
                        (
                            spec.n_dims[(i1, j)][d1],
                            spec.a_dims[(i1, i2)][d2],
                            spec.a_dims[(i2, i3)][d3],
                        ),
                    )
    return problems


def _check_qualitative(spec):
    """Exact dims win over statuses; contradictions are reported."""
    if spec.qualitative is None or not spec.is_exact:
        return []
    problems = []
    table = spec.qualitative
    n = spec.n
    for (src, dst, deg), st in sorted(table.statuses.items()):
        if dst <= n:
            if not (src < dst):
                continue
            dim = spec.space_dim("A", src, dst, deg)
        else:
            i = dst - n
            if not (i <= src):
                continue
            dim = spec.space_dim("N", i, src, deg + spec.dim_x)
        if dim == 0 and st == NONZERO:
            problems.append(f"status NONZERO at {(src, dst, deg)} but exact dim 0")
        if dim > 0 and st == ZERO:
            problems.append(f"status ZERO at {(src, dst, deg)} but exact dim {dim}")
    return problems


def validate(spec):
    """Run all consistency checks, returning a ValidationReport.

    Never raises on bad algebra: failures are carried in the report.
    """
    checks = []

    problems = _check_structure(spec)
    checks.append(CheckResult("exceptionality", not problems, "; ".join(problems)))
    structure_ok = not problems

    problems = _check_products_structure(spec)
    checks.append(CheckResult("degree_additivity", not problems, "; ".join(problems)))
    structure_ok = structure_ok and not problems

    problems = _check_associativity(spec)
    checks.append(
        CheckResult(
            "associativity",
            not problems,
            "; ".join(problems[:5]) + ("..." if len(problems) > 5 else ""),
        )
    )

    if spec.higher and structure_ok:
        # relations above arity 2 are checked where they act: the assembled
        # differential must square to zero block by block
        from . import nhh

        try:
            nhh.assemble_differential(spec)
            checks.append(CheckResult("a_infinity", True, ""))
        except nhh.DifferentialError as exc:
            checks.append(CheckResult("a_infinity", False, str(exc)))

    problems = _check_qualitative(spec)
    checks.append(
        CheckResult("qualitative_consistency", not problems, "; ".join(problems))
    )

    return ValidationReport(checks)
