"""Shipped fixture corpus.

Projective-space fixtures are generated exactly from symmetric-power
dimensions and monomial multiplication.  The surface fixtures encode facts
proved elsewhere in the literature; every encoded vanishing is labelled with
its source in the metadata block, since the Ext data of those surfaces is an
assumption of the run, not something this tool computes.

Surface models keep only the spaces and products that the published
arguments constrain; everything else is zero.  That is enough to reproduce
the known heights, and the assumptions list is the contract.
"""

from __future__ import annotations

from . import model
from .fullness import beilinson_fixture

FIXTURE_NAMES = [
    "beilinson_p1",
    "beilinson_p2",
    "beilinson_p3",
    "burniat",
    "beauville_I0",
    "beauville_I1",
    "godeaux",
    "point",
]


def _point_document():
    return {
        "n": 1,
        "dim_x": 0,
        "field": "Q",
        "objects": [{"label": "O", "canonical_degree": 0}],
        "serre_ext": [{"twist_src": 1, "from": 1, "deg": 0, "dim": 1}],
        "fullness": {
            "xi": {"terms": [{"chain": [1], "degs": [0], "values": [[0, "1"]]}]},
            "pairings": [
                {
                    "obj": 1,
                    "terms": [{"chain": [1], "degs": [0], "values": [[0, "1"]]}],
                }
            ],
        },
        "metadata": {
            "name": "point",
            "notes": "single exceptional object generating the derived "
            "category of a point",
        },
    }


def _burniat_document():
    degrees = [3, 3, 2, 2, 2, 0]
    statuses = []
    # no Ext^1 between distinct bundles of the collection
    for i in range(1, 7):
        for j in range(i + 1, 7):
            statuses.append({"src": i, "dst": j, "deg": 1, "status": "ZERO"})
    # H^1 of the anticanonical bundle vanishes
    for i in range(1, 7):
        statuses.append({"src": i, "dst": 6 + i, "deg": 1, "status": "ZERO"})
    return {
        "n": 6,
        "dim_x": 2,
        "field": "Q",
        "objects": [
            {"label": f"L{i + 1}", "canonical_degree": d}
            for i, d in enumerate(degrees)
        ],
        "qualitative": {"degree_window": [0, 2], "statuses": statuses},
        "flags": {
            "is_surface": True,
            "ample_canonical": True,
            "line_bundles": True,
            "h2_anticanonical_nonzero": True,
            "k_squared": 6,
        },
        "metadata": {
            "name": "burniat",
            "assumptions": [
                {
                    "fact": "Ext^1(E_i, E_j) = 0 for all i < j",
                    "source": "Alexeev-Orlov, Derived categories of Burniat "
                    "surfaces, Lemma 4.8",
                },
                {
                    "fact": "H^1 of the anticanonical bundle vanishes",
                    "source": "cohomology of Burniat surfaces (p_g = q = 0, "
                    "K^2 = 6)",
                },
                {
                    "fact": "H^2 of the anticanonical bundle is nonzero",
                    "source": "Serre duality against the bicanonical system",
                },
                {
                    "fact": "degree-0 vanishing from non-increasing canonical "
                    "degrees 3,3,2,2,2,0 ; -3,-3,-4,-4,-4,-6",
                    "source": "ample-canonical degree argument",
                },
            ],
        },
    }


def _beauville_i1_document():
    degrees = [0, -2, -2, -4]
    statuses = []
    # no Ext^1 from any object to any anticanonical twist
    for u in range(1, 5):
        for v in range(1, 5):
            statuses.append({"src": u, "dst": 4 + v, "deg": 1, "status": "ZERO"})
    return {
        "n": 4,
        "dim_x": 2,
        "field": "Q",
        "objects": [
            {"label": f"L{i + 1}", "canonical_degree": d}
            for i, d in enumerate(degrees)
        ],
        "qualitative": {"degree_window": [0, 2], "statuses": statuses},
        "flags": {
            "is_surface": True,
            "ample_canonical": True,
            "line_bundles": True,
            "h2_anticanonical_nonzero": True,
            "k_squared": 8,
        },
        "metadata": {
            "name": "beauville_I1",
            "assumptions": [
                {
                    "fact": "no Ext^1 from the collection to its "
                    "anticanonical twists",
                    "source": "Galkin-Shinder, Exceptional collections of "
                    "line bundles on the Beauville surface, character "
                    "matrices of Prop. 3.7",
                },
                {
                    "fact": "H^2 of the anticanonical bundle is nonzero",
                    "source": "bicanonical system of a fake quadric",
                },
            ],
        },
    }


def _beauville_i0_document():
    degrees = [0, -2, -4, -6]
    ext = [
        {"src": 1, "dst": 2, "deg": 1, "dim": 1},
        {"src": 2, "dst": 3, "deg": 1, "dim": 1},
        {"src": 3, "dst": 4, "deg": 1, "dim": 1},
        {"src": 1, "dst": 3, "deg": 2, "dim": 1},
        {"src": 2, "dst": 4, "deg": 2, "dim": 1},
        {"src": 1, "dst": 4, "deg": 2, "dim": 1},
    ]
    serre_ext = [
        {"twist_src": i, "from": i, "deg": 4, "dim": 9} for i in range(1, 5)
    ] + [
        {"twist_src": 1, "from": 4, "deg": 3, "dim": 1},
        {"twist_src": 1, "from": 3, "deg": 4, "dim": 1},
        {"twist_src": 2, "from": 4, "deg": 4, "dim": 1},
    ]
    products = [
        {
            "kind": "AA",
            "chain": [1, 2, 3],
            "degs": [1, 1],
            "entries": [[0, 0, 0, "1"]],
        },
        {
            "kind": "AA",
            "chain": [2, 3, 4],
            "degs": [1, 1],
            "entries": [[0, 0, 0, "1"]],
        },
        {
            "kind": "AN",
            "twist_src": 1,
            "chain": [3, 4],
            "degs": [1, 3],
            "entries": [[0, 0, 0, "1"]],
        },
        {
            "kind": "NA",
            "from": 4,
            "chain": [1, 2],
            "degs": [3, 1],
            "entries": [[0, 0, 0, "1"]],
        },
    ]
    statuses = [
        {"src": 1, "dst": 2, "deg": 1, "status": "NONZERO"},
        {"src": 2, "dst": 3, "deg": 1, "status": "NONZERO"},
        {"src": 3, "dst": 4, "deg": 1, "status": "NONZERO"},
        {"src": 4, "dst": 5, "deg": 1, "status": "NONZERO"},
    ]
    return {
        "n": 4,
        "dim_x": 2,
        "field": "Q",
        "objects": [
            {"label": f"L{i + 1}", "canonical_degree": d}
            for i, d in enumerate(degrees)
        ],
        "ext": ext,
        "serre_ext": serre_ext,
        "products": products,
        "qualitative": {"degree_window": [0, 2], "statuses": statuses},
        "flags": {
            "is_surface": True,
            "ample_canonical": True,
            "line_bundles": True,
            "h2_anticanonical_nonzero": True,
            "k_squared": 8,
            "higher_products_complete": False,
        },
        "metadata": {
            "name": "beauville_I0",
            "assumptions": [
                {
                    "fact": "the collection is linked by nonzero Ext^1 along "
                    "1 -> 2 -> 3 -> 4 and back through the twist of E_1",
                    "source": "Galkin-Shinder, character matrices of Prop. 3.7",
                },
                {
                    "fact": "the composition Ext^1(E_1,E_2) (x) Ext^1(E_2,E_3) "
                    "-> Ext^2(E_1,E_3) is nonzero",
                    "source": "Galkin-Shinder character computation",
                },
                {
                    "fact": "minimal model: one-dimensional witnesses for the "
                    "constrained Ext spaces, all unconstrained spaces zero",
                    "source": "modelling choice; only the stated facts enter "
                    "the height argument",
                },
                {
                    "fact": "H^2 of the anticanonical bundle has dimension 9",
                    "source": "Riemann-Roch on a fake quadric (K^2 = 8, "
                    "chi(O) = 1)",
                },
            ],
        },
    }


def _godeaux_document():
    degrees = [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0]
    serre_ext = [
        {"twist_src": i, "from": i, "deg": 4, "dim": 2} for i in range(1, 12)
    ] + [{"twist_src": 2, "from": 3, "deg": 4, "dim": 2}]
    return {
        "n": 11,
        "dim_x": 2,
        "field": "Q",
        "objects": [
            {"label": f"L{i + 1}", "canonical_degree": d}
            for i, d in enumerate(degrees)
        ],
        "ext": [{"src": 2, "dst": 3, "deg": 0, "dim": 1}],
        "serre_ext": serre_ext,
        "products": [
            {
                "kind": "AN",
                "twist_src": 2,
                "chain": [2, 3],
                "degs": [0, 4],
                "entries": [[0, 0, 0, "1"], [0, 1, 1, "1"]],
            }
        ],
        "flags": {
            "is_surface": True,
            "ample_canonical": True,
            "line_bundles": True,
            "h2_anticanonical_nonzero": True,
            "k_squared": 1,
            "higher_products_complete": False,
        },
        "metadata": {
            "name": "godeaux",
            "assumptions": [
                {
                    "fact": "Hom(E_2, E_3) = k and all other forward Homs "
                    "vanish",
                    "source": "Boehning-Graf von Bothmer-Sosna, Lemma 10.2",
                },
                {
                    "fact": "Ext^2(E_3, E_2(-K)) = k^2 while degrees 0 and 1 "
                    "vanish",
                    "source": "divisor-class computation via Lemmas 8.2 and "
                    "10.2 of Boehning-Graf von Bothmer-Sosna",
                },
                {
                    "fact": "composition Hom(E_2,E_3) (x) Ext^2(E_3,E_2(-K)) "
                    "-> Ext^2(E_2,E_2(-K)) is a monomorphism",
                    "source": "ample-canonical degree argument",
                },
                {
                    "fact": "the chains (1,3),(1,7),(2,7),(4,7),(5,7),(6,7) "
                    "contribute nothing in total degree 3",
                    "source": "Boehning-Graf von Bothmer explicit computation",
                },
                {
                    "fact": "H^1(anticanonical) = 0 and H^2(anticanonical) = "
                    "k^2",
                    "source": "Riemann-Roch on the Godeaux surface (K^2 = 1)",
                },
                {
                    "fact": "the wrapped composition into Ext^2(E_3,E_3(-K)) "
                    "is not encoded (zero in this model); the height "
                    "conclusion does not depend on it",
                    "source": "modelling choice",
                },
            ],
        },
    }


def _beilinson_document(n):
    spec, _, _ = beilinson_fixture(n)
    return model.to_document(spec)


_BUILDERS = {
    "beilinson_p1": lambda: _beilinson_document(2),
    "beilinson_p2": lambda: _beilinson_document(3),
    "beilinson_p3": lambda: _beilinson_document(4),
    "burniat": _burniat_document,
    "beauville_I0": _beauville_i0_document,
    "beauville_I1": _beauville_i1_document,
    "godeaux": _godeaux_document,
    "point": _point_document,
}


def fixture_list():
    return list(FIXTURE_NAMES)


def fixture_document(name):
    if name not in _BUILDERS:
        raise KeyError(f"unknown fixture {name!r}")
    return _BUILDERS[name]()


def fixture_spec(name):
    return model.parse(fixture_document(name))


def write_all(directory):
    """Canonically serialize the whole corpus into a directory."""
    import os

    os.makedirs(directory, exist_ok=True)
    for name in FIXTURE_NAMES:
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(model.serialize(fixture_spec(name)))
    return [os.path.join(directory, f"{name}.json") for name in FIXTURE_NAMES]
