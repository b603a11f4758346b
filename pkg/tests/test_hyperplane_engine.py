import json

import pytest

from cubespec.coeff_group import GroupParams, coset, edge_type_stabilizer, prefix
from cubespec.complex_model import (
    Edge,
    Square,
    SquareComplex,
    Vertex,
    build_quotient_complex,
    validate_complex,
)
from cubespec.hyperplane_engine import (
    compute_hyperplanes,
    core_edges,
    core_restrict,
    dot_export,
    interaction_report,
    report_to_json,
    revalidate_crossing,
    revalidate_one_sided,
    revalidate_osculation,
)

P42 = GroupParams(4, 2)


def make_complex(vertices, edges, squares):
    X = SquareComplex()
    for vid in vertices:
        X.vertices[vid] = Vertex(vid)
    for eid, tail, head in edges:
        X.edges[eid] = Edge(eid, tail, head)
    for sid, boundary in squares:
        X.squares[sid] = Square(sid, tuple(boundary))
    validate_complex(X)
    return X


def free_square():
    return make_complex(
        ["A", "B", "C", "D"],
        [("a", "A", "B"), ("b", "B", "C"), ("c", "D", "C"), ("d", "A", "D")],
        [("S", [("a", "+"), ("b", "+"), ("c", "-"), ("d", "-")])],
    )


def torus():
    return make_complex(
        ["v"],
        [("a", "v", "v"), ("b", "v", "v")],
        [("S", [("a", "+"), ("b", "+"), ("a", "-"), ("b", "-")])],
    )


def klein_bottle():
    return make_complex(
        ["v"],
        [("a", "v", "v"), ("b", "v", "v")],
        [("S", [("a", "+"), ("b", "+"), ("a", "+"), ("b", "-")])],
    )


def osculating_wedge():
    """Two squares bent around a shared corner so one hyperplane meets itself."""
    return make_complex(
        ["O", "N", "E", "S", "C"],
        [
            ("n", "O", "N"),
            ("e", "O", "E"),
            ("s", "O", "S"),
            ("a1", "N", "C"),
            ("a2", "E", "C"),
            ("b1", "E", "C"),
            ("b2", "S", "C"),
        ],
        [
            ("QNE", [("n", "+"), ("a1", "+"), ("a2", "-"), ("e", "-")]),
            ("QSE", [("e", "+"), ("b1", "+"), ("b2", "-"), ("s", "-")]),
        ],
    )


class TestPartition:
    def test_free_square(self):
        H = compute_hyperplanes(free_square())
        assert H.n_classes == 2
        assert H.classes == {"a": ("a", "c"), "b": ("b", "d")}
        assert not H.one_sided
        assert all(p == 0 for p in H.parity.values())

    def test_torus_two_sided(self):
        H = compute_hyperplanes(torus())
        assert H.n_classes == 2
        assert not H.one_sided
        assert H.parity == {"a": 0, "b": 0}

    def test_klein_bottle_one_sided(self):
        H = compute_hyperplanes(klein_bottle())
        assert H.class_of["a"] == "a"
        assert H.one_sided == frozenset({"a"})
        assert revalidate_one_sided(klein_bottle(), "a")

    def test_idempotent_and_deterministic(self):
        X = build_quotient_complex(P42, -2, 2)
        H1 = compute_hyperplanes(X)
        H2 = compute_hyperplanes(X)
        assert H1.class_of == H2.class_of
        assert H1.parity == H2.parity
        assert H1.one_sided == H2.one_sided

    def test_built_complex_all_parities_zero(self):
        X = build_quotient_complex(GroupParams(4, 3), -2, 2)
        H = compute_hyperplanes(X)
        assert not H.one_sided
        assert set(H.parity.values()) == {0}

    def test_classes_preserve_type(self):
        X = build_quotient_complex(P42, -2, 2)
        H = compute_hyperplanes(X)
        for members in H.classes.values():
            types = {X.edges[e].type for e in members}
            assert len(types) == 1


class TestInteractions:
    def test_single_square_report(self):
        X = free_square()
        H = compute_hyperplanes(X)
        rep = interaction_report(X, H)
        assert list(rep.crossings) == [("a", "b")]
        assert rep.osculations == {}
        assert rep.violation_count() == 0

    def test_torus_exempts_adjacent_loops(self):
        X = torus()
        H = compute_hyperplanes(X)
        rep = interaction_report(X, H)
        assert list(rep.crossings) == [("a", "b")]
        assert rep.osculations == {}
        assert rep.violation_count() == 0

    def test_klein_bottle_violation(self):
        X = klein_bottle()
        H = compute_hyperplanes(X)
        rep = interaction_report(X, H)
        assert len(rep.violations["one_sided"]) == 1
        assert rep.violations["one_sided"][0]["class"] == "a"

    def test_wedge_self_osculation(self):
        X = osculating_wedge()
        H = compute_hyperplanes(X)
        assert H.classes["a1"] == ("a1", "b2", "e")
        rep = interaction_report(X, H)
        self_osc = rep.violations["self_osc"]
        assert len(self_osc) == 1
        assert self_osc[0]["edges"] == ["a1", "b2"]
        assert self_osc[0]["vertex"] == "C"
        assert revalidate_osculation(X, "a1", "b2", "C")
        # the bent hyperplane also inter-osculates with its two neighbours
        inter = {tuple(v["classes"]) for v in rep.violations["inter_osc"]}
        assert inter == {("a1", "a2"), ("a1", "b1")}
        for v in rep.violations["inter_osc"]:
            assert revalidate_osculation(X, *v["edges"], v["vertex"])
            assert revalidate_crossing(X, H, *v["classes"], v["square"])

    def test_wedge_flags_bigon(self):
        X = osculating_wedge()
        rep = interaction_report(X, compute_hyperplanes(X))
        assert rep.bigon_pairs == [["a2", "b1", "C", "E"]]

    def test_all_witnesses_revalidate(self):
        X = osculating_wedge()
        H = compute_hyperplanes(X)
        rep = interaction_report(X, H)
        for pair, (e, f, v) in rep.osculations.items():
            assert revalidate_osculation(X, e, f, v)
        for pair, sid in rep.crossings.items():
            assert revalidate_crossing(X, H, pair[0], pair[-1], sid)


class TestBuiltComplexChecks:
    def test_crossings_only_between_adjacent_types(self):
        X = build_quotient_complex(P42, -2, 2)
        H = compute_hyperplanes(X)
        rep = interaction_report(X, H)
        m = 4
        for pair in rep.crossings:
            assert len(pair) == 2
            t1 = X.edges[pair[0]].type
            t2 = X.edges[pair[1]].type
            assert (t1 - t2) % m in (1, m - 1)

    def test_core_report_clean_but_boundary_noisy(self):
        X = build_quotient_complex(P42, -3, 3)
        H = compute_hyperplanes(X)
        full = interaction_report(X, H)
        # truncation artefacts: exempting squares past the boundary are missing
        assert len(full.violations["inter_osc"]) > 0
        assert len(full.violations["self_osc"]) == 0
        assert len(full.violations["self_cross"]) == 0
        _, rep = core_restrict(X, H, -1, 1)
        assert rep.violation_count() == 0

    def test_core_classes_match_transport_cosets(self):
        X = build_quotient_complex(P42, -3, 3)
        H = compute_hyperplanes(X)
        params = X.params
        core = core_edges(X, -1, 1)
        keys = {}
        for e in core:
            ref = X.edge_refs[e]
            sub = edge_type_stabilizer(params, ref.type_j)
            key = (
                ref.type_j,
                coset(ref.coeff * prefix(params, ref.type_j) ** ref.height, sub).rep.exps,
            )
            keys[e] = key
        by_class = {}
        by_key = {}
        for e in core:
            by_class.setdefault(H.class_of[e], set()).add(keys[e])
            by_key.setdefault(keys[e], set()).add(H.class_of[e])
        assert all(len(s) == 1 for s in by_class.values())
        assert all(len(s) == 1 for s in by_key.values())

    def test_full_range_filter_is_identity(self):
        X = build_quotient_complex(P42, -2, 2)
        H = compute_hyperplanes(X)
        full = interaction_report(X, H)
        view, rep = core_restrict(X, H, -2, 2)
        assert view == H.class_of
        assert rep.crossings == full.crossings
        assert rep.osculations == full.osculations

    def test_empty_core_range(self):
        X = build_quotient_complex(P42, -2, 2)
        H = compute_hyperplanes(X)
        view, rep = core_restrict(X, H, 5, 7)
        assert view == {}
        assert rep.crossings == {}
        assert rep.osculations == {}
        assert rep.violation_count() == 0

    def test_core_needs_heights(self):
        X = osculating_wedge()
        with pytest.raises(ValueError, match="height"):
            core_edges(X, 0, 1)

    def test_built_multi_edges_flagged_as_bigons(self):
        # consecutive branching heights (k = 3) give parallel partner edges
        # sharing both endpoints; each shared vertex is its own witness
        X = build_quotient_complex(GroupParams(4, 3), -1, 3)
        H = compute_hyperplanes(X)
        rep = interaction_report(X, H)
        assert rep.bigon_pairs
        for e, f, v1, v2 in rep.bigon_pairs:
            assert v1 != v2
            assert X.edges[e].type == X.edges[f].type
            assert {X.edges[e].tail, X.edges[e].head} == {
                X.edges[f].tail,
                X.edges[f].head,
            }

    def test_built_witnesses_revalidate(self):
        X = build_quotient_complex(P42, -2, 2)
        H = compute_hyperplanes(X)
        rep = interaction_report(X, H)
        sample = sorted(rep.osculations.items())[::7]
        assert sample
        for _, (e, f, v) in sample:
            assert revalidate_osculation(X, e, f, v)
        for pair, sid in sorted(rep.crossings.items())[::7]:
            assert revalidate_crossing(X, H, pair[0], pair[-1], sid)


class TestSerialisation:
    def test_report_json_shape(self):
        X = klein_bottle()
        H = compute_hyperplanes(X)
        doc = report_to_json(H, interaction_report(X, H))
        assert doc["classes"] == 2
        assert doc["one_sided"] == ["a"]
        assert set(doc["violations"]) == {
            "self_cross",
            "one_sided",
            "self_osc",
            "inter_osc",
        }
        json.dumps(doc)

    def test_dot_export(self):
        X = osculating_wedge()
        H = compute_hyperplanes(X)
        dot = dot_export(interaction_report(X, H))
        assert dot.startswith("graph interactions {")
        assert '"a1" -- "a2" [style=solid];' in dot
        assert "[style=dashed];" in dot

    def test_deterministic_bytes(self):
        X = build_quotient_complex(P42, -2, 2)
        outs = set()
        for _ in range(2):
            H = compute_hyperplanes(X)
            rep = interaction_report(X, H)
            outs.add(json.dumps(report_to_json(H, rep), sort_keys=True))
        assert len(outs) == 1
