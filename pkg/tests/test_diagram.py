import itertools
import json

import pytest

from facesum.diagram import (Diagram, DiagramError, corner_faces, faces, from_tuples, insert_curl,
                             insert_r2, insert_ribbon, mirror, parse_pd, validate)
from facesum.statesum import LEGAL_CODES, crossing_code, enumerate_states

from knots import CLASP, CURL_NEG, CURL_POS, FIGURE_EIGHT, HOPF, TABLE, TREFOIL, diagram


# -- parsing -------------------------------------------------------------------

def test_parse_trefoil():
    d = parse_pd(TREFOIL)
    assert d.n == 3
    assert len(d.edges) == 6
    assert len(d.components) == 1


def test_parse_curl():
    d = parse_pd(CURL_POS)
    assert d.n == 1 and len(d.edges) == 2


def test_parse_accepts_brackets_and_commas():
    assert parse_pd("X[1,4,2,5], X[3,6,4,1]; X[5,2,6,3]") == parse_pd(TREFOIL)


def test_unpaired_labels_are_reported():
    with pytest.raises(DiagramError) as err:
        parse_pd("X(1,4,2,5) X(3,6,4,1)")
    assert err.value.kind == "LABELS"
    for lab in "2536":
        assert lab in str(err.value)


@pytest.mark.parametrize("text", ["", "   ", "X(1,2,3)", "Y(1,2,3,4)", "X(1,1,2,2) junk"])
def test_parse_errors(text):
    with pytest.raises(DiagramError) as err:
        parse_pd(text)
    assert err.value.kind in ("PARSE", "LABELS")


def test_ambiguous_direction_needs_explicit_sign():
    with pytest.raises(DiagramError) as err:
        parse_pd(CLASP)
    assert err.value.kind == "AMBIGUOUS"
    assert "X+" in str(err.value)
    d = parse_pd("X+(1,2,3,4) X-(3,2,1,4)")
    assert d.signs == [1, -1]
    assert len(faces(d)) == 4


def test_explicit_sign_must_agree_with_forced_direction():
    # in the trefoil every over-direction is forced by the under strands
    with pytest.raises(DiagramError):
        parse_pd("X+(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")


def test_under_strands_override_label_order():
    # relabelling with non-consecutive labels must not change anything
    d = parse_pd("X(10,40,20,50) X(30,60,40,10) X(50,20,60,30)")
    assert d.writhe == -3


# -- faces and corners ---------------------------------------------------------------

@pytest.mark.parametrize("pd, count", [(TREFOIL, 5), (CURL_POS, 3), (TABLE["5_1"][0], 7)])
def test_face_counts(pd, count):
    assert len(faces(parse_pd(pd))) == count


def _all_diagrams():
    out = [parse_pd(p) for p in (TREFOIL, CURL_POS, CURL_NEG, FIGURE_EIGHT, HOPF)]
    out += [diagram(name) for name in TABLE]
    return out


@pytest.mark.parametrize("d", _all_diagrams(), ids=lambda d: f"n{d.n}")
def test_face_tracing_partitions_darts(d):
    fs = faces(d)
    darts = [dt for face in fs.faces for dt in face]
    assert len(darts) == len(set(darts)) == 4 * d.n
    assert len(fs) == d.n + 2


@pytest.mark.parametrize("d", _all_diagrams(), ids=lambda d: f"n{d.n}")
def test_corner_faces_are_cyclically_edge_adjacent(d):
    fs = faces(d)
    for ci, x in enumerate(d.crossings):
        for k in range(4):
            # corners k-1 and k are separated by the edge in slot k
            lab = x.edges[k]
            assert {fs.corner(ci, (k - 1) % 4), fs.corner(ci, k)} <= set(fs.edge_faces(lab))


def test_corner_phase_follows_over_in_slot():
    d = parse_pd(TREFOIL)
    fs = faces(d)
    assert d.crossings[0].over_in == 1
    assert fs.corner_faces(0) == tuple(fs.corner(0, k) for k in range(4))
    m = mirror(d)
    mfs = faces(m)
    assert m.crossings[0].over_in == 3
    assert mfs.corner_faces(0) == tuple(mfs.corner(0, k) for k in (3, 0, 1, 2))
    assert corner_faces(d, 0) == fs.corner_faces(0)


@pytest.mark.parametrize("pd", [TREFOIL, FIGURE_EIGHT, TABLE["5_1"][0]])
def test_every_state_has_legal_codes(pd):
    d = parse_pd(pd)
    fs = faces(d)
    for state in enumerate_states(fs):
        for ci in range(d.n):
            bits = [state[f] for f in fs.corner_faces(ci)]
            assert crossing_code(bits) in LEGAL_CODES


def test_nonplanar_code_is_rejected():
    with pytest.raises(DiagramError) as err:
        faces(parse_pd("X(1,1,2,3) X(4,2,4,3)"))
    assert err.value.kind == "NONPLANAR"


# -- signs, writhe, mirror -------------------------------------------------------------

def test_trefoil_writhe():
    d = parse_pd(TREFOIL)
    assert all(x.over_in == 1 for x in d.crossings)
    assert d.writhe == -3
    assert mirror(d).writhe == 3


def test_zero_writhe_diagram():
    assert parse_pd(FIGURE_EIGHT).writhe == 0


@pytest.mark.parametrize("d", _all_diagrams(), ids=lambda d: f"n{d.n}")
def test_mirror_involution_and_faces(d):
    m = mirror(d)
    assert mirror(m) == d
    assert m.signs == [-s for s in d.signs]
    assert sorted(map(len, faces(m).faces)) == sorted(map(len, faces(d).faces))
    assert m.edges == d.edges


# -- validation ---------------------------------------------------------------------

def test_validate():
    validate(parse_pd(TREFOIL))
    with pytest.raises(DiagramError) as err:
        validate(parse_pd("X(1,1,2,2) X(3,3,4,4)"))
    assert err.value.kind == "DISCONNECTED"
    assert "R2" in str(err.value)
    with pytest.raises(DiagramError) as err:
        validate(Diagram(()))
    assert err.value.kind == "NO_CROSSINGS"


def test_json_round_trip():
    d = parse_pd(TREFOIL)
    data = json.loads(json.dumps(d.to_json()))
    assert data == {"crossings": [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], "signs": [-1, -1, -1]}
    assert Diagram.from_json(data) == d
    assert parse_pd(d.to_pd()) == d
    assert parse_pd(d.to_pd(explicit=True)) == d


def test_from_tuples_matches_parser():
    assert from_tuples([(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)]) == parse_pd(TREFOIL)


# -- move insertion ---------------------------------------------------------------

@pytest.mark.parametrize("sign, side", list(itertools.product((1, -1), ("left", "right"))))
def test_insert_curl(sign, side):
    d = parse_pd(TREFOIL)
    for e in d.edges:
        d2 = insert_curl(d, e, sign, side)
        assert d2.n == d.n + 1
        assert d2.writhe == d.writhe + sign
        assert len(faces(d2)) == len(faces(d)) + 1


def test_insert_curl_bad_edge():
    with pytest.raises(DiagramError) as err:
        insert_curl(parse_pd(TREFOIL), 99, 1)
    assert err.value.kind == "EDGE"


def test_insert_ribbon_keeps_writhe():
    d = parse_pd(FIGURE_EIGHT)
    for side in ("left", "right"):
        d2 = insert_ribbon(d, d.edges[0], side)
        assert d2.n == d.n + 2 and d2.writhe == d.writhe


def test_insert_r2_every_shared_face():
    d = parse_pd(FIGURE_EIGHT)
    fs = faces(d)
    done = 0
    for f in range(len(fs)):
        bound = sorted(set(fs.boundary_edges(f)))
        for e1, e2 in itertools.permutations(bound, 2):
            for over in ("first", "second"):
                d2 = insert_r2(d, e1, e2, face=f, over=over)
                assert d2.writhe == d.writhe
                assert len(faces(d2)) == len(fs) + 2
                done += 1
    assert done > 20


def test_insert_r2_without_shared_face():
    d = parse_pd(FIGURE_EIGHT)
    fs = faces(d)
    for e1, e2 in itertools.combinations(d.edges, 2):
        if not set(fs.edge_faces(e1)) & set(fs.edge_faces(e2)):
            with pytest.raises(DiagramError) as err:
                insert_r2(d, e1, e2)
            assert err.value.kind == "EDGE"
            return
    pytest.fail("figure-eight should have two edges without a common face")

