import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusalens import ingest
from fusalens.generate import generate_project
from fusalens.model import Asil, ParseError

from conftest import make_node, make_snapshot

NODES_CSV = """id,name,type,asil,severity,exposure,controllability
n1,Vehicle maintains set speed,SB,-,,,
n3,Collision with lead vehicle,HzE,C,S3,E4,C3
"""

LINKS_CSV = """source,target,relation
n1,n3,relatedMB
"""


def test_parse_nodes_csv_fields():
    nodes = ingest.parse_nodes_csv(NODES_CSV)
    assert [n.id for n in nodes] == ["n1", "n3"]
    assert nodes[0].name == "Vehicle maintains set speed"
    assert nodes[0].asil is Asil.UNASSIGNED
    assert nodes[1].asil is Asil.C
    assert nodes[1].sec.render() == ("S3", "E4", "C3")


def test_parse_nodes_csv_tolerates_bom_blank_lines_and_padding():
    text = "﻿id,name,type,asil,severity,exposure,controllability\n\n n1 , A ,SB, - ,,,\n\n"
    nodes = ingest.parse_nodes_csv(text.encode("utf-8"))
    assert len(nodes) == 1
    assert nodes[0].id == "n1"
    assert nodes[0].name == "A"


def test_parse_nodes_csv_rejects_wrong_header():
    with pytest.raises(ParseError, match="header"):
        ingest.parse_nodes_csv("id,name\nn1,A\n")


def test_parse_nodes_csv_reports_row_of_bad_field():
    text = "id,name,type,asil,severity,exposure,controllability\nn1,A,SB,-,,,\nn2,B,MB,WRONG,,,\n"
    with pytest.raises(ParseError) as err:
        ingest.parse_nodes_csv(text)
    assert "row 2" in str(err.value)
    assert "WRONG" in str(err.value)


def test_parse_nodes_csv_reports_row_of_wrong_arity():
    text = "id,name,type,asil,severity,exposure,controllability\nn1,A,SB,-,,\n"
    with pytest.raises(ParseError, match="row 1"):
        ingest.parse_nodes_csv(text)


def test_parse_links_csv_canonicalizes_alias():
    text = "source,target,relation\na,b,associatedSafetyGoal\n"
    links = ingest.parse_links_csv(text)
    assert links[0].relation == "associatedSG"


def test_parse_meta_json_requires_identity_fields():
    with pytest.raises(ParseError, match="project_id"):
        ingest.parse_meta_json(json.dumps({"name": "X", "system": "Y"}))
    meta = ingest.parse_meta_json(
        json.dumps({"project_id": "P1", "name": "X", "system": "Y"})
    )
    assert meta.project_id == "P1"
    assert meta.department == ""


def test_parse_project_json_bundle_round_trip():
    meta, nodes, links = generate_project("RT", seed=3, node_count=40)
    bundle = json.dumps(
        {
            "meta": ingest.meta_to_dict(meta),
            "nodes": [ingest.node_to_dict(n) for n in nodes],
            "links": [ingest.link_to_dict(l) for l in links],
        }
    )
    meta2, nodes2, links2 = ingest.parse_project_json(bundle)
    assert meta2 == meta
    assert nodes2 == nodes
    assert links2 == links


def test_csv_round_trip_preserves_records():
    for seed in range(5):
        _, nodes, links = generate_project(f"RT{seed}", seed=seed, node_count=30 + seed * 17)
        assert ingest.parse_nodes_csv(ingest.nodes_to_csv(nodes)) == nodes
        assert ingest.parse_links_csv(ingest.links_to_csv(links)) == links


@given(st.text(st.characters(blacklist_categories=("Cs", "Cc")), min_size=0, max_size=40))
def test_csv_round_trip_survives_awkward_names(name):
    node = make_node("n1", "SB", name=name)
    parsed = ingest.parse_nodes_csv(ingest.nodes_to_csv([node]))
    # Leading/trailing whitespace is the one sanctioned loss: fields are stripped.
    assert parsed[0].name == name.strip()


def validation_codes(nodes, links):
    report = ingest.validate_project(nodes, links)
    return (
        [(i.code, i.row) for i in report.errors],
        [(i.code, i.row) for i in report.warnings],
    )


def test_validation_flags_duplicate_and_empty_ids():
    errors, _ = validation_codes([make_node("a"), make_node("a"), make_node("")], [])
    assert (ingest.DUPLICATE_NODE_ID, 2) in errors
    assert (ingest.EMPTY_NODE_ID, 3) in errors


def test_validation_flags_dangling_and_self_loops():
    nodes = [make_node("a", "SB"), make_node("b", "MB")]
    links = [
        ingest.LinkRecord("a", "zz", "relatedMB"),
        ingest.LinkRecord("zz", "b", "relatedMB"),
        ingest.LinkRecord("a", "a", "relatedMB"),
    ]
    errors, _ = validation_codes(nodes, links)
    assert (ingest.DANGLING_TARGET, 1) in errors
    assert (ingest.DANGLING_SOURCE, 2) in errors
    assert (ingest.SELF_LOOP, 3) in errors


def test_validation_warns_without_blocking():
    nodes = [make_node("a", "SB"), make_node("b", "Widget"), make_node("c", "MB")]
    links = [
        ingest.LinkRecord("a", "c", "relatedMB"),
        ingest.LinkRecord("a", "c", "relatedMB"),
        ingest.LinkRecord("c", "a", "mystery"),
        ingest.LinkRecord("c", "a", "relatedMB"),
    ]
    report = ingest.validate_project(nodes, links)
    assert report.ok
    codes = [i.code for i in report.warnings]
    assert ingest.UNREGISTERED_TYPE in codes
    assert ingest.DUPLICATE_LINK in codes
    assert ingest.UNREGISTERED_RELATION in codes
    assert ingest.RELATION_TYPE_MISMATCH in codes  # relatedMB expects SB->MB, got MB->SB


def test_dedupe_links_keeps_first():
    links = [
        ingest.LinkRecord("a", "b", "relatedMB"),
        ingest.LinkRecord("a", "b", "relatedMB"),
        ingest.LinkRecord("b", "a", "relatedMB"),
    ]
    assert ingest.dedupe_links(links) == [links[0], links[2]]


def test_export_selection_csv_exact_format():
    snap = make_snapshot(
        "P",
        [
            make_node("n3", "HzE", name="Collision with lead vehicle", asil="C", s="S3", e="E4", c="C3"),
            make_node("n1", "SB", name='He said "stop"'),
        ],
    )
    text = ingest.export_selection_csv(snap, ["n3", "n1"])
    assert text == (
        "type,asil,name,id\r\n"
        'HzE,C,"Collision with lead vehicle",n3\r\n'
        'SB,-,"He said ""stop""",n1\r\n'
    )


def test_export_selection_csv_preserves_request_order_and_duplicates():
    snap = make_snapshot("P", [make_node("a", "SB"), make_node("b", "MB")])
    text = ingest.export_selection_csv(snap, ["b", "a", "b"])
    ids = [line.rsplit(",", 1)[1] for line in text.strip().split("\r\n")[1:]]
    assert ids == ["b", "a", "b"]


def test_export_selection_csv_names_unknown_ids():
    snap = make_snapshot("P", [make_node("a", "SB")])
    with pytest.raises(LookupError) as err:
        ingest.export_selection_csv(snap, ["a", "zz", "yy"])
    assert "yy" in str(err.value)
    assert "zz" in str(err.value)
