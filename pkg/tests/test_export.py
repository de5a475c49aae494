import io
import json

import numpy as np
import pandas as pd
import pytest

from domain.entities import BootstrapReport, Dendrogram, Linkage, MergeStep, SpanningTree, TreeEdge
from domain.exceptions import DataValidationError
from domain.value_objects import SymbolInfo
from services.newick import newick_cophenetic, parse_newick, quote_label
from services.serialization import to_json

from conftest import random_distance, random_returns


def two_node_tree(reliability=None):
    return SpanningTree(symbols=("DEU", "FRA"),
                        edges=(TreeEdge(0, 1, 0.5, 0.875, reliability=reliability),))


def test_dot_two_nodes(export_service):
    dot = export_service.export_dot(two_node_tree())

    lines = dot.splitlines()
    assert lines[0] == "graph MST {"
    assert lines[-1] == "}"
    assert sum(" -- " in line for line in lines) == 1
    assert sum(line.strip().startswith('"') and " -- " not in line for line in lines) == 2
    assert "label=" not in [line for line in lines if " -- " in line][0]


def test_dot_reliability_label_and_metadata(export_service):
    metadata = {"DEU": SymbolInfo("DEU", continent="Europe", name="Germany")}

    dot = export_service.export_dot(two_node_tree(reliability=1.0), metadata)

    assert '"DEU" -- "FRA" [label="1.00", distance="0.5"];' in dot
    assert '"DEU" [label="DEU", continent="Europe", tooltip="Germany"];' in dot
    assert '"FRA" [label="FRA"];' in dot


def test_reliability_display_rounds_to_two_decimals(export_service):
    assert export_service.format_reliability(0.8866) == "0.89"
    assert export_service.format_reliability(0.0) == "0.00"


def dendrogram_of(hierarchy_service, seed, n, linkage=Linkage.AVERAGE):
    return hierarchy_service.build(random_distance(seed, n), linkage)


def test_newick_two_leaves(export_service):
    dendro = Dendrogram(symbols=("A", "B"), linkage=Linkage.SINGLE,
                        merges=(MergeStep(0, 1, 0.8, 2, 2),))

    assert export_service.export_newick(dendro) == "(A:0.8,B:0.8);"


def test_newick_branch_lengths_are_height_differences(export_service):
    dendro = Dendrogram(symbols=("A", "B", "C"), linkage=Linkage.AVERAGE,
                        merges=(MergeStep(0, 1, 0.25, 3, 2), MergeStep(3, 2, 1.0, 4, 3)))

    assert export_service.export_newick(dendro) == "((A:0.25,B:0.25):0.75,C:1.0);"


def test_newick_round_trip_recovers_cophenetic(export_service, hierarchy_service):
    for seed in range(20):
        for linkage in Linkage:
            dendro = dendrogram_of(hierarchy_service, seed, 4 + seed % 10, linkage)
            text = export_service.export_newick(dendro)

            names, u = newick_cophenetic(text)

            order = [dendro.symbols.index(name) for name in names]
            expected = np.array(hierarchy_service.cophenetic_matrix(dendro).u)[np.ix_(order, order)]
            assert sorted(names) == sorted(dendro.symbols)
            np.testing.assert_allclose(u, expected, rtol=0, atol=1e-9)


def test_newick_branch_lengths_non_negative(export_service, hierarchy_service):
    root = parse_newick(export_service.export_newick(dendrogram_of(hierarchy_service, 3, 12)))
    stack = list(root.children)
    while stack:
        node = stack.pop()
        assert node.length >= 0
        stack.extend(node.children)


def test_newick_quotes_reserved_labels():
    assert quote_label("DEU") == "DEU"
    assert quote_label("S&P 500") == "'S&P 500'"
    assert quote_label("it's") == "'it''s'"
    root = parse_newick("('S&P 500':0.1,'it''s':0.1);")
    assert [child.name for child in root.children] == ["S&P 500", "it's"]


@pytest.mark.parametrize("text", ["(A:0.1,B:0.2)", "(A:0.1,B:0.2;", "(A:x,B:0.2);", "A,B);"])
def test_newick_parser_rejects_malformed(text):
    with pytest.raises(DataValidationError):
        parse_newick(text)


def test_matrix_csv_round_trips_exactly(export_service):
    dist = random_distance(5, 6)

    text = export_service.matrix_csv(dist.correlation)

    assert text.splitlines()[0] == "symbol," + ",".join(dist.symbols)
    frame = pd.read_csv(io.StringIO(text), index_col="symbol", float_precision="round_trip")
    np.testing.assert_array_equal(frame.to_numpy(), dist.correlation.c)


def test_bootstrap_csv_sorted_by_pair(export_service):
    tree = SpanningTree(symbols=("A", "B", "C"), edges=(
        TreeEdge(1, 2, 0.2, 0.98), TreeEdge(0, 2, 0.3, 0.955),
    ))
    report = BootstrapReport(replicas=10, seed=0, link_fractions={(0, 2): 0.7, (1, 2): 1.0})

    text = export_service.bootstrap_csv(tree.with_reliability(report.link_fractions), report)

    assert text.splitlines() == [
        "u,v,distance,correlation,reliability",
        "A,C,0.3,0.955,0.7",
        "B,C,0.2,0.98,1.0",
    ]


def test_merge_table_csv(export_service):
    dendro = Dendrogram(symbols=("A", "B", "C"), linkage=Linkage.AVERAGE,
                        merges=(MergeStep(0, 1, 0.25, 3, 2), MergeStep(3, 2, 1.0, 4, 3)))

    assert export_service.merge_table_csv(dendro).splitlines() == [
        "step,left,right,height,size,members",
        "1,0,1,0.25,2,A B",
        "2,3,2,1.0,3,A B C",
    ]


def test_clusters_csv(export_service):
    metadata = {"A": SymbolInfo("A", continent="Asia")}

    text = export_service.clusters_csv({"average": [("A", "B"), ("C",)]}, metadata)

    assert text.splitlines() == [
        "linkage,cluster,symbol,continent",
        "average,1,A,Asia",
        "average,1,B,",
        "average,2,C,",
    ]


def test_returns_csv_header(export_service):
    returns = random_returns(seed=1, n=2, rows=3)

    text = export_service.returns_csv(returns)

    assert text.splitlines()[0] == "S0,S1"


def test_mst_json_fields(export_service):
    tree = two_node_tree(reliability=0.75)
    report = BootstrapReport(replicas=4, seed=9, link_fractions={(0, 1): 0.75})

    document = json.loads(export_service.mst_json(tree, report))

    assert document["edges"] == [{
        "u": 0, "v": 1, "source": "DEU", "target": "FRA",
        "distance": 0.5, "correlation": 0.875, "reliability": 0.75,
    }]
    assert document["nodes"][0] == {"id": 0, "symbol": "DEU", "degree": 1, "continent": None, "name": None}
    assert document["hubs"] == ["DEU", "FRA"]
    assert document["bootstrap"] == {"replicas": 4, "seed": 9, "dropped_replicas": 0}


def test_mst_json_without_bootstrap(export_service):
    tree = two_node_tree()

    document = json.loads(export_service.mst_json(tree))

    assert document["edges"][0]["reliability"] is None
    assert document["bootstrap"] is None


def test_to_json_serializes_numpy_and_enums():
    text = to_json({"linkage": Linkage.SINGLE, "heights": np.array([0.5, 1.0]), "n": np.int64(3)})

    assert json.loads(text) == {"linkage": "single", "heights": [0.5, 1.0], "n": 3}
    assert text.endswith("\n")


def test_mst_document_uses_tree_queries(export_service, tree_service):
    star = SpanningTree(symbols=("A", "B", "C", "D"), edges=(
        TreeEdge(0, 1, 0.25, 0.96875), TreeEdge(1, 2, 0.5, 0.875), TreeEdge(1, 3, 0.75, 0.71875),
    ))

    document = export_service.mst_document(star)

    assert document["hubs"] == ["B"]
    assert document["total_distance"] == tree_service.tree_length(star) == 1.5
    assert [node["degree"] for node in document["nodes"]] == [1, 3, 1, 1]


def test_to_json_keeps_insertion_order_and_expands_dataclasses():
    text = to_json({"step": MergeStep(0, 1, 0.5, 2, 2), "pair": (0, 1)})

    assert list(json.loads(text)) == ["step", "pair"]
    assert json.loads(text) == {
        "step": {"left": 0, "right": 1, "height": 0.5, "new_id": 2, "size": 2},
        "pair": [0, 1],
    }
