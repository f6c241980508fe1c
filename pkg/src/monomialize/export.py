"""JSON and DOT renderings of the expanded part of a tree."""
from typing import Any

import networkx as nx
from series.core import default_names
from series.schema import certificate_to_dict
from series.schema import series_to_dict
from transforms.elementary import format_lambda
from transforms.schema import transform_to_dict
from utils.schema import format_rational

from .checks import branch_faithfulness
from .checks import leaf_soundness
from .checks import star_check
from .schema import star_report_to_dict
from .tree import Expanded
from .tree import LambdaFamily
from .tree import Leaf
from .tree import TreeNode
from .tree import iter_leaves


def node_to_dict(node: TreeNode, names: list[str] | None = None) -> dict[str, Any]:
    """Encode a node and its expanded subtree."""
    data: dict[str, Any] = {
        "depth": node.depth,
        "edge": None if node.edge_in is None else transform_to_dict(node.edge_in),
        "series": [series_to_dict(f, names) for f in node.series_state],
        "targets": node.target_count,
    }
    if node.measure is not None:
        data["measure"] = {
            "n": node.measure.n,
            "d": node.measure.d,
            "alpha_over_l": [format_rational(a) for a in node.measure.alpha_over_l],
        }
    children = node.children
    if isinstance(children, Leaf):
        data["children"] = {
            "kind": "leaf",
            "certificates": [certificate_to_dict(c, names) for c in children.certificates],
        }
    elif isinstance(children, LambdaFamily):
        data["children"] = {
            "kind": "family",
            "i": children.i,
            "j": children.j,
            "expanded": [
                {"lambda": format_lambda(lam), "node": node_to_dict(child, names)}
                for lam, child in children.sorted_items()
            ],
        }
    elif isinstance(children, Expanded):
        data["children"] = {"kind": "expanded", "nodes": [node_to_dict(c, names) for c in children.children]}
    else:
        data["children"] = None
    return data


def tree_to_dict(root: TreeNode, names: list[str] | None = None) -> dict[str, Any]:
    """Encode the expanded tree, with the variable names used by every series."""
    names = names or default_names(root.nvars)
    return {"vars": names, "root": node_to_dict(root, names)}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def tree_graph(root: TreeNode, names: list[str] | None = None) -> nx.DiGraph:
    """The expanded tree as a networkx digraph with graphviz attributes.

    Every node shows its first target, edges carry the transform, and leaves
    are boxes flagged normal with the exponent and unit constant of the first
    target's certificate.
    """
    names = names or default_names(root.nvars)
    graph = nx.DiGraph(name="monomialization")
    graph.graph["node"] = {"fontname": "monospace"}
    ids: dict[int, str] = {}

    def visit(node: TreeNode) -> None:
        ident = f"n{len(ids)}"
        ids[id(node)] = ident
        label = node.series_state[0].pretty(names)
        if isinstance(node.children, Leaf):
            first = node.children.certificates[0]
            alpha = ", ".join(str(a) for a in first.alpha)
            label += f"\\nnormal α=({alpha}) u₀={format_rational(first.unit_constant)}"
            graph.add_node(ident, shape="box", label=_quote(label))
        else:
            graph.add_node(ident, label=_quote(label))
        if node.parent is not None and node.edge_in is not None:
            graph.add_edge(ids[id(node.parent)], ident, label=_quote(node.edge_in.describe()))
        children = node.children
        if isinstance(children, Expanded):
            for child in children.children:
                visit(child)
        elif isinstance(children, LambdaFamily):
            for _, child in children.sorted_items():
                visit(child)

    visit(root)
    return graph


def tree_to_dot(root: TreeNode, names: list[str] | None = None) -> str:
    """Render the expanded tree as graphviz DOT text."""
    dot = nx.nx_pydot.to_pydot(tree_graph(root, names))
    dot.set_strict(False)
    dot.set_name("monomialization")
    return dot.to_string()


def tree_summary(root: TreeNode, names: list[str] | None = None) -> dict[str, Any]:
    """The tree together with the outcome of every independent check."""
    names = names or default_names(root.nvars)
    leaves = list(iter_leaves(root))
    return {
        "leaves": len(leaves),
        "star_check": star_report_to_dict(star_check(root)),
        "faithfulness_failures": branch_faithfulness(root),
        "soundness_failures": leaf_soundness(root),
        "tree": tree_to_dict(root, names),
    }
