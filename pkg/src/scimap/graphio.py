"""Graph export and re-import: GraphML and DOT.

Nodes carry label / weight / cluster attributes, edges carry weight;
output is byte-stable for a fixed graph, and both flavors re-parse into
an isomorphic graph.
"""
from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Mapping, Optional

from . import ENGINE_VERSION
from .community import Clustering
from .graphs import Graph, GraphNode

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

_KEYS = (
    ("d_label", "node", "label", "string"),
    ("d_weight", "node", "weight", "double"),
    ("d_cluster", "node", "cluster", "long"),
    ("d_edge_weight", "edge", "weight", "double"),
)


def _apply_clustering(graph: Graph, clustering: Optional[Clustering]) -> dict[str, Optional[int]]:
    if clustering is None:
        return {node.id: node.cluster for node in graph.nodes}
    return {node.id: clustering.assignment.get(node.id) for node in graph.nodes}


def _header_lines(meta: Optional[Mapping]) -> list[str]:
    lines = [f"scimap {ENGINE_VERSION}"]
    lines.extend(f"{key}: {value}" for key, value in (meta or {}).items())
    return lines


def write_graphml(graph: Graph, path: str | Path,
                  clustering: Optional[Clustering] = None,
                  meta: Optional[Mapping] = None) -> Path:
    clusters = _apply_clustering(graph, clustering)
    root = ET.Element("graphml", xmlns=GRAPHML_NS)
    root.append(ET.Comment(" " + " | ".join(_header_lines(meta)) + " "))
    for key_id, domain, name, kind in _KEYS:
        ET.SubElement(root, "key", id=key_id, **{"for": domain,
                      "attr.name": name, "attr.type": kind})
    container = ET.SubElement(
        root, "graph", id="G",
        edgedefault="directed" if graph.directed else "undirected")
    for node in sorted(graph.nodes, key=lambda n: n.id):
        element = ET.SubElement(container, "node", id=node.id)
        ET.SubElement(element, "data", key="d_label").text = node.label
        ET.SubElement(element, "data", key="d_weight").text = repr(node.weight)
        if clusters[node.id] is not None:
            ET.SubElement(element, "data",
                          key="d_cluster").text = str(clusters[node.id])
    for u, v, w in sorted(graph.edges):
        element = ET.SubElement(container, "edge", source=u, target=v)
        ET.SubElement(element, "data", key="d_edge_weight").text = repr(w)
    ET.indent(root)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = ET.tostring(root, encoding="unicode", xml_declaration=True)
    path.write_text(payload + "\n", encoding="utf-8", newline="\n")
    return path


def read_graphml(path: str | Path) -> Graph:
    root = ET.parse(Path(path)).getroot()
    ns = {"g": GRAPHML_NS}
    container = root.find("g:graph", ns)
    if container is None:
        raise ValueError(f"no <graph> element in {path}")
    directed = container.get("edgedefault") == "directed"
    nodes = []
    for element in container.findall("g:node", ns):
        values = {data.get("key"): data.text or ""
                  for data in element.findall("g:data", ns)}
        cluster = values.get("d_cluster")
        nodes.append(GraphNode(
            id=element.get("id"), label=values.get("d_label", element.get("id")),
            weight=float(values.get("d_weight", 0.0)),
            cluster=int(cluster) if cluster is not None else None))
    edges = []
    for element in container.findall("g:edge", ns):
        values = {data.get("key"): data.text or ""
                  for data in element.findall("g:data", ns)}
        edges.append((element.get("source"), element.get("target"),
                      float(values.get("d_edge_weight", 1.0))))
    graph = Graph(nodes=nodes, edges=edges, directed=directed)
    graph.validate()
    return graph


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(graph: Graph, path: str | Path,
              clustering: Optional[Clustering] = None,
              meta: Optional[Mapping] = None) -> Path:
    clusters = _apply_clustering(graph, clustering)
    kind = "digraph" if graph.directed else "graph"
    arrow = "->" if graph.directed else "--"
    lines = [f"{kind} G {{"]
    lines.extend(f"  // {line}" for line in _header_lines(meta))
    for node in sorted(graph.nodes, key=lambda n: n.id):
        attrs = [f"label={_dot_quote(node.label)}", f"weight={node.weight!r}"]
        if clusters[node.id] is not None:
            attrs.append(f"cluster={clusters[node.id]}")
        lines.append(f"  {_dot_quote(node.id)} [{', '.join(attrs)}];")
    for u, v, w in sorted(graph.edges):
        lines.append(f"  {_dot_quote(u)} {arrow} {_dot_quote(v)} [weight={w!r}];")
    lines.append("}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


_DOT_NODE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)" \[(.*)\];$')
_DOT_EDGE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)" (--|->) "((?:[^"\\]|\\.)*)" \[(.*)\];$')
_DOT_ATTR = re.compile(r'(\w+)=(?:"((?:[^"\\]|\\.)*)"|([^,\]]+))')


def _dot_unquote(text: str) -> str:
    return text.replace('\\"', '"').replace("\\\\", "\\")


def read_dot(path: str | Path) -> Graph:
    """Re-parse the subset of DOT this module emits."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith(("graph ", "digraph ")):
        raise ValueError(f"not a DOT graph: {path}")
    directed = lines[0].startswith("digraph")
    nodes, edges = [], []
    for line in lines[1:]:
        edge_match = _DOT_EDGE.match(line)
        if edge_match:
            u, _, v, attrs = edge_match.groups()
            values = _parse_dot_attrs(attrs)
            edges.append((_dot_unquote(u), _dot_unquote(v),
                          float(values.get("weight", 1.0))))
            continue
        node_match = _DOT_NODE.match(line)
        if node_match:
            node_id, attrs = node_match.groups()
            values = _parse_dot_attrs(attrs)
            cluster = values.get("cluster")
            nodes.append(GraphNode(
                id=_dot_unquote(node_id),
                label=_dot_unquote(values.get("label", node_id)),
                weight=float(values.get("weight", 0.0)),
                cluster=int(cluster) if cluster is not None else None))
    graph = Graph(nodes=nodes, edges=edges, directed=directed)
    graph.validate()
    return graph


def _parse_dot_attrs(text: str) -> dict[str, str]:
    out = {}
    for name, quoted, bare in _DOT_ATTR.findall(text):
        out[name] = quoted if quoted else bare.strip()
    return out


def write_graph(graph: Graph, path: str | Path, flavor: str = "graphml",
                clustering: Optional[Clustering] = None,
                meta: Optional[Mapping] = None) -> Path:
    if flavor == "graphml":
        return write_graphml(graph, path, clustering, meta)
    if flavor == "dot":
        return write_dot(graph, path, clustering, meta)
    raise ValueError(f"unknown graph flavor {flavor!r} (graphml or dot)")


def read_graph(path: str | Path) -> Graph:
    path = Path(path)
    if path.suffix == ".dot":
        return read_dot(path)
    return read_graphml(path)
