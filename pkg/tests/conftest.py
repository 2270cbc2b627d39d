import itertools

import networkx as nx
import pytest

from localdecision.graph import Instance


def to_nx(inst: Instance) -> nx.Graph:
    g = nx.Graph()
    for v, x in enumerate(inst.inputs):
        g.add_node(v, x=x)
    g.add_edges_from(inst.graph.edges)
    return g


def nx_ball(inst: Instance, root: int, t: int) -> nx.Graph:
    """Independent ball oracle: BFS distances from networkx, then the edge rule."""
    g = to_nx(inst)
    dist = nx.single_source_shortest_path_length(g, root, cutoff=t)
    b = nx.Graph()
    for v, d in dist.items():
        b.add_node(v, x=inst.inputs[v], d=d)
    for u, v in g.edges:
        if u in dist and v in dist and not (dist[u] == t and dist[v] == t):
            b.add_edge(u, v)
    return b


def brute_t_local(source: Instance, target: Instance, t: int):
    """Every map in target^source that is a t-local isomorphism, by definition."""
    out = []
    for f in itertools.product(range(target.node_count), repeat=source.node_count):
        if any(source.inputs[v] != target.inputs[f[v]] for v in range(source.node_count)):
            continue
        if any(not target.graph.has_edge(f[u], f[v]) for u, v in source.graph.edges):
            continue
        ok = True
        for v in range(source.node_count):
            b1 = nx_ball(source, v, t)
            b2 = nx_ball(target, f[v], t)
            if b1.number_of_nodes() != b2.number_of_nodes():
                ok = False
                break
            img = {a: f[a] for a in b1.nodes}
            if len(set(img.values())) != len(img) or set(img.values()) != set(b2.nodes):
                ok = False
                break
            if any(b1.nodes[a]["d"] != b2.nodes[img[a]]["d"] for a in b1.nodes):
                ok = False
                break
            mapped = {frozenset((img[a], img[b])) for a, b in b1.edges}
            if mapped != {frozenset(e) for e in b2.edges}:
                ok = False
                break
        if ok:
            out.append(tuple(f))
    return out


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion(request):
    def record(result):
        request.config.acceptance_lines.append(result.line())
        print(result.line())
    return record


def pytest_addoption(parser):
    parser.addoption("--quick-acceptance", action="store_true",
                     help="run the acceptance batteries at reduced scale")


@pytest.fixture
def acceptance_scale(request):
    return request.config.getoption("--quick-acceptance")
