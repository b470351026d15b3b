"""Deterministic exports: DOT club graphs and per-action scatter tables.

Both writers sort everything and use fixed numeric formatting, so
re-exporting identical inputs yields byte-identical files.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Mapping

from .errors import PreconditionError
from .game import Coalition, EquilibriumClass, PayoffMatrix
from .stability import ClubGraph


def _node_label(members: Coalition) -> str:
    return "{" + ",".join(str(p) for p in sorted(members)) + "}"


def export_dot(graph: ClubGraph, path: str | Path,
               se_nodes: Iterable[Coalition] = ()) -> None:
    """Write the club graph as a DOT digraph.

    Node labels are the sorted member lists, edge labels the joining
    player. The root is boxed, leaves double-bordered, nodes from
    ``se_nodes`` filled green and internally unstable nodes filled red.
    """
    se_set = frozenset(frozenset(c) for c in se_nodes)
    ordered = sorted(graph.nodes, key=lambda c: (len(c), sorted(c)))
    lines = ["digraph club_dynamics {", "  rankdir=LR;"]
    for members in ordered:
        node = graph.nodes[members]
        attrs = [f'label="{_node_label(members)}"']
        if members == graph.root:
            attrs.append("shape=box")
        if node.externally_stable:
            attrs.append("peripheries=2")
        if members in se_set:
            attrs.append("style=filled")
            attrs.append("fillcolor=palegreen")
        elif node.internally_stable is False:
            attrs.append("style=filled")
            attrs.append("fillcolor=mistyrose")
        lines.append(f'  "{_node_label(members)}" [{", ".join(attrs)}];')
    for parent, child, joiner in sorted(
            graph.edges, key=lambda e: (len(e[0]), sorted(e[0]), e[2])):
        lines.append(
            f'  "{_node_label(parent)}" -> "{_node_label(child)}" [label="{joiner}"];')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")


def export_scatter(g: PayoffMatrix, classification: Mapping[int, EquilibriumClass],
                   path: str | Path) -> None:
    """Write one CSV row per joint action of a complete matrix.

    Coordinates are the mean travel times per route, normalized so the
    all-on-route-0 action scores 1; the route-1 column is empty when
    nobody drives it. Per-group means (humans, strategic players, all)
    use the same normalization.
    """
    for action in range(1 << g.n_av):
        g.require(action)
    missing = [a for a in g.actions() if a not in classification]
    if missing:
        raise PreconditionError(
            f"classification lacks action {g.action_string(missing[0])}")

    humans = [p for p in g.player_ids if p not in set(g.av_ids)]
    x0_times = [-v for v in g.require(0)]
    anchor = sum(x0_times) / len(x0_times)

    def norm(mean: float) -> str:
        return f"{mean / anchor:.6f}"

    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["action", "q0", "q1", "t0", "t1", "t0_av", "class",
                         "club_found", "human_mean", "av_mean", "all_mean"])
        for action in range(1 << g.n_av):
            row = g.require(action)
            times = {p: -row[g.column(p)] for p in g.player_ids}
            deviators = g.members_of(action)
            on_route1 = sorted(deviators)
            on_route0 = [p for p in g.player_ids if p not in deviators]
            av_route0 = [p for p in g.av_ids if p not in deviators]
            q1 = len(on_route1)
            q0 = len(on_route0)
            t0 = norm(sum(times[p] for p in on_route0) / q0) if q0 else ""
            t1 = norm(sum(times[p] for p in on_route1) / q1) if q1 else ""
            # humans never leave route 0, so together with t1 (strategic
            # players only, by construction) this completes the group-by-
            # route means
            t0_av = (norm(sum(times[p] for p in av_route0) / len(av_route0))
                     if av_route0 else "")
            cls = classification[action]
            human_mean = (norm(sum(times[p] for p in humans) / len(humans))
                          if humans else "")
            av_mean = norm(sum(times[p] for p in g.av_ids) / g.n_av)
            all_mean = norm(sum(times.values()) / g.n_players)
            writer.writerow([
                g.action_string(action), q0, q1, t0, t1, t0_av,
                cls.tag.value, int(cls.club_found),
                human_mean, av_mean, all_mean,
            ])
