"""Chain-budget bookkeeping for RF energy harvesting between coated nodes.

Each node of an ordered chain radiates a Lambertian lobe and scavenges
the spill-over of every other node's emission.  The coating enters only
through a scalar collection enhancement, so this module is a thin layer
of Friis-style accounting around the field solver's output: inverse
square spreading, cosine emitter lobes, and per-node power ledgers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .scene import lambertian_gain

# Default collector cross-section: two default cylinder radii (0.05 m)
# per meter of axial extent.
DEFAULT_CAPTURE_AREA = 0.1


@dataclass(frozen=True)
class ChainNode:
    """One relay of the harvesting chain.

    ``collector_enhancement`` is the linear interior power gain of the
    node's coating (1 for a bare collector); ``conversion_efficiency``
    is the RF-to-DC fraction.
    """

    id: int
    position: tuple
    boresight: float = 0.0
    tx_power: float = 0.0
    collector_enhancement: float = 1.0
    conversion_efficiency: float = 1.0

    def __post_init__(self):
        if self.tx_power < 0.0:
            raise ValueError("transmit power must be non-negative")
        if self.collector_enhancement < 0.0:
            raise ValueError("collector enhancement must be non-negative")
        if not 0.0 <= self.conversion_efficiency <= 1.0:
            raise ValueError("conversion efficiency must lie in [0, 1]")
        object.__setattr__(
            self, "position", (float(self.position[0]), float(self.position[1])))


def link_received_power(tx: ChainNode, rx_position, rx_capture_area: float) -> float:
    """Watts crossing a flat aperture of the given area at the receiver.

    The emitter radiates ``tx_power`` with a cosine lobe about its
    boresight; the aperture is assumed to face the emitter.
    """
    if rx_capture_area < 0.0:
        raise ValueError("capture area must be non-negative")
    dx = float(rx_position[0]) - tx.position[0]
    dy = float(rx_position[1]) - tx.position[1]
    distance = math.hypot(dx, dy)
    if distance == 0.0:
        raise ValueError("receiver cannot sit on the emitter")
    gain = float(lambertian_gain(math.atan2(dy, dx) - tx.boresight))
    return tx.tx_power * gain * rx_capture_area / (
        4.0 * math.pi * distance * distance)


def harvested_power(node: ChainNode, ambient) -> float:
    """DC watts recovered from ``ambient``, a list of (source, area) pairs.

    The caller decides which emissions count as ambient; an intended
    information-bearing link is simply left off the list.
    """
    collected = 0.0
    for source, area in ambient:
        collected += link_received_power(source, node.position, area)
    return node.conversion_efficiency * node.collector_enhancement * collected


@dataclass(frozen=True)
class NodeBudget:
    """Harvest ledger of one node, split by provenance of the power."""

    node_id: int
    harvested: float
    from_feed: float
    from_interference: float


@dataclass(frozen=True)
class HarvestReport:
    """Chain-wide ledger with non-negativity and conservation checks."""

    nodes: tuple
    total_transmitted: float
    total_harvested: float
    normalized_sources: tuple

    def __post_init__(self):
        for entry in self.nodes:
            if entry.harvested < 0.0 or entry.from_feed < 0.0 \
                    or entry.from_interference < 0.0:
                raise ValueError("harvested power must be non-negative")
        # 1e-9 relative slack absorbs rounding in the per-source rescale
        if self.total_harvested > self.total_transmitted * (1.0 + 1e-9):
            raise ValueError("harvested power exceeds transmitted power")

    def to_dict(self) -> dict:
        return {
            "total_transmitted_w": self.total_transmitted,
            "total_harvested_w": self.total_harvested,
            "normalized_sources": list(self.normalized_sources),
            "nodes": [
                {
                    "id": entry.node_id,
                    "harvested_w": entry.harvested,
                    "from_feed_w": entry.from_feed,
                    "from_interference_w": entry.from_interference,
                }
                for entry in self.nodes
            ],
        }


def chain_energy_budget(nodes, capture_area: float = DEFAULT_CAPTURE_AREA) -> HarvestReport:
    """Per-node harvest with every other node's emission as ambient.

    Each node's ledger is split into the leak of its feed (the previous
    node in the chain) and interference from the rest.  If a source's
    total extracted fraction would exceed 1, all of its contributions
    are rescaled to hand out exactly its transmit power; such sources
    are listed in ``normalized_sources``.
    """
    nodes = list(nodes)
    if not nodes:
        raise ValueError("chain needs at least one node")
    if capture_area < 0.0:
        raise ValueError("capture area must be non-negative")
    if len({node.id for node in nodes}) != len(nodes):
        raise ValueError("node ids must be distinct")
    if len({node.position for node in nodes}) != len(nodes):
        raise ValueError("node positions must be distinct")

    # extracted[i][j]: fraction of node j's transmit power drawn by node i
    count = len(nodes)
    fraction = [[0.0] * count for _ in range(count)]
    for i, rx in enumerate(nodes):
        for j, tx in enumerate(nodes):
            if i == j or tx.tx_power == 0.0:
                continue
            fraction[i][j] = rx.collector_enhancement * link_received_power(
                tx, rx.position, capture_area) / tx.tx_power

    normalized = []
    for j, tx in enumerate(nodes):
        drawn = sum(fraction[i][j] for i in range(count))
        if drawn > 1.0:
            for i in range(count):
                fraction[i][j] /= drawn
            normalized.append(tx.id)

    budgets = []
    for i, rx in enumerate(nodes):
        feed = fraction[i][i - 1] * nodes[i - 1].tx_power if i > 0 else 0.0
        total = sum(fraction[i][j] * nodes[j].tx_power for j in range(count))
        eta = rx.conversion_efficiency
        budgets.append(NodeBudget(rx.id, eta * total, eta * feed,
                                  eta * (total - feed)))
    return HarvestReport(
        nodes=tuple(budgets),
        total_transmitted=sum(node.tx_power for node in nodes),
        total_harvested=sum(entry.harvested for entry in budgets),
        normalized_sources=tuple(normalized),
    )


def chain_from_dict(data: dict):
    """(nodes, capture_area) from a scenario mapping."""
    area = float(data.get("capture_area_m2", DEFAULT_CAPTURE_AREA))
    nodes = [
        ChainNode(
            id=int(entry["id"]),
            position=tuple(entry["position_m"]),
            boresight=float(entry.get("boresight_rad", 0.0)),
            tx_power=float(entry.get("tx_power_w", 0.0)),
            collector_enhancement=float(entry.get("collector_enhancement", 1.0)),
            conversion_efficiency=float(entry.get("conversion_efficiency", 1.0)),
        )
        for entry in data["nodes"]
    ]
    return nodes, area


def chain_from_json(path):
    """Load a chain scenario file; see :func:`chain_from_dict` for keys."""
    with open(path, encoding="utf-8") as handle:
        return chain_from_dict(json.load(handle))
