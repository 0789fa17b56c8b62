"""Hierarchical repository tree with DNS-style resolution and caching.

Repositories form a rooted tree of zones.  A finder record is authoritative
at exactly one repository (its home zone); every other repository can only
learn it through resolution, which caches the answer with a TTL at each
repository it crossed.  Resolution is recursive in the DNS sense: the answer
propagates back along the contact path, so the whole path learns it.

The search order is fixed so that identical inputs always produce identical
results: from the origin, search the origin's own subtree depth-first, then
ascend one level at a time, at each ancestor doing a local lookup and then
searching its remaining child subtrees (children in lexicographic label
order, never re-entering the subtree just ascended from).  Exhausting the
root means the whole tree has been searched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .domain import FinderRecord, ResourceQuery, ZoneName, summary_may_satisfy


class RegistryError(Exception):
    """Base class for repository-tree errors."""


class UnknownNode(RegistryError):
    pass


class ZoneMismatch(RegistryError):
    pass


class NotFound(RegistryError):
    """No finder in the whole tree can satisfy the query."""


class MalformedTopology(RegistryError):
    pass


@dataclass(frozen=True)
class CacheEntry:
    """A cached finder record; fresh at time t iff t < inserted_at + ttl."""

    record: FinderRecord
    inserted_at: float
    ttl: float

    def is_fresh(self, now: float) -> bool:
        return now < self.inserted_at + self.ttl


@dataclass(frozen=True)
class ResolutionPolicy:
    """Knobs for resolve: cache TTL, summary pruning, optional cache cap.

    ``cache_capacity`` of None means unbounded; otherwise the oldest-inserted
    entries are evicted first once a node's cache exceeds the cap.
    """

    ttl: float = 3600.0
    summary_pruning: bool = True
    cache_capacity: int | None = None


@dataclass(frozen=True)
class ResolutionResult:
    record: FinderRecord
    path: tuple[str, ...]
    hop_count: int
    cache_hit: bool
    caches_populated: tuple[str, ...]


@dataclass
class RepositoryNode:
    """One repository: authoritative records, delegations to children, cache."""

    node_id: str
    zone: ZoneName
    authoritative: dict[str, FinderRecord] = field(default_factory=dict)
    delegations: dict[str, str] = field(default_factory=dict)
    parent: str | None = None
    cache: list[CacheEntry] = field(default_factory=list)


@dataclass(frozen=True)
class TopologySpec:
    """How to build a repository tree.

    Either a uniform tree (``depth`` levels, ``branching`` children per
    node; depth 1 is a lone root) or an explicit list of zone names whose
    parents must all be present (the root is always implicit).
    """

    depth: int | None = None
    branching: int | None = None
    zones: tuple[str, ...] | None = None


class Topology:
    """A mutable repository tree, driven single-threaded within one run."""

    def __init__(self, nodes: dict[str, RepositoryNode], root_id: str):
        self.nodes = nodes
        self.root_id = root_id

    def node(self, node_id: str) -> RepositoryNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no repository named {node_id!r}") from None

    def leaves(self) -> list[str]:
        """Node ids of childless repositories, in sorted order."""
        return sorted(nid for nid, node in self.nodes.items() if not node.delegations)

    def register_finder(self, node_id: str, record: FinderRecord) -> None:
        """Install (or replace) an authoritative record at its home repository."""
        node = self.node(node_id)
        if record.home_zone != node.zone:
            raise ZoneMismatch(
                f"finder {record.finder_id!r} is homed in {record.home_zone} "
                f"but {node_id!r} serves {node.zone}"
            )
        node.authoritative[record.finder_id] = record

    def local_lookup(self, node_id: str, query: ResourceQuery, now: float) -> list[FinderRecord]:
        """Records at one repository whose summaries may satisfy the query.

        Authoritative records come first, then fresh cached ones, each group
        in ascending finder_id order.  Stale cache entries are never
        returned; a cached copy shadowed by an authoritative record of the
        same finder is dropped.
        """
        node = self.node(node_id)
        hits = [
            record
            for _, record in sorted(node.authoritative.items())
            if summary_may_satisfy(query, record.summary)
        ]
        cached = {
            entry.record.finder_id: entry.record
            for entry in node.cache
            if entry.is_fresh(now) and entry.record.finder_id not in node.authoritative
        }
        hits.extend(
            record
            for _, record in sorted(cached.items())
            if summary_may_satisfy(query, record.summary)
        )
        return hits

    def evict_expired(self, node_id: str, now: float) -> None:
        """Drop every cache entry with inserted_at + ttl <= now."""
        node = self.node(node_id)
        node.cache = [entry for entry in node.cache if entry.is_fresh(now)]

    def resolve(
        self,
        origin_node_id: str,
        query: ResourceQuery,
        now: float,
        policy: ResolutionPolicy | None = None,
    ) -> ResolutionResult:
        """Find a finder for the query, caching the answer along the path.

        Raises NotFound only when no repository in the whole tree holds a
        record (authoritative or fresh-cached) whose summary may satisfy the
        query.  Summary pruning can skip a subtree based on cached knowledge
        about it; because that knowledge may be incomplete, a pruned search
        that comes up empty is retried once without pruning before NotFound
        is raised.  A failed resolution never touches any cache.
        """
        policy = policy or ResolutionPolicy()
        self.node(origin_node_id)

        found = self._search(origin_node_id, query, now, policy.summary_pruning)
        if found.record is None and found.pruned_any and policy.summary_pruning:
            retry = self._search(origin_node_id, query, now, False)
            found = _SearchOutcome(
                record=retry.record,
                from_cache=retry.from_cache,
                path=found.path + retry.path,
                pruned_any=False,
            )
        if found.record is None:
            raise NotFound(f"no finder satisfies the query (searched {len(found.path)} repositories)")

        populated = []
        seen: set[str] = set()
        for node_id in found.path:
            if node_id in seen:
                continue
            seen.add(node_id)
            node = self.nodes[node_id]
            if found.record.finder_id in node.authoritative:
                continue
            self._cache_insert(node, found.record, now, policy)
            populated.append(node_id)
        return ResolutionResult(
            record=found.record,
            path=tuple(found.path),
            hop_count=len(found.path),
            cache_hit=found.from_cache,
            caches_populated=tuple(populated),
        )

    # -- internals ---------------------------------------------------------

    def _cache_insert(
        self, node: RepositoryNode, record: FinderRecord, now: float, policy: ResolutionPolicy
    ) -> None:
        node.cache = [e for e in node.cache if e.record.finder_id != record.finder_id]
        node.cache.append(CacheEntry(record=record, inserted_at=now, ttl=policy.ttl))
        if policy.cache_capacity is not None:
            while len(node.cache) > policy.cache_capacity:
                node.cache.pop(0)

    def _answer_at(self, node_id: str, query: ResourceQuery, now: float):
        """(record, from_cache) at one node, or (None, False)."""
        hits = self.local_lookup(node_id, query, now)
        if not hits:
            return None, False
        record = hits[0]
        node = self.nodes[node_id]
        return record, record.finder_id not in node.authoritative

    def _subtree_may_hold(self, node: RepositoryNode, child_id: str, query: ResourceQuery, now: float) -> bool | None:
        """What the node's fresh cache says about a child subtree.

        Returns None when the node knows nothing about the subtree (must
        descend), else whether any known record there may satisfy the query.
        """
        child_zone = self.nodes[child_id].zone
        known = [
            entry.record
            for entry in node.cache
            if entry.is_fresh(now) and child_zone.is_ancestor_of(entry.record.home_zone)
        ]
        if not known:
            return None
        return any(summary_may_satisfy(query, record.summary) for record in known)

    def _search(self, origin: str, query: ResourceQuery, now: float, pruning: bool) -> "_SearchOutcome":
        path: list[str] = []
        pruned_any = False

        def descend(node_id: str):
            nonlocal pruned_any
            path.append(node_id)
            record, from_cache = self._answer_at(node_id, query, now)
            if record is not None:
                return record, from_cache
            node = self.nodes[node_id]
            for _, child_id in sorted(node.delegations.items()):
                if pruning:
                    verdict = self._subtree_may_hold(node, child_id, query, now)
                    if verdict is False:
                        pruned_any = True
                        continue
                found = descend(child_id)
                if found is not None:
                    return found
            return None

        # The origin's own subtree first, then up one level at a time. Each
        # ancestor answers locally before its other children are explored.
        came_from: str | None = None
        current: str | None = origin
        while current is not None:
            path.append(current)
            record, from_cache = self._answer_at(current, query, now)
            if record is not None:
                return _SearchOutcome(record, from_cache, path, pruned_any)
            node = self.nodes[current]
            for _, child_id in sorted(node.delegations.items()):
                if child_id == came_from:
                    continue
                if pruning:
                    verdict = self._subtree_may_hold(node, child_id, query, now)
                    if verdict is False:
                        pruned_any = True
                        continue
                found = descend(child_id)
                if found is not None:
                    return _SearchOutcome(found[0], found[1], path, pruned_any)
            came_from = current
            current = node.parent
        return _SearchOutcome(None, False, path, pruned_any)


@dataclass
class _SearchOutcome:
    record: FinderRecord | None
    from_cache: bool
    path: list[str]
    pruned_any: bool


def _zone_node_id(zone: ZoneName) -> str:
    return str(zone)


def build_topology(spec: TopologySpec) -> Topology:
    """Construct a repository tree from a TopologySpec.

    Node ids are the zone names themselves (the root is ``"."``), so a
    given spec always yields the same ids.
    """
    if spec.zones is not None:
        if spec.depth is not None or spec.branching is not None:
            raise MalformedTopology("give either depth/branching or an explicit zone list, not both")
        return _build_from_zones(spec.zones)
    if spec.depth is None:
        raise MalformedTopology("topology spec needs a depth or a zone list")
    if spec.depth < 1:
        raise MalformedTopology(f"depth must be >= 1, got {spec.depth}")
    branching = spec.branching if spec.branching is not None else 1
    if branching < 1:
        raise MalformedTopology(f"branching must be >= 1, got {branching}")

    width = max(2, len(str(branching - 1)))
    labels = [f"z{i:0{width}d}" for i in range(branching)]

    nodes: dict[str, RepositoryNode] = {}
    root = RepositoryNode(node_id=_zone_node_id(ZoneName()), zone=ZoneName())
    nodes[root.node_id] = root
    frontier = [root]
    for _ in range(spec.depth - 1):
        next_frontier = []
        for parent in frontier:
            for label in labels:
                zone = parent.zone.child(label)
                child = RepositoryNode(node_id=_zone_node_id(zone), zone=zone, parent=parent.node_id)
                parent.delegations[label] = child.node_id
                nodes[child.node_id] = child
                next_frontier.append(child)
        frontier = next_frontier
    return Topology(nodes, root.node_id)


def _build_from_zones(zone_texts: tuple[str, ...]) -> Topology:
    zones = [ZoneName.parse(text) for text in zone_texts]
    by_labels = {zone.labels: zone for zone in zones}
    if len(by_labels) != len(zones):
        raise MalformedTopology("duplicate zone in topology spec")
    by_labels.setdefault((), ZoneName())

    nodes: dict[str, RepositoryNode] = {}
    for labels in sorted(by_labels, key=len):
        zone = by_labels[labels]
        node = RepositoryNode(node_id=_zone_node_id(zone), zone=zone)
        if not zone.is_root:
            parent_zone = zone.parent()
            if parent_zone.labels not in by_labels:
                raise MalformedTopology(
                    f"zone {zone} has no parent {parent_zone} in the spec; list every ancestor"
                )
            parent_node = nodes[_zone_node_id(parent_zone)]
            node.parent = parent_node.node_id
            parent_node.delegations[zone.labels[0]] = node.node_id
        nodes[node.node_id] = node
    return Topology(nodes, _zone_node_id(ZoneName()))
