"""Binary two-route games on explicit payoff matrices.

Strategic players each pick route 0 or route 1; a joint action is a bit
mask over them, bit k holding the choice of the k-th strategic player.
Payoffs are negative travel times in seconds. Human-driven vehicles may
appear as extra payoff columns but never carry a bit: they are pinned
to route 0 and take no part in deviations.

All types are immutable after construction and safe to share between
workers; every operation here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import IncompleteMatrixError, PreconditionError

Coalition = frozenset[int]

# 2**20 joint actions times 2**20 candidate coalitions is where exhaustive
# enumeration stops being a realistic afternoon; refuse past it by default.
MAX_AV_PLAYERS = 20


def action_to_string(action: int, n_av: int) -> str:
    """Render a joint action as a '0'/'1' string, lowest bit leftmost."""
    if action < 0 or action >> n_av:
        raise ValueError(f"action {action} out of range for {n_av} strategic players")
    return "".join("1" if action >> k & 1 else "0" for k in range(n_av))


def action_from_string(text: str) -> int:
    """Parse the string form produced by :func:`action_to_string`."""
    if not text or any(ch not in "01" for ch in text):
        raise ValueError(f"malformed action string {text!r}")
    return sum(1 << k for k, ch in enumerate(text) if ch == "1")


def deviate_bits(action: int, bits: Iterable[int], n_av: int) -> int:
    """Flip the given bit positions of a joint action; an involution."""
    result = action
    for b in set(bits):
        if not 0 <= b < n_av:
            raise ValueError(f"bit {b} out of range for {n_av} strategic players")
        result ^= 1 << b
    return result


def sort_coalitions(coalitions: Iterable[Coalition]) -> list[Coalition]:
    """Canonical presentation order for coalition sets (size, then members)."""
    return sorted(coalitions, key=lambda c: (len(c), sorted(c)))


@dataclass(frozen=True)
class PayoffMatrix:
    """Deterministic payoff table of a binary routing game.

    ``entries`` maps each stored joint action (an ``n_av``-bit mask) to one
    payoff per player, ordered as ``player_ids``. A matrix is *complete*
    when it prices all ``2**n_av`` joint actions; several operations in
    this package demand completeness and fail naming the first missing
    action otherwise.

    ``player_ids`` defaults to ``0..n_players-1`` and exists so partial
    fixtures can keep the ids of the wider scenario they were cut from.
    """

    n_players: int
    av_ids: tuple[int, ...]
    entries: Mapping[int, tuple[float, ...]]
    player_ids: tuple[int, ...] = ()
    quantum: float = 1.0
    supply_mode: str = "unspecified"
    scenario_hash: str = ""

    def __post_init__(self) -> None:
        if self.n_players < 1:
            raise ValueError("n_players must be at least 1")
        player_ids = tuple(self.player_ids) or tuple(range(self.n_players))
        if len(player_ids) != self.n_players or len(set(player_ids)) != self.n_players:
            raise ValueError("player_ids must be n_players distinct ids")
        av_ids = tuple(self.av_ids)
        if not av_ids or len(set(av_ids)) != len(av_ids):
            raise ValueError("av_ids must be non-empty and free of duplicates")
        if not set(av_ids) <= set(player_ids):
            raise ValueError("av_ids must be a subset of player_ids")
        if self.quantum <= 0:
            raise ValueError("quantum must be positive")
        n_av = len(av_ids)
        entries: dict[int, tuple[float, ...]] = {}
        for action, row in self.entries.items():
            if not 0 <= action < (1 << n_av):
                raise ValueError(f"action {action} out of range for {n_av} strategic players")
            payoffs = tuple(float(v) for v in row)
            if len(payoffs) != self.n_players:
                raise ValueError(
                    f"action {action_to_string(action, n_av)} has {len(payoffs)} payoffs, "
                    f"expected {self.n_players}"
                )
            for v in payoffs:
                if not math.isfinite(v) or v > 0:
                    raise ValueError(f"payoffs must be finite and <= 0, got {v}")
            entries[action] = payoffs
        object.__setattr__(self, "player_ids", player_ids)
        object.__setattr__(self, "av_ids", av_ids)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_column", {p: k for k, p in enumerate(player_ids)})
        object.__setattr__(self, "_bit", {p: k for k, p in enumerate(av_ids)})

    @property
    def n_av(self) -> int:
        return len(self.av_ids)

    @property
    def complete(self) -> bool:
        return len(self.entries) == 1 << self.n_av

    def actions(self) -> list[int]:
        return sorted(self.entries)

    def action_string(self, action: int) -> str:
        return action_to_string(action, self.n_av)

    def parse_action(self, text: str) -> int:
        if len(text) != self.n_av:
            raise ValueError(f"action string {text!r} must have length {self.n_av}")
        return action_from_string(text)

    def has(self, action: int) -> bool:
        return action in self.entries

    def require(self, action: int) -> tuple[float, ...]:
        try:
            return self.entries[action]
        except KeyError:
            raise IncompleteMatrixError(self.action_string(action)) from None

    def bit(self, player: int) -> int:
        try:
            return self._bit[player]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"player {player} is not a strategic player of this game") from None

    def column(self, player: int) -> int:
        try:
            return self._column[player]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"player {player} is not part of this game") from None

    def payoff(self, player: int, action: int) -> float:
        return self.require(action)[self.column(player)]

    def av_payoffs(self, action: int) -> tuple[float, ...]:
        row = self.require(action)
        column = self._column  # type: ignore[attr-defined]
        return tuple(row[column[p]] for p in self.av_ids)

    def indicator(self, members: Iterable[int]) -> int:
        """Joint action with exactly the given players on route 1."""
        mask = 0
        for p in members:
            mask |= 1 << self.bit(p)
        return mask

    def members_of(self, mask: int) -> Coalition:
        return frozenset(self.av_ids[k] for k in range(self.n_av) if mask >> k & 1)

    def deviate(self, action: int, members: Iterable[int]) -> int:
        """Flip the route choice of every coalition member; an involution."""
        return action ^ self.indicator(members)


class EquilibriumTag(Enum):
    NOT_NASH = "not_nash"
    NASH = "nash"
    STRONG_NASH = "strong_nash"


@dataclass(frozen=True)
class EquilibriumClass:
    """Classification of one joint action.

    ``improving_coalitions`` holds every non-empty coalition whose joint
    deviation strictly improves each of its members; it is empty exactly
    for strong equilibria, and contains a singleton exactly when the
    action is not Nash. ``club_found`` flags whether some coalition of
    two or more improves jointly while none of its members gains alone.
    """

    tag: EquilibriumTag
    improving_coalitions: frozenset[Coalition]
    club_found: bool


def _check_enumeration_cap(g: PayoffMatrix, av_limit: int) -> None:
    if g.n_av > av_limit:
        raise PreconditionError(
            f"enumeration over {g.n_av} strategic players exceeds the cap of {av_limit}; "
            f"raise av_limit explicitly if you really mean it"
        )


def improving_coalitions(g: PayoffMatrix, x: int, *,
                         av_limit: int = MAX_AV_PLAYERS) -> frozenset[Coalition]:
    """Every non-empty coalition whose joint flip strictly improves all members.

    Singletons are included, so the result is empty iff ``x`` is a strong
    equilibrium and contains a singleton iff ``x`` is not Nash. Needs the
    payoffs of ``x`` and of every deviation target; a missing target
    raises :class:`IncompleteMatrixError` naming it.
    """
    _check_enumeration_cap(g, av_limit)
    base = g.av_payoffs(x)
    found: list[int] = []
    for c in range(1, 1 << g.n_av):
        target = g.av_payoffs(x ^ c)
        m = c
        ok = True
        while m:
            b = (m & -m).bit_length() - 1
            if target[b] <= base[b]:
                ok = False
                break
            m &= m - 1
        if ok:
            found.append(c)
    return frozenset(g.members_of(c) for c in found)


def is_nash(g: PayoffMatrix, x: int) -> bool:
    """True iff no strategic player gains by flipping its own route.

    ``x`` itself must be priced. On a partial matrix the verdict is
    restricted to the players whose flipped action is priced; unpriced
    flips contribute no evidence of improvement.
    """
    base = g.av_payoffs(x)
    for b in range(g.n_av):
        y = x ^ (1 << b)
        if g.has(y) and g.av_payoffs(y)[b] > base[b]:
            return False
    return True


def is_strong(g: PayoffMatrix, x: int, *, av_limit: int = MAX_AV_PLAYERS) -> bool:
    """True iff no coalition of any size can make all its members strictly better off."""
    return not improving_coalitions(g, x, av_limit=av_limit)


def _clubs_among(g: PayoffMatrix, x: int,
                 improving: frozenset[Coalition]) -> frozenset[Coalition]:
    """Filter improving coalitions down to clubs relative to x.

    A club needs two or more members, each of whom would not gain by
    flipping alone, yet all of whom strictly gain by flipping together.
    """
    base = g.av_payoffs(x)
    solo_gain = [g.av_payoffs(x ^ (1 << b))[b] > base[b] for b in range(g.n_av)]
    clubs = set()
    for coalition in improving:
        if len(coalition) < 2:
            continue
        if any(solo_gain[g.bit(i)] for i in coalition):
            continue
        clubs.add(coalition)
    return frozenset(clubs)


def find_clubs(g: PayoffMatrix, x0: int = 0, *,
               av_limit: int = MAX_AV_PLAYERS) -> frozenset[Coalition]:
    """Clubs available at a Nash equilibrium ``x0``.

    Raises :class:`PreconditionError` when ``x0`` is not Nash: club
    formation is defined as a joint departure from equilibrium.
    """
    if not is_nash(g, x0):
        raise PreconditionError(
            f"joint action {g.action_string(x0)} is not a Nash equilibrium"
        )
    improving = improving_coalitions(g, x0, av_limit=av_limit)
    return _clubs_among(g, x0, improving)


def classify_all(g: PayoffMatrix, *,
                 av_limit: int = MAX_AV_PLAYERS) -> dict[int, EquilibriumClass]:
    """Classify every joint action of a complete matrix.

    Per-action work is independent and side effect free, so callers may
    shard the action range across workers and merge; this reference
    implementation runs sequentially.
    """
    _check_enumeration_cap(g, av_limit)
    n = g.n_av
    rows = [g.av_payoffs(a) for a in range(1 << n)]
    result: dict[int, EquilibriumClass] = {}
    for x in range(1 << n):
        base = rows[x]
        improving: list[int] = []
        singles = 0
        for c in range(1, 1 << n):
            target = rows[x ^ c]
            m = c
            ok = True
            while m:
                b = (m & -m).bit_length() - 1
                if target[b] <= base[b]:
                    ok = False
                    break
                m &= m - 1
            if ok:
                improving.append(c)
                if c & (c - 1) == 0:
                    singles |= c
        if not improving:
            tag = EquilibriumTag.STRONG_NASH
        elif singles:
            tag = EquilibriumTag.NOT_NASH
        else:
            tag = EquilibriumTag.NASH
        club_found = any(c & (c - 1) and not c & singles for c in improving)
        result[x] = EquilibriumClass(
            tag=tag,
            improving_coalitions=frozenset(g.members_of(c) for c in improving),
            club_found=club_found,
        )
    return result
