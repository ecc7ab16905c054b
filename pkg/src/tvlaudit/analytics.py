"""Cross-snapshot drift (Jaccard), cross-protocol duplicate balance queries.

Works on the deduplicated identities of standard balance queries: a call is
keyed by (kind, token, owner), never by raw calldata, so repeated identical
queries and argument-padding differences cannot distort set comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping

from .evm import normalize_address

if TYPE_CHECKING:
    from .traces import ProtocolProfile

TOKEN_BALANCE = "token_balance"
NATIVE_BALANCE = "native_balance"


@dataclass(frozen=True)
class CallKey:
    """Identity of one standard balance query.

    kind:  "token_balance" (ERC-20 balanceOf) or "native_balance" (eth_getBalance)
    token: queried token contract, only for token_balance
    owner: the account whose balance is read
    """

    kind: str
    owner: str
    token: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in (TOKEN_BALANCE, NATIVE_BALANCE):
            raise ValueError(f"unknown call kind {self.kind!r}")
        if (self.token is not None) != (self.kind == TOKEN_BALANCE):
            raise ValueError("token must be present exactly when kind is token_balance")
        object.__setattr__(self, "owner", normalize_address(self.owner))
        if self.token is not None:
            object.__setattr__(self, "token", normalize_address(self.token))

    def sort_key(self) -> tuple[str, str, str]:
        return (self.kind, self.token or "", self.owner)


@dataclass(frozen=True)
class DuplicateFinding:
    """One balance-query identity shared by two or more protocols."""

    key: CallKey
    protocols: tuple[str, ...]

    def __post_init__(self) -> None:
        deduped = tuple(sorted(set(self.protocols)))
        if len(deduped) < 2:
            raise ValueError("a duplicate finding needs at least two distinct protocols")
        object.__setattr__(self, "protocols", deduped)


def balance_call_set(profile: "ProtocolProfile", snapshot_id: str | None = None) -> frozenset[CallKey]:
    """Deduplicated standard balance-query identities of one protocol profile."""
    if snapshot_id is not None and profile.snapshot_id != snapshot_id:
        raise ValueError(
            f"profile {profile.protocol_id!r} belongs to snapshot {profile.snapshot_id!r}, "
            f"not {snapshot_id!r}"
        )
    return frozenset(profile.balance_call_keys)


def jaccard(a: Iterable[CallKey], b: Iterable[CallKey]) -> float:
    """|a & b| / |a | b|. Two empty sets compare as 1.0 (nothing changed)."""
    sa, sb = set(a), set(b)
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


@dataclass
class DriftReport:
    """Per-pair Jaccard similarities against a reference snapshot."""

    reference: str
    # snapshot_id -> [(protocol_id, similarity)], ranked by similarity descending
    pairs: dict[str, list[tuple[str, float]]] = field(default_factory=dict)
    means: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    both_empty: dict[str, list[str]] = field(default_factory=dict)


def drift_report(
    reference: Mapping[str, "ProtocolProfile"],
    older: Mapping[str, Mapping[str, "ProtocolProfile"]],
    *,
    include_flagged: bool = False,
) -> DriftReport:
    """Compare each older snapshot's balance-call sets against the reference.

    Only protocols present in both snapshots are compared. Protocols that used
    external hosts or raised errors on either side are excluded unless
    ``include_flagged`` is set. Pairs where both sets are empty score 1.0 and
    are listed in ``both_empty``.
    """
    ref_ids = next(iter(reference.values())).snapshot_id if reference else "?"
    report = DriftReport(reference=ref_ids)

    def usable(profile: "ProtocolProfile") -> bool:
        return include_flagged or not (profile.used_external_hosts or profile.raised_errors)

    for snapshot_id in sorted(older):
        profiles = older[snapshot_id]
        rows: list[tuple[str, float]] = []
        flagged_empty: list[str] = []
        for protocol_id in sorted(set(reference) & set(profiles)):
            ref_profile = reference[protocol_id]
            old_profile = profiles[protocol_id]
            if not (usable(ref_profile) and usable(old_profile)):
                continue
            ref_keys = ref_profile.balance_call_keys
            old_keys = old_profile.balance_call_keys
            if not ref_keys and not old_keys:
                flagged_empty.append(protocol_id)
            rows.append((protocol_id, jaccard(ref_keys, old_keys)))
        if not rows:
            report.warnings.append(f"no comparable protocols between {ref_ids} and {snapshot_id}")
            report.pairs[snapshot_id] = []
            continue
        rows.sort(key=lambda r: (-r[1], r[0]))
        report.pairs[snapshot_id] = rows
        report.means[snapshot_id] = sum(v for _, v in rows) / len(rows)
        if flagged_empty:
            report.both_empty[snapshot_id] = flagged_empty
    return report


def find_duplicates(profiles: Iterable["ProtocolProfile"]) -> list[DuplicateFinding]:
    """Balance-query identities issued by two or more distinct protocols.

    One finding per key, protocols sorted; findings ordered by key.
    """
    owners: dict[CallKey, set[str]] = {}
    for profile in profiles:
        for key in profile.balance_call_keys:
            owners.setdefault(key, set()).add(profile.protocol_id)
    findings = [
        DuplicateFinding(key=key, protocols=tuple(sorted(ids)))
        for key, ids in owners.items()
        if len(ids) >= 2
    ]
    findings.sort(key=lambda f: f.key.sort_key())
    return findings
