"""Deterministic case streams of a verification campaign.

A case is one (subspace, direction rank) pair. The stream order depends only on the campaign
spec: codimension ascending, then the enumeration order of the subspaces, then the rank. Sample
mode draws the subspaces from ``random.Random(seed)``; every worker regenerates the same stream
and keeps the indices of its stride.
"""

import hashlib
import random
from dataclasses import dataclass
from typing import Iterable, Iterator

from app.algebra.field import GF
from app.core.config import settings
from app.schemas.campaign import CampaignMode, CampaignSpec
from app.spaces.enumeration import (
    count_affine,
    count_subspaces,
    enumerate_affine,
    enumerate_subspaces,
    random_affine,
    random_subspace,
)
from app.spaces.subspace import AffineMatrixSubspace, AnySubspace, MatrixSpaceShape


@dataclass(frozen=True)
class Case:
    index: int
    codim: int
    rank: int
    space: AnySubspace

    @property
    def descriptor(self) -> str:
        """Canonical one-line description, input of the case-order hash."""
        basis = ";".join(",".join(str(x) for x in row) for row in self.space.basis)
        base = ""
        if isinstance(self.space, AffineMatrixSubspace):
            base = ",".join(str(x) for x in self.space.base.vectorize())
        return f"{self.index}|{self.codim}|{self.rank}|{basis}|{base}"


def campaign_shape(spec: CampaignSpec) -> MatrixSpaceShape:
    return MatrixSpaceShape(GF(spec.q), spec.n, spec.p)


def count_cases(spec: CampaignSpec) -> int:
    ranks = len(spec.ranks or [])
    if spec.mode is CampaignMode.SAMPLE:
        return spec.samples * ranks
    ambient = spec.n * spec.p
    counter = count_affine if spec.affine else count_subspaces
    return sum(counter(ambient, c, spec.q) for c in spec.codims) * ranks


def _spaces(spec: CampaignSpec) -> Iterator[tuple[int, AnySubspace]]:
    shape = campaign_shape(spec)
    if spec.mode is CampaignMode.SAMPLE:
        rng = random.Random(spec.seed)
        codims = list(spec.codims)
        draw = random_affine if spec.affine else random_subspace
        for _ in range(spec.samples):
            c = rng.choice(codims)  # uniform over codims, not weighted by count
            yield c, draw(shape, c, rng)
        return
    for c in spec.codims:
        stream: Iterable[AnySubspace] = (
            enumerate_affine(shape, c) if spec.affine else enumerate_subspaces(shape, c)
        )
        for space in stream:
            yield c, space


def iter_cases(spec: CampaignSpec) -> Iterator[Case]:
    index = 0
    for c, space in _spaces(spec):
        for r in spec.ranks or []:
            yield Case(index, c, r, space)
            index += 1


def case_order_hash(descriptors: Iterable[str]) -> str:
    digest = hashlib.sha256()
    for d in descriptors:
        digest.update(d.encode())
        digest.update(b"\n")
    return digest.hexdigest()


def needs_fallback(spec: CampaignSpec) -> bool:
    return spec.mode is CampaignMode.EXHAUSTIVE and count_cases(spec) > settings.MAX_EXHAUSTIVE_CASES


def fallback_spec(spec: CampaignSpec) -> CampaignSpec:
    """Sample-mode copy of an exhaustive spec that is too large to enumerate."""
    return spec.model_copy(
        update={
            "mode": CampaignMode.SAMPLE,
            "samples": settings.SAMPLE_FALLBACK_COUNT,
            "seed": settings.DEFAULT_SEED,
        }
    )
