"""Joint distributions over component-state masks.

Every distribution is immutable; posterior updates return new objects.
Masks follow the convention of :mod:`netvoi.model`: bit i set means
component i works, so "failure" of component i is a cleared bit.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConditioningError
from .model import check_state

EXPLICIT_SUM_TOL = 1e-12


class JointDistribution:
    """Probability mass over the 2^N component-state masks."""

    n_components: int

    def pmf(self, state: int) -> float:
        raise NotImplementedError

    def pmf_vector(self) -> np.ndarray:
        """Read-only vector of probabilities indexed by mask."""
        raise NotImplementedError

    def marginal_failure(self, i: int) -> float:
        raise NotImplementedError

    def reweight_component(self, i: int, w_failed: float, w_working: float):
        """Multiply states by a per-state-of-component-i likelihood and renormalize."""
        raise NotImplementedError

    def condition(self, evidence):
        """Condition on exact component states, given as {index: 0 or 1}."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.n_components:
            raise IndexError(f"component index {i} out of range")


class Independent(JointDistribution):
    """Product of per-component Bernoulli failure indicators."""

    def __init__(self, failure_probs):
        probs = tuple(float(p) for p in failure_probs)
        if not probs:
            raise ValueError("need at least one component")
        for i, p in enumerate(probs):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"failure probability {p} of component {i} not in [0, 1]")
        self.failure_probs = probs
        self.n_components = len(probs)
        self._vector: np.ndarray | None = None

    def pmf(self, state: int) -> float:
        check_state(state, self.n_components)
        out = 1.0
        for i, p in enumerate(self.failure_probs):
            out *= (1.0 - p) if (state >> i) & 1 else p
        return out

    def pmf_vector(self) -> np.ndarray:
        if self._vector is None:
            masks = np.arange(1 << self.n_components, dtype=np.int64)
            v = np.ones(masks.size)
            for i, p in enumerate(self.failure_probs):
                working = (masks >> i) & 1
                v *= np.where(working, 1.0 - p, p)
            v.flags.writeable = False
            self._vector = v
        return self._vector

    def marginal_failure(self, i: int) -> float:
        self._check_index(i)
        return self.failure_probs[i]

    def reweight_component(self, i, w_failed, w_working):
        self._check_index(i)
        p = self.failure_probs[i]
        total = w_failed * p + w_working * (1.0 - p)
        if total <= 0.0:
            raise ConditioningError("observation has probability zero")
        probs = list(self.failure_probs)
        probs[i] = w_failed * p / total
        return Independent(probs)

    def condition(self, evidence):
        probs = list(self.failure_probs)
        for i, s in dict(evidence).items():
            self._check_index(i)
            p = probs[i]
            if s == 0:
                if p <= 0.0:
                    raise ConditioningError(f"component {i} never fails")
                probs[i] = 1.0
            else:
                if p >= 1.0:
                    raise ConditioningError(f"component {i} never works")
                probs[i] = 0.0
        return Independent(probs)

    def sample(self, rng, size):
        p = np.asarray(self.failure_probs)
        working = rng.random((size, self.n_components)) >= p
        powers = np.left_shift(np.int64(1), np.arange(self.n_components, dtype=np.int64))
        return working @ powers


class Explicit(JointDistribution):
    """Arbitrary pmf stored as one weight per mask."""

    def __init__(self, weights):
        arr = np.array(weights, dtype=float)
        size = arr.size
        if size < 2 or size & (size - 1):
            raise ValueError("weight count must be a power of two, at least 2")
        if np.any(arr < 0.0):
            raise ValueError("weights must be nonnegative")
        total = float(arr.sum())
        if abs(total - 1.0) > EXPLICIT_SUM_TOL:
            raise ValueError(f"weights sum to {total}, not 1")
        arr.flags.writeable = False
        self.n_components = size.bit_length() - 1
        self._weights = arr

    def pmf(self, state: int) -> float:
        check_state(state, self.n_components)
        return float(self._weights[state])

    def pmf_vector(self) -> np.ndarray:
        return self._weights

    def marginal_failure(self, i: int) -> float:
        self._check_index(i)
        masks = np.arange(self._weights.size, dtype=np.int64)
        return float(self._weights[(masks >> i) & 1 == 0].sum())

    def reweight_component(self, i, w_failed, w_working):
        self._check_index(i)
        masks = np.arange(self._weights.size, dtype=np.int64)
        working = ((masks >> i) & 1).astype(bool)
        w = self._weights * np.where(working, w_working, w_failed)
        total = float(w.sum())
        if total <= 0.0:
            raise ConditioningError("observation has probability zero")
        return Explicit(w / total)

    def condition(self, evidence):
        keep = np.ones(self._weights.size, dtype=bool)
        masks = np.arange(self._weights.size, dtype=np.int64)
        for i, s in dict(evidence).items():
            self._check_index(i)
            keep &= ((masks >> i) & 1) == int(s)
        w = np.where(keep, self._weights, 0.0)
        total = float(w.sum())
        if total <= 0.0:
            raise ConditioningError("evidence has probability zero")
        return Explicit(w / total)

    def sample(self, rng, size):
        cdf = np.cumsum(self._weights)
        cdf[-1] = 1.0
        idx = np.searchsorted(cdf, rng.random(size), side="right")
        return np.minimum(idx, self._weights.size - 1).astype(np.int64)


class _SharedCauseBlock:
    """Exchangeable group whose failures share one latent cause.

    Component i of the group fails as ``f_i = D_i * Z + (1 - D_i) * E_i``
    with D_i ~ Bernoulli(sqrt(rho)) choosing between the shared source Z
    and a private source E_i, both Bernoulli(p). Marginals stay at p and
    every pair correlates at exactly rho; conditioned on Z the components
    are independent, so the block pmf is a two-term mixture of products.
    """

    def __init__(self, members, p, rho):
        members = tuple(int(m) for m in members)
        if not members:
            raise ValueError("a group needs at least one member")
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"group failure probability {p} not in [0, 1]")
        if not 0.0 <= rho < 1.0:
            raise ValueError(f"group correlation {rho} not in [0, 1)")
        self.members = members
        self.p = float(p)
        self.rho = float(rho)
        theta = math.sqrt(self.rho)
        self._fail_given_active = theta + (1.0 - theta) * self.p
        self._fail_given_inactive = (1.0 - theta) * self.p
        self._theta = theta
        self._table: np.ndarray | None = None

    def table(self) -> np.ndarray:
        if self._table is None:
            k = len(self.members)
            sub = np.arange(1 << k, dtype=np.int64)
            active = np.ones(sub.size)
            inactive = np.ones(sub.size)
            for j in range(k):
                working = ((sub >> j) & 1).astype(bool)
                a, b = self._fail_given_active, self._fail_given_inactive
                active *= np.where(working, 1.0 - a, a)
                inactive *= np.where(working, 1.0 - b, b)
            table = self.p * active + (1.0 - self.p) * inactive
            table.flags.writeable = False
            self._table = table
        return self._table

    def marginal_failure(self, j: int) -> float:
        return self.p

    def sample(self, rng, size):
        k = len(self.members)
        z = rng.random(size) < self.p
        d = rng.random((size, k)) < self._theta
        e = rng.random((size, k)) < self.p
        failed = np.where(d, z[:, None], e)
        powers = np.left_shift(np.int64(1), np.arange(k, dtype=np.int64))
        return (~failed) @ powers


class _TableBlock:
    """Explicit joint over one group, produced by conditioning."""

    def __init__(self, members, weights):
        self.members = tuple(int(m) for m in members)
        arr = np.asarray(weights, dtype=float)
        arr = arr.copy()
        arr.flags.writeable = False
        self._weights = arr

    def table(self) -> np.ndarray:
        return self._weights

    def marginal_failure(self, j: int) -> float:
        sub = np.arange(self._weights.size, dtype=np.int64)
        return float(self._weights[(sub >> j) & 1 == 0].sum())

    def sample(self, rng, size):
        cdf = np.cumsum(self._weights)
        cdf[-1] = 1.0
        idx = np.searchsorted(cdf, rng.random(size), side="right")
        return np.minimum(idx, self._weights.size - 1).astype(np.int64)


class Group:
    """Specification of one shared-cause group: members, marginal p, correlation rho."""

    def __init__(self, members, p, rho=0.0):
        self.members = tuple(int(m) for m in members)
        self.p = float(p)
        self.rho = float(rho)


class CommonCauseGroups(JointDistribution):
    """Product of independent component groups.

    Groups are given as :class:`Group` specs (shared-cause construction)
    and must partition the component indices. Conditioning on evidence
    inside a group turns just that group into an explicit table; the other
    groups keep their parametric form.
    """

    def __init__(self, groups, n_components: int | None = None):
        blocks = []
        for g in groups:
            if isinstance(g, (_SharedCauseBlock, _TableBlock)):
                blocks.append(g)
            else:
                blocks.append(_SharedCauseBlock(g.members, g.p, g.rho))
        blocks.sort(key=lambda b: min(b.members))
        covered = [m for b in blocks for m in b.members]
        if len(set(covered)) != len(covered):
            raise ValueError("groups overlap")
        n = (max(covered) + 1) if covered else 0
        if n_components is not None:
            n = int(n_components)
        if sorted(covered) != list(range(n)):
            raise ValueError(f"groups must partition components 0..{n - 1}")
        self.blocks = tuple(blocks)
        self.n_components = n
        self._vector: np.ndarray | None = None

    def _local_mask(self, state: int, members) -> int:
        sub = 0
        for j, m in enumerate(members):
            sub |= ((state >> m) & 1) << j
        return sub

    def pmf(self, state: int) -> float:
        check_state(state, self.n_components)
        out = 1.0
        for block in self.blocks:
            out *= float(block.table()[self._local_mask(state, block.members)])
        return out

    def pmf_vector(self) -> np.ndarray:
        if self._vector is None:
            masks = np.arange(1 << self.n_components, dtype=np.int64)
            v = np.ones(masks.size)
            for block in self.blocks:
                sub = np.zeros(masks.size, dtype=np.int64)
                for j, m in enumerate(block.members):
                    sub |= ((masks >> m) & 1) << j
                v *= block.table()[sub]
            v.flags.writeable = False
            self._vector = v
        return self._vector

    def marginal_failure(self, i: int) -> float:
        self._check_index(i)
        for block in self.blocks:
            if i in block.members:
                return block.marginal_failure(block.members.index(i))
        raise IndexError(i)

    def reweight_component(self, i, w_failed, w_working):
        self._check_index(i)
        blocks = []
        for block in self.blocks:
            if i not in block.members:
                blocks.append(block)
                continue
            j = block.members.index(i)
            sub = np.arange(block.table().size, dtype=np.int64)
            working = ((sub >> j) & 1).astype(bool)
            w = block.table() * np.where(working, w_working, w_failed)
            total = float(w.sum())
            if total <= 0.0:
                raise ConditioningError("observation has probability zero")
            blocks.append(_TableBlock(block.members, w / total))
        return CommonCauseGroups(blocks, n_components=self.n_components)

    def condition(self, evidence):
        evidence = dict(evidence)
        for i in evidence:
            self._check_index(i)
        masks = np.arange(1 << self.n_components, dtype=np.int64)
        keep = np.ones(masks.size, dtype=bool)
        for i, s in evidence.items():
            keep &= ((masks >> i) & 1) == int(s)
        w = np.where(keep, self.pmf_vector(), 0.0)
        total = float(w.sum())
        if total <= 0.0:
            raise ConditioningError("evidence has probability zero")
        return Explicit(w / total)

    def sample(self, rng, size):
        out = np.zeros(size, dtype=np.int64)
        for block in self.blocks:
            local = block.sample(rng, size)
            for j, m in enumerate(block.members):
                out |= ((local >> j) & 1) << m
        return out


def system_failure_prob(net, dist: JointDistribution) -> float:
    """Exact probability that the system is down, by full enumeration."""
    if net.n_components != dist.n_components:
        raise ValueError("network and distribution disagree on the component count")
    table = net.truth_table()
    return float(dist.pmf_vector()[~table].sum())
