"""Balls in word metrics and distortion profiles of single elements."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

from src.config import settings
from src.distortion.groups import GroupSpec
from src.exceptions import InvalidParameterError
from src.reports.schemas import DistortionProfile, ProfileRow

logger = logging.getLogger(__name__)


@dataclass
class Caps:
    """Limits on ball enumeration; reaching one truncates instead of failing."""

    max_elements: int = field(default_factory=lambda: settings.max_elements)
    max_size: Optional[int] = None


@dataclass
class Ball:
    """S^n with minimal word lengths, in discovery order."""

    radius: int
    elements: Dict[Hashable, Tuple[Any, int]] = field(default_factory=dict)
    layer_sizes: List[int] = field(default_factory=list)
    truncated: bool = False
    truncated_at: Optional[int] = None
    max_size: int = 0

    def length(self, key: Hashable) -> Optional[int]:
        entry = self.elements.get(key)
        return entry[1] if entry else None

    def size_at(self, n: int) -> int:
        """Number of elements of length at most n."""
        return sum(self.layer_sizes[: n + 1])

    def __len__(self) -> int:
        return len(self.elements)


def _expand(
    group: GroupSpec, frontier: Sequence[Any], generators: Sequence[Any]
) -> List[Tuple[Hashable, Any]]:
    products = []
    for element in frontier:
        for generator in generators:
            product = group.multiply(element, generator)
            products.append((group.canonical(product), product))
    return products


def ball(
    group: GroupSpec,
    n: int,
    caps: Optional[Caps] = None,
    workers: Optional[int] = None,
) -> Ball:
    """Breadth-first ball of radius n in the word metric of the group's generating set.

    Frontier chunks may be expanded by several threads; products are merged in
    frontier-then-generator order, so the ball is the same for any worker count.

    Raises:
        InvalidParameterError: For groups without exact canonical forms or n < 0
    """
    if not group.exact:
        raise InvalidParameterError(f"{group.name} only supports falsification, not balls")
    if n < 0:
        raise InvalidParameterError(f"radius must be non-negative, got {n}")
    caps = caps or Caps()
    workers = workers or settings.workers
    generators = [element for _, element in group.generating_set()]

    start = group.identity()
    result = Ball(radius=n)
    result.elements[group.canonical(start)] = (start, 0)
    result.layer_sizes.append(1)
    result.max_size = group.size(start)
    frontier = [start]

    for radius in range(1, n + 1):
        if workers > 1 and len(frontier) > workers:
            step = -(-len(frontier) // workers)
            pieces = [frontier[i : i + step] for i in range(0, len(frontier), step)]
            with ThreadPoolExecutor(max_workers=workers) as executor:
                parts = list(executor.map(lambda p: _expand(group, p, generators), pieces))
            products = [item for part in parts for item in part]
        else:
            products = _expand(group, frontier, generators)

        layer = []
        for key, element in products:
            if key in result.elements:
                continue
            if group.exceeds(element, caps.max_size):
                result.truncated = True
                result.truncated_at = result.truncated_at or radius
                continue
            if len(result.elements) >= caps.max_elements:
                result.truncated = True
                result.truncated_at = result.truncated_at or radius
                break
            result.elements[key] = (element, radius)
            result.max_size = max(result.max_size, group.size(element))
            layer.append(element)

        result.layer_sizes.append(len(layer))
        frontier = layer
        logger.debug(f"{group.name}: radius {radius}, {len(result.elements)} elements")
        if len(result.elements) >= caps.max_elements:
            result.truncated = True
            result.truncated_at = result.truncated_at or radius
            result.layer_sizes.extend([0] * (n - radius))
            break

    if result.truncated:
        logger.warning(f"Ball of {group.name} truncated at radius {result.truncated_at}")
    return result


def distortion_profile(
    group: GroupSpec,
    element: Any,
    n_max: int,
    caps: Optional[Caps] = None,
    workers: Optional[int] = None,
    power_cap: Optional[int] = None,
    element_name: str = "c",
) -> DistortionProfile:
    """delta(n) = max{m : c^m in S^n} for n = 0..n_max, plus the stable length.

    Powers c, c^2, ... are looked up in the ball of radius n_max. The scan stops
    at finite order, at `power_cap`, or after `power_patience` consecutive
    powers larger than everything in the ball.
    """
    if n_max < 0:
        raise InvalidParameterError(f"n_max must be non-negative, got {n_max}")
    power_cap = power_cap or settings.power_cap
    radius_ball = ball(group, n_max, caps, workers)
    identity_key = group.canonical(group.identity())

    lengths: Dict[int, int] = {}
    finite_order = None
    oversized = 0
    current = group.identity()
    for m in range(1, power_cap + 1):
        current = group.multiply(current, element)
        key = group.canonical(current)
        if key == identity_key:
            finite_order = m
            break
        found = radius_ball.length(key)
        if found is not None:
            lengths[m] = found
            oversized = 0
        elif group.size(current) > radius_ball.max_size:
            oversized += 1
            if oversized >= settings.power_patience:
                break
    else:
        logger.warning(f"Power scan of {element_name} stopped at the cap {power_cap}")

    rows = []
    for n in range(n_max + 1):
        truncated = radius_ball.truncated_at is not None and radius_ball.truncated_at <= n
        if finite_order is not None:
            delta = None
        else:
            delta = max([m for m, length in lengths.items() if length <= n], default=0)
        rows.append(
            ProfileRow(n=n, delta=delta, ball_size=radius_ball.size_at(n), truncated=truncated)
        )

    stable = None
    if lengths and finite_order is None:
        stable = min(length / m for m, length in lengths.items())

    return DistortionProfile(
        group=group.name,
        element=element_name,
        rows=rows,
        truncated=radius_ball.truncated,
        stable_length=stable,
        finite_order=finite_order,
        membership_verified=1 in lengths or finite_order is not None,
        power_lengths=lengths,
    )
