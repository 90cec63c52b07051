"""
Exhaustive enumeration of small trees and mappings, used as exact oracles.
"""

import itertools
import logging
from enum import Enum
from typing import Iterator

from pmaplab.core.errors import TooLarge
from pmaplab.core.settings import ENUMERATION_HARD_LIMIT

from .mapping import Mapping
from .tree import RootedTree, decode_tree

# Setup logger
logger = logging.getLogger("enumerate")


class StructureKind(str, Enum):
    """
    Families that can be enumerated.
    """

    TREE = "tree"
    MAPPING = "mapping"


def _check_size(n: int, limit: int) -> None:
    if n < 1:
        raise TooLarge(f"Enumeration needs n >= 1, got {n}")
    cap = min(limit, ENUMERATION_HARD_LIMIT)
    if n > cap:
        raise TooLarge(f"Enumeration limited to n <= {cap}, got {n}")


def enumerate_trees(n: int, limit: int = ENUMERATION_HARD_LIMIT) -> Iterator[RootedTree]:
    """All n^(n-1) rooted trees on [n], in lexicographic order of their parent codes."""
    _check_size(n, limit)
    logger.debug("Enumerating %s rooted trees", n ** (n - 1))
    return (decode_tree(code, n) for code in itertools.product(range(n), repeat=n - 1))


def enumerate_mappings(n: int, limit: int = ENUMERATION_HARD_LIMIT) -> Iterator[Mapping]:
    """All n^n mappings of [n]."""
    _check_size(n, limit)
    logger.debug("Enumerating %s mappings", n**n)
    return (Mapping(image) for image in itertools.product(range(n), repeat=n))


def enumerate_structures(
    n: int, kind: StructureKind, limit: int = ENUMERATION_HARD_LIMIT
) -> Iterator[RootedTree | Mapping]:
    """Enumerate one family; the hard limit n <= 7 always applies."""
    if kind == StructureKind.TREE:
        return enumerate_trees(n, limit)
    return enumerate_mappings(n, limit)
