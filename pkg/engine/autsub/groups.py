"""
Small finite groups given by a multiplication table: element orders and a
readable isomorphism type. Element 0 is the identity and table[i][j] is the
index of the product i∘j.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Sequence

from sympy import factorint
from sympy.combinatorics import Permutation, PermutationGroup

logger = logging.getLogger(__name__)

__all__ = [
    "cayley_group",
    "element_order",
    "is_abelian_table",
    "invariant_factors",
    "group_name",
]

Table = Sequence[Sequence[int]]


def cayley_group(table: Table) -> PermutationGroup:
    """
    The left regular representation: element i acts as j ↦ i∘j.
    """
    n = len(table)
    if n == 1:
        return PermutationGroup([Permutation([0])])
    return PermutationGroup([Permutation(list(row)) for row in table])


def element_order(table: Table, i: int) -> int:
    order, current = 1, i
    while current != 0:
        current = table[i][current]
        order += 1
        if order > len(table):
            raise ValueError(f"element {i} does not return to the identity")
    return order


def is_abelian_table(table: Table) -> bool:
    n = len(table)
    return all(table[i][j] == table[j][i]
               for i in range(n) for j in range(i + 1, n))


def invariant_factors(table: Table) -> List[int]:
    """
    Invariant factors n_1 | n_2 | … of an abelian group, from the primary
    decomposition reported by sympy.
    """
    group = cayley_group(table)
    primary = [int(q) for q in group.abelian_invariants()]
    by_prime: Dict[int, List[int]] = defaultdict(list)
    for q in primary:
        p = next(iter(factorint(q)))
        by_prime[p].append(q)
    for powers in by_prime.values():
        powers.sort(reverse=True)
    width = max((len(powers) for powers in by_prime.values()), default=0)
    factors = []
    for k in range(width):
        value = 1
        for powers in by_prime.values():
            if k < len(powers):
                value *= powers[k]
        factors.append(value)
    return sorted(factors)


def group_name(table: Table) -> str:
    """
    "1", "Z/n", "Z/n1 × Z/n2 × …" for abelian groups, otherwise
    "non-abelian group of order n".
    """
    n = len(table)
    if n == 1:
        return "1"
    if not is_abelian_table(table):
        return f"non-abelian group of order {n}"
    return " × ".join(f"Z/{q}" for q in invariant_factors(table))
