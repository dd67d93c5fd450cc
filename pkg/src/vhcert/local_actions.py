"""Local permutation actions of a VH complex on tree spheres.

A horizontal letter a fixes the base vertex of the vertical tree; the
unique square a b a' b' rewrites to a b = b'^-1 a'^-1, so a carries the
b-neighbour to the b'^-1-neighbour and continues one level deeper as
a'^-1.  That depth-1 map plus residual letter determines the action on
every k-sphere by recursion, and the groups these actions generate are
the local groups of the complex (vertical side generated by a_1..a_m,
horizontal side by b_1..b_n, acting on reduced words of the other side).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from vhcert.complexes import HORIZONTAL, VERTICAL, Letter, SquareComplex
from vhcert.permgroups import PermGroup, Permutation, bsgs_build

# Sphere sizes grow as d*(d-1)**(k-1); nothing in the certificate chain
# needs depth beyond 2.
DEFAULT_MAX_DEPTH = 3


@dataclass(frozen=True)
class LocalPerm:
    """Depth-1 action of one letter on the opposite side's letters."""

    actor: Letter
    depth1: dict
    residual: dict

    def __post_init__(self):
        values = list(self.depth1.values())
        assert len(set(values)) == len(values), "depth-1 map is not a bijection"
        assert all(r.side == self.actor.side for r in self.residual.values())


def vertical_local_perm(c: SquareComplex, a: Letter) -> LocalPerm:
    """Action of a horizontal letter on the 2n vertical letters."""
    if a.side != HORIZONTAL:
        raise ValueError(f"{a!r} is not horizontal")
    depth1 = {}
    residual = {}
    for b in c.vertical_letters():
        a2, b2 = c.corner_partner(a, b)
        depth1[b] = b2.inverse()
        residual[b] = a2.inverse()
    return LocalPerm(a, depth1, residual)


def horizontal_local_perm(c: SquareComplex, b: Letter) -> LocalPerm:
    """Action of a vertical letter on the 2m horizontal letters.

    Mirror of the vertical case via the rotated boundary b a' b' a = 1:
    the square a b x b' is recovered from the corner (x^-1, b^-1), whose
    partner is exactly (a^-1, b'^-1).
    """
    if b.side != VERTICAL:
        raise ValueError(f"{b!r} is not vertical")
    depth1 = {}
    residual = {}
    for x in c.horizontal_letters():
        a_inv, b2_inv = c.corner_partner(x.inverse(), b.inverse())
        depth1[x] = a_inv
        residual[x] = b2_inv
    return LocalPerm(b, depth1, residual)


def local_perm(c: SquareComplex, x: Letter) -> LocalPerm:
    if x.side == HORIZONTAL:
        return vertical_local_perm(c, x)
    return horizontal_local_perm(c, x)


@lru_cache(maxsize=None)
def _profile(c: SquareComplex):
    """All 2m + 2n depth-1 actions of a complex, keyed by actor."""
    table = {}
    for a in c.horizontal_letters():
        table[a] = vertical_local_perm(c, a)
    for b in c.vertical_letters():
        table[b] = horizontal_local_perm(c, b)
    return table


class SphereIndex:
    """Ordered enumeration of the reduced words x1..xk over one side.

    Default letter order is plain letters ascending followed by inverted
    letters ascending (b1 < b2 < ... < b1^-1 < ...), which fixes the point
    labels of every printed sphere permutation.  A custom letter order may
    be supplied to check that generated-group invariants do not depend on
    the labelling.
    """

    def __init__(self, c: SquareComplex, side: str, depth: int, letters=None):
        if depth < 1:
            raise ValueError("sphere depth must be >= 1")
        if letters is None:
            letters = c.horizontal_letters() if side == HORIZONTAL else c.vertical_letters()
        self.side = side
        self.depth = depth
        self.letters = tuple(letters)
        words = [()]
        for _ in range(depth):
            words = [
                w + (x,)
                for w in words
                for x in self.letters
                if not w or x != w[-1].inverse()
            ]
        self.words = tuple(words)
        self.position = {w: i for i, w in enumerate(self.words)}
        d = len(self.letters)
        assert len(self.words) == d * (d - 1) ** (depth - 1)

    def __len__(self):
        return len(self.words)


def sphere_action(
    c: SquareComplex, x: Letter, depth: int, sphere: SphereIndex | None = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Permutation:
    """Permutation induced by ``x`` on the depth-k sphere of the other tree.

    Recursion: the image of w1 w2 .. wk under x is depth1_x(w1) followed by
    the image of w2 .. wk under residual_x(w1).
    """
    if depth > max_depth:
        raise ValueError(f"sphere depth {depth} exceeds the configured cap {max_depth}")
    opposite = VERTICAL if x.side == HORIZONTAL else HORIZONTAL
    if sphere is None:
        sphere = SphereIndex(c, opposite, depth)
    profile = _profile(c)

    def act(actor, word):
        if not word:
            return ()
        lp = profile[actor]
        return (lp.depth1[word[0]],) + act(lp.residual[word[0]], word[1:])

    images = []
    for word in sphere.words:
        image = act(x, word)
        images.append(sphere.position[image])  # image must be a reduced word
    return Permutation(images)


def local_group(
    c: SquareComplex, side: str, depth: int, sphere: SphereIndex | None = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> PermGroup:
    """The local group of one side at the given sphere depth.

    The vertical local group is generated by the actions of a_1..a_m on
    the vertical tree, the horizontal one by b_1..b_n on the horizontal
    tree.
    """
    if side not in (HORIZONTAL, VERTICAL):
        raise ValueError(f"side must be 'h' or 'v', not {side!r}")
    if sphere is None:
        sphere = SphereIndex(c, side, depth)
    actor_side = VERTICAL if side == HORIZONTAL else HORIZONTAL
    count = c.n if side == HORIZONTAL else c.m
    actors = [Letter(actor_side, i + 1) for i in range(count)]
    gens = [sphere_action(c, a, depth, sphere, max_depth) for a in actors]
    return bsgs_build(gens, degree=len(sphere))
