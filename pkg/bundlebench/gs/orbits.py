"""lambda-orbits of roots and of extended simple coroots."""

from dataclasses import dataclass

from ..lie.rootsystem import RootSystem
from ..lie.weyl import WeylElement


@dataclass(frozen=True)
class RootOrbit:
    """Orbit {beta, lambda beta, ...} listed from its base point beta-bar."""

    base: int
    members: tuple[int, ...]
    order: int

    @property
    def length(self) -> int:
        return len(self.members)

    @property
    def p(self) -> int:
        """p = l / l_beta: how often the orbit wraps inside one period of lambda."""
        return self.order // self.length

    def step_of(self, i: int) -> int:
        """s with lambda^s(base) = root i."""
        return self.members.index(i)


@dataclass(frozen=True)
class OrbitDecomposition:
    rs: RootSystem
    order: int
    root_perm: tuple[int, ...]
    root_orbits: tuple[RootOrbit, ...]
    node_orbits: tuple[tuple[int, ...], ...]
    orbit_of_root: tuple[int, ...]

    def orbit(self, i: int) -> RootOrbit:
        return self.root_orbits[self.orbit_of_root[i]]

    def negative_orbit(self, o: int) -> int:
        base = self.root_orbits[o].base
        return self.orbit_of_root[self.rs.negative_index(base)]

    def node_orbit_of(self, k: int) -> int:
        for i, orb in enumerate(self.node_orbits):
            if k in orb:
                return i
        raise KeyError(k)

    def r1_orbits(self, pi1_nodes: set[int]) -> tuple[int, ...]:
        """Orbits of roots supported on the simple nodes in ``pi1_nodes`` (1-based)."""
        out = []
        for o, orb in enumerate(self.root_orbits):
            f = self.rs.roots[orb.base]
            if all(c == 0 or (k + 1) in pi1_nodes for k, c in enumerate(f)):
                out.append(o)
        return tuple(out)

    def summary(self) -> dict:
        return {
            "order": self.order,
            "root_orbits": [
                {
                    "base": list(self.rs.roots[o.base]),
                    "length": o.length,
                    "p": o.p,
                }
                for o in self.root_orbits
            ],
            "node_orbits": [list(o) for o in self.node_orbits],
            "covered_roots": sum(o.length for o in self.root_orbits),
        }


def decompose_orbits(rs: RootSystem, lam: WeylElement, order: int,
                     node_orbits: tuple[tuple[int, ...], ...]) -> OrbitDecomposition:
    """Cover R by lambda-orbits.

    Bases are taken in ``rs.roots`` order; once the orbit of beta-bar is
    built, the orbit of -beta-bar (if new) gets base -beta-bar so that dual
    generators pair base with base.
    """
    perm = lam.root_permutation(rs)
    owner = [-1] * len(rs.roots)
    orbits: list[RootOrbit] = []

    def build(base: int) -> None:
        members = [base]
        k = perm[base]
        while k != base:
            members.append(k)
            k = perm[k]
        for m in members:
            owner[m] = len(orbits)
        orbits.append(RootOrbit(base, tuple(members), order))

    for i in range(len(rs.roots)):
        if owner[i] >= 0:
            continue
        build(i)
        neg = rs.negative_index(i)
        if owner[neg] < 0:
            build(neg)
    return OrbitDecomposition(
        rs=rs,
        order=order,
        root_perm=perm,
        root_orbits=tuple(orbits),
        node_orbits=node_orbits,
        orbit_of_root=tuple(owner),
    )
