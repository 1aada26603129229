"""
Local model C^3/(Z/2)^2 at a trident point: junior triangle, crepant triangulations, charts and flops
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Tuple

from sympy import Matrix

from errors import ToricError

Point = Tuple[int, int]
Triangle = FrozenSet[Point]

# Height-one cross-section of the positive octant in N = Z^3 + Z(1/2,1/2,0) + Z(0,1/2,1/2),
# rescaled so that e3, e1, e2 sit at (0,0), (2,0), (0,2).
VERTICES: Tuple[Point, ...] = ((0, 0), (2, 0), (0, 2))
MIDPOINTS: Tuple[Point, ...] = ((1, 0), (0, 1), (1, 1))
TRIANGLE_POINTS: Tuple[Point, ...] = VERTICES + MIDPOINTS
JUNIOR_AREA = 4
CENTRAL_TRIANGLE: Triangle = frozenset(MIDPOINTS)
EXPECTED_TRIANGULATIONS = 4

# Exponent vectors of a = x^2, b = y^2, c = z^2, d = xyz
INVARIANTS = {"a": (2, 0, 0), "b": (0, 2, 0), "c": (0, 0, 2), "d": (1, 1, 1)}


def _det(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _sub(p, q):
    return p[0] - q[0], p[1] - q[1]


def normalized_area(triangle) -> int:
    p, q, r = sorted(triangle)
    return abs(_det(_sub(q, p), _sub(r, p)))


def ray(point: Point) -> Tuple[Fraction, Fraction, Fraction]:
    """Lift a point of the cross-section to its ray generator in N."""
    x, y = Fraction(point[0], 2), Fraction(point[1], 2)
    return x, y, 1 - x - y


def point_of_ray(vector) -> Point:
    return int(vector[0] * 2), int(vector[1] * 2)


def in_dual_lattice(m) -> bool:
    """m pairs integrally with N iff all coordinates are integers of one parity."""
    return all(Fraction(v).denominator == 1 for v in m) and len({int(v) % 2 for v in m}) == 1


def render_triangle(triangle) -> str:
    return "{" + ",".join(f"({x},{y})" for x, y in sorted(triangle)) + "}"


def candidate_triangles() -> Tuple[Triangle, ...]:
    """All unimodular lattice triangles on the six points."""
    return tuple(frozenset(t) for t in itertools.combinations(TRIANGLE_POINTS, 3) if normalized_area(t) == 1)


def _separated(edge_owner, other) -> bool:
    points = sorted(edge_owner)
    for p, q in itertools.combinations(points, 2):
        (r,) = [v for v in points if v not in (p, q)]
        direction = _sub(q, p)
        side = _det(direction, _sub(r, p))
        if all(_det(direction, _sub(v, p)) * side <= 0 for v in other):
            return True
    return False


def interiors_disjoint(t1, t2) -> bool:
    return _separated(t1, t2) or _separated(t2, t1)


@dataclass(frozen=True)
class Triangulation:
    triangles: FrozenSet[Triangle]

    @property
    def is_central(self) -> bool:
        return CENTRAL_TRIANGLE in self.triangles

    @property
    def vertices(self) -> FrozenSet[Point]:
        return frozenset(p for t in self.triangles for p in t)

    def sorted_triangles(self):
        return sorted(self.triangles, key=lambda t: sorted(t))

    def render(self) -> str:
        return " ".join(render_triangle(t) for t in self.sorted_triangles())


def _check_triangulation(t: Triangulation):
    if sum(normalized_area(tri) for tri in t.triangles) != JUNIOR_AREA:
        raise ToricError(f"triangulation {t.render()} does not have total area {JUNIOR_AREA}")
    if t.vertices != frozenset(TRIANGLE_POINTS):
        raise ToricError(f"triangulation {t.render()} leaves a lattice point unused")
    if any(normalized_area(tri) != 1 for tri in t.triangles):
        raise ToricError(f"triangulation {t.render()} has a non-unimodular triangle")


def enumerate_crepant_triangulations() -> Tuple[Triangulation, ...]:
    """
    Exhaustive search over sets of unimodular triangles with disjoint interiors and full area.

    Returns:
        tuple: The crepant triangulations, central one first
    """
    candidates = candidate_triangles()
    found = []
    for subset in itertools.combinations(candidates, JUNIOR_AREA):
        if all(interiors_disjoint(a, b) for a, b in itertools.combinations(subset, 2)):
            t = Triangulation(frozenset(subset))
            _check_triangulation(t)
            found.append(t)
    if len(found) != EXPECTED_TRIANGULATIONS:
        logging.error(f"Found {len(found)} crepant triangulations")
        raise ToricError(f"expected {EXPECTED_TRIANGULATIONS} crepant triangulations, found {len(found)}")
    found.sort(key=lambda t: (not t.is_central, t.render()))
    return tuple(found)


def exceptional_divisor_count(t: Triangulation) -> int:
    """Rays strictly inside the cone: one exceptional divisor each."""
    return len(t.vertices - frozenset(VERTICES))


# --- S_3 symmetry ---

def permute_point(perm, point: Point) -> Point:
    """Permute the three coordinates of the ray of a point."""
    r = ray(point)
    moved = [None, None, None]
    for i in range(3):
        moved[perm[i]] = r[i]
    return point_of_ray(moved)


def act_on_triangulation(perm, t: Triangulation) -> Triangulation:
    return Triangulation(frozenset(frozenset(permute_point(perm, p) for p in tri) for tri in t.triangles))


def symmetry_orbits(triangulations):
    """Index orbits of the coordinate permutations on the list of triangulations."""
    index = {t: i for i, t in enumerate(triangulations)}
    orbits = []
    seen = set()
    for t in triangulations:
        if index[t] in seen:
            continue
        orbit = sorted({index[act_on_triangulation(perm, t)] for perm in itertools.permutations(range(3))})
        seen.update(orbit)
        orbits.append(tuple(orbit))
    return orbits


# --- Hilbert basis of the singularity ---

@dataclass(frozen=True)
class SingularityPresentation:
    hilbert_basis: Tuple[Tuple[int, int, int], ...]
    relation: str


def hilbert_basis():
    """Irreducible nonzero elements of the dual monoid (octant intersected with the dual lattice)."""
    box = [m for m in itertools.product(range(3), repeat=3) if any(m) and in_dual_lattice(m)]
    members = set(box)
    basis = []
    for m in box:
        reducible = any(
            tuple(x - y for x, y in zip(m, n)) in members for n in box if n != m
        )
        if not reducible:
            basis.append(m)
    return tuple(sorted(basis))


def singularity_presentation() -> SingularityPresentation:
    """
    C[x^2, y^2, z^2, xyz] = C[a,b,c,d]/(abc - d^2).

    Returns:
        SingularityPresentation: The verified Hilbert basis and relation
    """
    basis = hilbert_basis()
    expected = tuple(sorted(INVARIANTS.values()))
    if basis != expected:
        raise ToricError(f"Hilbert basis {basis} differs from {expected}")
    a, b, c, d = (INVARIANTS[k] for k in "abcd")
    if tuple(x + y + z for x, y, z in zip(a, b, c)) != tuple(2 * v for v in d):
        raise ToricError("exponents of abc and d^2 differ")
    return SingularityPresentation(basis, "abc = d^2")


# --- Charts and gluing ---

def monomial_in_invariants(m) -> Tuple[int, int, int, int]:
    """Exponents (alpha, beta, gamma, delta) with m = alpha a + beta b + gamma c + delta d, delta in {0, 1}."""
    if not in_dual_lattice(m):
        raise ToricError(f"exponent vector {m} is not a Laurent monomial in a, b, c, d")
    delta = int(m[0]) % 2
    alpha, beta, gamma = ((int(v) - delta) // 2 for v in m)
    return alpha, beta, gamma, delta


def render_monomial(exponents) -> str:
    parts = []
    for name, power in zip("abcd", exponents):
        if power == 1:
            parts.append(name)
        elif power:
            parts.append(f"{name}^{power}")
    return " ".join(parts) or "1"


@dataclass(frozen=True)
class ChartData:
    triangle: Triangle
    rays: Tuple[Point, ...]
    generators: Tuple[Tuple[int, int, int], ...]

    @property
    def monomials(self) -> Tuple[str, ...]:
        return tuple(render_monomial(monomial_in_invariants(m)) for m in self.generators)


@dataclass(frozen=True)
class Gluing:
    first: int
    second: int
    unit_pair: Tuple[str, str]
    shared: int


def chart(triangle) -> ChartData:
    """
    Dual basis of the cone over a triangle: generator i pairs to 1 with ray i and 0 with the others.

    Args:
        triangle (frozenset): Three points of the cross-section

    Returns:
        ChartData: The three monomial generators of the chart
    """
    rays = tuple(sorted(triangle))
    matrix = Matrix([list(ray(p)) for p in rays])
    if matrix.det() == 0:
        raise ToricError(f"degenerate cone over {render_triangle(triangle)}")
    dual = matrix.inv().T
    generators = []
    for i in range(3):
        m = tuple(Fraction(int(v.p), int(v.q)) for v in dual.row(i))
        if not in_dual_lattice(m):
            raise ToricError(f"cone over {render_triangle(triangle)} is not unimodular")
        generators.append(tuple(int(v) for v in m))
    return ChartData(frozenset(triangle), rays, tuple(generators))


def glue(first: ChartData, second: ChartData, i: int, j: int) -> Gluing:
    """Charts over triangles sharing an edge: the opposite generators are inverse units."""
    common = set(first.rays) & set(second.rays)
    if len(common) != 2:
        raise ToricError("gluing requested for charts that do not share an edge")
    (p,) = [r for r in first.rays if r not in common]
    (q,) = [r for r in second.rays if r not in common]
    u = first.generators[first.rays.index(p)]
    v = second.generators[second.rays.index(q)]
    if any(x + y for x, y in zip(u, v)):
        raise ToricError(f"gluing of charts {i} and {j} is not of unit form")
    for r in common:
        w1 = first.generators[first.rays.index(r)]
        w2 = second.generators[second.rays.index(r)]
        difference = [y - x for x, y in zip(w1, w2)]
        multiples = {Fraction(d, k) for d, k in zip(difference, u) if k}
        if any(d and not k for d, k in zip(difference, u)) or len(multiples) > 1 or \
                (multiples and multiples.pop().denominator != 1):
            raise ToricError(f"charts {i} and {j} disagree on the overlap")
    shared = len(set(first.generators) & set(second.generators))
    monomials = (render_monomial(monomial_in_invariants(u)), render_monomial(monomial_in_invariants(v)))
    return Gluing(i, j, monomials, shared)


def charts_and_gluing(t: Triangulation):
    """
    Charts of a triangulation and the gluing of every adjacent pair.

    Args:
        t (Triangulation): One of the enumerated triangulations

    Returns:
        tuple: (list of ChartData, list of Gluing)
    """
    triangles = t.sorted_triangles()
    charts = [chart(tri) for tri in triangles]
    gluings = []
    for i, j in itertools.combinations(range(len(triangles)), 2):
        if len(triangles[i] & triangles[j]) == 2:
            gluings.append(glue(charts[i], charts[j], i, j))
    return charts, gluings


def is_flip(t1: Triangulation, t2: Triangulation) -> bool:
    """t2 arises from t1 by exchanging the diagonal of one quadrilateral."""
    removed = t1.triangles - t2.triangles
    added = t2.triangles - t1.triangles
    if len(removed) != 2 or len(added) != 2:
        return False
    return frozenset().union(*removed) == frozenset().union(*added)


def flop_graph(triangulations=None):
    """
    Edges between triangulations related by one flip.

    Returns:
        list: Index pairs, the central triangulation has index 0
    """
    if triangulations is None:
        triangulations = enumerate_crepant_triangulations()
    edges = [(i, j) for i, j in itertools.combinations(range(len(triangulations)), 2)
             if is_flip(triangulations[i], triangulations[j])]
    degrees = [sum(1 for e in edges if k in e) for k in range(len(triangulations))]
    hub = [k for k, degree in enumerate(degrees) if degree == len(triangulations) - 1]
    if len(edges) != len(triangulations) - 1 or len(hub) != 1 or not triangulations[hub[0]].is_central:
        raise ToricError(f"flop graph {edges} is not a star around the central triangulation")
    return edges
