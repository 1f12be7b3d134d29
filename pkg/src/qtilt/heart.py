"""The derived-category layer: complexes of projectives, derived Hom, cones,
splitting, the tilted heart, Serre functor, and simple tops.

Every object of the bounded derived category is carried by a bounded complex
of projectives (cochain convention, diff[d]: term[d] -> term[d+1]). Because
the path algebra is hereditary, every complex splits as the direct sum of
its shifted cohomology; `split` computes that canonical form and most
membership tests run on it.

Terms are labeled direct sums of indecomposable projectives P_i; the labels
drive the Nakayama transport inside `serre`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import fieldlin as fl
from . import quiverrep as qr
from .catalog import IndecCatalog, Path_
from .errors import MathCheckError
from .quiverrep import Rep, RepMorphism

# ---------------------------------------------------------------------------
# Complexes


@dataclass(eq=False)
class PComplex:
    quiver: qr.Quiver
    p: int
    terms: dict[int, Rep]
    diffs: dict[int, RepMorphism]
    labels: dict[int, tuple[int, ...]] | None  # projective vertex labels per degree

    def __post_init__(self):
        for d, f in self.diffs.items():
            if d not in self.terms or (d + 1) not in self.terms:
                raise ValueError("differential outside the support")
        for d in self.terms:
            if d in self.diffs and (d + 1) in self.diffs:
                comp = self.diffs[d + 1].compose(self.diffs[d])
                if not comp.is_zero():
                    raise ValueError("d o d != 0")

    def term(self, d: int) -> Rep:
        if d in self.terms:
            return self.terms[d]
        return qr.zero_rep(self.quiver, self.p)

    def diff(self, d: int) -> RepMorphism:
        if d in self.diffs:
            return self.diffs[d]
        return qr.zero_morphism(self.term(d), self.term(d + 1))

    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def is_zero_object(self) -> bool:
        return not self.terms

    def total_dim(self) -> int:
        return sum(t.total_dim() for t in self.terms.values())


def zero_complex(q: qr.Quiver, p: int) -> PComplex:
    return PComplex(q, p, {}, {}, {})


def _prune(c: PComplex) -> PComplex:
    """Drop zero terms and zero-shaped differentials."""
    terms = {d: t for d, t in c.terms.items() if not t.is_zero()}
    diffs = {d: f for d, f in c.diffs.items() if d in terms and d + 1 in terms}
    labels = None
    if c.labels is not None:
        labels = {d: c.labels.get(d, ()) for d in terms}
    return PComplex(c.quiver, c.p, terms, diffs, labels)


def shift_complex(c: PComplex, k: int) -> PComplex:
    """C[k]: term[d] = C[d + k], differentials scaled by (-1)^k."""
    sign = 1 if k % 2 == 0 else -1
    terms = {d - k: t for d, t in c.terms.items()}
    diffs = {d - k: f.scale(sign % c.p) for d, f in c.diffs.items()}
    labels = None if c.labels is None else {d - k: l for d, l in c.labels.items()}
    return PComplex(c.quiver, c.p, terms, diffs, labels)


def direct_sum_complexes(parts: list[PComplex], q: qr.Quiver, p: int) -> PComplex:
    parts = [c for c in parts if not c.is_zero_object()]
    if not parts:
        return zero_complex(q, p)
    degrees = sorted({d for c in parts for d in c.terms})
    terms: dict[int, Rep] = {}
    diffs: dict[int, RepMorphism] = {}
    labels: dict[int, tuple[int, ...]] | None = {}
    if any(c.labels is None for c in parts):
        labels = None
    for d in degrees:
        summands = [c.term(d) for c in parts]
        total, _, _ = qr.direct_sum_reps(summands)
        terms[d] = total
        if labels is not None:
            lab: tuple[int, ...] = ()
            for c in parts:
                lab += c.labels.get(d, ()) if c.labels is not None else ()
            labels[d] = lab
    for d in degrees:
        if d + 1 not in terms:
            continue
        blocks = []
        for v in range(q.n_vertices):
            mats = [c.diff(d).blocks[v] for c in parts]
            rows = sum(m.shape[0] for m in mats)
            cols = sum(m.shape[1] for m in mats)
            blk = fl.zeros(rows, cols)
            ro = co = 0
            for m in mats:
                blk[ro : ro + m.shape[0], co : co + m.shape[1]] = m
                ro += m.shape[0]
                co += m.shape[1]
            blocks.append(blk)
        diff = RepMorphism(terms[d], terms[d + 1], tuple(blocks))
        if not diff.is_zero():
            diffs[d] = diff
    return _prune(PComplex(q, p, terms, diffs, labels))


# ---------------------------------------------------------------------------
# Projective covers and minimal resolutions


def _apply_path(m: Rep, i: int, path: Path_) -> np.ndarray:
    acc = fl.eye(m.dims[i])
    for a in path:
        acc = (m.maps[a] @ acc) % m.p
    return acc


def projective_cover(cat: IndecCatalog, m: Rep) -> tuple[tuple[int, ...], Rep, RepMorphism]:
    """(labels, P, epi) with P = direct sum of path-basis P_i covering m minimally."""
    q, p = cat.quiver, cat.p
    lifts: list[tuple[int, np.ndarray]] = []
    for v in range(q.n_vertices):
        rad_cols = [fl.zeros(m.dims[v], 0)]
        for a in q.arrows_into(v):
            rad_cols.append(m.maps[a])
        rad = fl.column_space(np.hstack(rad_cols), p)
        reps = fl.quotient_reps(fl.eye(m.dims[v]), rad, p)
        for k in range(reps.shape[1]):
            lifts.append((v, reps[:, k : k + 1]))
    labels = tuple(v for v, _ in lifts)
    summands = [cat.proj_model(v) for v, _ in lifts]
    if not summands:
        zero = qr.zero_rep(q, p)
        return (), zero, qr.zero_morphism(zero, m)
    total, _, _ = qr.direct_sum_reps(summands)
    blocks = [fl.zeros(m.dims[j], total.dims[j]) for j in range(q.n_vertices)]
    col_off = [0] * q.n_vertices
    for (v, u), summand in zip(lifts, summands):
        paths = cat.proj_paths(v)
        for j in range(q.n_vertices):
            for k, pth in enumerate(paths[j]):
                vec = (_apply_path(m, v, pth) @ u) % p
                blocks[j][:, col_off[j] + k] = vec[:, 0]
            col_off[j] += summand.dims[j]
    epi = RepMorphism(total, m, tuple(b % p for b in blocks))
    for j in range(q.n_vertices):
        if fl.rank(epi.blocks[j], p) != m.dims[j]:
            raise MathCheckError("projective cover failed to be surjective")
    return labels, total, epi


def resolve_module(cat: IndecCatalog, m: Rep) -> PComplex:
    """Minimal two-term complex of projectives quasi-isomorphic to m (degrees -1, 0)."""
    q, p = cat.quiver, cat.p
    if m.is_zero():
        return zero_complex(q, p)
    labels0, p0, epi = projective_cover(cat, m)
    k, incl = qr.kernel(epi)
    if k.is_zero():
        return PComplex(q, p, {0: p0}, {}, {0: labels0})
    labels1, p1, epi_k = projective_cover(cat, k)
    if p1.dims != k.dims:
        raise MathCheckError("kernel of a cover is not projective (algebra not hereditary?)")
    diff = incl.compose(epi_k)
    return PComplex(q, p, {-1: p1, 0: p0}, {-1: diff}, {-1: labels1, 0: labels0})


class HeartContext:
    """Caches resolutions per catalog index."""

    def __init__(self, cat: IndecCatalog):
        self.cat = cat
        self._resolved: dict[int, PComplex] = {}

    def resolve_index(self, i: int) -> PComplex:
        if i not in self._resolved:
            self._resolved[i] = resolve_module(self.cat, self.cat.indecs[i])
        return self._resolved[i]

    def object(self, i: int, shift: int = 0) -> PComplex:
        c = self.resolve_index(i)
        return shift_complex(c, shift) if shift else c


# ---------------------------------------------------------------------------
# Chain maps and mapping cones


@dataclass(eq=False)
class ChainMap:
    source: PComplex
    target: PComplex
    blocks: dict[int, RepMorphism]  # degree d -> source.term(d) -> target.term(d)

    def __post_init__(self):
        for d in set(self.source.terms) | set(self.target.terms):
            lhs = self.target.diff(d).compose(self.block(d))
            rhs = self.block(d + 1).compose(self.source.diff(d))
            for v in range(self.source.quiver.n_vertices):
                if not np.array_equal(lhs.blocks[v] % self.source.p, rhs.blocks[v] % self.source.p):
                    raise ValueError(f"chain map does not commute with d at degree {d}")

    @property
    def quiver(self):
        return self.source.quiver

    def block(self, d: int) -> RepMorphism:
        if d in self.blocks:
            return self.blocks[d]
        return qr.zero_morphism(self.source.term(d), self.target.term(d))

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        blocks = {}
        for d in set(self.blocks) | set(other.blocks):
            blk = self.block(d).compose(other.block(d))
            if not blk.is_zero():
                blocks[d] = blk
        return ChainMap(other.source, self.target, blocks)

    def add(self, other: "ChainMap") -> "ChainMap":
        blocks = {}
        for d in set(self.blocks) | set(other.blocks):
            blk = self.block(d).add(other.block(d))
            if not blk.is_zero():
                blocks[d] = blk
        return ChainMap(self.source, self.target, blocks)

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {d: b.scale(c) for d, b in self.blocks.items()})

    def shift(self, k: int) -> "ChainMap":
        src = shift_complex(self.source, k)
        tgt = shift_complex(self.target, k)
        return ChainMap(src, tgt, {d - k: b for d, b in self.blocks.items()})


def identity_chain_map(c: PComplex) -> ChainMap:
    return ChainMap(c, c, {d: qr.identity_morphism(t) for d, t in c.terms.items()})


def zero_chain_map(x: PComplex, y: PComplex) -> ChainMap:
    return ChainMap(x, y, {})


def cone(f: ChainMap) -> PComplex:
    """Mapping cone: term[d] = X[d+1] (+) Y[d], d(x, y) = (-dx, f x + dy)."""
    x, y = f.source, f.target
    q, p = x.quiver, x.p
    degrees = sorted({d - 1 for d in x.terms} | set(y.terms))
    degrees = [d for d in degrees if not (x.term(d + 1).is_zero() and y.term(d).is_zero())]
    terms: dict[int, Rep] = {}
    labels: dict[int, tuple[int, ...]] | None = (
        {} if (x.labels is not None and y.labels is not None) else None
    )
    for d in degrees:
        total, _, _ = qr.direct_sum_reps([x.term(d + 1), y.term(d)])
        terms[d] = total
        if labels is not None:
            labels[d] = x.labels.get(d + 1, ()) + y.labels.get(d, ())
    diffs: dict[int, RepMorphism] = {}
    for d in degrees:
        if d + 1 not in terms:
            continue
        xs, ys = x.term(d + 1), y.term(d)
        xt, yt = x.term(d + 2), y.term(d + 1)
        blocks = []
        for v in range(q.n_vertices):
            rows = xt.dims[v] + yt.dims[v]
            cols = xs.dims[v] + ys.dims[v]
            blk = fl.zeros(rows, cols)
            blk[: xt.dims[v], : xs.dims[v]] = (-x.diff(d + 1).blocks[v]) % p
            blk[xt.dims[v] :, : xs.dims[v]] = f.block(d + 1).blocks[v]
            blk[xt.dims[v] :, xs.dims[v] :] = y.diff(d).blocks[v]
            blocks.append(blk)
        diff = RepMorphism(terms[d], terms[d + 1], tuple(blocks))
        if not diff.is_zero():
            diffs[d] = diff
    return _prune(PComplex(q, p, terms, diffs, labels))


def cone_inclusion(f: ChainMap, c: PComplex | None = None) -> ChainMap:
    """The canonical map Y -> cone(f)."""
    c = cone(f) if c is None else c
    x, y = f.source, f.target
    blocks = {}
    for d, t in y.terms.items():
        if d not in c.terms:
            continue
        blk = []
        for v in range(y.quiver.n_vertices):
            m = fl.zeros(c.terms[d].dims[v], t.dims[v])
            off = x.term(d + 1).dims[v]
            m[off : off + t.dims[v], :] = fl.eye(t.dims[v])
            blk.append(m)
        blocks[d] = RepMorphism(t, c.terms[d], tuple(blk))
    return ChainMap(y, c, blocks)


def cone_projection(f: ChainMap, c: PComplex | None = None) -> ChainMap:
    """The canonical map cone(f) -> X[1]."""
    c = cone(f) if c is None else c
    x = f.source
    x1 = shift_complex(x, 1)
    blocks = {}
    for d in c.terms:
        t = x1.term(d)
        if t.is_zero():
            continue
        blk = []
        for v in range(x.quiver.n_vertices):
            m = fl.zeros(t.dims[v], c.terms[d].dims[v])
            m[:, : t.dims[v]] = fl.eye(t.dims[v])
            blk.append(m)
        blocks[d] = RepMorphism(c.terms[d], t, tuple(blk))
    return ChainMap(c, x1, blocks)


# ---------------------------------------------------------------------------
# Cohomology and canonical splitting


def cohomology(c: PComplex, i: int) -> Rep:
    """H^i(c) as a representation."""
    return _cohomology_with_maps(c, i)[0]


def _cohomology_with_maps(c: PComplex, i: int) -> tuple[Rep, RepMorphism, RepMorphism]:
    """(H, z_incl, h_proj): Z^i -> term_i inclusion and Z^i -> H^i projection."""
    term = c.term(i)
    if term.is_zero():
        z = qr.zero_rep(c.quiver, c.p)
        return z, qr.zero_morphism(z, term), qr.zero_morphism(z, z)
    if i in c.diffs:
        z, z_incl = qr.kernel(c.diffs[i])
    else:
        z, z_incl = term, qr.identity_morphism(term)
    if (i - 1) in c.diffs:
        b, b_incl = qr.image(c.diffs[i - 1])
        # express B inside Z
        blocks = []
        for v in range(c.quiver.n_vertices):
            sol = fl.solve(z_incl.blocks[v], b_incl.blocks[v], c.p)
            if sol is None:
                raise MathCheckError("image not contained in kernel (d o d != 0?)")
            blocks.append(sol)
        b_in_z = RepMorphism(b, z, tuple(blocks))
        h, proj = qr.cokernel(b_in_z)
        return h, z_incl, proj
    return z, z_incl, qr.identity_morphism(z)


@dataclass(eq=False)
class SplitObject:
    """Canonical form (+) M[s] of a derived object over a hereditary category."""

    summands: tuple[tuple[Rep, int], ...]  # (module, shift), modules nonzero

    def is_zero(self) -> bool:
        return not self.summands

    def shifts(self) -> set[int]:
        return {s for _, s in self.summands}

    def part(self, shift: int) -> list[Rep]:
        return [m for m, s in self.summands if s == shift]

    def total_dim(self) -> int:
        return sum(m.total_dim() for m, _ in self.summands)


def split(c: PComplex) -> SplitObject:
    """C ~ (+)_i H^i(C)[-i]; legitimate because the algebra is hereditary."""
    out = []
    for i in c.degrees():
        h = cohomology(c, i)
        if not h.is_zero():
            out.append((h, -i))
    return SplitObject(tuple(out))


def split_decomposed(c: PComplex, cat: IndecCatalog) -> list[tuple[int, int, int]]:
    """Split and decompose: list of (catalog index, shift, multiplicity)."""
    out = []
    for m, s in split(c).summands:
        for idx, mult in sorted(qr.decompose(m, cat).items()):
            out.append((idx, s, mult))
    return out


# ---------------------------------------------------------------------------
# Derived Hom: chain maps modulo homotopy


class DerivedHom:
    """Hom_{D^b}(X, Y[n]) presented by chain-map representatives.

    X must be a bounded complex of projectives, so chain maps modulo homotopy
    compute morphisms in the derived category.
    """

    def __init__(self, x: PComplex, y: PComplex, n: int):
        self.x, self.y, self.n = x, y, n
        self.p = x.p
        self.target = shift_complex(y, n) if n else y  # chain maps land here
        q = x.quiver
        self._layout: dict[tuple[int, int], tuple[int, int, int]] = {}  # (deg, v) -> rows, cols, off
        pos = 0
        for d in x.degrees():
            yt = self.target.term(d)
            if yt.is_zero():
                continue
            xt = x.term(d)
            for v in range(q.n_vertices):
                rows, cols = yt.dims[v], xt.dims[v]
                if rows * cols:
                    self._layout[(d, v)] = (rows, cols, pos)
                    pos += rows * cols
        self._size = pos
        constraints = self._constraint_matrix()
        zbasis = fl.nullspace(constraints, self.p) if pos else fl.zeros(0, 0)
        bvecs = self._boundary_vectors()
        if bvecs.shape[1]:
            bcoords = fl.solve(zbasis, bvecs, self.p)
            if bcoords is None:
                raise MathCheckError("null-homotopic maps are not chain maps (bug)")
            bcoords = fl.column_space(bcoords, self.p)
        else:
            bcoords = fl.zeros(zbasis.shape[1], 0)
        self._zbasis = zbasis
        self._bcoords = bcoords
        self._repcoords = fl.quotient_reps(fl.eye(zbasis.shape[1]), bcoords, self.p)
        self.dim = self._repcoords.shape[1]

    # -- linear-algebra plumbing --------------------------------------------

    def _offset(self, d: int, v: int) -> tuple[int, int, int] | None:
        return self._layout.get((d, v))

    def _constraint_matrix(self) -> np.ndarray:
        q = self.x.quiver
        rows_list: list[np.ndarray] = []
        # intertwining within each degree
        for d in self.x.degrees():
            xt, yt = self.x.term(d), self.target.term(d)
            if yt.is_zero():
                continue
            for a, (s, t) in enumerate(q.arrows):
                nrows = yt.dims[t] * xt.dims[s]
                if nrows == 0:
                    continue
                row = fl.zeros(nrows, self._size)
                loc_s = self._offset(d, s)
                if loc_s:
                    rs, cs, off = loc_s
                    row[:, off : off + rs * cs] += np.kron(yt.maps[a], fl.eye(xt.dims[s]))
                loc_t = self._offset(d, t)
                if loc_t:
                    rt, ct, off = loc_t
                    row[:, off : off + rt * ct] -= np.kron(fl.eye(yt.dims[t]), xt.maps[a].T)
                rows_list.append(row % self.p)
        # commuting with the differentials (target carries the shift sign)
        for d in self.x.degrees():
            xt = self.x.term(d)
            ytn = self.target.term(d + 1)
            if ytn.is_zero():
                continue
            dy = self.target.diff(d)
            dx = self.x.diff(d)
            for v in range(q.n_vertices):
                nrows = ytn.dims[v] * xt.dims[v]
                if nrows == 0:
                    continue
                row = fl.zeros(nrows, self._size)
                loc = self._offset(d, v)
                if loc:
                    rs, cs, off = loc
                    row[:, off : off + rs * cs] += np.kron(dy.blocks[v], fl.eye(xt.dims[v]))
                loc1 = self._offset(d + 1, v)
                if loc1:
                    rs, cs, off = loc1
                    row[:, off : off + rs * cs] -= np.kron(fl.eye(ytn.dims[v]), dx.blocks[v].T)
                rows_list.append(row % self.p)
        if not rows_list:
            return fl.zeros(0, self._size)
        return np.vstack(rows_list) % self.p

    def _boundary_vectors(self) -> np.ndarray:
        """Vectors d_T h + h d_X over a basis of degreewise morphisms h."""
        cols = []
        for d in self.x.degrees():
            tprev = self.target.term(d - 1)
            if tprev.is_zero():
                continue
            for g in qr.hom_ext(self.x.term(d), tprev).hom_basis:
                vec = np.zeros(self._size, dtype=np.int64)
                dg = self.target.diff(d - 1).compose(g)  # into target^d
                self._accumulate(vec, d, dg)
                if (d - 1) in self.x.terms:
                    gd = g.compose(self.x.diff(d - 1))  # X^{d-1} -> target^{d-1}
                    self._accumulate(vec, d - 1, gd)
                cols.append(vec % self.p)
        if not cols:
            return fl.zeros(self._size, 0)
        return np.stack(cols, axis=1)

    def _accumulate(self, vec: np.ndarray, d: int, g: RepMorphism):
        for v in range(self.x.quiver.n_vertices):
            loc = self._offset(d, v)
            if loc is None:
                if g.blocks[v].any():
                    raise MathCheckError("boundary leaves the chain-map layout")
                continue
            rows, cols, off = loc
            vec[off : off + rows * cols] += g.blocks[v].reshape(-1)

    def _vec_to_chain_map(self, vec: np.ndarray) -> ChainMap:
        blocks: dict[int, RepMorphism] = {}
        for d in self.x.degrees():
            yt = self.target.term(d)
            xt = self.x.term(d)
            mats = []
            for v in range(self.x.quiver.n_vertices):
                loc = self._offset(d, v)
                if loc is None:
                    mats.append(fl.zeros(yt.dims[v], xt.dims[v]))
                else:
                    rows, cols, off = loc
                    mats.append(vec[off : off + rows * cols].reshape(rows, cols) % self.p)
            mor = RepMorphism(xt, yt, tuple(mats))
            if not mor.is_zero():
                blocks[d] = mor
        return ChainMap(self.x, self.target, blocks)

    def _chain_map_to_vec(self, f: ChainMap) -> np.ndarray:
        vec = np.zeros(self._size, dtype=np.int64)
        for d, mor in f.blocks.items():
            self._accumulate(vec, d, mor)
        return vec % self.p

    # -- public surface -------------------------------------------------------

    def basis(self) -> list[ChainMap]:
        out = []
        for k in range(self.dim):
            coords = self._repcoords[:, k : k + 1]
            vec = (self._zbasis @ coords) % self.p
            out.append(self._vec_to_chain_map(vec[:, 0]))
        return out

    def class_coordinates(self, f: ChainMap) -> np.ndarray:
        """Coordinates of [f] over the representative basis."""
        vec = self._chain_map_to_vec(f).reshape(-1, 1)
        if self._zbasis.shape[1] == 0:
            if vec.any():
                raise ValueError("not a chain map in this Hom space")
            return np.zeros(0, dtype=np.int64)
        z = fl.solve(self._zbasis, vec, self.p)
        if z is None:
            raise ValueError("not a chain map in this Hom space")
        full = np.hstack([self._repcoords, self._bcoords])
        sol = fl.solve(full, z, self.p)
        if sol is None:
            raise MathCheckError("class decomposition failed (bug)")
        return sol[: self.dim, 0]

    def is_null_homotopic(self, f: ChainMap) -> bool:
        coords = self.class_coordinates(f)
        return not coords.any()

    def element(self, coeffs) -> ChainMap:
        """The representative chain map with the given class coordinates."""
        coords = np.asarray(coeffs, dtype=np.int64).reshape(-1, 1) % self.p
        vec = (self._zbasis @ (self._repcoords @ coords)) % self.p
        return self._vec_to_chain_map(vec[:, 0])


def derived_hom(x: PComplex, y: PComplex, n: int) -> DerivedHom:
    return DerivedHom(x, y, n)


# ---------------------------------------------------------------------------
# Heart membership and epi/mono tests
#
# The tilted heart of the pair (T, F) consists of the split objects with
# torsion shift-0 part and torsion-free shift-1 part.


def _part_in_mask(split_obj: SplitObject, shift: int, mask: int, cat: IndecCatalog) -> bool:
    for m in split_obj.part(shift):
        for idx in qr.decompose(m, cat):
            if not mask >> idx & 1:
                return False
    return True


def in_heart(c: PComplex, cat: IndecCatalog, tmask: int, fmask: int) -> bool:
    s = split(c)
    if not s.shifts() <= {0, 1}:
        return False
    return _part_in_mask(s, 0, tmask, cat) and _part_in_mask(s, 1, fmask, cat)


def in_aisle(c: PComplex, cat: IndecCatalog, tmask: int) -> bool:
    s = split(c)
    if any(sh < 0 for sh in s.shifts()):
        return False
    return _part_in_mask(s, 0, tmask, cat)


def is_epi_in_heart(f: ChainMap, cat: IndecCatalog, tmask: int, fmask: int) -> bool:
    """Epi in the heart iff cone(f) lies in B[1]."""
    s = split(cone(f))
    if not s.shifts() <= {1, 2}:
        return False
    return _part_in_mask(s, 1, tmask, cat) and _part_in_mask(s, 2, fmask, cat)


def is_mono_in_heart(f: ChainMap, cat: IndecCatalog, tmask: int, fmask: int) -> bool:
    """Mono in the heart iff cone(f) lies in B."""
    s = split(cone(f))
    if not s.shifts() <= {0, 1}:
        return False
    return _part_in_mask(s, 0, tmask, cat) and _part_in_mask(s, 1, fmask, cat)


def heart_indecomposables(tmask: int, fmask: int) -> list[tuple[int, int]]:
    """(catalog index, shift) pairs, torsion part first; deterministic order."""
    from .torsion import mask_indices

    return [(i, 0) for i in mask_indices(tmask)] + [(i, 1) for i in mask_indices(fmask)]


def dim_hom_shifted(cat: IndecCatalog, i: int, si: int, j: int, sj: int, n: int = 0) -> int:
    """dim Hom(M_i[si], M_j[sj][n]) from the cached tables."""
    k = sj - si + n
    if k == 0:
        return cat.hom_table[i][j]
    if k == 1:
        return cat.ext_table[i][j]
    return 0


# ---------------------------------------------------------------------------
# Serre functor


def _phi_injective_block(cat: IndecCatalog, i: int, j: int, path: Path_) -> RepMorphism:
    """The morphism I_i -> I_j induced by a path j -> i under Nakayama transport."""
    q, p = cat.quiver, cat.p
    src, src_paths = cat.inj_model(i), cat.inj_paths(i)
    tgt, tgt_paths = cat.inj_model(j), cat.inj_paths(j)
    blocks = []
    for v in range(q.n_vertices):
        m = fl.zeros(tgt.dims[v], src.dims[v])
        for col, qpath in enumerate(src_paths[v]):
            for row, qq in enumerate(tgt_paths[v]):
                if qq + path == qpath:
                    m[row, col] = 1
        blocks.append(m)
    return RepMorphism(src, tgt, tuple(blocks))


def _psi_coefficients(cat: IndecCatalog, i: int, j: int, block: np.ndarray) -> list[tuple[Path_, int]]:
    """Express a morphism P_i -> P_j by the images of the generator of P_i.

    The block is the vertex-i component; its single generator column lists
    the coefficients over paths j -> i.
    """
    paths_ji = cat.proj_paths(j)[i]
    gen_col = block[:, 0]
    return [(pth, int(gen_col[k])) for k, pth in enumerate(paths_ji) if gen_col[k]]


def _term_vertex_offsets(cat: IndecCatalog, labels: tuple[int, ...], injective: bool) -> list[list[int]]:
    """Per summand, per vertex: starting row of the summand inside the term."""
    offs = []
    pos = [0] * cat.quiver.n_vertices
    for lab in labels:
        rep_ = cat.inj_model(lab) if injective else cat.proj_model(lab)
        offs.append(list(pos))
        for v in range(cat.quiver.n_vertices):
            pos[v] += rep_.dims[v]
    return offs


def nakayama_complex(cat: IndecCatalog, c: PComplex) -> PComplex:
    """Apply the Nakayama functor termwise: P_i -> I_i, morphisms by path transport."""
    if c.labels is None:
        raise ValueError("Nakayama transport needs labeled projective terms")
    q, p = cat.quiver, cat.p
    terms: dict[int, Rep] = {}
    for d, labels in c.labels.items():
        if not labels:
            continue
        total, _, _ = qr.direct_sum_reps([cat.inj_model(v) for v in labels])
        terms[d] = total
    diffs: dict[int, RepMorphism] = {}
    for d in c.diffs:
        src_labels, tgt_labels = c.labels[d], c.labels[d + 1]
        src_offs = _term_vertex_offsets(cat, src_labels, injective=False)
        tgt_offs = _term_vertex_offsets(cat, tgt_labels, injective=False)
        isrc_offs = _term_vertex_offsets(cat, src_labels, injective=True)
        itgt_offs = _term_vertex_offsets(cat, tgt_labels, injective=True)
        blocks = [fl.zeros(terms[d + 1].dims[v], terms[d].dims[v]) for v in range(q.n_vertices)]
        for ks, i in enumerate(src_labels):
            for kt, j in enumerate(tgt_labels):
                col0 = src_offs[ks][i]
                row0 = tgt_offs[kt][i]
                pj_i = cat.proj_model(j).dims[i]
                sub = c.diffs[d].blocks[i][row0 : row0 + pj_i,
                                           col0 : col0 + cat.proj_model(i).dims[i]]
                for path, coeff in _psi_coefficients(cat, i, j, sub):
                    phi = _phi_injective_block(cat, i, j, path)
                    for v in range(q.n_vertices):
                        r0 = itgt_offs[kt][v]
                        c0 = isrc_offs[ks][v]
                        blocks[v][r0 : r0 + phi.blocks[v].shape[0],
                                  c0 : c0 + phi.blocks[v].shape[1]] += coeff * phi.blocks[v]
        diffs[d] = RepMorphism(terms[d], terms[d + 1],
                               tuple(b % p for b in blocks))
    return _prune(PComplex(q, p, terms, diffs, None))


def serre(cat: IndecCatalog, c: PComplex) -> PComplex:
    """The Serre functor: Nakayama termwise, then re-resolve to projectives."""
    nu = nakayama_complex(cat, c)
    parts = []
    for i in nu.degrees():
        h = cohomology(nu, i)
        if not h.is_zero():
            parts.append(shift_complex(resolve_module(cat, h), -i))
    return direct_sum_complexes(parts, cat.quiver, cat.p)


def serre_split(cat: IndecCatalog, hctx: HeartContext, i: int, shift: int = 0) -> list[tuple[int, int, int]]:
    """split(serre(M_i[shift])) decomposed into catalog pieces."""
    sx = serre(cat, hctx.object(i, shift))
    return split_decomposed(sx, cat)


# ---------------------------------------------------------------------------
# Simple tops of Ext-projectives


@dataclass(eq=False)
class SimpleTopCertificate:
    e_index: int
    top: tuple[int, int]  # (catalog index, shift)
    epi: ChainMap
    kernel_split: list[tuple[int, int, int]]
    scanned: int  # number of (object, map) pairs checked during the simplicity scan


def _nonzero_class_maps(dh: DerivedHom, p: int):
    if dh.dim == 0:
        return
    for coeffs in product(range(p), repeat=dh.dim):
        if any(coeffs):
            yield dh.element(coeffs)


def simple_top(
    cat: IndecCatalog,
    hctx: HeartContext,
    tmask: int,
    fmask: int,
    e_index: int,
    e_shift: int = 0,
) -> SimpleTopCertificate:
    """The simple quotient of an indecomposable Ext-projective in the heart.

    Scans heart indecomposables for an epimorphism out of E, then certifies
    simplicity: every nonzero incoming map from a heart indecomposable is an
    epimorphism.
    """
    p = cat.p
    e = hctx.object(e_index, e_shift)
    candidates = heart_indecomposables(tmask, fmask)
    scanned = 0
    for idx, sh in candidates:
        if dim_hom_shifted(cat, e_index, e_shift, idx, sh) == 0:
            continue
        target = hctx.object(idx, sh)
        dh = derived_hom(e, target, 0)
        epi = None
        for f in _nonzero_class_maps(dh, p):
            scanned += 1
            if is_epi_in_heart(f, cat, tmask, fmask):
                epi = f
                break
        if epi is None:
            continue
        simple = True
        for jdx, jsh in candidates:
            if dim_hom_shifted(cat, jdx, jsh, idx, sh) == 0:
                continue
            source = hctx.object(jdx, jsh)
            for g in _nonzero_class_maps(derived_hom(source, target, 0), p):
                scanned += 1
                if not is_epi_in_heart(g, cat, tmask, fmask):
                    simple = False
                    break
            if not simple:
                break
        if simple:
            ker = shift_complex(cone(epi), -1)
            return SimpleTopCertificate(
                e_index, (idx, sh), epi, split_decomposed(ker, cat), scanned
            )
    raise MathCheckError(
        f"no simple top found for Ext-projective {e_index}; "
        "existence is guaranteed for Serre-closed pairs"
    )


# ---------------------------------------------------------------------------
# Constructive splitting: sections, projections, lifted module maps
#
# split() only produces the cohomology objects; the reduction machinery also
# needs the isomorphism C ~ (+) H^i(C)[-i] as explicit chain maps, to build
# truncation maps out of cones.


@dataclass(eq=False)
class SplitPiece:
    module: Rep
    shift: int            # the piece is module[shift]
    complex: PComplex     # shift_complex(resolve(module), shift)
    section: ChainMap     # piece complex -> C, inducing the identity on H^{-shift}


def _solve_morphism_equation(
    space_src: Rep, space_tgt: Rep, post: RepMorphism, rhs: RepMorphism
) -> RepMorphism | None:
    """Find g: space_src -> space_tgt with post o g = rhs, if possible."""
    p = space_src.p
    basis = qr.hom_ext(space_src, space_tgt).hom_basis
    if not basis:
        return None if not rhs.is_zero() else qr.zero_morphism(space_src, space_tgt)
    cols = [np.concatenate([post.compose(g).blocks[v].reshape(-1)
                            for v in range(space_src.quiver.n_vertices)])
            for g in basis]
    target = np.concatenate([rhs.blocks[v].reshape(-1)
                             for v in range(space_src.quiver.n_vertices)])
    mat = np.stack(cols, axis=1) if cols else fl.zeros(len(target), 0)
    sol = fl.solve(mat % p, target.reshape(-1, 1) % p, p)
    if sol is None:
        return None
    g = qr.zero_morphism(space_src, space_tgt)
    for c, b in zip(sol[:, 0], basis):
        g = g.add(b.scale(int(c)))
    return g


def split_with_sections(cat: IndecCatalog, c: PComplex) -> list[SplitPiece]:
    """Explicit pieces of the canonical splitting C ~ (+) H^i(C)[-i]."""
    pieces: list[SplitPiece] = []
    for i in c.degrees():
        h, z_incl, h_proj = _cohomology_with_maps(c, i)
        if h.is_zero():
            continue
        res = resolve_module(cat, h)
        piece = shift_complex(res, -i)
        # lift the cover epi P0 ->> H through the cycle space Z^i <= C^i
        _, p0, eps = projective_cover(cat, h)
        u0_into_z = _solve_morphism_equation(p0, z_incl.source, h_proj, eps)
        if u0_into_z is None:
            raise MathCheckError("projective lift through the cycle space failed")
        u0 = z_incl.compose(u0_into_z)
        blocks = {i: u0}
        if (-1) in res.terms:
            p1 = res.term(-1)
            rhs = u0.compose(res.diffs[-1])  # P1 -> C^i, lands in the boundaries
            if (i - 1) in c.terms:
                u1 = _solve_morphism_equation(p1, c.term(i - 1), c.diff(i - 1), rhs)
                if u1 is None:
                    raise MathCheckError("projective lift onto boundaries failed")
                blocks[i - 1] = u1
            elif not rhs.is_zero():
                raise MathCheckError("section leaks outside the complex support")
        # the shifted piece carries sign-twisted differentials; twist the
        # off-degree block to keep the square commuting
        sign = 1 if i % 2 == 0 else -1
        section = ChainMap(piece, c, {d: blocks[d].scale(sign if d != i else 1)
                                      for d in blocks})
        pieces.append(SplitPiece(h, -i, piece, section))
    return pieces


def homotopy_projections(cat: IndecCatalog, c: PComplex,
                         pieces: list[SplitPiece]) -> list[ChainMap]:
    """Chain maps rho_i: C -> piece_i with rho_i o sigma_j ~ delta_ij id."""
    p = c.p
    out: list[ChainMap] = []
    for i, target_piece in enumerate(pieces):
        dh = derived_hom(c, target_piece.complex, 0)
        if dh.dim == 0:
            raise MathCheckError("no candidate projection (splitting failed)")
        rows = []
        rhs = []
        for j, src_piece in enumerate(pieces):
            pair_dh = derived_hom(src_piece.complex, target_piece.complex, 0)
            if pair_dh.dim == 0:
                continue
            want = np.zeros(pair_dh.dim, dtype=np.int64)
            if i == j:
                want = pair_dh.class_coordinates(identity_chain_map(target_piece.complex))
            cols = [
                pair_dh.class_coordinates(dh.element(_unit(dh.dim, k)).compose(src_piece.section))
                for k in range(dh.dim)
            ]
            rows.append(np.stack(cols, axis=1) if cols else fl.zeros(pair_dh.dim, 0))
            rhs.append(want)
        mat = np.vstack(rows) % p
        vec = np.concatenate(rhs).reshape(-1, 1) % p
        sol = fl.solve(mat, vec, p)
        if sol is None:
            raise MathCheckError("homotopy projection system unsolvable (splitting failed)")
        out.append(dh.element(sol[:, 0]))
    return out


def _unit(n: int, k: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[k] = 1
    return v


def lift_module_map(cat: IndecCatalog, phi: RepMorphism,
                    src_res: PComplex, tgt_res: PComplex) -> ChainMap:
    """A chain map between minimal resolutions inducing phi on H^0."""
    blocks: dict[int, RepMorphism] = {}
    if 0 not in src_res.terms:
        return zero_chain_map(src_res, tgt_res)
    if 0 not in tgt_res.terms:
        if not phi.is_zero():
            raise MathCheckError("cannot lift a nonzero map into the zero complex")
        return zero_chain_map(src_res, tgt_res)
    _, p0s, eps_s = projective_cover(cat, phi.source)
    _, p0t, eps_t = projective_cover(cat, phi.target)
    u0 = _solve_morphism_equation(p0s, p0t, eps_t, phi.compose(eps_s))
    if u0 is None:
        raise MathCheckError("projectivity lift failed (cover mismatch)")
    blocks[0] = u0
    if (-1) in src_res.terms:
        rhs = u0.compose(src_res.diffs[-1])
        if (-1) in tgt_res.terms:
            sol_blocks = []
            for v in range(phi.source.quiver.n_vertices):
                sol = fl.solve(tgt_res.diffs[-1].blocks[v], rhs.blocks[v], cat.p)
                if sol is None:
                    raise MathCheckError("kernel lift failed")
                sol_blocks.append(sol)
            blocks[-1] = RepMorphism(src_res.term(-1), tgt_res.term(-1), tuple(sol_blocks))
        elif not rhs.is_zero():
            raise MathCheckError("lift leaks outside the target resolution")
    return ChainMap(src_res, tgt_res, blocks)


# ---------------------------------------------------------------------------
# Packing maps into and out of direct sums


def pack_into_sum(maps: list[ChainMap]) -> tuple[PComplex, ChainMap]:
    """Common source X; returns (Y, F) with Y = (+) targets and F: X -> Y."""
    if not maps:
        raise ValueError("need at least one component")
    x = maps[0].source
    q, p = x.quiver, x.p
    ysum = direct_sum_complexes([m.target for m in maps], q, p)
    blocks: dict[int, RepMorphism] = {}
    for d in x.degrees():
        if ysum.term(d).is_zero():
            continue
        mats = []
        for v in range(q.n_vertices):
            stack = [m.block(d).blocks[v] for m in maps]
            mats.append(np.vstack(stack) % p)
        mor = RepMorphism(x.term(d), ysum.term(d), tuple(mats))
        if not mor.is_zero():
            blocks[d] = mor
    return ysum, ChainMap(x, ysum, blocks)


def pack_from_sum(maps: list[ChainMap]) -> tuple[PComplex, ChainMap]:
    """Common target X; returns (Y, F) with Y = (+) sources and F: Y -> X."""
    if not maps:
        raise ValueError("need at least one component")
    x = maps[0].target
    q, p = x.quiver, x.p
    ysum = direct_sum_complexes([m.source for m in maps], q, p)
    blocks: dict[int, RepMorphism] = {}
    for d in ysum.degrees():
        if x.term(d).is_zero():
            continue
        mats = []
        for v in range(q.n_vertices):
            stack = [m.block(d).blocks[v] for m in maps]
            mats.append(np.hstack(stack) % p)
        mor = RepMorphism(ysum.term(d), x.term(d), tuple(mats))
        if not mor.is_zero():
            blocks[d] = mor
    return ysum, ChainMap(ysum, x, blocks)


def solve_factorization(space: DerivedHom, post: ChainMap,
                        target: DerivedHom, wanted) -> ChainMap | None:
    """A class f in `space` with [post o f] = wanted (coordinates in `target`)."""
    p = space.p
    wanted = np.asarray(wanted, dtype=np.int64).reshape(-1, 1) % p
    cols = [
        target.class_coordinates(post.compose(space.element(_unit(space.dim, k))))
        for k in range(space.dim)
    ]
    mat = np.stack(cols, axis=1) if cols else fl.zeros(target.dim, 0)
    sol = fl.solve(mat % p, wanted, p)
    if sol is None:
        return None
    return space.element(sol[:, 0])


def solve_factorization_pre(space: DerivedHom, pre: ChainMap,
                            target: DerivedHom, wanted) -> ChainMap | None:
    """A class f in `space` with [f o pre] = wanted (coordinates in `target`)."""
    p = space.p
    wanted = np.asarray(wanted, dtype=np.int64).reshape(-1, 1) % p
    cols = [
        target.class_coordinates(space.element(_unit(space.dim, k)).compose(pre))
        for k in range(space.dim)
    ]
    mat = np.stack(cols, axis=1) if cols else fl.zeros(target.dim, 0)
    sol = fl.solve(mat % p, wanted, p)
    if sol is None:
        return None
    return space.element(sol[:, 0])


def factors_through_shifted_heart(
    hctx: HeartContext,
    tmask: int,
    fmask: int,
    xc: PComplex,
    yc: PComplex,
    k: int,
    wanted,
) -> bool:
    """Whether a class X -> Y[k] is a sum of composites X -> C[1] -> Y[k]
    with C running over heart objects."""
    cat = hctx.cat
    p = cat.p
    target = derived_hom(xc, yc, k)
    wanted = np.asarray(wanted, dtype=np.int64).reshape(-1, 1) % p
    if not wanted.any():
        return True
    cols = []
    for idx, sh in heart_indecomposables(tmask, fmask):
        mid = hctx.object(idx, sh + 1)
        hs = derived_hom(xc, mid, 0)
        if hs.dim == 0:
            continue
        gs = derived_hom(mid, yc, k)
        if gs.dim == 0:
            continue
        for a in range(hs.dim):
            ha = hs.element(_unit(hs.dim, a))
            for b in range(gs.dim):
                comp = gs.element(_unit(gs.dim, b)).compose(ha)
                cols.append(target.class_coordinates(comp))
    if not cols:
        return False
    mat = np.stack(cols, axis=1) % p
    return fl.solve(mat, wanted, p) is not None
