"""Report builders: the classify sweep, catalog, reduction and heart reports.

Everything here returns plain JSON-ready dictionaries with deterministic
ordering (rows by mask, keys fixed), so serialized reports are byte-stable
across runs and parallelism degrees.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import SCHEMA_VERSION
from . import heart as H
from .catalog import IndecCatalog, is_dynkin, load_or_build_catalog, positive_roots
from .effaceable import (
    DEFAULT_MAX_SUBDIM,
    cond4_epi_search,
    fiveterm_witnesses,
    yoneda_span_gaps,
)
from .errors import MathCheckError, QuiverParseError
from .heart import HeartContext
from .quiverrep import Quiver, preset_quiver
from .reduction import reduction_chain, valid_rank_root_counts
from .torsion import DEFAULT_MAX_IND_FOR_SWEEP, TorsionContext, mask_indices


@dataclass
class RunConfig:
    """Resolved run options shared by the CLI and the service."""

    quiver: Quiver
    p: int = 2
    max_ind: int = DEFAULT_MAX_IND_FOR_SWEEP
    max_subdim: int = DEFAULT_MAX_SUBDIM
    heart_bound: int = 6
    jobs: int = 1
    cache_dir: str | None = None
    with_cond4: bool = False
    with_chains: bool = True


def resolve_quiver(preset: str | None = None, text: str | None = None,
                   path: str | None = None) -> Quiver:
    given = [x for x in (preset, text, path) if x]
    if len(given) != 1:
        raise QuiverParseError("exactly one of preset/text/path must be given")
    if preset:
        return preset_quiver(preset)
    if path:
        p = Path(path)
        if not p.exists():
            raise QuiverParseError(f"quiver file not found: {path}")
        return Quiver.from_text(p.read_text(), name=p.stem)
    return Quiver.from_text(text or "")


def quiver_payload(q: Quiver) -> dict:
    return {
        "name": q.name,
        "vertices": q.n_vertices,
        "arrows": [[s + 1, t + 1] for s, t in q.arrows],
    }


def _catalog_for(cfg: RunConfig) -> IndecCatalog:
    return load_or_build_catalog(
        cfg.quiver, cfg.p, cache_dir=cfg.cache_dir,
        max_catalog=max(cfg.max_ind, 48),
    )


# ---------------------------------------------------------------------------
# Catalog report


def run_catalog(cfg: RunConfig) -> dict:
    cat = _catalog_for(cfg)
    rows = []
    for i, m in enumerate(cat.indecs):
        tags = []
        for v in range(cat.quiver.n_vertices):
            if cat.proj_index[v] == i:
                tags.append(f"P{v + 1}")
            if cat.inj_index[v] == i:
                tags.append(f"I{v + 1}")
            if cat.simple_index[v] == i:
                tags.append(f"S{v + 1}")
        rows.append({
            "index": i,
            "dim_vector": list(m.dims),
            "total_dim": m.total_dim(),
            "tags": tags,
        })
    payload = {
        "schema_version": SCHEMA_VERSION,
        "quiver": quiver_payload(cfg.quiver),
        "field": cfg.p,
        "catalog_size": len(cat),
        "dynkin": is_dynkin(cfg.quiver),
        "indecomposables": rows,
    }
    if payload["dynkin"]:
        payload["positive_root_count"] = len(positive_roots(cfg.quiver))
    return payload


# ---------------------------------------------------------------------------
# Classify sweep (the theorem harness)


def _classify_row(ctx: TorsionContext, hctx: HeartContext, cfg: RunConfig,
                  row_id: int, mask: int) -> dict:
    cat = ctx.cat
    fmask = ctx.torsion_free(mask)
    ep = ctx.ext_projectives(mask)
    fin_gen = ctx.is_finitely_generated(mask)
    serre = ctx.serre_closed(mask)
    gaps = yoneda_span_gaps(ctx, mask, fmask)
    wit = fiveterm_witnesses(ctx, mask, fmask, max_subdim=cfg.max_subdim)
    row = {
        "id": row_id,
        "mask": mask_indices(mask),
        "size": len(mask_indices(mask)),
        "torsion_free": mask_indices(fmask),
        "ext_projectives": mask_indices(ep),
        "finitely_generated": fin_gen,
        "serre_closed": serre,
        "effaceable_yoneda": not gaps,
        "effaceable_fiveterm": all(w is not None for w in wit.values()),
        "yoneda_gaps": [[f, t, d] for f, t, d in gaps],
        "fiveterm_failures": sorted(x for x, w in wit.items() if w is None),
        "cond4": None,
        "reduction_chain_length": None,
    }
    if cfg.with_cond4:
        row["cond4"] = cond4_epi_search(hctx, ctx, mask, fmask, cfg.heart_bound)
    if cfg.with_chains and serre:
        steps = reduction_chain(ctx, hctx, mask, fmask, verify=False,
                                max_subdim=cfg.max_subdim)
        row["reduction_chain_length"] = len(steps)
    return row


def run_classify(cfg: RunConfig) -> dict:
    cat = _catalog_for(cfg)
    ctx = TorsionContext(cat)
    hctx = HeartContext(cat)
    classes = ctx.enumerate_torsion_classes(max_ind=cfg.max_ind, jobs=cfg.jobs)
    if cfg.jobs <= 1:
        rows = [_classify_row(ctx, hctx, cfg, i, m) for i, m in enumerate(classes)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(
                lambda im: _classify_row(ctx, hctx, cfg, im[0], im[1]),
                enumerate(classes),
            ))
    agreement = all(
        r["serre_closed"] == r["effaceable_yoneda"] == r["effaceable_fiveterm"]
        for r in rows
    )
    return {
        "schema_version": SCHEMA_VERSION,
        "quiver": quiver_payload(cfg.quiver),
        "field": cfg.p,
        "catalog_size": len(cat),
        "torsion_classes": rows,
        "counts": {
            "total": len(rows),
            "serre_closed": sum(r["serre_closed"] for r in rows),
            "effaceable": sum(r["effaceable_yoneda"] for r in rows),
            "finitely_generated": sum(r["finitely_generated"] for r in rows),
        },
        "agreement": agreement,
    }


# ---------------------------------------------------------------------------
# Reduction report


def run_reduce(cfg: RunConfig, torsion_id: int) -> dict:
    cat = _catalog_for(cfg)
    ctx = TorsionContext(cat)
    hctx = HeartContext(cat)
    classes = ctx.enumerate_torsion_classes(max_ind=cfg.max_ind, jobs=cfg.jobs)
    if not 0 <= torsion_id < len(classes):
        raise QuiverParseError(
            f"torsion id {torsion_id} out of range 0..{len(classes) - 1}"
        )
    mask = classes[torsion_id]
    fmask = ctx.torsion_free(mask)
    steps = reduction_chain(ctx, hctx, mask, fmask, verify=True,
                            max_subdim=cfg.max_subdim)
    step_rows = []
    rank = cfg.quiver.n_vertices
    all_ok = True
    for k, s in enumerate(steps):
        w_count = len(mask_indices(s.perp.w_indices))
        rank_ok = w_count in valid_rank_root_counts(rank - 1)
        rank -= 1
        ok = s.glue_ok and s.tred_ok and s.perp_serre_ok and s.induced_ok
        all_ok = all_ok and ok and rank_ok
        step_rows.append({
            "step": k,
            "ext_projective": s.e_index,
            "simple_top": {"index": s.top[0], "shift": s.top[1]},
            "anchor": {"index": s.perp.anchor_index, "shift": s.perp.anchor_shift},
            "w_indices": mask_indices(s.perp.w_indices),
            "t_prime": mask_indices(s.t_prime),
            "f_prime": mask_indices(s.f_prime),
            "glue_ok": s.glue_ok,
            "tred_ok": s.tred_ok,
            "perp_serre_ok": s.perp_serre_ok,
            "induced_pair_ok": s.induced_ok,
            "w_count_is_lower_rank_root_count": rank_ok,
            "ambient_effaceable": s.ambient_effaceable,
            "induced_effaceable": s.induced_effaceable,
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "quiver": quiver_payload(cfg.quiver),
        "field": cfg.p,
        "torsion_id": torsion_id,
        "mask": mask_indices(mask),
        "steps": step_rows,
        "all_checks_pass": all_ok,
    }


# ---------------------------------------------------------------------------
# Heart report


def heart_projectives(ctx: TorsionContext, tmask: int) -> list[tuple[int, int]]:
    """Ext-projectives of the aisle: the torsion ones at shift 0 and the
    projectives with no maps into the torsion class at shift 1."""
    cat = ctx.cat
    out = [(e, 0) for e in mask_indices(ctx.ext_projectives(tmask))]
    marked = mask_indices(tmask)
    for v in range(cat.quiver.n_vertices):
        pidx = cat.proj_index[v]
        if all(cat.hom_table[pidx][t] == 0 for t in marked):
            out.append((pidx, 1))
    return sorted(out)


def run_heart(cfg: RunConfig, torsion_id: int) -> dict:
    cat = _catalog_for(cfg)
    ctx = TorsionContext(cat)
    hctx = HeartContext(cat)
    classes = ctx.enumerate_torsion_classes(max_ind=cfg.max_ind, jobs=cfg.jobs)
    if not 0 <= torsion_id < len(classes):
        raise QuiverParseError(
            f"torsion id {torsion_id} out of range 0..{len(classes) - 1}"
        )
    mask = classes[torsion_id]
    fmask = ctx.torsion_free(mask)
    b_inds = [{"index": i, "shift": s, "dim_vector": list(cat.indecs[i].dims)}
              for i, s in H.heart_indecomposables(mask, fmask)]
    projs = []
    for idx, sh in heart_projectives(ctx, mask):
        entry = {"index": idx, "shift": sh, "simple_top": None}
        try:
            cert = H.simple_top(cat, hctx, mask, fmask, idx, sh)
            entry["simple_top"] = {"index": cert.top[0], "shift": cert.top[1]}
        except MathCheckError:
            pass  # tops are only guaranteed for Serre-closed pairs
        projs.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "quiver": quiver_payload(cfg.quiver),
        "field": cfg.p,
        "torsion_id": torsion_id,
        "mask": mask_indices(mask),
        "serre_closed": ctx.serre_closed(mask),
        "heart_indecomposables": b_inds,
        "heart_projectives": projs,
    }
