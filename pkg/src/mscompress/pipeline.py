"""End-to-end orchestration: clusters in, compressions and reports out.

One work item is a (cluster, length-target) pair; items are independent, so
they can be processed by a bounded worker pool.  All outputs are written
atomically and depend only on the input and configuration, which makes two
runs with the same seed byte-identical.
"""

from __future__ import annotations

import concurrent.futures
import json
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import baseline as baseline_mod
from . import evaluation
from .corpus import Cluster, StopwordList, load_stopwords, parse_clusters
from .ilp import (ModelError, Solution, SolverConfig, build_model,
                  enumerate_nbest, verify_solution)
from .keywords import assign_labels, extract_keywords
from .rerank import (BonusKind, BonusPolicy, PosLm, keyword_bonus,
                     normalized_score_key, poslm_load, poslm_rerank,
                     rank_solutions)
from .wordgraph import build_graph

log = logging.getLogger("mscompress")

STOPWORD_DIR_ENV = "MSC_STOPWORD_DIR"

EXIT_OK = 0
EXIT_CLUSTER_FAILURES = 1
EXIT_FATAL = 2


@dataclass
class PipelineConfig:
    inputs: list[str] = field(default_factory=list)
    format: str = "json"
    stopwords: str | None = None
    method: str = "lda"
    keyword_count: int = 10
    bonus: str = "geometric_mean"
    fixed_bonus: float = 0.0
    cr_targets: list[float | None] = field(default_factory=lambda: [None])
    p_min: int = 8
    nbest: int = 50
    require_verb: bool = True
    verb_tags: frozenset[str] = frozenset()
    poslm: str | None = None
    poslm_top: int = 10
    output_dir: str = "out"
    seed: int = 0
    jobs: int = 1
    baseline: bool = False
    time_limit: float | None = None

    def solver_config(self) -> SolverConfig:
        return SolverConfig(nbest=self.nbest, require_verb=self.require_verb,
                            verb_tags=self.verb_tags,
                            time_limit=self.time_limit)

    def bonus_policy(self) -> BonusPolicy:
        return BonusPolicy(kind=BonusKind(self.bonus),
                           fixed_value=self.fixed_bonus)


_BOOL_KEYS = {"require_verb", "baseline"}
_INT_KEYS = {"keyword_count", "p_min", "nbest", "poslm_top", "seed", "jobs"}
_FLOAT_KEYS = {"fixed_bonus"}


def parse_config_file(text: str) -> dict:
    """``key = value`` lines; '#' starts a comment, blank lines are skipped.

    cr_targets is a comma-separated list where ``inf`` means unbounded, e.g.
    ``cr_targets = 0.5, 0.8, inf``.  verb_tags and inputs are comma-separated.
    """
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "cr_targets":
            values[key] = [None if v.strip().lower() in ("inf", "none")
                           else float(v) for v in value.split(",")]
        elif key == "verb_tags":
            values[key] = frozenset(v.strip() for v in value.split(",") if v.strip())
        elif key == "inputs":
            values[key] = [v.strip() for v in value.split(",") if v.strip()]
        elif key in _BOOL_KEYS:
            values[key] = value.lower() in ("1", "true", "yes", "on")
        elif key in _INT_KEYS:
            values[key] = int(value)
        elif key in _FLOAT_KEYS:
            values[key] = float(value)
        elif key == "time_limit":
            values[key] = None if value.lower() == "none" else float(value)
        else:
            values[key] = value
    unknown = set(values) - {f.name for f in PipelineConfig.__dataclass_fields__.values()}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return values


def load_config(path: str | Path | None, overrides: dict) -> PipelineConfig:
    values: dict = {}
    if path is not None:
        values.update(parse_config_file(Path(path).read_text(encoding="utf-8")))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig(**values)


def resolve_stopword_path(name: str | None) -> Path | None:
    """A bare filename is looked up in $MSC_STOPWORD_DIR when not found as-is."""
    if name is None:
        return None
    path = Path(name)
    if path.exists():
        return path
    env_dir = os.environ.get(STOPWORD_DIR_ENV)
    if env_dir and (Path(env_dir) / name).exists():
        return Path(env_dir) / name
    raise FileNotFoundError(f"stopword file {name!r} not found "
                            f"(also tried ${STOPWORD_DIR_ENV})")


def load_inputs(paths: list[str], format: str) -> list[Cluster]:
    clusters: list[Cluster] = []
    seen: set[str] = set()
    for p in paths:
        path = Path(p)
        batch = parse_clusters(path.read_text(encoding="utf-8"), format=format,
                               id_prefix=path.stem)
        for c in batch:
            if c.id in seen:
                raise ValueError(f"duplicate cluster id across inputs: {c.id}")
            seen.add(c.id)
        clusters.extend(batch)
    return clusters


def target_tag(target: float | None) -> str:
    return "inf" if target is None else f"cr{int(round(target * 100))}"


def max_words_for_target(cluster: Cluster, target: float | None) -> int | None:
    if target is None:
        return None
    return math.ceil(target * cluster.avg_sentence_len())


def compress_cluster(cluster: Cluster, stopwords: StopwordList,
                     cfg: PipelineConfig, lm: PosLm | None = None) -> list[dict]:
    """All per-target compression records for one cluster.

    A target with no feasible solution yields a record with ``tokens: null``
    rather than an error; genuinely broken inputs raise.
    """
    graph = build_graph(cluster, stopwords)
    solver_cfg = cfg.solver_config()
    records: list[dict] = []

    if cfg.baseline:
        solution = baseline_mod.baseline_compress(graph, solver_cfg)
        records.append(_record(cluster, "baseline", solution))
        return records

    ks = extract_keywords(cluster, stopwords, method=cfg.method,
                          n=cfg.keyword_count, seed=cfg.seed)
    assign_labels(graph, ks)
    bonus = keyword_bonus(graph, cfg.bonus_policy())

    for target in cfg.cr_targets:
        tag = target_tag(target)
        max_words = max_words_for_target(cluster, target)
        try:
            model = build_model(graph, cfg.p_min, max_words, bonus)
        except ModelError as exc:
            log.info("cluster %s target %s infeasible: %s", cluster.id, tag, exc)
            records.append(_record(cluster, tag, None))
            continue
        candidates = enumerate_nbest(model, solver_cfg)
        if not candidates:
            records.append(_record(cluster, tag, None))
            continue
        for c in candidates:
            report = verify_solution(model, c)
            if not report.ok:
                raise AssertionError(
                    f"solver output failed verification: {report.failures}")
        if lm is not None:
            best = poslm_rerank(candidates, lm, top=cfg.poslm_top)
        else:
            best = rank_solutions(candidates)[0]
        records.append(_record(cluster, tag, best, bonus=bonus,
                               keywords=ks.lowers()))
    return records


def _record(cluster: Cluster, tag: str, solution: Solution | None, *,
            bonus: float | None = None,
            keywords: list[str] | None = None) -> dict:
    rec: dict = {"cluster": cluster.id, "target": tag}
    if solution is None:
        rec["tokens"] = None
        return rec
    rec.update(solution.to_json_obj())
    rec["normalized_score_log"] = normalized_score_key(solution)
    rec["cr"] = evaluation.compression_ratio(solution.tokens, cluster)
    if bonus is not None:
        rec["keyword_bonus"] = bonus
    if keywords is not None:
        rec["keywords"] = keywords
    return rec


def _write_atomic(path: Path, content: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


def _dump_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def _process_one(args: tuple) -> tuple[str, list[dict] | None, str | None]:
    cluster, stopwords, cfg, lm = args
    try:
        return cluster.id, compress_cluster(cluster, stopwords, cfg, lm), None
    except Exception as exc:  # individual failures are reported, not fatal
        return cluster.id, None, f"{type(exc).__name__}: {exc}"


def run_compress(cfg: PipelineConfig) -> int:
    """Compress every cluster under every length target; returns an exit code."""
    try:
        clusters = load_inputs(cfg.inputs, cfg.format)
        sw_path = resolve_stopword_path(cfg.stopwords)
        stopwords = (load_stopwords(sw_path.read_bytes())
                     if sw_path else StopwordList())
        lm = poslm_load(Path(cfg.poslm).read_text(encoding="utf-8")) \
            if cfg.poslm else None
    except (OSError, ValueError) as exc:
        log.error("fatal: %s", exc)
        return EXIT_FATAL
    if not cfg.cr_targets:
        log.error("fatal: cr_targets is empty")
        return EXIT_FATAL

    out_dir = Path(cfg.output_dir)
    comp_dir = out_dir / "compressions"
    comp_dir.mkdir(parents=True, exist_ok=True)

    work = [(c, stopwords, cfg, lm) for c in clusters]
    if cfg.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_process_one, work))
    else:
        results = [_process_one(item) for item in work]

    failures: list[tuple[str, str]] = []
    for cluster_id, records, error in results:
        if error is not None:
            failures.append((cluster_id, error))
            log.warning("cluster %s failed: %s", cluster_id, error)
            continue
        for rec in records:
            stem = f"{cluster_id}__{rec['target']}"
            _write_atomic(comp_dir / f"{stem}.json", _dump_json(rec))
            text = " ".join(rec["tokens"]) if rec.get("tokens") else ""
            _write_atomic(comp_dir / f"{stem}.txt", text + "\n")

    summary = {
        "clusters": len(clusters),
        "failed": sorted(f"{cid}: {err}" for cid, err in failures),
        "targets": [target_tag(t) for t in cfg.cr_targets] if not cfg.baseline
        else ["baseline"],
        "settings": {
            "method": cfg.method, "keyword_count": cfg.keyword_count,
            "bonus": cfg.bonus, "p_min": cfg.p_min, "nbest": cfg.nbest,
            "require_verb": cfg.require_verb, "seed": cfg.seed,
            "baseline": cfg.baseline, "format": cfg.format,
        },
    }
    _write_atomic(out_dir / "run_summary.json", _dump_json(summary))
    return EXIT_CLUSTER_FAILURES if failures else EXIT_OK


def run_evaluate(outputs_dir: str | Path, corpus_inputs: list[str],
                 format: str = "json", stopword_path: str | None = None,
                 remove_stopwords: bool = True,
                 out_dir: str | Path | None = None) -> evaluation.RougeReport:
    """Score emitted compressions against cluster references.

    Every cluster with references must have at least one output record;
    missing ids raise with the full list of offenders.
    """
    clusters = {c.id: c for c in load_inputs(corpus_inputs, format)}
    sw_path = resolve_stopword_path(stopword_path)
    stopwords = (load_stopwords(sw_path.read_bytes())
                 if sw_path and remove_stopwords else None)

    comp_dir = Path(outputs_dir) / "compressions"
    records = []
    for path in sorted(comp_dir.glob("*.json")):
        records.append(json.loads(path.read_text(encoding="utf-8")))

    with_refs = {cid for cid, c in clusters.items() if c.references}
    covered = {r["cluster"] for r in records}
    missing = sorted(with_refs - covered)
    if missing:
        raise ValueError(f"no outputs for cluster ids: {', '.join(missing)}")
    unknown = sorted(covered - set(clusters))
    if unknown:
        raise ValueError(f"outputs reference unknown cluster ids: "
                         f"{', '.join(unknown)}")

    report = evaluation.RougeReport()
    for rec in records:
        cluster = clusters[rec["cluster"]]
        if not cluster.references or rec.get("tokens") is None:
            continue
        report.rows.append(evaluation.score_candidate(
            rec["tokens"], cluster, target=rec["target"], stopwords=stopwords))

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_atomic(out / "report.json", _dump_json(report.to_json_obj()))
        _write_atomic(out / "report.tsv", report.to_tsv())
    return report
