"""Command-line entry points; every subcommand is a thin wrapper over the
core package, and ``serve`` starts the HTTP service around the same core."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import pipeline, wordgraph
from .corpus import corpus_stats, load_stopwords, StopwordList
from .ilp import build_model, export_lp
from .keywords import assign_labels, extract_keywords, keyword_coverage
from .rerank import keyword_bonus, poslm_save, poslm_train
from .wordgraph import build_graph


def _load_stopwords(path: str | None) -> StopwordList:
    resolved = pipeline.resolve_stopword_path(path)
    return load_stopwords(resolved.read_bytes()) if resolved else StopwordList()


def _parse_targets(value: str) -> list[float | None]:
    return [None if v.strip().lower() in ("inf", "none") else float(v)
            for v in value.split(",")]


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose: bool) -> None:
    """Multi-sentence compression over word graphs."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


input_args = click.argument("inputs", nargs=-1, required=True,
                            type=click.Path(exists=True))
format_opt = click.option("--format", "fmt", default="json",
                          type=click.Choice(["json", "slashed"]),
                          show_default=True)
stopwords_opt = click.option("--stopwords", default=None,
                             help="Stopword file (bare names are resolved "
                                  "against $MSC_STOPWORD_DIR).")


@main.command()
@input_args
@format_opt
@stopwords_opt
def stats(inputs, fmt, stopwords) -> None:
    """Descriptive statistics per cluster and corpus-wide."""
    clusters = pipeline.load_inputs(list(inputs), fmt)
    agg = corpus_stats(clusters)
    click.echo("cluster\ttokens\tvocab\tavg_len\tttr\tavg_cosine")
    for cid in sorted(agg["clusters"]):
        st = agg["clusters"][cid]
        click.echo(f"{cid}\t{st.token_count}\t{st.vocab_size}"
                   f"\t{st.avg_sentence_len:.2f}\t{st.ttr:.4f}"
                   f"\t{st.avg_cosine:.4f}")
    click.echo(f"# corpus tokens={agg['token_count']}"
               f" sentences={agg['sentence_count']}"
               f" vocab={agg['vocab_size']}"
               f" ttr_macro={agg['ttr_macro']:.4f}"
               f" ttr_pooled={agg['ttr_pooled']:.4f}"
               f" avg_cosine={agg['avg_cosine']:.4f}")


@main.command()
@input_args
@format_opt
@stopwords_opt
@click.option("--cluster-id", default=None, help="Dump only this cluster.")
@click.option("--dot", "as_dot", is_flag=True, help="Emit DOT instead of JSON.")
@click.option("--keywords", "kw_method", default=None,
              type=click.Choice(["lda", "lsi", "textrank"]),
              help="Label vertices with keywords from this extractor first.")
@click.option("--count", default=10, show_default=True)
def graph(inputs, fmt, stopwords, cluster_id, as_dot, kw_method, count) -> None:
    """Build word graphs and dump them as JSON or DOT."""
    sw = _load_stopwords(stopwords)
    clusters = pipeline.load_inputs(list(inputs), fmt)
    if cluster_id is not None:
        clusters = [c for c in clusters if c.id == cluster_id]
        if not clusters:
            raise click.ClickException(f"no cluster with id {cluster_id!r}")
    for cluster in clusters:
        g = build_graph(cluster, sw)
        if kw_method:
            assign_labels(g, extract_keywords(cluster, sw, method=kw_method,
                                              n=count))
        if as_dot:
            click.echo(wordgraph.to_dot(g), nl=False)
        else:
            click.echo(json.dumps(wordgraph.to_json_obj(g), ensure_ascii=False,
                                  sort_keys=True))


@main.command()
@input_args
@format_opt
@stopwords_opt
@click.option("--method", default="lda",
              type=click.Choice(["lda", "lsi", "textrank"]), show_default=True)
@click.option("--count", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
def keywords(inputs, fmt, stopwords, method, count, seed) -> None:
    """Extract cluster keywords; one JSON object per cluster."""
    sw = _load_stopwords(stopwords)
    for cluster in pipeline.load_inputs(list(inputs), fmt):
        ks = extract_keywords(cluster, sw, method=method, n=count, seed=seed)
        obj = {"cluster": cluster.id, **ks.to_json_obj()}
        if cluster.references:
            obj["reference_coverage"] = keyword_coverage(ks, cluster.references)
        click.echo(json.dumps(obj, ensure_ascii=False, sort_keys=True))


def _pipeline_options(fn):
    for deco in reversed([
        click.option("--config", "config_path", default=None,
                     type=click.Path(exists=True),
                     help="Config file with key = value lines."),
        format_opt,
        stopwords_opt,
        click.option("--method", default=None,
                     type=click.Choice(["lda", "lsi", "textrank"])),
        click.option("--count", "keyword_count", default=None, type=int),
        click.option("--bonus", default=None,
                     type=click.Choice(["geometric_mean", "arithmetic_mean",
                                        "median", "fixed"])),
        click.option("--fixed-bonus", default=None, type=float),
        click.option("--cr-targets", default=None,
                     help="Comma-separated ratios; 'inf' for unbounded."),
        click.option("--p-min", default=None, type=int),
        click.option("--nbest", default=None, type=int),
        click.option("--require-verb/--no-require-verb", default=None),
        click.option("--verb-tags", default=None,
                     help="Comma-separated POS tags counted as verbs; "
                          "default: any tag starting with V."),
        click.option("--poslm", default=None, type=click.Path(exists=True)),
        click.option("--poslm-top", default=None, type=int),
        click.option("--out", "output_dir", default=None),
        click.option("--seed", default=None, type=int),
        click.option("--jobs", default=None, type=int),
        click.option("--time-limit", default=None, type=float),
    ]):
        fn = deco(fn)
    return fn


def _build_config(inputs, fmt, config_path, baseline_mode=False,
                  **overrides) -> pipeline.PipelineConfig:
    if overrides.get("cr_targets") is not None:
        overrides["cr_targets"] = _parse_targets(overrides["cr_targets"])
    if overrides.get("verb_tags") is not None:
        overrides["verb_tags"] = frozenset(
            t.strip() for t in overrides["verb_tags"].split(",") if t.strip())
    overrides["inputs"] = list(inputs)
    overrides["format"] = fmt
    cfg = pipeline.load_config(config_path, overrides)
    cfg.baseline = baseline_mode
    return cfg


@main.command()
@input_args
@_pipeline_options
def compress(inputs, config_path, fmt, **overrides) -> None:
    """Run the keyword-aware compression pipeline over a corpus."""
    cfg = _build_config(inputs, fmt, config_path, **overrides)
    sys.exit(pipeline.run_compress(cfg))


@main.command()
@input_args
@_pipeline_options
def baseline(inputs, config_path, fmt, **overrides) -> None:
    """Run the shortest-path baseline instead of the exact solver."""
    cfg = _build_config(inputs, fmt, config_path, baseline_mode=True,
                        **overrides)
    sys.exit(pipeline.run_compress(cfg))


@main.command("export-lp")
@input_args
@format_opt
@stopwords_opt
@click.option("--cluster-id", default=None)
@click.option("--method", default="lda",
              type=click.Choice(["lda", "lsi", "textrank"]), show_default=True)
@click.option("--count", default=10, show_default=True)
@click.option("--bonus", default="geometric_mean",
              type=click.Choice(["geometric_mean", "arithmetic_mean",
                                 "median", "fixed"]), show_default=True)
@click.option("--fixed-bonus", default=0.0, show_default=True)
@click.option("--p-min", default=8, show_default=True)
@click.option("--p-max", default=None, type=int)
@click.option("--out", "out_path", default=None, type=click.Path())
def export_lp_cmd(inputs, fmt, stopwords, cluster_id, method, count, bonus,
                  fixed_bonus, p_min, p_max, out_path) -> None:
    """Write the optimization model of one cluster in CPLEX-LP format."""
    from .rerank import BonusKind, BonusPolicy

    sw = _load_stopwords(stopwords)
    clusters = pipeline.load_inputs(list(inputs), fmt)
    if cluster_id is not None:
        clusters = [c for c in clusters if c.id == cluster_id]
    if len(clusters) != 1:
        raise click.ClickException(
            "export-lp needs exactly one cluster; use --cluster-id to select")
    cluster = clusters[0]
    g = build_graph(cluster, sw)
    assign_labels(g, extract_keywords(cluster, sw, method=method, n=count))
    policy = BonusPolicy(kind=BonusKind(bonus), fixed_value=fixed_bonus)
    model = build_model(g, p_min, p_max, keyword_bonus(g, policy))
    text = export_lp(model)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--outputs", required=True, type=click.Path(exists=True),
              help="Directory produced by compress/baseline.")
@click.option("--corpus", "corpus_inputs", multiple=True, required=True,
              type=click.Path(exists=True))
@format_opt
@stopwords_opt
@click.option("--keep-stopwords", is_flag=True,
              help="Score without stopword removal.")
@click.option("--out", "out_dir", default=None)
def evaluate(outputs, corpus_inputs, fmt, stopwords, keep_stopwords,
             out_dir) -> None:
    """Score emitted compressions against references; print the TSV table."""
    try:
        report = pipeline.run_evaluate(
            outputs, list(corpus_inputs), format=fmt, stopword_path=stopwords,
            remove_stopwords=not keep_stopwords, out_dir=out_dir)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    click.echo(report.to_tsv(), nl=False)


@main.command("train-poslm")
@click.argument("corpus", type=click.Path(exists=True))
@click.option("--order", default=7, show_default=True)
@click.option("--backoff", default=0.4, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def train_poslm(corpus, order, backoff, out_path) -> None:
    """Train an n-gram model over a POS-tag corpus (one sentence per line)."""
    with open(corpus, encoding="utf-8") as fh:
        lm = poslm_train(fh, order=order, backoff=backoff)
    Path(out_path).write_text(poslm_save(lm), encoding="utf-8")
    click.echo(f"trained order-{order} model: {len(lm.counts)} n-grams")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Start the HTTP compression service."""
    import uvicorn

    uvicorn.run("mscompress.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
