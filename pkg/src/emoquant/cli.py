"""Command-line surface: quantizer fitting, application, corpus tooling,
evaluation metrics, and the ranking-session service."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .adv import AdvPoint, ClampCounter, LabelVocabulary
from .ingest import (
    CleanPolicy,
    adv_points,
    build_records,
    clean_manifest,
    corpus_stats,
    read_manifest,
    write_rejection_log,
)
from .metrics import ConfusionMatrix, Ranking, kendalls_w, macro_pr, pearson_matrix, spearman_src
from .quantizer import (
    QuantizerConfig,
    QuantizerModel,
    coverage,
    fit_linear_quantizer,
    fit_quantizer,
    quantize,
)
from .sequencing import SpecialTokens, assemble
from .service import SessionStore, create_app, load_sessions_config


def _load_quantizer_config(config_path: str | None, seed: int) -> QuantizerConfig:
    overrides = {}
    if config_path:
        overrides = json.loads(Path(config_path).read_text(encoding="utf-8"))
    overrides["rng_seed"] = seed
    return QuantizerConfig(**overrides)


def _read_points(path: str) -> list[AdvPoint]:
    points = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        a, d, v = (float(x) for x in line.replace(",", " ").split())
        points.append(AdvPoint(a, d, v))
    return points


def _read_rankings(path: str) -> list[Ranking]:
    rankings = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rankings.append(Ranking.of([int(x) for x in line.replace(",", " ").split()]))
    return rankings


@click.group(context_settings={"auto_envvar_prefix": "EMOQUANT"})
def main() -> None:
    """Emotional-TTS data toolkit: ADV quantization, sequences, and metrics."""


@main.command("fit")
@click.argument("manifest", type=click.Path(exists=True))
@click.option("--config", type=click.Path(exists=True), help="quantizer config JSON")
@click.option("--vocab", type=click.Path(exists=True), help="label vocabulary file")
@click.option("--out", required=True, type=click.Path(), help="model output path")
@click.option("--seed", default=0, show_default=True, help="RNG seed")
@click.option("--bins", type=int, default=None, help="force this cluster count instead of sweeping")
@click.option("--report", type=click.Path(), help="optional rejection-log path")
def cmd_fit(manifest, config, vocab, out, seed, bins, report) -> None:
    """Fit the nonlinear ADV quantizer from a dataset manifest."""
    try:
        rows, parse_rej = read_manifest(manifest)
        kept, clean_rej = clean_manifest(rows, CleanPolicy())
        vocabulary = LabelVocabulary.load(vocab) if vocab else LabelVocabulary.default()
        records = build_records(kept, vocabulary, clamp_counter=ClampCounter())
        points = adv_points(records)
        if len(points) < 8:
            raise click.ClickException(
                f"insufficient samples: {len(points)} ADV-bearing rows, need >= 8"
            )
        cfg = _load_quantizer_config(config, seed)
        model = fit_quantizer(points, cfg, k=bins)
        model.save(out)
        if report:
            write_rejection_log(parse_rej + clean_rej, report)
        click.echo(f"fitted K={model.K} on {len(points)} points -> {out}")
        for cand in model.fit_report.get("candidates", []):
            click.echo(
                f"  k={cand['k']:>3}  silhouette={cand['s_mean']:.4f} +- {cand['s_std']:.4f}"
            )
        for c in ("a", "d", "v"):
            click.echo(f"  boundaries[{c}] = {model.boundaries[c]}")
    except click.ClickException:
        raise
    except Exception as exc:
        raise click.ClickException(str(exc))


@main.command("quantize")
@click.argument("points_file", type=click.Path(exists=True))
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
def cmd_quantize(points_file, model_path) -> None:
    """Quantize `a d v` triples (one per line) into token triples."""
    model = QuantizerModel.load(model_path)
    for p in _read_points(points_file):
        t = quantize(p, model)
        click.echo(f"{t.x_a} {t.x_d} {t.x_v}")


@main.command("coverage")
@click.argument("points_file", type=click.Path(exists=True))
@click.option("--model", "model_path", type=click.Path(exists=True), help="fitted model file")
@click.option("--bins", "m", type=int, default=None, help="use a linear model with m bins instead")
@click.option("--format", "fmt", type=click.Choice(["lines", "grid"]), default="lines",
              show_default=True)
def cmd_coverage(points_file, model_path, m, fmt) -> None:
    """Coverage rate of the quantized grid over a point set."""
    if (model_path is None) == (m is None):
        raise click.ClickException("give exactly one of --model or --bins")
    model = QuantizerModel.load(model_path) if model_path else fit_linear_quantizer(None, m)
    rep = coverage(_read_points(points_file), model)
    click.echo(
        f"coverage_rate {rep.coverage_rate:.6f} "
        f"({rep.occupied_units}/{rep.total_units} units, m={rep.m})"
    )
    if fmt == "grid":
        for xv in range(1, rep.m + 1):
            click.echo(f"# x_v = {xv}")
            for xd in range(rep.m, 0, -1):
                row = [rep.occupancy_histogram.get((xa, xd, xv), 0) for xa in range(1, rep.m + 1)]
                click.echo(" ".join(f"{c:>5}" for c in row))


@main.command("assemble")
@click.argument("manifest", type=click.Path(exists=True))
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--vocab", type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def cmd_assemble(manifest, model_path, vocab, out) -> None:
    """Assemble training sequences from a cleaned manifest."""
    model = QuantizerModel.load(model_path)
    vocabulary = LabelVocabulary.load(vocab) if vocab else LabelVocabulary.default()
    tokens = SpecialTokens(adv_range=(1, model.K))
    rows, _ = read_manifest(manifest)
    kept, _ = clean_manifest(rows, CleanPolicy())
    records = build_records(kept, vocabulary)
    sem_by_id = {}
    for line in Path(manifest).read_text(encoding="utf-8").splitlines():
        if line.strip():
            obj = json.loads(line)
            sem_by_id[str(obj["id"])] = [int(t) for t in obj.get("sem_token_ids", [])]
    errors = 0
    with Path(out).open("w", encoding="utf-8") as fh:
        for rec in records:
            sem = sem_by_id.get(rec.id) or [tokens.semantic_range[0]]
            try:
                pair = assemble(rec, sem, tokens, model)
            except Exception as exc:
                click.echo(f"row {rec.id}: {exc}", err=True)
                errors += 1
                continue
            fh.write(
                json.dumps(
                    {
                        "id": pair.id,
                        "input_ids": pair.input_ids,
                        "output_ids": pair.output_ids,
                        "loss_weights": pair.loss_weights,
                    }
                )
                + "\n"
            )
    click.echo(f"wrote {len(records) - errors} sequences -> {out}")


@main.command("stats")
@click.argument("manifest", type=click.Path(exists=True))
@click.option("--vocab", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), help="write stats JSON here instead of stdout")
def cmd_stats(manifest, vocab, out) -> None:
    """Corpus statistics after cleaning: label/type counts and ADV histograms."""
    rows, _ = read_manifest(manifest)
    kept, rejections = clean_manifest(rows, CleanPolicy())
    vocabulary = LabelVocabulary.load(vocab) if vocab else LabelVocabulary.default()
    records = build_records(kept, vocabulary)
    stats = corpus_stats(records)
    payload = {
        "total": stats.total,
        "rejected": len(rejections),
        "label_counts": {str(k): v for k, v in sorted(stats.label_counts.items())},
        "dataset_type_counts": stats.dataset_type_counts,
        "speaker_count": stats.speaker_count,
        "adv_histograms": stats.adv_histograms,
        "adv_bin_edges": stats.adv_bin_edges,
    }
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.group("metrics")
def cmd_metrics() -> None:
    """Evaluation statistics over rank and classification files."""


@cmd_metrics.command("src")
@click.argument("file_a", type=click.Path(exists=True))
@click.argument("file_b", type=click.Path(exists=True))
def metrics_src(file_a, file_b) -> None:
    """Spearman rank correlation between paired rankings (one per line)."""
    ra, rb = _read_rankings(file_a), _read_rankings(file_b)
    if len(ra) != len(rb):
        raise click.ClickException("ranking files have different line counts")
    for r1, r2 in zip(ra, rb):
        click.echo(f"{spearman_src(r1, r2)}")


@cmd_metrics.command("kw")
@click.argument("rankings_file", type=click.Path(exists=True))
def metrics_kw(rankings_file) -> None:
    """Kendall's W across raters (one ranking per line)."""
    click.echo(f"{kendalls_w(_read_rankings(rankings_file))}")


@cmd_metrics.command("macro-pr")
@click.argument("matrix_file", type=click.Path(exists=True))
def metrics_macro_pr(matrix_file) -> None:
    """Macro precision/recall from a confusion-matrix file (one row per line)."""
    rows = [
        [int(x) for x in line.split()]
        for line in Path(matrix_file).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    res = macro_pr(ConfusionMatrix(np.array(rows)))
    click.echo(f"macro_precision {res.precision}")
    click.echo(f"macro_recall {res.recall}")
    if res.degenerate_classes:
        click.echo(f"degenerate_classes {list(res.degenerate_classes)}")


@cmd_metrics.command("pearson")
@click.argument("table_file", type=click.Path(exists=True))
def metrics_pearson(table_file) -> None:
    """Pearson matrix from a TSV with x_a, x_d, x_v plus feature columns."""
    lines = [l for l in Path(table_file).read_text(encoding="utf-8").splitlines() if l.strip()]
    header = lines[0].split("\t")
    cols: dict[str, list[float]] = {h: [] for h in header}
    for line in lines[1:]:
        for h, cell in zip(header, line.split("\t")):
            cols[h].append(float(cell))
    adv_cols = {axis: cols.pop(f"x_{axis}") for axis in "adv"}
    result = pearson_matrix(cols, adv_cols)
    feature_names = [h for h in header if not h.startswith("x_")]
    click.echo("axis\t" + "\t".join(feature_names))
    for axis in "adv":
        click.echo(axis + "\t" + "\t".join(f"{result[axis][f]:.4f}" for f in feature_names))


@main.command("serve")
@click.option("--sessions", "sessions_path", required=True, type=click.Path(exists=True))
@click.option("--journal", default="rankings.journal", show_default=True, type=click.Path())
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8750, show_default=True, type=int)
def cmd_serve(sessions_path, journal, host, port) -> None:
    """Run the ranking-collection service."""
    import uvicorn

    store = SessionStore(load_sessions_config(sessions_path), journal)
    app = create_app(store)
    click.echo(f"serving {len(store.sessions)} session(s) on {host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    sys.exit(main())
