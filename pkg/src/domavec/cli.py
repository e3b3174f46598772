"""Command-line entry points for every pipeline stage.

Exit codes: 0 on success (out-of-vocabulary words are skipped with a
warning summary, not fatal), 2 on usage errors, 1 on runtime failures.
"""

import sys
from pathlib import Path

import click

from . import figures, matrixio, queries
from .catalog import ENV_CATALOG, CatalogError, MatrixCatalog
from .features import (assign_features, evaluate, load_feature_config,
                       load_gold, sweep)
from .network import build_graph, louvain, write_edges, write_partition
from .pipeline import run_build
from .vecspace import (OOVError, ReducedMatrix, concept_matrix, reduce_svd,
                       tensor_similarity)


def _load_catalog(path):
    try:
        return MatrixCatalog.load(path) if path else MatrixCatalog.from_env()
    except CatalogError as exc:
        raise click.ClickException(str(exc)) from None


def _read_words(path):
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    if not words:
        raise click.ClickException(f"{path}: no words found")
    return words


def _warn_skipped(skipped):
    for word, matrix in skipped:
        click.echo(f"warning: {word!r} not in matrix {matrix!r}, skipped",
                   err=True)
    if skipped:
        click.echo(f"warning: {len(skipped)} out-of-vocabulary entries skipped",
                   err=True)


def _write_results(results, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for r in results:
        path = out_dir / f"{queries.safe_filename(r.word)}.tsv"
        path.write_bytes(r.text.encode("utf-8"))
        click.echo(f"wrote {path}")


catalog_option = click.option("--catalog", "catalog_path", default=None,
                              help=f"Catalog file (default: ${ENV_CATALOG}).")
matrices_option = click.option("--matrices", required=True,
                               help="Comma-separated matrix names.")
words_option = click.option("--words", "words_path", required=True,
                            type=click.Path(exists=True, dir_okay=False),
                            help="File with one word per line.")
measure_option = click.option("--measure", default="cosine",
                              show_default=True, help="Similarity measure.")
out_option = click.option("--out", "out_dir", default=".", show_default=True,
                          help="Output directory.")


@click.group()
def main():
    """domavec: build and query domain-restricted co-occurrence matrices."""


@main.command()
@click.option("--corpus", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="CoNLL-U corpus (optionally .gz).")
@click.option("--rows", "rows_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="word<TAB>count frequency list for the row vocabulary.")
@click.option("--recipe", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="YAML recipe naming the matrices to build.")
@click.option("--out", "out_dir", required=True, help="Output directory.")
@click.option("--workers", default=1, show_default=True,
              help="Parallel counting workers (result is identical).")
@click.option("--skip-bad-sentences", is_flag=True,
              help="Drop malformed sentences instead of aborting.")
def build(corpus, rows_path, recipe, out_dir, workers, skip_bad_sentences):
    """Build every matrix of a recipe from a dependency-parsed corpus."""
    try:
        catalog_path = run_build(
            corpus, rows_path, recipe, out_dir, workers=workers,
            on_error="skip" if skip_bad_sentences else "raise")
    except Exception as exc:
        raise click.ClickException(str(exc)) from None
    click.echo(f"wrote catalog {catalog_path}")


@main.command()
@matrices_option
@words_option
@out_option
@catalog_option
def vectors(matrices, words_path, out_dir, catalog_path):
    """Per-word files with one vector row per selected matrix."""
    cat = _load_catalog(catalog_path)
    mats = _select(cat, matrices)
    results, skipped = queries.query_vectors(mats, _read_words(words_path))
    _write_results(results, out_dir)
    _warn_skipped(skipped)


@main.command()
@matrices_option
@words_option
@click.option("--targets", "targets_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="File with one target word per line.")
@measure_option
@out_option
@catalog_option
def sim(matrices, words_path, targets_path, measure, out_dir, catalog_path):
    """Per-word similarity tables: a column per target, a row per matrix."""
    cat = _load_catalog(catalog_path)
    mats = _select(cat, matrices)
    try:
        results, skipped = queries.query_similarity(
            mats, _read_words(words_path), _read_words(targets_path), measure)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    _write_results(results, out_dir)
    _warn_skipped(skipped)


@main.command()
@matrices_option
@words_option
@click.option("--k", default=10, show_default=True, help="Neighbors per matrix.")
@measure_option
@out_option
@catalog_option
def nn(matrices, words_path, k, measure, out_dir, catalog_path):
    """Per-word ranked neighbor lists, one block per selected matrix."""
    if k < 1:
        raise click.UsageError("--k must be >= 1")
    cat = _load_catalog(catalog_path)
    mats = _select(cat, matrices)
    try:
        results, skipped = queries.query_neighbors(
            mats, _read_words(words_path), k, measure)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    _write_results(results, out_dir)
    _warn_skipped(skipped)


def _select(cat, matrices):
    names = [n.strip() for n in matrices.split(",") if n.strip()]
    if not names:
        raise click.UsageError("--matrices must name at least one matrix")
    try:
        return cat.select(names)
    except KeyError as exc:
        raise click.ClickException(str(exc)) from None


@main.command()
@matrices_option
@words_option
@click.option("--rank", default=200, show_default=True,
              help="SVD rank for the per-matrix reduction.")
@click.option("--resolution", default=0.7, show_default=True,
              help="Modularity resolution (higher: more classes).")
@click.option("--seed", default=0, show_default=True,
              help="Tie-break seed for the partitioner.")
@click.option("--edge-floor", default=0.0, show_default=True,
              help="Drop similarity edges below this weight.")
@out_option
@catalog_option
@click.option("--figures/--no-figures", "render_figures", default=True,
              show_default=True, help="Render the classification report PNG.")
@click.option("--save-reduced", is_flag=True,
              help="Write the reduced matrices as reusable .doma caches.")
def classify(matrices, words_path, rank, resolution, seed, edge_floor, out_dir,
             catalog_path, render_figures, save_reduced):
    """Concept-tensor similarity network over words, partitioned into classes."""
    cat = _load_catalog(catalog_path)
    mats = _select(cat, matrices)
    words = _read_words(words_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reduced = []
    for name, m in mats:
        if isinstance(m, ReducedMatrix):
            if m.rank != rank:
                raise click.ClickException(
                    f"matrix {name!r} is pre-reduced at rank {m.rank}, "
                    f"but --rank is {rank}")
            reduced.append(m)
            continue
        if rank > min(m.shape):
            raise click.ClickException(
                f"--rank {rank} exceeds matrix {name!r} shape {m.shape}; "
                "pass a smaller --rank")
        red = reduce_svd(m, rank)
        reduced.append(red)
        if save_reduced:
            cache = out / f"{name}.rank{rank}.doma"
            matrixio.write_matrix(red, cache)
            click.echo(f"wrote {cache}")
    concepts = {}
    skipped = []
    for word in words:
        try:
            concepts[word] = concept_matrix(word, reduced, rank)
        except OOVError as exc:
            skipped.append((word, exc.matrix))
    if len(concepts) < 2:
        raise click.ClickException(
            "fewer than 2 words remain after vocabulary filtering")
    graph = build_graph(sorted(concepts),
                        lambda a, b: tensor_similarity(concepts[a], concepts[b]),
                        edge_floor=edge_floor)
    part = louvain(graph, resolution=resolution, seed=seed)
    write_edges(graph, out / "edges.tsv")
    write_partition(part, out / "partition.tsv")
    click.echo(f"wrote {out / 'edges.tsv'}")
    click.echo(f"wrote {out / 'partition.tsv'}")
    if render_figures:
        figures.classify_figure(graph, part, out / "classify.png")
        click.echo(f"wrote {out / 'classify.png'}")
    click.echo(f"{part.num_classes} classes, modularity {part.modularity:.6f}")
    _warn_skipped(skipped)


def _parse_grid(spec):
    lo, _, rest = spec.partition(":")
    hi, _, step = rest.partition(":")
    try:
        lo, hi, step = float(lo), float(hi), float(step)
    except ValueError:
        raise click.UsageError(
            f"bad grid {spec!r}, expected min:max:step") from None
    if step <= 0 or hi < lo:
        raise click.UsageError(f"bad grid {spec!r}, expected min:max:step")
    count = int((hi - lo) / step + 1e-9) + 1
    return [round(lo + i * step, 10) for i in range(count)]


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Feature configuration (prototypes + features).")
@click.option("--targets", "targets_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="File with one target word per line.")
@click.option("--gold", "gold_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="target<TAB>feature gold standard for evaluation.")
@click.option("--pk", default=0.71, show_default=True,
              help="Assignment threshold on the association index.")
@click.option("--ck", default=3.9, show_default=True,
              help="Percent-similarity bar a prototype must clear.")
@click.option("--sweep", "sweep_spec", default=None,
              help="Grid search 'pkmin:pkmax:step,ckmin:ckmax:step' "
                   "(requires --gold).")
@out_option
@catalog_option
@click.option("--figures/--no-figures", "render_figures", default=True,
              show_default=True, help="Render the sweep curves PNG.")
def features(config_path, targets_path, gold_path, pk, ck, sweep_spec, out_dir,
             catalog_path, render_figures):
    """Attribute discrete features to targets via prototype similarity."""
    cat = _load_catalog(catalog_path)
    config = load_feature_config(config_path)
    targets = _read_words(targets_path)
    needed = config.matrices + ["GENERIC"]
    missing = [n for n in needed if n not in cat]
    if missing:
        raise click.ClickException(f"catalog lacks matrices {missing}")
    matrices = {n: cat.matrix(n) for n in config.matrices}
    generic = cat.matrix("GENERIC")
    gold = load_gold(gold_path) if gold_path else None
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if sweep_spec:
        if gold is None:
            raise click.UsageError("--sweep requires --gold")
        pk_part, _, ck_part = sweep_spec.partition(",")
        if not ck_part:
            raise click.UsageError(
                "--sweep takes 'pkmin:pkmax:step,ckmin:ckmax:step'")
        try:
            result = sweep(targets, config, matrices, generic,
                           _parse_grid(pk_part), _parse_grid(ck_part), gold)
        except (KeyError, ValueError, OOVError) as exc:
            raise click.ClickException(str(exc)) from None
        (out / "sweep.tsv").write_bytes(
            queries.render_sweep(result.rows).encode("utf-8"))
        click.echo(f"wrote {out / 'sweep.tsv'}")
        if render_figures:
            figures.sweep_figure(result.rows, out / "sweep.png")
            click.echo(f"wrote {out / 'sweep.png'}")
        bpk, bck, bp, br, bf1 = result.best
        click.echo(f"best F1 {bf1:.6f} at PK={bpk:g} CK={bck:g} "
                   f"(P={bp:.6f} R={br:.6f})")
        return
    all_scores = []
    skipped = []
    for target in targets:
        try:
            scores = assign_features(target, config, matrices, generic, pk, ck)
        except OOVError as exc:
            skipped.append((target, exc.matrix))
            continue
        all_scores.extend(scores)
        path = out / f"{queries.safe_filename(target)}.tsv"
        path.write_bytes(queries.render_feature_report(scores).encode("utf-8"))
        click.echo(f"wrote {path}")
    if gold is not None and all_scores:
        res = evaluate(all_scores, gold)
        click.echo(f"P={res.precision:.6f} R={res.recall:.6f} F1={res.f1:.6f} "
                   f"(TP={res.tp} FP={res.fp} FN={res.fn})")
    _warn_skipped(skipped)


@main.command()
@click.option("--bind", default="127.0.0.1:8571", show_default=True,
              help="host:port to listen on.")
@click.option("--ui", "ui_dir", default=None,
              type=click.Path(exists=True, file_okay=False),
              help="Serve the explorer SPA from this directory.")
@catalog_option
def serve(bind, ui_dir, catalog_path):
    """Start the read-only HTTP query service."""
    from .service import serve as run_server

    cat = _load_catalog(catalog_path)
    try:
        run_server(cat, bind, ui_dir=ui_dir)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None


if __name__ == "__main__":
    sys.exit(main())
