"""Recipe-driven builds: dictionaries + frequency list + corpus -> matrix set.

A recipe is a small YAML file naming each matrix and how to derive its
columns:

    corpus_id: paisa
    window: 2
    min_dims: 200
    cutoff: 17074
    dictionaries: [dicts/nouns.json, dicts/verbs.json]
    matrices:
      GENERIC:  {kind: generic}
      ANIMAL:   {kind: noun, tags: [Anl]}
      BODY:     {kind: noun, tags: [Npc], merges: [Npcorg]}
      PSYCH:    {kind: verb, tags: [Vpsych]}

``kind: generic`` reuses the row vocabulary as columns.  An optional
``grav`` block overrides the POS weight table, ``context_pos`` the POS tags
accepted as context.
"""

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import matrixio
from .lexicon import (DEFAULT_MIN_DIMS, DimensionSet, DomainTooSmallError,
                      build_row_vocab, load_dictionary, read_freq_list,
                      select_domain, triple_verb_dimensions)
from .sdw2 import DEFAULT_CONTEXT_POS, GravTable, build_matrices
from .treebank import read_corpus


class RecipeError(ValueError):
    """Recipe file violates the expected schema."""


@dataclass(frozen=True)
class MatrixSpec:
    name: str
    kind: str                    # noun | verb | generic
    tags: tuple = ()
    merges: tuple = ()
    min_dims: int = None         # falls back to the recipe default


@dataclass(frozen=True)
class Recipe:
    matrices: tuple              # MatrixSpec, build order preserved
    dictionaries: tuple = ()
    corpus_id: str = ""
    window: int = 2
    min_dims: int = DEFAULT_MIN_DIMS
    cutoff: int = 17074
    grav: GravTable = field(default_factory=GravTable)
    context_pos: frozenset = DEFAULT_CONTEXT_POS


def load_recipe(path):
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict) or not isinstance(data.get("matrices"), dict):
        raise RecipeError(f"{path}: recipe needs a 'matrices' mapping")
    specs = []
    for name, rec in data["matrices"].items():
        rec = rec or {}
        kind = rec.get("kind", "noun")
        if kind not in ("noun", "verb", "generic"):
            raise RecipeError(f"{path}: matrix {name!r} has unknown kind {kind!r}")
        tags = tuple(rec.get("tags", ()))
        if kind != "generic" and not tags:
            raise RecipeError(f"{path}: matrix {name!r} needs selection tags")
        specs.append(MatrixSpec(name=name, kind=kind, tags=tags,
                                merges=tuple(rec.get("merges", ())),
                                min_dims=rec.get("min_dims")))
    grav_cfg = data.get("grav")
    if grav_cfg:
        grav = GravTable(weights=dict(grav_cfg.get("weights", {})),
                         default=float(grav_cfg.get("default", 0.0)),
                         name=grav_cfg.get("name", "grav-custom"))
    else:
        grav = GravTable()
    context_pos = frozenset(data.get("context_pos", DEFAULT_CONTEXT_POS))
    dictionaries = tuple(data.get("dictionaries", ()))
    return Recipe(matrices=tuple(specs), dictionaries=dictionaries,
                  corpus_id=str(data.get("corpus_id", "")),
                  window=int(data.get("window", 2)),
                  min_dims=int(data.get("min_dims", DEFAULT_MIN_DIMS)),
                  cutoff=int(data.get("cutoff", 17074)),
                  grav=grav, context_pos=context_pos)


def derive_dimension_sets(recipe, entries, rows):
    """DimensionSet per recipe matrix; refusals propagate to the caller."""
    dims = []
    for spec in recipe.matrices:
        min_dims = spec.min_dims if spec.min_dims is not None else recipe.min_dims
        if spec.kind == "generic":
            dims.append(DimensionSet(name=spec.name, labels=tuple(rows.words),
                                     kind="generic"))
        elif spec.kind == "verb":
            verbs = sorted({e.lemma for e in entries
                            if e.sem_tags & set(spec.tags + spec.merges)})
            if len(verbs) < min_dims:
                raise DomainTooSmallError(spec.name, len(verbs), min_dims)
            dims.append(triple_verb_dimensions(
                verbs, name=spec.name,
                source_tags=tuple(sorted(set(spec.tags + spec.merges)))))
        else:
            dims.append(select_domain(entries, spec.tags, spec.merges,
                                      min_dims=min_dims, name=spec.name))
    return dims


def run_build(corpus_path, freq_path, recipe_path, out_dir, workers=1,
              on_error="raise"):
    """Full build: read inputs, count every recipe matrix, write containers.

    Returns the catalog path.  Matrix containers land in ``out_dir`` as
    ``<NAME>.doma`` with a ``.manifest`` sibling and a ``catalog.json``.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    recipe = load_recipe(recipe_path)
    entries = []
    recipe_dir = Path(recipe_path).parent
    for dict_path in recipe.dictionaries:
        p = Path(dict_path)
        entries.extend(load_dictionary(p if p.is_absolute() else recipe_dir / p))
    rows = build_row_vocab(read_freq_list(freq_path), cutoff=recipe.cutoff,
                           source=str(freq_path))
    dims_list = derive_dimension_sets(recipe, entries, rows)
    corpus = read_corpus(corpus_path, on_error=on_error)
    matrices = build_matrices(
        corpus, rows, dims_list, window=recipe.window, grav=recipe.grav,
        context_pos=recipe.context_pos, workers=workers,
        corpus_id=recipe.corpus_id or str(corpus_path))
    catalog = {}
    for m in matrices:
        path = out_dir / f"{m.name}.doma"
        matrixio.write_matrix(m, path)
        matrixio.write_manifest(m, out_dir / f"{m.name}.manifest")
        catalog[m.name] = path.name
    return matrixio.write_catalog(catalog, out_dir / "catalog.json")
