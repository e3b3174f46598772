"""Prototype-based attribution of discrete features to concept nouns.

A feature (say ``ha_corna``) is anchored by a handful of prototype nouns
and governed by one domain matrix.  For a target word the pipeline is:

1. raw similarity S with every prototype in the governing matrix, and Sg in
   the generic matrix;
2. weighted blend  Wsim = (2*S + Sg) / 3;
3. percent share   Psim = 100 * Wsim / sum(Wsim)  over the full prototype
   set, so the values of one target/matrix pair always total 100;
4. per feature: mean Psim over its prototypes (S_rel) and over all other
   prototypes (S_unrel), plus a centrality bonus C_t = log_Np(k) where k
   counts the feature's prototypes whose Psim exceeds CK;
5. index F_t = S_rel - S_unrel + C_t; the feature is assigned when
   F_t > PK.

Psim lives on the percent scale: with 47 prototypes a flat profile sits
near 2.13, which is what makes CK thresholds around 3-4 meaningful.
"""

import math
import warnings
from dataclasses import dataclass

import yaml

from .vecspace import DegenerateVectorWarning, OOVError, cosine, get_vector


class DegenerateSimilarityError(ValueError):
    """Every prototype similarity is zero; Psim is undefined for the target."""


class FeatureConfigError(ValueError):
    """Feature configuration file violates the expected schema."""


@dataclass(frozen=True)
class FeatureSpec:
    id: str
    family: str
    matrix: str
    prototypes: tuple

    def __post_init__(self):
        if not self.prototypes:
            raise FeatureConfigError(f"feature {self.id!r} has no prototypes")
        if len(set(self.prototypes)) != len(self.prototypes):
            raise FeatureConfigError(f"feature {self.id!r} repeats a prototype")


@dataclass(frozen=True)
class FeatureConfig:
    prototypes: tuple            # the full prototype set (Psim denominator)
    features: tuple              # FeatureSpec, validated against prototypes

    def __post_init__(self):
        pset = set(self.prototypes)
        if len(pset) != len(self.prototypes):
            raise FeatureConfigError("duplicate prototypes in configuration")
        for f in self.features:
            unknown = set(f.prototypes) - pset
            if unknown:
                raise FeatureConfigError(
                    f"feature {f.id!r} references unknown prototypes "
                    f"{sorted(unknown)}")

    @property
    def matrices(self):
        return sorted({f.matrix for f in self.features})


@dataclass(frozen=True)
class SimTable:
    """Similarity ladder of one target against the prototype set, one matrix."""

    target: str
    matrix: str
    prototypes: tuple
    raw: tuple                   # S(p, t)
    generic: tuple               # Sg(p, t)
    wsim: tuple
    psim: tuple

    def psim_of(self):
        return dict(zip(self.prototypes, self.psim))


@dataclass(frozen=True)
class FeatureScore:
    target: str
    feature: str
    s_rel: float
    s_unrel: float
    c_t: float
    f_t: float
    assigned: bool


def weighted_similarity(s, sg):
    """Blend of domain and generic similarity: (2*S + Sg) / 3."""
    return (2.0 * s + sg) / 3.0


def percentage_similarity(wsims):
    """Percent share of each Wsim in their total; values sum to 100.

    Accepts a mapping prototype -> Wsim or a plain sequence, returning the
    same shape.  All-zero input raises DegenerateSimilarityError.
    """
    if isinstance(wsims, dict):
        keys = list(wsims)
        vals = [wsims[k] for k in keys]
        shares = percentage_similarity(vals)
        return dict(zip(keys, shares))
    total = sum(wsims)
    if total <= 0:
        raise DegenerateSimilarityError(
            "sum of weighted similarities is not positive")
    return [100.0 * w / total for w in wsims]


def related_unrelated_averages(psims, feature):
    """Mean Psim over the feature's prototypes and over all the others."""
    related = [psims[p] for p in feature.prototypes]
    unrelated = [v for p, v in psims.items() if p not in set(feature.prototypes)]
    if not unrelated:
        raise ValueError(
            f"feature {feature.id!r} covers every prototype; "
            "unrelated average undefined")
    return (sum(related) / len(related), sum(unrelated) / len(unrelated))


def centrality(psims, feature, ck):
    """log_Np of the number of the feature's prototypes with Psim above CK.

    Np is the feature's prototype count (the log base), so a feature whose
    prototypes all clear CK scores exactly 1.  Zero qualifying prototypes
    clamp to 0 (the raw logarithm is undefined there).
    """
    np_ = len(feature.prototypes)
    if np_ < 2:
        raise ValueError(
            f"feature {feature.id!r} has a single prototype; log base "
            "undefined, merge or exempt it")
    k = sum(1 for p in feature.prototypes if psims[p] > ck)
    if k == 0:
        return 0.0
    return math.log(k, np_)


def feature_index(s_rel, s_unrel, c_t):
    """Association index: S_rel - S_unrel + C_t."""
    return s_rel - s_unrel + c_t


def score_feature(target, psims, feature, pk, ck):
    """FeatureScore of one target/feature pair from a Psim profile."""
    s_rel, s_unrel = related_unrelated_averages(psims, feature)
    c_t = centrality(psims, feature, ck)
    f_t = feature_index(s_rel, s_unrel, c_t)
    return FeatureScore(target=target, feature=feature.id, s_rel=s_rel,
                        s_unrel=s_unrel, c_t=c_t, f_t=f_t, assigned=f_t > pk)


def sim_table(target, prototypes, domain_matrix, generic_matrix,
              measure=cosine):
    """Raw, generic, weighted and percent similarities of one target.

    The percent denominator runs over the *full* prototype set, not over
    any single feature's prototypes.
    """
    t_dom = get_vector(domain_matrix, target)
    t_gen = get_vector(generic_matrix, target)
    raw, generic = [], []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateVectorWarning)
        for p in prototypes:
            raw.append(measure(get_vector(domain_matrix, p).values, t_dom.values))
            generic.append(measure(get_vector(generic_matrix, p).values,
                                   t_gen.values))
    wsim = [weighted_similarity(s, sg) for s, sg in zip(raw, generic)]
    try:
        psim = percentage_similarity(wsim)
    except DegenerateSimilarityError:
        raise DegenerateSimilarityError(
            f"target {target!r} has no similarity mass against the prototype "
            f"set in matrix {domain_matrix.name!r}") from None
    return SimTable(target=target, matrix=domain_matrix.name,
                    prototypes=tuple(prototypes), raw=tuple(raw),
                    generic=tuple(generic), wsim=tuple(wsim), psim=tuple(psim))


def _psim_profiles(target, config, matrices, generic, measure=cosine):
    """Psim per governing matrix, computed once and shared across features."""
    profiles = {}
    for name in config.matrices:
        if name not in matrices:
            raise KeyError(f"governing matrix {name!r} not loaded")
        table = sim_table(target, config.prototypes, matrices[name], generic,
                          measure)
        profiles[name] = table.psim_of()
    return profiles


def assign_features(target, config, matrices, generic, pk, ck, measure=cosine):
    """Run the full pipeline for one target over every configured feature."""
    profiles = _psim_profiles(target, config, matrices, generic, measure)
    return [score_feature(target, profiles[f.matrix], f, pk, ck)
            for f in config.features]


@dataclass(frozen=True)
class EvalResult:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    degenerate_precision: bool = False   # no assignments at all


def evaluate(assignments, gold):
    """Micro-averaged precision/recall/F1 over (target, feature) pairs.

    ``gold`` maps each evaluated target to its correct feature-id set; a
    target missing from gold is an error.  With no assignments at all the
    undefined precision is reported as 0 and flagged.
    """
    targets = {a.target for a in assignments}
    missing = targets - set(gold)
    if missing:
        raise ValueError(f"gold standard missing targets {sorted(missing)}")
    assigned = {(a.target, a.feature) for a in assignments if a.assigned}
    gold_pairs = {(t, f) for t in targets for f in gold[t]}
    tp = len(assigned & gold_pairs)
    fp = len(assigned - gold_pairs)
    fn = len(gold_pairs - assigned)
    degenerate = not assigned
    precision = 0.0 if degenerate else tp / (tp + fp)
    recall = tp / (tp + fn) if (tp + fn) else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall > 0 else 0.0)
    return EvalResult(precision=precision, recall=recall, f1=f1, tp=tp, fp=fp,
                      fn=fn, degenerate_precision=degenerate)


@dataclass(frozen=True)
class SweepResult:
    rows: tuple                  # (pk, ck, precision, recall, f1)
    best: tuple                  # the argmax row; first by (pk, ck) on ties

    def best_f1(self):
        return self.best[4]


def sweep(targets, config, matrices, generic, pk_grid, ck_grid, gold,
          measure=cosine):
    """Evaluate every (PK, CK) grid point.

    Psim profiles and the related/unrelated averages depend on neither PK
    nor CK, so they are computed once per target; only centrality and the
    assignment threshold vary across the grid.
    """
    pk_grid = list(pk_grid)
    ck_grid = list(ck_grid)
    if not pk_grid or not ck_grid:
        raise ValueError("sweep requires nonempty PK and CK grids")
    profiles = {t: _psim_profiles(t, config, matrices, generic, measure)
                for t in targets}
    averages = {
        (t, f.id): related_unrelated_averages(profiles[t][f.matrix], f)
        for t in targets for f in config.features}
    rows = []
    for ck in ck_grid:
        cts = {(t, f.id): centrality(profiles[t][f.matrix], f, ck)
               for t in targets for f in config.features}
        for pk in pk_grid:
            assignments = []
            for t in targets:
                for f in config.features:
                    s_rel, s_unrel = averages[(t, f.id)]
                    c_t = cts[(t, f.id)]
                    f_t = feature_index(s_rel, s_unrel, c_t)
                    assignments.append(FeatureScore(
                        target=t, feature=f.id, s_rel=s_rel, s_unrel=s_unrel,
                        c_t=c_t, f_t=f_t, assigned=f_t > pk))
            result = evaluate(assignments, gold)
            rows.append((pk, ck, result.precision, result.recall, result.f1))
    best = max(rows, key=lambda r: (r[4], -r[0], -r[1]))
    return SweepResult(rows=tuple(rows), best=best)


def load_feature_config(path):
    """Feature configuration: YAML with ``prototypes`` and ``features`` lists."""
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise FeatureConfigError(f"{path}: expected a mapping at top level")
    protos = data.get("prototypes")
    feats = data.get("features")
    if not isinstance(protos, list) or not protos:
        raise FeatureConfigError(f"{path}: 'prototypes' must be a nonempty list")
    if not isinstance(feats, list) or not feats:
        raise FeatureConfigError(f"{path}: 'features' must be a nonempty list")
    specs = []
    for rec in feats:
        if not isinstance(rec, dict):
            raise FeatureConfigError(f"{path}: feature record {rec!r} not a map")
        try:
            specs.append(FeatureSpec(id=rec["id"], family=rec.get("family", ""),
                                     matrix=rec["matrix"],
                                     prototypes=tuple(rec["prototypes"])))
        except KeyError as exc:
            raise FeatureConfigError(
                f"{path}: feature record missing key {exc}") from None
    return FeatureConfig(prototypes=tuple(protos), features=tuple(specs))


def load_gold(path):
    """Gold standard: ``target<TAB>feature_id`` lines -> target -> id set."""
    gold = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(
                    f"{path}: line {line_no}: expected target<TAB>feature_id")
            gold.setdefault(parts[0], set()).add(parts[1])
    return gold
