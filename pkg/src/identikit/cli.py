"""Command-line pipeline: synth, filter, embed, featurize, train, evaluate,
predict, analyze, rank-features, kstest.

All report artifacts are self-describing CSV ('#' comment lines carry format
tag, seed, config digest) or versioned JSON. Expected failures exit nonzero
with one line on stderr: "error: <Category>: <detail>".
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from typing import Any, Iterable, Sequence

import numpy as np

from .analysis import (
    KS_FIELDS,
    chi_square_rank,
    content_practice_report,
    ecdf_points,
    ks_two_sample,
    label_distribution,
)
from .artifacts import (
    config_hash,
    csv_text,
    derive_seed,
    format_float,
    read_csv,
    write_csv,
    write_json,
)
from .embedding import (
    SkipgramParams,
    bio_score,
    preprocess_bio,
    score_bios,
    train_skipgram,
)
from .errors import InvalidSpec, MalformedLine, SchemaMismatch, ToolkitError
from .evaluation import EvalReport, cross_validate, format_report_table
from .features import (
    FEATURE_NAMES,
    FeatureCategory,
    N_FEATURES,
    extract_features,
    project_category,
)
from .ingestion import (
    KeywordSet,
    StreamCounters,
    UserProfile,
    extract_user_profiles,
    load_keywords,
    matches_keywords,
    parse_tweet_line,
    stream_filter,
)
from .learners import GBDTParams
from .modelio import (
    ModelBundle,
    load_embedding,
    load_model,
    save_embedding,
    save_model,
)
from .multiclass import (
    CLASS_LABELS,
    Framework,
    N_CLASSES,
    class_of_label,
    framework_learner_count,
    predict_batch,
    train_framework,
)
from .synth import default_spec, generate, spec_from_dict

logger = logging.getLogger(__name__)

DEFAULT_SEED = 7
DEFAULT_ESTIMATORS = 100
DEFAULT_FOLDS = 10


def _open_lines(path: str) -> Iterable[str]:
    if path == "-":
        return sys.stdin
    return open(path, "r", encoding="utf-8")


def _maybe_keywords(path: str | None) -> KeywordSet | None:
    return load_keywords(path) if path else None


def _load_labels(path: str) -> dict[str, int]:
    """user_id,label CSV; '#' lines and a literal header row are skipped."""
    mapping: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for row_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = [c.strip() for c in line.split(",")]
            if len(cells) != 2:
                raise MalformedLine(f"labels row {row_no}: expected 2 columns")
            uid, label = cells
            if (uid, label) == ("user_id", "label"):
                continue
            try:
                mapping[uid] = class_of_label(label)
            except ValueError as exc:
                raise MalformedLine(f"labels row {row_no}: {exc}") from None
    return mapping


def _load_features_csv(path: str) -> tuple[list[str], np.ndarray]:
    header, rows = read_csv(path)
    expected = ["user_id", *FEATURE_NAMES]
    if header != expected:
        raise SchemaMismatch(
            f"{path}: unexpected columns (got {len(header)}, "
            f"expected {len(expected)})"
        )
    ids = [r[0] for r in rows]
    X = np.array(
        [[float(c) for c in r[1:]] for r in rows], dtype=np.float64
    ).reshape(len(rows), N_FEATURES)
    return ids, X


def _join_features_labels(
    ids: Sequence[str], X: np.ndarray, labels: dict[str, int]
) -> tuple[list[str], np.ndarray, np.ndarray, int]:
    """Rows of X that have labels, in file order, plus the count of labeled
    users that never appeared in the feature table."""
    keep = [i for i, uid in enumerate(ids) if uid in labels]
    kept_ids = [ids[i] for i in keep]
    y = np.array([labels[uid] for uid in kept_ids], dtype=np.int64)
    seen = set(kept_ids)
    unresolved = sum(1 for uid in labels if uid not in seen)
    return kept_ids, X[keep], y, unresolved


def _profiles_from_stream(
    path: str, keywords: KeywordSet | None
) -> tuple[list[UserProfile], StreamCounters]:
    counters = StreamCounters()
    lines = _open_lines(path)
    try:
        profiles = extract_user_profiles(stream_filter(lines, keywords, counters))
    finally:
        if lines is not sys.stdin:
            lines.close()
    return profiles, counters


def _feature_matrix(
    profiles: Sequence[UserProfile], scores: Sequence[float]
) -> np.ndarray:
    X = np.empty((len(profiles), N_FEATURES), dtype=np.float64)
    for i, (profile, score) in enumerate(zip(profiles, scores)):
        X[i] = extract_features(profile, score)
    return X


def _print_json(obj: dict[str, Any]) -> None:
    print(json.dumps(obj, sort_keys=False))


# --- commands -------------------------------------------------------------


def cmd_synth(args: argparse.Namespace) -> int:
    if args.spec:
        with open(args.spec, "r", encoding="utf-8") as handle:
            spec = spec_from_dict(json.load(handle))
    else:
        spec = default_spec()
    seed = derive_seed(args.seed, "synth")
    lines, labels = generate(spec, args.users, seed=seed)
    os.makedirs(args.output, exist_ok=True)
    tweets_path = os.path.join(args.output, "tweets.jsonl")
    labels_path = os.path.join(args.output, "labels.csv")
    with open(tweets_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    with open(labels_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("# format: identikit/labels v1\n")
        handle.write(f"# seed: {args.seed}\n")
        handle.write("user_id,label\n")
        for uid, cls in labels:
            handle.write(f"{uid},{CLASS_LABELS[cls]}\n")
    counts = [0] * len(spec.classes)
    for _, cls in labels:
        counts[cls] += 1
    _print_json(
        {
            "users": args.users,
            "tweets": len(lines),
            "class_counts": counts,
            "seed": args.seed,
        }
    )
    return 0


def cmd_filter(args: argparse.Namespace) -> int:
    keywords = load_keywords(args.keywords)
    counters = StreamCounters()
    out = (
        open(args.output, "w", encoding="utf-8", newline="\n")
        if args.output
        else sys.stdout
    )
    lines = _open_lines(args.input)
    try:
        for line in lines:
            counters.read += 1
            if not line.strip():
                continue
            try:
                record = parse_tweet_line(line, line_no=counters.read)
            except MalformedLine as exc:
                counters.malformed += 1
                logger.warning("skipping line %d: %s", counters.read, exc.reason)
                continue
            if matches_keywords(record.text, keywords):
                counters.matched += 1
                out.write(line.rstrip("\n") + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
        if lines is not sys.stdin:
            lines.close()
    print(json.dumps(counters.as_dict()), file=sys.stderr)
    return 0


def cmd_embed(args: argparse.Namespace) -> int:
    profiles, counters = _profiles_from_stream(
        args.input, _maybe_keywords(args.keywords)
    )
    corpus = [preprocess_bio(p.bio) for p in profiles]
    params = SkipgramParams()
    model = train_skipgram(
        corpus, params, seed=derive_seed(args.seed, "embedding")
    )
    os.makedirs(args.model_dir, exist_ok=True)
    save_embedding(model, os.path.join(args.model_dir, "embedding.json"))
    _print_json(
        {
            "users": len(profiles),
            "vocabulary": len(model.vocab),
            "trained_pairs": model.trained_pairs,
            "stream": counters.as_dict(),
        }
    )
    return 0


def cmd_featurize(args: argparse.Namespace) -> int:
    profiles, counters = _profiles_from_stream(
        args.input, _maybe_keywords(args.keywords)
    )
    embedding_path = args.embedding or os.path.join(
        args.model_dir, "embedding.json"
    )
    embedding = load_embedding(embedding_path)
    scores = score_bios(embedding, (p.bio for p in profiles))
    X = _feature_matrix(profiles, scores)
    digest = config_hash(
        {
            "stage": "featurize",
            "embedding_params": embedding.params.to_dict(),
            "embedding_seed": embedding.seed,
        }
    )
    rows = (
        [profiles[i].user_id, *[float(v) for v in X[i]]]
        for i in range(len(profiles))
    )
    write_csv(
        args.output,
        "features",
        {"seed": args.seed, "config": digest},
        ["user_id", *FEATURE_NAMES],
        rows,
    )
    _print_json({"users": len(profiles), "stream": counters.as_dict()})
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    ids, X = _load_features_csv(args.input)
    labels = _load_labels(args.labels)
    _, Xl, y, unresolved = _join_features_labels(ids, X, labels)
    if unresolved:
        logger.warning("%d labeled users missing from features", unresolved)
    category = FeatureCategory(args.features)
    params = GBDTParams(n_estimators=args.estimators)
    digest = config_hash(
        {
            "stage": "train",
            "framework": args.framework,
            "category": category.value,
            "params": params.to_dict(),
            "seed": args.seed,
        }
    )
    model = train_framework(
        args.framework,
        project_category(Xl, category),
        y,
        params=params,
        seed=derive_seed(args.seed, "train"),
    )
    bundle = ModelBundle(
        category=category,
        model=model,
        class_labels=CLASS_LABELS,
        seed=args.seed,
        config_digest=digest,
    )
    os.makedirs(args.model_dir, exist_ok=True)
    save_model(bundle, os.path.join(args.model_dir, "model.json"))
    _print_json(
        {
            "rows": int(Xl.shape[0]),
            "unresolved_labels": unresolved,
            "class_counts": np.bincount(y, minlength=N_CLASSES).tolist(),
            "framework": args.framework,
            "category": category.value,
            "learners": model.n_learners,
        }
    )
    return 0


def _grid_cells(args: argparse.Namespace) -> list[tuple[str, str]]:
    if args.grid:
        return [
            (fw.value, cat.value)
            for fw in Framework
            for cat in (
                FeatureCategory.SOCIAL,
                FeatureCategory.ACTIVITY,
                FeatureCategory.REPRESENTATION,
                FeatureCategory.ALL,
            )
        ]
    return [(args.framework, args.features)]


def _refit_fold_features(
    args: argparse.Namespace, kept_ids: list[str], Xl: np.ndarray
):
    """Strict-mode callback: retrain the embedding on each fold's training
    bios only, then rescore every row's bio with that fold's model."""
    profiles, _ = _profiles_from_stream(
        args.raw_input, _maybe_keywords(args.keywords)
    )
    by_id = {p.user_id: p for p in profiles}
    corpus = [
        preprocess_bio(by_id[uid].bio) if uid in by_id else []
        for uid in kept_ids
    ]
    slot = FEATURE_NAMES.index("embedding_score")
    fold_counter = iter(range(10**9))

    def fold_features(train_idx: np.ndarray) -> np.ndarray:
        fold = next(fold_counter)
        model = train_skipgram(
            [corpus[j] for j in train_idx],
            SkipgramParams(),
            seed=derive_seed(args.seed, f"embedding-fold{fold}"),
        )
        Xf = Xl.copy()
        Xf[:, slot] = [bio_score(model, toks) for toks in corpus]
        return Xf

    return fold_features


def cmd_evaluate(args: argparse.Namespace) -> int:
    if args.folds < 2:
        raise InvalidSpec("evaluate requires --folds >= 2")
    if args.refit_embedding and not args.raw_input:
        raise InvalidSpec("--refit-embedding requires --raw-input")
    ids, X = _load_features_csv(args.input)
    labels = _load_labels(args.labels)
    kept_ids, Xl, y, unresolved = _join_features_labels(ids, X, labels)
    if unresolved:
        logger.warning("%d labeled users missing from features", unresolved)
    params = GBDTParams(n_estimators=args.estimators)
    fold_seed = derive_seed(args.seed, "folds")
    reports: list[EvalReport] = []
    learner_counts: list[int] = []
    for framework, category in _grid_cells(args):
        fold_features = (
            _refit_fold_features(args, kept_ids, Xl)
            if args.refit_embedding
            else None
        )
        reports.append(
            cross_validate(
                framework,
                category,
                Xl,
                y,
                params=params,
                n_folds=args.folds,
                seed=fold_seed,
                fold_features=fold_features,
            )
        )
        learner_counts.append(framework_learner_count(framework, N_CLASSES))
    digest = config_hash(
        {
            "stage": "evaluate",
            "grid": bool(args.grid),
            "framework": args.framework,
            "category": args.features,
            "params": params.to_dict(),
            "folds": args.folds,
            "refit_embedding": bool(args.refit_embedding),
            "seed": args.seed,
        }
    )
    os.makedirs(args.report_dir, exist_ok=True)
    report_dicts = []
    for rep, n_learners in zip(reports, learner_counts):
        d = rep.to_dict()
        d["base_learners"] = n_learners
        report_dicts.append(d)
    write_json(
        os.path.join(args.report_dir, "report.json"),
        "evaluation",
        {
            "seed": args.seed,
            "config": digest,
            "reports": report_dicts,
        },
    )
    table = format_report_table(reports)
    with open(
        os.path.join(args.report_dir, "report.txt"),
        "w",
        encoding="utf-8",
        newline="\n",
    ) as handle:
        handle.write(table)
    sys.stdout.write(table)
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    bundle = load_model(os.path.join(args.model_dir, "model.json"))
    embedding = load_embedding(os.path.join(args.model_dir, "embedding.json"))
    keywords = _maybe_keywords(args.keywords)
    counters = StreamCounters()
    seen: set[str] = set()

    header_meta = csv_text(
        "predictions",
        {"seed": bundle.seed, "config": bundle.config_digest},
        ["user_id", "predicted_class", "predicted_label", *[
            f"score_{k}" for k in range(N_CLASSES)
        ]],
        [],
    )

    out_path = args.output
    if out_path:
        directory = os.path.dirname(os.path.abspath(out_path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        out = os.fdopen(fd, "w", encoding="utf-8", newline="\n")
    else:
        tmp = None
        out = sys.stdout
    lines = _open_lines(args.input)
    try:
        out.write(header_meta)
        # First sighting wins: realtime scoring cannot wait for a later,
        # possibly fresher profile snapshot.
        for record in stream_filter(lines, keywords, counters):
            uid = record.user.user_id
            if uid in seen:
                continue
            seen.add(uid)
            score = score_bios(embedding, [record.user.bio])[0]
            x = extract_features(record.user, score)
            xp = project_category(x.reshape(1, -1), bundle.category)
            classes, scores = predict_batch(bundle.model, xp)
            cls = int(classes[0])
            cells = [
                uid,
                str(cls),
                bundle.class_labels[cls],
                *[format_float(v) for v in scores[0]],
            ]
            out.write(",".join(cells) + "\n")
        if tmp is not None:
            out.close()
            os.replace(tmp, out_path)
            tmp = None
    finally:
        if tmp is not None:
            out.close()
            os.unlink(tmp)
        if lines is not sys.stdin:
            lines.close()
    summary = counters.as_dict()
    summary["users_scored"] = len(seen)
    print(json.dumps(summary), file=sys.stderr)
    return 0


def _class_map_for_analyze(args: argparse.Namespace) -> dict[str, int]:
    if args.labels:
        return _load_labels(args.labels)
    header, rows = read_csv(args.predictions)
    try:
        uid_col = header.index("user_id")
        cls_col = header.index("predicted_class")
    except ValueError:
        raise SchemaMismatch(
            f"{args.predictions}: need user_id and predicted_class columns"
        ) from None
    return {row[uid_col]: int(row[cls_col]) for row in rows}


def cmd_analyze(args: argparse.Namespace) -> int:
    class_of = _class_map_for_analyze(args)
    counters = StreamCounters()
    lines = _open_lines(args.input)
    try:
        records = list(
            stream_filter(lines, _maybe_keywords(args.keywords), counters)
        )
    finally:
        if lines is not sys.stdin:
            lines.close()
    report = content_practice_report(records, class_of)
    mapped_classes = np.array(sorted(class_of.values()), dtype=np.int64)
    dist = label_distribution(mapped_classes, n_classes=N_CLASSES)
    mapped_counts = np.bincount(mapped_classes, minlength=N_CLASSES)

    digest = config_hash({"stage": "analyze", "seed": args.seed})
    meta = {"seed": args.seed, "config": digest}
    os.makedirs(args.report_dir, exist_ok=True)
    write_csv(
        os.path.join(args.report_dir, "class_distribution.csv"),
        "class-distribution",
        meta,
        ["class", "label", "count", "percent"],
        (
            [k, CLASS_LABELS[k], int(mapped_counts[k]), float(dist[k])]
            for k in range(N_CLASSES)
        ),
    )
    per_class = report.per_class
    write_csv(
        os.path.join(args.report_dir, "url_shares.csv"),
        "url-shares",
        meta,
        ["class", "label", "tweet_count", "url_share"],
        (
            [k, CLASS_LABELS[k], per_class[k].tweet_count, per_class[k].url_share]
            for k in sorted(per_class)
        ),
    )
    write_csv(
        os.path.join(args.report_dir, "mention_shares.csv"),
        "mention-shares",
        meta,
        ["class", "label", "tweet_count", "mention_share"],
        (
            [
                k,
                CLASS_LABELS[k],
                per_class[k].tweet_count,
                per_class[k].mention_share,
            ]
            for k in sorted(per_class)
        ),
    )
    write_csv(
        os.path.join(args.report_dir, "connectivity.csv"),
        "connectivity",
        meta,
        ["class", "label", "user_count", "mean_friends", "mean_followers"],
        (
            [
                k,
                CLASS_LABELS[k],
                per_class[k].user_count,
                per_class[k].mean_friends,
                per_class[k].mean_followers,
            ]
            for k in sorted(per_class)
        ),
    )
    write_json(
        os.path.join(args.report_dir, "analysis.json"),
        "analysis",
        {
            "seed": args.seed,
            "config": digest,
            "stream": counters.as_dict(),
            "class_distribution": {
                CLASS_LABELS[k]: float(dist[k]) for k in range(N_CLASSES)
            },
            "practices": report.to_dict(),
        },
    )
    _print_json({"tweets": counters.matched, "unmapped": report.unmapped_tweets})
    return 0


def cmd_rank_features(args: argparse.Namespace) -> int:
    ids, X = _load_features_csv(args.input)
    labels = _load_labels(args.labels)
    _, Xl, y, unresolved = _join_features_labels(ids, X, labels)
    if unresolved:
        logger.warning("%d labeled users missing from features", unresolved)
    ranking = chi_square_rank(Xl, y, bins=args.bins)
    digest = config_hash({"stage": "rank-features", "bins": args.bins, "seed": args.seed})
    os.makedirs(args.report_dir, exist_ok=True)
    write_csv(
        os.path.join(args.report_dir, "top_features.csv"),
        "feature-ranking",
        {"seed": args.seed, "config": digest},
        ["rank", "feature", "chi2", "dof", "degenerate"],
        (
            [i + 1, f.name, f.chi2, f.dof, str(f.degenerate).lower()]
            for i, f in enumerate(ranking.features)
        ),
    )
    _print_json({"top": ranking.names()[:5]})
    return 0


def cmd_kstest(args: argparse.Namespace) -> int:
    profiles, counters = _profiles_from_stream(
        args.input, _maybe_keywords(args.keywords)
    )
    labels = _load_labels(args.labels)
    by_class: dict[int, list[UserProfile]] = {}
    for profile in profiles:
        cls = labels.get(profile.user_id)
        if cls is not None:
            by_class.setdefault(cls, []).append(profile)
    present = sorted(by_class)
    digest = config_hash({"stage": "kstest", "seed": args.seed})
    meta = {"seed": args.seed, "config": digest}
    test_rows: list[list[Any]] = []
    ecdf_rows: list[list[Any]] = []
    for field in KS_FIELDS:
        samples = {
            cls: [getattr(p, field) for p in by_class[cls]] for cls in present
        }
        for cls in present:
            values, fractions = ecdf_points(samples[cls])
            for v, frac in zip(values, fractions):
                ecdf_rows.append(
                    [field, cls, CLASS_LABELS[cls], float(v), float(frac)]
                )
        for a_idx in range(len(present)):
            for b_idx in range(a_idx + 1, len(present)):
                ci, cj = present[a_idx], present[b_idx]
                result = ks_two_sample(samples[ci], samples[cj])
                test_rows.append(
                    [
                        field,
                        ci,
                        cj,
                        result.n1,
                        result.n2,
                        result.d_statistic,
                        result.p_value,
                        str(result.p_value < 0.01).lower(),
                    ]
                )
    os.makedirs(args.report_dir, exist_ok=True)
    write_csv(
        os.path.join(args.report_dir, "kstest.csv"),
        "ks-tests",
        meta,
        [
            "field", "class_a", "class_b", "n_a", "n_b",
            "d_statistic", "p_value", "significant_0.01",
        ],
        test_rows,
    )
    write_csv(
        os.path.join(args.report_dir, "ecdf.csv"),
        "ecdf-points",
        meta,
        ["field", "class", "label", "value", "cum_fraction"],
        ecdf_rows,
    )
    _print_json(
        {
            "fields": list(KS_FIELDS),
            "classes": present,
            "tests": len(test_rows),
            "stream": counters.as_dict(),
        }
    )
    return 0


# --- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="identikit",
        description=(
            "Classify social-media users as organization, organization-"
            "affiliated, non-affiliated, or none, from profile metadata."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("synth", help="generate a labeled synthetic stream")
    p.add_argument("--users", type=int, default=2000)
    p.add_argument("--spec", help="JSON overrides for the generator spec")
    p.add_argument("--output", default=".", help="directory for tweets.jsonl/labels.csv")
    add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("filter", help="keep stream lines matching keywords")
    p.add_argument("--input", required=True, help="tweet JSONL ('-' = stdin)")
    p.add_argument("--keywords", required=True)
    p.add_argument("--output", help="filtered JSONL (default stdout)")
    add_common(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("embed", help="train bio embeddings")
    p.add_argument("--input", required=True)
    p.add_argument("--keywords")
    p.add_argument("--model-dir", default="model")
    add_common(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("featurize", help="emit the per-user feature table")
    p.add_argument("--input", required=True)
    p.add_argument("--keywords")
    p.add_argument("--model-dir", default="model")
    p.add_argument("--embedding", help="embedding.json (default under --model-dir)")
    p.add_argument("--output", default="features.csv")
    add_common(p)
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("train", help="fit a multiclass model on features")
    p.add_argument("--input", required=True, help="features.csv")
    p.add_argument("--labels", required=True)
    p.add_argument("--framework", choices=[f.value for f in Framework], default="single")
    p.add_argument(
        "--features",
        choices=[c.value for c in FeatureCategory],
        default="all",
    )
    p.add_argument("--estimators", type=int, default=DEFAULT_ESTIMATORS)
    p.add_argument("--model-dir", default="model")
    add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="stratified cross-validation report")
    p.add_argument("--input", required=True, help="features.csv")
    p.add_argument("--labels", required=True)
    p.add_argument("--framework", choices=[f.value for f in Framework], default="single")
    p.add_argument(
        "--features",
        choices=[c.value for c in FeatureCategory],
        default="all",
    )
    p.add_argument("--estimators", type=int, default=DEFAULT_ESTIMATORS)
    p.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    p.add_argument("--grid", action="store_true", help="all frameworks x categories")
    p.add_argument(
        "--refit-embedding",
        action="store_true",
        help="strict mode: retrain the bio embedding per fold on training bios",
    )
    p.add_argument("--raw-input", help="tweet JSONL (required by --refit-embedding)")
    p.add_argument("--keywords")
    p.add_argument("--report-dir", default="report")
    add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="score a stream with a saved model")
    p.add_argument("--input", required=True)
    p.add_argument("--keywords")
    p.add_argument("--model-dir", default="model")
    p.add_argument("--output", help="predictions CSV (default stdout)")
    add_common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("analyze", help="class distribution and content practices")
    p.add_argument("--input", required=True)
    p.add_argument("--keywords")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--labels")
    group.add_argument("--predictions", help="predictions CSV from `predict`")
    p.add_argument("--report-dir", default="report")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("rank-features", help="chi-square feature ranking")
    p.add_argument("--input", required=True, help="features.csv")
    p.add_argument("--labels", required=True)
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--report-dir", default="report")
    add_common(p)
    p.set_defaults(func=cmd_rank_features)

    p = sub.add_parser("kstest", help="two-sample K-S tests per class pair")
    p.add_argument("--input", required=True, help="tweet JSONL")
    p.add_argument("--keywords")
    p.add_argument("--labels", required=True)
    p.add_argument("--report-dir", default="report")
    add_common(p)
    p.set_defaults(func=cmd_kstest)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ToolkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: IOError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
