"""Command-line interface: ``lexbias {split,vocab,ld,freqbias,signif,variants,report,synth}``.

Exit codes: 0 success, 1 partial failure, 2 usage or input error. ``signif``
additionally exits 3 when the difference is significant.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

from .corpus import (SplitSpec, TokenizerConfig, build_vocab_profile, load_corpus,
                     load_parallel, split_parallel, write_split)
from .diversity import MTLD_THRESHOLD
from .errors import LexbiasError
from .freqbias import BiasClassConfig, classify_corpora
from .reporting import (DIVERSITY_COLUMNS, FREQBIAS_COLUMNS, SIGNIF_COLUMNS, VARIANT_COLUMNS,
                        ReportConfig, build_manifest, diversity_row, freqbias_rows, run_report,
                        signif_row, to_csv, to_json, variant_rows)
from .significance import METRICS, BootstrapConfig, bootstrap_compare
from .stream import analyze_file, profile_file
from .variants import load_variant_sets, variant_profile

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2
EXIT_SIGNIFICANT = 3


class UsageError(Exception):
    pass


def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--lowercase", action="store_true", help="lowercase before splitting")
    p.add_argument("--strip-punct", action="store_true", help="remove Unicode punctuation from tokens")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=0, help="PRNG seed (split and signif)")
    p.add_argument("--label", action="append", default=None,
                   help="label for the corresponding input; repeat once per input")
    p.add_argument("-o", "--output", help="write the table here instead of stdout")
    p.add_argument("--manifest", help="also write the run manifest to this path")
    return p


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="lexbias", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", parents=[common], help="shuffle and split a parallel corpus")
    p.add_argument("--src", required=True)
    p.add_argument("--trg", required=True)
    p.add_argument("--train", type=int, required=True)
    p.add_argument("--test", type=int, required=True)
    p.add_argument("--dev", type=int, required=True)
    p.add_argument("--prefix", default="split", help="output prefix for <prefix>.{train,test,dev}.{src,trg}")

    p = sub.add_parser("vocab", parents=[common], help="vocabulary sizes and profiles")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--entries", type=int, metavar="N",
                   help="emit the N most probable entries of each profile instead of sizes")

    p = sub.add_parser("ld", parents=[common], help="lexical diversity (Yule's I, TTR, MTLD)")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--mtld-threshold", type=float, default=MTLD_THRESHOLD)

    p = sub.add_parser("freqbias", parents=[common], help="frequency exacerbation/decay classes")
    p.add_argument("--ref", required=True, help="human reference translation")
    p.add_argument("--ref-label")
    p.add_argument("inputs", nargs="+", help="MT outputs")
    p.add_argument("--diff-scale", type=float, default=1e4)

    p = sub.add_parser("signif", parents=[common], help="bootstrap significance of a metric difference")
    p.add_argument("inputs", nargs=2, metavar="CORPUS")
    p.add_argument("--metric", choices=METRICS, default="ttr")
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--mtld-threshold", type=float, default=MTLD_THRESHOLD)

    p = sub.add_parser("variants", parents=[common], help="relative frequencies of translation variants")
    p.add_argument("--sets", required=True, help="JSON list of {source_word, variants}")
    p.add_argument("inputs", nargs="+")

    p = sub.add_parser("report", parents=[common], help="all tables for an HT + MT bundle")
    p.add_argument("config", help="JSON bundle description")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("synth", parents=[common], help="write a synthetic HT/MT pair with variant sets")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--sentences", type=int, default=10000)
    p.add_argument("--concepts", type=int, default=5000)
    p.add_argument("--mean-length", type=float, default=28)
    return parser


def _tokenizer(args):
    return TokenizerConfig(lowercase=args.lowercase, strip_punctuation=args.strip_punct)


def _labels(args, paths):
    if args.label is None:
        return [os.path.splitext(os.path.basename(p))[0] for p in paths]
    if len(args.label) != len(paths):
        raise UsageError(f"got {len(args.label)} --label values for {len(paths)} inputs")
    return list(args.label)


def _emit(args, rows, columns, payload, manifest):
    if args.format == "json":
        text = to_json(dict(payload, manifest=manifest))
    else:
        text = to_csv(rows, columns)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.manifest:
        with open(args.manifest, "w", encoding="utf-8") as fh:
            fh.write(to_json(manifest))


def cmd_split(args):
    tok = _tokenizer(args)
    pc = load_parallel(args.src, args.trg, tok)
    spec = SplitSpec(args.train, args.test, args.dev, args.seed)
    splits = split_parallel(pc, spec)
    write_split(splits, args.prefix, spec, tok, pc.dropped_pairs,
                extra={"available_pairs": len(pc), "source": args.src, "target": args.trg})
    label = (args.label or [f"{pc.source.label}-{pc.target.label}"])[0]
    row = {"label": label, "train": len(splits[0]), "test": len(splits[1]), "dev": len(splits[2]),
           "dropped_pairs": pc.dropped_pairs}
    manifest = build_manifest([("src", args.src), ("trg", args.trg)], tok,
                              {"split": args.seed}, {"sizes": [args.train, args.test, args.dev]},
                              "split")
    _emit(args, [row], ["label", "train", "test", "dev", "dropped_pairs"], {"rows": [row]}, manifest)
    return EXIT_OK


def cmd_vocab(args):
    tok = _tokenizer(args)
    labels = _labels(args, args.inputs)
    profiles = [profile_file(p, tok, lab) for p, lab in zip(args.inputs, labels)]
    manifest = build_manifest(list(zip(labels, args.inputs)), tok, {}, {}, "vocab")
    if args.entries is not None:
        rows = []
        for prof in profiles:
            top = sorted(range(prof.type_count), key=lambda i: (-prof.probability[i], prof.types[i]))
            for i in top[:args.entries]:
                rows.append({"label": prof.label, "type": prof.types[i],
                             "raw_count": int(prof.raw_counts[i]),
                             "length_weighted": float(prof.length_weighted[i]),
                             "probability": float(prof.probability[i])})
        columns = ["label", "type", "raw_count", "length_weighted", "probability"]
    else:
        rows = [{"label": p.label, "types": p.type_count, "tokens": p.token_count} for p in profiles]
        columns = ["label", "types", "tokens"]
    _emit(args, rows, columns, {"rows": rows}, manifest)
    return EXIT_OK


def cmd_ld(args):
    tok = _tokenizer(args)
    labels = _labels(args, args.inputs)
    rows = [diversity_row(analyze_file(p, tok, lab, args.mtld_threshold))
            for p, lab in zip(args.inputs, labels)]
    manifest = build_manifest(list(zip(labels, args.inputs)), tok, {},
                              {"mtld_threshold": args.mtld_threshold}, "ld")
    _emit(args, rows, DIVERSITY_COLUMNS, {"rows": rows}, manifest)
    return EXIT_OK


def cmd_freqbias(args):
    tok = _tokenizer(args)
    labels = _labels(args, args.inputs)
    ref_label = args.ref_label or os.path.splitext(os.path.basename(args.ref))[0]
    config = BiasClassConfig(diff_scale=args.diff_scale)
    ref = profile_file(args.ref, tok, ref_label)
    results = [classify_corpora(ref, profile_file(p, tok, lab), config, lab)
               for p, lab in zip(args.inputs, labels)]
    rows = [r for bc in results for r in freqbias_rows(bc)]
    manifest = build_manifest([(ref_label, args.ref)] + list(zip(labels, args.inputs)), tok, {},
                              {"bias": config.to_dict()}, "freqbias")
    _emit(args, rows, FREQBIAS_COLUMNS,
          {"reference": ref_label, "rows": [bc.to_dict() for bc in results]}, manifest)
    return EXIT_OK


def cmd_signif(args):
    tok = _tokenizer(args)
    labels = _labels(args, args.inputs)
    a, b = (load_corpus(p, tok, lab) for p, lab in zip(args.inputs, labels))
    config = BootstrapConfig(iterations=args.iterations, seed=args.seed, metric=args.metric,
                             mtld_threshold=args.mtld_threshold, alpha=args.alpha)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = bootstrap_compare(a, b, config)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    row = signif_row(labels[0], labels[1], result)
    manifest = build_manifest(list(zip(labels, args.inputs)), tok, {"bootstrap": args.seed},
                              {"metric": args.metric, "iterations": args.iterations,
                               "alpha": args.alpha}, "signif")
    _emit(args, [row], SIGNIF_COLUMNS, {"rows": [row]}, manifest)
    return EXIT_SIGNIFICANT if result.significant else EXIT_OK


def cmd_variants(args):
    tok = _tokenizer(args)
    labels = _labels(args, args.inputs)
    sets = [vs.normalized(tok) for vs in load_variant_sets(args.sets)]
    sources = [profile_file(p, tok, lab) for p, lab in zip(args.inputs, labels)]
    profiles = [variant_profile(sources, vs) for vs in sets]
    rows = variant_rows(profiles)
    manifest = build_manifest(list(zip(labels, args.inputs)) + [("variant_sets", args.sets)], tok,
                              {}, {}, "variants")
    _emit(args, rows, VARIANT_COLUMNS, {"profiles": [p.to_dict() for p in profiles]}, manifest)
    return EXIT_OK


def cmd_report(args):
    overrides = {"lowercase": args.lowercase, "strip_punctuation": args.strip_punct}
    try:
        config = ReportConfig.load(args.config, overrides)
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"{args.config}: {exc}") from None
    return run_report(config, args.out)


def cmd_synth(args):
    from .synthetic import generate_pair, write_pair

    os.makedirs(args.out, exist_ok=True)
    pair = generate_pair(n_sentences=args.sentences, n_concepts=args.concepts,
                         mean_length=args.mean_length, seed=args.seed)
    paths = [os.path.join(args.out, n) for n in ("ht.txt", "mt.txt", "variants.json")]
    write_pair(pair, *paths)
    print(json.dumps({"ht": paths[0], "mt": paths[1], "variants": paths[2],
                      "tokens": pair.ht.token_count, "seed": args.seed}))
    return EXIT_OK


COMMANDS = {
    "split": cmd_split,
    "vocab": cmd_vocab,
    "ld": cmd_ld,
    "freqbias": cmd_freqbias,
    "signif": cmd_signif,
    "variants": cmd_variants,
    "report": cmd_report,
    "synth": cmd_synth,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (LexbiasError, OSError, ValueError) as exc:
        print(f"lexbias {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
