"""Table rows, CSV/JSON serialization, run manifests and the one-shot report pipeline."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .corpus import DEFAULT_TOKENIZER, TokenizerConfig, load_corpus
from .diversity import MTLD_THRESHOLD
from .freqbias import CLASSES, SYMBOLS, BiasClassConfig, classify_corpora
from .significance import BootstrapConfig, bootstrap_compare
from .stream import analyze_file
from .variants import load_variant_sets, variant_profile

TOOL = "lexbias"

DIVERSITY_COLUMNS = ["label", "yules_i", "ttr_x1000", "mtld", "yules_k", "ttr", "mtld_forward",
                     "mtld_backward", "token_count", "type_count", "sentences", "dropped_lines",
                     "undefined"]
FREQBIAS_COLUMNS = (["label", "measure"] + [SYMBOLS[c] for c in CLASSES]
                    + ["novel_count", "novel_mass", "threshold", "diff_scale"])
VARIANT_COLUMNS = ["source_word", "variant", "corpus_label", "count", "relative_frequency"]
SIGNIF_COLUMNS = ["label_a", "label_b", "metric", "observed_delta", "p_value", "ci_low", "ci_high",
                  "iterations", "seed", "degenerate_samples", "status"]
# written at full precision in CSV too: configuration values, not measurements
_EXACT_FIELDS = {"threshold", "diff_scale", "mtld_threshold", "alpha", "seed"}


def _version():
    from . import __version__
    return __version__


def file_digest(path, block=1 << 20) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        while chunk := fh.read(block):
            h.update(chunk)
    return h.hexdigest()


def _iso(ts):
    return datetime.fromtimestamp(ts, timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def build_manifest(inputs, tokenizer: TokenizerConfig = DEFAULT_TOKENIZER, seeds=None,
                   configs=None, command=None) -> dict:
    """Describe a run so that equal manifests imply byte-identical reports.

    Timestamps are input modification times; a creation time is recorded
    only when ``SOURCE_DATE_EPOCH`` is set, so reruns stay reproducible.
    """
    entries = []
    for label, path in inputs:
        entry = {"label": label, "path": str(path)}
        try:
            entry["sha256"] = file_digest(path)
            entry["bytes"] = os.path.getsize(path)
            entry["modified"] = _iso(os.path.getmtime(path))
        except OSError as exc:
            entry["error"] = str(exc)
        entries.append(entry)
    manifest = {
        "tool": TOOL,
        "version": _version(),
        "command": command,
        "tokenizer": tokenizer.to_dict(),
        "inputs": entries,
        "seeds": dict(seeds or {}),
        "config": dict(configs or {}),
    }
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        manifest["created"] = _iso(int(epoch))
    return manifest


def format_value(key, value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value)) if key in _EXACT_FIELDS else f"{value:.4f}"
    if isinstance(value, dict):
        return ";".join(f"{k}:{v}" for k, v in value.items())
    return str(value)


def to_csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(c, row.get(c)) for c in columns])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def diversity_row(analysis) -> dict:
    r = analysis.report
    return {
        "label": analysis.label,
        "yules_i": r.yules_i,
        "ttr_x1000": r.ttr_scaled,
        "mtld": r.mtld,
        "yules_k": r.yules_k,
        "ttr": r.ttr,
        "mtld_forward": r.mtld_forward,
        "mtld_backward": r.mtld_backward,
        "mtld_threshold": r.mtld_threshold,
        "token_count": r.token_count,
        "type_count": r.type_count,
        "sentences": analysis.sentences,
        "dropped_lines": analysis.dropped_lines,
        "undefined": dict(r.undefined),
    }


def freqbias_rows(bc) -> list[dict]:
    """Counts, normalized counts and accumulated differences as three table rows."""
    common = {
        "label": bc.label,
        "novel_count": bc.novel_count,
        "novel_mass": bc.novel_mass,
        "threshold": bc.threshold,
        "diff_scale": bc.diff_scale,
    }
    rows = []
    for measure, values in (("count", bc.counts), ("count_normalized", bc.normalized_counts),
                            ("acc_diff", bc.acc_diffs)):
        row = dict(common, measure=measure)
        row.update({SYMBOLS[c]: values[c] for c in CLASSES})
        rows.append(row)
    return rows


def variant_rows(profiles) -> list[dict]:
    return [
        dict(zip(VARIANT_COLUMNS, r))
        for p in profiles
        for r in p.rows()
    ]


def signif_row(label_a, label_b, result) -> dict:
    d = result.to_dict()
    d.update(label_a=label_a, label_b=label_b)
    return d


@dataclass
class ReportConfig:
    reference: tuple
    systems: list
    tokenizer: TokenizerConfig = DEFAULT_TOKENIZER
    mtld_threshold: float = MTLD_THRESHOLD
    bias: BiasClassConfig = field(default_factory=BiasClassConfig)
    variants: str | None = None
    significance: BootstrapConfig | None = None

    @classmethod
    def load(cls, path, tokenizer_overrides=None):
        """Read a JSON bundle description; relative paths resolve against its directory."""
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        base = os.path.dirname(os.path.abspath(path))

        def resolve(p):
            return p if os.path.isabs(p) else os.path.join(base, p)

        def entry(item, what):
            if not isinstance(item, dict) or "path" not in item:
                raise ValueError(f"{what} must be an object with 'path' (and optional 'label')")
            p = resolve(item["path"])
            return item.get("label") or os.path.splitext(os.path.basename(p))[0], p

        if "reference" not in data:
            raise ValueError("report config needs a 'reference' entry")
        tok = dict(data.get("tokenizer", {}))
        tok.update({k: v for k, v in (tokenizer_overrides or {}).items() if v})
        sig = data.get("significance")
        labels = [entry(data["reference"], "reference")[0]]
        systems = [entry(s, "systems entry") for s in data.get("systems", [])]
        labels += [s[0] for s in systems]
        if len(set(labels)) != len(labels):
            raise ValueError(f"labels must be unique, got {labels}")
        return cls(
            reference=entry(data["reference"], "reference"),
            systems=systems,
            tokenizer=TokenizerConfig(**tok),
            mtld_threshold=float(data.get("mtld_threshold", MTLD_THRESHOLD)),
            bias=BiasClassConfig(diff_scale=float(data.get("diff_scale", 1e4))),
            variants=resolve(data["variants"]) if data.get("variants") else None,
            significance=BootstrapConfig(**sig) if sig else None,
        )


def run_report(config: ReportConfig, out_dir) -> int:
    """Analyze the reference and every system, writing all tables into ``out_dir``.

    Returns 0 when every analysis succeeded and 1 if any input failed; failed
    inputs appear as rows carrying an ``error`` field.
    """
    os.makedirs(out_dir, exist_ok=True)
    inputs = [config.reference] + list(config.systems)
    failed = False
    analyses = {}
    div_rows = []
    for label, path in inputs:
        try:
            analyses[label] = analyze_file(path, config.tokenizer, label, config.mtld_threshold)
            div_rows.append(diversity_row(analyses[label]))
        except Exception as exc:  # one unreadable input must not sink the bundle
            failed = True
            div_rows.append({"label": label, "error": f"{type(exc).__name__}: {exc}"})

    ref_label = config.reference[0]
    bias_json, bias_csv = [], []
    for label, _ in config.systems:
        if ref_label not in analyses or label not in analyses:
            failed = True
            missing = ref_label if ref_label not in analyses else label
            bias_json.append({"label": label, "error": f"input {missing!r} could not be analyzed"})
            bias_csv.append({"label": label, "measure": "error"})
            continue
        bc = classify_corpora(analyses[ref_label].profile, analyses[label].profile, config.bias,
                              label)
        bias_json.append(bc.to_dict())
        bias_csv.extend(freqbias_rows(bc))

    seeds = {}
    configs = {
        "mtld_threshold": config.mtld_threshold,
        "bias": config.bias.to_dict(),
    }
    written = {}
    div_columns = DIVERSITY_COLUMNS + ["error"]
    written["diversity.json"] = to_json({"rows": div_rows, "manifest": "manifest.json"})
    written["diversity.csv"] = to_csv(div_rows, div_columns)
    written["freqbias.json"] = to_json({"reference": ref_label, "rows": bias_json,
                                        "manifest": "manifest.json"})
    written["freqbias.csv"] = to_csv(bias_csv, FREQBIAS_COLUMNS)

    if config.variants:
        sets = load_variant_sets(config.variants)
        sources = [analyses[label].profile for label, _ in inputs if label in analyses]
        profiles = [variant_profile(sources, vs.normalized(config.tokenizer)) for vs in sets]
        written["variants.json"] = to_json({"profiles": [p.to_dict() for p in profiles],
                                            "manifest": "manifest.json"})
        written["variants.csv"] = to_csv(variant_rows(profiles), VARIANT_COLUMNS)
        configs["variants"] = config.variants

    if config.significance:
        sig = config.significance
        seeds["bootstrap"] = sig.seed
        configs["significance"] = {"metric": sig.metric, "iterations": sig.iterations,
                                   "alpha": sig.alpha}
        rows = []
        try:
            ref = load_corpus(config.reference[1], config.tokenizer, ref_label)
        except Exception as exc:
            ref = None
            ref_error = f"{type(exc).__name__}: {exc}"
        for label, path in config.systems:
            try:
                if ref is None:
                    raise RuntimeError(ref_error)
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    res = bootstrap_compare(load_corpus(path, config.tokenizer, label), ref, sig)
                rows.append(signif_row(label, ref_label, res))
            except Exception as exc:
                failed = True
                rows.append({"label_a": label, "label_b": ref_label, "status": "error",
                             "error": f"{type(exc).__name__}: {exc}"})
        written["significance.json"] = to_json({"rows": rows, "manifest": "manifest.json"})
        written["significance.csv"] = to_csv(rows, SIGNIF_COLUMNS)

    manifest = build_manifest(inputs, config.tokenizer, seeds, configs, "report")
    manifest["outputs"] = {name: hashlib.sha256(text.encode("utf-8")).hexdigest()
                           for name, text in written.items()}
    written["manifest.json"] = to_json(manifest)
    for name, text in written.items():
        with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 1 if failed else 0
