"""Command-line pipeline: tokenize, premium, impact, select, judge, report.

Each subcommand reads the TOML config, emits its reports under the output
directory, and stamps every report with the run manifest's content hash.
Exit codes: 0 on success, 2 for validation problems, 3 for data gaps, 4
for transport failures.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Mapping

import click

from . import __version__
from .config import JudgeConfig, RunConfig, load_config
from .demographics import IncomeClass, build_profiles, load_snapshot
from .errors import ToolkitError, ValidationError
from .impact import (
    population_distribution,
    write_impact_report,
    write_plot_data,
)
from .judge import (
    ChatClient,
    JudgeRunner,
    RunLog,
    accuracy_table,
    concordance,
    run_backtranslation,
    write_accuracy_report,
    write_concordance_report,
)
from .manifest import RunManifest, directory_digests, prepend_stamp, sha256_file
from .premium import (
    ParallelCorpus,
    load_parallel_corpus,
    premium_change,
    premium_table,
    premium_vs_english,
    write_premium_report,
)
from .selection import select_languages, write_selection_report
from .tokenizer import (
    BUILTIN_VOCABULARIES,
    VocabularyTable,
    builtin_manifest_path,
    builtin_table,
    encode,
    load_manifest,
)


class _State:
    def __init__(self, config_path: str | None, out_dir: str, seed: int | None):
        self.config = load_config(config_path)
        self.out = Path(out_dir)
        self.seed = seed
        self._tables: dict[str, VocabularyTable] | None = None
        self._corpus: ParallelCorpus | None = None

    def tables(self) -> dict[str, VocabularyTable]:
        if self._tables is None:
            tables: dict[str, VocabularyTable] = {}
            for entry in self.config.tokenizers:
                table = _resolve_table(entry)
                if table.name in tables:
                    raise ValidationError(f"vocabulary {table.name!r} listed twice")
                tables[table.name] = table
            self._tables = tables
        return self._tables

    def corpus(self) -> ParallelCorpus:
        if self._corpus is None:
            cfg = self.config.corpus
            self._corpus = load_parallel_corpus(
                cfg.dir, split=cfg.split, languages=cfg.languages
            )
        return self._corpus

    def impact_table(self) -> VocabularyTable:
        tables = self.tables()
        wanted = self.config.impact_vocabulary
        if wanted is None:
            return next(iter(tables.values()))
        if wanted not in tables:
            raise ValidationError(
                f"impact vocabulary {wanted!r} is not among the configured "
                f"tokenizers ({', '.join(tables)})"
            )
        return tables[wanted]

    def profiles(self):
        speakers, series = load_snapshot(self.config.demographics_dir)
        return build_profiles(speakers, series), series

    def manifest(self) -> RunManifest:
        config = self.config
        corpus_cfg = config.corpus
        sections = {
            "tool": {"name": "tokequity", "version": __version__},
            "corpus": {
                "path": str(corpus_cfg.dir),
                "split": corpus_cfg.split,
                "languages": sorted(corpus_cfg.languages)
                if corpus_cfg.languages
                else None,
                "files": directory_digests(corpus_cfg.dir, f"*.{corpus_cfg.split}"),
            },
            "tokenizers": {
                name: _vocabulary_identity(entry)
                for entry, name in zip(config.tokenizers, self.tables())
            },
            "demographics": {
                "path": str(config.demographics_dir),
                "files": directory_digests(config.demographics_dir, "*.csv"),
            }
            if config.demographics_dir.is_dir()
            else None,
            "impact": {
                "mode": config.impact_mode,
                "vocabulary": self.impact_table().name,
            },
            "select": {
                "per_tier": config.select.per_tier,
                "global_top": config.select.global_top,
                "premium_floor": config.select.premium_floor,
            },
            # transport endpoints are deliberately absent: the same run can
            # be routed through different hosts without changing its meaning
            "judge": {
                "model": config.judge.model,
                "judge_model": config.judge.judge_model or config.judge.model,
                "temperature": 0.0,
                "max_sentences": config.judge.max_sentences,
                "languages": sorted(config.judge.languages)
                if config.judge.languages
                else None,
            }
            if config.judge
            else None,
            "decisions": {
                "aggregate_premium": "totals-ratio",
                "sentence_processing": "raw",
                "premium_reference": "eng",
                "judge_user_template": "Original: <original>\nTranslation: <translation>",
            },
            "seed": self.seed,
        }
        return RunManifest(sections=sections)


def _resolve_table(entry: str) -> VocabularyTable:
    if entry in BUILTIN_VOCABULARIES:
        return builtin_table(entry)
    return load_manifest(entry)


def _vocabulary_identity(entry: str) -> dict:
    if entry in BUILTIN_VOCABULARIES:
        manifest_path = builtin_manifest_path(entry)
        source = f"builtin:{entry}"
    else:
        manifest_path = Path(entry)
        source = str(manifest_path)
    spec = json.loads(manifest_path.read_text("utf-8"))
    vocab_path = manifest_path.parent / spec["vocabulary"]
    return {
        "source": source,
        "manifest_sha256": sha256_file(manifest_path),
        "vocabulary_sha256": sha256_file(vocab_path),
    }


def _write_json(payload: dict, path: Path, manifest: RunManifest) -> None:
    payload = dict(payload)
    payload["manifest_hash"] = manifest.content_hash
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
        encoding="utf-8",
    )


@click.group(name="tokequity")
@click.version_option(version=__version__)
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="TOML run configuration; defaults apply without one.",
)
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False),
    default="out",
    show_default=True,
    help="Directory for emitted reports.",
)
@click.option("--seed", type=int, default=None, help="Seed recorded for any sampling.")
@click.pass_context
def cli(ctx: click.Context, config_path: str | None, out_dir: str, seed: int | None):
    """Measure tokenization premiums and what they cost, end to end."""
    ctx.obj = _State(config_path, out_dir, seed)


@cli.command()
@click.argument("text", required=False)
@click.option(
    "--vocabulary",
    "-v",
    default="cl100k_base",
    show_default=True,
    help="Bundled vocabulary name or a manifest path.",
)
@click.option("--file", "-f", "file_path", type=click.Path(dir_okay=False), default=None)
@click.option("--count", is_flag=True, help="Print only the token count.")
@click.pass_obj
def tokenize(state: _State, text: str | None, vocabulary: str, file_path: str | None, count: bool):
    """Tokenize TEXT (or --file, or stdin) and print token ids."""
    if text is not None and file_path is not None:
        raise ValidationError("pass TEXT or --file, not both")
    if file_path is not None:
        text = Path(file_path).read_text(encoding="utf-8")
    elif text is None:
        text = sys.stdin.read()
    table = _resolve_table(vocabulary)
    sequence = encode(text, table)
    if count:
        click.echo(str(len(sequence.ids)))
    else:
        click.echo(" ".join(str(i) for i in sequence.ids))


def _run_premium(state: _State) -> Path:
    corpus = state.corpus()
    tables = state.tables()
    manifest = state.manifest()
    records = premium_table(corpus, tables)

    out = state.out
    report = out / "premium.csv"
    write_premium_report(records, report)
    prepend_stamp(report, manifest)

    by_vocab: dict[str, dict[str, float]] = {}
    for record in records:
        by_vocab.setdefault(record.tokenizer, {})[record.language] = record.premium
    for name, premiums in by_vocab.items():
        _write_json(
            {"vocabulary": name, "premiums": premiums},
            out / f"premium_{name}.json",
            manifest,
        )

    names = list(tables)
    if len(names) >= 2:
        change_path = out / "premium_change.csv"
        with change_path.open("w", encoding="utf-8", newline="") as handle:
            header = ["language", *names, *(f"change_pct_{n}" for n in names[1:])]
            handle.write(",".join(header) + "\n")
            for language in corpus.languages:
                row = [language]
                base = by_vocab[names[0]][language]
                row.extend(f"{by_vocab[n][language]:.4f}" for n in names)
                row.extend(
                    f"{premium_change(base, by_vocab[n][language]):.2f}"
                    for n in names[1:]
                )
                handle.write(",".join(row) + "\n")
        prepend_stamp(change_path, manifest)
    manifest.write(out / "manifest.json")
    return report


@cli.command("premium")
@click.pass_obj
def cmd_premium(state: _State):
    """Premium report per language and vocabulary, plus change columns."""
    report = _run_premium(state)
    click.echo(f"wrote {report}")


def _impact_inputs(state: _State):
    corpus = state.corpus()
    table = state.impact_table()
    records = [
        premium_vs_english(corpus, language, table) for language in corpus.languages
    ]
    profiles, series = state.profiles()
    return records, profiles, series


def _run_impact(state: _State) -> Path:
    records, profiles, series = _impact_inputs(state)
    manifest = state.manifest()
    class_of_country = {name: s.income_class for name, s in series.items()}
    result = population_distribution(
        profiles,
        records,
        mode=state.config.impact_mode,
        class_of_country=class_of_country,
    )

    out = state.out
    report = out / "impact.csv"
    write_impact_report(result, report)
    prepend_stamp(report, manifest)
    write_plot_data(result, out / "impact_plot.json")
    _stamp_json(out / "impact_plot.json", manifest)
    _write_json(
        {
            "orphans": list(result.orphans),
            "unattributed_population": result.unattributed_population,
        },
        out / "impact_residuals.json",
        manifest,
    )

    profiles_path = out / "profiles.csv"
    with profiles_path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(
            "language,total_speakers,weighted_gdp,wealth_class,"
            "share_low,share_lower_middle,share_upper_middle,share_high\n"
        )
        for language in sorted(profiles):
            profile = profiles[language]
            vector = profile.income_vector
            shares = (
                [f"{vector[cls]:.6f}" for cls in IncomeClass]
                if vector is not None
                else ["", "", "", ""]
            )
            handle.write(
                ",".join(
                    [
                        language,
                        f"{profile.total_speakers:.2f}",
                        f"{profile.weighted_gdp:.2f}"
                        if profile.weighted_gdp is not None
                        else "",
                        profile.wealth_class.value if profile.wealth_class else "",
                        *shares,
                    ]
                )
                + "\n"
            )
    prepend_stamp(profiles_path, manifest)
    manifest.write(out / "manifest.json")
    return report


def _stamp_json(path: Path, manifest: RunManifest) -> None:
    payload = json.loads(path.read_text(encoding="utf-8"))
    _write_json(payload, path, manifest)


@cli.command("impact")
@click.pass_obj
def cmd_impact(state: _State):
    """Population-by-premium-band matrix, profiles, and residual report."""
    report = _run_impact(state)
    click.echo(f"wrote {report}")


def _run_select(state: _State) -> Path:
    records, profiles, _ = _impact_inputs(state)
    cfg = state.config.select
    result = select_languages(
        profiles,
        records,
        per_tier=cfg.per_tier,
        global_top=cfg.global_top,
        premium_floor=cfg.premium_floor,
    )
    manifest = state.manifest()
    out = state.out
    report = out / "selection.csv"
    write_selection_report(result, report)
    prepend_stamp(report, manifest)
    manifest.write(out / "manifest.json")
    return report


@cli.command("select")
@click.pass_obj
def cmd_select(state: _State):
    """Derive the evaluation language set from the tiered rules."""
    report = _run_select(state)
    click.echo(f"wrote {report}")


def _judge_languages(state: _State, judge_cfg: JudgeConfig) -> list[str]:
    if judge_cfg.languages is not None:
        return list(judge_cfg.languages)
    records, profiles, _ = _impact_inputs(state)
    cfg = state.config.select
    result = select_languages(
        profiles,
        records,
        per_tier=cfg.per_tier,
        global_top=cfg.global_top,
        premium_floor=cfg.premium_floor,
    )
    return list(result.languages)


def _run_judge(state: _State) -> Path:
    judge_cfg = state.config.judge
    if judge_cfg is None:
        raise ValidationError("config has no [judge] section")
    corpus = state.corpus()
    manifest = state.manifest()
    languages = _judge_languages(state, judge_cfg)
    missing = [l for l in languages if l not in corpus.sentences]
    if missing:
        raise ValidationError(
            f"judge languages not in corpus: {', '.join(missing)}"
        )

    limit = judge_cfg.max_sentences
    originals = list(corpus.sentences_for("eng"))[:limit]
    sentences_by_language = {
        language: list(corpus.sentences_for(language))[:limit]
        for language in languages
    }

    client = ChatClient(
        judge_cfg.endpoint,
        judge_cfg.model,
        max_retries=judge_cfg.max_retries,
        backoff=judge_cfg.backoff,
    )
    judge_client = ChatClient(
        judge_cfg.endpoint,
        judge_cfg.judge_model or judge_cfg.model,
        max_retries=judge_cfg.max_retries,
        backoff=judge_cfg.backoff,
    )
    log_path = Path(judge_cfg.log)
    if not log_path.is_absolute():
        log_path = state.out / log_path
    runner = JudgeRunner(
        client,
        RunLog(log_path),
        judge_client=judge_client,
        concurrency=judge_cfg.concurrency,
    )
    names = {language: judge_cfg.name_of(language) for language in languages}
    verdicts = run_backtranslation(
        runner, sentences_by_language, originals, names, languages
    )

    out = state.out
    accuracy_path = out / "accuracy.csv"
    write_accuracy_report(accuracy_table(verdicts), accuracy_path)
    prepend_stamp(accuracy_path, manifest)
    concordance_path = out / "concordance.csv"
    all_verdicts = [v for language in sorted(verdicts) for v in verdicts[language]]
    write_concordance_report(concordance(all_verdicts), concordance_path)
    prepend_stamp(concordance_path, manifest)
    manifest.write(out / "manifest.json")
    return accuracy_path


@cli.command("judge")
@click.pass_obj
def cmd_judge(state: _State):
    """Back-translate and score with the configured judge endpoint."""
    report = _run_judge(state)
    click.echo(f"wrote {report}")


@cli.command("report")
@click.pass_obj
def cmd_report(state: _State):
    """Run the full pipeline: premium, impact, select, and judge if configured."""
    _run_premium(state)
    _run_impact(state)
    _run_select(state)
    if state.config.judge is not None:
        _run_judge(state)
    click.echo(f"wrote reports under {state.out}")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except ToolkitError as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 2
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
