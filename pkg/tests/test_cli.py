"""End-to-end CLI runs: reports, manifest stamps, exit codes."""

import csv
import io
import json

import pytest

from tokequity.cli import main
from tokequity.judge import (
    BINARY_COT_SYSTEM_PROMPT,
    BINARY_ZERO_SHOT_SYSTEM_PROMPT,
    SCALE_SYSTEM_PROMPT,
    ChatRequest,
    judge_user_content,
    request_hash,
    translate_system_prompt,
)
from tokequity.judge.mock import MockChatServer
from tokequity.premium import load_parallel_corpus
from tokequity.tokenizer import builtin_table, encode

MODEL = "test-model"

ROSTER = (
    "taq",
    "kbp",
    "nus",
    "shn",
    "sat",
    "ory",
    "hin",
    "ben",
    "urd",
    "zho",
    "spa",
    "arb",
)


def write_config(path, corpus_dir, demographics_dir, *, tokenizers=("cl100k_base",), extra=""):
    names = ", ".join(f'"{name}"' for name in tokenizers)
    path.write_text(
        f'[corpus]\ndir = "{corpus_dir}"\n\n'
        f"[tokenizers]\nnames = [{names}]\n\n"
        f'[demographics]\ndir = "{demographics_dir}"\n' + extra,
        encoding="utf-8",
    )
    return path


@pytest.fixture()
def config(tmp_path, corpus_dir, demographics_dir):
    return write_config(tmp_path / "run.toml", corpus_dir, demographics_dir)


def read_stamped_csv(path):
    """Split a stamped report into (hash, rows)."""
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# manifest: ")
    stamp = lines[0].removeprefix("# manifest: ")
    return stamp, list(csv.reader(io.StringIO("\n".join(lines[1:]))))


class TestTokenize:
    def test_prints_token_ids(self, capsys):
        assert main(["tokenize", "Hello world"]) == 0
        printed = capsys.readouterr().out.strip()
        expected = encode("Hello world", builtin_table("cl100k_base")).ids
        assert printed == " ".join(str(i) for i in expected)

    def test_count_flag(self, capsys):
        assert main(["tokenize", "Hello world", "--count"]) == 0
        printed = capsys.readouterr().out.strip()
        assert printed == str(len(encode("Hello world", builtin_table("cl100k_base")).ids))

    def test_reads_file(self, tmp_path, capsys):
        source = tmp_path / "text.txt"
        source.write_text("Hello world", encoding="utf-8")
        assert main(["tokenize", "--file", str(source), "--count"]) == 0
        assert capsys.readouterr().out.strip() == "2"

    def test_reads_stdin(self, monkeypatch, capsys):
        monkeypatch.setattr("sys.stdin", io.StringIO("Hello world"))
        assert main(["tokenize", "--count"]) == 0
        assert capsys.readouterr().out.strip() == "2"

    def test_text_and_file_conflict(self, tmp_path, capsys):
        source = tmp_path / "text.txt"
        source.write_text("x", encoding="utf-8")
        assert main(["tokenize", "text", "--file", str(source)]) == 2
        assert "not both" in capsys.readouterr().err

    def test_unknown_vocabulary(self, capsys):
        assert main(["tokenize", "hi", "-v", "nope"]) == 2
        assert "manifest" in capsys.readouterr().err


class TestPremiumCommand:
    def test_reports_and_stamp(self, tmp_path, corpus_dir, demographics_dir):
        cfg = write_config(
            tmp_path / "run.toml",
            corpus_dir,
            demographics_dir,
            tokenizers=("cl100k_base", "o200k_base"),
        )
        out = tmp_path / "out"
        assert main(["--config", str(cfg), "--out", str(out), "premium"]) == 0
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        stamp, rows = read_stamped_csv(out / "premium.csv")
        assert stamp == manifest["content_hash"]
        assert rows[0] == [
            "language",
            "tokenizer",
            "total_tokens",
            "premium",
            "premium_change_pct",
        ]
        eng = [r for r in rows if r[0] == "eng" and r[1] == "cl100k_base"]
        assert eng[0][3] == "1.0000"

        payload = json.loads(
            (out / "premium_cl100k_base.json").read_text(encoding="utf-8")
        )
        assert payload["manifest_hash"] == manifest["content_hash"]
        assert payload["premiums"]["eng"] == 1.0

        _, change_rows = read_stamped_csv(out / "premium_change.csv")
        assert change_rows[0] == [
            "language",
            "cl100k_base",
            "o200k_base",
            "change_pct_o200k_base",
        ]
        hin = [r for r in change_rows if r[0] == "hin"][0]
        assert float(hin[3]) == pytest.approx(-68.83, abs=0.01)

    def test_single_vocabulary_skips_change_report(self, config, tmp_path):
        out = tmp_path / "out"
        assert main(["--config", str(config), "--out", str(out), "premium"]) == 0
        assert not (out / "premium_change.csv").exists()

    def test_repeat_runs_are_byte_identical(self, config, tmp_path):
        first, second = tmp_path / "a", tmp_path / "b"
        assert main(["--config", str(config), "--out", str(first), "premium"]) == 0
        assert main(["--config", str(config), "--out", str(second), "premium"]) == 0
        assert (first / "premium.csv").read_bytes() == (
            second / "premium.csv"
        ).read_bytes()
        assert (first / "manifest.json").read_bytes() == (
            second / "manifest.json"
        ).read_bytes()


@pytest.fixture(scope="module")
def impact_out(tmp_path_factory, corpus_dir, demographics_dir):
    tmp = tmp_path_factory.mktemp("impact-cli")
    cfg = write_config(tmp / "run.toml", corpus_dir, demographics_dir)
    out = tmp / "out"
    assert main(["--config", str(cfg), "--out", str(out), "impact"]) == 0
    return out


class TestImpactCommand:
    def test_matrix_stamped_and_complete(self, impact_out):
        manifest = json.loads((impact_out / "manifest.json").read_text(encoding="utf-8"))
        stamp, rows = read_stamped_csv(impact_out / "impact.csv")
        assert stamp == manifest["content_hash"]
        assert len(rows) == 33

    def test_lower_middle_band_population(self, impact_out):
        _, rows = read_stamped_csv(impact_out / "impact.csv")
        cell = [r for r in rows if r[0] == "LowerMiddle" and r[1] == "(4,6]"][0]
        assert cell[2] == "1239101000.00"

    def test_residuals_report(self, impact_out):
        payload = json.loads(
            (impact_out / "impact_residuals.json").read_text(encoding="utf-8")
        )
        assert payload["orphans"] == []
        # one corpus language is spoken in a country with no indicator data
        assert payload["unattributed_population"] == 25600000.0

    def test_profiles_report(self, impact_out):
        _, rows = read_stamped_csv(impact_out / "profiles.csv")
        assert rows[0][:4] == [
            "language",
            "total_speakers",
            "weighted_gdp",
            "wealth_class",
        ]
        arb = [r for r in rows if r[0] == "arb"][0]
        assert arb[1] == "337375031.60"
        assert arb[3] == "UpperMiddle"

    def test_plot_data_stamped(self, impact_out):
        payload = json.loads((impact_out / "impact_plot.json").read_text(encoding="utf-8"))
        manifest = json.loads((impact_out / "manifest.json").read_text(encoding="utf-8"))
        assert payload["manifest_hash"] == manifest["content_hash"]
        assert len(payload["series"]) == 4


class TestSelectCommand:
    def test_derived_roster(self, config, tmp_path):
        out = tmp_path / "out"
        assert main(["--config", str(config), "--out", str(out), "select"]) == 0
        _, rows = read_stamped_csv(out / "selection.csv")
        assert tuple(r[0] for r in rows[1:]) == ROSTER


class TestConfigValidation:
    def test_unknown_key_rejected(self, tmp_path, corpus_dir, demographics_dir, capsys):
        cfg = write_config(
            tmp_path / "run.toml", corpus_dir, demographics_dir, extra="\n[corpus2]\nx = 1\n"
        )
        assert main(["--config", str(cfg), "premium"]) == 2
        assert "unknown" in capsys.readouterr().err

    def test_unknown_impact_mode_rejected(
        self, tmp_path, corpus_dir, demographics_dir, capsys
    ):
        cfg = write_config(
            tmp_path / "run.toml",
            corpus_dir,
            demographics_dir,
            extra='\n[impact]\nmode = "by-planet"\n',
        )
        assert main(["--config", str(cfg), "impact"]) == 2
        assert "by-planet" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["--config", str(tmp_path / "nope.toml"), "premium"]) == 2
        assert "not found" in capsys.readouterr().err

    def test_missing_corpus_dir(self, tmp_path, demographics_dir, capsys):
        cfg = write_config(
            tmp_path / "run.toml", tmp_path / "absent", demographics_dir
        )
        assert main(["--config", str(cfg), "--out", str(tmp_path / "o"), "premium"]) == 2
        assert "corpus directory" in capsys.readouterr().err

    def test_missing_corpus_language_is_data_gap(
        self, tmp_path, corpus_dir, demographics_dir, capsys
    ):
        cfg = tmp_path / "run.toml"
        cfg.write_text(
            f'[corpus]\ndir = "{corpus_dir}"\nlanguages = ["eng", "zzz"]\n\n'
            '[tokenizers]\nnames = ["cl100k_base"]\n\n'
            f'[demographics]\ndir = "{demographics_dir}"\n',
            encoding="utf-8",
        )
        assert main(["--config", str(cfg), "--out", str(tmp_path / "o"), "premium"]) == 3
        assert "zzz" in capsys.readouterr().err

    def test_judge_without_section(self, config, tmp_path, capsys):
        assert main(["--config", str(config), "--out", str(tmp_path / "o"), "judge"]) == 2
        assert "[judge]" in capsys.readouterr().err


def judge_script(corpus, languages, names, limit=2):
    """Scripted fixture: even sentences come back faithful, odd ones broken."""
    fixture = {}
    originals = corpus.sentences_for("eng")[:limit]
    for language in languages:
        name = names[language]
        sources = corpus.sentences_for(language)[:limit]
        for index, (original, source) in enumerate(zip(originals, sources)):
            good = index % 2 == 0
            translation = original if good else "Something else entirely."
            reply = f"English: {translation}"
            fixture[
                request_hash(
                    ChatRequest(MODEL, translate_system_prompt(name), source)
                )
            ] = reply
            content = judge_user_content(original, translation)
            binary = "Rating: CORRECT" if good else "Rating: INCORRECT"
            scale = "Rating: Excellent" if good else "Rating: Good"
            for prompt, response in (
                (BINARY_ZERO_SHOT_SYSTEM_PROMPT, binary),
                (BINARY_COT_SYSTEM_PROMPT, f"Checked the details. {binary}"),
                (SCALE_SYSTEM_PROMPT, scale),
            ):
                fixture[
                    request_hash(ChatRequest(MODEL, prompt, content))
                ] = response
    return fixture


NAMES = {"fra": "French", "hin": "Hindi"}


def judge_config(tmp_path, corpus_dir, demographics_dir, endpoint, filename="judge.toml"):
    extra = (
        "\n[judge]\n"
        f'endpoint = "{endpoint}"\n'
        f'model = "{MODEL}"\n'
        'languages = ["fra", "hin"]\n'
        "max_sentences = 2\n"
        "max_retries = 0\n"
        "backoff = 0.0\n"
    )
    return write_config(
        tmp_path / filename, corpus_dir, demographics_dir, extra=extra
    )


class TestJudgeCommand:
    @pytest.fixture()
    def fixture(self, corpus_dir):
        corpus = load_parallel_corpus(corpus_dir)
        return judge_script(corpus, ("fra", "hin"), NAMES)

    def test_accuracy_and_concordance(
        self, tmp_path, corpus_dir, demographics_dir, fixture, monkeypatch
    ):
        monkeypatch.delenv("TOKEQUITY_API_KEY", raising=False)
        with MockChatServer(fixture) as server:
            cfg = judge_config(tmp_path, corpus_dir, demographics_dir, server.url)
            out = tmp_path / "out"
            assert main(["--config", str(cfg), "--out", str(out), "judge"]) == 0
            assert server.unknown == []

        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        stamp, rows = read_stamped_csv(out / "accuracy.csv")
        assert stamp == manifest["content_hash"]
        for language in ("fra", "hin"):
            for mode in ("zero_shot", "chain_of_thought"):
                row = [r for r in rows if r[0] == language and r[1] == mode][0]
                assert row[2:7] == ["2", "2", "0", "50.00", "50.00"]

        _, rows = read_stamped_csv(out / "concordance.csv")
        good = [r for r in rows if r[1] == "Good" and r[0] == "zero_shot"][0]
        assert good[2:] == ["2", "100.00", "0.00"]
        excellent = [r for r in rows if r[1] == "Excellent" and r[0] == "zero_shot"][0]
        assert excellent[2:] == ["2", "0.00", "100.00"]
        poor = [r for r in rows if r[1] == "Poor" and r[0] == "zero_shot"][0]
        assert poor[2:] == ["0", "-", "-"]

        log = (out / "judge_log.jsonl").read_text(encoding="utf-8").splitlines()
        # 2 languages x 2 sentences x 4 phases
        assert len(log) == 16

    def test_runs_are_byte_identical(
        self, tmp_path, corpus_dir, demographics_dir, fixture, monkeypatch
    ):
        monkeypatch.delenv("TOKEQUITY_API_KEY", raising=False)
        outs = []
        for run in ("a", "b"):
            with MockChatServer(fixture) as server:
                cfg = judge_config(
                    tmp_path, corpus_dir, demographics_dir, server.url, f"{run}.toml"
                )
                out = tmp_path / run
                assert main(["--config", str(cfg), "--out", str(out), "judge"]) == 0
                outs.append(out)
        first, second = outs
        for name in ("accuracy.csv", "concordance.csv", "manifest.json"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_rejected_credentials_exit_transport(
        self, tmp_path, corpus_dir, demographics_dir, fixture, monkeypatch, capsys
    ):
        monkeypatch.delenv("TOKEQUITY_API_KEY", raising=False)
        with MockChatServer(fixture, require_auth="secret") as server:
            cfg = judge_config(tmp_path, corpus_dir, demographics_dir, server.url)
            assert (
                main(["--config", str(cfg), "--out", str(tmp_path / "out"), "judge"])
                == 4
            )
        assert "credentials" in capsys.readouterr().err

    def test_bearer_token_from_environment(
        self, tmp_path, corpus_dir, demographics_dir, fixture, monkeypatch
    ):
        monkeypatch.setenv("TOKEQUITY_API_KEY", "secret")
        with MockChatServer(fixture, require_auth="secret") as server:
            cfg = judge_config(tmp_path, corpus_dir, demographics_dir, server.url)
            out = tmp_path / "out"
            assert main(["--config", str(cfg), "--out", str(out), "judge"]) == 0
        assert (out / "accuracy.csv").exists()

    def test_unknown_judge_language_rejected(
        self, tmp_path, corpus_dir, demographics_dir, capsys
    ):
        extra = (
            "\n[judge]\n"
            'endpoint = "http://127.0.0.1:9"\n'
            'languages = ["zzz"]\n'
        )
        cfg = write_config(
            tmp_path / "run.toml", corpus_dir, demographics_dir, extra=extra
        )
        assert main(["--config", str(cfg), "--out", str(tmp_path / "o"), "judge"]) == 2
        assert "zzz" in capsys.readouterr().err


class TestReportCommand:
    def test_full_pipeline_without_judge(self, config, tmp_path):
        out = tmp_path / "out"
        assert main(["--config", str(config), "--out", str(out), "report"]) == 0
        for name in (
            "premium.csv",
            "impact.csv",
            "profiles.csv",
            "selection.csv",
            "manifest.json",
        ):
            assert (out / name).exists()
        assert not (out / "accuracy.csv").exists()

    def test_full_pipeline_with_judge(
        self, tmp_path, corpus_dir, demographics_dir, monkeypatch
    ):
        monkeypatch.delenv("TOKEQUITY_API_KEY", raising=False)
        corpus = load_parallel_corpus(corpus_dir)
        fixture = judge_script(corpus, ("fra", "hin"), NAMES)
        with MockChatServer(fixture) as server:
            cfg = judge_config(tmp_path, corpus_dir, demographics_dir, server.url)
            out = tmp_path / "out"
            assert main(["--config", str(cfg), "--out", str(out), "report"]) == 0
        for name in ("premium.csv", "impact.csv", "selection.csv", "accuracy.csv"):
            assert (out / name).exists()
